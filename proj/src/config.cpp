#include "flowlab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace flowlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

class ValueParser {
 public:
  ValueParser(std::string text, int line) : text_(std::move(text)), line_(line) {}

  TomlValue parse() {
    TomlValue v = parse_value();
    skip_space();
    if (pos_ != text_.size()) {
      throw ConfigError("trailing characters after value", line_);
    }
    return v;
  }

 private:
  std::string text_;
  int line_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  TomlValue parse_value() {
    skip_space();
    if (pos_ >= text_.size()) throw ConfigError("missing value", line_);
    const char c = text_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    if (text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return TomlValue{TomlValue::Kind::boolean, 0.0, "", true, {}, line_};
    }
    if (text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return TomlValue{TomlValue::Kind::boolean, 0.0, "", false, {}, line_};
    }
    return parse_number();
  }

  TomlValue parse_array() {
    ++pos_;  // '['
    TomlValue v;
    v.kind = TomlValue::Kind::array;
    v.line = line_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.array.push_back(parse_value());
      skip_space();
      if (pos_ >= text_.size()) throw ConfigError("unterminated array", line_);
      if (text_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {  // trailing comma
          ++pos_;
          return v;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      throw ConfigError("expected ',' or ']' in array", line_);
    }
  }

  TomlValue parse_string() {
    ++pos_;  // opening quote
    std::string s;
    while (pos_ < text_.size() && text_[pos_] != '"') s.push_back(text_[pos_++]);
    if (pos_ >= text_.size()) throw ConfigError("unterminated string", line_);
    ++pos_;  // closing quote
    return TomlValue{TomlValue::Kind::string, 0.0, std::move(s), false, {}, line_};
  }

  TomlValue parse_number() {
    std::size_t end = pos_;
    while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) &&
           text_[end] != ',' && text_[end] != ']') {
      ++end;
    }
    const std::string token = text_.substr(pos_, end - pos_);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ConfigError("cannot parse value '" + token + "'", line_);
    }
    pos_ = end;
    return TomlValue{TomlValue::Kind::number, value, "", false, {}, line_};
  }
};

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (char c : s) {
    if (c == '"') in_string = !in_string;
    if (in_string) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

double expect_number(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::number) {
    throw ConfigError("key '" + key + "' expects a number", v.line);
  }
  return v.number;
}

std::string expect_string(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::string) {
    throw ConfigError("key '" + key + "' expects a string", v.line);
  }
  return v.text;
}

std::vector<double> expect_number_array(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::array) {
    throw ConfigError("key '" + key + "' expects an array", v.line);
  }
  std::vector<double> out;
  out.reserve(v.array.size());
  for (const auto& e : v.array) out.push_back(expect_number(e, key));
  return out;
}

std::vector<std::vector<double>> expect_matrix(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::array) {
    throw ConfigError("key '" + key + "' expects an array of arrays", v.line);
  }
  std::vector<std::vector<double>> out;
  for (const auto& row : v.array) out.push_back(expect_number_array(row, key));
  return out;
}

std::size_t expect_count(const TomlValue& v, const std::string& key) {
  const double n = expect_number(v, key);
  if (n < 0 || n != static_cast<double>(static_cast<std::size_t>(n))) {
    throw ConfigError("key '" + key + "' expects a non-negative integer", v.line);
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error("config error (line " + std::to_string(line) + "): " + message),
      line_(line) {}

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const int start_line = line_no;
    std::string line = strip_comment(raw);
    // Arrays may continue across lines until brackets balance.
    while (bracket_balance(line) > 0) {
      std::string more;
      if (!std::getline(in, more)) throw ConfigError("unterminated array", start_line);
      ++line_no;
      line += " " + strip_comment(more);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", start_line);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", start_line);
      table[section];  // sections may be empty
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", start_line);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", start_line);
    if (section.empty()) throw ConfigError("key outside of any [section]", start_line);
    if (table[section].count(key)) throw ConfigError("duplicate key '" + key + "'", start_line);

    ValueParser parser(line.substr(eq + 1), start_line);
    table[section][key] = parser.parse();
  }
  return table;
}

GmmSpec LabConfig::build_target() const {
  if (means.empty()) throw std::invalid_argument("config: target needs at least one mean");
  const std::size_t d = means.front().size();
  std::vector<GaussianSpec> comps;
  comps.reserve(means.size());
  for (std::size_t k = 0; k < means.size(); ++k) {
    Tensor mean = Tensor::row(means[k]);
    if (!covs.empty()) {
      if (covs.size() != means.size()) {
        throw std::invalid_argument("config: covs must match means");
      }
      std::vector<double> flat;
      for (const auto& row : covs[k]) flat.insert(flat.end(), row.begin(), row.end());
      comps.emplace_back(std::move(mean), Tensor({d, d}, std::move(flat)));
    } else {
      const double s = sigmas.size() == 1 ? sigmas.front() : sigmas.at(k);
      comps.emplace_back(GaussianSpec::isotropic(std::move(mean), s));
    }
  }
  return GmmSpec(weights, std::move(comps));
}

ExperimentSpec LabConfig::build_experiment() const {
  ExperimentSpec spec{build_target(), degradation, Tensor::row(mask),
                      methods,        seeds,       sampler,
                      n_samples,      n_eval,      n_proj};
  spec.validate();
  return spec;
}

LabConfig config_from_toml(const TomlTable& table) {
  LabConfig cfg;
  for (const auto& [section, entries] : table) {
    if (section == "target") {
      bool sigmas_set = false;
      for (const auto& [key, value] : entries) {
        if (key == "weights") {
          cfg.weights = expect_number_array(value, key);
        } else if (key == "means") {
          cfg.means = expect_matrix(value, key);
        } else if (key == "sigmas") {
          cfg.sigmas = expect_number_array(value, key);
          sigmas_set = true;
        } else if (key == "covs") {
          if (value.kind != TomlValue::Kind::array) {
            throw ConfigError("key 'covs' expects an array of matrices", value.line);
          }
          cfg.covs.clear();
          for (const auto& m : value.array) cfg.covs.push_back(expect_matrix(m, key));
        } else {
          throw ConfigError("unknown key '" + key + "' in [target]", value.line);
        }
      }
      if (sigmas_set) cfg.covs.clear();
    } else if (section == "degradation") {
      cfg.degradation = Degradation{};
      for (const auto& [key, value] : entries) {
        if (key == "shift") {
          cfg.degradation.shift = Tensor::row(expect_number_array(value, key));
        } else if (key == "blur_cutoff") {
          cfg.degradation.blur_cutoff = expect_number(value, key);
        } else if (key == "mode_collapse") {
          cfg.degradation.mode_collapse = expect_count(value, key);
        } else {
          throw ConfigError("unknown key '" + key + "' in [degradation]", value.line);
        }
      }
    } else if (section == "sampler") {
      for (const auto& [key, value] : entries) {
        if (key == "method") {
          cfg.sampler.method = method_from_string(expect_string(value, key));
        } else if (key == "t0") {
          cfg.sampler.t0 = expect_number(value, key);
        } else if (key == "steps") {
          cfg.sampler.steps = expect_count(value, key);
        } else if (key == "lambda") {
          cfg.sampler.lambda = expect_number(value, key);
        } else if (key == "gamma_mode") {
          const std::string mode = expect_string(value, key);
          if (mode == "sigma_t") {
            cfg.sampler.gamma_mode = GammaMode::sigma_t;
          } else if (mode == "constant") {
            cfg.sampler.gamma_mode = GammaMode::constant;
          } else {
            throw ConfigError("gamma_mode must be 'sigma_t' or 'constant'", value.line);
          }
        } else if (key == "gamma_value") {
          cfg.sampler.gamma_value = expect_number(value, key);
        } else if (key == "mcs_weight") {
          cfg.sampler.mcs_weight = expect_number(value, key);
        } else if (key == "cutoff") {
          cfg.sampler.cutoff = expect_number(value, key);
        } else if (key == "seed") {
          cfg.sampler.seed = static_cast<std::uint64_t>(expect_count(value, key));
        } else if (key == "schedule_shift") {
          cfg.sampler.schedule.shift = expect_number(value, key);
        } else {
          throw ConfigError("unknown key '" + key + "' in [sampler]", value.line);
        }
      }
    } else if (section == "experiment") {
      for (const auto& [key, value] : entries) {
        if (key == "methods") {
          if (value.kind != TomlValue::Kind::array) {
            throw ConfigError("key 'methods' expects an array of strings", value.line);
          }
          cfg.methods.clear();
          for (const auto& m : value.array) {
            cfg.methods.push_back(method_from_string(expect_string(m, key)));
          }
        } else if (key == "seeds") {
          cfg.seeds.clear();
          for (double s : expect_number_array(value, key)) {
            cfg.seeds.push_back(static_cast<std::uint64_t>(s));
          }
        } else if (key == "n_seeds") {
          const std::size_t n = expect_count(value, key);
          cfg.seeds.clear();
          for (std::size_t s = 1; s <= n; ++s) cfg.seeds.push_back(s);
        } else if (key == "mask") {
          cfg.mask = expect_number_array(value, key);
        } else if (key == "n_samples") {
          cfg.n_samples = expect_count(value, key);
        } else if (key == "n_eval") {
          cfg.n_eval = expect_count(value, key);
        } else if (key == "n_proj") {
          cfg.n_proj = expect_count(value, key);
        } else {
          throw ConfigError("unknown key '" + key + "' in [experiment]", value.line);
        }
      }
    } else {
      throw ConfigError("unknown section [" + section + "]",
                        entries.empty() ? 0 : entries.begin()->second.line);
    }
  }
  return cfg;
}

LabConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_toml(parse_toml(buffer.str()));
}

}  // namespace flowlab
