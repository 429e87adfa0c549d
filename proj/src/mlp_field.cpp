#include "flowlab/mlp_field.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eigen_util.hpp"

namespace flowlab {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

struct LayerDims {
  std::size_t rows, cols;
};

// W1 [h x (d+1)], b1, W2 [h x h], b2, W3 [d x h], b3 in one flat buffer.
std::array<LayerDims, 3> layer_dims(std::size_t dim, std::size_t hidden) {
  return {LayerDims{hidden, dim + 1}, LayerDims{hidden, hidden}, LayerDims{dim, hidden}};
}

std::size_t flat_size(std::size_t dim, std::size_t hidden) {
  std::size_t n = 0;
  for (const auto& l : layer_dims(dim, hidden)) n += l.rows * l.cols + l.rows;
  return n;
}

struct ParamView {
  MatMap w1, w2, w3;
  VecMap b1, b2, b3;
};

struct ConstParamView {
  ConstMatMap w1, w2, w3;
  ConstVecMap b1, b2, b3;
};

template <typename View, typename Ptr>
View make_view(Ptr data, std::size_t dim, std::size_t hidden) {
  const auto dims = layer_dims(dim, hidden);
  std::array<Ptr, 6> at;
  Ptr p = data;
  for (std::size_t l = 0; l < 3; ++l) {
    at[2 * l] = p;
    p += dims[l].rows * dims[l].cols;
    at[2 * l + 1] = p;
    p += dims[l].rows;
  }
  return View{
      {at[0], static_cast<Eigen::Index>(dims[0].rows), static_cast<Eigen::Index>(dims[0].cols)},
      {at[2], static_cast<Eigen::Index>(dims[1].rows), static_cast<Eigen::Index>(dims[1].cols)},
      {at[4], static_cast<Eigen::Index>(dims[2].rows), static_cast<Eigen::Index>(dims[2].cols)},
      {at[1], static_cast<Eigen::Index>(dims[0].rows)},
      {at[3], static_cast<Eigen::Index>(dims[1].rows)},
      {at[5], static_cast<Eigen::Index>(dims[2].rows)}};
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32_le(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void write_f64_le(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_f64_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace

MlpVelocityField::MlpVelocityField(std::size_t dim, std::size_t hidden)
    : dim_(dim), hidden_(hidden), params_(flat_size(dim, hidden), 0.0) {
  if (dim == 0 || hidden == 0) {
    throw std::invalid_argument("MlpVelocityField: dim and hidden must be positive");
  }
}

MlpVelocityField MlpVelocityField::glorot_init(std::size_t dim, std::size_t hidden,
                                               SeededRng& rng) {
  MlpVelocityField field(dim, hidden);
  auto view = make_view<ParamView, double*>(field.params_.data(), dim, hidden);
  auto fill = [&](MatMap& w) {
    const double scale =
        std::sqrt(2.0 / static_cast<double>(w.rows() + w.cols()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = scale * rng.next_normal();
    }
  };
  fill(view.w1);
  fill(view.w2);
  fill(view.w3);
  return field;
}

Tensor MlpVelocityField::velocity_at(const Tensor& x, double t) const {
  if (x.rank() != 1 || x.size() != dim_) {
    throw std::invalid_argument("MlpVelocityField: input must be [d]");
  }
  auto view = make_view<ConstParamView, const double*>(params_.data(), dim_, hidden_);
  Eigen::VectorXd z(static_cast<Eigen::Index>(dim_) + 1);
  for (std::size_t j = 0; j < dim_; ++j) z(static_cast<Eigen::Index>(j)) = x[j];
  z(static_cast<Eigen::Index>(dim_)) = t;
  Eigen::VectorXd h1 = (view.w1 * z + view.b1).array().tanh();
  Eigen::VectorXd h2 = (view.w2 * h1 + view.b2).array().tanh();
  Eigen::VectorXd out = view.w3 * h2 + view.b3;
  return detail::from_eigen_vector(out);
}

double MlpVelocityField::loss_and_gradient(const FmBatch& batch, std::span<double> grad,
                                           const NoiseSchedule& schedule) const {
  const std::size_t n = batch.x0.rows();
  if (n == 0) throw std::invalid_argument("loss_and_gradient: empty batch");
  if (!batch.x0.same_shape(batch.x1) || batch.t.size() != n || batch.x0.cols() != dim_) {
    throw std::invalid_argument("loss_and_gradient: batch shape mismatch");
  }
  if (grad.size() != params_.size()) {
    throw std::invalid_argument("loss_and_gradient: gradient buffer size mismatch");
  }

  auto view = make_view<ConstParamView, const double*>(params_.data(), dim_, hidden_);
  const Eigen::Index d = static_cast<Eigen::Index>(dim_);
  const Eigen::Index b = static_cast<Eigen::Index>(n);

  // Columns are samples: Z is (d+1) x n, U is the target velocity x1 - x0.
  Eigen::MatrixXd z(d + 1, b), u(d, b);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sigma(schedule, batch.t[i]);
    for (std::size_t j = 0; j < dim_; ++j) {
      const double x0 = batch.x0.at(i, j);
      const double x1 = batch.x1.at(i, j);
      z(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          (1.0 - s) * x0 + s * x1;
      u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = x1 - x0;
    }
    z(d, static_cast<Eigen::Index>(i)) = batch.t[i];
  }

  Eigen::MatrixXd h1 = ((view.w1 * z).colwise() + view.b1).array().tanh();
  Eigen::MatrixXd h2 = ((view.w2 * h1).colwise() + view.b2).array().tanh();
  Eigen::MatrixXd out = (view.w3 * h2).colwise() + view.b3;

  Eigen::MatrixXd resid = out - u;
  const double loss = resid.squaredNorm() / static_cast<double>(n);

  Eigen::MatrixXd d_out = (2.0 / static_cast<double>(n)) * resid;
  Eigen::MatrixXd d_h2 = view.w3.transpose() * d_out;
  Eigen::MatrixXd d_a2 = d_h2.array() * (1.0 - h2.array().square());
  Eigen::MatrixXd d_h1 = view.w2.transpose() * d_a2;
  Eigen::MatrixXd d_a1 = d_h1.array() * (1.0 - h1.array().square());

  auto gview = make_view<ParamView, double*>(grad.data(), dim_, hidden_);
  gview.w3 = d_out * h2.transpose();
  gview.b3 = d_out.rowwise().sum();
  gview.w2 = d_a2 * h1.transpose();
  gview.b2 = d_a2.rowwise().sum();
  gview.w1 = d_a1 * z.transpose();
  gview.b1 = d_a1.rowwise().sum();
  return loss;
}

double fm_loss(const VelocityField& field, const FmBatch& batch,
               const NoiseSchedule& schedule) {
  const std::size_t n = batch.x0.rows();
  if (n == 0) throw std::invalid_argument("fm_loss: empty batch");
  if (!batch.x0.same_shape(batch.x1) || batch.t.size() != n) {
    throw std::invalid_argument("fm_loss: batch shape mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sigma(schedule, batch.t[i]);
    Tensor x0 = batch.x0.row_copy(i);
    Tensor x1 = batch.x1.row_copy(i);
    Tensor xt = Tensor::zip(x0, x1, [s](double a, double b) { return (1.0 - s) * a + s * b; });
    Tensor v = field.velocity_at(xt, batch.t[i]);
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double r = v[j] - (x1[j] - x0[j]);
      total += r * r;
    }
  }
  return total / static_cast<double>(n);
}

MlpVelocityField train_mlp_field(const DataSampler& sampler, std::size_t dim,
                                 const TrainConfig& cfg, const NoiseSchedule& schedule) {
  if (cfg.steps < 1) throw std::invalid_argument("train_mlp_field: steps must be >= 1");
  if (cfg.batch < 1) throw std::invalid_argument("train_mlp_field: batch must be >= 1");

  SeededRng root(cfg.seed, fnv1a64("flowlab.train"));
  SeededRng init_rng = root.split(0);
  SeededRng data_rng = root.split(1);

  MlpVelocityField field = MlpVelocityField::glorot_init(dim, cfg.hidden, init_rng);
  const std::size_t p = field.parameter_count();
  std::vector<double> grad(p, 0.0), m(p, 0.0), v(p, 0.0);

  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    FmBatch batch;
    batch.x0 = sampler(data_rng, cfg.batch);
    batch.x1 = data_rng.normal({cfg.batch, dim});
    batch.t.resize(cfg.batch);
    for (double& ti : batch.t) ti = data_rng.next_uniform();

    const double loss = field.loss_and_gradient(batch, grad, schedule);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "train_mlp_field: non-finite loss at step " << step;
      throw std::runtime_error(msg.str());
    }

    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
    auto params = field.parameters();
    for (std::size_t i = 0; i < p; ++i) {
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * grad[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
      params[i] -= cfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.adam_eps);
    }
  }
  return field;
}

void save_mlp_field(const MlpVelocityField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_mlp_field: cannot open " + path.string());
  out.write("FLF1", 4);
  write_u32_le(out, 1);  // version
  const auto dims = layer_dims(field.dim(), field.hidden());
  write_u32_le(out, static_cast<std::uint32_t>(dims.size()));
  for (const auto& l : dims) {
    write_u32_le(out, static_cast<std::uint32_t>(l.rows));
    write_u32_le(out, static_cast<std::uint32_t>(l.cols));
  }
  for (double p : field.parameters()) write_f64_le(out, p);
  if (!out) throw std::runtime_error("save_mlp_field: write failed for " + path.string());
}

MlpVelocityField load_mlp_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_mlp_field: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FLF1", 4) != 0) {
    throw std::runtime_error("load_mlp_field: bad magic in " + path.string());
  }
  const std::uint32_t version = read_u32_le(in);
  if (version != 1) throw std::runtime_error("load_mlp_field: unsupported version");
  const std::uint32_t layer_count = read_u32_le(in);
  if (layer_count != 3) throw std::runtime_error("load_mlp_field: unsupported layer count");
  std::uint32_t r[3], c[3];
  for (std::uint32_t l = 0; l < 3; ++l) {
    r[l] = read_u32_le(in);
    c[l] = read_u32_le(in);
  }
  if (!in) throw std::runtime_error("load_mlp_field: truncated header");
  const std::size_t hidden = r[0];
  const std::size_t dim = r[2];
  const auto expect = layer_dims(dim, hidden);
  for (std::uint32_t l = 0; l < 3; ++l) {
    if (r[l] != expect[l].rows || c[l] != expect[l].cols) {
      throw std::runtime_error("load_mlp_field: layer shapes are not chain-compatible");
    }
  }
  MlpVelocityField field(dim, hidden);
  for (double& p : field.parameters()) {
    p = read_f64_le(in);
    if (!in) throw std::runtime_error("load_mlp_field: truncated payload");
    if (!std::isfinite(p)) throw std::runtime_error("load_mlp_field: non-finite weight");
  }
  return field;
}

}  // namespace flowlab
