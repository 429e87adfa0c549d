#include "flowlab/viewtime.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace flowlab {

namespace {

std::size_t spread_index(std::size_t j, std::size_t count, std::size_t n_traj) {
  // round(j * (count-1) / max(1, n_traj-1)) with ties away from zero
  const double denom = static_cast<double>(n_traj > 1 ? n_traj - 1 : 1);
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(j) * static_cast<double>(count - 1) / denom));
}

}  // namespace

ScheduleMode schedule_mode_from_string(const std::string& name) {
  if (name == "diagonal") return ScheduleMode::diagonal;
  if (name == "bullet_time") return ScheduleMode::bullet_time;
  if (name == "independent_view") return ScheduleMode::independent_view;
  throw std::invalid_argument("unknown schedule mode: " + name);
}

std::string schedule_mode_to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::diagonal: return "diagonal";
    case ScheduleMode::bullet_time: return "bullet_time";
    case ScheduleMode::independent_view: return "independent_view";
  }
  throw std::invalid_argument("schedule_mode_to_string: bad enum value");
}

void ScheduleConfig::validate() const {
  if (views < 1 || frames < 1 || n_traj < 1) {
    throw std::invalid_argument("ScheduleConfig: views, frames, n_traj must be >= 1");
  }
  if (mode == ScheduleMode::bullet_time && n_traj > frames) {
    throw std::invalid_argument("ScheduleConfig: bullet_time requires n_traj <= frames");
  }
  if (mode != ScheduleMode::bullet_time && n_traj > views) {
    throw std::invalid_argument("ScheduleConfig: mode requires n_traj <= views");
  }
}

std::vector<TrajectorySpec> diagonal_schedule(const ScheduleConfig& cfg) {
  if (cfg.mode != ScheduleMode::diagonal) {
    throw std::invalid_argument("diagonal_schedule: mode mismatch");
  }
  cfg.validate();
  std::vector<TrajectorySpec> out(cfg.n_traj);
  const std::size_t offset_step = cfg.views / cfg.n_traj;
  for (std::size_t j = 0; j < cfg.n_traj; ++j) {
    out[j].pairs.reserve(cfg.frames);
    for (std::size_t k = 0; k < cfg.frames; ++k) {
      const std::size_t orbit = (k * cfg.views) / cfg.frames;
      const std::size_t view = (orbit + j * offset_step) % cfg.views;
      out[j].pairs.emplace_back(view, k);
    }
  }
  return out;
}

std::vector<TrajectorySpec> bullet_time_schedule(const ScheduleConfig& cfg) {
  if (cfg.mode != ScheduleMode::bullet_time) {
    throw std::invalid_argument("bullet_time_schedule: mode mismatch");
  }
  cfg.validate();
  std::vector<TrajectorySpec> out(cfg.n_traj);
  for (std::size_t j = 0; j < cfg.n_traj; ++j) {
    const std::size_t time = spread_index(j, cfg.frames, cfg.n_traj);
    out[j].pairs.reserve(cfg.views);
    for (std::size_t v = 0; v < cfg.views; ++v) out[j].pairs.emplace_back(v, time);
  }
  return out;
}

std::vector<TrajectorySpec> independent_view_schedule(const ScheduleConfig& cfg) {
  if (cfg.mode != ScheduleMode::independent_view) {
    throw std::invalid_argument("independent_view_schedule: mode mismatch");
  }
  cfg.validate();
  std::vector<TrajectorySpec> out(cfg.n_traj);
  for (std::size_t j = 0; j < cfg.n_traj; ++j) {
    const std::size_t view = spread_index(j, cfg.views, cfg.n_traj);
    out[j].pairs.reserve(cfg.frames);
    for (std::size_t k = 0; k < cfg.frames; ++k) out[j].pairs.emplace_back(view, k);
  }
  return out;
}

std::vector<TrajectorySpec> make_schedule(const ScheduleConfig& cfg) {
  switch (cfg.mode) {
    case ScheduleMode::diagonal: return diagonal_schedule(cfg);
    case ScheduleMode::bullet_time: return bullet_time_schedule(cfg);
    case ScheduleMode::independent_view: return independent_view_schedule(cfg);
  }
  throw std::invalid_argument("make_schedule: bad mode");
}

CoverageStats coverage_stats(const std::vector<TrajectorySpec>& trajectories) {
  if (trajectories.empty()) {
    throw std::invalid_argument("coverage_stats: no trajectories");
  }
  CoverageStats stats;
  std::set<std::size_t> views, times;
  std::map<std::size_t, std::set<std::size_t>> views_per_time;
  for (const auto& traj : trajectories) {
    stats.frames_total += traj.pairs.size();
    for (const auto& [v, t] : traj.pairs) {
      views.insert(v);
      times.insert(t);
      views_per_time[t].insert(v);
    }
  }
  stats.distinct_views = views.size();
  stats.distinct_times = times.size();
  for (const auto& [t, vs] : views_per_time) stats.per_time_view_count[t] = vs.size();
  return stats;
}

std::string schedule_to_json(const ScheduleConfig& cfg,
                             const std::vector<TrajectorySpec>& trajectories) {
  nlohmann::json doc;
  doc["mode"] = schedule_mode_to_string(cfg.mode);
  doc["V"] = cfg.views;
  doc["T"] = cfg.frames;
  doc["n_traj"] = cfg.n_traj;
  nlohmann::json trajs = nlohmann::json::array();
  for (const auto& traj : trajectories) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [v, t] : traj.pairs) pairs.push_back({v, t});
    trajs.push_back(std::move(pairs));
  }
  doc["trajectories"] = std::move(trajs);
  return doc.dump(2) + "\n";
}

}  // namespace flowlab
