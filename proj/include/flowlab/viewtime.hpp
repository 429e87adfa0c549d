#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace flowlab {

enum class ScheduleMode { diagonal, bullet_time, independent_view };

ScheduleMode schedule_mode_from_string(const std::string& name);
std::string schedule_mode_to_string(ScheduleMode mode);

struct ScheduleConfig {
  std::size_t views = 1;   // V
  std::size_t frames = 1;  // T
  std::size_t n_traj = 1;
  ScheduleMode mode = ScheduleMode::diagonal;

  void validate() const;
};

/// Ordered (view_index, time_index) pairs of one generative trajectory.
struct TrajectorySpec {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Trajectory j visits, at time k, view (floor(k*V/T) + j*floor(V/n_traj))
/// mod V: every trajectory covers all T times while the view orbits once,
/// and trajectories start at evenly spaced view offsets.
std::vector<TrajectorySpec> diagonal_schedule(const ScheduleConfig& cfg);

/// Trajectory j freezes time round(j*(T-1)/max(1, n_traj-1)) and sweeps all
/// views in order.
std::vector<TrajectorySpec> bullet_time_schedule(const ScheduleConfig& cfg);

/// Trajectory j freezes view round(j*(V-1)/max(1, n_traj-1)) and sweeps all
/// times in order.
std::vector<TrajectorySpec> independent_view_schedule(const ScheduleConfig& cfg);

std::vector<TrajectorySpec> make_schedule(const ScheduleConfig& cfg);

struct CoverageStats {
  std::size_t frames_total = 0;
  std::size_t distinct_views = 0;
  std::size_t distinct_times = 0;
  std::map<std::size_t, std::size_t> per_time_view_count;  // time -> distinct views
};

CoverageStats coverage_stats(const std::vector<TrajectorySpec>& trajectories);

/// JSON document {"mode", "V", "T", "n_traj", "trajectories": [[[v,t],...],...]}.
std::string schedule_to_json(const ScheduleConfig& cfg,
                             const std::vector<TrajectorySpec>& trajectories);

}  // namespace flowlab
