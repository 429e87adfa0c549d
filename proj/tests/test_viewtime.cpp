#include <doctest.h>

#include <set>
#include <stdexcept>

#include "flowlab/viewtime.hpp"

using namespace flowlab;

TEST_CASE("diagonal: single trajectory walks the matrix diagonal") {
  ScheduleConfig cfg{4, 4, 1, ScheduleMode::diagonal};
  const auto trajs = diagonal_schedule(cfg);
  REQUIRE(trajs.size() == 1);
  const std::vector<std::pair<std::size_t, std::size_t>> expected = {
      {0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK(trajs[0].pairs == expected);
}

TEST_CASE("diagonal: second trajectory starts at the opposite view") {
  ScheduleConfig cfg{4, 4, 2, ScheduleMode::diagonal};
  const auto trajs = diagonal_schedule(cfg);
  REQUIRE(trajs.size() == 2);
  const std::vector<std::pair<std::size_t, std::size_t>> expected = {
      {2, 0}, {3, 1}, {0, 2}, {1, 3}};
  CHECK(trajs[1].pairs == expected);
}

TEST_CASE("diagonal: wide time axis revisits every view evenly") {
  ScheduleConfig cfg{8, 16, 3, ScheduleMode::diagonal};
  const auto trajs = diagonal_schedule(cfg);
  REQUIRE(trajs.size() == 3);
  for (const auto& traj : trajs) {
    REQUIRE(traj.pairs.size() == 16);
    std::map<std::size_t, int> visits;
    for (const auto& [v, t] : traj.pairs) visits[v] += 1;
    CHECK(visits.size() == 8);
    for (const auto& [v, count] : visits) CHECK(count == 2);
  }
}

TEST_CASE("bullet time freezes the time index") {
  ScheduleConfig one{4, 4, 1, ScheduleMode::bullet_time};
  const auto single = bullet_time_schedule(one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].pairs.size() == 4);
  for (const auto& [v, t] : single[0].pairs) CHECK(t == 0);

  ScheduleConfig full{4, 4, 4, ScheduleMode::bullet_time};
  const auto saturated = bullet_time_schedule(full);
  std::set<std::size_t> times;
  for (const auto& traj : saturated) times.insert(traj.pairs.front().second);
  CHECK(times == std::set<std::size_t>{0, 1, 2, 3});

  ScheduleConfig wide{8, 16, 3, ScheduleMode::bullet_time};
  CHECK(coverage_stats(bullet_time_schedule(wide)).distinct_times == 3);
}

TEST_CASE("independent view freezes the view index") {
  ScheduleConfig one{8, 16, 1, ScheduleMode::independent_view};
  const auto single = independent_view_schedule(one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].pairs.size() == 16);
  for (const auto& [v, t] : single[0].pairs) CHECK(v == 0);

  ScheduleConfig wide{8, 16, 3, ScheduleMode::independent_view};
  const auto trajs = independent_view_schedule(wide);
  const auto stats = coverage_stats(trajs);
  CHECK(stats.distinct_views == 3);
  CHECK(stats.distinct_times == 16);
  for (const auto& traj : trajs) CHECK(traj.pairs.size() == 16);
}

TEST_CASE("coverage counts for the reference configuration") {
  ScheduleConfig cfg{8, 16, 3, ScheduleMode::diagonal};
  const auto stats = coverage_stats(diagonal_schedule(cfg));
  CHECK(stats.frames_total == 48);
  CHECK(stats.distinct_views == 8);
  CHECK(stats.distinct_times == 16);
  CHECK_THROWS_AS(coverage_stats({}), std::invalid_argument);
}

TEST_CASE("equal budget across modes") {
  for (std::size_t n_traj : {1, 2, 3}) {
    ScheduleConfig diag{8, 16, n_traj, ScheduleMode::diagonal};
    CHECK(coverage_stats(diagonal_schedule(diag)).frames_total == n_traj * 16);
    ScheduleConfig indep{8, 16, n_traj, ScheduleMode::independent_view};
    CHECK(coverage_stats(independent_view_schedule(indep)).frames_total == n_traj * 16);
    ScheduleConfig bullet{8, 16, n_traj, ScheduleMode::bullet_time};
    CHECK(coverage_stats(bullet_time_schedule(bullet)).frames_total == n_traj * 8);
  }
}

TEST_CASE("one diagonal trajectory already covers both axes when V <= T") {
  for (std::size_t v : {2, 4, 8}) {
    ScheduleConfig cfg{v, 16, 1, ScheduleMode::diagonal};
    const auto stats = coverage_stats(diagonal_schedule(cfg));
    CHECK(stats.distinct_views == v);
    CHECK(stats.distinct_times == 16);
  }
}

TEST_CASE("invariant violations are rejected") {
  ScheduleConfig bad{4, 4, 5, ScheduleMode::diagonal};
  CHECK_THROWS_AS(diagonal_schedule(bad), std::invalid_argument);
  ScheduleConfig bad_bullet{4, 2, 3, ScheduleMode::bullet_time};
  CHECK_THROWS_AS(bullet_time_schedule(bad_bullet), std::invalid_argument);
  ScheduleConfig zero{0, 4, 1, ScheduleMode::diagonal};
  CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}

TEST_CASE("schedule serializes to the documented json shape") {
  ScheduleConfig cfg{2, 2, 1, ScheduleMode::diagonal};
  const std::string json = schedule_to_json(cfg, diagonal_schedule(cfg));
  CHECK(json.find("\"mode\": \"diagonal\"") != std::string::npos);
  CHECK(json.find("\"V\": 2") != std::string::npos);
  CHECK(json.find("\"T\": 2") != std::string::npos);
  CHECK(json.find("\"n_traj\": 1") != std::string::npos);
  CHECK(json.find("\"trajectories\"") != std::string::npos);
}
