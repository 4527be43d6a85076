#include "doctest.h"
#include "oracles.hpp"

#include "replan/errors.hpp"
#include "replan/metrics.hpp"

#include <cmath>
#include <random>

using namespace replan;

namespace
{

Trajectory straight(double length, int segments)
{
  Trajectory t;
  for (int k = 0; k <= segments; ++k) {
    t.waypoints.push_back({{length * k / segments, 0.0, 0.0}, static_cast<double>(k)});
  }
  t.edges.resize(static_cast<std::size_t>(segments));
  return t;
}

PointSet random_set(std::mt19937_64 & rng, std::size_t n)
{
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  PointSet s(n);
  for (auto & p : s) {
    p = {u(rng), u(rng)};
  }
  return s;
}

}  // namespace

TEST_CASE("directed MHD examples")
{
  const PointSet a{{0.0, 0.0}, {1.0, 0.0}};
  const PointSet b{{0.0, 0.0}};
  CHECK(directed_mhd(a, a) == 0.0);
  CHECK(directed_mhd(PointSet{{0.0, 0.0}}, PointSet{{3.0, 4.0}}) == 5.0);
  CHECK(directed_mhd(a, b) == 0.5);
  CHECK(directed_mhd(b, a) == 0.0);
  CHECK(mhd(a, b) == 0.5);
  CHECK(mhd(PointSet{{1.0, 1.0}}, PointSet{{1.0, 3.5}}) == 2.5);
  CHECK_THROWS_AS(directed_mhd(PointSet{}, b), EmptySet);
  CHECK_THROWS_AS(mhd(a, PointSet{}), EmptySet);
}

TEST_CASE("MHD matches the brute-force oracle and is symmetric")
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_set(rng, 1 + rng() % 120);
    const auto b = random_set(rng, 1 + rng() % 120);
    CHECK(std::abs(directed_mhd(a, b) - oracle::directed_mhd(a, b)) <= 1e-9);
    CHECK(mhd(a, b) == mhd(b, a));
    CHECK(mhd(a, b) >= 0.0);
  }
}

TEST_CASE("MHD handles duplicate x coordinates")
{
  const PointSet a{{1.0, 0.0}, {1.0, 5.0}, {1.0, -3.0}};
  const PointSet b{{1.0, 4.0}, {1.0, 4.5}, {2.0, 0.0}};
  CHECK(directed_mhd(a, b) == doctest::Approx(oracle::directed_mhd(a, b)));
  CHECK(directed_mhd(b, a) == doctest::Approx(oracle::directed_mhd(b, a)));
}

TEST_CASE("trajectory resampling")
{
  const auto one = trajectory_points(straight(1.0, 1), 0.2);
  CHECK(one.size() == 6);
  CHECK(one.front().x == 0.0);
  CHECK(one.back().x == 1.0);
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].x == doctest::Approx(0.2 * static_cast<double>(k)));
  }
  CHECK(trajectory_points(straight(1.0, 3), 0.2).size() == 6);
  CHECK(trajectory_points(straight(2.0, 4), 0.5).size() == 5);
  CHECK(trajectory_points(straight(1.0, 1), 1.0).size() == 2);
  CHECK(trajectory_points(straight(1.0, 1), 5.0).size() == 2);
  // A remainder shorter than the spacing still ends at the endpoint.
  const auto odd = trajectory_points(straight(1.1, 2), 0.5);
  CHECK(odd.size() == 4);
  CHECK(odd.back().x == 1.1);
  CHECK_THROWS_AS(trajectory_points(Trajectory{}, 0.2), EmptyTrajectory);
  CHECK_THROWS_AS(trajectory_points(straight(1.0, 1), 0.0), InvalidArgument);
}

TEST_CASE("stability summary")
{
  const std::vector<double> v{0.0, 0.0, 0.1, 0.5, 1.5};
  const auto s = summarize(v, 0.2, "x");
  CHECK(*s.mean_filtered_mhd == 1.0);
  CHECK(s.filtered_count == 2);
  CHECK(s.zero_count == 2);
  CHECK(s.raw_count == 5);
  const auto all = summarize(v, 0.0, "x");
  CHECK(*all.mean_filtered_mhd == doctest::Approx(2.1 / 5.0));
  CHECK(all.filtered_count == 5);
  const auto none = summarize(std::vector<double>{0.0, 0.1}, 0.2, "x");
  CHECK_FALSE(none.mean_filtered_mhd.has_value());
  CHECK_THROWS_AS(summarize(v, -1.0, "x"), InvalidArgument);
}

TEST_CASE("summary CSV")
{
  CHECK(summary_csv_header() == "label,alpha,mean_filtered_mhd,filtered_count,zero_count,raw_count,threshold");
  StabilitySummary s{"alpha=0.95", 1.001, 332, 997, 1747, 0.2};
  CHECK(summary_csv_row(s, 0.95) == "alpha=0.95,0.95,1.001,332,997,1747,0.2");
  StabilitySummary b{"baseline", std::nullopt, 0, 4, 4, 0.2};
  CHECK(summary_csv_row(b, std::nullopt) == "baseline,,,0,4,4,0.2");
}
