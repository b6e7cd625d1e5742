#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "scaledim/dimension.hpp"
#include "scaledim/maps.hpp"

using namespace scaledim;

namespace {

ScaleScan lattice_scan() {
  const Orbit lattice = uniform_lattice(64, unit_box());
  const MicroGrid grid = build_microgrid(lattice, unit_box(), 4800);
  const auto schedule = schedule_from_factors(grid, {300, 600, 1200, 2400});
  return entropy_scan(grid, schedule, {0.0, 1.0, 2.0}, dither_offsets(1, 0),
                      Estimator::power);
}

ScaleScan henon_scan(std::size_t n_keep, int per_decade, double lo, double hi,
                     std::uint64_t m = 200000) {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, n_keep);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), m);
  const auto schedule = scale_schedule(grid, per_decade, lo, hi);
  return entropy_scan(grid, schedule, {0.0, 1.0, 2.0}, dither_offsets(1, 0),
                      Estimator::factorial);
}

}  // namespace

TEST_CASE("lattice plateau has scale-local dimension exactly 2") {
  const ScaleScan scan = lattice_scan();
  for (double q : {0.0, 1.0, 2.0}) {
    const DimensionProfile profile = scale_local(scan, q);
    REQUIRE(profile.d.size() == 3);
    for (double d : profile.d) CHECK(d == Catch::Approx(2.0).margin(1e-12));
    for (double r : profile.delta_log10) CHECK(r > 0.0);
  }
}

TEST_CASE("whole box to occupied quadrants gives d0 = 2") {
  const Orbit lattice = uniform_lattice(2, unit_box());
  const MicroGrid grid = build_microgrid(lattice, unit_box(), 2);
  const ScaleScan scan = entropy_scan(grid, schedule_from_factors(grid, {1, 2}), {0.0},
                                      dither_offsets(1, 0), Estimator::power);
  const DimensionProfile profile = scale_local(scan, 0.0);
  REQUIRE(profile.d.size() == 1);
  CHECK(profile.d[0] == Catch::Approx(std::log(4.0) / std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("tau accessor scales by q-1") {
  const ScaleScan scan = lattice_scan();
  const DimensionProfile profile = scale_local(scan, 2.0);
  const auto tau = profile.tau();
  for (std::size_t i = 0; i < tau.size(); ++i)
    CHECK(tau[i] == Catch::Approx(profile.d[i]).epsilon(1e-14));
}

TEST_CASE("running average on the plateau is constant 2") {
  const ScaleScan scan = lattice_scan();
  const AverageProfile avg = running_average(scan, 0.0, scan.schedule.size() - 1);
  REQUIRE(avg.dbar.size() == scan.schedule.size() - 1);
  for (double v : avg.dbar) CHECK(v == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("running average equals interval average at its smallest scale") {
  const ScaleScan scan = henon_scan(20000, 5, -3.0, -1.0);
  const std::size_t anchor = scan.schedule.size() - 1;
  const AverageProfile avg = running_average(scan, 0.0, anchor);
  const double full = interval_average(scan, 0.0, 0, anchor);
  CHECK(avg.dbar.front() == Catch::Approx(full).epsilon(1e-14));
}

TEST_CASE("running average rejects bad anchors") {
  const ScaleScan scan = lattice_scan();
  CHECK_THROWS_AS(running_average(scan, 0.0, scan.schedule.size()), AnchorNotInSchedule);
  CHECK_THROWS_AS(running_average(scan, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(running_average_by_scale(scan, 0.0, 0.123456), AnchorNotInSchedule);
}

TEST_CASE("interval average validates its bounds") {
  const ScaleScan scan = lattice_scan();
  CHECK(interval_average(scan, 1.0, 0, 3) == Catch::Approx(2.0).margin(1e-12));
  CHECK_THROWS_AS(interval_average_by_scale(scan, 0.0, 0.001234, scan.schedule.back().e),
                  BoundsNotInSchedule);
  CHECK_THROWS_AS(interval_average(scan, 0.0, 2, 2), std::invalid_argument);
}

TEST_CASE("telescoping identity reproduces entropy differences") {
  const ScaleScan scan = henon_scan(20000, 10, -3.0, -1.0);
  for (double q : {0.0, 1.0, 2.0}) {
    const DimensionProfile profile = scale_local(scan, q);
    double sum = 0.0;
    for (std::size_t i = 0; i < profile.d.size(); ++i)
      sum += profile.d[i] * profile.delta_log10[i] * std::numbers::ln10;
    const std::size_t qi = scan.q_index(q);
    const double target = scan.s_at(0, qi) - scan.s_at(scan.schedule.size() - 1, qi);
    CHECK(std::fabs(sum - target) <= 1e-10 * std::fabs(scan.s_at(0, qi)));
  }
}

TEST_CASE("adjacent-interval estimator coincides with the scale-local profile") {
  const ScaleScan scan = henon_scan(10000, 5, -3.0, -1.0);
  const auto d_i = estimator_Di(scan, 0.0);
  const DimensionProfile profile = scale_local(scan, 0.0);
  REQUIRE(d_i.size() == profile.d.size());
  for (std::size_t i = 0; i < d_i.size(); ++i) CHECK(d_i[i] == profile.d[i]);
}

TEST_CASE("coarse local averages stay inside the fine profile envelope") {
  // seven scale points spanning the working interval, chosen from the fine
  // schedule so the coarse averages are exact means of the fine values
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 20000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 200000);
  const auto fine_schedule = scale_schedule(grid, 20, -3.0, -1.0);
  const std::vector<double> qs{0.0};
  const auto offsets = dither_offsets(1, 0);
  const ScaleScan fine = entropy_scan(grid, fine_schedule, qs, offsets, Estimator::power);

  std::vector<std::uint64_t> coarse_ks;
  for (int j = 0; j <= 6; ++j) {
    const double target = -3.0 + j / 3.0;
    std::uint64_t best = fine_schedule[0].k;
    double best_dist = 1e9;
    for (const ScalePoint& sp : fine_schedule) {
      const double dist = std::fabs(sp.log10_e_over_L - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = sp.k;
      }
    }
    coarse_ks.push_back(best);
  }
  const ScaleScan coarse = entropy_scan(grid, schedule_from_factors(grid, coarse_ks), qs,
                                        offsets, Estimator::power);
  const auto d_i = estimator_Di(coarse, 0.0);
  REQUIRE(d_i.size() == 6);

  const DimensionProfile fine_profile = scale_local(fine, 0.0);
  for (std::size_t i = 0; i < d_i.size(); ++i) {
    const double lo = coarse.schedule[i].log10_e_over_L;
    const double hi = coarse.schedule[i + 1].log10_e_over_L;
    double env_min = 1e9, env_max = -1e9;
    for (std::size_t j = 0; j < fine_profile.d.size(); ++j) {
      if (fine_profile.mid_log10[j] < lo - 1e-12 || fine_profile.mid_log10[j] > hi + 1e-12)
        continue;
      env_min = std::min(env_min, fine_profile.d[j]);
      env_max = std::max(env_max, fine_profile.d[j]);
    }
    CHECK(d_i[i] >= env_min - 1e-9);
    CHECK(d_i[i] <= env_max + 1e-9);
  }
}

TEST_CASE("reduced-boundary estimator is exact on the lattice") {
  const ScaleScan scan = lattice_scan();
  const DPrimeCurve curve = estimator_Dprime(scan, scan.boundary, 0.0);
  for (double v : curve.value) CHECK(v == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("smaller reduced boundary lifts the whole curve") {
  const ScaleScan scan = henon_scan(10000, 5, -3.0, -1.0);
  const DPrimeCurve tight = estimator_Dprime(scan, 0.4 * scan.boundary, 0.0);
  const DPrimeCurve loose = estimator_Dprime(scan, 0.8 * scan.boundary, 0.0);
  REQUIRE(tight.value.size() == loose.value.size());
  for (std::size_t i = 0; i < tight.value.size(); ++i)
    CHECK(tight.value[i] > loose.value[i]);
}

TEST_CASE("reduced boundary at a schedule point is rejected") {
  const ScaleScan scan = lattice_scan();
  CHECK_THROWS_AS(estimator_Dprime(scan, scan.schedule.back().e, 0.0),
                  NonpositiveDenominator);
}

TEST_CASE("chi2 ratio recovers the lattice dimension") {
  const ScaleScan scan = lattice_scan();
  CHECK(estimator_chi2_ratio(scan, 0.0, scan.boundary) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("chi2 ratio on a single point reduces to the direct quotient") {
  const ScaleScan full = lattice_scan();
  ScaleScan one = full;
  one.schedule = {full.schedule[0]};
  one.s.assign(full.s.begin(), full.s.begin() + full.qs.size());
  const double expected =
      one.s_at(0, 0) / std::log(one.boundary / one.schedule[0].e);
  CHECK(estimator_chi2_ratio(one, 0.0, one.boundary) ==
        Catch::Approx(expected).epsilon(1e-14));
}

TEST_CASE("least squares fit recovers an exact power law") {
  const ScaleScan scan = lattice_scan();
  const LineFit fit = fit_dimension(scan, 0.0);
  CHECK(fit.slope == Catch::Approx(2.0).margin(1e-9));
  CHECK(fit.intercept == Catch::Approx(2.0 * std::log(scan.boundary)).margin(1e-9));
}

TEST_CASE("two-point fit equals the single local average") {
  ScaleScan scan = lattice_scan();
  ScaleScan two = scan;
  two.schedule = {scan.schedule[0], scan.schedule[1]};
  two.s.assign(scan.s.begin(), scan.s.begin() + 2 * scan.qs.size());
  const LineFit fit = fit_dimension(two, 0.0);
  const auto d_i = estimator_Di(two, 0.0);
  REQUIRE(d_i.size() == 1);
  CHECK(fit.slope == Catch::Approx(d_i[0]).epsilon(1e-12));
}

TEST_CASE("degenerate scans are rejected") {
  ScaleScan scan = lattice_scan();
  ScaleScan broken = scan;
  broken.schedule[1] = broken.schedule[0];
  CHECK_THROWS_AS(scale_local(broken, 0.0), DegenerateInterval);

  ScaleScan flat = scan;
  for (ScalePoint& sp : flat.schedule) sp = scan.schedule[0];
  CHECK_THROWS_AS(fit_dimension(flat, 0.0), DegenerateAbscissa);
}

TEST_CASE("dimension vanishes at the whole-box end while one box covers everything") {
  // points confined to one quadrant: a single box still covers them at L/2
  Orbit corner;
  for (int i = 0; i < 50; ++i)
    corner.points.push_back(Point2{0.1 + 0.005 * i, 0.1 + 0.007 * i});
  const MicroGrid grid = build_microgrid(corner, unit_box(), 64);
  const ScaleScan scan = entropy_scan(grid, schedule_from_factors(grid, {32, 64}), {0.0},
                                      dither_offsets(1, 0), Estimator::power);
  const DimensionProfile profile = scale_local(scan, 0.0);
  REQUIRE(profile.d.size() == 1);
  CHECK(profile.d[0] == 0.0);
}

TEST_CASE("small-sample dimension collapses near the resolution scale") {
  // with 1e4 points, scales near 1e-4 L resolve individual samples
  const ScaleScan scan = henon_scan(10000, 20, -4.1, -3.9);
  const DimensionProfile profile = scale_local(scan, 0.0);
  std::size_t nearest = 0;
  double best = 1e9;
  for (std::size_t i = 0; i < profile.mid_log10.size(); ++i) {
    const double dist = std::fabs(profile.mid_log10[i] + 4.0);
    if (dist < best) {
      best = dist;
      nearest = i;
    }
  }
  CHECK(profile.d[nearest] < 0.5);
}

TEST_CASE("estimator report is assembled from the scan alone") {
  const ScaleScan scan = henon_scan(10000, 5, -3.0, -1.0);
  const EstimatorReport report = make_estimator_report(
      scan, 0.0, {0.8 * scan.boundary, 0.4 * scan.boundary},
      {scan.schedule.size() - 1}, scan.boundary, 0, scan.schedule.size() - 1);
  CHECK(report.d_i.d.size() == scan.schedule.size() - 1);
  CHECK(report.d_prime.size() == 2);
  CHECK(report.d_double_prime.size() == 1);
  CHECK(report.interval_mean ==
        Catch::Approx(interval_average(scan, 0.0, 0, scan.schedule.size() - 1)));
  CHECK(std::isfinite(report.chi2_ratio));
  CHECK(std::isfinite(report.fit.slope));
}
