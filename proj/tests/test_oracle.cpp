#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "scaledim/entropy.hpp"
#include "scaledim/maps.hpp"
#include "scaledim/oracle.hpp"

using namespace scaledim;

namespace {

std::vector<std::uint64_t> sorted_counts(const CoarseHistogram& hist) {
  std::vector<std::uint64_t> counts = hist.counts;
  std::sort(counts.begin(), counts.end());
  return counts;
}

}  // namespace

TEST_CASE("direct box counting on the small lattice") {
  const Orbit lattice = uniform_lattice(2, unit_box());
  const CoarseHistogram half = direct_box_count(lattice, unit_box(), 0.5);
  REQUIRE(half.counts.size() == 4);
  for (std::uint64_t c : half.counts) CHECK(c == 1);

  const CoarseHistogram whole = direct_box_count(lattice, unit_box(), 1.5);
  REQUIRE(whole.counts.size() == 1);
  CHECK(whole.counts[0] == 4);
}

TEST_CASE("rebinned microgrid matches direct counting on aligned scales") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 2000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 10000);
  for (std::uint64_t k : {37ull, 100ull, 640ull}) {
    const CoarseHistogram from_grid = rebin(grid, k);
    const CoarseHistogram direct =
        direct_box_count(orbit, henon_box(), static_cast<double>(k) * grid.e0);
    CHECK(sorted_counts(from_grid) == sorted_counts(direct));
  }
}

TEST_CASE("a corrupted multiset is detected by the oracle comparison") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 2000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 10000);
  CoarseHistogram tampered = rebin(grid, 100);
  tampered.counts.front() += 1;  // off-by-one injection
  const CoarseHistogram direct = direct_box_count(orbit, henon_box(), 100.0 * grid.e0);
  CHECK(sorted_counts(tampered) != sorted_counts(direct));
}

TEST_CASE("pairwise correlation evaluates two-point configurations") {
  Orbit pair;
  pair.points.push_back(Point2{0.0, 0.0});
  pair.points.push_back(Point2{0.5, 0.0});
  CHECK(pairwise_correlation(pair, 1.0, Norm::chebyshev, false) == 1.0);
  CHECK(pairwise_correlation(pair, 0.1, Norm::chebyshev, false) == 0.0);
  // literal double sum keeps the self pairs: (2*1 + 2)/4 = 1, (0 + 2)/4 = 0.5
  CHECK(pairwise_correlation(pair, 1.0, Norm::chebyshev, true) == 1.0);
  CHECK(pairwise_correlation(pair, 0.1, Norm::chebyshev, true) == 0.5);
}

TEST_CASE("pairwise correlation grows with scale and saturates") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 500);
  double previous = 0.0;
  for (double e : {0.01, 0.05, 0.2, 1.0, 5.1}) {
    const double c = pairwise_correlation(orbit, e, Norm::euclidean, false);
    CHECK(c >= previous);
    previous = c;
  }
  CHECK(previous == 1.0);  // 5.1 exceeds the box diagonal
}

TEST_CASE("chebyshev pairwise correlation bounds the box-partition sum") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 1000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 10000);
  for (std::uint64_t k : {50ull, 200ull, 1000ull}) {
    const double e = static_cast<double>(k) * grid.e0;
    const double pairwise = pairwise_correlation(orbit, e, Norm::chebyshev, false);
    const double boxed = correlation_sum(rebin(grid, k), 2.0, Estimator::factorial);
    CHECK(pairwise >= boxed);
  }
}

TEST_CASE("correlation curve agrees with single-scale evaluations") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 400);
  const std::vector<double> scales{0.01, 0.1, 0.5, 2.0};
  for (const Norm norm : {Norm::chebyshev, Norm::euclidean}) {
    const auto curve = pairwise_correlation_curve(orbit, scales, norm, false);
    REQUIRE(curve.size() == scales.size());
    for (std::size_t i = 0; i < scales.size(); ++i)
      CHECK(curve[i] == pairwise_correlation(orbit, scales[i], norm, false));
  }
  const auto with_self = pairwise_correlation_curve(orbit, scales, Norm::chebyshev, true);
  for (std::size_t i = 0; i < scales.size(); ++i)
    CHECK(with_self[i] == pairwise_correlation(orbit, scales[i], Norm::chebyshev, true));
}

TEST_CASE("correlation curve is independent of the worker count") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 600);
  const std::vector<double> scales{0.02, 0.1, 0.4, 1.0};
  const auto serial = pairwise_correlation_curve(orbit, scales, Norm::chebyshev, false, 1);
  const auto parallel = pairwise_correlation_curve(orbit, scales, Norm::chebyshev, false, 4);
  CHECK(serial == parallel);
}
