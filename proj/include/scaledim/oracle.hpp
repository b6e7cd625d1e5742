#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "scaledim/errors.hpp"
#include "scaledim/grid.hpp"
#include "scaledim/maps.hpp"

namespace scaledim {

/// Bins raw orbit points (not the micro grid) at scale e with a dithered
/// origin, using the same integer-shift-with-wrap convention as rebin. On
/// aligned scales with zero offset the occupancy multiset is the exact
/// reference for rebin equality.
inline CoarseHistogram direct_box_count(const Orbit& orbit, const Box2& box, double e,
                                        Offset offset = {}) {
  box.validate();
  if (!(e > 0.0)) throw std::invalid_argument("direct_box_count: e must be > 0");
  if (offset.dx < 0.0 || offset.dx >= 1.0 || offset.dy < 0.0 || offset.dy >= 1.0)
    throw std::invalid_argument("direct_box_count: offset components must lie in [0,1)");

  const double span_x = box.span_x();
  const double span_y = box.span_y();
  const auto cells_x = static_cast<std::uint64_t>(std::max(1.0, std::ceil(span_x / e)));
  const auto cells_y = static_cast<std::uint64_t>(std::max(1.0, std::ceil(span_y / e)));

  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  cells.reserve(orbit.points.size());
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    const Point2 p = orbit.points[i];
    if (!box.contains(p)) throw PointOutsideBox(i);
    double ux = (p.x - box.x_min) + offset.dx * e;
    double uy = (p.y - box.y_min) + offset.dy * e;
    if (ux > span_x) ux -= span_x;  // periodic wrap inside the box
    if (uy > span_y) uy -= span_y;
    auto ix = static_cast<std::uint64_t>(ux / e);
    auto iy = static_cast<std::uint64_t>(uy / e);
    if (ix >= cells_x) ix = cells_x - 1;  // top edge belongs to the last cell
    if (iy >= cells_y) iy = cells_y - 1;
    cells.emplace_back(detail::pack_cell(ix, iy), 1);
  }
  detail::sort_and_merge(cells);

  CoarseHistogram hist;
  hist.e = e;
  hist.n_points = orbit.points.size();
  hist.offset = offset;
  hist.counts.reserve(cells.size());
  for (const auto& [key, count] : cells) hist.counts.push_back(count);
  return hist;
}

enum class Norm { chebyshev, euclidean };

namespace detail {

inline double pair_distance(Point2 a, Point2 b, Norm norm) {
  const double dx = std::fabs(a.x - b.x);
  const double dy = std::fabs(a.y - b.y);
  if (norm == Norm::chebyshev) return std::max(dx, dy);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace detail

/// Literal O(N^2) correlation integral at one scale. With include_self the
/// double sum runs over all ordered pairs (self pairs contribute N, divisor
/// N^2); without it the divisor is N(N-1), matching the factorial
/// estimator's normalization. No spatial indexing on purpose.
inline double pairwise_correlation(const Orbit& orbit, double e, Norm norm = Norm::chebyshev,
                                   bool include_self = false) {
  const std::size_t n = orbit.points.size();
  if (n < 2) throw std::invalid_argument("pairwise_correlation: need at least 2 points");
  if (!(e >= 0.0)) throw std::invalid_argument("pairwise_correlation: e must be >= 0");

  std::uint64_t within = 0;  // unordered pairs, i < j
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (detail::pair_distance(orbit.points[i], orbit.points[j], norm) <= e) ++within;

  const auto nd = static_cast<double>(n);
  if (include_self)
    return (2.0 * static_cast<double>(within) + nd) / (nd * nd);
  return 2.0 * static_cast<double>(within) / (nd * (nd - 1.0));
}

/// C_2 at many scales from a single pass over the pairs. Scales must be
/// ascending. Integer tallies make the result independent of the worker
/// count.
inline std::vector<double> pairwise_correlation_curve(const Orbit& orbit,
                                                      const std::vector<double>& scales,
                                                      Norm norm = Norm::chebyshev,
                                                      bool include_self = false,
                                                      unsigned threads = 0) {
  const std::size_t n = orbit.points.size();
  if (n < 2) throw std::invalid_argument("pairwise_correlation_curve: need at least 2 points");
  if (scales.empty()) return {};
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i - 1] < scales[i]))
      throw std::invalid_argument("pairwise_correlation_curve: scales must be ascending");

  unsigned n_workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  n_workers = std::max(1u, n_workers);

  // bucket[s] = unordered pairs whose distance first fits at scales[s]
  std::vector<std::vector<std::uint64_t>> buckets(n_workers,
                                                  std::vector<std::uint64_t>(scales.size(), 0));
  auto work = [&](unsigned w) {
    std::vector<std::uint64_t>& bucket = buckets[w];
    for (std::size_t i = w; i < n; i += n_workers) {
      const Point2 a = orbit.points[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        const Point2 b = orbit.points[j];
        const double dist = detail::pair_distance(a, b, norm);
        const auto it = std::lower_bound(scales.begin(), scales.end(), dist);
        if (it != scales.end()) ++bucket[static_cast<std::size_t>(it - scales.begin())];
      }
    }
  };

  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }

  std::vector<std::uint64_t> per_scale(scales.size(), 0);
  for (const auto& bucket : buckets)
    for (std::size_t s = 0; s < scales.size(); ++s) per_scale[s] += bucket[s];

  const auto nd = static_cast<double>(n);
  std::vector<double> curve(scales.size());
  std::uint64_t cumulative = 0;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    cumulative += per_scale[s];
    if (include_self)
      curve[s] = (2.0 * static_cast<double>(cumulative) + nd) / (nd * nd);
    else
      curve[s] = 2.0 * static_cast<double>(cumulative) / (nd * (nd - 1.0));
  }
  return curve;
}

}  // namespace scaledim
