#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "scaledim/errors.hpp"
#include "scaledim/geometry.hpp"
#include "scaledim/maps.hpp"

namespace scaledim {

/// Fractional shift of a coarse-grid origin, in units of the coarse scale e.
struct Offset {
  double dx = 0.0;
  double dy = 0.0;
};

/// One analysis scale: an integer multiple k of the micro scale e0.
struct ScalePoint {
  std::uint64_t k = 1;
  double e = 0.0;
  double log10_e_over_L = 0.0;
};

inline bool operator==(const ScalePoint& a, const ScalePoint& b) {
  return a.k == b.k && a.e == b.e && a.log10_e_over_L == b.log10_e_over_L;
}

/// Occupancies of the non-void bins of one coarse partition. Counts are kept
/// in coarse-cell key order, which is deterministic for a given input.
struct CoarseHistogram {
  double e = 0.0;
  std::vector<std::uint64_t> counts;  // void bins omitted, all >= 1
  std::uint64_t n_points = 0;
  Offset offset{};

  std::uint64_t occupied() const { return static_cast<std::uint64_t>(counts.size()); }
};

namespace detail {

inline std::uint64_t pack_cell(std::uint64_t ix, std::uint64_t iy) {
  return (iy << 32) | ix;
}
inline std::uint64_t cell_ix(std::uint64_t key) { return key & 0xffffffffu; }
inline std::uint64_t cell_iy(std::uint64_t key) { return key >> 32; }

/// Sorts (key,count) records and merges equal keys in place.
inline void sort_and_merge(std::vector<std::pair<std::uint64_t, std::uint64_t>>& cells) {
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < cells.size();) {
    std::uint64_t key = cells[i].first;
    std::uint64_t total = 0;
    while (i < cells.size() && cells[i].first == key) total += cells[i++].second;
    cells[out++] = {key, total};
  }
  cells.resize(out);
}

}  // namespace detail

/// Zero-suppressed occupancy map of an orbit at the atomic micro scale
/// e0 = L/m. Immutable after construction; the single persistent summary
/// from which all coarser statistics are rebinned.
struct MicroGrid {
  Box2 box{};
  std::uint64_t m = 0;
  double e0 = 0.0;
  std::uint64_t n_points = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;  // (packed key, count), sorted

  double boundary() const { return box.boundary(); }

  ScalePoint scale_point(std::uint64_t k) const {
    return ScalePoint{k, static_cast<double>(k) * e0,
                      std::log10(static_cast<double>(k) / static_cast<double>(m))};
  }
};

/// Bins orbit points at the micro scale. A point maps to
/// (floor((x-x_min)/e0), floor((y-y_min)/e0)); the upper box edge is clamped
/// into the last cell. Throws PointOutsideBox with the point's index.
inline MicroGrid build_microgrid(const Orbit& orbit, const Box2& box, std::uint64_t m) {
  box.validate();
  if (m < 2) throw std::invalid_argument("build_microgrid: m must be >= 2");
  if (m > (std::uint64_t{1} << 32)) throw std::invalid_argument("build_microgrid: m too large");

  MicroGrid grid;
  grid.box = box;
  grid.m = m;
  grid.e0 = box.boundary() / static_cast<double>(m);
  grid.n_points = orbit.points.size();

  std::vector<std::pair<std::uint64_t, std::uint64_t>>& cells = grid.cells;
  cells.reserve(orbit.points.size());
  const double inv_e0 = 1.0 / grid.e0;
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    const Point2 p = orbit.points[i];
    if (!box.contains(p)) throw PointOutsideBox(i);
    auto ix = static_cast<std::uint64_t>((p.x - box.x_min) * inv_e0);
    auto iy = static_cast<std::uint64_t>((p.y - box.y_min) * inv_e0);
    if (ix >= m) ix = m - 1;
    if (iy >= m) iy = m - 1;
    cells.emplace_back(detail::pack_cell(ix, iy), 1);
  }
  detail::sort_and_merge(cells);
  cells.shrink_to_fit();  // large orbits compress well below the point count
  return grid;
}

/// Rebins the micro grid at scale k*e0 with a dithered origin. The requested
/// fractional offset is realized as an integer micro-cell shift
/// s = round(offset*k), with periodic wrap inside the box, so dithered
/// rebinning remains exact integer counting. Offset (0,0) is plain aligned
/// box counting.
inline CoarseHistogram rebin(const MicroGrid& grid, std::uint64_t k, Offset offset = {}) {
  if (k < 1 || k > grid.m) throw std::invalid_argument("rebin: need 1 <= k <= m");
  if (offset.dx < 0.0 || offset.dx >= 1.0 || offset.dy < 0.0 || offset.dy >= 1.0)
    throw std::invalid_argument("rebin: offset components must lie in [0,1)");

  const auto sx = static_cast<std::uint64_t>(std::llround(offset.dx * static_cast<double>(k)));
  const auto sy = static_cast<std::uint64_t>(std::llround(offset.dy * static_cast<double>(k)));
  const std::uint64_t m = grid.m;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> coarse;
  coarse.reserve(grid.cells.size());
  for (const auto& [key, count] : grid.cells) {
    std::uint64_t jx = detail::cell_ix(key) + sx;
    std::uint64_t jy = detail::cell_iy(key) + sy;
    if (jx >= m) jx -= m;
    if (jy >= m) jy -= m;
    coarse.emplace_back(detail::pack_cell(jx / k, jy / k), count);
  }
  detail::sort_and_merge(coarse);

  CoarseHistogram hist;
  hist.e = static_cast<double>(k) * grid.e0;
  hist.n_points = grid.n_points;
  hist.offset = offset;
  hist.counts.reserve(coarse.size());
  for (const auto& [key, count] : coarse) hist.counts.push_back(count);
  return hist;
}

/// Decades between the schedule's lower bound and the micro scale.
inline double micro_margin_decades(const MicroGrid& grid, double log_lo) {
  return log_lo + std::log10(static_cast<double>(grid.m));
}

/// Schedule from explicit rebin factors (deduplicated, ascending).
inline std::vector<ScalePoint> schedule_from_factors(const MicroGrid& grid,
                                                     std::vector<std::uint64_t> ks) {
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<ScalePoint> schedule;
  schedule.reserve(ks.size());
  for (std::uint64_t k : ks) {
    if (k < 1 || k > grid.m)
      throw std::invalid_argument("schedule_from_factors: need 1 <= k <= m");
    schedule.push_back(grid.scale_point(k));
  }
  return schedule;
}

/// Geometric scale targets L*10^(log_lo + j/per_decade) mapped to the nearest
/// integer rebin factor, duplicates merged. The resulting spacing is close to
/// 1/per_decade in log10(e). Throws ScheduleBelowMicroScale when the lower
/// bound falls under the micro scale; callers should warn when the margin is
/// under one decade.
inline std::vector<ScalePoint> scale_schedule(const MicroGrid& grid, int per_decade,
                                              double log_lo, double log_hi) {
  if (per_decade < 1) throw std::invalid_argument("scale_schedule: per_decade must be >= 1");
  if (!(log_lo < log_hi) || !(log_hi <= 0.0))
    throw std::invalid_argument("scale_schedule: need log_lo < log_hi <= 0");
  if (micro_margin_decades(grid, log_lo) < 0.0)
    throw ScheduleBelowMicroScale(
        "scale_schedule: lower bound 10^" + std::to_string(log_lo) +
        " * L falls below the micro scale e0 = L/" + std::to_string(grid.m));

  const auto steps =
      static_cast<long>(std::llround((log_hi - log_lo) * static_cast<double>(per_decade)));
  const double md = static_cast<double>(grid.m);
  std::vector<std::uint64_t> ks;
  ks.reserve(static_cast<std::size_t>(steps) + 1);
  for (long j = 0; j <= steps; ++j) {
    const double target = log_lo + static_cast<double>(j) / per_decade;
    if (target > log_hi + 1e-12) break;
    auto k = static_cast<std::uint64_t>(std::llround(md * std::pow(10.0, target)));
    k = std::max<std::uint64_t>(k, 1);
    k = std::min<std::uint64_t>(k, grid.m);
    ks.push_back(k);
  }
  return schedule_from_factors(grid, std::move(ks));
}

/// Dither offsets: the aligned origin first, then n-1 uniform draws from
/// [0,1)^2, deterministic in rng_seed.
inline std::vector<Offset> dither_offsets(std::size_t n_offsets, std::uint64_t rng_seed) {
  if (n_offsets < 1) throw std::invalid_argument("dither_offsets: n_offsets must be >= 1");
  std::vector<Offset> offsets{Offset{0.0, 0.0}};
  std::mt19937_64 rng(rng_seed);
  for (std::size_t i = 1; i < n_offsets; ++i) {
    const double dx = uniform_unit(rng);
    const double dy = uniform_unit(rng);
    offsets.push_back(Offset{dx, dy});
  }
  return offsets;
}

}  // namespace scaledim
