#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scaledim/errors.hpp"
#include "scaledim/geometry.hpp"

namespace scaledim {

struct MapParams {
  double a = 1.4;
  double b = 0.3;
};

struct OrbitMeta {
  std::string generator;  // "henon", "lattice", "cantor", "file"
  MapParams params{};
  Point2 seed{};
  std::uint64_t rng_seed = 0;
  std::size_t n_discard = 0;
  std::size_t n_keep = 0;
  std::string descriptor;  // synthetic generator settings, free-form
};

/// A finite point-set sample together with how it was produced.
struct Orbit {
  std::vector<Point2> points;
  OrbitMeta meta;

  std::size_t size() const { return points.size(); }
};

/// One step of the Henon map: (x, y) -> (a + b*y - x^2, x).
inline Point2 iterate_henon(Point2 p, MapParams mp) {
  return Point2{mp.a + mp.b * p.y - p.x * p.x, p.x};
}

/// Uniform double in [0,1) from the top 53 bits; stable across standard
/// library implementations, unlike uniform_real_distribution.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Iterates the map from `seed`, discards the transient, and keeps the next
/// n_keep states. Throws EscapedOrbit with the offending iteration index
/// (0 = the seed itself) as soon as any state leaves the trapping square.
inline Orbit henon_orbit(MapParams params, Point2 seed, std::size_t n_discard,
                         std::size_t n_keep, double escape_bound = 1.8) {
  if (n_keep < 1) throw std::invalid_argument("henon_orbit: n_keep must be >= 1");
  if (!(escape_bound > 0)) throw std::invalid_argument("henon_orbit: escape_bound must be > 0");

  Orbit orbit;
  orbit.points.reserve(n_keep);
  orbit.meta = OrbitMeta{"henon", params, seed, 0, n_discard, n_keep, ""};

  Point2 p = seed;
  const std::size_t total = n_discard + n_keep;
  for (std::size_t step = 0; step < total; ++step) {
    // NaN fails both comparisons, so non-finite states are caught here too.
    if (!(std::fabs(p.x) <= escape_bound && std::fabs(p.y) <= escape_bound))
      throw EscapedOrbit(step);
    if (step >= n_discard) orbit.points.push_back(p);
    p = iterate_henon(p, params);
  }
  return orbit;
}

/// Draws seeds uniformly from [-0.5,0.5]^2 and retries on escape.
inline Orbit henon_orbit_seeded(MapParams params, std::uint64_t rng_seed,
                                std::size_t n_discard, std::size_t n_keep,
                                double escape_bound = 1.8, int max_retries = 64) {
  std::mt19937_64 rng(rng_seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Point2 seed{uniform_unit(rng) - 0.5, uniform_unit(rng) - 0.5};
    try {
      Orbit orbit = henon_orbit(params, seed, n_discard, n_keep, escape_bound);
      orbit.meta.rng_seed = rng_seed;
      return orbit;
    } catch (const EscapedOrbit&) {
      // seed outside the trapping basin, draw again
    }
  }
  throw Error("henon_orbit_seeded: no trapped seed found after " +
              std::to_string(max_retries) + " attempts");
}

/// m x m points at the cell centers of a regular subdivision of `box`.
/// An analytic reference with dimension exactly 2.
inline Orbit uniform_lattice(std::size_t m, const Box2& box) {
  if (m < 1) throw std::invalid_argument("uniform_lattice: m must be >= 1");
  box.validate();

  Orbit orbit;
  orbit.points.reserve(m * m);
  const double dx = box.span_x() / static_cast<double>(m);
  const double dy = box.span_y() / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double y = box.y_min + (static_cast<double>(j) + 0.5) * dy;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = box.x_min + (static_cast<double>(i) + 0.5) * dx;
      orbit.points.push_back(Point2{x, y});
    }
  }
  orbit.meta.generator = "lattice";
  orbit.meta.n_keep = orbit.points.size();
  orbit.meta.descriptor = "m=" + std::to_string(m);
  return orbit;
}

namespace detail {

/// Centers of the retained intervals of the depth-level middle-thirds
/// construction, as fractions of the unit interval, in ascending order.
inline std::vector<double> cantor_centers(int depth) {
  const double width = std::pow(3.0, -depth);
  std::vector<double> lefts{0.0};
  for (int level = 1; level <= depth; ++level) {
    const double shift = 2.0 * std::pow(3.0, -level);
    std::vector<double> next;
    next.reserve(lefts.size() * 2);
    for (double l : lefts) {
      next.push_back(l);
      next.push_back(l + shift);
    }
    lefts = std::move(next);
  }
  for (double& l : lefts) l += 0.5 * width;
  return lefts;
}

}  // namespace detail

/// Middle-thirds Cantor dust: one point at the center of each retained cell,
/// 2^depth per Cantor axis. With axis_count=1 the y coordinate sits at the
/// box center, giving self-similarity dimension ln2/ln3 exactly.
inline Orbit cantor_dust(int depth, int axis_count, const Box2& box) {
  if (depth < 1) throw std::invalid_argument("cantor_dust: depth must be >= 1");
  if (axis_count != 1 && axis_count != 2)
    throw std::invalid_argument("cantor_dust: axis_count must be 1 or 2");
  box.validate();

  const std::vector<double> centers = detail::cantor_centers(depth);
  Orbit orbit;
  if (axis_count == 1) {
    const double y = box.y_min + 0.5 * box.span_y();
    orbit.points.reserve(centers.size());
    for (double c : centers) orbit.points.push_back(Point2{box.x_min + c * box.span_x(), y});
  } else {
    orbit.points.reserve(centers.size() * centers.size());
    for (double cy : centers) {
      const double y = box.y_min + cy * box.span_y();
      for (double cx : centers)
        orbit.points.push_back(Point2{box.x_min + cx * box.span_x(), y});
    }
  }
  orbit.meta.generator = "cantor";
  orbit.meta.n_keep = orbit.points.size();
  orbit.meta.descriptor =
      "depth=" + std::to_string(depth) + ",axes=" + std::to_string(axis_count);
  return orbit;
}

}  // namespace scaledim
