#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "scaledim/errors.hpp"
#include "scaledim/grid.hpp"

namespace scaledim {

/// C_q estimator: factorial pair counting n^[q]/N^[q] (integer q >= 2) or
/// plain powers (n/N)^q.
enum class Estimator { factorial, power };

inline const char* estimator_name(Estimator e) {
  return e == Estimator::factorial ? "factorial" : "power";
}

inline Estimator estimator_from_name(const std::string& name) {
  if (name == "factorial") return Estimator::factorial;
  if (name == "power") return Estimator::power;
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

namespace detail {

/// Neumaier-compensated accumulator; controls round-off over up to ~1e7 bins.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

inline bool integer_q(double q) { return q == std::floor(q); }

inline double pow_int(double base, std::uint64_t n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace detail

/// Normalized rank-q correlation sum of one histogram.
///   factorial: sum_i n_i(n_i-1)...(n_i-q+1) / [N(N-1)...(N-q+1)], integer q >= 2
///   power:     sum_i (n_i/N)^q, q >= 0 and q != 1
inline double correlation_sum(const CoarseHistogram& hist, double q, Estimator estimator) {
  const double n_total = static_cast<double>(hist.n_points);
  if (hist.n_points == 0) throw std::invalid_argument("correlation_sum: empty histogram");

  if (estimator == Estimator::factorial) {
    if (q < 2.0 || !detail::integer_q(q))
      throw std::invalid_argument("correlation_sum: factorial estimator needs integer q >= 2");
    const auto rank = static_cast<std::uint64_t>(q);
    if (hist.n_points < rank)
      throw InsufficientSample("correlation_sum: N = " + std::to_string(hist.n_points) +
                               " is below rank q = " + std::to_string(rank));
    detail::CompensatedSum acc;
    for (std::uint64_t n : hist.counts) {
      if (n < rank) continue;  // n^[q] = 0
      double term = 1.0;
      for (std::uint64_t t = 0; t < rank; ++t)
        term *= static_cast<double>(n - t) / (n_total - static_cast<double>(t));
      acc.add(term);
    }
    return acc.value();
  }

  if (q < 0.0) throw std::invalid_argument("correlation_sum: q must be >= 0");
  if (q == 1.0) throw std::invalid_argument("correlation_sum: power estimator undefined at q=1");
  if (q == 0.0) return static_cast<double>(hist.occupied());

  detail::CompensatedSum acc;
  if (detail::integer_q(q) && q <= 64.0) {
    const auto rank = static_cast<std::uint64_t>(q);
    for (std::uint64_t n : hist.counts)
      acc.add(detail::pow_int(static_cast<double>(n) / n_total, rank));
  } else {
    for (std::uint64_t n : hist.counts)
      acc.add(std::pow(static_cast<double>(n) / n_total, q));
  }
  return acc.value();
}

/// Shannon entropy -sum p ln p in nats (the q->1 limit).
inline double shannon_entropy(const CoarseHistogram& hist) {
  if (hist.n_points == 0) throw std::invalid_argument("shannon_entropy: empty histogram");
  const double n_total = static_cast<double>(hist.n_points);
  detail::CompensatedSum acc;
  for (std::uint64_t n : hist.counts) {
    const double p = static_cast<double>(n) / n_total;
    acc.add(-p * std::log(p));
  }
  return acc.value();
}

namespace detail {

/// Factorial applies only at integer q >= 2; q in {0,1} and fractional q
/// always use the power form.
inline Estimator effective_estimator(double q, Estimator requested) {
  if (requested == Estimator::factorial && q >= 2.0 && integer_q(q))
    return Estimator::factorial;
  return Estimator::power;
}

}  // namespace detail

/// Renyi entropy of a single histogram, S_q = ln(C_q)/(1-q), S_1 by the
/// l'Hopital limit. Natural-log units throughout.
inline double renyi_entropy_hist(const CoarseHistogram& hist, double q,
                                 Estimator estimator = Estimator::power) {
  if (q < 0.0) throw std::invalid_argument("renyi_entropy_hist: q must be >= 0");
  if (q == 1.0) return shannon_entropy(hist);
  const double c = correlation_sum(hist, q, detail::effective_estimator(q, estimator));
  return std::log(c) / (1.0 - q);
}

namespace detail {

/// Entropies for every q at one scale point, with the dithering mean taken
/// over C_q inside the logarithm; for q=1 the mean is over the Shannon
/// entropies (the q->1 limit of the dithered family); for q=0 the power sum
/// is the occupied-bin count M, so S_0 = ln(mean M).
inline std::vector<double> scale_entropies(const MicroGrid& grid, const ScalePoint& sp,
                                           const std::vector<double>& qs,
                                           const std::vector<Offset>& offsets,
                                           Estimator estimator) {
  std::vector<double> acc(qs.size(), 0.0);
  for (const Offset& offset : offsets) {
    const CoarseHistogram hist = rebin(grid, sp.k, offset);
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      const double q = qs[qi];
      if (q == 1.0)
        acc[qi] += shannon_entropy(hist);
      else
        acc[qi] += correlation_sum(hist, q, effective_estimator(q, estimator));
    }
  }
  const auto n_off = static_cast<double>(offsets.size());
  std::vector<double> s(qs.size());
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    const double mean = acc[qi] / n_off;
    s[qi] = qs[qi] == 1.0 ? mean : std::log(mean) / (1.0 - qs[qi]);
  }
  return s;
}

}  // namespace detail

/// Dithered Renyi entropy at one scale point (nats).
inline double renyi_entropy(const MicroGrid& grid, const ScalePoint& sp, double q,
                            const std::vector<Offset>& offsets,
                            Estimator estimator = Estimator::power) {
  if (offsets.empty()) throw std::invalid_argument("renyi_entropy: offsets must be non-empty");
  if (q < 0.0) throw std::invalid_argument("renyi_entropy: q must be >= 0");
  return detail::scale_entropies(grid, sp, {q}, offsets, estimator)[0];
}

struct ScanMeta {
  std::uint64_t n_points = 0;
  std::size_t n_offsets = 1;
  Estimator estimator = Estimator::factorial;
  std::string generator;
  std::uint64_t rng_seed = 0;
};

/// Entropies S_q(e) on an ordered scale schedule, per q, in nats.
struct ScaleScan {
  std::vector<ScalePoint> schedule;
  std::vector<double> qs;
  std::vector<double> s;  // row-major [scale][q]
  double boundary = 0.0;  // L
  ScanMeta meta{};

  double s_at(std::size_t scale_idx, std::size_t q_idx) const {
    return s[scale_idx * qs.size() + q_idx];
  }

  std::size_t q_index(double q) const {
    for (std::size_t i = 0; i < qs.size(); ++i)
      if (std::fabs(qs[i] - q) <= 1e-12) return i;
    throw Error("q = " + std::to_string(q) + " is not in this scan");
  }

  Estimator effective_estimator(double q) const {
    return detail::effective_estimator(q, meta.estimator);
  }

  /// ln e at a schedule point (natural log of the absolute scale).
  double ln_e(std::size_t scale_idx) const { return std::log(schedule[scale_idx].e); }

  /// ln(L/e) at a schedule point.
  double ln_l_over_e(std::size_t scale_idx) const {
    return std::log(boundary / schedule[scale_idx].e);
  }

  bool schedule_matches(const ScaleScan& other) const {
    return schedule == other.schedule && qs == other.qs;
  }
};

/// Full S_q(e) matrix over a schedule. Scale points are independent work
/// items distributed over `threads` workers (0 = hardware concurrency);
/// results are identical for any worker count.
inline ScaleScan entropy_scan(const MicroGrid& grid, std::vector<ScalePoint> schedule,
                              std::vector<double> qs, const std::vector<Offset>& offsets,
                              Estimator estimator = Estimator::factorial,
                              unsigned threads = 0) {
  if (schedule.empty()) throw std::invalid_argument("entropy_scan: schedule must be non-empty");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i - 1].k >= schedule[i].k)
      throw std::invalid_argument("entropy_scan: schedule must be strictly increasing");
  if (qs.empty()) throw std::invalid_argument("entropy_scan: q list must be non-empty");
  for (double q : qs)
    if (q < 0.0 || !std::isfinite(q)) throw std::invalid_argument("entropy_scan: q must be >= 0");
  if (offsets.empty()) throw std::invalid_argument("entropy_scan: offsets must be non-empty");

  ScaleScan scan;
  scan.schedule = std::move(schedule);
  scan.qs = std::move(qs);
  scan.boundary = grid.boundary();
  scan.meta.n_points = grid.n_points;
  scan.meta.n_offsets = offsets.size();
  scan.meta.estimator = estimator;
  scan.s.resize(scan.schedule.size() * scan.qs.size());

  unsigned n_workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  n_workers = std::max(1u, std::min<unsigned>(n_workers,
                                              static_cast<unsigned>(scan.schedule.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    try {
      for (;;) {
        const std::size_t si = next.fetch_add(1);
        if (si >= scan.schedule.size()) return;
        const std::vector<double> row =
            detail::scale_entropies(grid, scan.schedule[si], scan.qs, offsets, estimator);
        std::copy(row.begin(), row.end(), scan.s.begin() + si * scan.qs.size());
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return scan;
}

}  // namespace scaledim
