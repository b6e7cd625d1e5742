#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "scaledim/dimension.hpp"
#include "scaledim/entropy.hpp"
#include "scaledim/errors.hpp"

namespace scaledim {

struct KullbackResult {
  double kullback = 0.0;  // sum z_qi ln(z_qi / p_i), non-negative
  double ds_dq = 0.0;     // -kullback / (1-q)^2
};

/// Kullback sum controlling the sign of the entropy q-derivative, with
/// z_qi = p_i^q / sum_k p_k^q. q = 1 is excluded (singular prefactor); the
/// q = 1 neighborhood is covered by the finite-difference route below.
inline KullbackResult kullback_check(const CoarseHistogram& hist, double q) {
  if (q == 1.0) throw std::invalid_argument("kullback_check: q = 1 is singular");
  if (q < 0.0) throw std::invalid_argument("kullback_check: q must be >= 0");
  if (hist.n_points == 0) throw std::invalid_argument("kullback_check: empty histogram");

  const double n_total = static_cast<double>(hist.n_points);
  detail::CompensatedSum norm;
  for (std::uint64_t n : hist.counts)
    norm.add(std::pow(static_cast<double>(n) / n_total, q));
  const double t = norm.value();

  detail::CompensatedSum acc;
  for (std::uint64_t n : hist.counts) {
    const double p = static_cast<double>(n) / n_total;
    const double z = std::pow(p, q) / t;
    acc.add(z * std::log(z / p));
  }
  KullbackResult result;
  result.kullback = acc.value();
  result.ds_dq = -result.kullback / ((1.0 - q) * (1.0 - q));
  return result;
}

/// Central finite difference of S_q in q for one histogram, power estimator.
inline double q_derivative_fd(const CoarseHistogram& hist, double q, double dq) {
  if (!(dq > 0.0)) throw std::invalid_argument("q_derivative_fd: dq must be > 0");
  if (q - dq < 0.0) throw std::invalid_argument("q_derivative_fd: q - dq must be >= 0");
  const double hi = renyi_entropy_hist(hist, q + dq, Estimator::power);
  const double lo = renyi_entropy_hist(hist, q - dq, Estimator::power);
  return (hi - lo) / (2.0 * dq);
}

/// Same finite difference on the dithered entropy at one scale point.
inline double q_derivative_fd(const MicroGrid& grid, const ScalePoint& sp, double q, double dq,
                              const std::vector<Offset>& offsets) {
  if (!(dq > 0.0)) throw std::invalid_argument("q_derivative_fd: dq must be > 0");
  if (q - dq < 0.0) throw std::invalid_argument("q_derivative_fd: q - dq must be >= 0");
  const std::vector<double> s =
      detail::scale_entropies(grid, sp, {q + dq, q - dq}, offsets, Estimator::power);
  return (s[0] - s[1]) / (2.0 * dq);
}

/// Dimension transport between two schedule-matched scans: per-midpoint
/// Delta d_q = d_q^B - d_q^A and the information accumulated from the
/// common anchor (largest scale) downward, I = -sum Delta d * Delta ln e.
struct TransportProfile {
  double q = 0.0;
  double anchor_log10 = 0.0;
  std::vector<double> mid_log10;
  std::vector<double> delta_d;
  std::vector<double> information;  // I at each interval's lower edge, nats
  double identity_residual = 0.0;   // max |dS(e) - dS(anchor) + I(e)| seen
};

inline TransportProfile dimension_transport(const ScaleScan& scan_a, const ScaleScan& scan_b,
                                            double q) {
  if (!scan_a.schedule_matches(scan_b))
    throw ScheduleMismatch("dimension_transport: scans have different schedules or q grids");
  if (scan_a.schedule.size() < 2)
    throw std::invalid_argument("dimension_transport: need at least 2 scale points");
  const std::size_t qi = scan_a.q_index(q);
  const std::size_t n = scan_a.schedule.size();
  const std::size_t anchor = n - 1;

  TransportProfile profile;
  profile.q = q;
  profile.anchor_log10 = scan_a.schedule[anchor].log10_e_over_L;
  profile.mid_log10.resize(n - 1);
  profile.delta_d.resize(n - 1);
  profile.information.resize(n - 1);

  const double ds_anchor = scan_b.s_at(anchor, qi) - scan_a.s_at(anchor, qi);
  double info = 0.0;  // I at the anchor is 0 by construction
  for (std::size_t i = n - 1; i-- > 0;) {
    const double dln = scan_a.ln_e(i + 1) - scan_a.ln_e(i);
    const double ds_lo = scan_b.s_at(i, qi) - scan_a.s_at(i, qi);
    const double ds_hi = scan_b.s_at(i + 1, qi) - scan_a.s_at(i + 1, qi);
    const double delta_d = (ds_lo - ds_hi) / dln;
    info -= delta_d * dln;
    profile.mid_log10[i] = 0.5 * (scan_a.schedule[i].log10_e_over_L +
                                  scan_a.schedule[i + 1].log10_e_over_L);
    profile.delta_d[i] = delta_d;
    profile.information[i] = info;
    const double residual = std::fabs(ds_lo - ds_anchor + info);
    if (residual > profile.identity_residual) profile.identity_residual = residual;
  }
  return profile;
}

/// Ordering diagnostics across the q grid: entropy ordering must hold;
/// pointwise dimension ordering is informational (it alternates on real
/// attractors); running averages from the anchor are expected to order for
/// large intervals.
struct MonotonicityReport {
  bool entropy_ordered = true;
  std::vector<std::size_t> entropy_violations;    // scale indices
  bool pointwise_d_ordered = true;
  std::vector<std::size_t> pointwise_violations;  // midpoint indices
  bool running_ordered = true;
  std::vector<std::size_t> running_violations;    // profile point indices
};

inline MonotonicityReport monotonicity_report(const ScaleScan& scan,
                                              const std::vector<double>& qs,
                                              std::size_t anchor_idx,
                                              double tol_entropy = 1e-12,
                                              double tol_dimension = 0.01) {
  if (qs.size() < 2)
    throw std::invalid_argument("monotonicity_report: need at least 2 q values");
  for (std::size_t i = 1; i < qs.size(); ++i)
    if (!(qs[i - 1] < qs[i]))
      throw std::invalid_argument("monotonicity_report: q list must be increasing");

  MonotonicityReport report;
  std::vector<std::size_t> q_idx(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) q_idx[i] = scan.q_index(qs[i]);

  for (std::size_t si = 0; si < scan.schedule.size(); ++si) {
    for (std::size_t i = 1; i < qs.size(); ++i) {
      if (scan.s_at(si, q_idx[i]) > scan.s_at(si, q_idx[i - 1]) + tol_entropy) {
        report.entropy_ordered = false;
        report.entropy_violations.push_back(si);
        break;
      }
    }
  }

  std::vector<DimensionProfile> profiles;
  profiles.reserve(qs.size());
  for (double q : qs) profiles.push_back(scale_local(scan, q));
  for (std::size_t mi = 0; mi < profiles[0].d.size(); ++mi) {
    for (std::size_t i = 1; i < qs.size(); ++i) {
      if (profiles[i].d[mi] > profiles[i - 1].d[mi] + tol_dimension) {
        report.pointwise_d_ordered = false;
        report.pointwise_violations.push_back(mi);
        break;
      }
    }
  }

  std::vector<AverageProfile> averages;
  averages.reserve(qs.size());
  for (double q : qs) averages.push_back(running_average(scan, q, anchor_idx));
  for (std::size_t pi = 0; pi < averages[0].dbar.size(); ++pi) {
    for (std::size_t i = 1; i < qs.size(); ++i) {
      if (averages[i].dbar[pi] > averages[i - 1].dbar[pi] + tol_dimension) {
        report.running_ordered = false;
        report.running_violations.push_back(pi);
        break;
      }
    }
  }
  return report;
}

}  // namespace scaledim
