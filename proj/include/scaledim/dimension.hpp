#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "scaledim/entropy.hpp"
#include "scaledim/errors.hpp"

namespace scaledim {

/// Finite-difference scale-local dimensions d_q(e) at scale-interval
/// midpoints, one value per adjacent schedule pair.
struct DimensionProfile {
  double q = 0.0;
  std::vector<double> mid_log10;     // log10(e/L) at interval midpoints
  std::vector<double> d;             // d_q per interval
  std::vector<double> delta_log10;   // per-interval resolution in log10(e)

  /// tau_q = (q-1) d_q, the correlation-integral slope.
  std::vector<double> tau() const {
    std::vector<double> t(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) t[i] = (q - 1.0) * d[i];
    return t;
  }
};

/// Running scale averages descending from an anchor scale e1.
struct AverageProfile {
  double q = 0.0;
  double anchor_log10 = 0.0;
  std::vector<double> log10_e;  // log10(e/L), ascending, all below the anchor
  std::vector<double> dbar;
};

namespace detail {

inline std::size_t schedule_index_by_scale(const ScaleScan& scan, double e, const char* what) {
  for (std::size_t i = 0; i < scan.schedule.size(); ++i)
    if (std::fabs(scan.schedule[i].e - e) <= 1e-9 * scan.schedule[i].e) return i;
  if (std::string(what) == "anchor")
    throw AnchorNotInSchedule("scale e = " + std::to_string(e) + " is not a schedule point");
  throw BoundsNotInSchedule("scale e = " + std::to_string(e) + " is not a schedule point");
}

}  // namespace detail

/// Nearest schedule index to a requested log10(e/L) value.
inline std::size_t nearest_scale_index(const ScaleScan& scan, double log10_e_over_l) {
  std::size_t best = 0;
  double best_dist = std::fabs(scan.schedule[0].log10_e_over_L - log10_e_over_l);
  for (std::size_t i = 1; i < scan.schedule.size(); ++i) {
    const double dist = std::fabs(scan.schedule[i].log10_e_over_L - log10_e_over_l);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

/// Scale-local dimension between adjacent schedule points:
/// d_q = [S_q(e_a) - S_q(e_b)] / [ln e_b - ln e_a], midpoint at the
/// log-scale center. No smoothing; the structure is the signal.
inline DimensionProfile scale_local(const ScaleScan& scan, double q) {
  if (scan.schedule.size() < 2)
    throw std::invalid_argument("scale_local: need at least 2 scale points");
  const std::size_t qi = scan.q_index(q);

  DimensionProfile profile;
  profile.q = q;
  const std::size_t n = scan.schedule.size() - 1;
  profile.mid_log10.reserve(n);
  profile.d.reserve(n);
  profile.delta_log10.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ScalePoint& a = scan.schedule[i];
    const ScalePoint& b = scan.schedule[i + 1];
    const double dln = scan.ln_e(i + 1) - scan.ln_e(i);
    if (!(dln > 0.0))
      throw DegenerateInterval("scale_local: coincident schedule points at index " +
                               std::to_string(i));
    profile.d.push_back((scan.s_at(i, qi) - scan.s_at(i + 1, qi)) / dln);
    profile.mid_log10.push_back(0.5 * (a.log10_e_over_L + b.log10_e_over_L));
    profile.delta_log10.push_back(b.log10_e_over_L - a.log10_e_over_L);
  }
  return profile;
}

/// Interval mean of scale-local dimension between two schedule points:
/// [S_q(e_lo) - S_q(e_hi)] / [ln e_hi - ln e_lo].
inline double interval_average(const ScaleScan& scan, double q, std::size_t lo_idx,
                               std::size_t hi_idx) {
  if (lo_idx >= hi_idx || hi_idx >= scan.schedule.size())
    throw std::invalid_argument("interval_average: need lo < hi within the schedule");
  const std::size_t qi = scan.q_index(q);
  const double dln = scan.ln_e(hi_idx) - scan.ln_e(lo_idx);
  return (scan.s_at(lo_idx, qi) - scan.s_at(hi_idx, qi)) / dln;
}

inline double interval_average_by_scale(const ScaleScan& scan, double q, double e_lo,
                                        double e_hi) {
  if (!(e_lo < e_hi)) throw std::invalid_argument("interval_average: need e_lo < e_hi");
  const std::size_t lo = detail::schedule_index_by_scale(scan, e_lo, "bound");
  const std::size_t hi = detail::schedule_index_by_scale(scan, e_hi, "bound");
  return interval_average(scan, q, lo, hi);
}

/// Running average d-bar_q(e, e1) for every schedule point e below the
/// anchor e1. Telescoping makes this the resolution-weighted mean of the
/// scale-local values between e and e1.
inline AverageProfile running_average(const ScaleScan& scan, double q, std::size_t anchor_idx) {
  if (anchor_idx >= scan.schedule.size())
    throw AnchorNotInSchedule("running_average: anchor index out of range");
  if (anchor_idx == 0)
    throw std::invalid_argument("running_average: no schedule points below the anchor");
  if (scan.schedule[anchor_idx].e >= scan.boundary)
    throw std::invalid_argument("running_average: anchor must sit below the whole-box scale");
  const std::size_t qi = scan.q_index(q);

  AverageProfile profile;
  profile.q = q;
  profile.anchor_log10 = scan.schedule[anchor_idx].log10_e_over_L;
  const double ln_anchor = scan.ln_e(anchor_idx);
  const double s_anchor = scan.s_at(anchor_idx, qi);
  for (std::size_t i = 0; i < anchor_idx; ++i) {
    profile.log10_e.push_back(scan.schedule[i].log10_e_over_L);
    profile.dbar.push_back((scan.s_at(i, qi) - s_anchor) / (ln_anchor - scan.ln_e(i)));
  }
  return profile;
}

inline AverageProfile running_average_by_scale(const ScaleScan& scan, double q, double e1) {
  return running_average(scan, q, detail::schedule_index_by_scale(scan, e1, "anchor"));
}

/// Local averages over adjacent scale intervals (the solid-dot estimator).
/// Identical to the scale-local quotient on the same entropy rows.
inline std::vector<double> estimator_Di(const ScaleScan& scan, double q = 0.0) {
  return scale_local(scan, q).d;
}

/// Single-point estimates anchored at a reduced boundary L':
/// D'_i = S_q(e_i) / ln(L'/e_i).
struct DPrimeCurve {
  double l_prime = 0.0;
  std::vector<double> log10_e;
  std::vector<double> value;
};

inline DPrimeCurve estimator_Dprime(const ScaleScan& scan, double l_prime, double q = 0.0) {
  if (!(l_prime > 0.0) || l_prime > scan.boundary)
    throw std::invalid_argument("estimator_Dprime: need 0 < L' <= L");
  const std::size_t qi = scan.q_index(q);

  DPrimeCurve curve;
  curve.l_prime = l_prime;
  for (std::size_t i = 0; i < scan.schedule.size(); ++i) {
    const double denom = std::log(l_prime / scan.schedule[i].e);
    if (!(denom > 0.0))
      throw NonpositiveDenominator("estimator_Dprime: scale point e = " +
                                   std::to_string(scan.schedule[i].e) +
                                   " is not below L' = " + std::to_string(l_prime));
    curve.log10_e.push_back(scan.schedule[i].log10_e_over_L);
    curve.value.push_back(scan.s_at(i, qi) / denom);
  }
  return curve;
}

/// Ratio of weighted scale averages from the free-L chi^2 fit,
/// sum_i S_q(e_i) ln(L_eff/e_i) / sum_i ln^2(L_eff/e_i), over the schedule
/// points below L_eff. Favors smaller scales.
inline double estimator_chi2_ratio(const ScaleScan& scan, double q, double l_eff) {
  if (!(l_eff > 0.0)) throw std::invalid_argument("estimator_chi2_ratio: L_eff must be > 0");
  const std::size_t qi = scan.q_index(q);
  double num = 0.0;
  double den = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < scan.schedule.size(); ++i) {
    if (!(scan.schedule[i].e < l_eff)) continue;
    const double w = std::log(l_eff / scan.schedule[i].e);
    num += scan.s_at(i, qi) * w;
    den += w * w;
    ++used;
  }
  if (used == 0)
    throw std::invalid_argument("estimator_chi2_ratio: no scale points below L_eff");
  return num / den;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Free-intercept least squares of S_q on ln(1/e); the slope estimates the
/// dimension, the intercept carries the fitted d ln L.
inline LineFit fit_dimension(const ScaleScan& scan, double q = 0.0) {
  if (scan.schedule.size() < 2)
    throw std::invalid_argument("fit_dimension: need at least 2 scale points");
  const std::size_t qi = scan.q_index(q);
  const auto n = static_cast<double>(scan.schedule.size());

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < scan.schedule.size(); ++i) {
    const double x = -scan.ln_e(i);
    const double y = scan.s_at(i, qi);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double var = sxx - sx * sx / n;
  if (!(var > 0.0)) throw DegenerateAbscissa("fit_dimension: all scales equal");
  LineFit fit;
  fit.slope = (sxy - sx * sy / n) / var;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

/// Values of the limit-based estimator family computed from one scan;
/// every entry is reproducible from the scan alone.
struct EstimatorReport {
  double q = 0.0;
  DimensionProfile d_i;                       // adjacent-interval averages
  std::vector<DPrimeCurve> d_prime;           // one curve per requested L'
  std::vector<AverageProfile> d_double_prime; // one curve per requested anchor
  double l_eff = 0.0;
  double chi2_ratio = 0.0;
  LineFit fit{};
  double interval_lo_log10 = 0.0;
  double interval_hi_log10 = 0.0;
  double interval_mean = 0.0;
};

inline EstimatorReport make_estimator_report(const ScaleScan& scan, double q,
                                             const std::vector<double>& l_primes,
                                             const std::vector<std::size_t>& anchor_indices,
                                             double l_eff, std::size_t interval_lo_idx,
                                             std::size_t interval_hi_idx) {
  EstimatorReport report;
  report.q = q;
  report.d_i = scale_local(scan, q);
  for (double lp : l_primes) report.d_prime.push_back(estimator_Dprime(scan, lp, q));
  for (std::size_t ai : anchor_indices)
    report.d_double_prime.push_back(running_average(scan, q, ai));
  report.l_eff = l_eff;
  report.chi2_ratio = estimator_chi2_ratio(scan, q, l_eff);
  report.fit = fit_dimension(scan, q);
  report.interval_lo_log10 = scan.schedule[interval_lo_idx].log10_e_over_L;
  report.interval_hi_log10 = scan.schedule[interval_hi_idx].log10_e_over_L;
  report.interval_mean = interval_average(scan, q, interval_lo_idx, interval_hi_idx);
  return report;
}

}  // namespace scaledim
