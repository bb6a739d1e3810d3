#pragma once

// Sampled continuous paths and their space discretization at mesh a:
// tau_k = inf{t > tau_{k-1} : |M_t - M_{tau_{k-1}}| = a}, M^a constant
// between crossings.  Also the characteristic-function side: step-function
// integrals, the finite cos-product given [M^a], its Gaussian limit, and the
// empirical comparison E[exp(i int h dM)] vs E[exp(-1/2 int h^2 d<M>)].

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ocone/lattice_path.hpp"

namespace ocone {

namespace detail {

inline void check_grid(std::span<const double> times, std::span<const double> values, const char* what) {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument(std::string(what) + ": times and values must be non-empty and aligned");
  if (times.front() != 0.0) throw std::invalid_argument(std::string(what) + ": grid must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument(std::string(what) + ": non-monotone time grid at index " + std::to_string(i));
}

/// Linear interpolation on a sorted grid; t must lie in [times.front(), times.back()].
inline double interpolate(std::span<const double> times, std::span<const double> values, double t) {
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto i = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[i - 1], t1 = times[i];
  const double x0 = values[i - 1], x1 = values[i];
  if (t == t0) return x0;
  return x0 + (x1 - x0) * (t - t0) / (t1 - t0);
}

}  // namespace detail

struct SampledContinuousPath {
  std::vector<double> times;
  std::vector<double> values;
  /// Set when values are lattice multiples reached exactly at samples, so
  /// level crossings are observed without interpolation.
  bool exact_crossing = false;

  SampledContinuousPath() : times{0.0}, values{0.0} {}
  SampledContinuousPath(std::vector<double> t, std::vector<double> x, bool exact = false)
      : times(std::move(t)), values(std::move(x)), exact_crossing(exact) {
    detail::check_grid(times, values, "SampledContinuousPath");
    if (values.front() != 0.0) throw std::invalid_argument("SampledContinuousPath: path must start at 0");
  }

  [[nodiscard]] double horizon() const { return times.back(); }
  [[nodiscard]] double value_at(double t) const { return detail::interpolate(times, values, t); }
};

/// <M>_t on a grid; linearly interpolated in between.
struct QVRecord {
  std::vector<double> times;
  std::vector<double> values;

  QVRecord() : times{0.0}, values{0.0} {}
  QVRecord(std::vector<double> t, std::vector<double> v) : times(std::move(t)), values(std::move(v)) {
    detail::check_grid(times, values, "QVRecord");
    if (values.front() != 0.0) throw std::invalid_argument("QVRecord: must start at 0");
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] < values[i - 1]) throw std::invalid_argument("QVRecord: must be nondecreasing");
  }

  [[nodiscard]] double horizon() const { return times.back(); }
  [[nodiscard]] double at(double t) const { return detail::interpolate(times, values, t); }
};

/// h = sum_j lambda_j 1_{]t_{j-1}, t_j]} with t_0 = 0.
struct StepFunction {
  std::vector<double> breakpoints;   // t_0 = 0 < t_1 < ... < t_k
  std::vector<double> coefficients;  // lambda_1 .. lambda_k

  StepFunction(std::vector<double> breaks, std::vector<double> lambdas)
      : breakpoints(std::move(breaks)), coefficients(std::move(lambdas)) {
    if (breakpoints.size() != coefficients.size() + 1 || coefficients.empty())
      throw std::invalid_argument("StepFunction: need k+1 breakpoints for k >= 1 coefficients");
    if (breakpoints.front() != 0.0) throw std::invalid_argument("StepFunction: first breakpoint must be 0");
    for (std::size_t j = 1; j < breakpoints.size(); ++j)
      if (!(breakpoints[j] > breakpoints[j - 1]))
        throw std::invalid_argument("StepFunction: breakpoints must be strictly increasing");
  }

  /// Breakpoints t_1..t_k given, t_0 = 0 prepended.
  static StepFunction from_breaks(const std::vector<double>& breaks, std::vector<double> lambdas) {
    std::vector<double> b{0.0};
    b.insert(b.end(), breaks.begin(), breaks.end());
    return StepFunction(std::move(b), std::move(lambdas));
  }

  [[nodiscard]] std::size_t size() const { return coefficients.size(); }
  [[nodiscard]] double last_break() const { return breakpoints.back(); }
};

// ---------------------------------------------------------------------------
// Discretization

/// Space discretization at mesh a.  Crossings between samples are located by
/// linear interpolation; on exact-crossing inputs they fall on samples.
inline LatticePath discretize(const SampledContinuousPath& p, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("discretize: mesh must be positive");
  detail::check_grid(p.times, p.values, "discretize");

  std::vector<double> jump_times;
  std::vector<int> jump_signs;
  long level = 0;
  for (std::size_t i = 0; i + 1 < p.times.size(); ++i) {
    const double t0 = p.times[i], t1 = p.times[i + 1];
    const double x0 = p.values[i], x1 = p.values[i + 1];
    for (;;) {
      const double up = static_cast<double>(level + 1) * a;
      const double dn = static_cast<double>(level - 1) * a;
      int sign = 0;
      double target = 0.0;
      if (x1 >= up) {
        sign = 1;
        target = up;
      } else if (x1 <= dn) {
        sign = -1;
        target = dn;
      } else {
        break;
      }
      double tc = t1;
      if (x1 != target) {
        if (p.exact_crossing)
          throw std::invalid_argument("discretize: exact-crossing path overshoots a lattice level at t = " +
                                      std::to_string(t1));
        tc = t0 + (target - x0) / (x1 - x0) * (t1 - t0);
        tc = std::clamp(tc, t0, t1);
      }
      if (!jump_times.empty() && !(tc > jump_times.back())) tc = std::nextafter(jump_times.back(), t1 + 1.0);
      jump_times.push_back(tc);
      jump_signs.push_back(sign);
      level += sign;
    }
  }
  return LatticePath(a, std::move(jump_times), std::move(jump_signs), p.horizon());
}

struct GapReport {
  double gap = 0.0;    // max_i |x_i - M^a(t_i)|
  double bound = 0.0;  // the mesh a
  double slack = 0.0;  // 0 on exact-crossing inputs, else the largest sample increment
  [[nodiscard]] bool within_bound() const { return gap <= bound + slack; }
};

inline GapReport sup_gap(const SampledContinuousPath& p, const LatticePath& l) {
  if (p.horizon() != l.horizon())
    throw std::invalid_argument("sup_gap: path horizon " + std::to_string(p.horizon()) + " differs from lattice horizon " +
                                std::to_string(l.horizon()));
  GapReport r;
  r.bound = l.mesh();
  std::size_t j = 0;
  long level = 0;
  const auto& jt = l.jump_times();
  const auto& js = l.jump_signs();
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    while (j < jt.size() && jt[j] <= p.times[i]) level += js[static_cast<std::size_t>(j++)];
    r.gap = std::max(r.gap, std::abs(p.values[i] - l.mesh() * static_cast<double>(level)));
    if (!p.exact_crossing && i > 0) r.slack = std::max(r.slack, std::abs(p.values[i] - p.values[i - 1]));
  }
  return r;
}

/// Theta^level on a sampled path: the first time the linear interpolant
/// reaches the level is inserted as a sample, and the path is mirrored about
/// the level afterwards.
inline SampledContinuousPath reflect(const SampledContinuousPath& p, double level) {
  std::vector<double> t = p.times;
  std::vector<double> x = p.values;
  std::size_t pivot = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == level) {
      pivot = i;
      break;
    }
    if (i + 1 < x.size() && (x[i] - level) * (x[i + 1] - level) < 0.0) {
      const double tc = t[i] + (level - x[i]) / (x[i + 1] - x[i]) * (t[i + 1] - t[i]);
      if (tc > t[i] && tc < t[i + 1]) {
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(i) + 1, tc);
        x.insert(x.begin() + static_cast<std::ptrdiff_t>(i) + 1, level);
        pivot = i + 1;
        break;
      }
    }
  }
  for (std::size_t i = pivot + 1; i < x.size(); ++i) x[i] = 2.0 * level - x[i];
  return SampledContinuousPath(std::move(t), std::move(x), p.exact_crossing);
}

// ---------------------------------------------------------------------------
// Step-function integrals and the characteristic functional

namespace detail {

template <class ValueAt>
double step_integral(const StepFunction& h, double horizon, ValueAt&& value_at) {
  if (h.last_break() > horizon)
    throw std::invalid_argument("stochastic_step_integral: breakpoint " + std::to_string(h.last_break()) +
                                " beyond horizon " + std::to_string(horizon));
  double sum = 0.0;
  double prev = value_at(h.breakpoints.front());
  for (std::size_t j = 1; j < h.breakpoints.size(); ++j) {
    const double cur = value_at(h.breakpoints[j]);
    sum += h.coefficients[j - 1] * (cur - prev);
    prev = cur;
  }
  return sum;
}

}  // namespace detail

/// sum_j lambda_j (M_{t_j} - M_{t_{j-1}}).
inline double stochastic_step_integral(const SampledContinuousPath& p, const StepFunction& h) {
  return detail::step_integral(h, p.horizon(), [&](double t) { return p.value_at(t); });
}

inline double stochastic_step_integral(const LatticePath& l, const StepFunction& h) {
  return detail::step_integral(h, l.horizon(), [&](double t) { return l.value_at(t); });
}

/// int h^2 d<M> = sum_j lambda_j^2 (<M>_{t_j} - <M>_{t_{j-1}}).
inline double step_energy(const QVRecord& qv, const StepFunction& h) {
  if (h.last_break() > qv.horizon())
    throw std::invalid_argument("step_energy: breakpoint beyond quadratic-variation horizon");
  double sum = 0.0;
  for (std::size_t j = 1; j < h.breakpoints.size(); ++j) {
    const double lam = h.coefficients[j - 1];
    sum += lam * lam * (qv.at(h.breakpoints[j]) - qv.at(h.breakpoints[j - 1]));
  }
  return sum;
}

/// prod_j cos(lambda_j a)^(u_j - u_{j-1}), u_j = floor(<M>_{t_j} / a^2).
/// Requires |lambda_j| a < pi/2 so every factor is positive.
inline double cos_product(const QVRecord& qv, const StepFunction& h, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("cos_product: mesh must be positive");
  if (h.last_break() > qv.horizon()) throw std::invalid_argument("cos_product: breakpoint beyond horizon");
  double log_sum = 0.0;
  double u_prev = std::floor(qv.at(h.breakpoints.front()) / (a * a));
  for (std::size_t j = 1; j < h.breakpoints.size(); ++j) {
    const double x = h.coefficients[j - 1] * a;
    if (std::abs(x) >= std::numbers::pi / 2)
      throw std::invalid_argument("cos_product: |lambda| * a = " + std::to_string(std::abs(x)) + " is not below pi/2");
    const double u = std::floor(qv.at(h.breakpoints[j]) / (a * a));
    const double s = std::sin(x / 2);
    log_sum += (u - u_prev) * std::log1p(-2.0 * s * s);  // log cos x, accurate near 0
    u_prev = u;
  }
  return std::exp(log_sum);
}

/// exp(-1/2 sum_j lambda_j^2 (omega_{t_j} - omega_{t_{j-1}})).
inline double limit_exponential(const QVRecord& qv, const StepFunction& h) { return std::exp(-0.5 * step_energy(qv, h)); }

/// Least-squares slope of log(error) against log(mesh).
inline double convergence_order(std::span<const double> meshes, std::span<const double> errors) {
  if (meshes.size() != errors.size() || meshes.size() < 2)
    throw std::invalid_argument("convergence_order: need at least two aligned points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(meshes.size());
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const double x = std::log(meshes[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ContinuousSample {
  SampledContinuousPath path;
  QVRecord qv;
};

struct CfReport {
  std::complex<double> lhs;     // mean exp(i int h dM)
  double rhs = 0.0;             // mean exp(-1/2 int h^2 d<M>)
  double standard_error = 0.0;  // sqrt(se_lhs^2 + se_rhs^2)
  double distance = 0.0;        // |lhs - rhs|
  double z = 3.0;
  std::size_t n = 0;
  bool pass = false;
};

/// Empirical check of E[exp(i int h dM)] = E[exp(-1/2 int h^2 d<M>)].
/// Pass iff |lhs - rhs| <= z * sqrt(se_lhs^2 + se_rhs^2), where se_lhs
/// combines the real and imaginary sample variances.
template <class GetIntegral, class GetEnergy>
CfReport cf_ocone_test_by(std::size_t n, GetIntegral&& integral, GetEnergy&& energy, double z = 3.0) {
  if (n < 2) throw std::invalid_argument("cf_ocone_test: need at least 2 samples");
  double sc = 0, ss = 0, sr = 0, scc = 0, sss = 0, srr = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double i = integral(k);
    const double c = std::cos(i), s = std::sin(i), r = std::exp(-0.5 * energy(k));
    sc += c;
    ss += s;
    sr += r;
    scc += c * c;
    sss += s * s;
    srr += r * r;
  }
  const auto dn = static_cast<double>(n);
  const auto var = [&](double s1, double s2) { return std::max(0.0, (s2 - s1 * s1 / dn) / (dn - 1)); };
  CfReport r;
  r.n = n;
  r.z = z;
  r.lhs = {sc / dn, ss / dn};
  r.rhs = sr / dn;
  r.standard_error = std::sqrt((var(sc, scc) + var(ss, sss) + var(sr, srr)) / dn);
  r.distance = std::abs(r.lhs - r.rhs);
  r.pass = r.distance <= z * r.standard_error;
  return r;
}

inline CfReport cf_ocone_test(std::span<const ContinuousSample> samples, const StepFunction& h, double z = 3.0) {
  if (samples.empty()) throw std::invalid_argument("cf_ocone_test: empty sample set");
  return cf_ocone_test_by(
      samples.size(), [&](std::size_t k) { return stochastic_step_integral(samples[k].path, h); },
      [&](std::size_t k) { return step_energy(samples[k].qv, h); }, z);
}

}  // namespace ocone
