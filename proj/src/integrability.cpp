#include "dbp/integrability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "dbp/errors.hpp"
#include "dbp/quadrature.hpp"

namespace dbp {
namespace {

constexpr int kDecades = 10;  // cutoffs span 10 orders of magnitude

double piece(const std::function<double(double)>& g, double a, double b) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-300;
  opt.max_segments = 600;
  return integrate(g, Interval(a, b), opt).value;
}

void check_monotone(const std::vector<double>& samples, const char* where) {
  // Samples are ordered toward the endpoint. Tolerate one early sign flip
  // (the pre only requires eventual monotonicity).
  int flips = 0;
  int prev_sign = 0;
  for (size_t i = samples.size() >= 12 ? samples.size() - 12 : 1;
       i < samples.size(); ++i) {
    const double d = samples[i] - samples[i - 1];
    if (d == 0.0) continue;
    const int sign = d > 0 ? 1 : -1;
    if (prev_sign != 0 && sign != prev_sign) ++flips;
    prev_sign = sign;
  }
  if (flips >= 2) {
    std::ostringstream msg;
    msg << "probe_integrability: integrand is not eventually monotone "
           "toward the "
        << where << " endpoint; classification refused";
    throw NumericError(msg.str());
  }
}

// increments[k] is the integral over the k-th decade toward the endpoint.
IntegrabilityClass classify(const std::vector<double>& increments) {
  std::vector<double> inc = increments;
  // Strip trailing exact zeros: the integrand has died out.
  while (!inc.empty() && inc.back() == 0.0) inc.pop_back();
  if (inc.empty()) return IntegrabilityClass::convergent;

  double total = 0.0;
  for (double v : inc) {
    if (!std::isfinite(v)) return IntegrabilityClass::divergent;
    total += v;
  }
  if (inc.size() < 4) return IntegrabilityClass::convergent;

  // Growing increments: clearly divergent.
  const size_t m = inc.size();
  if (inc[m - 1] > 1.02 * inc[m - 2] && inc[m - 2] > 1.02 * inc[m - 3] &&
      inc[m - 3] > 1.02 * inc[m - 4])
    return IntegrabilityClass::divergent;

  // Vanishingly small remaining contribution: convergent.
  if (inc[m - 1] <= 1e-9 * std::max(total, 1e-280))
    return IntegrabilityClass::convergent;

  // Borderline: estimate the decay exponent s of increment_k ~ k^{-s} from
  // the last pairs (midpoint index convention). The increment series sums
  // like sum k^{-s}: finite iff s > 1.
  std::vector<double> s_est;
  for (size_t k = m - 3; k < m; ++k) {
    if (!(inc[k - 1] > 0.0) || !(inc[k] > 0.0)) continue;
    const double num = std::log(inc[k - 1] / inc[k]);
    const double den = std::log((k + 0.5) / (k - 0.5));
    s_est.push_back(num / den);
  }
  if (s_est.empty()) return IntegrabilityClass::divergent;
  std::sort(s_est.begin(), s_est.end());
  const double s_med = s_est[s_est.size() / 2];
  return s_med > 1.1 ? IntegrabilityClass::convergent
                     : IntegrabilityClass::divergent;
}

// Probe an infinite tail: cutoffs at start + sign * 10^k.
IntegrabilityClass probe_tail(const std::function<double(double)>& g,
                              double start, int sign, const char* where) {
  std::vector<double> samples;
  for (int k = 0; k <= 2 * kDecades; ++k) {
    const double x = start + sign * std::pow(10.0, 0.5 * k);
    samples.push_back(g(x));
  }
  check_monotone(samples, where);

  std::vector<double> inc;
  for (int k = 0; k < kDecades; ++k) {
    const double a = start + sign * std::pow(10.0, k);
    const double b = start + sign * std::pow(10.0, k + 1);
    inc.push_back(sign > 0 ? piece(g, a, b) : piece(g, b, a));
  }
  return classify(inc);
}

// Probe a finite endpoint e approached from inside with step scale s0:
// cutoffs at e + dir * s0 * 10^{-k}.
IntegrabilityClass probe_endpoint(const std::function<double(double)>& g,
                                  double e, int dir, double s0,
                                  const char* where) {
  std::vector<double> samples;
  for (int k = 0; k <= 2 * kDecades; ++k)
    samples.push_back(g(e + dir * s0 * std::pow(10.0, -0.5 * k)));
  check_monotone(samples, where);

  std::vector<double> inc;
  for (int k = 0; k < kDecades; ++k) {
    const double a = e + dir * s0 * std::pow(10.0, -(k + 1));
    const double b = e + dir * s0 * std::pow(10.0, -k);
    inc.push_back(dir > 0 ? piece(g, a, b) : piece(g, b, a));
  }
  return classify(inc);
}

bool endpoint_is_singular(const std::function<double(double)>& g, double e,
                          int dir, double s0) {
  const double near = g(e + dir * s0 * 1e-8);
  const double far = g(e + dir * s0 * 1e-1);
  if (!std::isfinite(near)) return true;
  return near > 50.0 * (far + 1e-300);
}

}  // namespace

IntegrabilityClass probe_integrability(const std::function<double(double)>& g,
                                       Interval domain) {
  auto checked = [&](double x) {
    const double v = g(x);
    if (std::isnan(v))
      throw NumericError("probe_integrability: integrand returned NaN");
    if (v < 0.0)
      throw std::invalid_argument(
          "probe_integrability: integrand must be nonnegative");
    return v;
  };

  const bool lo_fin = domain.lower_finite();
  const bool hi_fin = domain.upper_finite();
  const double s0 =
      (lo_fin && hi_fin) ? 0.5 * (domain.upper - domain.lower) : 1.0;

  std::vector<IntegrabilityClass> verdicts;
  if (hi_fin) {
    if (endpoint_is_singular(checked, domain.upper, -1, s0))
      verdicts.push_back(probe_endpoint(checked, domain.upper, -1, s0, "upper"));
  } else {
    const double start = lo_fin ? domain.lower : 0.0;
    verdicts.push_back(probe_tail(checked, start, +1, "upper"));
  }
  if (lo_fin) {
    if (endpoint_is_singular(checked, domain.lower, +1, s0))
      verdicts.push_back(probe_endpoint(checked, domain.lower, +1, s0, "lower"));
  } else {
    const double start = hi_fin ? domain.upper : 0.0;
    verdicts.push_back(probe_tail(checked, start, -1, "lower"));
  }

  for (auto v : verdicts)
    if (v == IntegrabilityClass::divergent) return IntegrabilityClass::divergent;
  return IntegrabilityClass::convergent;
}

}  // namespace dbp
