#include "dbp/special.hpp"

#include <cmath>
#include <stdexcept>

namespace dbp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 15.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double w = 1.0 / (x * x);
  // Asymptotic series with Bernoulli coefficients through B14.
  double series = -1.0 / (2.0 * x) -
                  w * (1.0 / 12.0 -
                       w * (1.0 / 120.0 -
                            w * (1.0 / 252.0 -
                                 w * (1.0 / 240.0 -
                                      w * (1.0 / 132.0 -
                                           w * (691.0 / 32760.0 -
                                                w / 12.0))))));
  return acc + std::log(x) + series;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("trigamma: requires x > 0");
  double acc = 0.0;
  while (x < 15.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double w = 1.0 / (x * x);
  // psi'(x) = 1/x + 1/(2x^2) + sum B_{2k} x^{-(2k+1)}, truncated after B14.
  double series =
      1.0 / 6.0 -
      w * (1.0 / 30.0 -
           w * (1.0 / 42.0 -
                w * (1.0 / 30.0 -
                     w * (5.0 / 66.0 -
                          w * (691.0 / 2730.0 - w * 7.0 / 6.0)))));
  return acc + 1.0 / x + 0.5 * w + series * w / x;
}

double log_normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(kTwoPi);
}

double normal_pdf(double x, double mean, double sd) {
  return std::exp(log_normal_pdf(x, mean, sd));
}

double cauchy_pdf(double x, double x0, double gamma) {
  const double z = (x - x0) / gamma;
  return 1.0 / (M_PI * gamma * (1.0 + z * z));
}

}  // namespace dbp
