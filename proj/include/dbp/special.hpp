#pragma once

namespace dbp {

// psi(x) = d/dx log Gamma(x), x > 0.
double digamma(double x);

// psi'(x), x > 0. Accurate to at least 12 significant digits on [1e-3, 1e8].
double trigamma(double x);

// log of the standard normal density.
double log_normal_pdf(double x, double mean, double sd);
double normal_pdf(double x, double mean, double sd);

// Univariate Cauchy density with location x0 and scale gamma.
double cauchy_pdf(double x, double x0, double gamma);

}  // namespace dbp
