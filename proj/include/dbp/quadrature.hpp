#pragma once

#include <functional>
#include <vector>

#include "dbp/interval.hpp"

namespace dbp {

struct QuadratureResult {
  double value = 0.0;
  double abs_err = std::numeric_limits<double>::infinity();
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  // Absolute floor below which we stop caring about the error; prevents
  // endless refinement of integrals that are exactly zero.
  double abs_tol = 0.0;
  int max_segments = 4000;
  // Interior points (in the original coordinates) where the integrand is
  // known to be interesting: peaks, modes, kinks. The domain is pre-split
  // there before adaptive refinement starts.
  std::vector<double> breakpoints;
};

// Adaptive Gauss-Kronrod (7,15) quadrature on bounded or unbounded domains.
// Unbounded domains are mapped to a finite interval by rational transforms
// (x = t/(1-t^2) on the whole line, x = a + t/(1-t) on half-lines), which
// preserve polynomial tail decay. Endpoint singularities are handled by the
// open rule plus bisection. A NaN from the integrand is a hard error
// (NumericError naming the offending abscissa); running out of the
// subdivision budget yields converged=false, never a silently wrong value.
QuadratureResult integrate(const std::function<double(double)>& f,
                           Interval domain, const QuadratureOptions& opt);

QuadratureResult integrate(const std::function<double(double)>& f,
                           Interval domain, double rel_tol = 1e-8);

}  // namespace dbp
