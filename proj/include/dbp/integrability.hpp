#pragma once

#include <functional>

#include "dbp/interval.hpp"

namespace dbp {

enum class IntegrabilityClass { convergent, divergent };

// Classifies whether the integral of a nonnegative, eventually-monotone g
// over the domain is finite, by comparing the growth of truncated integrals
// across a geometric sequence of cutoffs toward each problematic endpoint.
//
// The truncation increments of a convergent integral eventually decay; a
// divergent one has increments that grow, stay level, or decay too slowly
// (like the increments of integral dx/(x log x), whose sum is a harmonic
// series). The borderline is resolved by the local decay exponent s of the
// increments (increment_k ~ k^{-s}): s > 1 convergent, s <= 1 divergent.
//
// Oscillatory integrands (not eventually monotone toward the endpoints) are
// rejected with a NumericError carrying a diagnostic.
IntegrabilityClass probe_integrability(const std::function<double(double)>& g,
                                       Interval domain);

}  // namespace dbp
