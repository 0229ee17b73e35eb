#pragma once

#include <span>
#include <vector>

#include "dbp/families.hpp"

namespace dbp {

enum class DivergenceKind { sum, min };

// Sum-symmetrized divergence KL[a:b] + KL[b:a] per observation (full sample
// for the linear model). Errors when either direction is infinite.
double d_sum(const FamilyDescriptor& fam, std::span<const double> a,
             std::span<const double> b, std::span<const double> nu = {});

// Min-symmetrized divergence 2 min{KL[a:b], KL[b:a]}. Both directions are
// computed and the true minimum taken; an infinite direction is ignored.
double d_min(const FamilyDescriptor& fam, std::span<const double> a,
             std::span<const double> b, std::span<const double> nu = {});

enum class MixtureMode { exact, laplace };

// G(p, mu, mu_star) = E_{y ~ N(mu_star,1)} log[1 + ((1-p)/p) e^{y mu - mu^2/2}].
double mixture_g(double p, double mu, double mu_star, MixtureMode mode);

// Unitary sum divergence of the mixture between mu and 0:
//   exact:   G(p,mu,mu) - G(p,mu,0) by quadrature,
//   laplace: log[(1 + r e^{mu^2/2}) / (1 + r e^{-mu^2/2})], r = (1-p)/p.
double mixture_divergence(double p, double mu, MixtureMode mode);

// The evaluable unitary divergence theta -> Dbar[theta, theta0] = D / n*.
// For the mixture the Laplace form is used (it is what the DB prior is
// built from); exact values are available through mixture_divergence.
class UnitaryDivergence {
 public:
  UnitaryDivergence(FamilyDescriptor family, DivergenceKind kind,
                    std::vector<double> theta0);

  double operator()(std::span<const double> theta,
                    std::span<const double> nu = {}) const;
  double operator()(double theta, std::span<const double> nu = {}) const;

  const FamilyDescriptor& family() const { return family_; }
  DivergenceKind kind() const { return kind_; }
  std::span<const double> theta0() const { return theta0_; }

 private:
  FamilyDescriptor family_;
  DivergenceKind kind_;
  std::vector<double> theta0_;
};

UnitaryDivergence unitary(const FamilyDescriptor& fam, DivergenceKind kind,
                          std::vector<double> theta0);

}  // namespace dbp
