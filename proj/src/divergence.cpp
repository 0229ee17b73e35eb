#include "dbp/divergence.hpp"

#include <cmath>
#include <stdexcept>

#include "dbp/errors.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/special.hpp"

namespace dbp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Directed per-observation KLs of the mixture between mu and the null 0,
// from the G representation:
//   KL[0:mu] = log p + p G(p,mu,0) + (1-p) G(p,mu,mu)
//   KL[mu:0] = -log p - G(p,mu,0)
double mixture_kl_null_to_mu(double p, double mu) {
  const double g0 = mixture_g(p, mu, 0.0, MixtureMode::exact);
  const double gm = mixture_g(p, mu, mu, MixtureMode::exact);
  return std::log(p) + p * g0 + (1.0 - p) * gm;
}
double mixture_kl_mu_to_null(double p, double mu) {
  return -std::log(p) - mixture_g(p, mu, 0.0, MixtureMode::exact);
}
}  // namespace

double d_sum(const FamilyDescriptor& fam, std::span<const double> a,
             std::span<const double> b, std::span<const double> nu) {
  if (fam.id == FamilyId::normal_mixture)
    throw std::invalid_argument(
        "d_sum: use mixture_divergence for the mixture family");
  const double k1 = kl_unit(fam, a, b, nu);
  const double k2 = kl_unit(fam, b, a, nu);
  if (!std::isfinite(k1) || !std::isfinite(k2))
    throw PriorNotDefinedError(
        "d_sum: a directed divergence is infinite (different supports); "
        "use d_min");
  return k1 + k2;
}

double d_min(const FamilyDescriptor& fam, std::span<const double> a,
             std::span<const double> b, std::span<const double> nu) {
  double k1, k2;
  if (fam.id == FamilyId::normal_mixture) {
    const double p = fam.mixture_p;
    // Divergence from the null component only makes sense against theta0=0
    // here; general (a,b) pairs shift both components equally.
    const double mu = a[0] - b[0];
    k1 = mixture_kl_mu_to_null(p, mu);
    k2 = mixture_kl_null_to_mu(p, mu);
  } else {
    k1 = kl_unit(fam, a, b, nu);
    k2 = kl_unit(fam, b, a, nu);
  }
  const double m = std::min(k1, k2);
  if (!std::isfinite(m))
    throw PriorNotDefinedError("d_min: both directed divergences are infinite");
  return 2.0 * m;
}

double mixture_g(double p, double mu, double mu_star, MixtureMode mode) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("mixture: requires p in (0,1)");
  const double r = (1.0 - p) / p;
  if (mode == MixtureMode::laplace)
    return std::log1p(r * std::exp(mu_star * mu - 0.5 * mu * mu));

  // The integrand is log(1 + r e^{y mu - mu^2/2}) against N(y | mu_star, 1);
  // a 10-sigma window around mu_star captures it to well below tolerance.
  auto f = [&](double y) {
    const double e = mu * y - 0.5 * mu * mu;
    // log(1 + r e^e), stable for large |e|.
    double v;
    if (e > 40.0) v = std::log(r) + e + std::log1p(std::exp(-e) / r);
    else v = std::log1p(r * std::exp(e));
    return v * normal_pdf(y, mu_star, 1.0);
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-15;
  auto res = integrate(f, Interval(mu_star - 10.0, mu_star + 10.0), opt);
  if (!res.converged)
    throw NumericError("mixture_g: quadrature did not converge");
  return res.value;
}

double mixture_divergence(double p, double mu, MixtureMode mode) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("mixture: requires p in (0,1)");
  if (mu == 0.0) return 0.0;
  if (mode == MixtureMode::laplace) {
    const double r = (1.0 - p) / p;
    const double u = 0.5 * mu * mu;
    // log[(1 + r e^u) / (1 + r e^{-u})], stable for large u.
    double num;
    if (u > 40.0) num = std::log(r) + u + std::log1p(std::exp(-u) / r);
    else num = std::log1p(r * std::exp(u));
    return num - std::log1p(r * std::exp(-u));
  }
  return mixture_g(p, mu, mu, MixtureMode::exact) -
         mixture_g(p, mu, 0.0, MixtureMode::exact);
}

UnitaryDivergence::UnitaryDivergence(FamilyDescriptor family,
                                     DivergenceKind kind,
                                     std::vector<double> theta0)
    : family_(std::move(family)), kind_(kind), theta0_(std::move(theta0)) {
  if (static_cast<int>(theta0_.size()) != family_.theta_dim())
    throw std::invalid_argument("UnitaryDivergence: theta0 dimension mismatch");
  if (family_.id == FamilyId::shifted_exponential &&
      kind_ == DivergenceKind::sum)
    throw PriorNotDefinedError(
        "sum divergence of the shifted exponential is infinite everywhere; "
        "use the min kind");
}

double UnitaryDivergence::operator()(std::span<const double> theta,
                                     std::span<const double> nu) const {
  switch (family_.id) {
    case FamilyId::normal_mixture: {
      // Dbar = D / (n (1-p)) = G(p,mu,mu) - G(p,mu,0); Laplace form.
      const double mu = theta[0] - theta0_[0];
      if (kind_ == DivergenceKind::sum)
        return mixture_divergence(family_.mixture_p, mu, MixtureMode::laplace);
      const double k1 = mixture_kl_mu_to_null(family_.mixture_p, mu);
      const double k2 = mixture_kl_null_to_mu(family_.mixture_p, mu);
      return 2.0 * std::min(k1, k2) / (1.0 - family_.mixture_p);
    }
    case FamilyId::linear_model: {
      // kl_unit is full-sample (both directions equal); n* = n.
      return 2.0 * kl_unit(family_, theta, theta0_, nu) / family_.lm->n;
    }
    default: {
      // iid families: D = n * unit, n* = n. An infinite direction is a
      // legal value here (the kernel h(Dbar) just vanishes).
      const double k1 = kl_unit(family_, theta, theta0_, nu);
      const double k2 = kl_unit(family_, theta0_, theta, nu);
      return kind_ == DivergenceKind::sum ? k1 + k2
                                          : 2.0 * std::min(k1, k2);
    }
  }
}

double UnitaryDivergence::operator()(double theta,
                                     std::span<const double> nu) const {
  return (*this)(std::span<const double>(&theta, 1), nu);
}

UnitaryDivergence unitary(const FamilyDescriptor& fam, DivergenceKind kind,
                          std::vector<double> theta0) {
  return UnitaryDivergence(fam, kind, std::move(theta0));
}

}  // namespace dbp
