#include "dbp/alt_priors.hpp"

#include <cmath>
#include <stdexcept>

#include "dbp/divergence.hpp"
#include "dbp/errors.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/special.hpp"

namespace dbp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// One-sided irregular arithmetic intrinsic prior at u = theta - theta0 > 0:
// -e^u log(1 - e^{-u}) - 1, evaluated through s = e^{-u} as
// -log(1-s)/s - 1 with a series branch for small s.
double irregular_one_sided_arith(double u) {
  if (u <= 0.0) return 0.0;
  const double s = std::exp(-u);
  if (s < 1e-3) {
    // sum_{j>=1} s^j/(j+1)
    return s * (0.5 + s * (1.0 / 3.0 + s * (0.25 + s * 0.2)));
  }
  return -std::log1p(-s) / s - 1.0;
}
}  // namespace

std::string comparison_prior_name(ComparisonPriorId id) {
  switch (id) {
    case ComparisonPriorId::arithmetic_intrinsic: return "arithmetic";
    case ComparisonPriorId::fractional_intrinsic: return "fractional";
    case ComparisonPriorId::jeffreys_rule: return "jeffreys-rule";
    case ComparisonPriorId::bp_cauchy: return "bp-cauchy";
  }
  return "?";
}

double intrinsic_density(ComparisonPriorId id, const FamilyDescriptor& fam,
                         std::span<const double> theta0,
                         std::span<const double> theta,
                         std::span<const double> /*nu*/) {
  const bool arith = id == ComparisonPriorId::arithmetic_intrinsic;
  if (!arith && id != ComparisonPriorId::fractional_intrinsic)
    throw std::invalid_argument("intrinsic_density: not an intrinsic prior id");

  switch (fam.id) {
    case FamilyId::bernoulli: {
      const double t0 = theta0[0], t = theta[0];
      if (!(t > 0.0 && t < 1.0)) return 0.0;
      const double base = 1.0 / std::sqrt(t * (1.0 - t));
      if (arith)
        return (2.0 / M_PI) * (t * t0 + (1.0 - t) * (1.0 - t0)) * base;
      const double num = std::pow(t0, t) * std::pow(1.0 - t0, 1.0 - t);
      return num / (std::tgamma(t + 0.5) * std::tgamma(1.5 - t)) * base;
    }
    case FamilyId::exponential_scale: {
      const double m0 = theta0[0], m = theta[0];
      if (!(m > 0.0)) return 0.0;
      if (arith) {
        const double r = 1.0 + m / m0;
        return 1.0 / (m0 * r * r);
      }
      return std::exp(-m / m0) / m0;
    }
    case FamilyId::normal_locscale: {
      const double mu0 = theta0[0], s0 = theta0[1];
      const double mu = theta[0], s = theta[1];
      if (!(s > 0.0)) return 0.0;
      if (arith) {
        const double ps = (2.0 / M_PI) * s0 / (s * s + s0 * s0);
        return ps * normal_pdf(mu, mu0, std::sqrt(0.5 * (s * s + s0 * s0)));
      }
      return 2.0 * normal_pdf(s, 0.0, s0 / std::sqrt(2.0)) *
             normal_pdf(mu, mu0, s0 / std::sqrt(2.0));
    }
    case FamilyId::shifted_exponential: {
      if (!fam.one_sided || !arith)
        throw PriorNotDefinedError(
            "intrinsic prior not available: the irregular model only has "
            "the one-sided arithmetic intrinsic conjecture");
      return irregular_one_sided_arith(theta[0] - theta0[0]);
    }
    case FamilyId::normal_mixture:
      throw PriorNotDefinedError(
          "intrinsic priors are not defined for the mixture: no minimal "
          "training sample exists, so the intrinsic Bayes factor cannot be "
          "defined");
    default:
      throw PriorNotDefinedError("intrinsic prior not available for " +
                                 fam.name());
  }
}

double jeffreys_rule_density(const FamilyDescriptor& fam, double theta0,
                             double theta, std::span<const double> nu) {
  if (fam.theta_dim() != 1)
    throw std::invalid_argument("jeffreys_rule_density: scalar theta only");
  if (fam.id == FamilyId::shifted_exponential)
    throw PriorNotDefinedError(
        "Jeffreys' general rule prior is unsupported for min-only families "
        "(the sum divergence is infinite)");

  // Support bounds per family; the density vanishes at the boundary where
  // the divergence saturates the arctangent.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (fam.id == FamilyId::bernoulli) {
    lo = 0.0;
    hi = 1.0;
  } else if (fam.id == FamilyId::exponential_scale ||
             fam.id == FamilyId::gamma_mean) {
    lo = 0.0;
  }
  if (!(theta > lo && theta < hi)) return 0.0;

  UnitaryDivergence dbar(fam, DivergenceKind::sum, {theta0});
  auto a = [&](double t) { return std::atan(std::sqrt(dbar(t, nu))); };
  double h = 1e-6 * std::max(std::fabs(theta), 1.0);
  h = std::min({h, 0.45 * (theta - lo), 0.45 * (hi - theta)});
  double deriv;
  if (theta > theta0 + h || theta < theta0 - h) {
    deriv = (a(theta + h) - a(theta - h)) / (2.0 * h);
  } else if (theta >= theta0) {
    deriv = (a(theta + h) - a(std::max(theta, theta0))) / h;
  } else {
    deriv = (a(theta) - a(theta - h)) / h;
  }
  return std::fabs(deriv) / M_PI;
}

double bp_cauchy_density(double mu) { return cauchy_pdf(mu, 0.0, 1.0); }

ComparisonPrior::ComparisonPrior(ComparisonPriorId id, FamilyDescriptor family,
                                 std::vector<double> theta0)
    : id_(id), family_(std::move(family)), theta0_(std::move(theta0)) {
  // Validate availability now so the failure mode is construction, not a
  // surprise mid-integration; also pin the total mass.
  switch (id_) {
    case ComparisonPriorId::arithmetic_intrinsic:
    case ComparisonPriorId::fractional_intrinsic: {
      std::vector<double> probe = theta0_;
      intrinsic_density(id_, family_, theta0_, probe);
      if (family_.id == FamilyId::bernoulli &&
          id_ == ComparisonPriorId::fractional_intrinsic) {
        auto f = [this](double t) { return density(t); };
        auto res = integrate(f, Interval(0.0, 1.0), 1e-10);
        if (!res.converged)
          throw NumericError("fractional prior mass quadrature failed");
        total_mass_ = res.value;
        is_proper_ = false;  // mass deliberately not renormalized
      }
      break;
    }
    case ComparisonPriorId::jeffreys_rule:
      jeffreys_rule_density(family_, theta0_[0],
                            theta0_[0] + 0.5 * std::fabs(theta0_[0]) + 0.5);
      break;
    case ComparisonPriorId::bp_cauchy:
      if (family_.id != FamilyId::normal_mixture)
        throw PriorNotDefinedError(
            "bp-cauchy is the Berger-Pericchi proposal for the mixture mean "
            "only");
      break;
  }
}

double ComparisonPrior::density(std::span<const double> theta,
                                std::span<const double> nu) const {
  switch (id_) {
    case ComparisonPriorId::arithmetic_intrinsic:
    case ComparisonPriorId::fractional_intrinsic:
      return intrinsic_density(id_, family_, theta0_, theta, nu);
    case ComparisonPriorId::jeffreys_rule:
      return jeffreys_rule_density(family_, theta0_[0], theta[0], nu);
    case ComparisonPriorId::bp_cauchy:
      return bp_cauchy_density(theta[0]);
  }
  throw std::logic_error("ComparisonPrior::density: bad id");
}

double ComparisonPrior::density(double theta) const {
  return density(std::span<const double>(&theta, 1));
}

}  // namespace dbp
