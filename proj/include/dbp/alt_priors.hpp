#pragma once

#include <span>
#include <string>
#include <vector>

#include "dbp/families.hpp"

namespace dbp {

enum class ComparisonPriorId {
  arithmetic_intrinsic,
  fractional_intrinsic,
  jeffreys_rule,
  bp_cauchy,
};

std::string comparison_prior_name(ComparisonPriorId id);

// A comparison prior in closed form. Densities are reported exactly as the
// closed forms state them; an improper one (the Bernoulli fractional
// intrinsic) carries its total mass explicitly and is NOT renormalized, so
// Bayes factors computed with it keep the documented small bias.
class ComparisonPrior {
 public:
  ComparisonPrior(ComparisonPriorId id, FamilyDescriptor family,
                  std::vector<double> theta0);

  ComparisonPriorId id() const { return id_; }
  const FamilyDescriptor& family() const { return family_; }
  std::span<const double> theta0() const { return theta0_; }
  bool is_proper() const { return is_proper_; }
  double total_mass() const { return total_mass_; }

  double density(std::span<const double> theta,
                 std::span<const double> nu = {}) const;
  double density(double theta) const;

 private:
  ComparisonPriorId id_;
  FamilyDescriptor family_;
  std::vector<double> theta0_;
  bool is_proper_ = true;
  double total_mass_ = 1.0;
};

// Closed-form intrinsic prior density (arithmetic or fractional); errors
// with an explicit unavailability message for pairs the closed forms do not
// cover (e.g. any intrinsic prior for the mixture).
double intrinsic_density(ComparisonPriorId id, const FamilyDescriptor& fam,
                         std::span<const double> theta0,
                         std::span<const double> theta,
                         std::span<const double> nu = {});

// Jeffreys' general-rule testing prior for scalar regular families:
// (1/pi) d/dtheta arctan sqrt(Dbar^S[theta, theta0]), derivative by central
// difference with relative step 1e-6. nu carries fixed nuisance values for
// conditional evaluation (gamma alpha; linear-model sigma).
double jeffreys_rule_density(const FamilyDescriptor& fam, double theta0,
                             double theta, std::span<const double> nu = {});

// Standard Cauchy Ca(mu | 0, 1), the Berger-Pericchi proposal for the
// mixture mean.
double bp_cauchy_density(double mu);

}  // namespace dbp
