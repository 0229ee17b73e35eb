#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dbp/alt_priors.hpp"
#include "dbp/db_prior.hpp"
#include "dbp/metropolis.hpp"

namespace dbp {

enum class BFMethod { quadrature, mcmc, asymptotic, closed_form };
std::string bf_method_name(BFMethod m);

struct BFResult {
  double bf12 = 0.0;  // Bayes factor in favor of M1
  BFMethod method = BFMethod::quadrature;
  double err = 0.0;  // quadrature bound or Monte Carlo standard error
  std::string family;
  std::string prior;
};

// Prior under M2. Exactly one of the members is set; none set means the
// improper reference prior pi^N (callers must pair it into a ratio).
struct PriorHandle {
  std::shared_ptr<const DBPrior> db;
  std::shared_ptr<const ComparisonPrior> cmp;
  std::shared_ptr<const ApproxDBPrior> approx;
  std::string approx_label = "cauchy-approx";

  static PriorHandle of(DBPrior p);
  static PriorHandle of(ComparisonPrior p);
  static PriorHandle of(ApproxDBPrior p, std::string label = "cauchy-approx");
  static PriorHandle reference();

  bool is_reference() const { return !db && !cmp && !approx; }
  std::string label() const;
  // Conditional density pi(theta | nu) (times pi^N(theta|nu) kernel for the
  // reference handle).
  double density(std::span<const double> theta,
                 std::span<const double> nu = {}) const;
};

struct LogMarginal {
  double log_value;
  double rel_err;
};

// log m2(y) = log integral of f(y|theta,nu) pi(theta|nu) pi^N(nu).
// Computed by adaptive quadrature (nested for two-dimensional parameters)
// with the likelihood centered at its maximum to avoid underflow.
LogMarginal log_marginal2(const FamilyDescriptor& fam, const PriorHandle& prior,
                          std::span<const double> theta0,
                          const SuffStats& stats, double rel_tol = 1e-8);

// log m1(y) = log f(y | theta0) (integrated over pi^N(nu) when a nuisance
// is present).
LogMarginal log_marginal1(const FamilyDescriptor& fam,
                          std::span<const double> theta0,
                          const SuffStats& stats, double rel_tol = 1e-8);

// m2 as a plain number (may under/overflow for extreme statistics; the
// Bayes factor path works in logs throughout).
double marginal_likelihood(const FamilyDescriptor& fam,
                           const PriorHandle& prior,
                           std::span<const double> theta0,
                           const SuffStats& stats, double rel_tol = 1e-8);

BFResult bayes_factor(const FamilyDescriptor& fam, const PriorHandle& prior2,
                      std::span<const double> theta0, const SuffStats& stats,
                      double rel_tol = 1e-8);

// Lemma-based Monte Carlo route: B21^D = B21^N * E_posterior[c^{-1} h(Dbar)]
// with the expectation over the pi^N posterior sampled by random-walk
// Metropolis. Supported for the exponential and gamma families. The error
// is a batch-means Monte Carlo standard error (50 batches); an effective
// sample size under 100 is an error asking for a longer chain.
BFResult bf_mcmc_correction(const FamilyDescriptor& fam, const DBPrior& prior,
                            std::span<const double> theta0,
                            const SuffStats& stats, const ChainConfig& cfg);

// Large-n approximation: normal posterior + Cauchy-as-normal-scale-mixture,
// evaluated by plain Monte Carlo (default 1e5 draws). known_nu fixes the
// nuisance instead of integrating it (used by the known-sigma linear
// model reduction).
BFResult bf_asymptotic(const FamilyDescriptor& fam,
                       std::span<const double> theta0, const SuffStats& stats,
                       long ndraws = 100000, std::uint64_t seed = 1,
                       std::optional<double> known_nu = std::nullopt);

enum class LimitKind { B0_null_boundary, B1_null_point };

// Finite evidence limits: B0(n) as the statistic reaches the null boundary
// (exponential ybar = mu0; irregular T = theta0; mixture all-zero sample),
// and the normal-case B1(n) by quadrature of the mixing-density formula.
double evidence_limit(const FamilyDescriptor& fam, const PriorHandle& prior,
                      std::span<const double> theta0, int n, LimitKind kind);

enum class ScanDirection {
  ybar_to_zero,   // exponential
  ybar_to_inf,    // exponential, normal
  tmin_to_null,   // irregular one-sided, T -> theta0+
  tmin_to_inf,    // irregular
  s_to_inf,       // normal
  obs_to_inf      // mixture: one observation -> infinity
};

// Bayes factors along a geometric sequence toward a boundary.
std::vector<double> consistency_scan(const FamilyDescriptor& fam,
                                     const PriorHandle& prior,
                                     std::span<const double> theta0, double n,
                                     ScanDirection dir, int len = 6);

}  // namespace dbp
