#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dbp {

enum class FamilyId {
  bernoulli,
  exponential_scale,
  normal_locscale,
  shifted_exponential,
  normal_mixture,
  gamma_mean,
  linear_model
};

// Orthogonalized design for the linear model: V = (I - P1) Xe.
struct LinearModelGeometry {
  Eigen::MatrixXd X1;
  Eigen::MatrixXd Xe;
  Eigen::MatrixXd V;
  Eigen::MatrixXd VtV;
  int k_e = 0;
  int n = 0;
};

LinearModelGeometry linear_model_geometry(const Eigen::MatrixXd& X1,
                                          const Eigen::MatrixXd& Xe);

// One of the seven registered sampling models. Immutable after construction.
struct FamilyDescriptor {
  FamilyId id;
  bool one_sided = false;                         // shifted_exponential
  double mixture_p = 0.0;                         // normal_mixture, in (0,1)
  std::shared_ptr<const LinearModelGeometry> lm;  // linear_model

  static FamilyDescriptor Bernoulli();
  static FamilyDescriptor ExponentialScale();
  static FamilyDescriptor NormalLocScale();
  static FamilyDescriptor ShiftedExponential(bool one_sided);
  static FamilyDescriptor NormalMixture(double p);
  static FamilyDescriptor GammaMean();
  static FamilyDescriptor LinearModel(const Eigen::MatrixXd& X1,
                                      const Eigen::MatrixXd& Xe);

  int theta_dim() const;
  bool has_nuisance() const;  // gamma_mean, linear_model
  // Effective sample size for n observations (n(1-p) for the mixture).
  double n_star(double n) const;
  std::string name() const;
};

// Family-specific sufficient statistics plus the sample size. Only the
// fields for the family at hand are meaningful.
struct SuffStats {
  double n = 0;
  double successes = 0;          // bernoulli: T (may be fractional n*theta_hat)
  double ybar = 0;               // exponential_scale, normal, gamma
  double s = 0;                  // normal: S (see normal_sum_sq for S^2 convention)
  double tmin = 0;               // shifted_exponential: min y_i
  double logmean = 0;            // gamma: (1/n) sum log y_i
  std::vector<double> sample;    // normal_mixture raw data; linear_model y

  static SuffStats MakeBernoulli(double n, double successes);
  static SuffStats MakeExponential(double n, double ybar);
  static SuffStats MakeNormal(double n, double ybar, double s);
  static SuffStats MakeShiftedExponential(double n, double tmin);
  static SuffStats MakeGamma(double n, double ybar, double logmean);
  static SuffStats MakeMixture(std::vector<double> data);
  static SuffStats MakeLinear(std::vector<double> y);

  // Reduce a raw sample to the family's sufficient statistics.
  static SuffStats FromRaw(const FamilyDescriptor& fam,
                           std::span<const double> data);

  void validate(const FamilyDescriptor& fam) const;
};

// The scale statistic S of the normal family: S^2 = sum (y_i-ybar)^2 / n.
// The divisor was resolved empirically against the reference location-scale
// Bayes factors (see tests/test_tables.cpp, which locks the choice).
inline constexpr bool kNormalSdividesByN = true;
double normal_sum_sq(const SuffStats& stats);

// Log-likelihood of the full sample through the sufficient statistics.
// theta / nu layouts per family:
//   bernoulli:            theta = {p}
//   exponential_scale:    theta = {mu}
//   normal_locscale:      theta = {mu, sigma}
//   shifted_exponential:  theta = {theta}   (value is up to a data-only
//                         constant: the T-free factor exp(-sum y_i) is
//                         dropped; Bayes factor ratios are unaffected)
//   normal_mixture:       theta = {mu}
//   gamma_mean:           theta = {mu}, nu = {alpha}
//   linear_model:         theta = beta_e, nu = {beta_1..., sigma}
double loglik(const FamilyDescriptor& fam, std::span<const double> theta,
              std::span<const double> nu, const SuffStats& stats);

// Directed Kullback-Leibler divergence KL[a:b] per observation (full-sample
// for the linear model), expectation taken under the density indexed by the
// SECOND argument. Throws for the mixture family (no closed form; use
// divergence machinery).
double kl_unit(const FamilyDescriptor& fam, std::span<const double> a,
               std::span<const double> b, std::span<const double> nu = {});

// Per-effective-observation Fisher information block for theta at theta0
// (full-sample information divided by n*). Used by the local quadratic
// checks and the approximate DB prior.
Eigen::MatrixXd unit_fisher_info(const FamilyDescriptor& fam,
                                 std::span<const double> theta0,
                                 std::span<const double> nu = {});

// Reference (objective estimation) prior kernels, as unnormalized log
// densities: log pi^N(nu) and log pi^N(theta | nu).
double reference_log_nu(const FamilyDescriptor& fam,
                        std::span<const double> nu);
double reference_log_theta_given_nu(const FamilyDescriptor& fam,
                                    std::span<const double> theta,
                                    std::span<const double> nu = {});

// Rebuild gamma sufficient statistics from the ML estimates of the mean and
// standard deviation: alpha_hat = (mean/sd)^2, ybar = mean, and logmean from
// the gamma score equation log(alpha) - psi(alpha) = log(ybar) - logmean.
SuffStats gamma_mle_to_suffstats(double mle_mean, double mle_sd, double n);

// Solve the gamma shape MLE equation log(alpha)-psi(alpha) = rhs, rhs > 0.
double gamma_shape_mle(double rhs);

}  // namespace dbp
