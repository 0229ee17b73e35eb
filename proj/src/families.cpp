#include "dbp/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dbp/errors.hpp"
#include "dbp/special.hpp"

namespace dbp {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace

LinearModelGeometry linear_model_geometry(const Eigen::MatrixXd& X1,
                                          const Eigen::MatrixXd& Xe) {
  require(Xe.cols() >= 1, "linear_model: Xe must have at least one column");
  require(X1.rows() == 0 || X1.rows() == Xe.rows(),
          "linear_model: X1 and Xe row counts differ");

  const int n = static_cast<int>(Xe.rows());
  const int k1 = static_cast<int>(X1.cols());
  const int ke = static_cast<int>(Xe.cols());

  Eigen::MatrixXd X(n, k1 + ke);
  if (k1 > 0) X << X1, Xe;
  else X = Xe;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) {
    // Name the columns that the pivoting pushed past the numerical rank.
    std::ostringstream msg;
    msg << "linear_model: design (X1|Xe) is rank deficient; dependent "
           "columns:";
    const auto perm = qr.colsPermutation().indices();
    for (int i = qr.rank(); i < X.cols(); ++i) msg << " " << perm(i);
    throw std::invalid_argument(msg.str());
  }

  LinearModelGeometry g;
  g.X1 = X1;
  g.Xe = Xe;
  g.n = n;
  g.k_e = ke;
  if (k1 > 0) {
    const Eigen::MatrixXd P1 =
        X1 * (X1.transpose() * X1).ldlt().solve(X1.transpose());
    g.V = Xe - P1 * Xe;
  } else {
    g.V = Xe;
  }
  g.VtV = g.V.transpose() * g.V;
  return g;
}

FamilyDescriptor FamilyDescriptor::Bernoulli() {
  return {FamilyId::bernoulli};
}
FamilyDescriptor FamilyDescriptor::ExponentialScale() {
  return {FamilyId::exponential_scale};
}
FamilyDescriptor FamilyDescriptor::NormalLocScale() {
  return {FamilyId::normal_locscale};
}
FamilyDescriptor FamilyDescriptor::ShiftedExponential(bool one_sided) {
  FamilyDescriptor f{FamilyId::shifted_exponential};
  f.one_sided = one_sided;
  return f;
}
FamilyDescriptor FamilyDescriptor::NormalMixture(double p) {
  require(p > 0.0 && p < 1.0, "normal_mixture: requires p in (0,1)");
  FamilyDescriptor f{FamilyId::normal_mixture};
  f.mixture_p = p;
  return f;
}
FamilyDescriptor FamilyDescriptor::GammaMean() {
  return {FamilyId::gamma_mean};
}
FamilyDescriptor FamilyDescriptor::LinearModel(const Eigen::MatrixXd& X1,
                                               const Eigen::MatrixXd& Xe) {
  FamilyDescriptor f{FamilyId::linear_model};
  f.lm = std::make_shared<LinearModelGeometry>(linear_model_geometry(X1, Xe));
  return f;
}

int FamilyDescriptor::theta_dim() const {
  switch (id) {
    case FamilyId::normal_locscale: return 2;
    case FamilyId::linear_model: return lm->k_e;
    default: return 1;
  }
}

bool FamilyDescriptor::has_nuisance() const {
  return id == FamilyId::gamma_mean || id == FamilyId::linear_model;
}

double FamilyDescriptor::n_star(double n) const {
  if (id == FamilyId::normal_mixture) return n * (1.0 - mixture_p);
  return n;
}

std::string FamilyDescriptor::name() const {
  switch (id) {
    case FamilyId::bernoulli: return "bernoulli";
    case FamilyId::exponential_scale: return "exponential";
    case FamilyId::normal_locscale: return "normal-locscale";
    case FamilyId::shifted_exponential:
      return one_sided ? "shifted-exponential-one-sided"
                       : "shifted-exponential";
    case FamilyId::normal_mixture: return "mixture";
    case FamilyId::gamma_mean: return "gamma";
    case FamilyId::linear_model: return "linear-model";
  }
  return "?";
}

SuffStats SuffStats::MakeBernoulli(double n, double successes) {
  SuffStats s;
  s.n = n;
  s.successes = successes;
  return s;
}
SuffStats SuffStats::MakeExponential(double n, double ybar) {
  SuffStats s;
  s.n = n;
  s.ybar = ybar;
  return s;
}
SuffStats SuffStats::MakeNormal(double n, double ybar, double sval) {
  SuffStats s;
  s.n = n;
  s.ybar = ybar;
  s.s = sval;
  return s;
}
SuffStats SuffStats::MakeShiftedExponential(double n, double tmin) {
  SuffStats s;
  s.n = n;
  s.tmin = tmin;
  return s;
}
SuffStats SuffStats::MakeGamma(double n, double ybar, double logmean) {
  SuffStats s;
  s.n = n;
  s.ybar = ybar;
  s.logmean = logmean;
  return s;
}
SuffStats SuffStats::MakeMixture(std::vector<double> data) {
  SuffStats s;
  s.n = static_cast<double>(data.size());
  s.sample = std::move(data);
  return s;
}
SuffStats SuffStats::MakeLinear(std::vector<double> y) {
  SuffStats s;
  s.n = static_cast<double>(y.size());
  s.sample = std::move(y);
  return s;
}

SuffStats SuffStats::FromRaw(const FamilyDescriptor& fam,
                             std::span<const double> data) {
  require(!data.empty(), "FromRaw: empty sample");
  const double n = static_cast<double>(data.size());
  const double sum = std::accumulate(data.begin(), data.end(), 0.0);
  switch (fam.id) {
    case FamilyId::bernoulli:
      return MakeBernoulli(n, sum);
    case FamilyId::exponential_scale:
      return MakeExponential(n, sum / n);
    case FamilyId::normal_locscale: {
      const double ybar = sum / n;
      double ss = 0.0;
      for (double y : data) ss += (y - ybar) * (y - ybar);
      const double denom = kNormalSdividesByN ? n : (n - 1.0);
      return MakeNormal(n, ybar, std::sqrt(ss / denom));
    }
    case FamilyId::shifted_exponential:
      return MakeShiftedExponential(
          n, *std::min_element(data.begin(), data.end()));
    case FamilyId::gamma_mean: {
      double lsum = 0.0;
      for (double y : data) {
        require(y > 0.0, "gamma: sample values must be positive");
        lsum += std::log(y);
      }
      return MakeGamma(n, sum / n, lsum / n);
    }
    case FamilyId::normal_mixture:
      return MakeMixture(std::vector<double>(data.begin(), data.end()));
    case FamilyId::linear_model:
      return MakeLinear(std::vector<double>(data.begin(), data.end()));
  }
  throw std::logic_error("FromRaw: unknown family");
}

void SuffStats::validate(const FamilyDescriptor& fam) const {
  require(n > 0, "SuffStats: n must be positive");
  switch (fam.id) {
    case FamilyId::bernoulli:
      require(successes >= 0 && successes <= n,
              "bernoulli: requires 0 <= successes <= n");
      break;
    case FamilyId::exponential_scale:
      require(ybar > 0, "exponential: requires ybar > 0");
      break;
    case FamilyId::normal_locscale:
      require(s > 0, "normal: requires S > 0");
      break;
    case FamilyId::gamma_mean:
      require(ybar > 0, "gamma: requires ybar > 0");
      require(logmean <= std::log(ybar) + 1e-12,
              "gamma: requires logmean <= log(ybar)");
      break;
    case FamilyId::normal_mixture:
      require(sample.size() == static_cast<size_t>(n),
              "mixture: sample size mismatch");
      break;
    case FamilyId::linear_model:
      require(fam.lm && sample.size() == static_cast<size_t>(fam.lm->n),
              "linear_model: y length must match the design");
      break;
    case FamilyId::shifted_exponential:
      break;
  }
}

double normal_sum_sq(const SuffStats& stats) {
  const double denom = kNormalSdividesByN ? stats.n : (stats.n - 1.0);
  return denom * stats.s * stats.s;
}

double loglik(const FamilyDescriptor& fam, std::span<const double> theta,
              std::span<const double> nu, const SuffStats& stats) {
  switch (fam.id) {
    case FamilyId::bernoulli: {
      const double p = theta[0];
      if (!(p > 0.0 && p < 1.0)) return -kInf;
      return stats.successes * std::log(p) +
             (stats.n - stats.successes) * std::log1p(-p);
    }
    case FamilyId::exponential_scale: {
      const double mu = theta[0];
      if (!(mu > 0.0)) return -kInf;
      return -stats.n * std::log(mu) - stats.n * stats.ybar / mu;
    }
    case FamilyId::normal_locscale: {
      const double mu = theta[0], sigma = theta[1];
      if (!(sigma > 0.0)) return -kInf;
      const double ss =
          normal_sum_sq(stats) +
          stats.n * (stats.ybar - mu) * (stats.ybar - mu);
      return -0.5 * stats.n * (kLogTwoPi + 2.0 * std::log(sigma)) -
             0.5 * ss / (sigma * sigma);
    }
    case FamilyId::shifted_exponential: {
      const double th = theta[0];
      if (th > stats.tmin) return -kInf;
      if (fam.one_sided) {
        // Theta = [theta0, infinity); values below theta0 are handled by the
        // prior's support, the likelihood is the same.
      }
      return stats.n * (th - stats.tmin);
    }
    case FamilyId::normal_mixture: {
      const double mu = theta[0];
      const double p = fam.mixture_p;
      double acc = 0.0;
      for (double y : stats.sample) {
        const double a = p * normal_pdf(y, 0.0, 1.0) +
                         (1.0 - p) * normal_pdf(y, mu, 1.0);
        acc += std::log(a);
      }
      return acc;
    }
    case FamilyId::gamma_mean: {
      const double mu = theta[0], alpha = nu[0];
      if (!(mu > 0.0 && alpha > 0.0)) return -kInf;
      return stats.n * (alpha * std::log(alpha / mu) - std::lgamma(alpha) +
                        (alpha - 1.0) * stats.logmean -
                        alpha * stats.ybar / mu);
    }
    case FamilyId::linear_model: {
      const auto& g = *fam.lm;
      const int k1 = static_cast<int>(g.X1.cols());
      const double sigma = nu[static_cast<size_t>(k1)];
      if (!(sigma > 0.0)) return -kInf;
      Eigen::VectorXd y =
          Eigen::Map<const Eigen::VectorXd>(stats.sample.data(),
                                            stats.sample.size());
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(g.n);
      for (int j = 0; j < k1; ++j) mean += nu[j] * g.X1.col(j);
      for (int j = 0; j < g.k_e; ++j) mean += theta[j] * g.Xe.col(j);
      const double ss = (y - mean).squaredNorm();
      return -0.5 * g.n * (kLogTwoPi + 2.0 * std::log(sigma)) -
             0.5 * ss / (sigma * sigma);
    }
  }
  throw std::logic_error("loglik: unknown family");
}

double kl_unit(const FamilyDescriptor& fam, std::span<const double> a,
               std::span<const double> b, std::span<const double> nu) {
  switch (fam.id) {
    case FamilyId::bernoulli: {
      // 0 log 0 = 0; a vanishing density in the first slot gives +inf.
      const double pa = a[0], pb = b[0];
      const double t1 = pb > 0.0 ? pb * std::log(pb / pa) : 0.0;
      const double t2 =
          pb < 1.0 ? (1.0 - pb) * std::log((1.0 - pb) / (1.0 - pa)) : 0.0;
      return t1 + t2;
    }
    case FamilyId::exponential_scale: {
      const double ma = a[0], mb = b[0];
      if (!(ma > 0.0) || !(mb > 0.0) || !std::isfinite(ma) ||
          !std::isfinite(mb))
        return kInf;
      return std::log(ma / mb) + mb / ma - 1.0;
    }
    case FamilyId::normal_locscale: {
      const double mua = a[0], sa = a[1], mub = b[0], sb = b[1];
      if (!(sa > 0.0) || !(sb > 0.0) || !std::isfinite(sa) ||
          !std::isfinite(sb) || !std::isfinite(mua) || !std::isfinite(mub))
        return kInf;
      const double d = mub - mua;
      return std::log(sa / sb) + (sb * sb + d * d) / (2.0 * sa * sa) - 0.5;
    }
    case FamilyId::shifted_exponential: {
      // Supports differ: KL[a:b] is finite only when b >= a.
      return b[0] >= a[0] ? b[0] - a[0] : kInf;
    }
    case FamilyId::normal_mixture:
      throw std::invalid_argument(
          "kl_unit: the mixture family has no closed-form KL; use "
          "mixture_divergence");
    case FamilyId::gamma_mean: {
      const double alpha = nu[0];
      const double ma = a[0], mb = b[0];
      if (!(ma > 0.0) || !(mb > 0.0) || !std::isfinite(ma) ||
          !std::isfinite(mb))
        return kInf;
      return alpha * (std::log(ma / mb) + mb / ma - 1.0);
    }
    case FamilyId::linear_model: {
      const auto& g = *fam.lm;
      const int k1 = static_cast<int>(g.X1.cols());
      const double sigma = nu[static_cast<size_t>(k1)];
      Eigen::VectorXd d(g.k_e);
      for (int j = 0; j < g.k_e; ++j) d(j) = a[j] - b[j];
      // Full-sample divergence; equal in both directions.
      return d.dot(g.VtV * d) / (2.0 * sigma * sigma);
    }
  }
  throw std::logic_error("kl_unit: unknown family");
}

Eigen::MatrixXd unit_fisher_info(const FamilyDescriptor& fam,
                                 std::span<const double> theta0,
                                 std::span<const double> nu) {
  switch (fam.id) {
    case FamilyId::bernoulli: {
      const double p = theta0[0];
      return Eigen::MatrixXd::Constant(1, 1, 1.0 / (p * (1.0 - p)));
    }
    case FamilyId::exponential_scale: {
      const double mu = theta0[0];
      return Eigen::MatrixXd::Constant(1, 1, 1.0 / (mu * mu));
    }
    case FamilyId::normal_locscale: {
      const double sigma = theta0[1];
      Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
      j(0, 0) = 1.0 / (sigma * sigma);
      j(1, 1) = 2.0 / (sigma * sigma);
      return j;
    }
    case FamilyId::gamma_mean: {
      const double mu = theta0[0], alpha = nu[0];
      return Eigen::MatrixXd::Constant(1, 1, alpha / (mu * mu));
    }
    case FamilyId::normal_mixture: {
      // Information per effective observation: n J1 / n* = (1-p).
      return Eigen::MatrixXd::Constant(1, 1, 1.0 - fam.mixture_p);
    }
    case FamilyId::linear_model: {
      const auto& g = *fam.lm;
      const int k1 = static_cast<int>(g.X1.cols());
      const double sigma = nu[static_cast<size_t>(k1)];
      return g.VtV / (g.n * sigma * sigma);
    }
    case FamilyId::shifted_exponential:
      throw std::invalid_argument(
          "unit_fisher_info: the shifted exponential is irregular (no "
          "Fisher information)");
  }
  throw std::logic_error("unit_fisher_info: unknown family");
}

double reference_log_nu(const FamilyDescriptor& fam,
                        std::span<const double> nu) {
  switch (fam.id) {
    case FamilyId::gamma_mean: {
      const double alpha = nu[0];
      if (!(alpha > 0.0)) return -kInf;
      return 0.5 * std::log(trigamma(alpha) - 1.0 / alpha);
    }
    case FamilyId::linear_model: {
      const auto& g = *fam.lm;
      const double sigma = nu[static_cast<size_t>(g.X1.cols())];
      if (!(sigma > 0.0)) return -kInf;
      return -std::log(sigma);
    }
    default:
      throw std::invalid_argument("reference_log_nu: family has no nuisance");
  }
}

double reference_log_theta_given_nu(const FamilyDescriptor& fam,
                                    std::span<const double> theta,
                                    std::span<const double> /*nu*/) {
  switch (fam.id) {
    case FamilyId::bernoulli: {
      const double p = theta[0];
      if (!(p > 0.0 && p < 1.0)) return -kInf;
      return -0.5 * std::log(p) - 0.5 * std::log1p(-p);
    }
    case FamilyId::exponential_scale:
    case FamilyId::gamma_mean: {
      const double mu = theta[0];
      if (!(mu > 0.0)) return -kInf;
      return -std::log(mu);
    }
    case FamilyId::normal_locscale: {
      const double sigma = theta[1];
      if (!(sigma > 0.0)) return -kInf;
      return -std::log(sigma);
    }
    case FamilyId::shifted_exponential:
    case FamilyId::normal_mixture:
    case FamilyId::linear_model:
      return 0.0;  // flat
  }
  throw std::logic_error("reference prior: unknown family");
}

double gamma_shape_mle(double rhs) {
  require(rhs > 0.0, "gamma_shape_mle: requires log(ybar) - logmean > 0");
  // log(alpha) - psi(alpha) is decreasing from +inf to 0; Newton iteration
  // on a log grid start.
  double alpha = (3.0 - rhs + std::sqrt((rhs - 3.0) * (rhs - 3.0) +
                                        24.0 * rhs)) /
                 (12.0 * rhs);  // standard starting approximation
  for (int it = 0; it < 100; ++it) {
    const double f = std::log(alpha) - digamma(alpha) - rhs;
    const double fp = 1.0 / alpha - trigamma(alpha);
    const double step = f / fp;
    double next = alpha - step;
    if (next <= 0.0) next = alpha / 2.0;
    if (std::fabs(next - alpha) <= 1e-13 * alpha) return next;
    alpha = next;
  }
  throw NumericError("gamma_shape_mle: Newton iteration did not converge");
}

SuffStats gamma_mle_to_suffstats(double mle_mean, double mle_sd, double n) {
  require(mle_mean > 0.0 && mle_sd > 0.0,
          "gamma_mle_to_suffstats: mean and sd must be positive");
  const double alpha_hat = (mle_mean / mle_sd) * (mle_mean / mle_sd);
  const double ybar = mle_mean;
  const double logmean =
      std::log(ybar) - (std::log(alpha_hat) - digamma(alpha_hat));
  return SuffStats::MakeGamma(n, ybar, logmean);
}

}  // namespace dbp
