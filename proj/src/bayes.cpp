#include "dbp/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dbp/errors.hpp"
#include "dbp/parallel.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/rng.hpp"
#include "dbp/special.hpp"

namespace dbp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

QuadratureResult integrate_or_throw(const std::function<double(double)>& f,
                                    Interval dom, QuadratureOptions opt,
                                    const char* what) {
  auto res = integrate(f, dom, opt);
  if (!res.converged) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge (value " << res.value
        << ", abs err " << res.abs_err << ")";
    throw NumericError(msg.str());
  }
  return res;
}

// Inner integral of a nested pair; tolerant of slightly missed tolerances
// as long as the result is usable, strict about real failures.
double inner_integral(const std::function<double(double)>& f, Interval dom,
                      QuadratureOptions opt) {
  auto res = integrate(f, dom, opt);
  if (!res.converged && res.abs_err > 1e-3 * std::fabs(res.value) &&
      res.abs_err > opt.abs_tol)
    throw NumericError("nested quadrature: inner integral failed");
  return res.value;
}

double mixture_loglik_max(const FamilyDescriptor& fam, const SuffStats& stats,
                          double* arg = nullptr) {
  double lo = *std::min_element(stats.sample.begin(), stats.sample.end());
  double hi = *std::max_element(stats.sample.begin(), stats.sample.end());
  lo = std::min(lo, 0.0) - 2.0;
  hi = std::max(hi, 0.0) + 2.0;
  double best = -kInf, best_mu = 0.0;
  const int grid = 400;
  for (int i = 0; i <= grid; ++i) {
    const double mu = lo + (hi - lo) * i / grid;
    const double ll = loglik(fam, std::span<const double>(&mu, 1), {}, stats);
    if (ll > best) {
      best = ll;
      best_mu = mu;
    }
  }
  // Golden-section refinement around the best grid point.
  double a = best_mu - (hi - lo) / grid, b = best_mu + (hi - lo) / grid;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 60; ++it) {
    const double fc = loglik(fam, std::span<const double>(&c, 1), {}, stats);
    const double fd = loglik(fam, std::span<const double>(&d, 1), {}, stats);
    if (fc > fd) {
      b = d;
      d = c;
      c = b - gr * (b - a);
    } else {
      a = c;
      c = d;
      d = a + gr * (b - a);
    }
  }
  const double mu = 0.5 * (a + b);
  if (arg) *arg = mu;
  return loglik(fam, std::span<const double>(&mu, 1), {}, stats);
}

double gamma_alpha_hat(const SuffStats& stats) {
  return gamma_shape_mle(std::log(stats.ybar) - stats.logmean);
}

}  // namespace

std::string bf_method_name(BFMethod m) {
  switch (m) {
    case BFMethod::quadrature: return "quadrature";
    case BFMethod::mcmc: return "mcmc";
    case BFMethod::asymptotic: return "asymptotic";
    case BFMethod::closed_form: return "closed-form";
  }
  return "?";
}

PriorHandle PriorHandle::of(DBPrior p) {
  PriorHandle h;
  h.db = std::make_shared<DBPrior>(std::move(p));
  return h;
}
PriorHandle PriorHandle::of(ComparisonPrior p) {
  PriorHandle h;
  h.cmp = std::make_shared<ComparisonPrior>(std::move(p));
  return h;
}
PriorHandle PriorHandle::of(ApproxDBPrior p, std::string label) {
  PriorHandle h;
  h.approx = std::make_shared<ApproxDBPrior>(std::move(p));
  h.approx_label = std::move(label);
  return h;
}
PriorHandle PriorHandle::reference() { return {}; }

std::string PriorHandle::label() const {
  if (db)
    return db->kind() == DivergenceKind::sum ? "sum-db" : "min-db";
  if (cmp) return comparison_prior_name(cmp->id());
  if (approx) return approx_label;
  return "reference";
}

double PriorHandle::density(std::span<const double> theta,
                            std::span<const double> nu) const {
  if (db) return db->density(theta, nu);
  if (cmp) return cmp->density(theta, nu);
  if (approx) return approx->density(theta);
  return std::exp(reference_log_theta_given_nu(
      db ? db->family() : FamilyDescriptor{FamilyId::bernoulli}, theta, nu));
}

namespace {

// Reference-handle density needs the family; route scalar marginals
// through this instead of PriorHandle::density.
double prior_density(const FamilyDescriptor& fam, const PriorHandle& prior,
                     std::span<const double> theta,
                     std::span<const double> nu) {
  if (prior.is_reference())
    return std::exp(reference_log_theta_given_nu(fam, theta, nu));
  return prior.density(theta, nu);
}

}  // namespace

LogMarginal log_marginal2(const FamilyDescriptor& fam,
                          const PriorHandle& prior,
                          std::span<const double> theta0,
                          const SuffStats& stats, double rel_tol) {
  stats.validate(fam);
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-280;

  switch (fam.id) {
    case FamilyId::bernoulli: {
      const double that =
          std::clamp(stats.successes / stats.n, 1e-9, 1.0 - 1e-9);
      const double l0 = loglik(fam, std::span<const double>(&that, 1), {}, stats);
      const double se = std::sqrt(that * (1.0 - that) / stats.n);
      opt.breakpoints = {that, theta0[0], std::max(1e-12, that - 3 * se),
                         std::min(1.0 - 1e-12, that + 3 * se)};
      auto f = [&](double th) {
        const double ll = loglik(fam, std::span<const double>(&th, 1), {}, stats);
        return std::exp(ll - l0) *
               prior_density(fam, prior, std::span<const double>(&th, 1), {});
      };
      auto res = integrate_or_throw(f, Interval(0.0, 1.0), opt, "marginal m2");
      return {l0 + std::log(res.value), res.abs_err / res.value};
    }
    case FamilyId::exponential_scale: {
      const double mhat = stats.ybar;
      const double l0 =
          loglik(fam, std::span<const double>(&mhat, 1), {}, stats);
      opt.breakpoints = {mhat, theta0[0],
                         mhat * std::max(0.05, 1.0 - 3.0 / std::sqrt(stats.n)),
                         mhat * (1.0 + 3.0 / std::sqrt(stats.n))};
      auto f = [&](double m) {
        const double ll = loglik(fam, std::span<const double>(&m, 1), {}, stats);
        return std::exp(ll - l0) *
               prior_density(fam, prior, std::span<const double>(&m, 1), {});
      };
      auto res = integrate_or_throw(f, Interval::positive_axis(), opt,
                                    "marginal m2");
      return {l0 + std::log(res.value), res.abs_err / res.value};
    }
    case FamilyId::shifted_exponential: {
      const double t0 = theta0[0];
      if (fam.one_sided && !(stats.tmin > t0))
        throw std::invalid_argument(
            "shifted exponential one-sided: requires T > theta0");
      Interval dom = fam.one_sided ? Interval(t0, stats.tmin)
                                   : Interval::left_of(stats.tmin);
      opt.breakpoints = {stats.tmin - 1.0 / stats.n};
      auto f = [&](double th) {
        const double ll = loglik(fam, std::span<const double>(&th, 1), {}, stats);
        return std::exp(ll) *
               prior_density(fam, prior, std::span<const double>(&th, 1), {});
      };
      auto res = integrate_or_throw(f, dom, opt, "marginal m2");
      return {std::log(res.value), res.abs_err / res.value};
    }
    case FamilyId::normal_mixture: {
      double mu_hat = 0.0;
      const double l0 = mixture_loglik_max(fam, stats, &mu_hat);
      opt.breakpoints = {mu_hat, theta0[0], mu_hat - 1.0, mu_hat + 1.0};
      auto f = [&](double mu) {
        const double ll = loglik(fam, std::span<const double>(&mu, 1), {}, stats);
        return std::exp(ll - l0) *
               prior_density(fam, prior, std::span<const double>(&mu, 1), {});
      };
      auto res =
          integrate_or_throw(f, Interval::real_line(), opt, "marginal m2");
      return {l0 + std::log(res.value), res.abs_err / res.value};
    }
    case FamilyId::normal_locscale: {
      const double mu_hat = stats.ybar;
      const double s_hat = std::sqrt(normal_sum_sq(stats) / stats.n);
      const double th_hat[2] = {mu_hat, s_hat};
      const double l0 = loglik(fam, th_hat, {}, stats);
      const double rn = std::sqrt(stats.n);
      opt.breakpoints = {s_hat, theta0[1], s_hat * (1.0 + 3.0 / rn),
                         s_hat * std::max(0.1, 1.0 - 3.0 / rn)};
      auto outer = [&](double s) {
        QuadratureOptions iopt;
        iopt.rel_tol = rel_tol * 1e-3;
        iopt.abs_tol = 1e-290;
        iopt.breakpoints = {mu_hat, theta0[0], mu_hat - 3.0 * s / rn,
                            mu_hat + 3.0 * s / rn};
        auto inner = [&](double m) {
          const double th[2] = {m, s};
          return std::exp(loglik(fam, th, {}, stats) - l0) *
                 prior_density(fam, prior, th, {});
        };
        return inner_integral(inner, Interval::real_line(), iopt);
      };
      auto res = integrate_or_throw(outer, Interval::positive_axis(), opt,
                                    "marginal m2");
      return {l0 + std::log(res.value), res.abs_err / res.value};
    }
    case FamilyId::gamma_mean: {
      const double mu_hat = stats.ybar;
      const double a_hat = gamma_alpha_hat(stats);
      const double th_hat[1] = {mu_hat};
      const double nu_hat[1] = {a_hat};
      const double l0 = loglik(fam, th_hat, nu_hat, stats);
      const double sd_a =
          1.0 / std::sqrt(stats.n * (trigamma(a_hat) - 1.0 / a_hat));
      opt.breakpoints = {a_hat, std::max(1e-8, a_hat - 3 * sd_a),
                         a_hat + 3 * sd_a};
      auto outer = [&](double alpha) {
        const double nu[1] = {alpha};
        const double lp_nu = reference_log_nu(fam, nu);
        if (!std::isfinite(lp_nu)) return 0.0;
        const double sd_mu = mu_hat / std::sqrt(stats.n * alpha);
        QuadratureOptions iopt;
        iopt.rel_tol = rel_tol * 1e-3;
        iopt.abs_tol = 1e-290;
        iopt.breakpoints = {mu_hat, theta0[0],
                            std::max(1e-12, mu_hat - 3 * sd_mu),
                            mu_hat + 3 * sd_mu};
        auto inner = [&](double m) {
          const double th[1] = {m};
          return std::exp(loglik(fam, th, nu, stats) - l0) *
                 prior_density(fam, prior, th, nu);
        };
        return std::exp(lp_nu) *
               inner_integral(inner, Interval::positive_axis(), iopt);
      };
      auto res = integrate_or_throw(outer, Interval::positive_axis(), opt,
                                    "marginal m2");
      return {l0 + std::log(res.value), res.abs_err / res.value};
    }
    case FamilyId::linear_model:
      throw std::invalid_argument(
          "log_marginal2: linear model marginals are not exposed (no CLI "
          "surface); use the known-sigma reduction");
  }
  throw std::logic_error("log_marginal2: unknown family");
}

LogMarginal log_marginal1(const FamilyDescriptor& fam,
                          std::span<const double> theta0,
                          const SuffStats& stats, double rel_tol) {
  stats.validate(fam);
  if (!fam.has_nuisance()) {
    const double ll = loglik(fam, theta0, {}, stats);
    if (!std::isfinite(ll))
      throw std::invalid_argument(
          "log_marginal1: likelihood is zero at theta0 (statistic outside "
          "the null support)");
    return {ll, 0.0};
  }
  if (fam.id != FamilyId::gamma_mean)
    throw std::invalid_argument("log_marginal1: unsupported nuisance family");

  // Center at the alpha maximizing the null likelihood.
  const double rhs = std::log(theta0[0]) - stats.logmean +
                     stats.ybar / theta0[0] - 1.0;
  const double a_star = gamma_shape_mle(std::max(rhs, 1e-12));
  const double l1 = loglik(fam, theta0, std::span<const double>(&a_star, 1),
                           stats);
  const double sd_a =
      1.0 / std::sqrt(stats.n * (trigamma(a_star) - 1.0 / a_star));
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-280;
  opt.breakpoints = {a_star, std::max(1e-8, a_star - 3 * sd_a),
                     a_star + 3 * sd_a};
  auto f = [&](double alpha) {
    const double nu[1] = {alpha};
    const double lp = reference_log_nu(fam, nu);
    if (!std::isfinite(lp)) return 0.0;
    return std::exp(loglik(fam, theta0, nu, stats) - l1 + lp);
  };
  auto res =
      integrate_or_throw(f, Interval::positive_axis(), opt, "marginal m1");
  return {l1 + std::log(res.value), res.abs_err / res.value};
}

double marginal_likelihood(const FamilyDescriptor& fam,
                           const PriorHandle& prior,
                           std::span<const double> theta0,
                           const SuffStats& stats, double rel_tol) {
  return std::exp(log_marginal2(fam, prior, theta0, stats, rel_tol).log_value);
}

BFResult bayes_factor(const FamilyDescriptor& fam, const PriorHandle& prior2,
                      std::span<const double> theta0, const SuffStats& stats,
                      double rel_tol) {
  const auto m1 = log_marginal1(fam, theta0, stats, rel_tol);
  const auto m2 = log_marginal2(fam, prior2, theta0, stats, rel_tol);
  BFResult r;
  r.bf12 = std::exp(m1.log_value - m2.log_value);
  r.method = BFMethod::quadrature;
  r.err = r.bf12 * (m1.rel_err + m2.rel_err);
  r.family = fam.name();
  r.prior = prior2.label();
  return r;
}

BFResult bf_mcmc_correction(const FamilyDescriptor& fam, const DBPrior& prior,
                            std::span<const double> theta0,
                            const SuffStats& stats, const ChainConfig& cfg) {
  if (fam.id != FamilyId::exponential_scale &&
      fam.id != FamilyId::gamma_mean)
    throw std::invalid_argument(
        "bf_mcmc_correction: supported for the exponential and gamma "
        "families");
  stats.validate(fam);

  const auto m1 = log_marginal1(fam, theta0, stats, 1e-8);
  const auto m2n =
      log_marginal2(fam, PriorHandle::reference(), theta0, stats, 1e-8);
  const double log_bf12_n = m1.log_value - m2n.log_value;

  UnitaryDivergence dbar(fam, prior.kind(),
                         {theta0.begin(), theta0.end()});
  const double q = prior.exponent();

  std::function<double(std::span<const double>)> log_target;
  std::vector<double> init;
  if (fam.id == FamilyId::exponential_scale) {
    // u = log mu; the posterior pi^N(mu|y) d mu maps to f(y|e^u) du.
    log_target = [&fam, &stats](std::span<const double> x) {
      const double mu = std::exp(x[0]);
      return loglik(fam, std::span<const double>(&mu, 1), {}, stats);
    };
    init = {std::log(stats.ybar)};
  } else {
    // (u, v) = (log mu, log alpha).
    log_target = [&fam, &stats](std::span<const double> x) {
      const double mu = std::exp(x[0]);
      const double alpha = std::exp(x[1]);
      const double nu[1] = {alpha};
      return loglik(fam, std::span<const double>(&mu, 1), nu, stats) +
             reference_log_nu(fam, nu) + x[1];
    };
    init = {std::log(stats.ybar), std::log(gamma_alpha_hat(stats))};
  }

  ChainConfig cc = cfg;
  if (cc.proposal_scale <= 0.0) cc.proposal_scale = 1.0 / std::sqrt(stats.n);
  Chain chain = rw_metropolis(log_target, init, cc);

  const size_t n = chain.draws.size();
  std::vector<double> corr(n);
  for (size_t i = 0; i < n; ++i) {
    const double mu = std::exp(chain.draws[i][0]);
    if (fam.id == FamilyId::exponential_scale) {
      corr[i] = std::pow(1.0 + dbar(mu), -q) / prior.normalizer();
    } else {
      const double alpha = std::exp(chain.draws[i][1]);
      const double nu[1] = {alpha};
      corr[i] = std::pow(1.0 + dbar(mu, nu), -q) / prior.normalizer(nu);
    }
  }

  const size_t nbatch = 50;
  if (n < nbatch * 4)
    throw std::invalid_argument("bf_mcmc_correction: chain too short");
  const size_t bs = n / nbatch;
  double mean = 0.0;
  for (double v : corr) mean += v;
  mean /= double(n);
  std::vector<double> bmeans(nbatch, 0.0);
  for (size_t b = 0; b < nbatch; ++b) {
    for (size_t i = b * bs; i < (b + 1) * bs; ++i) bmeans[b] += corr[i];
    bmeans[b] /= double(bs);
  }
  double var_b = 0.0;
  for (double b : bmeans) var_b += (b - mean) * (b - mean);
  var_b /= double(nbatch - 1);
  const double se = std::sqrt(var_b / double(nbatch));

  double var_x = 0.0;
  for (double v : corr) var_x += (v - mean) * (v - mean);
  var_x /= double(n - 1);
  const double ess = var_b > 0.0 ? double(n) * var_x / (double(bs) * var_b)
                                 : double(n);
  if (ess < 100.0) {
    std::ostringstream msg;
    msg << "bf_mcmc_correction: effective sample size " << ess
        << " < 100; increase steps";
    throw NumericError(msg.str());
  }

  BFResult r;
  r.bf12 = std::exp(log_bf12_n) / mean;
  r.method = BFMethod::mcmc;
  r.err = r.bf12 * (se / mean + m1.rel_err + m2n.rel_err);
  r.family = fam.name();
  r.prior = prior.kind() == DivergenceKind::sum ? "sum-db" : "min-db";
  return r;
}

BFResult bf_asymptotic(const FamilyDescriptor& fam,
                       std::span<const double> theta0, const SuffStats& stats,
                       long ndraws, std::uint64_t seed,
                       std::optional<double> known_nu) {
  stats.validate(fam);
  const double n = stats.n;

  double log_pref21 = 0.0;
  std::function<double(Rng&)> draw_integrand;

  switch (fam.id) {
    case FamilyId::exponential_scale: {
      const double mu0 = theta0[0];
      const double mu_hat = stats.ybar;
      const double ll_hat =
          loglik(fam, std::span<const double>(&mu_hat, 1), {}, stats);
      const double ll_0 = loglik(fam, theta0, {}, stats);
      const double j_hat = n / (mu_hat * mu_hat);
      log_pref21 = ll_hat - ll_0 + 0.5 * std::log(2.0 * M_PI) -
                   0.5 * std::log(j_hat);
      const double var_hat = mu_hat * mu_hat / n;
      draw_integrand = [mu0, mu_hat, var_hat](Rng& rng) {
        const double z = rng.normal();
        const double t = 1.0 / (z * z);
        const double var = t * mu0 * mu0 + var_hat;
        return (mu0 / mu_hat) *
               normal_pdf(mu_hat, mu0, std::sqrt(var));
      };
      break;
    }
    case FamilyId::gamma_mean: {
      const double mu0 = theta0[0];
      const double mu_hat = stats.ybar;
      const double a_hat = gamma_alpha_hat(stats);
      const double nu_hat[1] = {a_hat};
      const double ll_hat =
          loglik(fam, std::span<const double>(&mu_hat, 1), nu_hat, stats);
      const double ll_0 = loglik(fam, theta0, nu_hat, stats);
      const double j_theta_hat = n * a_hat / (mu_hat * mu_hat);
      log_pref21 = ll_hat - ll_0 + 0.5 * std::log(2.0 * M_PI) -
                   0.5 * std::log(j_theta_hat);
      const double var_theta_hat = mu_hat * mu_hat / (n * a_hat);
      const double sd_alpha =
          1.0 / std::sqrt(n * (trigamma(a_hat) - 1.0 / a_hat));
      draw_integrand = [mu0, mu_hat, a_hat, var_theta_hat,
                        sd_alpha](Rng& rng) {
        const double z = rng.normal();
        const double t = 1.0 / (z * z);
        const double alpha = a_hat + sd_alpha * rng.normal();
        if (!(alpha > 1e-10)) return 0.0;
        const double var = t * mu0 * mu0 / alpha + var_theta_hat;
        return (mu0 / mu_hat) *
               normal_pdf(mu_hat, mu0, std::sqrt(var));
      };
      break;
    }
    case FamilyId::linear_model: {
      if (!known_nu)
        throw std::invalid_argument(
            "bf_asymptotic: linear model supported with known sigma only");
      const auto& g = *fam.lm;
      if (g.k_e != 1 || g.X1.cols() != 0)
        throw std::invalid_argument(
            "bf_asymptotic: linear reduction supports a single tested "
            "column and empty X1");
      const double sigma = *known_nu;
      Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
          stats.sample.data(), stats.sample.size());
      const double vtv = g.VtV(0, 0);
      const double th_hat = g.V.col(0).dot(y) / vtv;
      const double nu_pack[1] = {sigma};
      const double ll_hat =
          loglik(fam, std::span<const double>(&th_hat, 1), nu_pack, stats);
      const double ll_0 = loglik(fam, theta0, nu_pack, stats);
      const double j_theta = vtv / (sigma * sigma);
      log_pref21 = ll_hat - ll_0 + 0.5 * std::log(2.0 * M_PI) -
                   0.5 * std::log(j_theta);
      const double var_hat = 1.0 / j_theta;
      const double scale2 = n * sigma * sigma / vtv;
      const double t0v = theta0[0];
      draw_integrand = [t0v, th_hat, var_hat, scale2](Rng& rng) {
        const double z = rng.normal();
        const double t = 1.0 / (z * z);
        const double var = t * scale2 + var_hat;
        return normal_pdf(th_hat, t0v, std::sqrt(var));
      };
      break;
    }
    default:
      throw std::invalid_argument(
          "bf_asymptotic: supported for exponential, gamma, and the "
          "known-sigma linear reduction");
  }

  auto values = par::map_double(static_cast<size_t>(ndraws), [&](size_t i) {
    Rng rng = Rng::stream(seed, i);
    return draw_integrand(rng);
  });
  const double mean = par::sum(values) / double(ndraws);
  if (!(mean > 0.0))
    throw NumericError("bf_asymptotic: Monte Carlo mean vanished");

  const size_t nbatch = 50;
  const size_t bs = values.size() / nbatch;
  std::vector<double> bmeans(nbatch, 0.0);
  for (size_t b = 0; b < nbatch; ++b) {
    for (size_t i = b * bs; i < (b + 1) * bs; ++i) bmeans[b] += values[i];
    bmeans[b] /= double(bs);
  }
  double var_b = 0.0;
  for (double b : bmeans) var_b += (b - mean) * (b - mean);
  var_b /= double(nbatch - 1);
  const double se_rel = std::sqrt(var_b / double(nbatch)) / mean;

  BFResult r;
  r.bf12 = std::exp(-(log_pref21 + std::log(mean)));
  r.method = BFMethod::asymptotic;
  r.err = r.bf12 * se_rel;
  r.family = fam.name();
  r.prior = "sum-db";
  return r;
}

namespace {

// kappa = integral_0^inf s ((1+s^4)(1+s^2))^{-1/2} ds, the constant in the
// sum-DB mixing density of the normal B1 limit.
double kappa_constant() {
  static const double value = [] {
    auto f = [](double s) {
      return s / std::sqrt((1.0 + s * s * s * s) * (1.0 + s * s));
    };
    auto res = integrate(f, Interval::positive_axis(), 1e-12);
    if (!res.converged) throw NumericError("kappa quadrature failed");
    return res.value;
  }();
  return value;
}

enum class MixingDensity { db_sum, arithmetic, fractional };

double mixing_density(MixingDensity which, double alpha, double beta) {
  switch (which) {
    case MixingDensity::db_sum: {
      const double b2 = beta * beta;
      const double denom =
          1.0 + b2 * b2 + b2 * alpha * alpha * (1.0 + b2);
      return b2 / (M_PI * kappa_constant() * denom);
    }
    case MixingDensity::arithmetic: {
      const double b2 = beta * beta;
      return 2.0 * beta / (std::pow(M_PI, 1.5) * std::pow(1.0 + b2, 1.5)) *
             std::exp(-alpha * alpha * b2 / (1.0 + b2));
    }
    case MixingDensity::fractional: {
      const double b2 = beta * beta;
      return (2.0 * beta / M_PI) *
             std::exp(-b2 * (1.0 + alpha * alpha));
    }
  }
  return 0.0;
}

double normal_b1_limit(MixingDensity which, int n) {
  // B1(n) = 1 / integral g_n(alpha,beta) pi*(alpha,beta) d alpha d beta,
  // log g_n = -n log beta - n (1 + beta^2(alpha^2-1)) / (2 beta^2).
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-280;
  const double w = 3.0 / std::sqrt(double(n));
  opt.breakpoints = {1.0, std::max(1e-6, 1.0 - w), 1.0 + w};
  auto outer = [&](double beta) {
    const double b2 = beta * beta;
    const double logg_beta = -n * std::log(beta) - 0.5 * n / b2 + 0.5 * n;
    if (logg_beta < -700.0) return 0.0;
    QuadratureOptions iopt;
    iopt.rel_tol = 1e-11;
    iopt.abs_tol = 1e-290;
    iopt.breakpoints = {0.0, -w, w};
    auto inner = [&](double alpha) {
      const double logg = logg_beta - 0.5 * n * alpha * alpha;
      return std::exp(logg) * mixing_density(which, alpha, beta);
    };
    return inner_integral(inner, Interval::real_line(), iopt);
  };
  auto res = integrate_or_throw(outer, Interval::positive_axis(), opt,
                                "normal B1 limit");
  return 1.0 / res.value;
}

}  // namespace

double evidence_limit(const FamilyDescriptor& fam, const PriorHandle& prior,
                      std::span<const double> theta0, int n, LimitKind kind) {
  if (kind == LimitKind::B1_null_point) {
    if (fam.id != FamilyId::normal_locscale)
      throw std::invalid_argument(
          "evidence_limit: B1 is defined for the normal location-scale "
          "family");
    MixingDensity which;
    if (prior.db && prior.db->kind() == DivergenceKind::sum)
      which = MixingDensity::db_sum;
    else if (prior.cmp &&
             prior.cmp->id() == ComparisonPriorId::arithmetic_intrinsic)
      which = MixingDensity::arithmetic;
    else if (prior.cmp &&
             prior.cmp->id() == ComparisonPriorId::fractional_intrinsic)
      which = MixingDensity::fractional;
    else
      throw std::invalid_argument(
          "evidence_limit: B1 mixing density available for sum-db, "
          "arithmetic, fractional priors");
    return normal_b1_limit(which, n);
  }

  switch (fam.id) {
    case FamilyId::exponential_scale: {
      auto stats = SuffStats::MakeExponential(n, theta0[0]);
      return bayes_factor(fam, prior, theta0, stats).bf12;
    }
    case FamilyId::shifted_exponential: {
      if (fam.one_sided)
        throw std::invalid_argument(
            "evidence_limit: the one-sided irregular B0 is infinite "
            "(B12 -> inf as T -> theta0+)");
      auto stats = SuffStats::MakeShiftedExponential(n, theta0[0]);
      return bayes_factor(fam, prior, theta0, stats).bf12;
    }
    case FamilyId::normal_mixture: {
      auto stats = SuffStats::MakeMixture(std::vector<double>(n, 0.0));
      return bayes_factor(fam, prior, theta0, stats).bf12;
    }
    default:
      throw std::invalid_argument(
          "evidence_limit: B0 is defined for the exponential, irregular "
          "two-sided, and mixture families");
  }
}

std::vector<double> consistency_scan(const FamilyDescriptor& fam,
                                     const PriorHandle& prior,
                                     std::span<const double> theta0, double n,
                                     ScanDirection dir, int len) {
  std::vector<double> out;
  out.reserve(len);
  for (int k = 1; k <= len; ++k) {
    const double scale = std::pow(10.0, k);
    switch (dir) {
      case ScanDirection::ybar_to_zero: {
        auto stats = SuffStats::MakeExponential(n, theta0[0] / scale);
        out.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
        break;
      }
      case ScanDirection::ybar_to_inf: {
        if (fam.id == FamilyId::exponential_scale) {
          auto stats = SuffStats::MakeExponential(n, theta0[0] * scale);
          out.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
        } else {
          auto stats = SuffStats::MakeNormal(n, theta0[0] + scale, theta0[1]);
          out.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
        }
        break;
      }
      case ScanDirection::tmin_to_null: {
        auto stats =
            SuffStats::MakeShiftedExponential(n, theta0[0] + 1.0 / scale);
        out.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
        break;
      }
      case ScanDirection::tmin_to_inf: {
        auto stats = SuffStats::MakeShiftedExponential(n, theta0[0] + scale);
        out.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
        break;
      }
      case ScanDirection::s_to_inf: {
        auto stats = SuffStats::MakeNormal(n, theta0[0], theta0[1] * scale);
        out.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
        break;
      }
      case ScanDirection::obs_to_inf: {
        std::vector<double> data(static_cast<size_t>(n), 0.0);
        data[0] = scale;
        auto stats = SuffStats::MakeMixture(std::move(data));
        out.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
        break;
      }
    }
  }
  return out;
}

}  // namespace dbp
