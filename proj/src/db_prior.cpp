#include "dbp/db_prior.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "dbp/errors.hpp"
#include "dbp/integrability.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/special.hpp"

namespace dbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double analytic_q_lower(const FamilyDescriptor& fam, DivergenceKind kind) {
  switch (fam.id) {
    case FamilyId::bernoulli:
      return 0.0;  // bounded parameter space, bounded-or-integrable kernel
    case FamilyId::exponential_scale:
      return kind == DivergenceKind::sum ? 0.0 : 1.0;
    case FamilyId::normal_locscale:
      return kind == DivergenceKind::sum ? 0.5 : kInf;
    case FamilyId::shifted_exponential:
      if (kind == DivergenceKind::sum)
        throw PriorNotDefinedError(
            "sum-DB prior does not exist for the shifted exponential: the "
            "sum divergence is infinite (disjoint supports); use min-DB");
      return 1.0;
    case FamilyId::normal_mixture:
      return kind == DivergenceKind::sum ? 0.5 : kInf;
    case FamilyId::gamma_mean:
      return kind == DivergenceKind::sum ? 0.0 : 1.0;
    case FamilyId::linear_model:
      return 0.5 * fam.lm->k_e;
  }
  throw std::logic_error("q_lower: unknown family");
}

struct ProbeTarget {
  std::function<double(double)> g;
  Interval dom;
};

// 1-D kernel reductions whose integrability matches c(q) < inf. All rays
// must converge at q_lower + 0.25; at the divergence probe exponent at
// least one must diverge.
std::vector<ProbeTarget> probe_targets(const FamilyDescriptor& fam,
                                       DivergenceKind kind,
                                       std::vector<double> theta0, double q,
                                       bool for_divergence) {
  std::vector<ProbeTarget> out;
  switch (fam.id) {
    case FamilyId::bernoulli: {
      UnitaryDivergence dbar(fam, kind, theta0);
      out.push_back({[dbar, q](double th) {
                       return std::pow(1.0 + dbar(th), -q) /
                              std::sqrt(th * (1.0 - th));
                     },
                     Interval(0.0, 1.0)});
      break;
    }
    case FamilyId::exponential_scale:
    case FamilyId::gamma_mean: {
      // Scale-free kernel in t = mu/mu0; gamma probed at two alpha values.
      std::vector<double> alphas =
          fam.id == FamilyId::gamma_mean ? std::vector<double>{0.5, 2.0}
                                         : std::vector<double>{1.0};
      for (double alpha : alphas) {
        auto dbar = [kind, alpha](double t) {
          const double kl_ab = alpha * (std::log(t) + 1.0 / t - 1.0);
          const double kl_ba = alpha * (-std::log(t) + t - 1.0);
          return kind == DivergenceKind::sum ? kl_ab + kl_ba
                                             : 2.0 * std::min(kl_ab, kl_ba);
        };
        out.push_back({[dbar, q](double t) {
                         return std::pow(1.0 + dbar(t), -q) / t;
                       },
                       Interval::positive_axis()});
      }
      break;
    }
    case FamilyId::normal_locscale: {
      const double mu0 = theta0[0], s0 = theta0[1];
      UnitaryDivergence dbar(fam, kind, theta0);
      // mu ray at sigma = sigma0 (flat base measure in mu).
      out.push_back({[dbar, s0, q](double mu) {
                       const double th[2] = {mu, s0};
                       return std::pow(1.0 + dbar(th), -q);
                     },
                     Interval::real_line()});
      if (!for_divergence) {
        // sigma ray at mu = mu0, base measure 1/sigma.
        out.push_back({[dbar, mu0, q](double s) {
                         const double th[2] = {mu0, s};
                         return std::pow(1.0 + dbar(th), -q) / s;
                       },
                       Interval::positive_axis()});
        // mu-marginalized sigma profile (the joint behavior).
        out.push_back({[dbar, mu0, q](double s) {
                         auto inner = [&](double mu) {
                           const double th[2] = {mu, s};
                           return std::pow(1.0 + dbar(th), -q);
                         };
                         QuadratureOptions opt;
                         opt.rel_tol = 1e-7;
                         opt.max_segments = 400;
                         opt.breakpoints = {mu0};
                         return integrate(inner, Interval::real_line(), opt)
                                    .value /
                                s;
                       },
                       Interval::positive_axis()});
      }
      break;
    }
    case FamilyId::shifted_exponential: {
      out.push_back({[q](double u) { return std::pow(1.0 + 2.0 * u, -q); },
                     Interval::positive_axis()});
      break;
    }
    case FamilyId::normal_mixture: {
      const double p = fam.mixture_p;
      out.push_back({[p, q](double mu) {
                       return std::pow(
                           1.0 + mixture_divergence(p, mu, MixtureMode::laplace),
                           -q);
                     },
                     Interval::real_line()});
      break;
    }
    case FamilyId::linear_model: {
      const double ke = fam.lm->k_e;
      out.push_back({[ke, q](double r) {
                       return std::pow(r, ke - 1.0) *
                              std::pow(1.0 + r * r, -q);
                     },
                     Interval::positive_axis()});
      break;
    }
  }
  return out;
}

void verify_tail_index(const FamilyDescriptor& fam, DivergenceKind kind,
                       std::vector<double> theta0, double ql) {
  static std::mutex mu;
  static std::set<std::string> done;
  std::ostringstream key;
  key << fam.name() << "/" << (kind == DivergenceKind::sum ? "S" : "M") << "/"
      << fam.mixture_p << "/" << fam.theta_dim();
  {
    std::lock_guard<std::mutex> lock(mu);
    if (done.count(key.str())) return;
  }

  const double q_conv = ql + 0.25;
  for (auto& t : probe_targets(fam, kind, theta0, q_conv, false)) {
    if (probe_integrability(t.g, t.dom) != IntegrabilityClass::convergent)
      throw NumericError("q_lower verification failed for " + key.str() +
                         ": kernel not integrable at q_lower + 0.25");
  }
  if (ql > 0.0) {
    const double q_div = std::max(ql - 0.25, 0.5 * ql);
    bool any_div = false;
    for (auto& t : probe_targets(fam, kind, theta0, q_div, true))
      if (probe_integrability(t.g, t.dom) == IntegrabilityClass::divergent)
        any_div = true;
    if (!any_div)
      throw NumericError("q_lower verification failed for " + key.str() +
                         ": kernel unexpectedly integrable below q_lower");
  }
  std::lock_guard<std::mutex> lock(mu);
  done.insert(key.str());
}

double whitened_kernel_mass(int k, double q) {
  // Integral over R^k of (1 + |u|^2)^{-q}, via the 1-D radial profile. Kept
  // numeric so the JZS pointwise-equality test compares two genuinely
  // different routes.
  const double surface = 2.0 * std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k);
  auto f = [k, q](double r) {
    return std::pow(r, k - 1.0) * std::pow(1.0 + r * r, -q);
  };
  auto res = integrate(f, Interval::positive_axis(), 1e-12);
  if (!res.converged)
    throw NumericError("whitened_kernel_mass: quadrature failed");
  return surface * res.value;
}

}  // namespace

double q_lower(const FamilyDescriptor& fam, DivergenceKind kind,
               std::span<const double> theta0) {
  const double ql = analytic_q_lower(fam, kind);
  if (std::isinf(ql)) return ql;  // nothing to verify; build() refuses
  verify_tail_index(fam, kind, {theta0.begin(), theta0.end()}, ql);
  return ql;
}

GammaNormalizerCache::GammaNormalizerCache(DivergenceKind kind, double q_star)
    : kind_(kind), q_star_(q_star) {}

double GammaNormalizerCache::exact(double alpha) const {
  // c(q, alpha) in u = log(mu/mu0) coordinates, where the scale-free
  // kernel is symmetric-ish around 0 and the min-kind logarithmic tail is
  // a plain power tail.
  const DivergenceKind kind = kind_;
  const double q = q_star_;
  auto f = [kind, alpha, q](double u) {
    const double kl_ab = alpha * (u + std::exp(-u) - 1.0);
    const double kl_ba = alpha * (-u + std::exp(u) - 1.0);
    const double dbar = kind == DivergenceKind::sum
                            ? kl_ab + kl_ba
                            : 2.0 * std::min(kl_ab, kl_ba);
    return std::pow(1.0 + dbar, -q);
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  const double w = 2.0 / std::sqrt(alpha);
  opt.breakpoints = {0.0, -w, w};
  auto res = integrate(f, Interval::real_line(), opt);
  if (!res.converged)
    throw NumericError("gamma normalizer quadrature did not converge");
  return res.value;
}

double GammaNormalizerCache::node(long idx) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = nodes_.find(idx);
    if (it != nodes_.end()) return it->second;
  }
  const double h = std::log(10.0) / 64.0;
  const double v = exact(std::exp(idx * h));
  std::lock_guard<std::mutex> lock(mutex_);
  nodes_.emplace(idx, v);
  return v;
}

double GammaNormalizerCache::value(double alpha) const {
  if (!(alpha > 0.0))
    throw std::invalid_argument("gamma normalizer: alpha must be positive");
  const double h = std::log(10.0) / 64.0;
  const double x = std::log(alpha) / h;
  const long j = static_cast<long>(std::floor(x));
  const double u = x - j;
  if (u == 0.0) return node(j);

  // Monotone (Fritsch-Carlson) cubic in log alpha / log c over the window
  // j-1..j+2.
  const double y0 = std::log(node(j - 1));
  const double y1 = std::log(node(j));
  const double y2 = std::log(node(j + 1));
  const double y3 = std::log(node(j + 2));
  const double s0 = y1 - y0, s1 = y2 - y1, s2 = y3 - y2;
  auto slope = [](double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return 2.0 * a * b / (a + b);
  };
  const double d1 = slope(s0, s1);
  const double d2 = slope(s1, s2);
  const double t2 = u * u, t3 = t2 * u;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + u;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return std::exp(h00 * y1 + h10 * d1 + h01 * y2 + h11 * d2);
}

DBPrior::DBPrior(FamilyDescriptor f, DivergenceKind k, std::vector<double> t0)
    : family_(std::move(f)),
      kind_(k),
      theta0_(std::move(t0)),
      dbar_(family_, kind_, theta0_) {}

double DBPrior::normalizer(std::span<const double> nu) const {
  switch (family_.id) {
    case FamilyId::gamma_mean:
      if (nu.empty())
        throw std::invalid_argument(
            "DBPrior::normalizer: gamma requires the nuisance alpha");
      return gamma_cache_->value(nu[0]);
    case FamilyId::linear_model: {
      if (nu.empty())
        throw std::invalid_argument(
            "DBPrior::normalizer: linear model requires (beta1..., sigma)");
      const double sigma = nu[nu.size() - 1];
      if (!(sigma > 0.0))
        throw std::invalid_argument("DBPrior::normalizer: sigma must be > 0");
      return lin_c_unit_ * std::pow(sigma, family_.lm->k_e);
    }
    default:
      return c_scalar_;
  }
}

double DBPrior::log_density(std::span<const double> theta,
                            std::span<const double> nu) const {
  if (family_.has_nuisance() && nu.empty())
    throw std::invalid_argument(
        "DBPrior::density: nuisance family requires nu");
  if (family_.id == FamilyId::shifted_exponential && family_.one_sided &&
      theta[0] < theta0_[0])
    return -kInf;
  const double base = reference_log_theta_given_nu(family_, theta, nu);
  if (!std::isfinite(base)) return -kInf;
  const double d = dbar_(theta, nu);
  return -q_star_ * std::log1p(d) + base - std::log(normalizer(nu));
}

double DBPrior::density(std::span<const double> theta,
                        std::span<const double> nu) const {
  return std::exp(log_density(theta, nu));
}

double DBPrior::density(double theta, std::span<const double> nu) const {
  return density(std::span<const double>(&theta, 1), nu);
}

DBPrior build(const FamilyDescriptor& fam, DivergenceKind kind,
              std::vector<double> theta0, double delta, double rel_tol) {
  if (static_cast<int>(theta0.size()) != fam.theta_dim())
    throw std::invalid_argument("build: theta0 dimension mismatch");
  const double ql = q_lower(fam, kind, theta0);
  if (std::isinf(ql))
    throw PriorNotDefinedError(
        "min-DB prior does not exist for " + fam.name() +
        ": q_lower = infinity (the min divergence grows too slowly for any "
        "exponent to normalize it)");

  DBPrior prior(fam, kind, std::move(theta0));
  prior.q_lower_ = ql;
  prior.q_star_ = ql + delta;

  const double q = prior.q_star_;
  const UnitaryDivergence& dbar = prior.dbar_;
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;

  switch (fam.id) {
    case FamilyId::bernoulli: {
      // Integrate in xi = 2 arcsin sqrt(theta), where the Be(1/2,1/2)
      // kernel is exactly flat; the endpoint singularities disappear.
      auto f = [&](double xi) {
        const double sh = std::sin(0.5 * xi);
        const double th = sh * sh;
        if (!(th > 0.0 && th < 1.0)) return 0.0;
        return std::pow(1.0 + dbar(th), -q);
      };
      opt.breakpoints = {2.0 * std::asin(std::sqrt(prior.theta0_[0]))};
      auto res = integrate(f, Interval(0.0, M_PI), opt);
      if (!res.converged) throw NumericError("build: normalizer quadrature failed");
      prior.c_scalar_ = res.value;
      break;
    }
    case FamilyId::exponential_scale: {
      // Integrate in u = log(mu/mu0), where the directed divergences have
      // overflow-free closed forms (u + e^-u - 1 and -u + e^u - 1); the
      // min-DB kernel's logarithmic tail reaches far beyond representable
      // mu values.
      auto f = [kind, q](double u) {
        const double k1 = u + std::exp(-u) - 1.0;
        const double k2 = -u + std::exp(u) - 1.0;
        const double d =
            kind == DivergenceKind::sum ? k1 + k2 : 2.0 * std::min(k1, k2);
        return std::pow(1.0 + d, -q);
      };
      opt.breakpoints = {0.0};
      auto res = integrate(f, Interval::real_line(), opt);
      if (!res.converged) throw NumericError("build: normalizer quadrature failed");
      prior.c_scalar_ = res.value;
      break;
    }
    case FamilyId::shifted_exponential: {
      const double t0 = prior.theta0_[0];
      auto f = [&](double th) { return std::pow(1.0 + dbar(th), -q); };
      Interval dom = fam.one_sided ? Interval::right_of(t0)
                                   : Interval::real_line();
      if (!fam.one_sided) opt.breakpoints = {t0};
      auto res = integrate(f, dom, opt);
      if (!res.converged) throw NumericError("build: normalizer quadrature failed");
      prior.c_scalar_ = res.value;
      break;
    }
    case FamilyId::normal_mixture: {
      auto f = [&](double m) { return std::pow(1.0 + dbar(m), -q); };
      opt.breakpoints = {prior.theta0_[0]};
      auto res = integrate(f, Interval::real_line(), opt);
      if (!res.converged) throw NumericError("build: normalizer quadrature failed");
      prior.c_scalar_ = res.value;
      break;
    }
    case FamilyId::normal_locscale: {
      // Outer integral in v = log(sigma/sigma0) (absorbs the 1/sigma
      // reference kernel), inner over mu with Cauchy-like tails.
      const double mu0 = prior.theta0_[0], s0 = prior.theta0_[1];
      auto outer = [&](double v) {
        const double s = s0 * std::exp(v);
        if (!(s > 1e-300) || !std::isfinite(s)) return 0.0;
        auto inner = [&](double m) {
          const double th[2] = {m, s};
          return std::pow(1.0 + dbar(th), -q);
        };
        const double w = std::sqrt((s0 * s0 * s0 * s0 + s * s * s * s) /
                                   (s0 * s0 + s * s));
        QuadratureOptions iopt;
        iopt.rel_tol = rel_tol * 1e-3;
        iopt.abs_tol = 1e-290;
        iopt.breakpoints = {mu0, mu0 - w, mu0 + w};
        return integrate(inner, Interval::real_line(), iopt).value;
      };
      opt.breakpoints = {0.0};
      auto res = integrate(outer, Interval::real_line(), opt);
      if (!res.converged) throw NumericError("build: normalizer quadrature failed");
      prior.c_scalar_ = res.value;
      break;
    }
    case FamilyId::gamma_mean: {
      prior.gamma_cache_ =
          std::make_shared<GammaNormalizerCache>(kind, prior.q_star_);
      break;
    }
    case FamilyId::linear_model: {
      const auto& g = *fam.lm;
      // c(q*, sigma) = S(q*) n^{ke/2} det(V'V)^{-1/2} sigma^{ke}.
      const double det = g.VtV.determinant();
      prior.lin_c_unit_ = whitened_kernel_mass(g.k_e, prior.q_star_) *
                          std::pow(g.n, 0.5 * g.k_e) / std::sqrt(det);
      break;
    }
  }
  return prior;
}

double ApproxDBPrior::density(std::span<const double> theta) const {
  Eigen::VectorXd d(k);
  for (int i = 0; i < k; ++i) d(i) = theta[i] - theta0[i];
  const double quad = d.dot(scale_matrix.ldlt().solve(d));
  const double det = scale_matrix.determinant();
  const double norm = std::tgamma(0.5 * (1 + k)) /
                      (std::tgamma(0.5) * std::pow(M_PI, 0.5 * k) *
                       std::sqrt(det));
  return norm * std::pow(1.0 + quad, -0.5 * (1 + k));
}

double ApproxDBPrior::density(double theta) const {
  return density(std::span<const double>(&theta, 1));
}

ApproxDBPrior approx_db_prior(const FamilyDescriptor& fam,
                              std::span<const double> theta0,
                              std::span<const double> nu) {
  switch (fam.id) {
    case FamilyId::normal_mixture: {
      ApproxDBPrior a;
      a.theta0 = {theta0.begin(), theta0.end()};
      a.k = 1;
      a.scale_matrix =
          Eigen::MatrixXd::Constant(1, 1, 1.0 / (1.0 - fam.mixture_p));
      return a;
    }
    case FamilyId::linear_model: {
      const auto& g = *fam.lm;
      const double sigma = nu.empty() ? 1.0 : nu[nu.size() - 1];
      ApproxDBPrior a;
      a.theta0 = {theta0.begin(), theta0.end()};
      a.k = g.k_e;
      a.scale_matrix = g.n * sigma * sigma * g.VtV.inverse();
      return a;
    }
    default:
      throw std::invalid_argument(
          "approx_db_prior: the q_lower = k/2 Cauchy form requires "
          "pi^N(theta|nu) constant in theta, which fails for " +
          fam.name());
  }
}

ApproxDBPrior jzs_linear_model(const Eigen::MatrixXd& X1,
                               const Eigen::MatrixXd& Xe, double sigma,
                               int n) {
  if (Xe.cols() == 0)
    throw std::invalid_argument("jzs_linear_model: no tested coefficients");
  if (!(sigma > 0.0))
    throw std::invalid_argument("jzs_linear_model: sigma must be positive");
  if (Xe.rows() != n)
    throw std::invalid_argument("jzs_linear_model: design has wrong row count");
  const LinearModelGeometry g = linear_model_geometry(X1, Xe);
  ApproxDBPrior a;
  a.theta0.assign(g.k_e, 0.0);
  a.k = g.k_e;
  a.scale_matrix = double(n) * sigma * sigma * g.VtV.inverse();
  return a;
}

}  // namespace dbp
