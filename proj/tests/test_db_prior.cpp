#include <doctest.h>

#include <cmath>

#include "dbp/db_prior.hpp"
#include "dbp/errors.hpp"
#include "dbp/integrability.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/special.hpp"

using namespace dbp;

TEST_SUITE_BEGIN("db_prior");

namespace {

double total_mass(const DBPrior& p, Interval dom,
                  std::vector<double> hints = {}) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  opt.breakpoints = std::move(hints);
  return integrate([&](double th) { return p.density(th); }, dom, opt).value;
}

}  // namespace

TEST_CASE("tail indices match the closed-form findings") {
  const double half[] = {0.5};
  const double five[] = {5.0};
  const double zero[] = {0.0};
  const double nls[] = {0.0, 1.0};
  CHECK(q_lower(FamilyDescriptor::Bernoulli(), DivergenceKind::sum, half) ==
        0.0);
  CHECK(q_lower(FamilyDescriptor::ExponentialScale(), DivergenceKind::sum,
                five) == 0.0);
  CHECK(q_lower(FamilyDescriptor::ExponentialScale(), DivergenceKind::min,
                five) == 1.0);
  CHECK(q_lower(FamilyDescriptor::NormalLocScale(), DivergenceKind::sum,
                nls) == 0.5);
  CHECK(std::isinf(q_lower(FamilyDescriptor::NormalLocScale(),
                           DivergenceKind::min, nls)));
  CHECK(q_lower(FamilyDescriptor::ShiftedExponential(false),
                DivergenceKind::min, zero) == 1.0);
  CHECK(q_lower(FamilyDescriptor::NormalMixture(0.5), DivergenceKind::sum,
                zero) == 0.5);
  CHECK(std::isinf(
      q_lower(FamilyDescriptor::NormalMixture(0.5), DivergenceKind::min, zero)));
  CHECK(q_lower(FamilyDescriptor::GammaMean(), DivergenceKind::sum, five) ==
        0.0);
  CHECK(q_lower(FamilyDescriptor::GammaMean(), DivergenceKind::min, five) ==
        1.0);
  CHECK_THROWS_AS(q_lower(FamilyDescriptor::ShiftedExponential(false),
                          DivergenceKind::sum, zero),
                  PriorNotDefinedError);
}

TEST_CASE("shifted exponential min-DB priors in closed form") {
  SUBCASE("two-sided: c = 2, density at the null is 1/2") {
    auto p = build(FamilyDescriptor::ShiftedExponential(false),
                   DivergenceKind::min, {0.0});
    CHECK(p.exponent() == doctest::Approx(1.5));
    CHECK(p.normalizer() == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(p.density(0.0) == doctest::Approx(0.5).epsilon(1e-8));
    for (double th : {0.3, 1.0, 4.0})
      CHECK(p.density(th) ==
            doctest::Approx(0.5 * std::pow(1.0 + 2.0 * th, -1.5))
                .epsilon(1e-8));
  }
  SUBCASE("one-sided: c = 1") {
    auto p = build(FamilyDescriptor::ShiftedExponential(true),
                   DivergenceKind::min, {0.0});
    CHECK(p.normalizer() == doctest::Approx(1.0).epsilon(1e-8));
    for (double th : {0.0, 0.5, 2.0})
      CHECK(p.density(th) ==
            doctest::Approx(std::pow(1.0 + 2.0 * th, -1.5)).epsilon(1e-8));
    CHECK(p.density(-0.1) == 0.0);
  }
}

TEST_CASE("nonexistent priors are refused with the mathematical reason") {
  CHECK_THROWS_WITH_AS(
      build(FamilyDescriptor::NormalLocScale(), DivergenceKind::min,
            {0.0, 1.0}),
      doctest::Contains("does not exist"), PriorNotDefinedError);
  CHECK_THROWS_AS(build(FamilyDescriptor::NormalMixture(0.5),
                        DivergenceKind::min, {0.0}),
                  PriorNotDefinedError);
  CHECK_THROWS_AS(build(FamilyDescriptor::ShiftedExponential(false),
                        DivergenceKind::sum, {0.0}),
                  PriorNotDefinedError);
}

TEST_CASE("normalization of every buildable prior") {
  SUBCASE("bernoulli sum and min") {
    for (auto kind : {DivergenceKind::sum, DivergenceKind::min}) {
      for (double t0 : {0.5, 0.75}) {
        auto p = build(FamilyDescriptor::Bernoulli(), kind, {t0});
        CHECK(total_mass(p, Interval(0.0, 1.0), {t0}) ==
              doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }
  SUBCASE("exponential sum and min") {
    // Integrate in u = log(mu/mu0): the min-DB prior's logarithmic tail
    // carries mass beyond the largest double in mu coordinates, so the
    // tail is continued through the closed-form directed divergences.
    for (auto kind : {DivergenceKind::sum, DivergenceKind::min}) {
      auto p = build(FamilyDescriptor::ExponentialScale(), kind, {5.0});
      auto f = [&](double u) {
        if (std::fabs(u) < 500.0) {
          const double mu = 5.0 * std::exp(u);
          return p.density(mu) * mu;
        }
        const double k1 = u + std::exp(-u) - 1.0;
        const double k2 = -u + std::exp(u) - 1.0;
        const double d =
            kind == DivergenceKind::sum ? k1 + k2 : 2.0 * std::min(k1, k2);
        return std::pow(1.0 + d, -p.exponent()) / p.normalizer();
      };
      QuadratureOptions opt;
      opt.rel_tol = 1e-9;
      opt.breakpoints = {0.0};
      auto res = integrate(f, Interval::real_line(), opt);
      CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  SUBCASE("shifted exponential") {
    auto p = build(FamilyDescriptor::ShiftedExponential(false),
                   DivergenceKind::min, {1.0});
    CHECK(total_mass(p, Interval::real_line(), {1.0}) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("mixture") {
    auto p = build(FamilyDescriptor::NormalMixture(0.75), DivergenceKind::sum,
                   {0.0});
    CHECK(total_mass(p, Interval::real_line(), {0.0}) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("normal location-scale (2-D)") {
    auto p = build(FamilyDescriptor::NormalLocScale(), DivergenceKind::sum,
                   {0.0, 1.0});
    auto outer = [&](double s) {
      QuadratureOptions iopt;
      iopt.rel_tol = 1e-10;
      iopt.breakpoints = {0.0};
      return integrate(
                 [&](double m) {
                   const double th[2] = {m, s};
                   return p.density(th);
                 },
                 Interval::real_line(), iopt)
          .value;
    };
    QuadratureOptions opt;
    opt.rel_tol = 1e-8;
    opt.breakpoints = {1.0};
    auto res = integrate(outer, Interval::positive_axis(), opt);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("gamma conditional at several alpha") {
    for (auto kind : {DivergenceKind::sum, DivergenceKind::min}) {
      auto p = build(FamilyDescriptor::GammaMean(), kind, {10.0});
      for (double alpha : {0.5, 1.0, 5.0, 100.0}) {
        const double nu[] = {alpha};
        auto f = [&](double u) {
          if (std::fabs(u) < 500.0) {
            const double mu = 10.0 * std::exp(u);
            return p.density(mu, nu) * mu;  // d mu = mu du
          }
          const double k1 = alpha * (u + std::exp(-u) - 1.0);
          const double k2 = alpha * (-u + std::exp(u) - 1.0);
          const double d =
              kind == DivergenceKind::sum ? k1 + k2 : 2.0 * std::min(k1, k2);
          return std::pow(1.0 + d, -p.exponent()) / p.normalizer(nu);
        };
        QuadratureOptions opt;
        opt.rel_tol = 1e-9;
        opt.breakpoints = {0.0};
        auto res = integrate(f, Interval::real_line(), opt);
        CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("location symmetry and unimodality (Lemma 1)") {
  auto p = build(FamilyDescriptor::ShiftedExponential(false),
                 DivergenceKind::min, {0.7});
  double prev = p.density(0.7);
  for (int k = 1; k <= 20; ++k) {
    const double d = 0.3 * k;
    CHECK(p.density(0.7 + d) == doctest::Approx(p.density(0.7 - d)).epsilon(1e-12));
    CHECK(p.density(0.7 + d) <= prev + 1e-14);
    prev = p.density(0.7 + d);
  }
}

TEST_CASE("scale symmetry in the log parameterization") {
  // pi^S and pi^M of the exponential are symmetric around log mu0.
  for (auto kind : {DivergenceKind::sum, DivergenceKind::min}) {
    auto p = build(FamilyDescriptor::ExponentialScale(), kind, {5.0});
    for (double u : {0.2, 0.8, 1.9}) {
      const double right = p.density(5.0 * std::exp(u)) * 5.0 * std::exp(u);
      const double left = p.density(5.0 * std::exp(-u)) * 5.0 * std::exp(-u);
      CHECK(right == doctest::Approx(left).epsilon(1e-10));
    }
  }
}

TEST_CASE("Proposition 1: invariance under reparameterization") {
  // Build the prior in xi = log mu coordinates directly (pi^N(xi) = 1) and
  // compare with the mu-space prior times the Jacobian.
  auto fam = FamilyDescriptor::ExponentialScale();
  const double mu0 = 5.0;
  auto p = build(fam, DivergenceKind::sum, {mu0});
  auto dbar = unitary(fam, DivergenceKind::sum, {mu0});
  QuadratureOptions opt;
  opt.rel_tol = 1e-11;
  opt.breakpoints = {0.0};
  const double c_xi =
      integrate(
          [&](double u) { return std::pow(1.0 + dbar(mu0 * std::exp(u)), -0.5); },
          Interval::real_line(), opt)
          .value;
  for (double mu : {0.8, 2.0, 5.0, 12.0, 40.0}) {
    const double pi_xi =
        std::pow(1.0 + dbar(mu), -0.5) / c_xi;  // density in xi at xi(mu)
    CHECK(p.density(mu) * mu == doctest::Approx(pi_xi).epsilon(1e-10));
  }
}

TEST_CASE("min-DB prior of the irregular model has no moments") {
  auto p = build(FamilyDescriptor::ShiftedExponential(false),
                 DivergenceKind::min, {0.0});
  auto g = [&](double th) { return std::fabs(th) * p.density(th); };
  CHECK(probe_integrability(g, Interval::real_line()) ==
        IntegrabilityClass::divergent);
}

TEST_CASE("c(q) is strictly decreasing in q") {
  auto fam = FamilyDescriptor::ExponentialScale();
  auto p1 = build(fam, DivergenceKind::sum, {5.0});           // q* = 1/2
  auto p2 = build(fam, DivergenceKind::sum, {5.0}, 1.5);      // q = 3/2
  CHECK(p2.normalizer() < p1.normalizer());
  auto m1 = build(fam, DivergenceKind::min, {5.0});           // q* = 3/2
  auto m2 = build(fam, DivergenceKind::min, {5.0}, 1.5);      // q = 5/2
  CHECK(m2.normalizer() < m1.normalizer());
}

TEST_CASE("normal location-scale closed-form factorization") {
  // pi^S(mu, sigma) = pi^S(sigma) Ca(mu | mu0, sqrt(Sigma)),
  // Sigma = (sigma0^4 + sigma^4) / (sigma0^2 + sigma^2).
  const double mu0 = 0.0, s0 = 1.0;
  auto p = build(FamilyDescriptor::NormalLocScale(), DivergenceKind::sum,
                 {mu0, s0});
  // marginal normalizer: kappa = int s ((1+s^4)(1+s^2))^{-1/2} ds
  auto kap = integrate(
      [](double s) {
        return s / std::sqrt((1.0 + s * s * s * s) * (1.0 + s * s));
      },
      Interval::positive_axis(), 1e-12);
  REQUIRE(kap.converged);
  for (double s : {0.4, 1.0, 2.3}) {
    for (double m : {0.0, 0.7, -1.9}) {
      const double sigma_marg =
          s / (kap.value *
               std::sqrt((s0 * s0 * s0 * s0 + s * s * s * s) *
                         (s0 * s0 + s * s)));
      const double Sigma = (s0 * s0 * s0 * s0 + s * s * s * s) /
                           (s0 * s0 + s * s);
      const double cond = cauchy_pdf(m, mu0, std::sqrt(Sigma));
      const double th[2] = {m, s};
      CHECK(p.density(th) ==
            doctest::Approx(sigma_marg * cond).epsilon(1e-8));
    }
  }
}

TEST_CASE("approximate DB prior (Fisher-information Cauchy)") {
  SUBCASE("normal mean with known sigma via the linear model") {
    Eigen::MatrixXd X1(7, 0);
    Eigen::MatrixXd Xe = Eigen::MatrixXd::Ones(7, 1);
    auto fam = FamilyDescriptor::LinearModel(X1, Xe);
    const double nu[] = {1.0};  // sigma
    const double t0[] = {0.0};
    auto a = approx_db_prior(fam, t0, nu);
    CHECK(a.scale_matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    // exact DB prior equals the approximation: the divergence is exactly
    // quadratic for Gaussian location
    auto p = build(fam, DivergenceKind::sum, {0.0});
    for (double th : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
      CHECK(p.density(th, nu) == doctest::Approx(a.density(th)).epsilon(1e-9));
      CHECK(a.density(th) ==
            doctest::Approx(cauchy_pdf(th, 0.0, 1.0)).epsilon(1e-12));
    }
  }
  SUBCASE("mixture scale grows as 1/(1-p); p -> 0 is the BP Cauchy") {
    auto fam = FamilyDescriptor::NormalMixture(0.02);
    const double t0[] = {0.0};
    auto a = approx_db_prior(fam, t0);
    CHECK(a.scale_matrix(0, 0) == doctest::Approx(1.0 / 0.98));
    for (double mu : {0.0, 1.0, 2.5})
      CHECK(a.density(mu) ==
            doctest::Approx(cauchy_pdf(mu, 0.0, std::sqrt(1.0 / 0.98)))
                .epsilon(1e-12));
  }
  SUBCASE("families with non-constant pi^N(theta|nu) are rejected") {
    const double t0[] = {0.5};
    CHECK_THROWS_AS(approx_db_prior(FamilyDescriptor::Bernoulli(), t0),
                    std::invalid_argument);
    const double m0[] = {5.0};
    CHECK_THROWS_AS(approx_db_prior(FamilyDescriptor::ExponentialScale(), m0),
                    std::invalid_argument);
    CHECK_THROWS_AS(approx_db_prior(FamilyDescriptor::GammaMean(), m0),
                    std::invalid_argument);
  }
}

TEST_CASE("JZS form for the linear model") {
  SUBCASE("intercept plus one covariate: scale = n sigma^2 / centered SS") {
    Eigen::MatrixXd X1 = Eigen::MatrixXd::Ones(5, 1);
    Eigen::MatrixXd Xe(5, 1);
    Xe << 1, 2, 3, 4, 5;
    const double sigma = 2.0;
    auto jzs = jzs_linear_model(X1, Xe, sigma, 5);
    CHECK(jzs.scale_matrix(0, 0) ==
          doctest::Approx(5.0 * sigma * sigma / 10.0).epsilon(1e-12));
  }
  SUBCASE("DB construction reproduces the JZS density pointwise") {
    Eigen::MatrixXd X1 = Eigen::MatrixXd::Ones(5, 1);
    Eigen::MatrixXd Xe(5, 1);
    Xe << 0.3, -1.2, 0.8, 2.0, -0.4;
    auto fam = FamilyDescriptor::LinearModel(X1, Xe);
    auto p = build(fam, DivergenceKind::sum, {0.0});
    for (double sigma : {0.7, 1.0, 2.5}) {
      auto jzs = jzs_linear_model(X1, Xe, sigma, 5);
      const double nu[] = {0.0, sigma};  // beta1 (irrelevant), sigma
      for (double be : {-2.0, -0.3, 0.0, 0.9, 3.1}) {
        CHECK(p.density(be, nu) ==
              doctest::Approx(jzs.density(be)).epsilon(1e-8));
      }
    }
  }
  SUBCASE("no tested coefficients is rejected") {
    Eigen::MatrixXd X1 = Eigen::MatrixXd::Ones(4, 1);
    Eigen::MatrixXd Xe(4, 0);
    CHECK_THROWS_AS(jzs_linear_model(X1, Xe, 1.0, 4), std::invalid_argument);
  }
}

TEST_CASE("bernoulli sum-DB density is symmetric when theta0 = 1/2") {
  auto p = build(FamilyDescriptor::Bernoulli(), DivergenceKind::sum, {0.5});
  for (double th : {0.05, 0.2, 0.35, 0.45})
    CHECK(p.density(th) == doctest::Approx(p.density(1.0 - th)).epsilon(1e-10));
}

TEST_CASE("exponential sum-DB modal ray value at the null") {
  auto p = build(FamilyDescriptor::ExponentialScale(), DivergenceKind::sum,
                 {5.0});
  CHECK(p.density(5.0) ==
        doctest::Approx(1.0 / (p.normalizer() * 5.0)).epsilon(1e-12));
}

TEST_CASE("gamma conditional density is scale equivariant") {
  auto p1 = build(FamilyDescriptor::GammaMean(), DivergenceKind::sum, {1.0});
  auto p2 = build(FamilyDescriptor::GammaMean(), DivergenceKind::sum, {7.0});
  const double nu[] = {2.5};
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(p1.density(t, nu) * 1.0 ==
          doctest::Approx(p2.density(7.0 * t, nu) * 7.0).epsilon(1e-9));
  }
}

TEST_CASE("missing nuisance is an arity error") {
  auto p = build(FamilyDescriptor::GammaMean(), DivergenceKind::sum, {10.0});
  CHECK_THROWS_AS(p.density(9.0), std::invalid_argument);
}

TEST_SUITE_END();
