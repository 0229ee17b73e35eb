#include <doctest.h>

#include <cmath>
#include <random>

#include "dbp/divergence.hpp"
#include "dbp/errors.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/rng.hpp"
#include "dbp/special.hpp"

using namespace dbp;

TEST_SUITE_BEGIN("divergence");

TEST_CASE("exponential sum divergence closed form") {
  auto fam = FamilyDescriptor::ExponentialScale();
  const double a[] = {10.0}, b[] = {5.0};
  // (mu - mu0)^2 / (mu mu0)
  CHECK(d_sum(fam, a, b) == doctest::Approx(0.5).epsilon(1e-12));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0.2, 8.0);
  for (int i = 0; i < 15; ++i) {
    const double x[] = {U(gen)}, y[] = {U(gen)};
    CHECK(d_sum(fam, x, y) == doctest::Approx(d_sum(fam, y, x)).epsilon(1e-13));
    CHECK(d_sum(fam, x, x) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d_min(fam, x, y) <= d_sum(fam, x, y) + 1e-13);
  }
}

TEST_CASE("shifted exponential min divergence is 2|theta - theta0|") {
  auto fam = FamilyDescriptor::ShiftedExponential(false);
  const double a[] = {0.5}, b[] = {0.0};
  CHECK(d_min(fam, a, b) == doctest::Approx(1.0));
  CHECK_THROWS_AS(d_sum(fam, a, b), PriorNotDefinedError);
}

TEST_CASE("normal location via the linear model: min equals sum") {
  Eigen::MatrixXd X1(1, 0);
  Eigen::MatrixXd Xe = Eigen::MatrixXd::Ones(1, 1);
  auto fam = FamilyDescriptor::LinearModel(X1, Xe);
  const double a[] = {1.0}, b[] = {0.0}, nu[] = {1.0};  // sigma = 1
  CHECK(d_min(fam, a, b, nu) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d_sum(fam, a, b, nu) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unitary divergence worked examples") {
  SUBCASE("exponential: independent of n by construction") {
    auto fam = FamilyDescriptor::ExponentialScale();
    auto dbar = unitary(fam, DivergenceKind::sum, {5.0});
    CHECK(dbar(10.0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("mixture at the null is zero for every p") {
    for (double p : {0.1, 0.5, 0.9}) {
      auto fam = FamilyDescriptor::NormalMixture(p);
      auto dbar = unitary(fam, DivergenceKind::sum, {0.0});
      CHECK(dbar(0.0) == doctest::Approx(0.0));
    }
  }
  SUBCASE("linear model: quadratic form scaled by VtV/n") {
    // 5-observation design; oracle = seeded Monte Carlo estimate of the
    // full-sample Gaussian KL
    Eigen::MatrixXd X1 = Eigen::MatrixXd::Ones(5, 1);
    Eigen::MatrixXd Xe(5, 1);
    Xe << -2, -1, 0, 1, 2;
    auto fam = FamilyDescriptor::LinearModel(X1, Xe);
    const double sigma = 1.3;
    const double nu[] = {0.7, sigma};  // beta1, sigma
    auto dbar = unitary(fam, DivergenceKind::sum, {0.0});
    const double beta_e = 0.8;
    const double expected =
        beta_e * fam.lm->VtV(0, 0) * beta_e / (sigma * sigma) / 5.0;
    CHECK(dbar(beta_e, nu) == doctest::Approx(expected).epsilon(1e-12));

    // Monte Carlo oracle for KL[(be,nu):(0,nu)] = E_0 log f0/f_be
    Rng rng(77);
    double acc = 0.0;
    const int ndraw = 200000;
    for (int i = 0; i < ndraw; ++i) {
      double l0 = 0.0, lb = 0.0;
      for (int k = 0; k < 5; ++k) {
        const double mean0 = 0.7;
        const double meanb = 0.7 + beta_e * Xe(k, 0);
        const double y = mean0 + sigma * rng.normal();
        l0 += log_normal_pdf(y, mean0, sigma);
        lb += log_normal_pdf(y, meanb, sigma);
      }
      acc += l0 - lb;
    }
    const double kl_mc = acc / ndraw;  // directed KL, full sample
    const double b0[] = {0.0}, be[] = {beta_e};
    CHECK(kl_unit(fam, be, b0, nu) == doctest::Approx(kl_mc).epsilon(0.02));
  }
}

TEST_CASE("mixture divergence: Laplace form") {
  SUBCASE("p = 1/2 collapses to mu^2/2") {
    CHECK(mixture_divergence(0.5, 1.0, MixtureMode::laplace) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mixture_divergence(0.5, 2.0, MixtureMode::laplace) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("zero at the null in both modes") {
    CHECK(mixture_divergence(0.3, 0.0, MixtureMode::laplace) == 0.0);
    CHECK(mixture_divergence(0.3, 0.0, MixtureMode::exact) == 0.0);
  }
  SUBCASE("exact vs laplace at p = 0.5: the identity is exact") {
    for (int i = 0; i <= 20; ++i) {
      const double mu = 3.0 * i / 20.0;
      CHECK(mixture_divergence(0.5, mu, MixtureMode::exact) ==
            doctest::Approx(mixture_divergence(0.5, mu, MixtureMode::laplace))
                .epsilon(1e-8));
    }
  }
  SUBCASE("exact vs laplace at p = 0.75 (regression-locked)") {
    // Largest gap over mu in [0,3] is ~12% relative near mu = 2.4; locked
    // at the first computed value.
    double max_diff = 0.0;
    for (int i = 0; i <= 60; ++i) {
      const double mu = 3.0 * i / 60.0;
      const double d =
          std::fabs(mixture_divergence(0.75, mu, MixtureMode::exact) -
                    mixture_divergence(0.75, mu, MixtureMode::laplace));
      max_diff = std::max(max_diff, d);
    }
    CHECK(max_diff == doctest::Approx(0.24046).epsilon(1e-3));
  }
  SUBCASE("local and tail regimes of the Laplace divergence") {
    for (double p : {0.25, 0.5, 0.75}) {
      // near zero: Dbar ~ (1-p) mu^2
      const double mu_small = 1e-3;
      CHECK(mixture_divergence(p, mu_small, MixtureMode::laplace) /
                ((1.0 - p) * mu_small * mu_small) ==
            doctest::Approx(1.0).epsilon(1e-3));
      // far out: Dbar ~ mu^2/2 independently of p
      const double mu_big = 40.0;
      CHECK(mixture_divergence(p, mu_big, MixtureMode::laplace) /
                (0.5 * mu_big * mu_big) ==
            doctest::Approx(1.0).epsilon(1e-2));
    }
  }
}

TEST_CASE("reparameterization invariance of the unitary divergence") {
  // Exponential scale in mu vs xi = log mu: the log-data family
  // f*(z|xi) = exp(z - xi - e^{z - xi}) has the same directed KLs.
  auto fam = FamilyDescriptor::ExponentialScale();
  const double mu0 = 2.0;
  for (auto kind : {DivergenceKind::sum, DivergenceKind::min}) {
    auto dbar = unitary(fam, kind, {mu0});
    for (double mu : {0.4, 1.1, 3.7, 9.0}) {
      // directed KLs in the xi parameterization by quadrature over z
      auto logf = [](double z, double xi) {
        return z - xi - std::exp(z - xi);
      };
      const double xi = std::log(mu), xi0 = std::log(mu0);
      auto kl = [&](double xa, double xb) {
        auto f = [&](double z) {
          const double lb = logf(z, xb);
          if (lb < -700.0) return 0.0;
          return std::exp(lb) * (lb - logf(z, xa));
        };
        QuadratureOptions opt;
        opt.rel_tol = 1e-11;
        opt.breakpoints = {xb};
        return integrate(f, Interval::real_line(), opt).value;
      };
      const double k1 = kl(xi, xi0), k2 = kl(xi0, xi);
      const double dbar_xi = kind == DivergenceKind::sum
                                 ? k1 + k2
                                 : 2.0 * std::min(k1, k2);
      CHECK(dbar(mu) == doctest::Approx(dbar_xi).epsilon(1e-8));
    }
  }
}

TEST_CASE("sum dominates min wherever both exist") {
  auto fam = FamilyDescriptor::GammaMean();
  auto ds = unitary(fam, DivergenceKind::sum, {2.0});
  auto dm = unitary(fam, DivergenceKind::min, {2.0});
  const double nu[] = {1.7};
  for (double mu : {0.5, 1.0, 2.0, 3.5, 8.0})
    CHECK(dm(mu, nu) <= ds(mu, nu) + 1e-13);
}

TEST_CASE("local quadratic behavior against Fisher information") {
  // Dbar(theta)/[(theta-theta0)' J (theta-theta0)] -> 1 with J the
  // per-effective-observation information; Richardson extrapolation over
  // offsets 1e-2 and 1e-3.
  auto ratio_at = [](const FamilyDescriptor& fam, std::vector<double> theta0,
                     std::vector<double> dir, DivergenceKind kind,
                     std::span<const double> nu, double h) {
    auto dbar = unitary(fam, kind, theta0);
    Eigen::MatrixXd J = unit_fisher_info(fam, theta0, nu);
    std::vector<double> th(theta0.size());
    Eigen::VectorXd d(theta0.size());
    for (size_t i = 0; i < theta0.size(); ++i) {
      th[i] = theta0[i] + h * dir[i];
      d(i) = h * dir[i];
    }
    return dbar(th, nu) / d.dot(J * d);
  };
  auto richardson = [&](const FamilyDescriptor& fam,
                        std::vector<double> theta0, std::vector<double> dir,
                        DivergenceKind kind, std::span<const double> nu) {
    const double r1 = ratio_at(fam, theta0, dir, kind, nu, 1e-2);
    const double r2 = ratio_at(fam, theta0, dir, kind, nu, 1e-3);
    return (10.0 * r2 - r1) / 9.0;
  };

  const double alpha[] = {2.3};
  CHECK(richardson(FamilyDescriptor::Bernoulli(), {0.3}, {1},
                   DivergenceKind::sum, {}) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(richardson(FamilyDescriptor::Bernoulli(), {0.3}, {1},
                   DivergenceKind::min, {}) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(richardson(FamilyDescriptor::ExponentialScale(), {2.0}, {1},
                   DivergenceKind::sum, {}) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(richardson(FamilyDescriptor::GammaMean(), {2.0}, {1},
                   DivergenceKind::sum, alpha) ==
        doctest::Approx(1.0).epsilon(1e-4));
  CHECK(richardson(FamilyDescriptor::NormalLocScale(), {0.0, 1.0}, {1, 0.5},
                   DivergenceKind::sum, {}) == doctest::Approx(1.0).epsilon(1e-4));
  // mixture uses the Laplace divergence and the n* scaling
  CHECK(richardson(FamilyDescriptor::NormalMixture(0.4), {0.0}, {1},
                   DivergenceKind::sum, {}) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_SUITE_END();
