#include <doctest.h>

#include <cmath>
#include <random>

#include "dbp/families.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/rng.hpp"
#include "dbp/special.hpp"
#include "dbp/tables.hpp"

using namespace dbp;

TEST_SUITE_BEGIN("families");

namespace {

double kl_quadrature_oracle(const FamilyDescriptor& fam, double a, double b,
                            std::span<const double> nu = {}) {
  // KL[a:b] = E_b[ log f(y|b) - log f(y|a) ] via direct quadrature.
  auto logf = [&](double y, double th) -> double {
    switch (fam.id) {
      case FamilyId::exponential_scale:
        return -std::log(th) - y / th;
      case FamilyId::gamma_mean: {
        const double al = nu[0];
        return al * std::log(al / th) - std::lgamma(al) +
               (al - 1.0) * std::log(y) - y * al / th;
      }
      default:
        throw std::logic_error("oracle: unsupported");
    }
  };
  auto f = [&](double y) {
    return std::exp(logf(y, b)) * (logf(y, b) - logf(y, a));
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  opt.breakpoints = {b, 0.5 * b, 2.0 * b};
  return integrate(f, Interval::positive_axis(), opt).value;
}

}  // namespace

TEST_CASE("bernoulli KL closed form against the two-point sum oracle") {
  auto fam = FamilyDescriptor::Bernoulli();
  auto oracle = [](double a, double b) {
    double acc = 0.0;
    for (int y = 0; y <= 1; ++y) {
      const double pb = y ? b : 1.0 - b;
      const double pa = y ? a : 1.0 - a;
      acc += pb * (std::log(pb) - std::log(pa));
    }
    return acc;
  };
  const double a[] = {0.8}, b[] = {0.5};
  CHECK(kl_unit(fam, a, b) == doctest::Approx(0.22314).epsilon(1e-4));
  CHECK(kl_unit(fam, a, b) == doctest::Approx(oracle(0.8, 0.5)).epsilon(1e-12));

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const double x[] = {U(gen)}, y[] = {U(gen)};
    CHECK(kl_unit(fam, x, y) ==
          doctest::Approx(oracle(x[0], y[0])).epsilon(1e-10));
    CHECK(kl_unit(fam, x, y) >= 0.0);
  }
}

TEST_CASE("exponential and gamma KL against the quadrature oracle") {
  auto expo = FamilyDescriptor::ExponentialScale();
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(0.3, 4.0);
  for (int i = 0; i < 20; ++i) {
    const double a[] = {U(gen)}, b[] = {U(gen)};
    CHECK(kl_unit(expo, a, b) ==
          doctest::Approx(kl_quadrature_oracle(expo, a[0], b[0]))
              .epsilon(1e-6));
  }
  auto gam = FamilyDescriptor::GammaMean();
  for (int i = 0; i < 20; ++i) {
    const double a[] = {U(gen)}, b[] = {U(gen)}, al[] = {0.5 + 3.0 * i / 19.0};
    CHECK(kl_unit(gam, a, b, al) ==
          doctest::Approx(kl_quadrature_oracle(gam, a[0], b[0], al))
              .epsilon(1e-6));
  }
}

TEST_CASE("normal location-scale KL closed form") {
  auto fam = FamilyDescriptor::NormalLocScale();
  const double a[] = {0.0, 1.0}, b[] = {1.0, 1.0};
  CHECK(kl_unit(fam, a, b) == doctest::Approx(0.5).epsilon(1e-12));
  const double c[] = {0.3, 1.7}, d[] = {-0.4, 0.8};
  auto f = [&](double y) {
    const double lb = log_normal_pdf(y, d[0], d[1]);
    const double la = log_normal_pdf(y, c[0], c[1]);
    return std::exp(lb) * (lb - la);
  };
  auto oracle = integrate(f, Interval::real_line(), 1e-10);
  CHECK(kl_unit(fam, c, d) == doctest::Approx(oracle.value).epsilon(1e-8));
}

TEST_CASE("shifted exponential KL respects the support") {
  auto fam = FamilyDescriptor::ShiftedExponential(false);
  const double a[] = {0.0}, b[] = {0.5};
  CHECK(kl_unit(fam, a, b) == doctest::Approx(0.5));
  CHECK(std::isinf(kl_unit(fam, b, a)));
}

TEST_CASE("kl_unit vanishes iff the arguments coincide") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(0.2, 0.8);
  auto fam = FamilyDescriptor::Bernoulli();
  for (int i = 0; i < 10; ++i) {
    const double x[] = {U(gen)};
    CHECK(kl_unit(fam, x, x) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("mixture family has no closed-form kl_unit") {
  auto fam = FamilyDescriptor::NormalMixture(0.5);
  const double a[] = {1.0}, b[] = {0.0};
  CHECK_THROWS_AS(kl_unit(fam, a, b), std::invalid_argument);
}

TEST_CASE("loglik worked examples") {
  auto bern = FamilyDescriptor::Bernoulli();
  const double half[] = {0.5};
  CHECK(loglik(bern, half, {}, SuffStats::MakeBernoulli(10, 5)) ==
        doctest::Approx(10.0 * std::log(0.5)).epsilon(1e-12));

  auto expo = FamilyDescriptor::ExponentialScale();
  const double five[] = {5.0};
  CHECK(loglik(expo, five, {}, SuffStats::MakeExponential(10, 5.0)) ==
        doctest::Approx(-10.0 * std::log(5.0) - 10.0).epsilon(1e-12));

  auto shifted = FamilyDescriptor::ShiftedExponential(false);
  const double one[] = {1.0};
  CHECK(loglik(shifted, one, {}, SuffStats::MakeShiftedExponential(10, 0.5)) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("sufficiency: loglik through stats equals raw-data loglik") {
  Rng rng(2024);
  {
    auto fam = FamilyDescriptor::ExponentialScale();
    std::vector<double> data(40);
    for (auto& y : data) y = 2.5 * rng.exponential();
    auto stats = SuffStats::FromRaw(fam, data);
    for (double mu : {0.7, 2.5, 6.0}) {
      double raw = 0.0;
      for (double y : data) raw += -std::log(mu) - y / mu;
      const double th[] = {mu};
      CHECK(loglik(fam, th, {}, stats) == doctest::Approx(raw).epsilon(1e-10));
    }
  }
  {
    auto fam = FamilyDescriptor::NormalLocScale();
    std::vector<double> data(25);
    for (auto& y : data) y = 1.0 + 2.0 * rng.normal();
    auto stats = SuffStats::FromRaw(fam, data);
    for (double mu : {0.0, 1.5}) {
      for (double s : {1.0, 2.2}) {
        double raw = 0.0;
        for (double y : data) raw += log_normal_pdf(y, mu, s);
        const double th[] = {mu, s};
        CHECK(loglik(fam, th, {}, stats) ==
              doctest::Approx(raw).epsilon(1e-10));
      }
    }
  }
  {
    auto fam = FamilyDescriptor::GammaMean();
    auto data = draw_gamma_sample(99, 30, 4.0, 1.5);
    auto stats = SuffStats::FromRaw(fam, data);
    for (double mu : {3.0, 4.5}) {
      for (double al : {2.0, 7.0}) {
        double raw = 0.0;
        for (double y : data)
          raw += al * std::log(al / mu) - std::lgamma(al) +
                 (al - 1.0) * std::log(y) - y * al / mu;
        const double th[] = {mu}, nu[] = {al};
        CHECK(loglik(fam, th, nu, stats) ==
              doctest::Approx(raw).epsilon(1e-10));
      }
    }
  }
  {
    // shifted exponential: T alone is sufficient up to a theta-free data
    // constant, so log-likelihood differences must match exactly
    auto fam = FamilyDescriptor::ShiftedExponential(false);
    std::vector<double> data(15);
    for (auto& y : data) y = 0.3 + rng.exponential();
    auto stats = SuffStats::FromRaw(fam, data);
    double sum = 0.0;
    for (double y : data) sum += y;
    auto raw = [&](double th) { return data.size() * th - sum; };
    const double t1[] = {0.1}, t2[] = {0.25};
    CHECK(loglik(fam, t1, {}, stats) - loglik(fam, t2, {}, stats) ==
          doctest::Approx(raw(0.1) - raw(0.25)).epsilon(1e-10));
  }
}

TEST_CASE("gamma MLE reconstruction") {
  SUBCASE("worked example") {
    auto stats = gamma_mle_to_suffstats(10.0, 1.0, 10);
    CHECK(stats.ybar == doctest::Approx(10.0));
    const double alpha_hat = 100.0;
    CHECK(stats.logmean ==
          doctest::Approx(std::log(10.0) -
                          (std::log(alpha_hat) - digamma(alpha_hat)))
              .epsilon(1e-12));
    const double score = std::log(alpha_hat) - digamma(alpha_hat) -
                         (std::log(stats.ybar) - stats.logmean);
    CHECK(std::fabs(score) < 1e-12);
  }
  SUBCASE("sd equal to mean gives the exponential special case") {
    auto stats = gamma_mle_to_suffstats(3.0, 3.0, 5);
    const double ahat = gamma_shape_mle(std::log(stats.ybar) - stats.logmean);
    CHECK(ahat == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("round trip through a simulated sample") {
    auto data = draw_gamma_sample(123, 200, 4.0, 1.2);
    auto fam = FamilyDescriptor::GammaMean();
    auto stats = SuffStats::FromRaw(fam, data);
    const double ahat = gamma_shape_mle(std::log(stats.ybar) - stats.logmean);
    auto rebuilt =
        gamma_mle_to_suffstats(stats.ybar, stats.ybar / std::sqrt(ahat), 200);
    CHECK(rebuilt.logmean == doctest::Approx(stats.logmean).epsilon(1e-6));
  }
}

TEST_CASE("linear model geometry") {
  SUBCASE("intercept plus one covariate: VtV is the centered sum of squares") {
    Eigen::MatrixXd X1 = Eigen::MatrixXd::Ones(5, 1);
    Eigen::MatrixXd Xe(5, 1);
    Xe << 1.0, 2.0, 3.0, 4.0, 5.0;
    auto g = linear_model_geometry(X1, Xe);
    const double xbar = 3.0;
    double ss = 0.0;
    for (int i = 0; i < 5; ++i) ss += (Xe(i, 0) - xbar) * (Xe(i, 0) - xbar);
    CHECK(g.VtV(0, 0) == doctest::Approx(ss).epsilon(1e-12));
    CHECK(g.k_e == 1);
  }
  SUBCASE("already orthogonal design keeps V = Xe") {
    Eigen::MatrixXd X1(4, 1);
    X1 << 1, 1, 1, 1;
    Eigen::MatrixXd Xe(4, 1);
    Xe << -1, 1, -1, 1;
    auto g = linear_model_geometry(X1, Xe);
    CHECK((g.V - Xe).norm() < 1e-12);
  }
  SUBCASE("rank deficiency names the dependent columns") {
    Eigen::MatrixXd X1 = Eigen::MatrixXd::Ones(4, 1);
    Eigen::MatrixXd Xe(4, 2);
    Xe << 1, 2, 1, 2, 1, 2, 1, 2;
    CHECK_THROWS_WITH_AS(linear_model_geometry(X1, Xe),
                         doctest::Contains("dependent columns"),
                         std::invalid_argument);
  }
}

TEST_CASE("stats validation catches bad inputs") {
  auto bern = FamilyDescriptor::Bernoulli();
  CHECK_THROWS_AS(SuffStats::MakeBernoulli(10, 11).validate(bern),
                  std::invalid_argument);
  auto gam = FamilyDescriptor::GammaMean();
  CHECK_THROWS_AS(
      SuffStats::MakeGamma(10, 2.0, std::log(2.0) + 0.1).validate(gam),
      std::invalid_argument);
  CHECK_THROWS_AS(FamilyDescriptor::NormalMixture(1.0), std::invalid_argument);
}

TEST_CASE("effective sample size rules") {
  CHECK(FamilyDescriptor::Bernoulli().n_star(25) == 25.0);
  CHECK(FamilyDescriptor::NormalMixture(0.25).n_star(100) ==
        doctest::Approx(75.0));
}

TEST_SUITE_END();
