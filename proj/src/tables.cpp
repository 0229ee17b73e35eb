#include "dbp/tables.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "dbp/errors.hpp"
#include "dbp/quadrature.hpp"
#include "dbp/rng.hpp"
#include "dbp/special.hpp"

namespace dbp {

namespace {

std::vector<double> eval_cells(const std::vector<std::function<double()>>& cells,
                               par::Mode mode) {
  std::vector<std::string> errors(cells.size());
  auto vals = par::map<double>(
      cells.size(),
      [&](size_t i) {
        try {
          return cells[i]();
        } catch (const std::exception& e) {
          errors[i] = e.what();
          return std::numeric_limits<double>::quiet_NaN();
        }
      },
      mode);
  for (const auto& e : errors)
    if (!e.empty()) throw NumericError("table cell failed: " + e);
  return vals;
}

double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.uniform();
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

std::vector<double> draw_gamma_sample(std::uint64_t seed, int n, double mean,
                                      double sd) {
  const double shape = (mean / sd) * (mean / sd);
  const double scale = sd * sd / mean;
  Rng rng(seed);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = scale * gamma_draw(rng, shape);
  return out;
}

std::vector<double> draw_mixture_sample(std::uint64_t seed, int n, double p,
                                        double mu) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const bool null_comp = rng.uniform() < p;
    out[i] = (null_comp ? 0.0 : mu) + rng.normal();
  }
  return out;
}

PriorHandle make_prior(const FamilyDescriptor& fam, const std::string& name,
                       std::vector<double> theta0) {
  if (name == "sum-db")
    return PriorHandle::of(build(fam, DivergenceKind::sum, theta0));
  if (name == "min-db")
    return PriorHandle::of(build(fam, DivergenceKind::min, theta0));
  if (name == "arithmetic")
    return PriorHandle::of(ComparisonPrior(
        ComparisonPriorId::arithmetic_intrinsic, fam, theta0));
  if (name == "fractional")
    return PriorHandle::of(ComparisonPrior(
        ComparisonPriorId::fractional_intrinsic, fam, theta0));
  if (name == "jeffreys-rule")
    return PriorHandle::of(
        ComparisonPrior(ComparisonPriorId::jeffreys_rule, fam, theta0));
  if (name == "bp-cauchy")
    return PriorHandle::of(
        ComparisonPrior(ComparisonPriorId::bp_cauchy, fam, theta0));
  if (name == "cauchy-approx")
    return PriorHandle::of(approx_db_prior(fam, theta0), "cauchy-approx");
  if (name == "jzs")
    throw std::invalid_argument(
        "jzs prior requires a linear-model design matrix; it has no "
        "statistic-flag surface");
  throw std::invalid_argument("unknown prior: " + name);
}

Table reproduce_table1(par::Mode mode) {
  const auto fam = FamilyDescriptor::Bernoulli();
  struct Row {
    double n, theta0, theta_hat;
  };
  const std::vector<Row> spec = {{10, 0.5, 0.50},  {10, 0.5, 0.65},
                                 {10, 0.5, 0.80},  {100, 0.5, 0.50},
                                 {100, 0.5, 0.55}, {100, 0.5, 0.60},
                                 {925, 0.75, 682.0 / 925.0}};
  const std::vector<std::string> prior_names = {"sum-db", "min-db",
                                                "arithmetic", "fractional"};
  // Priors depend only on theta0; build each once.
  std::vector<std::vector<PriorHandle>> priors;
  for (double t0 : {0.5, 0.75}) {
    std::vector<PriorHandle> row;
    for (const auto& p : prior_names) row.push_back(make_prior(fam, p, {t0}));
    priors.push_back(std::move(row));
  }

  std::vector<std::function<double()>> cells;
  for (const auto& r : spec)
    for (size_t j = 0; j < prior_names.size(); ++j) {
      const auto& prior = priors[r.theta0 == 0.5 ? 0 : 1][j];
      cells.push_back([fam, r, prior]() {
        auto stats = SuffStats::MakeBernoulli(r.n, r.theta_hat * r.n);
        const double t0 = r.theta0;
        return bayes_factor(fam, prior, std::span<const double>(&t0, 1), stats)
            .bf12;
      });
    }
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"n", "theta0", "theta_hat", "B12_S", "B12_M", "B12_A", "B12_F"};
  size_t k = 0;
  for (const auto& r : spec) {
    std::vector<double> row = {r.n, r.theta0, r.theta_hat};
    for (size_t j = 0; j < 4; ++j) row.push_back(vals[k++]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table reproduce_table2(par::Mode mode) {
  const auto fam = FamilyDescriptor::ExponentialScale();
  const double mu0 = 5.0;
  const std::vector<double> ns = {10, 100};
  const std::vector<double> mu_hats = {5.0, 7.5, 2.5};
  const std::vector<std::string> prior_names = {"sum-db", "min-db",
                                                "arithmetic", "fractional"};
  std::vector<PriorHandle> priors;
  for (const auto& p : prior_names) priors.push_back(make_prior(fam, p, {mu0}));

  std::vector<std::function<double()>> cells;
  for (double n : ns)
    for (double mh : mu_hats)
      for (const auto& prior : priors)
        cells.push_back([fam, mu0, n, mh, prior]() {
          auto stats = SuffStats::MakeExponential(n, mh);
          return bayes_factor(fam, prior,
                              std::span<const double>(&mu0, 1), stats)
              .bf12;
        });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"n", "mu_hat", "B12_S", "B12_M", "B12_A", "B12_F"};
  size_t k = 0;
  for (double n : ns)
    for (double mh : mu_hats) {
      std::vector<double> row = {n, mh};
      for (int j = 0; j < 4; ++j) row.push_back(vals[k++]);
      t.rows.push_back(std::move(row));
    }
  return t;
}

Table reproduce_table3(bool alt_convention, par::Mode mode) {
  const auto fam = FamilyDescriptor::NormalLocScale();
  const std::vector<double> theta0 = {0.0, 1.0};
  const double n = 10;
  const std::vector<double> ybars = {0.0, 1.0, 2.0};
  const std::vector<double> svals = {0.5, 1.0, 2.0};
  const std::vector<std::string> prior_names = {"sum-db", "arithmetic",
                                                "fractional"};
  std::vector<PriorHandle> priors;
  for (const auto& p : prior_names) priors.push_back(make_prior(fam, p, theta0));

  // The stored convention is S^2 = SS/n; emulate the n-1 convention by
  // rescaling the input S so the sum of squares matches.
  const double s_adj = alt_convention ? std::sqrt((n - 1.0) / n) : 1.0;

  std::vector<std::function<double()>> cells;
  for (double yb : ybars)
    for (double s : svals)
      for (const auto& prior : priors)
        cells.push_back([fam, theta0, n, yb, s, s_adj, prior]() {
          auto stats = SuffStats::MakeNormal(n, yb, s * s_adj);
          return bayes_factor(fam, prior, theta0, stats).bf12;
        });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"ybar", "S", "B12_S", "B12_A", "B12_F"};
  size_t k = 0;
  for (double yb : ybars)
    for (double s : svals) {
      std::vector<double> row = {yb, s};
      for (int j = 0; j < 3; ++j) row.push_back(vals[k++]);
      t.rows.push_back(std::move(row));
    }
  return t;
}

Table reproduce_table4() {
  const auto fam = FamilyDescriptor::NormalLocScale();
  const std::vector<double> theta0 = {74.001, 0.0099};
  const std::vector<double> data = {74.035, 74.010, 74.012, 74.015, 74.026};
  auto stats = SuffStats::FromRaw(fam, data);

  Table t;
  t.header = {"B12_S", "B12_A", "B12_F"};
  std::vector<double> row;
  for (const auto& p : {"sum-db", "arithmetic", "fractional"}) {
    auto prior = make_prior(fam, p, theta0);
    row.push_back(bayes_factor(fam, prior, theta0, stats).bf12);
  }
  t.rows.push_back(std::move(row));
  return t;
}

Table reproduce_table5(par::Mode mode) {
  const auto fam = FamilyDescriptor::ShiftedExponential(true);
  const std::vector<double> theta0 = {0.0};
  const std::vector<double> ns = {10, 20};
  const std::vector<double> ts = {0.02, 0.05, 0.10, 0.20, 0.50, 1.00};
  std::vector<PriorHandle> priors = {make_prior(fam, "min-db", theta0),
                                     make_prior(fam, "arithmetic", theta0)};

  std::vector<std::function<double()>> cells;
  for (double n : ns)
    for (double tv : ts)
      for (const auto& prior : priors)
        cells.push_back([fam, theta0, n, tv, prior]() {
          auto stats = SuffStats::MakeShiftedExponential(n, tv);
          return bayes_factor(fam, prior, theta0, stats).bf12;
        });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"n", "T", "B12_M", "B12_A"};
  size_t k = 0;
  for (double n : ns)
    for (double tv : ts) {
      t.rows.push_back({n, tv, vals[k], vals[k + 1]});
      k += 2;
    }
  return t;
}

Table reproduce_table6(par::Mode mode) {
  const auto fam = FamilyDescriptor::GammaMean();
  const std::vector<double> theta0 = {10.0};
  const double n = 10;
  const std::vector<double> means = {10, 11, 12};
  const std::vector<double> sds = {0.5, 1.0, 2.0};
  std::vector<PriorHandle> priors = {make_prior(fam, "sum-db", theta0),
                                     make_prior(fam, "min-db", theta0)};

  std::vector<std::function<double()>> cells;
  for (double sd : sds)
    for (double m : means)
      for (const auto& prior : priors)
        cells.push_back([fam, theta0, n, m, sd, prior]() {
          auto stats = gamma_mle_to_suffstats(m, sd, n);
          return bayes_factor(fam, prior, theta0, stats).bf12;
        });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"mle_mean", "mle_sd", "ybar", "logmean", "B12_S", "B12_M"};
  size_t k = 0;
  for (double sd : sds)
    for (double m : means) {
      auto stats = gamma_mle_to_suffstats(m, sd, n);
      t.rows.push_back({m, sd, stats.ybar, stats.logmean, vals[k], vals[k + 1]});
      k += 2;
    }
  return t;
}

Table reproduce_fig_b0_exp(int n_max, par::Mode mode) {
  const auto fam = FamilyDescriptor::ExponentialScale();
  const std::vector<double> theta0 = {5.0};
  const std::vector<std::string> prior_names = {"sum-db", "min-db",
                                                "arithmetic", "fractional"};
  std::vector<PriorHandle> priors;
  for (const auto& p : prior_names) priors.push_back(make_prior(fam, p, theta0));

  std::vector<std::function<double()>> cells;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& prior : priors)
      cells.push_back([fam, theta0, n, prior]() {
        return evidence_limit(fam, prior, theta0, n,
                              LimitKind::B0_null_boundary);
      });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"n", "B0_S", "B0_M", "B0_A", "B0_F"};
  size_t k = 0;
  for (int n = 1; n <= n_max; ++n) {
    t.rows.push_back({double(n), vals[k], vals[k + 1], vals[k + 2], vals[k + 3]});
    k += 4;
  }
  return t;
}

Table reproduce_fig_b1_normal(int n_max, par::Mode mode) {
  const auto fam = FamilyDescriptor::NormalLocScale();
  const std::vector<double> theta0 = {0.0, 1.0};
  std::vector<PriorHandle> priors = {make_prior(fam, "sum-db", theta0),
                                     make_prior(fam, "arithmetic", theta0),
                                     make_prior(fam, "fractional", theta0)};
  std::vector<std::function<double()>> cells;
  for (int n = 2; n <= n_max; ++n)
    for (const auto& prior : priors)
      cells.push_back([fam, theta0, n, prior]() {
        return evidence_limit(fam, prior, theta0, n, LimitKind::B1_null_point);
      });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"n", "B1_S", "B1_A", "B1_F"};
  size_t k = 0;
  for (int n = 2; n <= n_max; ++n) {
    t.rows.push_back({double(n), vals[k], vals[k + 1], vals[k + 2]});
    k += 3;
  }
  return t;
}

Table reproduce_fig_b0_irregular(int n_max, par::Mode mode) {
  const auto fam = FamilyDescriptor::ShiftedExponential(false);
  const std::vector<double> theta0 = {0.0};
  auto prior = make_prior(fam, "min-db", theta0);
  std::vector<std::function<double()>> cells;
  for (int n = 1; n <= n_max; ++n)
    cells.push_back([fam, theta0, n, prior]() {
      return evidence_limit(fam, prior, theta0, n, LimitKind::B0_null_boundary);
    });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"n", "B0_M"};
  for (int n = 1; n <= n_max; ++n) t.rows.push_back({double(n), vals[n - 1]});
  return t;
}

Table reproduce_fig_b0_mixture(int n_max, par::Mode mode) {
  const auto fam = FamilyDescriptor::NormalMixture(0.5);
  const std::vector<double> theta0 = {0.0};
  std::vector<PriorHandle> priors = {make_prior(fam, "sum-db", theta0),
                                     make_prior(fam, "bp-cauchy", theta0)};
  std::vector<std::function<double()>> cells;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& prior : priors)
      cells.push_back([fam, theta0, n, prior]() {
        return evidence_limit(fam, prior, theta0, n, LimitKind::B0_null_boundary);
      });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"n", "B0_SL", "B0_BP"};
  size_t k = 0;
  for (int n = 1; n <= n_max; ++n) {
    t.rows.push_back({double(n), vals[k], vals[k + 1]});
    k += 2;
  }
  return t;
}

Table reproduce_prior_figures() {
  Table t;
  t.header = {"figure", "theta", "density"};

  auto add_curve = [&t](const std::string& label, double lo, double hi,
                        int pts, const std::function<double(double)>& f) {
    for (int i = 0; i <= pts; ++i) {
      const double x = lo + (hi - lo) * i / pts;
      t.row_labels.push_back(label);
      t.rows.push_back({x, f(x)});
    }
  };

  // Bernoulli priors, theta0 = 1/2 and 3/4.
  for (double t0 : {0.5, 0.75}) {
    const auto fam = FamilyDescriptor::Bernoulli();
    std::ostringstream tag;
    tag << "bernoulli_theta0_" << t0;
    for (const auto& p : {"sum-db", "min-db", "arithmetic", "fractional"}) {
      auto prior = make_prior(fam, p, {t0});
      add_curve(tag.str() + "/" + p, 0.005, 0.995, 99,
                [prior](double x) { return prior.density({&x, 1}); });
    }
  }
  // Exponential priors, mu0 = 5.
  {
    const auto fam = FamilyDescriptor::ExponentialScale();
    for (const auto& p : {"sum-db", "min-db", "arithmetic", "fractional"}) {
      auto prior = make_prior(fam, p, {5.0});
      add_curve(std::string("exponential_mu0_5/") + p, 0.05, 30.0, 120,
                [prior](double x) { return prior.density({&x, 1}); });
    }
  }
  // Irregular two-sided and one-sided priors.
  {
    const auto fam2 = FamilyDescriptor::ShiftedExponential(false);
    auto prior2 = make_prior(fam2, "min-db", {0.0});
    add_curve("irregular_two_sided/min-db", -5.0, 5.0, 100,
              [prior2](double x) { return prior2.density({&x, 1}); });
    const auto fam1 = FamilyDescriptor::ShiftedExponential(true);
    auto prior1 = make_prior(fam1, "min-db", {0.0});
    auto priora = make_prior(fam1, "arithmetic", {0.0});
    add_curve("irregular_one_sided/min-db", 0.0, 6.0, 120,
              [prior1](double x) { return prior1.density({&x, 1}); });
    add_curve("irregular_one_sided/arithmetic", 0.01, 6.0, 120,
              [priora](double x) { return priora.density({&x, 1}); });
  }
  // Mixture priors for p in {0.25, 0.5, 0.75} plus the BP Cauchy.
  for (double p : {0.25, 0.5, 0.75}) {
    const auto fam = FamilyDescriptor::NormalMixture(p);
    std::ostringstream tag;
    tag << "mixture_p_" << p;
    auto sl = make_prior(fam, "sum-db", {0.0});
    auto ap = make_prior(fam, "cauchy-approx", {0.0});
    auto bp = make_prior(fam, "bp-cauchy", {0.0});
    add_curve(tag.str() + "/sum-db-laplace", -8.0, 8.0, 160,
              [sl](double x) { return sl.density({&x, 1}); });
    add_curve(tag.str() + "/cauchy-approx", -8.0, 8.0, 160,
              [ap](double x) { return ap.density({&x, 1}); });
    add_curve(tag.str() + "/bp-cauchy", -8.0, 8.0, 160,
              [bp](double x) { return bp.density({&x, 1}); });
  }
  // Mixture divergence: exact vs Laplace difference (the approximation
  // quality curve).
  for (double p : {0.5, 0.75}) {
    std::ostringstream tag;
    tag << "mixture_g_p_" << p;
    add_curve(tag.str() + "/exact", 0.0, 3.0, 60, [p](double mu) {
      return mixture_divergence(p, mu, MixtureMode::exact);
    });
    add_curve(tag.str() + "/laplace", 0.0, 3.0, 60, [p](double mu) {
      return mixture_divergence(p, mu, MixtureMode::laplace);
    });
  }
  // Normal location-scale: sigma marginal of the sum-DB prior and the
  // comparison marginals (mu0=0, sigma0=1).
  {
    const double kappa = [] {
      auto f = [](double s) {
        return s / std::sqrt((1.0 + s * s * s * s) * (1.0 + s * s));
      };
      return integrate(f, Interval::positive_axis(), 1e-12).value;
    }();
    add_curve("normal_sigma_marginal/sum-db", 0.02, 6.0, 120,
              [kappa](double s) {
                return s /
                       (kappa * std::sqrt((1.0 + s * s * s * s) *
                                          (1.0 + s * s)));
              });
    add_curve("normal_sigma_marginal/arithmetic", 0.02, 6.0, 120,
              [](double s) { return (2.0 / M_PI) / (1.0 + s * s); });
    add_curve("normal_sigma_marginal/fractional", 0.02, 6.0, 120,
              [](double s) {
                return 2.0 * normal_pdf(s, 0.0, 1.0 / std::sqrt(2.0));
              });
  }
  return t;
}

Table simulate_table7(std::uint64_t seed, par::Mode mode) {
  const auto fam = FamilyDescriptor::GammaMean();
  const std::vector<double> theta0 = {10.0};
  const int n = 10;
  const std::vector<double> means = {10, 11, 12};
  const std::vector<double> sds = {0.5, 1.0, 2.0};
  std::vector<PriorHandle> priors = {make_prior(fam, "sum-db", theta0),
                                     make_prior(fam, "min-db", theta0)};

  struct Cell {
    double mu, sd, mu_hat, sd_hat;
    SuffStats stats;
  };
  std::vector<Cell> layout;
  std::uint64_t ctr = seed;
  for (double sd : sds)
    for (double m : means) {
      const auto data = draw_gamma_sample(splitmix64(ctr), n, m, sd);
      auto stats = SuffStats::FromRaw(fam, data);
      const double a_hat =
          gamma_shape_mle(std::log(stats.ybar) - stats.logmean);
      layout.push_back(
          {m, sd, stats.ybar, stats.ybar / std::sqrt(a_hat), stats});
    }

  std::vector<std::function<double()>> cells;
  for (const auto& c : layout)
    for (const auto& prior : priors)
      cells.push_back([fam, theta0, c, prior]() {
        return bayes_factor(fam, prior, theta0, c.stats).bf12;
      });
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"mu", "sigma", "mu_hat", "sigma_hat", "B12_S", "B12_M"};
  size_t k = 0;
  for (const auto& c : layout) {
    t.rows.push_back({c.mu, c.sd, c.mu_hat, c.sd_hat, vals[k], vals[k + 1]});
    k += 2;
  }
  return t;
}

Table simulate_table8(std::uint64_t seed, par::Mode mode) {
  const std::vector<double> ps = {0.25, 0.5, 0.75};
  const std::vector<double> mus = {0.0, 0.5, 1.0};
  const int n = 20;

  struct Cell {
    double p, mu;
    SuffStats stats;
    FamilyDescriptor fam;
  };
  std::vector<Cell> layout;
  std::uint64_t ctr = seed;
  for (double p : ps)
    for (double mu : mus) {
      auto fam = FamilyDescriptor::NormalMixture(p);
      auto data = draw_mixture_sample(splitmix64(ctr), n, p, mu);
      layout.push_back({p, mu, SuffStats::MakeMixture(std::move(data)), fam});
    }

  std::vector<std::function<double()>> cells;
  for (const auto& c : layout) {
    const std::vector<double> theta0 = {0.0};
    auto sl = make_prior(c.fam, "sum-db", theta0);
    auto ap = make_prior(c.fam, "cauchy-approx", theta0);
    auto bp = make_prior(c.fam, "bp-cauchy", theta0);
    for (const auto& prior : {sl, ap, bp})
      cells.push_back([c, prior]() {
        const double t0 = 0.0;
        return bayes_factor(c.fam, prior, std::span<const double>(&t0, 1),
                            c.stats)
            .bf12;
      });
  }
  auto vals = eval_cells(cells, mode);

  Table t;
  t.header = {"p", "mu", "B12_SL", "B12_ap", "B12_BP"};
  size_t k = 0;
  for (const auto& c : layout) {
    t.rows.push_back({c.p, c.mu, vals[k], vals[k + 1], vals[k + 2]});
    k += 3;
  }
  return t;
}

Table prior_curve(const FamilyDescriptor& fam, const std::string& prior_name,
                  std::vector<double> theta0, double lo, double hi,
                  int points, double alpha) {
  if (fam.theta_dim() != 1)
    throw std::invalid_argument(
        "prior_curve: scalar-parameter families only (use reproduce "
        "prior_figures for the location-scale family)");
  auto prior = make_prior(fam, prior_name, theta0);
  const bool improper = prior.cmp && !prior.cmp->is_proper();

  Table t;
  t.header = {"theta", "density"};
  if (improper) t.header.push_back("total_mass");
  for (int i = 0; i <= points; ++i) {
    const double x = lo + (hi - lo) * i / points;
    double d;
    if (fam.has_nuisance()) {
      const double nu[1] = {alpha};
      d = prior.db ? prior.db->density(x, nu) : prior.density({&x, 1}, nu);
    } else {
      d = prior.density({&x, 1});
    }
    std::vector<double> row = {x, d};
    if (improper) row.push_back(prior.cmp->total_mass());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string format_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::string to_csv(const Table& t, bool fixed8) {
  std::ostringstream out;
  for (size_t i = 0; i < t.header.size(); ++i)
    out << (i ? "," : "") << t.header[i];
  out << "\n";
  char buf[64];
  for (size_t r = 0; r < t.rows.size(); ++r) {
    bool first = true;
    if (!t.row_labels.empty()) {
      out << t.row_labels[r];
      first = false;
    }
    for (double v : t.rows[r]) {
      if (!first) out << ",";
      if (fixed8)
        std::snprintf(buf, sizeof(buf), "%.8f", v);
      else
        std::snprintf(buf, sizeof(buf), "%.10g", v);
      out << buf;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace dbp
