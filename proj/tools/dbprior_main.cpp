#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "dbp/bayes.hpp"
#include "dbp/errors.hpp"
#include "dbp/tables.hpp"

using json = nlohmann::json;

namespace {

struct ScenarioFlags {
  std::string family;
  std::string prior = "sum-db";
  double theta0 = 0.0;
  double mu0 = 0.0;
  double sigma0 = 1.0;
  double n = 0.0;
  std::optional<double> successes, ybar, s, tmin, mle_mean, mle_sd, logmean;
  double p = 0.5;
  std::string data_path;
  std::uint64_t seed = 1;
  double rel_tol = 1e-8;
  std::string out;
};

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << text;
}

dbp::FamilyDescriptor family_from_name(const ScenarioFlags& sf) {
  if (sf.family == "bernoulli") return dbp::FamilyDescriptor::Bernoulli();
  if (sf.family == "exponential")
    return dbp::FamilyDescriptor::ExponentialScale();
  if (sf.family == "normal-locscale")
    return dbp::FamilyDescriptor::NormalLocScale();
  if (sf.family == "shifted-exponential")
    return dbp::FamilyDescriptor::ShiftedExponential(true);
  if (sf.family == "shifted-exponential-two-sided")
    return dbp::FamilyDescriptor::ShiftedExponential(false);
  if (sf.family == "mixture") return dbp::FamilyDescriptor::NormalMixture(sf.p);
  if (sf.family == "gamma") return dbp::FamilyDescriptor::GammaMean();
  throw std::invalid_argument("unknown family: " + sf.family);
}

std::vector<double> theta0_from_flags(const dbp::FamilyDescriptor& fam,
                                      const ScenarioFlags& sf) {
  if (fam.id == dbp::FamilyId::normal_locscale) return {sf.mu0, sf.sigma0};
  if (fam.id == dbp::FamilyId::gamma_mean ||
      fam.id == dbp::FamilyId::exponential_scale)
    return {sf.mu0 != 0.0 ? sf.mu0 : sf.theta0};
  return {sf.theta0};
}

dbp::SuffStats stats_from_flags(const dbp::FamilyDescriptor& fam,
                                const ScenarioFlags& sf) {
  using dbp::SuffStats;
  switch (fam.id) {
    case dbp::FamilyId::bernoulli:
      if (!sf.successes)
        throw std::invalid_argument("bernoulli requires --successes");
      return SuffStats::MakeBernoulli(sf.n, *sf.successes);
    case dbp::FamilyId::exponential_scale:
      if (!sf.ybar) throw std::invalid_argument("exponential requires --ybar");
      return SuffStats::MakeExponential(sf.n, *sf.ybar);
    case dbp::FamilyId::normal_locscale:
      if (!sf.ybar || !sf.s)
        throw std::invalid_argument("normal-locscale requires --ybar and --s");
      return SuffStats::MakeNormal(sf.n, *sf.ybar, *sf.s);
    case dbp::FamilyId::shifted_exponential:
      if (!sf.tmin)
        throw std::invalid_argument("shifted-exponential requires --tmin");
      return SuffStats::MakeShiftedExponential(sf.n, *sf.tmin);
    case dbp::FamilyId::gamma_mean:
      if (sf.mle_mean && sf.mle_sd)
        return dbp::gamma_mle_to_suffstats(*sf.mle_mean, *sf.mle_sd, sf.n);
      if (sf.ybar && sf.logmean)
        return SuffStats::MakeGamma(sf.n, *sf.ybar, *sf.logmean);
      throw std::invalid_argument(
          "gamma requires --mle-mean/--mle-sd or --ybar/--logmean");
    default:
      throw std::invalid_argument(
          "family has no statistic flags; provide a dataset file");
  }
}

// Dataset JSON schema (documented in the README):
//   {"family": "...", "theta0": ..., "p": ..., "mu0": ..., "sigma0": ...,
//    "stats": {"n": ..., family fields...} | "data": [raw sample]}
void load_dataset(const std::string& path, ScenarioFlags& sf,
                  std::optional<dbp::SuffStats>& stats,
                  std::optional<dbp::FamilyDescriptor>& fam) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open dataset: " + path);
  json j = json::parse(f);
  sf.family = j.at("family").get<std::string>();
  if (j.contains("theta0")) sf.theta0 = j["theta0"].get<double>();
  if (j.contains("mu0")) sf.mu0 = j["mu0"].get<double>();
  if (j.contains("sigma0")) sf.sigma0 = j["sigma0"].get<double>();
  if (j.contains("p")) sf.p = j["p"].get<double>();
  fam = family_from_name(sf);
  if (j.contains("data")) {
    auto data = j["data"].get<std::vector<double>>();
    stats = dbp::SuffStats::FromRaw(*fam, data);
    sf.n = stats->n;
    return;
  }
  const json& s = j.at("stats");
  sf.n = s.at("n").get<double>();
  auto maybe = [&s](const char* key) -> std::optional<double> {
    if (s.contains(key)) return s[key].get<double>();
    return std::nullopt;
  };
  sf.successes = maybe("successes");
  sf.ybar = maybe("ybar");
  sf.s = maybe("s");
  sf.tmin = maybe("tmin");
  sf.logmean = maybe("logmean");
  sf.mle_mean = maybe("mle_mean");
  sf.mle_sd = maybe("mle_sd");
  stats = stats_from_flags(*fam, sf);
}

int run_reproduce(const std::string& target, int n_max, std::uint64_t seed,
                  const std::string& out) {
  using namespace dbp;
  Table t;
  bool fixed8 = false;
  if (target == "table1") t = reproduce_table1();
  else if (target == "table2") t = reproduce_table2();
  else if (target == "table3") t = reproduce_table3();
  else if (target == "table4") t = reproduce_table4();
  else if (target == "table5") t = reproduce_table5();
  else if (target == "table6") t = reproduce_table6();
  else if (target == "fig_b0_exp") t = reproduce_fig_b0_exp(n_max > 0 ? n_max : 200);
  else if (target == "fig_b1_normal")
    t = reproduce_fig_b1_normal(n_max > 0 ? n_max : 50);
  else if (target == "fig_b0_irregular")
    t = reproduce_fig_b0_irregular(n_max > 0 ? n_max : 100);
  else if (target == "fig_b0_mixture")
    t = reproduce_fig_b0_mixture(n_max > 0 ? n_max : 50);
  else if (target == "prior_figures") {
    t = reproduce_prior_figures();
    fixed8 = true;
  } else if (target == "simulate-table7") t = simulate_table7(seed);
  else if (target == "simulate-table8") t = simulate_table8(seed);
  else {
    std::cerr << "unknown reproduce target: " << target << "\n"
              << "targets: table1..table6 fig_b0_exp fig_b1_normal "
                 "fig_b0_irregular fig_b0_mixture prior_figures "
                 "simulate-table7 simulate-table8\n";
    return 2;
  }
  write_output(to_csv(t, fixed8), out);
  return 0;
}

int run_bf(ScenarioFlags& sf) {
  using namespace dbp;
  std::optional<SuffStats> stats;
  std::optional<FamilyDescriptor> fam;
  if (!sf.data_path.empty()) {
    load_dataset(sf.data_path, sf, stats, fam);
  } else {
    fam = family_from_name(sf);
    stats = stats_from_flags(*fam, sf);
  }
  auto theta0 = theta0_from_flags(*fam, sf);
  auto prior = make_prior(*fam, sf.prior, theta0);
  auto res = bayes_factor(*fam, prior, theta0, *stats, sf.rel_tol);

  json out;
  out["bf12"] = res.bf12;
  out["method"] = bf_method_name(res.method);
  out["err"] = res.err;
  out["family"] = res.family;
  out["prior"] = res.prior;
  json jstats;
  jstats["n"] = stats->n;
  switch (fam->id) {
    case FamilyId::bernoulli: jstats["successes"] = stats->successes; break;
    case FamilyId::exponential_scale: jstats["ybar"] = stats->ybar; break;
    case FamilyId::normal_locscale:
      jstats["ybar"] = stats->ybar;
      jstats["s"] = stats->s;
      break;
    case FamilyId::shifted_exponential: jstats["tmin"] = stats->tmin; break;
    case FamilyId::gamma_mean:
      jstats["ybar"] = stats->ybar;
      jstats["logmean"] = stats->logmean;
      break;
    case FamilyId::normal_mixture: jstats["data"] = stats->sample; break;
    default: break;
  }
  out["stats"] = jstats;
  out["theta0"] = theta0;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_prior_curve(ScenarioFlags& sf, double lo, double hi, int points,
                    double alpha, bool have_lo, bool have_hi) {
  using namespace dbp;
  auto fam = family_from_name(sf);
  auto theta0 = theta0_from_flags(fam, sf);
  // Family-specific default grids.
  if (!have_lo || !have_hi) {
    switch (fam.id) {
      case FamilyId::bernoulli: lo = 0.005; hi = 0.995; break;
      case FamilyId::exponential_scale:
      case FamilyId::gamma_mean: lo = theta0[0] * 0.01; hi = theta0[0] * 6; break;
      case FamilyId::shifted_exponential:
        lo = fam.one_sided ? theta0[0] : theta0[0] - 5.0;
        hi = theta0[0] + 5.0;
        break;
      default: lo = -8.0; hi = 8.0; break;
    }
  }
  Table t = prior_curve(fam, sf.prior, theta0, lo, hi, points, alpha);
  write_output(to_csv(t, true), sf.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Divergence-based objective priors and Bayes factors for hypothesis "
      "testing"};
  app.require_subcommand(1);

  ScenarioFlags sf;
  std::string target;
  int n_max = 0;
  double lo = 0, hi = 0;
  int points = 100;
  double alpha = 1.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", sf.seed, "random seed");
    cmd->add_option("--rel-tol", sf.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--out", sf.out, "output file (default stdout)");
  };

  auto* rep = app.add_subcommand("reproduce",
                                 "emit a reference table or figure as CSV");
  rep->add_option("target", target, "table1..table6, fig_*, prior_figures, "
                                    "simulate-table7/8")
      ->required();
  rep->add_option("--n-max", n_max, "largest n for figure curves");
  add_common(rep);

  auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--family", sf.family,
                    "bernoulli|exponential|normal-locscale|"
                    "shifted-exponential[-two-sided]|mixture|gamma");
    cmd->add_option("--prior", sf.prior,
                    "sum-db|min-db|arithmetic|fractional|jeffreys-rule|"
                    "bp-cauchy|jzs");
    cmd->add_option("--theta0", sf.theta0, "null value");
    cmd->add_option("--mu0", sf.mu0, "null mean (normal/gamma/exponential)");
    cmd->add_option("--sigma0", sf.sigma0, "null sd (normal)");
    cmd->add_option("--n", sf.n, "sample size");
    cmd->add_option("--successes", [&sf](auto& v) { sf.successes = std::stod(v[0]); return true; }, "bernoulli T");
    cmd->add_option("--ybar", [&sf](auto& v) { sf.ybar = std::stod(v[0]); return true; }, "sample mean");
    cmd->add_option("--s", [&sf](auto& v) { sf.s = std::stod(v[0]); return true; }, "normal scale statistic");
    cmd->add_option("--tmin", [&sf](auto& v) { sf.tmin = std::stod(v[0]); return true; }, "sample minimum");
    cmd->add_option("--logmean", [&sf](auto& v) { sf.logmean = std::stod(v[0]); return true; }, "gamma mean of log data");
    cmd->add_option("--mle-mean", [&sf](auto& v) { sf.mle_mean = std::stod(v[0]); return true; }, "gamma MLE mean");
    cmd->add_option("--mle-sd", [&sf](auto& v) { sf.mle_sd = std::stod(v[0]); return true; }, "gamma MLE sd");
    cmd->add_option("--p", sf.p, "mixture null-component weight");
    cmd->add_option("--data", sf.data_path, "dataset JSON file");
    add_common(cmd);
  };

  auto* bf = app.add_subcommand("bf", "compute a Bayes factor (JSON output)");
  add_scenario(bf);

  auto* curve =
      app.add_subcommand("prior-curve", "emit a prior density curve as CSV");
  add_scenario(curve);
  auto* olo = curve->add_option("--grid-lo", lo, "grid lower bound");
  auto* ohi = curve->add_option("--grid-hi", hi, "grid upper bound");
  curve->add_option("--grid-points", points, "number of grid intervals");
  curve->add_option("--alpha", alpha, "gamma nuisance value for conditionals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (rep->parsed()) return run_reproduce(target, n_max, sf.seed, sf.out);
    if (bf->parsed()) return run_bf(sf);
    if (curve->parsed())
      return run_prior_curve(sf, lo, hi, points, alpha, olo->count() > 0,
                             ohi->count() > 0);
  } catch (const dbp::PriorNotDefinedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const dbp::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
