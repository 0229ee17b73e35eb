#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbp/bayes.hpp"
#include "dbp/parallel.hpp"

namespace dbp {

struct Table {
  std::vector<std::string> header;
  // When non-empty, one label per row, emitted as the first CSV column.
  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> rows;
};

// Reference-table reproductions. Cells are evaluated in parallel (results
// identical to serial evaluation; ordering fixed by construction).
Table reproduce_table1(par::Mode mode = par::default_mode());
Table reproduce_table2(par::Mode mode = par::default_mode());
// alt_convention rescales S as if S^2 divided by n-1 instead of n; used
// only by the convention-resolution regression test.
Table reproduce_table3(bool alt_convention = false,
                       par::Mode mode = par::default_mode());
Table reproduce_table4();
Table reproduce_table5(par::Mode mode = par::default_mode());
Table reproduce_table6(par::Mode mode = par::default_mode());

Table reproduce_fig_b0_exp(int n_max = 200,
                           par::Mode mode = par::default_mode());
Table reproduce_fig_b1_normal(int n_max = 50,
                              par::Mode mode = par::default_mode());
Table reproduce_fig_b0_irregular(int n_max = 100,
                                 par::Mode mode = par::default_mode());
Table reproduce_fig_b0_mixture(int n_max = 50,
                               par::Mode mode = par::default_mode());
Table reproduce_prior_figures();

// Qualitative analogues of the simulation tables, regenerated from seeded
// draws (the original simulated samples are not published).
Table simulate_table7(std::uint64_t seed, par::Mode mode = par::default_mode());
Table simulate_table8(std::uint64_t seed, par::Mode mode = par::default_mode());

// (theta, density) curve for a scalar-parameter prior; gamma curves are
// conditional on alpha. Improper priors gain a total_mass column and stay
// unnormalized.
Table prior_curve(const FamilyDescriptor& fam, const std::string& prior_name,
                  std::vector<double> theta0, double lo, double hi,
                  int points, double alpha = 1.0);

// Builds the prior named by the CLI enum {sum-db, min-db, arithmetic,
// fractional, jeffreys-rule, bp-cauchy, jzs}; jzs only for linear designs.
PriorHandle make_prior(const FamilyDescriptor& fam, const std::string& name,
                       std::vector<double> theta0);

// CSV with LF line endings; 10 significant digits, or fixed 8 decimals
// (prior curves).
std::string to_csv(const Table& t, bool fixed8 = false);
std::string format_sig(double x);

// Draw helpers shared by the simulation tables and acceptance tests.
std::vector<double> draw_gamma_sample(std::uint64_t seed, int n, double mean,
                                      double sd);
std::vector<double> draw_mixture_sample(std::uint64_t seed, int n, double p,
                                        double mu);

}  // namespace dbp
