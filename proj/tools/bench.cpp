// Compares the serial reference path against the OpenMP path on the two
// parallel workloads: table-cell quadrature and Monte Carlo draws.
#include <chrono>
#include <cstdio>

#include "dbp/bayes.hpp"
#include "dbp/tables.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double timed(const char* name, const char* mode, F&& fn) {
  const auto t0 = Clock::now();
  fn();
  const double dt = seconds_since(t0);
  std::printf("%-28s %-8s %8.3f s\n", name, mode, dt);
  return dt;
}

}  // namespace

int main() {
  using namespace dbp;
  std::printf("%-28s %-8s %10s\n", "workload", "mode", "time");

  const double ts = timed("table2 (24 BF cells)", "serial", [] {
    reproduce_table2(par::Mode::serial);
  });
  const double tp = timed("table2 (24 BF cells)", "openmp", [] {
    reproduce_table2(par::Mode::openmp);
  });

  const double bs = timed("fig_b0_exp (n=120)", "serial", [] {
    reproduce_fig_b0_exp(120, par::Mode::serial);
  });
  const double bp = timed("fig_b0_exp (n=120)", "openmp", [] {
    reproduce_fig_b0_exp(120, par::Mode::openmp);
  });

  const auto fam = FamilyDescriptor::GammaMean();
  auto stats = gamma_mle_to_suffstats(10.0, 1.0, 100);
  const double mu0 = 10.0;
  const auto run_asym = [&](par::Mode) {
    // bf_asymptotic parallelizes internally via par::map.
    bf_asymptotic(fam, std::span<const double>(&mu0, 1), stats, 400000, 7);
  };
  const double as = timed("bf_asymptotic (4e5 draws)", "current", [&] {
    run_asym(par::default_mode());
  });

  std::printf("\nspeedup table2 %.2fx, fig_b0_exp %.2fx (asymptotic run: %.3f s)\n",
              ts / tp, bs / bp, as);
  return 0;
}
