#include "dbp/metropolis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dbp/errors.hpp"
#include "dbp/rng.hpp"

namespace dbp {

namespace {

double eval_target(
    const std::function<double(std::span<const double>)>& log_target,
    const std::vector<double>& x) {
  const double v = log_target(x);
  if (std::isnan(v)) {
    std::ostringstream msg;
    msg << "rw_metropolis: log_target returned NaN at (";
    for (size_t i = 0; i < x.size(); ++i)
      msg << (i ? ", " : "") << x[i];
    msg << ")";
    throw NumericError(msg.str());
  }
  return v;
}

}  // namespace

Chain rw_metropolis(
    const std::function<double(std::span<const double>)>& log_target,
    std::vector<double> init, const ChainConfig& cfg) {
  if (cfg.steps <= 0) throw std::invalid_argument("rw_metropolis: steps <= 0");
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.steps)
    throw std::invalid_argument("rw_metropolis: requires 0 <= burn_in < steps");
  if (!(cfg.proposal_scale > 0.0))
    throw std::invalid_argument("rw_metropolis: proposal_scale must be > 0");

  const size_t dim = init.size();
  Rng rng(cfg.seed);

  std::vector<double> x = std::move(init);
  double lx = eval_target(log_target, x);
  if (!std::isfinite(lx))
    throw std::invalid_argument(
        "rw_metropolis: log_target not finite at the initial point");

  double scale = cfg.proposal_scale;
  constexpr long kAdaptWindow = 100;
  long window_accepts = 0;

  Chain out;
  out.draws.reserve(static_cast<size_t>(cfg.steps - cfg.burn_in));
  long post_accepts = 0;

  std::vector<double> prop(dim);
  for (long step = 0; step < cfg.steps; ++step) {
    for (size_t i = 0; i < dim; ++i) prop[i] = x[i] + scale * rng.normal();
    const double lp = eval_target(log_target, prop);
    const double log_u = std::log(rng.uniform());
    const bool accept = lp - lx > log_u;
    if (accept) {
      x = prop;
      lx = lp;
      ++window_accepts;
      if (step >= cfg.burn_in) ++post_accepts;
    }

    if (step < cfg.burn_in && (step + 1) % kAdaptWindow == 0) {
      const double rate = double(window_accepts) / kAdaptWindow;
      if (rate < 0.20) scale *= 0.7;
      else if (rate > 0.50) scale *= 1.4;
      window_accepts = 0;
    }

    if (step >= cfg.burn_in) out.draws.push_back(x);
  }

  out.acceptance_rate =
      double(post_accepts) / double(cfg.steps - cfg.burn_in);
  out.tuned_scale = scale;
  return out;
}

}  // namespace dbp
