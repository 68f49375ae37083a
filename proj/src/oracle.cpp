#include "rrmc/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rrmc/errors.h"
#include "rrmc/rng.h"

namespace rrmc {
namespace {

double intrinsic(const LatticeSpec& spec, double s) {
  return spec.is_put ? std::max(spec.strike - s, 0.0) : std::max(s - spec.strike, 0.0);
}

void check_uniform(const TimeGrid& grid) {
  const double dt = grid.step(1);
  for (std::size_t j = 2; j <= grid.num_dates(); ++j)
    if (std::fabs(grid.step(j) - dt) > 1e-12 * std::max(1.0, dt))
      throw ConfigError("lattice oracle requires equally spaced exercise dates");
}

// Deterministic dynamics: the best discounted exercise along the forward path.
double zero_vol_value(const LatticeSpec& spec) {
  double best = 0.0;
  for (std::size_t j = 1; j <= spec.grid.num_dates(); ++j) {
    const double t = spec.grid.time(j);
    const double s = spec.spot * std::exp((spec.rate - spec.dividend) * t);
    best = std::max(best, std::exp(-spec.rate * t) * intrinsic(spec, s));
  }
  return best;
}

double tree_value(const PathSet& paths, const RewardTable& reward, const std::vector<std::size_t>& members,
                  std::size_t date) {
  const std::size_t dates = paths.num_dates();
  const std::size_t dim = paths.dim();
  std::vector<std::size_t> order = members;
  auto less = [&](std::size_t a, std::size_t b) {
    const auto sa = paths.state(a, date), sb = paths.state(b, date);
    for (std::size_t l = 0; l < dim; ++l)
      if (sa[l] != sb[l]) return sa[l] < sb[l];
    return reward.at(a, date) < reward.at(b, date);
  };
  auto same = [&](std::size_t a, std::size_t b) { return !less(a, b) && !less(b, a); };
  std::stable_sort(order.begin(), order.end(), less);

  double total = 0.0;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() && same(order[start], order[stop])) ++stop;
    const double g = reward.at(order[start], date);
    double node = g;
    if (date < dates) {
      const std::vector<std::size_t> children(order.begin() + static_cast<std::ptrdiff_t>(start),
                                              order.begin() + static_cast<std::ptrdiff_t>(stop));
      node = std::max(g, tree_value(paths, reward, children, date + 1));
    }
    total += node * static_cast<double>(stop - start);
    start = stop;
  }
  return total / static_cast<double>(members.size());
}

}  // namespace

double black_scholes(double spot, double strike, double rate, double dividend, double vol, double maturity,
                     bool is_put) {
  const double fwd_disc = std::exp(-dividend * maturity);
  const double disc = std::exp(-rate * maturity);
  if (vol <= 0.0 || maturity <= 0.0) {
    const double fwd = spot * std::exp((rate - dividend) * maturity);
    return disc * (is_put ? std::max(strike - fwd, 0.0) : std::max(fwd - strike, 0.0));
  }
  const double sd = vol * std::sqrt(maturity);
  const double d1 = (std::log(spot / strike) + (rate - dividend + 0.5 * vol * vol) * maturity) / sd;
  const double d2 = d1 - sd;
  if (is_put) return strike * disc * normal_cdf(-d2) - spot * fwd_disc * normal_cdf(-d1);
  return spot * fwd_disc * normal_cdf(d1) - strike * disc * normal_cdf(d2);
}

double lattice_value(const LatticeSpec& spec, std::size_t steps_per_interval) {
  if (steps_per_interval == 0) throw ConfigError("lattice needs at least one step per exercise interval");
  if (!(spec.spot > 0.0) || !(spec.strike > 0.0)) throw ConfigError("lattice spot and strike must be positive");
  check_uniform(spec.grid);
  if (spec.vol == 0.0) return zero_vol_value(spec);
  if (spec.vol < 0.0) throw ConfigError("lattice volatility must be non-negative");

  const std::size_t dates = spec.grid.num_dates();
  const std::size_t total = dates * steps_per_interval;
  const double dt = spec.grid.maturity() / static_cast<double>(total);
  const double up = std::exp(spec.vol * std::sqrt(dt));
  const double down = 1.0 / up;
  const double p = (std::exp((spec.rate - spec.dividend) * dt) - down) / (up - down);
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "lattice risk-neutral probability " << p << " outside [0, 1]; increase steps";
    throw NumericalError(msg.str());
  }
  const double disc = std::exp(-spec.rate * dt);
  const double pu = disc * p, pd = disc * (1.0 - p);

  std::vector<double> value(total + 1);
  for (std::size_t i = 0; i <= total; ++i)
    value[i] = intrinsic(spec, spec.spot * std::pow(up, static_cast<double>(2 * static_cast<long>(i) - static_cast<long>(total))));
  for (std::size_t step = total; step-- > 0;) {
    const bool exercisable = step > 0 && step % steps_per_interval == 0;
    for (std::size_t i = 0; i <= step; ++i) {
      double v = pd * value[i] + pu * value[i + 1];
      if (exercisable) {
        const double s =
            spec.spot * std::pow(up, static_cast<double>(2 * static_cast<long>(i) - static_cast<long>(step)));
        v = std::max(v, intrinsic(spec, s));
      }
      value[i] = v;
    }
  }
  return value[0];
}

double lattice_price(const LatticeSpec& spec) {
  if (spec.vol == 0.0) return lattice_value(spec, 1);
  const std::size_t dates = spec.grid.num_dates();
  std::size_t m = std::max<std::size_t>(spec.initial_steps, 2);
  double prev_value = lattice_value(spec, m);
  double prev_extrap = 0.0;
  bool have_extrap = false;
  while (dates * m * 2 <= spec.max_total_steps) {
    m *= 2;
    const double v = lattice_value(spec, m);
    const double extrap = 2.0 * v - prev_value;
    if (have_extrap && std::fabs(extrap - prev_extrap) < spec.tolerance) return extrap;
    prev_extrap = extrap;
    have_extrap = true;
    prev_value = v;
  }
  std::ostringstream msg;
  msg.precision(10);
  msg << "lattice did not converge to " << spec.tolerance << " within " << spec.max_total_steps
      << " steps (last extrapolated iterates " << prev_extrap << ", value " << prev_value << ")";
  throw NumericalError(msg.str());
}

double exhaustive_value(const PathSet& paths, const RewardTable& reward, std::size_t cap) {
  if (reward.num_paths() != paths.num_paths() || reward.num_dates() != paths.num_dates())
    throw ConfigError("exhaustive value: reward table does not match the paths");
  if (paths.num_paths() * paths.num_dates() > cap) {
    std::ostringstream msg;
    msg << "exhaustive value: N * J = " << paths.num_paths() * paths.num_dates() << " exceeds cap " << cap;
    throw CapacityError(msg.str());
  }
  std::vector<std::size_t> all(paths.num_paths());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return tree_value(paths, reward, all, 1);
}

double pathwise_max_mean(const RewardTable& reward) {
  double total = 0.0;
  for (std::size_t i = 0; i < reward.num_paths(); ++i) {
    double best = reward.at(i, 1);
    for (std::size_t j = 2; j <= reward.num_dates(); ++j) best = std::max(best, reward.at(i, j));
    total += best;
  }
  return total / static_cast<double>(reward.num_paths());
}

}  // namespace rrmc
