#pragma once

#include <cstddef>
#include <vector>

#include "rrmc/market_models.h"
#include "rrmc/products.h"

namespace rrmc {

/// Single-asset Bermudan option on a Cox-Ross-Rubinstein tree, exercisable
/// only at the grid dates. The grid must be equally spaced.
struct LatticeSpec {
  double spot = 100.0;
  double rate = 0.0;
  double dividend = 0.0;
  double vol = 0.2;
  double strike = 100.0;
  bool is_put = true;
  TimeGrid grid = TimeGrid::uniform(1.0, 1);
  std::size_t initial_steps = 32;        // per exercise interval
  std::size_t max_total_steps = 1 << 15;  // cap on J * steps
  double tolerance = 1e-4;
};

/// Tree value with a fixed number of steps per exercise interval.
double lattice_value(const LatticeSpec& spec, std::size_t steps_per_interval);

/// Step-doubled, Richardson-extrapolated tree value, converged to
/// spec.tolerance. Throws NumericalError with the last two iterates when the
/// cap is reached first.
double lattice_price(const LatticeSpec& spec);

/// European value for comparison with a one-date tree.
double black_scholes(double spot, double strike, double rate, double dividend, double vol, double maturity,
                     bool is_put);

inline constexpr std::size_t kExhaustiveCap = 10000;

/// Optimal stopping value on the empirical measure of `paths`: an exact
/// dynamic program over the tree formed by shared path prefixes. When no two
/// paths share a date-1 state this is the anticipative envelope mean of
/// max_j g_j. Throws CapacityError when N * J exceeds `cap`.
double exhaustive_value(const PathSet& paths, const RewardTable& reward, std::size_t cap = kExhaustiveCap);

/// Mean over paths of max_j g_j.
double pathwise_max_mean(const RewardTable& reward);

}  // namespace rrmc
