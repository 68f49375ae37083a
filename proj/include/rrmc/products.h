#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rrmc/market_models.h"

namespace rrmc {

/// A state of the (possibly augmented) Markov chain at a given date: asset
/// prices plus the accrued path-dependent cash-flow (zero for Markov payoffs).
struct StateRef {
  std::size_t date = 0;
  std::span<const double> assets;
  double accrued = 0.0;
};

/// Date-indexed reward functions g_j with discounting folded in.
class Product {
 public:
  virtual ~Product() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t dim() const = 0;
  virtual const TimeGrid& grid() const = 0;

  /// g_date evaluated at `state`, which may belong to an earlier date.
  virtual double reward(std::size_t date, const StateRef& state) const = 0;

  /// Scalar regressor for the payoff / coupon basis families, evaluated at the
  /// state's own date.
  virtual double basis_scalar(const StateRef& state) const = 0;

  /// Accrued path-dependent component after moving to `date` with `assets`.
  virtual double accrue(std::size_t /*date*/, std::span<const double> /*assets*/, double previous) const {
    return previous;
  }

  virtual bool path_dependent() const { return false; }
};

struct MaxCallSpec {
  double strike = 100.0;
  double rate = 0.0;
  TimeGrid grid = TimeGrid::uniform(1.0, 1);
  std::size_t dim = 1;
};

/// e^{-r t_j} (max_l x_l - K)^+
class MaxCall final : public Product {
 public:
  explicit MaxCall(MaxCallSpec spec);

  std::string kind() const override { return "max-call"; }
  std::size_t dim() const override { return spec_.dim; }
  const TimeGrid& grid() const override { return spec_.grid; }
  double reward(std::size_t date, const StateRef& state) const override;
  double basis_scalar(const StateRef& state) const override { return reward(state.date, state); }

  const MaxCallSpec& spec() const { return spec_; }

 private:
  MaxCallSpec spec_;
  std::vector<double> discount_;  // e^{-r t_j}, j = 0..J
};

/// Single-asset Bermudan put, e^{-r t_j} (K - x)^+. Used by the lattice oracle
/// comparisons.
struct PutSpec {
  double strike = 100.0;
  double rate = 0.0;
  TimeGrid grid = TimeGrid::uniform(1.0, 1);
};

class BermudanPut final : public Product {
 public:
  explicit BermudanPut(PutSpec spec);

  std::string kind() const override { return "put"; }
  std::size_t dim() const override { return 1; }
  const TimeGrid& grid() const override { return spec_.grid; }
  double reward(std::size_t date, const StateRef& state) const override;
  double basis_scalar(const StateRef& state) const override { return reward(state.date, state); }

  const PutSpec& spec() const { return spec_; }

 private:
  PutSpec spec_;
  std::vector<double> discount_;
};

struct SwapSpec {
  double quantile = 0.05;  // alpha
  std::size_t n1 = 5;
  std::size_t n2 = 10;
  double s1 = 0.09, s2 = 0.03, s3 = 0.0;
  double rate = 0.05;
  std::vector<double> spot0;
  TimeGrid grid = TimeGrid::uniform(1.0, 1);
  /// Multiplies every cash-flow; 1e4 reports values in basis points.
  double notional = 1.0;
};

/// Asset-based cancelable coupon swap. The reward at date j is the aggregated
/// discounted net coupon Z_j = sum_{i<=j} C(i), carried in StateRef::accrued.
class CancelableSwap final : public Product {
 public:
  explicit CancelableSwap(SwapSpec spec);

  std::string kind() const override { return "swap"; }
  std::size_t dim() const override { return spec_.spot0.size(); }
  const TimeGrid& grid() const override { return spec_.grid; }
  double reward(std::size_t /*date*/, const StateRef& state) const override { return state.accrued; }
  double basis_scalar(const StateRef& state) const override;
  double accrue(std::size_t date, std::span<const double> assets, double previous) const override;
  bool path_dependent() const override { return true; }

  /// N(i): number of assets with x_l <= (1 - alpha) x_l(0).
  std::size_t coupon_count(std::span<const double> assets) const;
  /// e^{-r t_i}(e^{r(t_i - t_{i-1})} - 1 - a(i)(t_i - t_{i-1})), times notional.
  double net_coupon(std::size_t count, std::size_t date) const;

  const SwapSpec& spec() const { return spec_; }

 private:
  SwapSpec spec_;
  std::vector<double> thresholds_;
};

/// g_j(Z_j^{(i)}) for i < N, j = 1..J.
class RewardTable {
 public:
  RewardTable(std::size_t num_paths, std::size_t num_dates)
      : num_paths_(num_paths), num_dates_(num_dates), values_(num_paths * num_dates, 0.0) {}

  std::size_t num_paths() const { return num_paths_; }
  std::size_t num_dates() const { return num_dates_; }
  double at(std::size_t path, std::size_t date) const { return values_[path * num_dates_ + date - 1]; }
  double& at(std::size_t path, std::size_t date) { return values_[path * num_dates_ + date - 1]; }

 private:
  std::size_t num_paths_;
  std::size_t num_dates_;
  std::vector<double> values_;
};

/// Paths paired with the product's accrued component, so every (path, date)
/// can be viewed as a StateRef.
class ProductPaths {
 public:
  ProductPaths(const Product& product, const PathSet& paths);

  const PathSet& paths() const { return *paths_; }
  StateRef state(std::size_t path, std::size_t date) const {
    return {date, paths_->state(path, date), accrued_.empty() ? 0.0 : accrued_[path * (dates_ + 1) + date]};
  }

 private:
  const PathSet* paths_;
  std::size_t dates_;
  std::vector<double> accrued_;
};

/// Throws ConfigError if the product's grid or dimension differ from the paths.
void check_compatible(const Product& product, const PathSet& paths);

RewardTable build_reward_table(const Product& product, const PathSet& paths);

}  // namespace rrmc
