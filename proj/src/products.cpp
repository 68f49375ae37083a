#include "rrmc/products.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rrmc/errors.h"

namespace rrmc {
namespace {

std::vector<double> discount_factors(double rate, const TimeGrid& grid) {
  std::vector<double> out(grid.num_dates() + 1);
  for (std::size_t j = 0; j <= grid.num_dates(); ++j) out[j] = std::exp(-rate * grid.time(j));
  return out;
}

}  // namespace

MaxCall::MaxCall(MaxCallSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.strike > 0.0)) throw ConfigError("max-call strike must be positive");
  if (spec_.dim == 0) throw ConfigError("max-call needs at least one asset");
  discount_ = discount_factors(spec_.rate, spec_.grid);
}

double MaxCall::reward(std::size_t date, const StateRef& state) const {
  const double best = *std::max_element(state.assets.begin(), state.assets.end());
  return discount_[date] * std::max(best - spec_.strike, 0.0);
}

BermudanPut::BermudanPut(PutSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.strike > 0.0)) throw ConfigError("put strike must be positive");
  discount_ = discount_factors(spec_.rate, spec_.grid);
}

double BermudanPut::reward(std::size_t date, const StateRef& state) const {
  return discount_[date] * std::max(spec_.strike - state.assets[0], 0.0);
}

CancelableSwap::CancelableSwap(SwapSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.quantile > 0.0 && spec_.quantile < 1.0)) throw ConfigError("swap quantile alpha must lie in (0, 1)");
  const std::size_t d = spec_.spot0.size();
  if (d < 2) throw ConfigError("swap needs at least two assets");
  if (!(spec_.n1 >= 1 && spec_.n1 < spec_.n2 && spec_.n2 <= d))
    throw ConfigError("swap thresholds must satisfy 1 <= n1 < n2 <= d");
  thresholds_.resize(d);
  for (std::size_t l = 0; l < d; ++l) {
    if (!(spec_.spot0[l] > 0.0)) throw ConfigError("swap initial asset values must be positive");
    thresholds_[l] = (1.0 - spec_.quantile) * spec_.spot0[l];
  }
}

std::size_t CancelableSwap::coupon_count(std::span<const double> assets) const {
  if (assets.size() != thresholds_.size()) throw ConfigError("swap state dimension mismatch");
  std::size_t count = 0;
  for (std::size_t l = 0; l < assets.size(); ++l)
    if (assets[l] <= thresholds_[l]) ++count;
  return count;
}

double CancelableSwap::net_coupon(std::size_t count, std::size_t date) const {
  const double rate = count <= spec_.n1 ? spec_.s1 : (count <= spec_.n2 ? spec_.s2 : spec_.s3);
  const double dt = spec_.grid.step(date);
  const double coupon = rate * dt;
  return spec_.notional * std::exp(-spec_.rate * spec_.grid.time(date)) *
         (std::exp(spec_.rate * dt) - 1.0 - coupon);
}

double CancelableSwap::basis_scalar(const StateRef& state) const {
  if (state.date == 0) return 0.0;
  return net_coupon(coupon_count(state.assets), state.date);
}

double CancelableSwap::accrue(std::size_t date, std::span<const double> assets, double previous) const {
  return previous + net_coupon(coupon_count(assets), date);
}

ProductPaths::ProductPaths(const Product& product, const PathSet& paths)
    : paths_(&paths), dates_(paths.num_dates()) {
  check_compatible(product, paths);
  if (!product.path_dependent()) return;
  const std::size_t n = paths.num_paths();
  accrued_.assign(n * (dates_ + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= dates_; ++j) {
      acc = product.accrue(j, paths.state(i, j), acc);
      accrued_[i * (dates_ + 1) + j] = acc;
    }
  }
}

void check_compatible(const Product& product, const PathSet& paths) {
  if (!(product.grid() == paths.grid())) throw ConfigError("product grid does not match the path grid");
  if (product.dim() != paths.dim()) {
    std::ostringstream msg;
    msg << "product dimension " << product.dim() << " does not match path dimension " << paths.dim();
    throw ConfigError(msg.str());
  }
}

RewardTable build_reward_table(const Product& product, const PathSet& paths) {
  const ProductPaths states(product, paths);
  RewardTable table(paths.num_paths(), paths.num_dates());
  for (std::size_t i = 0; i < paths.num_paths(); ++i)
    for (std::size_t j = 1; j <= paths.num_dates(); ++j) table.at(i, j) = product.reward(j, states.state(i, j));
  return table;
}

}  // namespace rrmc
