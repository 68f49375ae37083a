#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rrmc/market_models.h"
#include "rrmc/products.h"

namespace rrmc::test {

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(RRMC_FIXTURE_DIR) + "/" + name);
  return nlohmann::json::parse(in);
}

// PathSet from explicit per-path date-1..J states of a 1-asset model.
inline PathSet single_asset_paths(const std::vector<std::vector<double>>& rows, double spot, double rate, double vol,
                                  const TimeGrid& grid) {
  GBMParams params = GBMParams::symmetric(1, rate, 0.0, vol, spot);
  std::vector<double> states;
  for (const auto& row : rows) {
    states.push_back(spot);
    states.insert(states.end(), row.begin(), row.end());
  }
  return PathSet(params, grid, rows.size(), 0, SeedDomain::training, std::move(states));
}

// A reward that is identically zero, for degenerate-case checks.
class ZeroReward final : public Product {
 public:
  ZeroReward(std::size_t dim, TimeGrid grid) : dim_(dim), grid_(std::move(grid)) {}
  std::string kind() const override { return "zero"; }
  std::size_t dim() const override { return dim_; }
  const TimeGrid& grid() const override { return grid_; }
  double reward(std::size_t, const StateRef&) const override { return 0.0; }
  double basis_scalar(const StateRef&) const override { return 0.0; }

 private:
  std::size_t dim_;
  TimeGrid grid_;
};

}  // namespace rrmc::test
