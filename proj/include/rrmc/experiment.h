#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rrmc/backward.h"
#include "rrmc/bounds.h"
#include "rrmc/costmodel.h"
#include "rrmc/market_models.h"
#include "rrmc/products.h"

namespace rrmc {

inline constexpr std::size_t kDeskScalePaths = 100000;
inline constexpr std::size_t kPaperScalePaths = 1000000;

/// Product and market description. Defaults depend on `type`; see
/// default_product().
struct ProductConfig {
  std::string type = "max-call";  // max-call | swap | put
  std::size_t dim = 2;
  double strike = 100.0;
  double rate = 0.05;
  double dividend = 0.1;
  double vol = 0.2;
  double rho = 0.0;
  double spot = 100.0;
  double maturity = 3.0;
  std::size_t num_dates = 9;
  // swap only
  double alpha = 0.05;
  std::size_t n1 = 5, n2 = 10;
  double s1 = 0.09, s2 = 0.03, s3 = 0.0;
  double notional = 1e4;
};

ProductConfig default_product(const std::string& type);

struct OutputConfig {
  std::string report;  // JSON report path, empty to skip
  std::string csv;     // appended results table, empty to skip
  std::string model;   // fitted model, empty to skip
};

struct ExperimentConfig {
  ProductConfig product;
  std::string method = "reinforced-tvr";  // {standard,reinforced}-{tvr,ls}
  BasisFamily basis = BasisFamily::constant_linear;
  ReinforcementVariant variant = ReinforcementVariant::value;
  std::size_t paths = kDeskScalePaths;
  std::size_t test_paths = kDeskScalePaths;
  std::size_t inner_paths = 1000;
  std::size_t outer_paths = 0;  // 0 skips the dual bound
  std::uint64_t seed = 1;
  std::size_t memory_cap_mb = kDefaultMemoryCapBytes >> 20;
  bool strict = false;
  OutputConfig output;

  bool reinforced() const;
  InductionMethod induction() const;
  BasisSpec basis_spec() const;
};

/// Strict parse: unknown keys, wrong types and inconsistent settings throw
/// ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

GBMParams make_market(const ProductConfig& config);
TimeGrid make_grid(const ProductConfig& config);
std::unique_ptr<Product> make_product(const ProductConfig& config);

/// FNV-1a over the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& config);

struct RunOptions {
  /// Receives one line per diagnostic event (per-date regression summary,
  /// stage timings).
  std::function<void(const nlohmann::json&)> log;
};

struct ExperimentResult {
  ContinuationModel model;
  std::optional<BoundEstimate> lower;  // absent when test_paths == 0
  std::optional<BoundEstimate> upper;
  CostCounters counters;
  double train_seconds = 0.0;
  double lower_seconds = 0.0;
  double upper_seconds = 0.0;
  /// Config echo, bounds, cost predictions, timings, version and hash.
  nlohmann::json report;
};

/// simulate -> train -> lower bound -> optional dual bound. Errors are
/// rethrown with the failing stage (simulate, train, bound, report) prefixed,
/// keeping their type.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Predicted cost of the configured run against the standard run with the
/// comparison basis (quadratic for max-call, swap families' quadratic order
/// statistics for the swap).
nlohmann::json cost_report(const ExperimentConfig& config);

extern const std::vector<std::string> kCsvColumns;
std::string csv_header();
std::vector<std::string> csv_rows(const ExperimentConfig& config, const ExperimentResult& result, double wall_seconds);
/// Appends rows, writing the header first when the file is new or empty.
void append_csv(const std::string& path, const std::vector<std::string>& rows);

/// Runs each cell: base config with the cell object merge-patched over it.
/// Failed cells are reported with their error string and do not stop the
/// sweep. Returns {"cells": [...], "csv": "..."}.
nlohmann::json run_table(const nlohmann::json& base, const std::vector<nlohmann::json>& cells,
                         const RunOptions& options = {});

}  // namespace rrmc
