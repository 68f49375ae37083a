#include "rrmc/experiment.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "rrmc/errors.h"
#include "rrmc/model_io.h"
#include "rrmc/rng.h"

#ifndef RRMC_VERSION
#define RRMC_VERSION "unknown"
#endif

namespace rrmc {

using nlohmann::json;

namespace {

constexpr std::uint64_t kOuterDomainTag = 0x6F75746572ull;  // "outer"

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

void read(const json& obj, const char* key, double& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  out = v.get<double>();
  if (!std::isfinite(out)) throw ConfigError(where + "." + key + " must be finite");
}

void read(const json& obj, const char* key, std::size_t& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  // 1e5 parses as a float; accept integral floats.
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    out = v.get<std::size_t>();
  } else if (v.is_number_float() && v.get<double>() >= 0 && std::floor(v.get<double>()) == v.get<double>() &&
             v.get<double>() < 1.8e19) {
    out = static_cast<std::size_t>(v.get<double>());
  } else {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
}

void read(const json& obj, const char* key, std::string& out, const std::string& where) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  out = obj.at(key).get<std::string>();
}

void read(const json& obj, const char* key, bool& out, const std::string& where) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
  out = obj.at(key).get<bool>();
}

ProductConfig parse_product(const json& doc) {
  if (!doc.is_object()) throw ConfigError("product must be a JSON object");
  std::string type = "max-call";
  read(doc, "type", type, "product");
  ProductConfig p = default_product(type);
  std::set<std::string> keys = {"type", "dim", "rate", "dividend", "vol", "rho", "spot", "maturity", "num_dates"};
  if (type == "swap") {
    keys.insert({"alpha", "n1", "n2", "s1", "s2", "s3", "notional"});
  } else {
    keys.insert("strike");
  }
  reject_unknown(doc, keys, "product");
  read(doc, "dim", p.dim, "product");
  read(doc, "strike", p.strike, "product");
  read(doc, "rate", p.rate, "product");
  read(doc, "dividend", p.dividend, "product");
  read(doc, "vol", p.vol, "product");
  read(doc, "rho", p.rho, "product");
  read(doc, "spot", p.spot, "product");
  read(doc, "maturity", p.maturity, "product");
  read(doc, "num_dates", p.num_dates, "product");
  read(doc, "alpha", p.alpha, "product");
  read(doc, "n1", p.n1, "product");
  read(doc, "n2", p.n2, "product");
  read(doc, "s1", p.s1, "product");
  read(doc, "s2", p.s2, "product");
  read(doc, "s3", p.s3, "product");
  read(doc, "notional", p.notional, "product");

  if (p.dim == 0) throw ConfigError("product.dim must be positive");
  if (p.num_dates == 0) throw ConfigError("product.num_dates must be positive");
  if (!(p.maturity > 0)) throw ConfigError("product.maturity must be positive");
  if (type == "put" && p.dim != 1) throw ConfigError("product.dim must be 1 for the put");
  if (type == "swap") {
    if (!(p.alpha > 0 && p.alpha < 1)) throw ConfigError("product.alpha must lie in (0, 1)");
    if (p.n1 > p.n2) throw ConfigError("product.n1 must not exceed product.n2");
  }
  return p;
}

std::string method_family(const std::string& method) { return method.substr(method.find('-') + 1); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const CapacityError& e) {
    throw CapacityError(std::string("[") + stage + "] " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[") + stage + "] " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("[") + stage + "] " + e.what());
  }
}

std::string csv_number(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + '"';
}

// Best-effort identification of a cell whose config may not even parse.
std::string failed_row(const json& doc, const std::string& error, double wall_seconds) {
  auto field = [](const json& obj, const char* key) -> std::string {
    if (!obj.is_object() || !obj.contains(key)) return "";
    const json& v = obj.at(key);
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  const json product = doc.is_object() && doc.contains("product") ? doc.at("product") : json::object();
  std::ostringstream out;
  out << field(product, "type") << ',' << field(product, "dim") << ',' << field(product, "rho") << ','
      << csv_quote(field(doc, "basis")) << ',' << field(doc, "method") << ",failed,,,,," << field(doc, "paths") << ','
      << field(doc, "test_paths") << ",," << field(doc, "seed") << ',' << csv_number(wall_seconds) << ','
      << csv_quote(error);
  return out.str();
}

}  // namespace

ProductConfig default_product(const std::string& type) {
  ProductConfig p;
  p.type = type;
  if (type == "max-call") return p;
  if (type == "swap") {
    p.dim = 20;
    p.dividend = 0.0;
    p.maturity = 5.0;
    p.num_dates = 10;
    return p;
  }
  if (type == "put") {
    p.dim = 1;
    p.dividend = 0.0;
    p.maturity = 1.0;
    p.num_dates = 4;
    return p;
  }
  throw ConfigError("unknown product type '" + type + "' (expected max-call, swap or put)");
}

bool ExperimentConfig::reinforced() const { return method.rfind("reinforced-", 0) == 0; }

InductionMethod ExperimentConfig::induction() const {
  return method_family(method) == "ls" ? InductionMethod::longstaff_schwartz : InductionMethod::tsitsiklis_van_roy;
}

BasisSpec ExperimentConfig::basis_spec() const {
  return BasisSpec(basis, product.dim, ReinforcementSpec{reinforced() ? 1u : 0u, variant});
}

ExperimentConfig parse_config(const json& doc) {
  reject_unknown(doc,
                 {"product", "method", "basis", "variant", "paths", "test_paths", "inner_paths", "outer_paths", "seed",
                  "memory_cap_mb", "strict", "output"},
                 "config");
  ExperimentConfig c;
  if (doc.contains("product")) c.product = parse_product(doc.at("product"));
  read(doc, "method", c.method, "config");
  if (c.method != "standard-tvr" && c.method != "reinforced-tvr" && c.method != "standard-ls" &&
      c.method != "reinforced-ls")
    throw ConfigError("unknown method '" + c.method +
                      "' (expected standard-tvr, reinforced-tvr, standard-ls or reinforced-ls)");

  const bool swap = c.product.type == "swap";
  c.basis = swap ? BasisFamily::swap_order_stats : BasisFamily::constant_linear;
  if (doc.contains("basis")) {
    std::string name;
    read(doc, "basis", name, "config");
    c.basis = parse_basis_family(name);
  }
  const bool swap_basis = c.basis == BasisFamily::swap_order_stats || c.basis == BasisFamily::swap_order_stats_quadratic;
  if (swap != swap_basis)
    throw ConfigError("basis '" + basis_family_label(c.basis) + "' does not fit product '" + c.product.type + "'");
  if (c.basis == BasisFamily::constant_linear_payoff && c.reinforced())
    throw ConfigError("the payoff basis '1,X_i,g(X)' is only used with standard methods");
  if (doc.contains("variant")) {
    std::string name;
    read(doc, "variant", name, "config");
    c.variant = parse_reinforcement_variant(name);
  }

  read(doc, "paths", c.paths, "config");
  read(doc, "test_paths", c.test_paths, "config");
  read(doc, "inner_paths", c.inner_paths, "config");
  read(doc, "outer_paths", c.outer_paths, "config");
  read(doc, "seed", c.seed, "config");
  read(doc, "memory_cap_mb", c.memory_cap_mb, "config");
  read(doc, "strict", c.strict, "config");
  if (c.paths == 0) throw ConfigError("paths must be positive");
  if (c.outer_paths > 0 && c.inner_paths < 2) throw ConfigError("inner_paths must be at least 2");
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown(o, {"report", "csv", "model"}, "output");
    read(o, "report", c.output.report, "output");
    read(o, "csv", c.output.csv, "output");
    read(o, "model", c.output.model, "output");
  }
  c.basis_spec();  // size checks
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const ExperimentConfig& c) {
  const ProductConfig& p = c.product;
  json product = {{"type", p.type}, {"dim", p.dim},   {"rate", p.rate},         {"dividend", p.dividend},
                  {"vol", p.vol},   {"rho", p.rho},   {"spot", p.spot},         {"maturity", p.maturity},
                  {"num_dates", p.num_dates}};
  if (p.type == "swap") {
    product.update({{"alpha", p.alpha},
                    {"n1", p.n1},
                    {"n2", p.n2},
                    {"s1", p.s1},
                    {"s2", p.s2},
                    {"s3", p.s3},
                    {"notional", p.notional}});
  } else {
    product["strike"] = p.strike;
  }
  return {{"product", std::move(product)},
          {"method", c.method},
          {"basis", basis_family_name(c.basis)},
          {"variant", reinforcement_variant_name(c.variant)},
          {"paths", c.paths},
          {"test_paths", c.test_paths},
          {"inner_paths", c.inner_paths},
          {"outer_paths", c.outer_paths},
          {"seed", c.seed},
          {"memory_cap_mb", c.memory_cap_mb},
          {"strict", c.strict},
          {"output", {{"report", c.output.report}, {"csv", c.output.csv}, {"model", c.output.model}}}};
}

GBMParams make_market(const ProductConfig& p) {
  GBMParams params = GBMParams::symmetric(p.dim, p.rate, p.dividend, p.vol, p.spot, p.rho);
  params.validate();
  return params;
}

TimeGrid make_grid(const ProductConfig& p) { return TimeGrid::uniform(p.maturity, p.num_dates); }

std::unique_ptr<Product> make_product(const ProductConfig& p) {
  const TimeGrid grid = make_grid(p);
  if (p.type == "max-call") return std::make_unique<MaxCall>(MaxCallSpec{p.strike, p.rate, grid, p.dim});
  if (p.type == "put") return std::make_unique<BermudanPut>(PutSpec{p.strike, p.rate, grid});
  if (p.type == "swap") {
    SwapSpec spec;
    spec.quantile = p.alpha;
    spec.n1 = p.n1;
    spec.n2 = p.n2;
    spec.s1 = p.s1;
    spec.s2 = p.s2;
    spec.s3 = p.s3;
    spec.rate = p.rate;
    spec.spot0.assign(p.dim, p.spot);
    spec.grid = grid;
    spec.notional = p.notional;
    return std::make_unique<CancelableSwap>(std::move(spec));
  }
  throw ConfigError("unknown product type '" + p.type + "'");
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  json echo = config_to_json(config);
  echo.erase("output");
  const std::string text = echo.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

json cost_report(const ExperimentConfig& config) {
  const std::size_t d = config.product.dim;
  const BasisFamily reference = config.product.type == "swap" ? BasisFamily::swap_order_stats_quadratic
                                                              : BasisFamily::constant_linear_quadratic;
  CostParams p;
  p.num_paths = static_cast<double>(config.paths);
  p.num_test_paths = static_cast<double>(config.test_paths);
  p.num_dates = static_cast<double>(config.product.num_dates);
  p.K_r = static_cast<double>(fixed_basis_size(config.basis, d));
  p.K = static_cast<double>(fixed_basis_size(reference, d));
  const CostRatios ratios = cost_ratios(p);
  json doc = {{"c_f", p.c_f},
              {"c_star", p.c_star},
              {"K", p.K},
              {"K_r", p.K_r},
              {"reference_basis", basis_family_name(reference)},
              {"reinforced_training", reinforced_training_cost(p)},
              {"standard_training", standard_training_cost(p)},
              {"reinforced_evaluation", evaluation_cost(p)},
              {"standard_evaluation", standard_evaluation_cost(p)},
              {"ratio_training", ratios.training},
              {"ratio_evaluation", ratios.evaluation},
              {"no_basis_saving", p.no_basis_saving()}};
  if (config.product.type == "max-call")
    doc["max_call_reduction"] = max_call_cost_reduction(d, config.product.num_dates);
  return doc;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();
  auto log = [&](json event) {
    if (options.log) options.log(event);
  };

  const BasisSpec basis = staged("config", [&] { return config.basis_spec(); });
  const GBMParams market = staged("config", [&] { return make_market(config.product); });
  const std::unique_ptr<Product> product = staged("config", [&] { return make_product(config.product); });
  const TimeGrid grid = product->grid();

  ExperimentResult result{ContinuationModel{basis}, std::nullopt, std::nullopt, {}, 0, 0, 0, {}};

  auto t0 = std::chrono::steady_clock::now();
  {
    const PathSet training = staged("simulate", [&] {
      return simulate(market, grid, config.paths, config.seed, SeedDomain::training);
    });
    log({{"stage", "simulate"}, {"seconds", seconds_since(t0)}});

    BackwardOptions bopts;
    bopts.solve.strict = config.strict;
    bopts.observer = [&](std::size_t date, const BackwardWorkspace&, const SolveDiagnostics& diag) {
      log({{"stage", "train"},
           {"date", date},
           {"rank", diag.rank},
           {"residual_norm", diag.residual_norm},
           {"condition_estimate", diag.condition_estimate},
           {"dropped_columns", diag.dropped_columns}});
    };
    t0 = std::chrono::steady_clock::now();
    result.model = staged("train", [&] {
      return train(training, *product, basis, config.induction(), bopts, config.memory_cap_mb << 20,
                   &result.counters);
    });
    result.train_seconds = seconds_since(t0);
  }
  result.model.product_config = config_to_json(config)["product"].dump();
  result.model.training_seed = config.seed;
  log({{"stage", "train"}, {"seconds", result.train_seconds}});

  if (config.test_paths > 0) {
    t0 = std::chrono::steady_clock::now();
    const PathSet test = staged("simulate", [&] {
      return simulate(market, grid, config.test_paths, config.seed, SeedDomain::test);
    });
    result.lower = staged("bound", [&] {
      BoundEstimate e = lower_bound(result.model, test, *product);
      e.seed = config.seed;
      return e;
    });
    result.lower_seconds = seconds_since(t0);
    log({{"stage", "lower-bound"}, {"value", result.lower->value}, {"seconds", result.lower_seconds}});
  }

  if (config.test_paths > 0 && config.outer_paths > 0) {
    t0 = std::chrono::steady_clock::now();
    result.upper = staged("bound", [&] {
      const PathSet outer =
          simulate(market, grid, config.outer_paths, derive_key(config.seed, kOuterDomainTag), SeedDomain::test);
      BoundEstimate e = dual_upper_bound(result.model, outer, *product, config.inner_paths, config.seed);
      e.seed = config.seed;
      return e;
    });
    result.upper_seconds = seconds_since(t0);
    log({{"stage", "upper-bound"}, {"value", result.upper->value}, {"seconds", result.upper_seconds}});
  }

  json bounds = json::object();
  if (result.lower) bounds["lower"] = bound_to_json(*result.lower);
  if (result.upper) bounds["upper"] = bound_to_json(*result.upper);
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << config_hash(config);
  result.report = {{"version", RRMC_VERSION},
                   {"config", config_to_json(config)},
                   {"config_hash", hash.str()},
                   {"bounds", std::move(bounds)},
                   {"cost", cost_report(config)},
                   {"counters",
                    {{"function_evals", result.counters.function_evals}, {"mul_adds", result.counters.mul_adds}}},
                   {"timings",
                    {{"train_seconds", result.train_seconds},
                     {"lower_seconds", result.lower_seconds},
                     {"upper_seconds", result.upper_seconds},
                     {"wall_seconds", seconds_since(wall_start)}}}};

  staged("report", [&] {
    if (!config.output.model.empty()) save_model(result.model, config.output.model);
    if (!config.output.report.empty()) {
      std::ofstream out(config.output.report);
      if (!out) throw ConfigError("cannot open '" + config.output.report + "' for writing");
      out << result.report.dump(2) << '\n';
    }
    if (!config.output.csv.empty())
      append_csv(config.output.csv, csv_rows(config, result, seconds_since(wall_start)));
    return 0;
  });
  return result;
}

const std::vector<std::string> kCsvColumns = {"product", "d",         "rho",      "basis", "method",
                                              "kind",    "value",     "std_error", "ci_low", "ci_high",
                                              "N",       "N_test",    "inner",    "seed",  "wall_seconds", "error"};

std::string csv_header() {
  std::string line;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) line += (i ? "," : "") + kCsvColumns[i];
  return line;
}

std::vector<std::string> csv_rows(const ExperimentConfig& config, const ExperimentResult& result,
                                  double wall_seconds) {
  std::vector<std::string> rows;
  auto row = [&](const BoundEstimate& e) {
    std::ostringstream out;
    out << config.product.type << ',' << config.product.dim << ',' << csv_number(config.product.rho) << ','
        << '"' << basis_family_label(config.basis) << '"' << ',' << config.method << ',' << bound_kind_name(e.kind)
        << ',' << csv_number(e.value) << ',' << csv_number(e.std_error) << ',' << csv_number(e.ci_low) << ','
        << csv_number(e.ci_high) << ',' << config.paths << ',' << e.num_paths << ','
        << (e.kind == BoundKind::upper ? e.inner_paths : 0) << ',' << config.seed << ','
        << csv_number(wall_seconds) << ',';
    rows.push_back(out.str());
  };
  if (result.lower) row(*result.lower);
  if (result.upper) row(*result.upper);
  return rows;
}

void append_csv(const std::string& path, const std::vector<std::string>& rows) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot open '" + path + "' for appending");
  if (fresh) out << csv_header() << '\n';
  for (const auto& r : rows) out << r << '\n';
}

json run_table(const json& base, const std::vector<json>& cells, const RunOptions& options) {
  json report = json::array();
  std::string csv = csv_header() + "\n";
  for (const json& cell : cells) {
    json doc = base;
    doc.merge_patch(cell);
    json entry = {{"cell", cell}};
    const auto start = std::chrono::steady_clock::now();
    try {
      ExperimentConfig config = parse_config(doc);
      config.output = {};
      const ExperimentResult result = run_experiment(config, options);
      for (const auto& r : csv_rows(config, result, seconds_since(start))) csv += r + "\n";
      entry["report"] = result.report;
      entry["status"] = "ok";
    } catch (const std::exception& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      csv += failed_row(doc, e.what(), seconds_since(start)) + "\n";
    }
    report.push_back(std::move(entry));
  }
  return {{"cells", std::move(report)}, {"csv", csv}};
}

}  // namespace rrmc
