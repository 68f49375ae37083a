// rrmc: batch runner for reinforced-regression optimal stopping experiments.
//
//   rrmc run   --config cfg.json [--paths N] [--test-paths N] [--inner n] [--outer n] [--out report.json]
//   rrmc table --config base.json --sweep cells.json --out results.csv
//   rrmc simulate --config cfg.json --domain test --out paths.bin
//   rrmc train --config cfg.json --out model.json
//   rrmc bound --config cfg.json --model model.json [--outer n] --out bounds.json
//   rrmc cost  --config cfg.json | --dim d --dates J --paths N ...
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#ifdef RRMC_HAVE_OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "rrmc/errors.h"
#include "rrmc/experiment.h"
#include "rrmc/model_io.h"
#include "rrmc/rng.h"

using nlohmann::json;
using namespace rrmc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths, test_paths, inner, outer;
  std::string out;
  bool paper_scale = false;
  int threads = 0;
  bool log_json = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Experiment config JSON (defaults: d=2 max-call)");
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--paths", c.paths, "Training paths N");
  cmd->add_option("--test-paths", c.test_paths, "Test paths N_test");
  cmd->add_option("--inner", c.inner, "Inner paths per dual step");
  cmd->add_option("--outer", c.outer, "Outer paths for the dual bound (0 skips it)");
  cmd->add_option("--out", c.out, "Output file");
  cmd->add_flag("--paper-scale", c.paper_scale, "N = N_test = 1e6");
  cmd->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--log-json", c.log_json, "Diagnostics as JSON lines on stderr");
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Top-level scalar overrides are applied to the document before validation.
json config_document(const Common& c) {
  json doc = c.config_path.empty() ? json::object() : load_json(c.config_path);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (c.paper_scale) doc["paths"] = doc["test_paths"] = kPaperScalePaths;
  if (c.seed) doc["seed"] = *c.seed;
  if (c.paths) doc["paths"] = *c.paths;
  if (c.test_paths) doc["test_paths"] = *c.test_paths;
  if (c.inner) doc["inner_paths"] = *c.inner;
  if (c.outer) doc["outer_paths"] = *c.outer;
  return doc;
}

void apply_threads(int threads) {
#ifdef RRMC_HAVE_OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

RunOptions logging(bool as_json) {
  RunOptions opts;
  opts.log = [as_json](const json& event) {
    if (as_json) {
      std::cerr << event.dump() << '\n';
      return;
    }
    const std::string stage = event.value("stage", "");
    if (event.contains("date")) {
      std::fprintf(stderr, "[%s] date %zu rank %zu residual %.6g cond %.3g dropped %zu\n", stage.c_str(),
                   event["date"].get<std::size_t>(), event["rank"].get<std::size_t>(),
                   event["residual_norm"].get<double>(), event["condition_estimate"].get<double>(),
                   event["dropped_columns"].size());
    } else if (event.contains("value")) {
      std::fprintf(stderr, "[%s] %.6f (%.2fs)\n", stage.c_str(), event["value"].get<double>(),
                   event["seconds"].get<double>());
    } else {
      std::fprintf(stderr, "[%s] %.2fs\n", stage.c_str(), event.value("seconds", 0.0));
    }
  };
  return opts;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
}

int cmd_run(const Common& c) {
  ExperimentConfig config = parse_config(config_document(c));
  if (!c.out.empty()) config.output.report = c.out;
  const ExperimentResult result = run_experiment(config, logging(c.log_json));
  if (c.out.empty()) std::cout << result.report.dump(2) << '\n';
  return 0;
}

int cmd_table(const Common& c, const std::string& sweep_path, const std::string& report_path) {
  const json base = config_document(c);
  const json sweep = load_json(sweep_path);
  if (!sweep.is_array()) throw ConfigError("sweep file must hold a JSON array of override objects");
  std::vector<json> cells;
  for (const json& cell : sweep) {
    if (!cell.is_object()) throw ConfigError("every sweep entry must be a JSON object");
    cells.push_back(cell);
  }
  const json table = run_table(base, cells, logging(c.log_json));
  write_text(c.out, table["csv"].get<std::string>());
  if (!report_path.empty()) write_text(report_path, table["cells"].dump(2) + "\n");
  std::size_t failed = 0;
  for (const json& cell : table["cells"])
    if (cell["status"] != "ok") {
      ++failed;
      std::cerr << "cell " << cell["cell"].dump() << " failed: " << cell["error"].get<std::string>() << '\n';
    }
  if (failed) std::cerr << failed << " of " << cells.size() << " cells failed\n";
  return 0;
}

int cmd_simulate(const Common& c, const std::string& domain) {
  const ExperimentConfig config = parse_config(config_document(c));
  if (c.out.empty()) throw ConfigError("simulate needs --out");
  SeedDomain d;
  std::size_t n;
  if (domain == "training") {
    d = SeedDomain::training;
    n = config.paths;
  } else if (domain == "test") {
    d = SeedDomain::test;
    n = config.test_paths;
  } else {
    throw ConfigError("--domain must be training or test");
  }
  const PathSet paths = simulate(make_market(config.product), make_grid(config.product), n, config.seed, d);
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + c.out + "' for writing");
  write_binary(paths, out);
  return 0;
}

int cmd_train(const Common& c) {
  ExperimentConfig config = parse_config(config_document(c));
  if (c.out.empty()) throw ConfigError("train needs --out");
  config.test_paths = 0;
  config.output = {};
  config.output.model = c.out;
  run_experiment(config, logging(c.log_json));
  return 0;
}

int cmd_bound(const Common& c, const std::string& model_path) {
  const ExperimentConfig config = parse_config(config_document(c));
  const ContinuationModel model = load_model(model_path);
  const auto product = make_product(config.product);
  if (model.product_kind != product->kind())
    throw ConfigError("model was trained for '" + model.product_kind + "', config describes '" + product->kind() + "'");
  const GBMParams market = make_market(config.product);
  json doc = json::object();
  if (config.test_paths > 0) {
    const PathSet test = simulate(market, product->grid(), config.test_paths, config.seed, SeedDomain::test);
    BoundEstimate e = lower_bound(model, test, *product);
    e.seed = config.seed;
    doc["lower"] = bound_to_json(e);
  }
  if (config.outer_paths > 0) {
    const PathSet outer =
        simulate(market, product->grid(), config.outer_paths, derive_key(config.seed, 0x6F75746572ull), SeedDomain::test);
    BoundEstimate e = dual_upper_bound(model, outer, *product, config.inner_paths, config.seed);
    e.seed = config.seed;
    doc["upper"] = bound_to_json(e);
  }
  write_text(c.out, doc.dump(2) + "\n");
  return 0;
}

struct CostArgs {
  std::optional<double> c_f, c_star, paths, test_paths, dates, K, K_r;
  std::optional<std::size_t> dim;
};

int cmd_cost(const Common& c, const CostArgs& a) {
  const bool direct = a.K || a.K_r;
  json doc;
  if (!direct) {
    ExperimentConfig config = parse_config(config_document(c));
    if (a.dim) config.product.dim = *a.dim;
    if (a.dates) config.product.num_dates = static_cast<std::size_t>(*a.dates);
    doc = cost_report(config);
  } else {
    CostParams p;
    p.c_f = a.c_f.value_or(1.0);
    p.c_star = a.c_star.value_or(1.0);
    p.num_paths = a.paths.value_or(static_cast<double>(c.paths.value_or(kDeskScalePaths)));
    p.num_test_paths = a.test_paths.value_or(static_cast<double>(c.test_paths.value_or(kDeskScalePaths)));
    p.num_dates = a.dates.value_or(9);
    if (!a.K || !a.K_r) throw ConfigError("give both --K and --K-r");
    p.K = *a.K;
    p.K_r = *a.K_r;
    p.validate();
    const CostRatios r = cost_ratios(p);
    doc = {{"reinforced_training", reinforced_training_cost(p)},
           {"standard_training", standard_training_cost(p)},
           {"reinforced_evaluation", evaluation_cost(p)},
           {"standard_evaluation", standard_evaluation_cost(p)},
           {"ratio_training", r.training},
           {"ratio_evaluation", r.evaluation},
           {"no_basis_saving", p.no_basis_saving()}};
    if (a.dim) doc["max_call_reduction"] = max_call_cost_reduction(*a.dim, static_cast<std::size_t>(p.num_dates));
  }
  write_text(c.out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reinforced regression Monte Carlo for optimal stopping"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RRMC_VERSION);

  Common common;
  std::string domain = "training", model_path, sweep_path, table_report;
  CostArgs cost;

  auto* run = app.add_subcommand("run", "Simulate, train and estimate bounds; write a report");
  add_common(run, common);

  auto* table = app.add_subcommand("table", "Run a sweep of config overrides into one CSV");
  add_common(table, common);
  table->add_option("--sweep", sweep_path, "JSON array of override objects")->required();
  table->add_option("--report", table_report, "Per-cell report JSON");

  auto* sim = app.add_subcommand("simulate", "Write a binary path dump");
  add_common(sim, common);
  sim->add_option("--domain", domain, "training or test");

  auto* tr = app.add_subcommand("train", "Fit continuation coefficients and save the model JSON");
  add_common(tr, common);

  auto* bd = app.add_subcommand("bound", "Lower and dual upper bounds for a saved model");
  add_common(bd, common);
  bd->add_option("--model", model_path, "Model JSON from `train`")->required();

  auto* cs = app.add_subcommand("cost", "Predicted costs and ratios");
  add_common(cs, common);
  cs->add_option("--c-f", cost.c_f, "Cost of one function evaluation");
  cs->add_option("--c-star", cost.c_star, "Cost of one multiply-add");
  cs->add_option("--N", cost.paths, "Training paths");
  cs->add_option("--N-test", cost.test_paths, "Test paths");
  cs->add_option("--dates", cost.dates, "Exercise dates J");
  cs->add_option("--K", cost.K, "Standard basis size");
  cs->add_option("--K-r", cost.K_r, "Reinforced fixed basis size");
  cs->add_option("--dim", cost.dim, "Dimension d");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    apply_threads(common.threads);
    if (*run) return cmd_run(common);
    if (*table) return cmd_table(common, sweep_path, table_report);
    if (*sim) return cmd_simulate(common, domain);
    if (*tr) return cmd_train(common);
    if (*bd) return cmd_bound(common, model_path);
    if (*cs) return cmd_cost(common, cost);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
