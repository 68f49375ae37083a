#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "json.hpp"
#include "rrmc/errors.h"
#include "rrmc/experiment.h"
#include "rrmc/model_io.h"
#include "rrmc/oracle.h"
#include "rrmc/regression.h"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Configs and reports cross the boundary as JSON text; the Python side
// converts to and from dicts.
std::string run_experiment_json(const std::string& config) {
  const rrmc::ExperimentConfig parsed = rrmc::parse_config(json::parse(config));
  const rrmc::ExperimentResult result = [&] {
    py::gil_scoped_release release;
    return rrmc::run_experiment(parsed);
  }();
  json out = result.report;
  out["model"] = rrmc::model_to_json(result.model);
  return out.dump();
}

std::string run_table_json(const std::string& base, const std::string& cells) {
  const json b = json::parse(base);
  const std::vector<json> c = json::parse(cells).get<std::vector<json>>();
  py::gil_scoped_release release;
  return rrmc::run_table(b, c).dump();
}

std::string normalize_config(const std::string& config) {
  return rrmc::config_to_json(rrmc::parse_config(json::parse(config))).dump();
}

std::string cost_report_json(const std::string& config) {
  return rrmc::cost_report(rrmc::parse_config(json::parse(config))).dump();
}

double continuation_value(const std::string& model_doc, const std::string& config, const std::vector<double>& state,
                          std::size_t date, double accrued) {
  const rrmc::ContinuationModel model = rrmc::model_from_json(json::parse(model_doc));
  const rrmc::ExperimentConfig c = rrmc::parse_config(json::parse(config));
  const auto product = rrmc::make_product(c.product);
  return rrmc::evaluate_continuation(model, *product, rrmc::StateRef{date, state, accrued}, date);
}

py::array_t<double> simulate_paths(const std::string& config, std::size_t num_paths, std::uint64_t seed,
                                   const std::string& domain) {
  const rrmc::ExperimentConfig c = rrmc::parse_config(json::parse(config));
  if (domain != "training" && domain != "test") throw rrmc::ConfigError("domain must be 'training' or 'test'");
  const rrmc::GBMParams market = rrmc::make_market(c.product);
  const rrmc::TimeGrid grid = rrmc::make_grid(c.product);
  rrmc::PathSet paths = [&] {
    py::gil_scoped_release release;
    return rrmc::simulate(market, grid, num_paths, seed,
                          domain == "test" ? rrmc::SeedDomain::test : rrmc::SeedDomain::training);
  }();
  const auto dates = static_cast<py::ssize_t>(paths.num_dates() + 1);
  const auto dim = static_cast<py::ssize_t>(paths.dim());
  py::array_t<double> out({static_cast<py::ssize_t>(num_paths), dates, dim});
  std::copy(paths.raw().begin(), paths.raw().end(), out.mutable_data());
  return out;
}

py::tuple least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& response, bool strict) {
  const rrmc::LeastSquaresResult r = rrmc::solve_least_squares(design, response, rrmc::SolveOptions{1e-12, strict});
  py::dict diag;
  diag["rank"] = r.diagnostics.rank;
  diag["residual_norm"] = r.diagnostics.residual_norm;
  diag["condition_estimate"] = r.diagnostics.condition_estimate;
  diag["dropped_columns"] = r.diagnostics.dropped_columns;
  return py::make_tuple(r.gamma, diag);
}

double lattice(double spot, double strike, double rate, double dividend, double vol, double maturity,
               std::size_t num_dates, bool is_put) {
  rrmc::LatticeSpec spec;
  spec.spot = spot;
  spec.strike = strike;
  spec.rate = rate;
  spec.dividend = dividend;
  spec.vol = vol;
  spec.is_put = is_put;
  spec.grid = rrmc::TimeGrid::uniform(maturity, num_dates);
  return rrmc::lattice_price(spec);
}

}  // namespace

PYBIND11_MODULE(_rrmc, m) {
  m.doc() = "Reinforced regression Monte Carlo for optimal stopping";
  m.attr("__version__") = RRMC_VERSION;

  py::register_exception<rrmc::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<rrmc::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  // json parse failures are configuration errors too.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("run_experiment", &run_experiment_json, py::arg("config"),
        "Run simulate, train and bounds for a JSON config; returns the JSON report with the fitted model");
  m.def("run_table", &run_table_json, py::arg("base"), py::arg("cells"), "Run a sweep; returns cells and CSV as JSON");
  m.def("normalize_config", &normalize_config, py::arg("config"), "Validate a config and echo it with defaults");
  m.def("cost_report", &cost_report_json, py::arg("config"), "Predicted costs and ratios for a config");
  m.def("continuation_value", &continuation_value, py::arg("model"), py::arg("config"), py::arg("state"),
        py::arg("date"), py::arg("accrued") = 0.0, "Fitted continuation value at a state and date");
  m.def("simulate", &simulate_paths, py::arg("config"), py::arg("num_paths"), py::arg("seed"),
        py::arg("domain") = "training", "Paths as an array of shape (N, J + 1, d); date 0 is the spot");
  m.def("solve_least_squares", &least_squares, py::arg("design"), py::arg("response"), py::arg("strict") = false,
        "Column-pivoted QR least squares; returns (gamma, diagnostics)");
  m.def("lattice_price", &lattice, py::arg("spot"), py::arg("strike"), py::arg("rate"), py::arg("dividend"),
        py::arg("vol"), py::arg("maturity"), py::arg("num_dates"), py::arg("is_put") = true,
        "Bermudan option value on a step-doubled binomial lattice");
  m.def("black_scholes", &rrmc::black_scholes, py::arg("spot"), py::arg("strike"), py::arg("rate"),
        py::arg("dividend"), py::arg("vol"), py::arg("maturity"), py::arg("is_put") = true);
  m.def("max_call_cost_reduction", &rrmc::max_call_cost_reduction, py::arg("dim"), py::arg("num_dates"));
}
