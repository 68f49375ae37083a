#include "rrmc/model_io.h"

#include <fstream>

#include "rrmc/errors.h"

namespace rrmc {

using nlohmann::json;

json model_to_json(const ContinuationModel& model) {
  json coeffs = json::array();
  for (const auto& c : model.coeffs) {
    json gamma = json::array();
    for (Eigen::Index k = 0; k < c.gamma.size(); ++k) gamma.push_back(c.gamma(k));
    coeffs.push_back({{"date", c.date}, {"gamma", std::move(gamma)}});
  }
  json product = model.product_config.empty() ? json::object() : json::parse(model.product_config);
  return {
      {"format", "rrmc.continuation_model"},
      {"version", kModelFormatVersion},
      {"basis",
       {{"family", basis_family_name(model.basis.family())},
        {"label", basis_family_label(model.basis.family())},
        {"dim", model.basis.dim()},
        {"fixed_size", model.basis.fixed_size()},
        {"reinforcement",
         {{"count", model.basis.reinforcement().count},
          {"variant", reinforcement_variant_name(model.basis.reinforcement().variant)}}}}},
      {"method", induction_method_name(model.method)},
      {"product_kind", model.product_kind},
      {"product", std::move(product)},
      {"num_dates", model.num_dates},
      {"coefficients", std::move(coeffs)},
      {"training", {{"num_paths", model.training_paths}, {"seed", model.training_seed}}},
  };
}

ContinuationModel model_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "rrmc.continuation_model")
      throw ConfigError("not a continuation model document");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw ConfigError("unsupported continuation model version " + std::to_string(version));
    const json& b = doc.at("basis");
    ReinforcementSpec reinforcement{b.at("reinforcement").at("count").get<std::size_t>(),
                                    parse_reinforcement_variant(b.at("reinforcement").at("variant").get<std::string>())};
    ContinuationModel model{
        BasisSpec(parse_basis_family(b.at("family").get<std::string>()), b.at("dim").get<std::size_t>(), reinforcement)};
    const std::string method = doc.at("method").get<std::string>();
    if (method == "tvr")
      model.method = InductionMethod::tsitsiklis_van_roy;
    else if (method == "ls")
      model.method = InductionMethod::longstaff_schwartz;
    else
      throw ConfigError("unknown induction method '" + method + "'");
    model.product_kind = doc.at("product_kind").get<std::string>();
    model.product_config = doc.at("product").dump();
    model.num_dates = doc.at("num_dates").get<std::size_t>();
    for (const json& c : doc.at("coefficients")) {
      const auto& g = c.at("gamma");
      StepCoefficients step{c.at("date").get<std::size_t>(), Eigen::VectorXd(static_cast<Eigen::Index>(g.size()))};
      for (std::size_t k = 0; k < g.size(); ++k) step.gamma(static_cast<Eigen::Index>(k)) = g[k].get<double>();
      model.coeffs.push_back(std::move(step));
    }
    model.training_paths = doc.at("training").at("num_paths").get<std::size_t>();
    model.training_seed = doc.at("training").at("seed").get<std::uint64_t>();
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed continuation model: ") + e.what());
  }
}

void save_model(const ContinuationModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << model_to_json(model).dump(2) << '\n';
}

ContinuationModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

json bound_to_json(const BoundEstimate& e) {
  json doc = {{"kind", bound_kind_name(e.kind)},
              {"value", e.value},
              {"std_error", e.std_error},
              {"ci95", {e.ci_low, e.ci_high}},
              {"num_paths", e.num_paths},
              {"seed", e.seed}};
  if (e.kind == BoundKind::upper) doc["inner_paths"] = e.inner_paths;
  return doc;
}

BoundEstimate bound_from_json(const json& doc) {
  BoundEstimate e;
  e.kind = doc.at("kind").get<std::string>() == "upper" ? BoundKind::upper : BoundKind::lower;
  e.value = doc.at("value").get<double>();
  e.std_error = doc.at("std_error").get<double>();
  e.ci_low = doc.at("ci95").at(0).get<double>();
  e.ci_high = doc.at("ci95").at(1).get<double>();
  e.num_paths = doc.at("num_paths").get<std::size_t>();
  e.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("inner_paths")) e.inner_paths = doc.at("inner_paths").get<std::size_t>();
  return e;
}

}  // namespace rrmc
