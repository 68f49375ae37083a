#include "rrmc/backward.h"

#include <algorithm>
#include <sstream>

#include "rrmc/errors.h"

namespace rrmc {
namespace {

void check_inputs(const PathSet& paths, const Product& product, const BasisSpec& basis) {
  check_compatible(product, paths);
  if (basis.dim() != paths.dim()) throw ConfigError("basis dimension does not match the path dimension");
}

void check_workspace(const BackwardWorkspace& ws, const PathSet& paths, const BasisSpec& basis) {
  if (ws.num_paths() != paths.num_paths() || ws.num_dates() != paths.num_dates() ||
      ws.fixed_size() != basis.fixed_size())
    throw ConfigError("backward workspace was built from different paths or basis");
}

ContinuationModel make_model(const PathSet& paths, const Product& product, const BasisSpec& basis,
                             InductionMethod method) {
  ContinuationModel model{basis};
  model.method = method;
  model.product_kind = product.kind();
  model.num_dates = paths.num_dates();
  model.training_paths = paths.num_paths();
  model.training_seed = paths.seed();
  return model;
}

// Shared induction; `ls` switches the response to the dummy cash-flows.
ContinuationModel induct(const PathSet& paths, const Product& product, const BasisSpec& basis,
                         BackwardWorkspace& ws, const BackwardOptions& options, InductionMethod method) {
  check_inputs(paths, product, basis);
  check_workspace(ws, paths, basis);
  const bool ls = method == InductionMethod::longstaff_schwartz;
  const std::size_t n = ws.num_paths();
  const std::size_t dates = ws.num_dates();
  const std::size_t k_fixed = basis.fixed_size();
  const std::size_t width = basis.width();
  const auto variant = basis.reinforcement().variant;
  const auto rows = static_cast<std::int64_t>(n);

  ContinuationModel model = make_model(paths, product, basis, method);
  model.coeffs.resize(dates > 0 ? dates - 1 : 0);

  reset_continuation(ws);
  ResponseVector dummy;
  if (ls) dummy = ws.reward(dates, dates);

  DesignMatrix design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(width));
  ResponseVector response(static_cast<Eigen::Index>(n));

  for (std::size_t j = dates; j >= 2; --j) {
    const std::size_t target = j - 1;
    const Eigen::MatrixXd& cont = ws.continuation();
    const Eigen::VectorXd& g_next = ws.reward(j, j);
    const Eigen::VectorXd& g_next_at_target = ws.reward(j, target);
    const auto& feats = ws.features(target);

#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < rows; ++m) {
      if (!ls) response(m) = std::max(g_next(m), cont(m, static_cast<Eigen::Index>(j - 1)));
      for (std::size_t k = 0; k < k_fixed; ++k)
        design(m, static_cast<Eigen::Index>(k)) = feats(m, static_cast<Eigen::Index>(k));
      if (basis.reinforced())
        design(m, static_cast<Eigen::Index>(k_fixed)) =
            eval_reinforcing(variant, g_next_at_target(m), cont(m, static_cast<Eigen::Index>(target - 1)));
    }
    if (ls) response = dummy;

    LeastSquaresResult fit;
    try {
      fit = solve_least_squares(design, response, options.solve);
    } catch (const NumericalError& e) {
      throw NumericalError("date " + std::to_string(target) + ": " + e.what());
    }
    StepCoefficients step{target, std::move(fit.gamma)};
    refresh_continuation_values(ws, basis, step);
    record_on_path(ws, target);

    if (ls) {
      const Eigen::VectorXd& g_here = ws.reward(target, target);
      const Eigen::MatrixXd& refreshed = ws.continuation();
      for (std::size_t m = 0; m < n; ++m) {
        const auto mi = static_cast<Eigen::Index>(m);
        if (g_here(mi) >= refreshed(mi, static_cast<Eigen::Index>(target - 1))) dummy(mi) = g_here(mi);
      }
    }

    ws.count(CostCounters{0, n * width * width});
    model.coeffs[target - 1] = std::move(step);
    if (options.observer) options.observer(target, ws, fit.diagnostics);
  }
  return model;
}

}  // namespace

std::string induction_method_name(InductionMethod method) {
  return method == InductionMethod::tsitsiklis_van_roy ? "tvr" : "ls";
}

void ContinuationModel::validate() const {
  if (num_dates == 0) throw ConfigError("continuation model has no dates");
  if (coeffs.size() + 1 != num_dates) {
    std::ostringstream msg;
    msg << "continuation model has " << coeffs.size() << " coefficient vectors, expected " << num_dates - 1;
    throw ConfigError(msg.str());
  }
  for (std::size_t j = 1; j < num_dates; ++j) {
    const auto& c = coeffs[j - 1];
    if (c.date != j) throw ConfigError("continuation model coefficients are out of order");
    if (static_cast<std::size_t>(c.gamma.size()) != basis.width())
      throw ConfigError("coefficient vector for date " + std::to_string(j) + " does not match the basis width");
    if (!c.gamma.allFinite()) throw NumericalError("coefficient vector for date " + std::to_string(j) + " is not finite");
  }
}

std::size_t BackwardWorkspace::memory_estimate(std::size_t num_paths, std::size_t num_dates,
                                               std::size_t fixed_size) {
  const std::size_t reward_entries = num_paths * num_dates * (num_dates + 1) / 2;  // the N J^2 / 2 term
  const std::size_t feature_entries = num_paths * num_dates * fixed_size;
  const std::size_t state_entries = 2 * num_paths * num_dates;
  const std::size_t design_entries = num_paths * (fixed_size + 2);
  return sizeof(double) * (reward_entries + feature_entries + state_entries + design_entries);
}

BackwardWorkspace precompute(const PathSet& paths, const Product& product, const BasisSpec& basis,
                             std::size_t memory_cap_bytes) {
  check_inputs(paths, product, basis);
  const std::size_t n = paths.num_paths();
  const std::size_t dates = paths.num_dates();
  const std::size_t k_fixed = basis.fixed_size();
  const std::size_t need = BackwardWorkspace::memory_estimate(n, dates, k_fixed);
  if (need > memory_cap_bytes) {
    std::ostringstream msg;
    msg << "precompute: workspace needs " << need << " bytes (rewards N*J(J+1)/2 = " << n * dates * (dates + 1) / 2
        << " entries, features N*J*K = " << n * dates * k_fixed << " entries), cap is " << memory_cap_bytes;
    throw CapacityError(msg.str());
  }

  BackwardWorkspace ws;
  ws.num_paths_ = n;
  ws.num_dates_ = dates;
  ws.fixed_size_ = k_fixed;
  ws.features_.assign(dates, BackwardWorkspace::FeatureBlock(static_cast<Eigen::Index>(n),
                                                              static_cast<Eigen::Index>(k_fixed)));
  ws.rewards_.assign(dates * (dates + 1) / 2, Eigen::VectorXd(static_cast<Eigen::Index>(n)));

  const ProductPaths states(product, paths);
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < rows; ++m) {
    for (std::size_t l = 1; l <= dates; ++l) {
      const StateRef s = states.state(static_cast<std::size_t>(m), l);
      auto row = ws.features_[l - 1].row(m);
      eval_fixed(basis, s.assets, product.basis_scalar(s), std::span<double>(row.data(), k_fixed));
      for (std::size_t i = l; i <= dates; ++i) ws.rewards_[ws.tri_index(i, l)](m) = product.reward(i, s);
    }
  }
  ws.counters_.function_evals += n * dates * k_fixed + n * dates * (dates + 1) / 2;
  reset_continuation(ws);
  return ws;
}

void reset_continuation(BackwardWorkspace& ws) {
  const auto n = static_cast<Eigen::Index>(ws.num_paths_);
  const auto dates = static_cast<Eigen::Index>(ws.num_dates_);
  ws.cont_ = Eigen::MatrixXd::Zero(n, dates);
  ws.on_path_ = Eigen::MatrixXd::Zero(n, dates);
  ws.current_date_ = ws.num_dates_;
}

void refresh_continuation_values(BackwardWorkspace& ws, const BasisSpec& basis, const StepCoefficients& coeffs) {
  const std::size_t target = coeffs.date;
  const std::size_t next = target + 1;
  if (target == 0 || next != ws.current_date_)
    throw ConfigError("refresh_continuation_values: workspace holds C at date " + std::to_string(ws.current_date_) +
                      ", cannot step to date " + std::to_string(target));
  const std::size_t k_fixed = ws.fixed_size_;
  if (static_cast<std::size_t>(coeffs.gamma.size()) != basis.width())
    throw ConfigError("refresh_continuation_values: coefficient length does not match basis width");
  const double* gamma = coeffs.gamma.data();
  const bool reinforced = basis.reinforced();
  const double gamma_r = reinforced ? gamma[k_fixed] : 0.0;
  const auto variant = basis.reinforcement().variant;
  const auto rows = static_cast<std::int64_t>(ws.num_paths_);

  for (std::size_t l = 1; l <= target; ++l) {
    const auto& feats = ws.features_[l - 1];
    const Eigen::VectorXd& g_next = ws.rewards_[ws.tri_index(next, l)];
    const auto col = static_cast<Eigen::Index>(l - 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < rows; ++m) {
      const double* f = feats.row(m).data();
      double c = 0.0;
      for (std::size_t k = 0; k < k_fixed; ++k) c += gamma[k] * f[k];
      if (reinforced) c += gamma_r * eval_reinforcing(variant, g_next(m), ws.cont_(m, col));
      ws.cont_(m, col) = c;
    }
  }
  ws.counters_.mul_adds += ws.num_paths_ * basis.width() * target;
  ws.current_date_ = target;
}

void record_on_path(BackwardWorkspace& ws, std::size_t date) {
  const auto col = static_cast<Eigen::Index>(date - 1);
  ws.on_path_.col(col) = ws.cont_.col(col);
}

ContinuationModel backward_induct_tvr(const PathSet& paths, const Product& product, const BasisSpec& basis,
                                      BackwardWorkspace& workspace, const BackwardOptions& options) {
  return induct(paths, product, basis, workspace, options, InductionMethod::tsitsiklis_van_roy);
}

ContinuationModel backward_induct_ls(const PathSet& paths, const Product& product, const BasisSpec& basis,
                                     BackwardWorkspace& workspace, const BackwardOptions& options) {
  return induct(paths, product, basis, workspace, options, InductionMethod::longstaff_schwartz);
}

ContinuationModel train(const PathSet& paths, const Product& product, const BasisSpec& basis, InductionMethod method,
                        const BackwardOptions& options, std::size_t memory_cap_bytes, CostCounters* counters) {
  BackwardWorkspace ws = precompute(paths, product, basis, memory_cap_bytes);
  ContinuationModel model = method == InductionMethod::tsitsiklis_van_roy
                                ? backward_induct_tvr(paths, product, basis, ws, options)
                                : backward_induct_ls(paths, product, basis, ws, options);
  if (counters) *counters += ws.counters();
  return model;
}

}  // namespace rrmc
