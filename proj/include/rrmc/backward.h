#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rrmc/basis.h"
#include "rrmc/products.h"
#include "rrmc/regression.h"

namespace rrmc {

enum class InductionMethod {
  tsitsiklis_van_roy,  // response max(g_j, C_{N,j}) at the next date
  longstaff_schwartz,  // response is the pathwise dummy cash-flow
};

std::string induction_method_name(InductionMethod method);

/// Coarse operation counters: c_f events (payoff/basis evaluations) and c_*
/// events (multiply-add pairs in regression and refresh loops).
struct CostCounters {
  std::uint64_t function_evals = 0;
  std::uint64_t mul_adds = 0;

  CostCounters& operator+=(const CostCounters& o) {
    function_evals += o.function_evals;
    mul_adds += o.mul_adds;
    return *this;
  }
};

/// Fitted continuation functions C_{N,j}, j = 1..J-1, with C_{N,J} = 0.
/// C_{N,j}(x) = sum_k gamma_k psi_k(x) + gamma_{K+1} nu(x), where
/// nu(x) = reinforce(g_{j+1}(x), C_{N,j+1}(x)) when the basis is reinforced.
struct ContinuationModel {
  explicit ContinuationModel(BasisSpec spec) : basis(spec) {}

  BasisSpec basis;
  InductionMethod method = InductionMethod::tsitsiklis_van_roy;
  std::string product_kind;
  /// Opaque JSON echo of the product parameters the model was trained against.
  std::string product_config;
  std::size_t num_dates = 0;
  /// coeffs[j - 1] holds date j, for j = 1..J-1.
  std::vector<StepCoefficients> coeffs;
  std::size_t training_paths = 0;
  std::uint64_t training_seed = 0;

  const Eigen::VectorXd& gamma(std::size_t date) const { return coeffs[date - 1].gamma; }

  /// Throws ConfigError if coefficients are missing or mis-sized.
  void validate() const;
};

/// Pre-computed features, rewards and the running continuation values used by
/// the reinforced backward induction.
class BackwardWorkspace {
 public:
  std::size_t num_paths() const { return num_paths_; }
  std::size_t num_dates() const { return num_dates_; }
  std::size_t fixed_size() const { return fixed_size_; }

  /// psi_k(Z_date^{(m)}) as a row-major N x K block.
  using FeatureBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const FeatureBlock& features(std::size_t date) const { return features_[date - 1]; }

  /// g_reward_date(Z_state_date^{(m)}) for state_date <= reward_date.
  const Eigen::VectorXd& reward(std::size_t reward_date, std::size_t state_date) const {
    return rewards_[tri_index(reward_date, state_date)];
  }

  /// C_{N,j}(Z_l^{(m)}) for l <= current_date(), column l - 1.
  const Eigen::MatrixXd& continuation() const { return cont_; }
  /// j such that continuation() holds C_{N,j}.
  std::size_t current_date() const { return current_date_; }
  /// C_{N,j}(Z_j^{(m)}) recorded when date j was fitted (column j - 1; zero at J).
  const Eigen::MatrixXd& on_path_continuation() const { return on_path_; }

  const CostCounters& counters() const { return counters_; }
  void count(const CostCounters& events) { counters_ += events; }

  /// Bytes needed for N paths, J dates and K features.
  static std::size_t memory_estimate(std::size_t num_paths, std::size_t num_dates, std::size_t fixed_size);

 private:
  friend BackwardWorkspace precompute(const PathSet&, const Product&, const BasisSpec&, std::size_t);
  friend void reset_continuation(BackwardWorkspace&);
  friend void refresh_continuation_values(BackwardWorkspace&, const BasisSpec&, const StepCoefficients&);
  friend void record_on_path(BackwardWorkspace&, std::size_t);

  std::size_t tri_index(std::size_t reward_date, std::size_t state_date) const {
    return (reward_date - 1) * reward_date / 2 + (state_date - 1);
  }

  std::size_t num_paths_ = 0;
  std::size_t num_dates_ = 0;
  std::size_t fixed_size_ = 0;
  std::vector<FeatureBlock> features_;
  std::vector<Eigen::VectorXd> rewards_;
  Eigen::MatrixXd cont_;
  Eigen::MatrixXd on_path_;
  std::size_t current_date_ = 0;
  CostCounters counters_;
};

inline constexpr std::size_t kDefaultMemoryCapBytes = std::size_t{3} << 30;

/// Evaluates and stores psi_k(Z_j^{(m)}) and g_i(Z_j^{(m)}) for 1 <= j <= i <= J.
/// Throws CapacityError when the estimate exceeds memory_cap_bytes.
BackwardWorkspace precompute(const PathSet& paths, const Product& product, const BasisSpec& basis,
                             std::size_t memory_cap_bytes = kDefaultMemoryCapBytes);

/// Sets C_{N,J} = 0 at every stored state.
void reset_continuation(BackwardWorkspace& workspace);

/// Replaces C_{N,j} by C_{N,j-1} (coeffs.date == j-1) at every date l <= j-1:
/// fixed part from the stored features plus gamma_{K+1} times the reinforcing
/// feature built from g_j and the previous C_{N,j}.
void refresh_continuation_values(BackwardWorkspace& workspace, const BasisSpec& basis,
                                 const StepCoefficients& coeffs);

struct BackwardOptions {
  SolveOptions solve;
  /// Called after each date is fitted and the workspace refreshed.
  std::function<void(std::size_t date, const BackwardWorkspace&, const SolveDiagnostics&)> observer;
};

ContinuationModel backward_induct_tvr(const PathSet& paths, const Product& product, const BasisSpec& basis,
                                      BackwardWorkspace& workspace, const BackwardOptions& options = {});

ContinuationModel backward_induct_ls(const PathSet& paths, const Product& product, const BasisSpec& basis,
                                     BackwardWorkspace& workspace, const BackwardOptions& options = {});

/// Dispatches on method; builds the workspace itself.
ContinuationModel train(const PathSet& paths, const Product& product, const BasisSpec& basis, InductionMethod method,
                        const BackwardOptions& options = {},
                        std::size_t memory_cap_bytes = kDefaultMemoryCapBytes, CostCounters* counters = nullptr);

}  // namespace rrmc
