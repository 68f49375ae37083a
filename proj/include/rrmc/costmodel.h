#pragma once

#include <cstddef>
#include <utility>

namespace rrmc {

/// Unit costs and problem sizes for the symbolic cost accounting.
/// c_f: one payoff or basis-function evaluation. c_star: one add + multiply.
/// K: fixed-basis size of the standard regression; K_r: fixed-basis size
/// used with reinforcement.
struct CostParams {
  double c_f = 1.0;
  double c_star = 1.0;
  double num_paths = 0;       // N
  double num_test_paths = 0;  // N_test
  double num_dates = 0;       // J
  double K = 0;
  double K_r = 0;
  double b = 1;

  /// Throws ConfigError on negative entries.
  void validate() const;
  /// True when K_r >= K, i.e. reinforcement saves nothing on basis size.
  bool no_basis_saving() const { return K_r >= K; }
};

/// 1/2 N J^2 c_f + N J K_r c_f + N J K_r^2 c_* + 1/2 N J^2 K_r c_*
double reinforced_training_cost(const CostParams& p);

/// N J K c_f + N J K^2 c_*
double standard_training_cost(const CostParams& p);

/// N_test J K_r c_f + 1/2 J^2 N_test c_f + 1/2 N_test K_r J^2 c_*
double evaluation_cost(const CostParams& p);

/// Standard fixed-basis lower-bound evaluation, N_test J K c_f.
double standard_evaluation_cost(const CostParams& p);

struct CostRatios {
  double training = 0.0;
  double evaluation = 0.0;
};

/// training   = (K_r + J/2)/K * (1 + K_r c_*/c_f) / (1 + K c_*/c_f)
/// evaluation = (K_r + J/2)/K + 1/2 (J K_r / K) c_*/c_f
/// Throws NumericalError when c_f == 0.
CostRatios cost_ratios(const CostParams& p);

/// (2d + J) / (d (d + 1)): linear reinforced basis (K_r ~ d) against the
/// quadratic standard basis (K ~ d(d+1)/2), ignoring c_*.
double max_call_cost_reduction(std::size_t dim, std::size_t num_dates);

}  // namespace rrmc
