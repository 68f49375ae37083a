#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rrmc {

/// N x (K+b) design matrix, one row per training path.
using DesignMatrix = Eigen::MatrixXd;
using ResponseVector = Eigen::VectorXd;

struct SolveOptions {
  /// Columns whose QR pivot falls below rank_tolerance * |leading pivot| are
  /// treated as dependent and receive a zero coefficient.
  double rank_tolerance = 1e-12;
  /// Throw on an all-zero column instead of dropping it.
  bool strict = false;
};

struct SolveDiagnostics {
  Eigen::Index rank = 0;
  double residual_norm = 0.0;
  /// |R_00| / |R_rr| over the retained pivots.
  double condition_estimate = 1.0;
  std::vector<Eigen::Index> dropped_columns;
};

struct StepCoefficients {
  std::size_t date = 0;
  Eigen::VectorXd gamma;  // fixed-basis coefficients first, reinforcing last
};

struct LeastSquaresResult {
  Eigen::VectorXd gamma;
  SolveDiagnostics diagnostics;
};

/// argmin_gamma |response - design * gamma|_2 by column-pivoted Householder QR.
LeastSquaresResult solve_least_squares(const DesignMatrix& design, const ResponseVector& response,
                                       const SolveOptions& options = {});

/// max_k |M_k^T r| / (|M_k| |y| + eps) with r = y - design * coeffs.
double orthogonality_check(const DesignMatrix& design, const ResponseVector& response,
                           const Eigen::VectorXd& coeffs);

}  // namespace rrmc
