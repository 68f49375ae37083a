#include "rrmc/regression.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "rrmc/errors.h"

namespace rrmc {

LeastSquaresResult solve_least_squares(const DesignMatrix& design, const ResponseVector& response,
                                       const SolveOptions& options) {
  const Eigen::Index rows = design.rows(), cols = design.cols();
  if (response.size() != rows) throw ConfigError("least squares: response length does not match design rows");
  if (cols == 0) throw ConfigError("least squares: design has no columns");
  if (rows < cols) {
    std::ostringstream msg;
    msg << "least squares: underdetermined system (" << rows << " rows < " << cols << " columns)";
    throw NumericalError(msg.str());
  }
  if (!design.allFinite()) throw NumericalError("least squares: design matrix has non-finite entries");
  if (!response.allFinite()) throw NumericalError("least squares: response has non-finite entries");
  if (options.strict) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (design.col(k).cwiseAbs().maxCoeff() == 0.0)
        throw NumericalError("least squares: column " + std::to_string(k) + " is identically zero (collinear)");
    }
  }

  Eigen::ColPivHouseholderQR<DesignMatrix> qr(rows, cols);
  qr.setThreshold(options.rank_tolerance);
  qr.compute(design);

  LeastSquaresResult result;
  result.gamma = qr.solve(response);
  auto& diag = result.diagnostics;
  diag.rank = qr.rank();
  for (Eigen::Index k = diag.rank; k < cols; ++k) {
    const Eigen::Index column = qr.colsPermutation().indices()(k);
    diag.dropped_columns.push_back(column);
    result.gamma(column) = 0.0;
  }
  if (diag.rank > 0) {
    const double lead = std::fabs(qr.matrixQR()(0, 0));
    const double last = std::fabs(qr.matrixQR()(diag.rank - 1, diag.rank - 1));
    diag.condition_estimate = last > 0.0 ? lead / last : std::numeric_limits<double>::infinity();
  }
  diag.residual_norm = (response - design * result.gamma).norm();
  if (!result.gamma.allFinite()) throw NumericalError("least squares: solution is not finite");
  return result;
}

double orthogonality_check(const DesignMatrix& design, const ResponseVector& response,
                           const Eigen::VectorXd& coeffs) {
  const Eigen::VectorXd residual = response - design * coeffs;
  // Scaled by the response rather than the residual so that an exact fit
  // reads as zero instead of the angle between two noise vectors.
  const double scale = response.norm();
  constexpr double kGuard = 1e-300;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < design.cols(); ++k) {
    const double num = std::fabs(design.col(k).dot(residual));
    const double den = design.col(k).norm() * scale + kGuard;
    worst = std::max(worst, num / den);
  }
  return worst;
}

}  // namespace rrmc
