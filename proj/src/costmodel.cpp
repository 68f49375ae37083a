#include "rrmc/costmodel.h"

#include "rrmc/errors.h"

namespace rrmc {

void CostParams::validate() const {
  if (c_f < 0 || c_star < 0 || num_paths < 0 || num_test_paths < 0 || num_dates < 0 || K < 0 || K_r < 0 || b < 0)
    throw ConfigError("cost parameters must be non-negative");
}

double reinforced_training_cost(const CostParams& p) {
  p.validate();
  const double n = p.num_paths, j = p.num_dates, k = p.K_r;
  return 0.5 * n * j * j * p.c_f + n * j * k * p.c_f + n * j * k * k * p.c_star + 0.5 * n * j * j * k * p.c_star;
}

double standard_training_cost(const CostParams& p) {
  p.validate();
  const double n = p.num_paths, j = p.num_dates, k = p.K;
  return n * j * k * p.c_f + n * j * k * k * p.c_star;
}

double evaluation_cost(const CostParams& p) {
  p.validate();
  const double n = p.num_test_paths, j = p.num_dates, k = p.K_r;
  return n * j * k * p.c_f + 0.5 * j * j * n * p.c_f + 0.5 * n * k * j * j * p.c_star;
}

double standard_evaluation_cost(const CostParams& p) {
  p.validate();
  return p.num_test_paths * p.num_dates * p.K * p.c_f;
}

CostRatios cost_ratios(const CostParams& p) {
  p.validate();
  if (p.c_f == 0.0) throw NumericalError("cost ratios: c_f must be positive");
  if (p.K == 0.0) throw NumericalError("cost ratios: standard basis size K must be positive");
  const double lead = (p.K_r + p.num_dates / 2.0) / p.K;
  const double rho = p.c_star / p.c_f;
  CostRatios r;
  r.training = lead * (1.0 + p.K_r * rho) / (1.0 + p.K * rho);
  r.evaluation = lead + 0.5 * (p.num_dates * p.K_r / p.K) * rho;
  return r;
}

double max_call_cost_reduction(std::size_t dim, std::size_t num_dates) {
  const double d = static_cast<double>(dim);
  return (2.0 * d + static_cast<double>(num_dates)) / (d * (d + 1.0));
}

}  // namespace rrmc
