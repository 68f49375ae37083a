#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rrmc/backward.h"
#include "rrmc/products.h"

namespace rrmc {

enum class BoundKind { lower, upper };

std::string bound_kind_name(BoundKind kind);

struct BoundEstimate {
  BoundKind kind = BoundKind::lower;
  double value = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t num_paths = 0;
  std::size_t inner_paths = 0;  // upper bounds only
  std::uint64_t seed = 0;
};

inline constexpr double kCi95 = 1.96;

/// Mean, plain sample standard error and 95% interval of `samples`
/// (compensated summation in index order).
BoundEstimate summarize(BoundKind kind, std::span<const double> samples);

/// C_{N,date}(state) by the backward recursion over the stored coefficients:
/// C_{N,J} = 0 and, for l = J..date+1,
/// C_{N,l-1} = sum_k gamma^{l-1}_k psi_k(state) + gamma^{l-1}_{K+1} nu(g_l(state), C_{N,l}(state)).
double evaluate_continuation(const ContinuationModel& model, const Product& product, const StateRef& state,
                             std::size_t date);

/// tau = min{ j : g_j(Z_j) >= C_{N,j}(Z_j) }, forced at J.
class StoppingPolicy {
 public:
  StoppingPolicy(const ContinuationModel& model, const Product& product);

  double continuation(const StateRef& state, std::size_t date) const;
  /// (stop?, g_date(state)). Always stops at the final date.
  std::pair<bool, double> decide(const StateRef& state, std::size_t date) const;

  const ContinuationModel& model() const { return *model_; }
  const Product& product() const { return *product_; }

 private:
  const ContinuationModel* model_;
  const Product* product_;
};

/// First exercise date (1-based) on each path.
std::vector<std::size_t> pathwise_stop_times(const ContinuationModel& model, const PathSet& test_paths,
                                             const Product& product);

/// Low-biased estimate: mean of g_tau over the test paths.
BoundEstimate lower_bound(const ContinuationModel& model, const PathSet& test_paths, const Product& product);

/// Nested-simulation martingale dual driven by the trained policy. Along each
/// outer path, with Q_j the inner-sample mean of g_{tau(j+1)} started from Z_j,
/// L_j = g_j if the policy stops at j and Q_j otherwise (L_J = g_J),
/// M_0 = 0 and M_j = M_{j-1} + L_j - Q_{j-1}, with Q_0 simulated from the
/// initial state. The estimate is the mean of max_{j>=1} (g_j - M_j). For
/// J = 1 the martingale is zero and the estimate equals the mean of g_1. Inner paths of outer path i at date j use the
/// substream key derived from (seed, i, j).
BoundEstimate dual_upper_bound(const ContinuationModel& model, const PathSet& outer_paths, const Product& product,
                               std::size_t inner_count, std::uint64_t seed);

}  // namespace rrmc
