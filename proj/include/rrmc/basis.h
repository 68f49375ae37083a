#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace rrmc {

/// Fixed (non-reinforcing) regression families. Feature ordering is frozen:
///   constant-linear            1, x_1..x_d
///   constant-linear-quadratic  1, x_1..x_d, x_i x_j (i <= j, lexicographic)
///   constant-linear-payoff     1, x_1..x_d, g
///   swap-order-stats           1, c, x_(1)..x_(d)
///   swap-order-stats-quadratic 1, c, x_(1)..x_(d), x_(i) x_(j) (i <= j)
/// where g / c is the product's basis scalar (payoff or net coupon) and
/// x_(1) <= ... <= x_(d) are the order statistics.
enum class BasisFamily {
  constant_linear,
  constant_linear_quadratic,
  constant_linear_payoff,
  swap_order_stats,
  swap_order_stats_quadratic,
};

enum class ReinforcementVariant {
  value,               // max(g_j, C_{N,j})
  exercise_indicator,  // 1{g_j >= C_{N,j}}
};

struct ReinforcementSpec {
  std::size_t count = 0;  // b, 0 or 1
  ReinforcementVariant variant = ReinforcementVariant::value;
};

class BasisSpec {
 public:
  BasisSpec(BasisFamily family, std::size_t dim, ReinforcementSpec reinforcement = {});

  BasisFamily family() const { return family_; }
  std::size_t dim() const { return dim_; }
  const ReinforcementSpec& reinforcement() const { return reinforcement_; }
  bool reinforced() const { return reinforcement_.count > 0; }

  /// K, the number of fixed features.
  std::size_t fixed_size() const { return fixed_size_; }
  /// K + b.
  std::size_t width() const { return fixed_size_ + reinforcement_.count; }

 private:
  BasisFamily family_;
  std::size_t dim_;
  ReinforcementSpec reinforcement_;
  std::size_t fixed_size_;
};

std::size_t fixed_basis_size(BasisFamily family, std::size_t dim);

/// Writes the K fixed features of `state` into `out` (size >= K).
/// `scalar` is the product's basis scalar at that state; it is only read by
/// the payoff and swap families.
void eval_fixed(const BasisSpec& spec, std::span<const double> state, double scalar, std::span<double> out);

/// The reinforcing feature built from the next date's reward and fitted
/// continuation value at the same state.
inline double eval_reinforcing(ReinforcementVariant variant, double reward_next, double continuation_next) {
  if (variant == ReinforcementVariant::value)
    return reward_next >= continuation_next ? reward_next : continuation_next;
  return reward_next >= continuation_next ? 1.0 : 0.0;
}

/// Names accepted in configs. Both the canonical names above and the table
/// row labels are accepted: "1,X_i", "1,X_i,X_iX_j", "1,X_i,g(X)",
/// "1,C,X_(i)", "1,C,X_(i),X_(i)X_(j)" (whitespace ignored).
BasisFamily parse_basis_family(std::string_view name);
std::string basis_family_name(BasisFamily family);
/// Table row label, e.g. "1,X_i".
std::string basis_family_label(BasisFamily family);

ReinforcementVariant parse_reinforcement_variant(std::string_view name);
std::string reinforcement_variant_name(ReinforcementVariant variant);

}  // namespace rrmc
