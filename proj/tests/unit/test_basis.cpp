#include <algorithm>
#include <vector>

#include "doctest.h"
#include "rrmc/basis.h"
#include "rrmc/errors.h"

using namespace rrmc;

namespace {

std::vector<double> eval(BasisFamily family, const std::vector<double>& x, double scalar = 0.0) {
  const BasisSpec spec(family, x.size());
  std::vector<double> out(spec.fixed_size());
  eval_fixed(spec, x, scalar, out);
  return out;
}

}  // namespace

TEST_SUITE("basis") {
  TEST_CASE("fixed basis examples") {
    CHECK(eval(BasisFamily::constant_linear, {3, 5}) == std::vector<double>{1, 3, 5});
    CHECK(eval(BasisFamily::constant_linear_quadratic, {3, 5}) == std::vector<double>{1, 3, 5, 9, 15, 25});
    CHECK(eval(BasisFamily::constant_linear_payoff, {3, 5}, 4.5) == std::vector<double>{1, 3, 5, 4.5});
    CHECK(eval(BasisFamily::swap_order_stats, {7, 2, 5}, -0.25) == std::vector<double>{1, -0.25, 2, 5, 7});
    CHECK(eval(BasisFamily::swap_order_stats_quadratic, {7, 2}, 1.5) == std::vector<double>{1, 1.5, 2, 7, 4, 14, 49});
  }

  TEST_CASE("basis sizes") {
    CHECK(fixed_basis_size(BasisFamily::constant_linear, 2) == 3);
    CHECK(fixed_basis_size(BasisFamily::constant_linear_quadratic, 2) == 6);
    CHECK(fixed_basis_size(BasisFamily::constant_linear_quadratic, 10) == 66);
    CHECK(fixed_basis_size(BasisFamily::constant_linear_payoff, 5) == 7);
    CHECK(fixed_basis_size(BasisFamily::swap_order_stats, 20) == 22);
    CHECK(fixed_basis_size(BasisFamily::swap_order_stats_quadratic, 20) == 232);
    const BasisSpec spec(BasisFamily::constant_linear, 5, {1, ReinforcementVariant::value});
    CHECK(spec.width() == 7);
    CHECK(spec.reinforced());
    CHECK_THROWS_AS(BasisSpec(BasisFamily::constant_linear, 2, {2, ReinforcementVariant::value}), ConfigError);
    CHECK_THROWS_AS(BasisSpec(BasisFamily::constant_linear, 0), ConfigError);
  }

  TEST_CASE("order statistics are invariant under asset permutation") {
    std::vector<double> x{4.0, 9.0, 1.0, 7.5, 3.0};
    const auto ref = eval(BasisFamily::swap_order_stats_quadratic, x, 0.3);
    std::sort(x.begin(), x.end());
    do {
      CHECK(eval(BasisFamily::swap_order_stats_quadratic, x, 0.3) == ref);
    } while (std::next_permutation(x.begin(), x.end()));
  }

  TEST_CASE("reinforcing function") {
    CHECK(eval_reinforcing(ReinforcementVariant::value, 5, 3) == 5);
    CHECK(eval_reinforcing(ReinforcementVariant::value, 2, 3) == 3);
    CHECK(eval_reinforcing(ReinforcementVariant::value, 0, 0) == 0);
    CHECK(eval_reinforcing(ReinforcementVariant::exercise_indicator, 2, 2) == 1);
    CHECK(eval_reinforcing(ReinforcementVariant::exercise_indicator, 1, 2) == 0);
  }

  TEST_CASE("names round trip") {
    for (BasisFamily f : {BasisFamily::constant_linear, BasisFamily::constant_linear_quadratic,
                          BasisFamily::constant_linear_payoff, BasisFamily::swap_order_stats,
                          BasisFamily::swap_order_stats_quadratic}) {
      CHECK(parse_basis_family(basis_family_name(f)) == f);
      CHECK(parse_basis_family(basis_family_label(f)) == f);
    }
    CHECK(parse_basis_family("1, X_i, X_iX_j") == BasisFamily::constant_linear_quadratic);
    CHECK_THROWS_AS(parse_basis_family("cubic"), ConfigError);
    CHECK(parse_reinforcement_variant("indicator") == ReinforcementVariant::exercise_indicator);
    CHECK(parse_reinforcement_variant(reinforcement_variant_name(ReinforcementVariant::value)) ==
          ReinforcementVariant::value);
    CHECK_THROWS_AS(parse_reinforcement_variant("derivative"), ConfigError);
  }
}
