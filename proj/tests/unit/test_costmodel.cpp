#include <array>

#include "doctest.h"
#include "rrmc/costmodel.h"
#include "rrmc/errors.h"

using namespace rrmc;

TEST_SUITE("costmodel") {
  TEST_CASE("formula examples") {
    CostParams p;
    p.num_paths = 1;
    p.num_dates = 2;
    p.K_r = 1;
    CHECK(reinforced_training_cost(p) == 8.0);

    CostParams s;
    s.num_paths = 1;
    s.num_dates = 1;
    s.K = 2;
    CHECK(standard_training_cost(s) == 6.0);

    CostParams e;
    e.num_test_paths = 1;
    e.num_dates = 2;
    e.K_r = 1;
    CHECK(evaluation_cost(e) == 6.0);

    p.c_f = p.c_star = 0;
    s.c_f = s.c_star = 0;
    e.c_f = e.c_star = 0;
    CHECK(reinforced_training_cost(p) == 0.0);
    CHECK(standard_training_cost(s) == 0.0);
    CHECK(evaluation_cost(e) == 0.0);
  }

  TEST_CASE("ratios") {
    CHECK(max_call_cost_reduction(10, 9) == doctest::Approx(29.0 / 110.0));

    CostParams p;
    p.c_star = 0;
    p.K = p.K_r = 7;
    p.num_dates = 0;
    CHECK(cost_ratios(p).training == doctest::Approx(1.0));

    p.num_dates = 9;
    p.K = 66;
    p.K_r = 11;
    CHECK(cost_ratios(p).evaluation == doctest::Approx((11 + 4.5) / 66.0));

    p.c_f = 0;
    CHECK_THROWS_AS(cost_ratios(p), NumericalError);
  }

  TEST_CASE("reinforced cost without date terms equals the standard cost") {
    CostParams p;
    p.c_f = 1.3;
    p.c_star = 0.7;
    p.num_paths = 1000;
    p.num_dates = 9;
    p.K = p.K_r = 11;
    const double j = p.num_dates, n = p.num_paths, k = p.K;
    const double date_terms = 0.5 * n * j * j * p.c_f + 0.5 * n * j * j * k * p.c_star;
    CHECK(reinforced_training_cost(p) - date_terms == doctest::Approx(standard_training_cost(p)));
  }

  TEST_CASE("costs are monotone in every parameter") {
    const CostParams base{1.0, 0.5, 1000, 2000, 9, 66, 11, 1};
    auto all = [](const CostParams& p) {
      return std::array<double, 4>{reinforced_training_cost(p), standard_training_cost(p), evaluation_cost(p),
                                   standard_evaluation_cost(p)};
    };
    const auto ref = all(base);
    for (int field = 0; field < 7; ++field) {
      CostParams q = base;
      double* fields[] = {&q.c_f, &q.c_star, &q.num_paths, &q.num_test_paths, &q.num_dates, &q.K, &q.K_r};
      *fields[field] *= 1.5;
      const auto bumped = all(q);
      for (std::size_t k = 0; k < 4; ++k) CHECK(bumped[k] >= ref[k]);
    }
  }

  TEST_CASE("negative parameters are rejected") {
    CostParams p;
    p.num_paths = -1;
    CHECK_THROWS_AS(reinforced_training_cost(p), ConfigError);
  }
}
