#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.h"
#include "rrmc/backward.h"
#include "rrmc/bounds.h"
#include "rrmc/errors.h"
#include "rrmc/oracle.h"

using namespace rrmc;
using rrmc::test::ZeroReward;

TEST_SUITE("bounds") {
  TEST_CASE("summary statistics") {
    const std::vector<double> xs{1, 2, 3, 4};
    const BoundEstimate e = summarize(BoundKind::lower, xs);
    CHECK(e.value == 2.5);
    CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(e.ci_low == doctest::Approx(2.5 - 1.96 * e.std_error));
    CHECK(e.ci_high == doctest::Approx(2.5 + 1.96 * e.std_error));
    CHECK(e.num_paths == 4);
    const std::vector<double> one{7.0};
    CHECK(summarize(BoundKind::upper, one).std_error == 0.0);
  }

  TEST_CASE("one date: forced stop, and the dual equals the lower bound") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 1);
    const GBMParams p = GBMParams::symmetric(2, 0.05, 0.1, 0.2, 100.0);
    const PathSet train_paths = simulate(p, grid, 100, 1);
    const PathSet test_paths = simulate(p, grid, 2000, 1, SeedDomain::test);
    const MaxCall call(MaxCallSpec{100.0, 0.05, grid, 2});
    const auto model = train(train_paths, call, BasisSpec(BasisFamily::constant_linear, 2), InductionMethod::tsitsiklis_van_roy);
    const auto stops = pathwise_stop_times(model, test_paths, call);
    CHECK(std::all_of(stops.begin(), stops.end(), [](std::size_t s) { return s == 1; }));
    const BoundEstimate lower = lower_bound(model, test_paths, call);
    const RewardTable g = build_reward_table(call, test_paths);
    double mean = 0.0;
    for (std::size_t i = 0; i < 2000; ++i) mean += g.at(i, 1);
    CHECK(lower.value == doctest::Approx(mean / 2000).epsilon(1e-13));
    const BoundEstimate upper = dual_upper_bound(model, test_paths, call, 10, 5);
    CHECK(upper.value == lower.value);
  }

  TEST_CASE("zero reward") {
    const TimeGrid grid = TimeGrid::uniform(3.0, 4);
    const PathSet paths = simulate(GBMParams::symmetric(2, 0.05, 0.1, 0.2, 100.0), grid, 100, 2);
    const ZeroReward zero(2, grid);
    const auto model = train(paths, zero, BasisSpec(BasisFamily::constant_linear, 2, {1, ReinforcementVariant::value}),
                             InductionMethod::tsitsiklis_van_roy);
    const BoundEstimate lower = lower_bound(model, paths, zero);
    CHECK(lower.value == 0.0);
    CHECK(lower.std_error == 0.0);
    // g = C = 0 stops at the first date under the >= rule.
    const auto stops = pathwise_stop_times(model, paths, zero);
    CHECK(std::all_of(stops.begin(), stops.end(), [](std::size_t s) { return s == 1; }));
    CHECK(dual_upper_bound(model, paths, zero, 4, 1).value == 0.0);
  }

  TEST_CASE("deep in the money with a zero model stops at once") {
    const TimeGrid grid = TimeGrid::uniform(3.0, 3);
    const PathSet paths = simulate(GBMParams::symmetric(2, 0.05, 0.1, 0.1, 200.0), grid, 100, 2);
    const MaxCall call(MaxCallSpec{100.0, 0.05, grid, 2});
    ContinuationModel model{BasisSpec(BasisFamily::constant_linear, 2)};
    model.product_kind = "max-call";
    model.num_dates = 3;
    for (std::size_t j = 1; j < 3; ++j) model.coeffs.push_back({j, Eigen::VectorXd::Zero(3)});
    const auto stops = pathwise_stop_times(model, paths, call);
    CHECK(std::all_of(stops.begin(), stops.end(), [](std::size_t s) { return s == 1; }));
    for (std::size_t j = 1; j <= 3; ++j) CHECK(evaluate_continuation(model, call, {j, paths.state(0, j), 0.0}, j) == 0.0);
  }

  TEST_CASE("terminal continuation is zero") {
    const TimeGrid grid = TimeGrid::uniform(3.0, 4);
    const PathSet paths = simulate(GBMParams::symmetric(2, 0.05, 0.1, 0.2, 100.0), grid, 500, 2);
    const MaxCall call(MaxCallSpec{100.0, 0.05, grid, 2});
    const auto model = train(paths, call, BasisSpec(BasisFamily::constant_linear, 2, {1, ReinforcementVariant::value}),
                             InductionMethod::tsitsiklis_van_roy);
    CHECK(evaluate_continuation(model, call, {4, paths.state(3, 4), 0.0}, 4) == 0.0);
    CHECK_THROWS_AS(evaluate_continuation(model, call, {4, paths.state(3, 4), 0.0}, 5), ConfigError);
    const MaxCall other(MaxCallSpec{100.0, 0.05, TimeGrid::uniform(3.0, 5), 2});
    CHECK_THROWS_AS(StoppingPolicy(model, other), ConfigError);
  }

  TEST_CASE("bounds bracket the lattice price of a Bermudan put") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 4);
    const GBMParams p = GBMParams::symmetric(1, 0.05, 0.0, 0.2, 100.0);
    const BermudanPut put(PutSpec{100.0, 0.05, grid});
    const PathSet train_paths = simulate(p, grid, 20000, 3);
    const PathSet test_paths = simulate(p, grid, 20000, 3, SeedDomain::test);
    const PathSet outer = simulate(p, grid, 300, derive_key(3, 0x6F75746572ull), SeedDomain::test);
    LatticeSpec spec;
    spec.rate = 0.05;
    spec.grid = grid;
    const double truth = lattice_price(spec);
    for (std::size_t b : {0, 1}) {
      const auto model = train(train_paths, put,
                               BasisSpec(BasisFamily::constant_linear_quadratic, 1, {b, ReinforcementVariant::value}),
                               InductionMethod::tsitsiklis_van_roy);
      const BoundEstimate lower = lower_bound(model, test_paths, put);
      const BoundEstimate upper = dual_upper_bound(model, outer, put, 200, 3);
      CAPTURE(b);
      CHECK(lower.value <= truth + 3 * lower.std_error);
      CHECK(upper.value >= truth - 3 * upper.std_error);
      CHECK(lower.value <= upper.value);
      CHECK(upper.inner_paths == 200);
      // No stopping rule beats the anticipative envelope.
      CHECK(pathwise_max_mean(build_reward_table(put, test_paths)) >= lower.value);
    }
  }

  TEST_CASE("dual needs at least two inner paths") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 2);
    const PathSet paths = simulate(GBMParams::symmetric(1, 0.05, 0.0, 0.2, 100.0), grid, 10, 3);
    const BermudanPut put(PutSpec{100.0, 0.05, grid});
    const auto model = train(paths, put, BasisSpec(BasisFamily::constant_linear, 1), InductionMethod::tsitsiklis_van_roy);
    CHECK_THROWS_AS(dual_upper_bound(model, paths, put, 1, 1), ConfigError);
  }

  TEST_CASE("dual is reproducible for a fixed seed") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 3);
    const GBMParams p = GBMParams::symmetric(1, 0.05, 0.0, 0.2, 100.0);
    const PathSet paths = simulate(p, grid, 1000, 3);
    const BermudanPut put(PutSpec{100.0, 0.05, grid});
    const auto model = train(paths, put, BasisSpec(BasisFamily::constant_linear, 1), InductionMethod::tsitsiklis_van_roy);
    const PathSet outer = simulate(p, grid, 50, 4);
    const auto a = dual_upper_bound(model, outer, put, 20, 9);
    const auto b = dual_upper_bound(model, outer, put, 20, 9);
    const auto c = dual_upper_bound(model, outer, put, 20, 10);
    CHECK(a.value == b.value);
    CHECK(a.value != c.value);
  }
}
