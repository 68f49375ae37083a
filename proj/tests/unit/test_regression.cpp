#include <cmath>
#include <random>

#include "doctest.h"
#include "rrmc/errors.h"
#include "rrmc/regression.h"

using namespace rrmc;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = z(gen);
  return m;
}

}  // namespace

TEST_SUITE("regression") {
  TEST_CASE("identity design returns the response") {
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(5, -2.0, 3.0);
    const auto r = solve_least_squares(Eigen::MatrixXd::Identity(5, 5), v);
    CHECK((r.gamma - v).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(r.diagnostics.rank == 5);
    CHECK(r.diagnostics.dropped_columns.empty());
  }

  TEST_CASE("intercept-only regression is the mean") {
    const Eigen::VectorXd y = random_matrix(200, 1, 3).col(0);
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(200, 1);
    const auto r = solve_least_squares(ones, y);
    CHECK(r.gamma(0) == doctest::Approx(y.mean()).epsilon(1e-13));
    CHECK(orthogonality_check(ones, y, r.gamma) < 1e-12);
  }

  TEST_CASE("exact data is recovered") {
    const Eigen::MatrixXd x = random_matrix(1000, 6, 5);
    Eigen::VectorXd truth(6);
    truth << 1.5, -2.0, 0.25, 4.0, -0.125, 3.0;
    const auto r = solve_least_squares(x, x * truth);
    CHECK((r.gamma - truth).norm() / truth.norm() < 1e-10);
    CHECK(orthogonality_check(x, x * truth, r.gamma) < 1e-8);
  }

  TEST_CASE("noisy fit is orthogonal to the design") {
    const Eigen::MatrixXd x = random_matrix(2000, 8, 7);
    const Eigen::VectorXd y = random_matrix(2000, 1, 8).col(0) + x.col(2);
    const auto r = solve_least_squares(x, y);
    CHECK(orthogonality_check(x, y, r.gamma) <= 1e-8);
    CHECK(r.diagnostics.residual_norm == doctest::Approx((y - x * r.gamma).norm()).epsilon(1e-10));
  }

  TEST_CASE("adding a column never increases the residual") {
    const Eigen::MatrixXd x = random_matrix(500, 6, 9);
    const Eigen::VectorXd y = random_matrix(500, 1, 10).col(0);
    double previous = INFINITY;
    for (Eigen::Index k = 1; k <= 6; ++k) {
      const auto r = solve_least_squares(x.leftCols(k), y);
      CHECK(r.diagnostics.residual_norm <= previous + 1e-12);
      previous = r.diagnostics.residual_norm;
    }
  }

  TEST_CASE("row order does not change the solution") {
    const Eigen::MatrixXd x = random_matrix(300, 4, 11);
    const Eigen::VectorXd y = random_matrix(300, 1, 12).col(0);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(300);
    perm.setIdentity();
    std::mt19937 gen(1);
    std::shuffle(perm.indices().data(), perm.indices().data() + 300, gen);
    const auto a = solve_least_squares(x, y);
    const auto b = solve_least_squares(perm * x, perm * y);
    CHECK((a.gamma - b.gamma).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("underdetermined systems are rejected") {
    CHECK_THROWS_AS(solve_least_squares(random_matrix(3, 5, 1), Eigen::VectorXd::Zero(3)), NumericalError);
    CHECK_THROWS(solve_least_squares(random_matrix(5, 2, 1), Eigen::VectorXd::Zero(4)));
  }

  TEST_CASE("collinear columns are dropped, or rejected when strict") {
    Eigen::MatrixXd x = random_matrix(100, 4, 13);
    x.col(2).setZero();
    const Eigen::VectorXd y = x.col(0) - x.col(3);
    const auto r = solve_least_squares(x, y);
    CHECK(r.diagnostics.rank == 3);
    REQUIRE(r.diagnostics.dropped_columns.size() == 1);
    CHECK(r.diagnostics.dropped_columns[0] == 2);
    CHECK(r.gamma(2) == 0.0);
    CHECK((x * r.gamma - y).norm() < 1e-10);
    try {
      solve_least_squares(x, y, SolveOptions{1e-12, true});
      FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("column 2") != std::string::npos);
    }
  }
}
