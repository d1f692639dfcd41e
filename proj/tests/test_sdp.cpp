#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "qxor/game.hpp"
#include "qxor/io.hpp"
#include "qxor/sdp.hpp"

using namespace qxor;

TEST_CASE("chsh optimum") {
  SdpSolution sol = solve(chsh(), 1e-10);
  const double root2 = std::sqrt(2.0);
  CHECK(sol.dual_bias == doctest::Approx(root2 / 2.0).epsilon(1e-9));
  CHECK(sol.primal_bias == doctest::Approx(root2 / 2.0).epsilon(1e-9));
  CHECK(sol.gap <= 1e-10);
  CHECK(sol.gap >= -1e-10);
  for (int x = 0; x < 2; ++x) CHECK(sol.dual.r[x] == doctest::Approx(root2 / 4.0).epsilon(1e-8));
  for (int y = 0; y < 2; ++y) CHECK(sol.dual.c[y] == doctest::Approx(root2 / 4.0).epsilon(1e-8));
  CHECK(check_dual_feasible(chsh(), sol.dual) >= kDualFeasTol);
  CHECK_NOTHROW(sol.primal.validate());
}

TEST_CASE("single-entry game") {
  Eigen::MatrixXd cost(1, 1);
  cost << 1.0;
  SdpSolution sol = solve(xor_game_from_cost(cost), 1e-10);
  CHECK(sol.dual_bias == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.dual.r[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.dual.c[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single-row game aligns all columns") {
  Eigen::MatrixXd cost(1, 2);
  cost << 0.3, -0.7;
  SdpSolution sol = solve(xor_game_from_cost(cost), 1e-10);
  CHECK(sol.dual_bias == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol.dual.c[0] == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(sol.dual.c[1] == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("degenerate zero row") {
  Eigen::MatrixXd cost(2, 2);
  cost << 0.0, 0.0, 0.5, 0.5;
  SdpSolution sol = solve(xor_game_from_cost(cost), 1e-9);
  CHECK(sol.dual_bias == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.dual.r[0] == doctest::Approx(0.0));
  CHECK(sol.dual.r[1] == doctest::Approx(1.0).epsilon(1e-8));
  // The degenerate row still carries a unit vector.
  CHECK(sol.primal.u.row(0).norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(check_dual_feasible(xor_game_from_cost(cost), sol.dual) >= kDualFeasTol);
}

TEST_CASE("random game properties") {
  int checked = 0;
  for (int seed = 1; seed <= 50; ++seed) {
    int na = 2 + seed % 3, nb = 2 + (seed / 3) % 3;
    XorGame g = random_xor_game(na, nb, seed);
    SdpSolution sol = solve(g, 1e-8);
    CAPTURE(seed);
    CHECK(sol.gap <= 1e-8);
    CHECK(sol.gap >= -1e-10);
    CHECK(check_dual_feasible(g, sol.dual) >= kDualFeasTol);
    CHECK(sol.primal_bias <= sol.dual_bias + 1e-9);
    CHECK(strategy_bias(g, sol.primal) == doctest::Approx(sol.primal_bias).epsilon(1e-12));
    // Quantum never beats the dual bound, never loses to classical.
    CHECK(classical_bias(g) <= sol.dual_bias + 1e-9);
    // Aligned optimum: the row/column biases of the primal match the dual.
    DualBiases measured = row_col_biases(g, sol.primal);
    CHECK((measured.r - sol.dual.r).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((measured.c - sol.dual.c).cwiseAbs().maxCoeff() <= 1e-6);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("dual block matrix structure") {
  XorGame g = chsh();
  SdpSolution sol = solve(g, 1e-9);
  Eigen::MatrixXd m = dual_block_matrix(g, sol.dual);
  REQUIRE(m.rows() == 4);
  CHECK(m(0, 0) == doctest::Approx(sol.dual.r[0]));
  CHECK(m(2, 2) == doctest::Approx(sol.dual.c[0]));
  CHECK(m(0, 2) == doctest::Approx(-g.cost(0, 0)));
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-15);

  // An infeasible dual is detected.
  DualBiases bad;
  bad.r = Eigen::VectorXd::Zero(2);
  bad.c = Eigen::VectorXd::Zero(2);
  CHECK(check_dual_feasible(g, bad) < kDualFeasTol);
}

TEST_CASE("determinism for fixed seed") {
  XorGame g = random_xor_game(3, 3, 9);
  SdpSolution a = solve(g, 1e-8);
  SdpSolution b = solve(g, 1e-8);
  CHECK(a.dual_bias == b.dual_bias);
  CHECK((a.primal.u - b.primal.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.primal.v - b.primal.v).cwiseAbs().maxCoeff() == 0.0);

  SolveOptions other;
  other.seed = 1234;
  SdpSolution c = solve(g, other);
  CHECK(a.dual_bias == doctest::Approx(c.dual_bias).epsilon(1e-7));
}

TEST_CASE("vector strategy validation") {
  VectorStrategy vs;
  vs.u = Eigen::MatrixXd::Identity(2, 2);
  vs.v = Eigen::MatrixXd::Identity(2, 2);
  CHECK_NOTHROW(vs.validate());
  vs.u(0, 0) = 0.5;
  CHECK_THROWS_AS(vs.validate(), std::invalid_argument);
  vs.u = Eigen::MatrixXd::Identity(2, 3);
  CHECK_THROWS_AS(vs.validate(), std::invalid_argument);
}

TEST_CASE("tight tolerance still converges on chsh") {
  SdpSolution sol = solve(chsh(), 1e-12);
  CHECK(sol.gap <= 1e-12);
  CHECK(sol.dual_bias == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-11));
}
