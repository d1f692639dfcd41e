#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "qxor/compiled.hpp"
#include "qxor/game.hpp"
#include "qxor/io.hpp"
#include "qxor/rigidity.hpp"
#include "qxor/sdp.hpp"
#include "qxor/synth.hpp"

using namespace qxor;

namespace {

QuantumStrategy chsh_optimal() {
  static QuantumStrategy qs = strategy_from_vectors(solve(chsh(), 1e-11).primal);
  return qs;
}

CMat random_binary_observable(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = std::complex<double>(n(rng), n(rng));
  m = ((m + m.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  CMat out = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    out += (k % 2 ? 1.0 : -1.0) * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  return out;
}

CompiledStrategy random_compiled(const XorGame& game, const MockQhe& qhe, int dim,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  CompiledStrategy cs;
  cs.dim = dim;
  CVec psi(dim);
  for (int i = 0; i < dim; ++i) psi[i] = std::complex<double>(n(rng), n(rng));
  cs.psi = psi / psi.norm();
  CMat id = CMat::Identity(dim, dim);
  cs.alice.resize(game.na());
  for (int x = 0; x < game.na(); ++x) {
    cs.alice[x].resize(qhe.num_tags());
    for (int t = 0; t < qhe.num_tags(); ++t) {
      CMat obs = random_binary_observable(dim, rng);
      cs.alice[x][t].push_back({0, (id + obs) / 2.0, id});
      cs.alice[x][t].push_back({1, (id - obs) / 2.0, id});
    }
  }
  for (int y = 0; y < game.nb(); ++y) {
    CMat obs = random_binary_observable(dim, rng);
    cs.bob.push_back({(id + obs) / 2.0, (id - obs) / 2.0});
  }
  return cs;
}

}  // namespace

TEST_CASE("magic square game shape and predicate") {
  NonlocalGame g = magic_square_game();
  REQUIRE(g.na == 6);
  REQUIRE(g.nb == 9);
  REQUIRE(g.oa == 8);
  REQUIRE(g.ob == 2);
  CHECK(g.pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(g.validate());

  // Row 0 = variables (0,1,2), even parity. Alice answer bits are
  // big-endian over the listed variables.
  CHECK(g.wins(0, 0, 0b000, 0) == 1);     // assignment 0,0,0; agrees on var 0
  CHECK(g.wins(0, 0, 0b000, 1) == 0);     // disagrees with Bob
  CHECK(g.wins(0, 0, 0b101, 1) == 1);     // assignment 1,0,1 keeps even parity
  CHECK(g.wins(0, 1, 0b110, 1) == 1);     // var 1 assigned 1
  CHECK(g.wins(0, 0, 0b100, 0) == 0);     // assignment 1,0,0 breaks the parity
  CHECK(g.wins(0, 0, 0b001, 1) == 0);     // odd parity loses row 0

  // Column 2 = variables (2,5,8), odd parity required.
  CHECK(g.wins(5, 2, 0b100, 1) == 1);
  CHECK(g.wins(5, 2, 0b000, 0) == 0);

  // Off-support pairs have zero probability.
  CHECK(g.pi(0, 3) == 0.0);
  CHECK(g.pi(5, 2) == doctest::Approx(1.0 / 18.0));
}

TEST_CASE("magic square is classically imperfect but quantumly perfect") {
  CHECK(classical_value(magic_square_game()) == doctest::Approx(17.0 / 18.0).epsilon(1e-12));
  QuantumStrategy qs = magic_square_perfect_strategy();
  CHECK(game_value(magic_square_game(), qs) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perfect strategy operator algebra") {
  QuantumStrategy qs = magic_square_perfect_strategy();
  std::vector<CMat> b;
  for (int j = 0; j < 9; ++j) b.push_back(qs.bob_observable(j).m);
  CMat id = CMat::Identity(4, 4);

  for (int e = 0; e < 6; ++e) {
    const int* s = kMagicEquations[e];
    const double sign = kMagicRhs[e] ? -1.0 : 1.0;
    CHECK((b[s[0]] * b[s[1]] * b[s[2]] - sign * id).cwiseAbs().maxCoeff() <= 1e-12);
    // Observables within one equation commute pairwise.
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < p; ++q)
        CHECK((b[s[p]] * b[s[q]] - b[s[q]] * b[s[p]]).cwiseAbs().maxCoeff() <= 1e-12);
  }

  // The canonical pair anticommutes exactly; a commuting pair does not.
  CHECK((b[1] * b[3] + b[3] * b[1]).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((b[0] * b[1] + b[1] * b[0]).cwiseAbs().maxCoeff() > 1.0);
}

TEST_CASE("compiled magic square at the perfect point") {
  MockQhe qhe;
  CompiledStrategy cs = honest_compile(magic_square_perfect_strategy(), qhe);
  CHECK(run_compiled(magic_square_game(), cs, qhe).value == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(anticommutator_norm(cs, 1, 3) <= 1e-12);
  CHECK(anticommutator_norm(cs, 0, 1) == doctest::Approx(2.0).epsilon(1e-12));

  MagicReport rep = magic_anticommutator(cs, qhe);
  CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.epsilon <= 1e-12);
  CHECK(rep.residual <= 1e-9);
  CHECK(rep.identity_residual <= 1e-12);
  CHECK(rep.triple_residual.maxCoeff() <= 1e-9);
  CHECK(rep.shifted_residual <= 1e-9);
  CHECK(rep.exchange_residual <= 1e-9);
  CHECK(rep.pass);
}

TEST_CASE("magic square rigidity under perturbation sweeps") {
  MockQhe qhe;
  QuantumStrategy base = magic_square_perfect_strategy();
  for (double theta : {0.02, 0.05, 0.1, 0.2}) {
    QuantumStrategy bent = perturb_bob(base, 1, theta, 7);
    CompiledStrategy cs = honest_compile(bent, qhe);
    MagicReport rep = magic_anticommutator(cs, qhe);
    CAPTURE(theta);
    CHECK(rep.epsilon > 0.0);
    CHECK(rep.residual <= rep.bound + 1e-9);
    CHECK(rep.identity_residual <= 1e-12);
    CHECK(rep.triple_residual.maxCoeff() <= rep.triple_bound + 1e-9);
    CHECK(rep.shifted_residual <= rep.shifted_bound_proof + 1e-9);
    CHECK(rep.exchange_residual <= rep.exchange_bound + 1e-9);
    CHECK(rep.pass);
    // Both stated forms of the shifted bound are reported.
    CHECK(rep.shifted_bound_printed == doctest::Approx(32.0 * rep.epsilon));
    CHECK(rep.shifted_bound_proof == doctest::Approx(576.0 * rep.epsilon));
  }
}

TEST_CASE("magic anticommutator holds at every equation") {
  MockQhe qhe;
  CompiledStrategy cs =
      honest_compile(perturb_bob(magic_square_perfect_strategy(), 3, 0.1, 3), qhe);
  for (int i = 0; i < 6; ++i) {
    MagicReport rep = magic_anticommutator(cs, qhe, i, 1, 3);
    CAPTURE(i);
    CHECK(rep.residual <= rep.bound + 1e-9);
  }
}

TEST_CASE("magic anticommutator input validation") {
  MockQhe qhe;
  CompiledStrategy chsh_cs = honest_compile(chsh_optimal(), qhe);
  CHECK_THROWS_AS(magic_anticommutator(chsh_cs, qhe), std::invalid_argument);

  CompiledStrategy cs = honest_compile(magic_square_perfect_strategy(), qhe);
  CHECK_THROWS_AS(magic_anticommutator(cs, qhe, 6, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(magic_anticommutator(cs, qhe, 0, 1, 9), std::invalid_argument);

  CompiledStrategy bad = cs;
  for (auto& tags : bad.alice)
    for (auto& branches : tags)
      for (auto& br : branches) br.alpha += 8;
  CHECK_THROWS_AS(magic_anticommutator(bad, qhe), std::invalid_argument);
}

TEST_CASE("chsh self-test at the optimum") {
  MockQhe qhe;
  XorGame g = chsh();
  SdpSolution sol = solve(g, 1e-10);
  CompiledStrategy cs = honest_compile(chsh_optimal(), qhe);
  SelfTestReport rep = selftest_report(g, cs, qhe, sol.dual, sol.dual_bias);

  CHECK(rep.epsilon <= 1e-9);
  CHECK(rep.row_residual.maxCoeff() <= 1e-9);
  CHECK(rep.algebra_residual.maxCoeff() <= 1e-9);
  for (int x = 0; x < 2; ++x) CHECK(rep.jensen_lhs[x] <= rep.jensen_rhs[x] + 1e-12);
  CHECK(rep.pass);

  for (int x = 0; x < 2; ++x) {
    CHECK(selftest_row_residual(g, cs, qhe, sol.dual, x) <= 1e-9);
    CHECK(selftest_solution_algebra(g, cs, qhe, sol.dual, x) <= 1e-9);
    CHECK(anticommutator_residual(cs, qhe, x, 0, 1) <= 1e-9);
  }
}

TEST_CASE("chsh self-test across a perturbation sweep") {
  MockQhe qhe;
  XorGame g = chsh();
  SdpSolution sol = solve(g, 1e-10);
  for (int step = 0; step <= 9; ++step) {
    const double theta = 0.03 * step;
    QuantumStrategy bent = perturb_bob(chsh_optimal(), 0, theta, 11);
    CompiledStrategy cs = honest_compile(bent, qhe);
    SelfTestReport rep = selftest_report(g, cs, qhe, sol.dual, sol.dual_bias);
    CAPTURE(theta);
    CHECK(rep.pass);
    if (step > 0) CHECK(rep.epsilon > 0.0);
    // The anticommutation display: residual within the constant-scaled bound.
    const double c1 = 16.0 * (2.0 * std::sqrt(2.0) + 1.0) * (std::sqrt(2.0) + 1.0);
    for (int x = 0; x < 2; ++x)
      CHECK(anticommutator_residual(cs, qhe, x, 0, 1) <= c1 * rep.eps_prime + 1e-9);
  }
}

TEST_CASE("self-test bounds on random games") {
  MockQhe qhe;
  for (int seed : {901, 902}) {
    XorGame g = random_xor_game(2, 2, seed);
    SdpSolution sol = solve(g, 1e-9);
    QuantumStrategy base = strategy_from_vectors(sol.primal);
    for (double theta : {0.0, 0.05, 0.15}) {
      CompiledStrategy cs = honest_compile(perturb_bob(base, 1, theta, 5), qhe);
      SelfTestReport rep = selftest_report(g, cs, qhe, sol.dual, sol.dual_bias);
      CAPTURE(seed);
      CAPTURE(theta);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("self-test of a classical prover has slack but stays bounded") {
  MockQhe qhe;
  XorGame g = chsh();
  SdpSolution sol = solve(g, 1e-10);
  // Deterministic all-zeros answers: a valid but far-from-optimal prover.
  QuantumStrategy det;
  det.da = det.db = 1;
  det.psi = CVec::Ones(1);
  CMat one = CMat::Ones(1, 1), zero = CMat::Zero(1, 1);
  for (int x = 0; x < 2; ++x) det.alice.push_back(make_pvm({one, zero}));
  for (int y = 0; y < 2; ++y) det.bob.push_back(make_pvm({one, zero}));
  CompiledStrategy cs = honest_compile(det, qhe);

  SelfTestReport rep = selftest_report(g, cs, qhe, sol.dual, sol.dual_bias);
  CHECK(rep.value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rep.epsilon == doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0 - 0.75).epsilon(1e-8));
  CHECK(rep.pass);
}

TEST_CASE("row residual needs a live row") {
  MockQhe qhe;
  Eigen::MatrixXd cost(2, 2);
  cost << 0.0, 0.0, 0.5, 0.5;
  XorGame g = xor_game_from_cost(cost);
  SdpSolution sol = solve(g, 1e-9);
  QuantumStrategy qs = strategy_from_vectors(sol.primal);
  CompiledStrategy cs = honest_compile(qs, qhe);
  CHECK_THROWS_AS(selftest_row_residual(g, cs, qhe, sol.dual, 0), std::runtime_error);
}

TEST_CASE("jensen inequality on arbitrary provers") {
  MockQhe qhe;
  XorGame g = chsh();
  for (int seed = 0; seed < 20; ++seed) {
    CompiledStrategy cs = random_compiled(g, qhe, 4, 1000 + seed);
    for (int x = 0; x < 2; ++x) {
      auto [lhs, rhs] = jensen_check(g, cs, qhe, x);
      CAPTURE(seed);
      CHECK(lhs <= rhs + 1e-12);
    }
  }
}

TEST_CASE("jensen equality for trivial Bob observables") {
  MockQhe qhe;
  XorGame g = chsh();
  CompiledStrategy cs = random_compiled(g, qhe, 3, 77);
  CMat id = CMat::Identity(3, 3);
  for (auto& per_y : cs.bob) per_y = {id, CMat::Zero(3, 3)};
  // All Alice branches answer alpha in {0,1}; B_y = 1 collapses both sides.
  for (int x = 0; x < 2; ++x) {
    auto [lhs, rhs] = jensen_check(g, cs, qhe, x);
    const double row_sum = g.cost.row(x).sum();
    CHECK(rhs == doctest::Approx(row_sum * row_sum).epsilon(1e-10));
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("vector strategy row residuals obey the quadratic bound") {
  XorGame g = chsh();
  SdpSolution sol = solve(g, 1e-10);
  const double beta_star = sol.dual_bias;

  Eigen::VectorXd at_opt = vector_row_residuals(g, sol.primal, sol.dual);
  CHECK(at_opt.maxCoeff() <= 1e-12);

  for (double theta : {0.05, 0.1, 0.3, 0.6}) {
    VectorStrategy bent = perturb_vectors(sol.primal, theta, 13);
    CHECK_NOTHROW(bent.validate());
    const double eps = std::max(0.0, beta_star - strategy_bias(g, bent));
    Eigen::VectorXd res = vector_row_residuals(g, bent, sol.dual);
    CAPTURE(theta);
    CHECK(res.maxCoeff() <= 2.0 * (g.na() + g.nb()) * beta_star * eps + 1e-12);
  }
}

TEST_CASE("perturbations stay valid strategies") {
  QuantumStrategy base = chsh_optimal();
  QuantumStrategy bent = perturb_bob(base, 1, 0.2, 9);
  CHECK_NOTHROW(bent.validate());
  // Same strategy except at the rotated question.
  CHECK((bent.bob[0].projectors[0] - base.bob[0].projectors[0]).cwiseAbs().maxCoeff() <=
        1e-15);
  CHECK((bent.bob[1].projectors[0] - base.bob[1].projectors[0]).cwiseAbs().maxCoeff() >
        1e-4);
  CHECK_THROWS_AS(perturb_bob(base, 5, 0.1, 1), std::invalid_argument);

  // theta = 0 is the identity perturbation.
  QuantumStrategy same = perturb_bob(base, 1, 0.0, 9);
  CHECK((same.bob[1].projectors[0] - base.bob[1].projectors[0]).cwiseAbs().maxCoeff() <=
        1e-12);
}
