#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "qxor/compiled.hpp"
#include "qxor/game.hpp"
#include "qxor/sdp.hpp"
#include "qxor/synth.hpp"

namespace qxor {

// Self-testing residuals for compiled XOR games. All residuals are exact
// enumerations of E_c sum_alpha ||.|psi_c_alpha>||^2 quantities; the bounds
// quantify over eps-optimal strategies with eps measured from the actual
// value deficit (the negligible terms vanish under the transparent mock, so
// eps' = 2 eps throughout).

// E_c sum_a || (r_x - (-1)^Dec(a) sum_y G_xy B_y) psi_ca ||^2.
double selftest_row_residual(const XorGame& game, const CompiledStrategy& strat,
                             const MockQhe& qhe, const DualBiases& duals, int x);

// E_c sum_a || (r_x^2 - (sum_y G_xy B_y)^2) psi_ca ||^2.
double selftest_solution_algebra(const XorGame& game, const CompiledStrategy& strat,
                                 const MockQhe& qhe, const DualBiases& duals, int x);

// E_c sum_a || (B_j B_k + B_k B_j) psi_ca ||^2 for Alice question x.
double anticommutator_residual(const CompiledStrategy& strat, const MockQhe& qhe,
                               int x, int j, int k);

// lhs = |E_c sum_a (-1)^Dec(a) <psi|sum_y G_xy B_y|psi>|^2,
// rhs = E_c sum_a <psi|(sum_y G_xy B_y)^2|psi>; lhs <= rhs always.
std::pair<double, double> jensen_check(const XorGame& game, const CompiledStrategy& strat,
                                       const MockQhe& qhe, int x);

struct SelfTestReport {
  double beta_star = 0.0;
  double value = 0.0;
  double epsilon = 0.0;      // max(0, optimal value - value)
  double eps_prime = 0.0;    // 2 epsilon
  Eigen::VectorXd row_residual;
  double row_bound = 0.0;    // 2((na+nb) beta* + 1) eps'
  Eigen::VectorXd algebra_residual;
  Eigen::VectorXd algebra_bound;  // 4((na+nb) beta* + 1)(r_x + (sum_y |G_xy|)^2) eps'
  Eigen::VectorXd jensen_lhs;
  Eigen::VectorXd jensen_rhs;
  bool pass = false;
};

SelfTestReport selftest_report(const XorGame& game, const CompiledStrategy& strat,
                               const MockQhe& qhe, const DualBiases& duals,
                               double beta_star);

// Squared row-bias deviations (r_x - sum_y G_xy <u_x, v_y>)^2 of a vector
// strategy; for eps-optimal strategies each is <= 2(na+nb) beta* eps.
Eigen::VectorXd vector_row_residuals(const XorGame& game, const VectorStrategy& vs,
                                     const DualBiases& duals);

// Smooth perturbation families used by the sweeps: conjugate one observable
// (all projectors of bob[y]) by exp(i theta H) with a seeded Hermitian H of
// unit spectral norm, or rotate v_0 toward a seeded direction by theta.
QuantumStrategy perturb_bob(const QuantumStrategy& qs, int y, double theta,
                            std::uint64_t seed = 7);
VectorStrategy perturb_vectors(const VectorStrategy& vs, double theta,
                               std::uint64_t seed = 7);

// Magic square: equations over variables x_0..x_8, rows then columns, with
// right-hand sides (0,0,0,0,0,1). Alice gets an equation index i in [6] and
// answers 3 bits for its variables in listed order (big-endian in her answer
// word); Bob gets one of the 9 variables, uniform over the 3 in equation i,
// and answers 1 bit. Winning requires Alice's bits to satisfy her equation
// and both assignments to agree on Bob's variable.
extern const int kMagicEquations[6][3];
extern const int kMagicRhs[6];

NonlocalGame magic_square_game();

// Mermin-Peres assignment on two EPR pairs; rows multiply to +I, the last
// column to -I, and the observables of variables 1 and 3 anticommute exactly.
QuantumStrategy magic_square_perfect_strategy();

struct MagicReport {
  double value = 0.0;
  double epsilon = 0.0;              // max(0, 1 - value)
  double residual = 0.0;             // E_c sum_a ||(B_j B_k + B_k B_j) psi||^2
  double bound = 0.0;                // 17280 eps
  double identity_residual = 0.0;    // projector identity, exact up to rounding
  Eigen::VectorXd triple_residual;   // per equation: ||(B_s1 B_s2 - (-1)^d B_s3) psi||^2
  double triple_bound = 0.0;         // 216 eps
  double shifted_residual = 0.0;     // max over (eq, question, trailing B_t)
  double shifted_bound_printed = 0.0;  // 32 eps (as stated)
  double shifted_bound_proof = 0.0;    // 576 eps (as derived; asserted)
  double exchange_residual = 0.0;    // max over equation pairs
  double exchange_bound = 0.0;       // 1584 eps
  bool pass = false;
};

// Evaluates the anticommutation self-test for the compiled magic square game
// at Alice question i with Bob pair (j, k); defaults to the canonical pair
// (x_1, x_3) whose honest observables are I(x)Z and I(x)X.
MagicReport magic_anticommutator(const CompiledStrategy& strat, const MockQhe& qhe,
                                 int i = 0, int j = 1, int k = 3);

// Spectral norm of B_j B_k + B_k B_j for a binary-answer compiled strategy.
double anticommutator_norm(const CompiledStrategy& strat, int j, int k);

}  // namespace qxor
