#pragma once

#include <Eigen/Dense>

#include <vector>

#include "qxor/game.hpp"
#include "qxor/qsim.hpp"
#include "qxor/sdp.hpp"

namespace qxor {

// Finite-dimensional tensor strategy with general PVMs per question. XOR
// strategies carry 2-outcome PVMs; binary observables are derived on demand.
struct QuantumStrategy {
  int da = 0, db = 0;
  CVec psi;                 // unit vector on da*db
  std::vector<Pvm> alice;   // one Pvm per x
  std::vector<Pvm> bob;     // one Pvm per y

  BinaryObservable alice_observable(int x) const;
  BinaryObservable bob_observable(int y) const;
  void validate() const;
};

// Binary-observable constructor (XOR games).
QuantumStrategy strategy_from_observables(CVec psi, int da, int db,
                                          const std::vector<CMat>& alice_obs,
                                          const std::vector<CMat>& bob_obs);

// d pairwise anticommuting Hermitian involutions on dimension 2^ceil(d/2)
// (Jordan-Wigner ladder: Z..Z X I.. and Z..Z Y I..).
std::vector<BinaryObservable> clifford_generators(int d);

// Tsirelson construction: A_x = sum_i u_x[i] gamma_i on Alice's side, the
// entrywise conjugates on Bob's side, maximally entangled state; correlations
// reproduce <u_x, v_y>. Rank-reduces the vectors first (Gram eigenvalue
// cutoff 1e-10) and requires the reduced dimension <= 8.
QuantumStrategy strategy_from_vectors(const VectorStrategy& vs);

// Appendix construction: v_y from a Gram factorization of the second-moment
// matrix V, u_x aligned with sum_s G_xs v_s.
VectorStrategy vectors_from_second_moments(const XorGame& game, const Eigen::MatrixXd& v);

// Residuals ||(A_x (x) I - (1/r_x) sum_y G_xy I (x) B_y)|psi>|| per x.
Eigen::VectorXd check_optimal_state_relation(const XorGame& game, const QuantumStrategy& qs,
                                             const DualBiases& duals);

double quantum_bias(const XorGame& game, const QuantumStrategy& qs);
double game_value(const NonlocalGame& game, const QuantumStrategy& qs);

// Row-reduces the stacked (u; v) Gram matrix to its rank, preserving inner
// products; used before the Clifford construction.
VectorStrategy reduce_rank(const VectorStrategy& vs, double cutoff = 1e-10);

}  // namespace qxor
