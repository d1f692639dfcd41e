#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "qxor/game.hpp"

namespace qxor {

// Primal object: one real unit vector per question, stored as matrix rows.
struct VectorStrategy {
  Eigen::MatrixXd u;  // |I_A| x d
  Eigen::MatrixXd v;  // |I_B| x d

  int dim() const { return static_cast<int>(u.cols()); }
  void validate() const;  // unit rows within 1e-9, matching dims
};

// Dual object: row biases r and column biases c. Feasible iff the block
// matrix [[diag(r), -G], [-G^T, diag(c)]] is PSD.
struct DualBiases {
  Eigen::VectorXd r;
  Eigen::VectorXd c;
};

struct SdpSolution {
  VectorStrategy primal;
  DualBiases dual;
  double primal_bias = 0.0;
  double dual_bias = 0.0;  // (sum r + sum c)/2
  double gap = 0.0;        // dual_bias - primal_bias, >= -1e-10
};

struct SolveOptions {
  double tol = 1e-8;
  std::uint64_t max_iters = 1000000;
  std::uint64_t seed = 0x9e3779b9u;  // deterministic initialization
  int restarts_per_rank = 6;
};

// Tsirelson bound by low-rank factorized ascent over explicit unit vectors.
// Alternates the aligned closed-form block updates (the projected-gradient
// fixed point), recovers duals r_x = |sum_y G_xy v_y|, c_y = |sum_x G_xy u_x|,
// and accepts only when the gap closes AND the recovered dual passes the PSD
// check; otherwise reseeds and escalates the rank up to |I_A|+|I_B|.
// Non-global fixed points of the ascent have zero gap but an infeasible
// recovered dual, so the PSD check is what makes acceptance unconditional.
SdpSolution solve(const XorGame& game, const SolveOptions& opts = {});
SdpSolution solve(const XorGame& game, double tol);

double strategy_bias(const XorGame& game, const VectorStrategy& s);

// Row/column biases of a given strategy: r_x = sum_y G_xy <u_x, v_y>,
// c_y = sum_x G_xy <u_x, v_y>. At optimum these match the dual solution.
DualBiases row_col_biases(const XorGame& game, const VectorStrategy& s);

Eigen::MatrixXd dual_block_matrix(const XorGame& game, const DualBiases& d);

// Smallest eigenvalue of the dual block matrix; feasible iff >= -1e-8.
double check_dual_feasible(const XorGame& game, const DualBiases& d);

constexpr double kDualFeasTol = -1e-8;
constexpr double kDegenerateRow = 1e-12;

}  // namespace qxor
