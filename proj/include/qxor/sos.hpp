#pragma once

#include <Eigen/Dense>

#include <vector>

#include "qxor/game.hpp"
#include "qxor/ncpoly.hpp"
#include "qxor/sdp.hpp"

namespace qxor {

// Certificate data for the decomposition
//   beta*1 - h_G = sum_x (r_x/2) (a_x - bhat_x)^2 + sum_y (lambda_y/2) (v_y . b)^2
// where bhat_x = (1/r_x) sum_y G_xy b_y. Every square is "nice": the a-terms
// mention exactly one Alice generator, the b-terms none.
struct SosCertificate {
  struct ATerm {
    int x = 0;
    double weight = 0.0;        // r_x / 2
    Eigen::VectorXd bhat;       // coefficients of bhat_x over I_B
  };
  struct BTerm {
    double weight = 0.0;        // lambda_y / 2
    Eigen::VectorXd v;          // eigenvector over I_B
  };

  double beta = 0.0;
  std::vector<ATerm> a_terms;
  std::vector<BTerm> b_terms;
};

// Builds the certificate from a solved game: bhat_x = row_x(G)/r_x, beta from
// the dual objective, and the b-part from the eigendecomposition of the Schur
// complement M = diag(c) - G^T diag(r)^-1 G. Eigenvalues in [-1e-8, 0) are
// clipped to 0 (and the term dropped); below -1e-8 is an error.
SosCertificate build_certificate(const XorGame& game, const SdpSolution& sol);

// Expands the right-hand side in ncpoly, subtracts beta*1 - h_G, and returns
// the max absolute residual coefficient.
double verify_certificate(const XorGame& game, const SosCertificate& cert);

// The certificate polynomial sum_x w (a_x - bhat_x)^2 + sum_y w (v_y . b)^2.
NcPolynomial certificate_polynomial(const SosCertificate& cert);

inline bool certificate_passes(double residual, double gap) {
  return residual <= std::max(1e-6, 10.0 * gap);
}

// Returns beta after re-verifying; the certified upper bound on the compiled
// bias (exact here because the mock scheme has zero correctness error).
double bound_from_certificate(const XorGame& game, const SosCertificate& cert,
                              double residual_threshold = 1e-6);

}  // namespace qxor
