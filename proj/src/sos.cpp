#include "qxor/sos.hpp"

#include <cmath>
#include <stdexcept>

namespace qxor {

namespace {

constexpr double kLambdaClip = 1e-8;
constexpr double kRowThreshold = 1e-10;

NcPolynomial b_linear(const Eigen::VectorXd& coeffs) {
  NcPolynomial p;
  for (int y = 0; y < coeffs.size(); ++y)
    p += coeffs[y] * NcPolynomial::letter(Party::B, y);
  return p;
}

}  // namespace

SosCertificate build_certificate(const XorGame& game, const SdpSolution& sol) {
  game.validate();
  if (sol.gap > 1e-6)
    throw std::invalid_argument("build_certificate: SDP gap too large");
  int na = game.na(), nb = game.nb();
  const Eigen::VectorXd& r = sol.dual.r;
  const Eigen::VectorXd& c = sol.dual.c;
  if (r.size() != na || c.size() != nb)
    throw std::invalid_argument("build_certificate: dual size mismatch");

  SosCertificate cert;
  cert.beta = sol.dual_bias;

  // M = diag(c) - G^T diag(r)^-1 G, restricted to nondegenerate rows. A zero
  // r_x with a nonzero row of G cannot be certified (the Schur complement
  // argument needs diag(r) > 0 on the support).
  Eigen::MatrixXd m = c.asDiagonal();
  for (int x = 0; x < na; ++x) {
    Eigen::VectorXd row = game.cost.row(x);
    if (r[x] > kRowThreshold) {
      cert.a_terms.push_back({x, r[x] / 2.0, row / r[x]});
      m -= (row * row.transpose()) / r[x];
    } else if (row.cwiseAbs().maxCoeff() > kDegenerateRow) {
      throw std::runtime_error("build_certificate: zero r_x on a row with nonzero G entries");
    }
  }

  double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw std::runtime_error("build_certificate: M asymmetry above 1e-12");
  m = ((m + m.transpose()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  for (int y = 0; y < nb; ++y) {
    double lambda = es.eigenvalues()[y];
    if (lambda < -kLambdaClip)
      throw std::runtime_error("build_certificate: M eigenvalue below -1e-8 (bad SDP solution)");
    if (lambda <= kLambdaClip) continue;  // clip numerical noise, drop the term
    cert.b_terms.push_back({lambda / 2.0, es.eigenvectors().col(y)});
  }
  return cert;
}

NcPolynomial certificate_polynomial(const SosCertificate& cert) {
  NcPolynomial rhs;
  for (const auto& t : cert.a_terms) {
    NcPolynomial s = NcPolynomial::letter(Party::A, t.x) - b_linear(t.bhat);
    rhs += t.weight * (s * s);
  }
  for (const auto& t : cert.b_terms) {
    NcPolynomial s = b_linear(t.v);
    rhs += t.weight * (s * s);
  }
  return rhs;
}

double verify_certificate(const XorGame& game, const SosCertificate& cert) {
  NcPolynomial target = cert.beta * NcPolynomial::one() - bias_polynomial(game);
  NcPolynomial residual = certificate_polynomial(cert) - target;
  return residual.max_abs_coeff();
}

double bound_from_certificate(const XorGame& game, const SosCertificate& cert,
                              double residual_threshold) {
  double residual = verify_certificate(game, cert);
  if (residual > residual_threshold)
    throw std::runtime_error("bound_from_certificate: certificate failed verification");
  return cert.beta;
}

}  // namespace qxor
