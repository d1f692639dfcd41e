#include "qxor/qsim.hpp"

#include <cmath>
#include <stdexcept>

namespace qxor {

namespace {

void check_dim(Eigen::Index d, const char* who) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument(std::string(who) + ": dimension out of range");
}

}  // namespace

bool is_hermitian(const CMat& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMat& m, double tol) {
  CMat id = CMat::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

StateVector make_state(CVec amps) {
  check_dim(amps.size(), "state");
  if (std::abs(amps.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("state: not normalized");
  return {std::move(amps)};
}

StateVector maximally_entangled(int d) {
  check_dim(static_cast<Eigen::Index>(d) * d, "maximally_entangled");
  CVec amps = CVec::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < d; ++k) amps[static_cast<Eigen::Index>(k) * d + k] = 1.0 / std::sqrt(double(d));
  return {std::move(amps)};
}

BinaryObservable make_observable(CMat m) {
  check_dim(m.rows(), "observable");
  if (m.rows() != m.cols()) throw std::invalid_argument("observable: not square");
  if (!is_hermitian(m, 1e-10)) throw std::invalid_argument("observable: not Hermitian");
  if ((m * m - CMat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("observable: not an involution");
  return {std::move(m)};
}

Pvm make_pvm(std::vector<CMat> projectors) {
  if (projectors.empty()) throw std::invalid_argument("pvm: no projectors");
  Eigen::Index d = projectors[0].rows();
  check_dim(d, "pvm");
  CMat sum = CMat::Zero(d, d);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const CMat& p = projectors[k];
    if (p.rows() != d || p.cols() != d) throw std::invalid_argument("pvm: shape mismatch");
    if (!is_hermitian(p)) throw std::invalid_argument("pvm: projector not Hermitian");
    if ((p * p - p).cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("pvm: not idempotent");
    for (std::size_t l = 0; l < k; ++l)
      if ((projectors[l] * p).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("pvm: projectors not orthogonal");
    sum += p;
  }
  if ((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("pvm: projectors do not sum to identity");
  return {std::move(projectors)};
}

BinaryObservable observable_from_pvm(const Pvm& p) {
  if (p.outcomes() != 2) throw std::invalid_argument("observable_from_pvm: need exactly 2 outcomes");
  return make_observable(p.projectors[0] - p.projectors[1]);
}

Pvm pvm_from_observable(const BinaryObservable& b) {
  CMat id = CMat::Identity(b.dim(), b.dim());
  return make_pvm({(id + b.m) / 2.0, (id - b.m) / 2.0});
}

std::vector<std::pair<int, CVec>> measure_branches(const CVec& psi, const Pvm& p) {
  if (psi.size() != p.dim()) throw std::invalid_argument("measure_branches: dimension mismatch");
  std::vector<std::pair<int, CVec>> out;
  out.reserve(p.outcomes());
  for (int k = 0; k < p.outcomes(); ++k) out.emplace_back(k, p.projectors[k] * psi);
  return out;
}

double expect(const CVec& psi, const CMat& o) {
  if (psi.size() != o.rows() || o.rows() != o.cols())
    throw std::invalid_argument("expect: dimension mismatch");
  if (!is_hermitian(o)) throw std::invalid_argument("expect: non-Hermitian operator");
  std::complex<double> val = psi.dot(o * psi);  // Eigen's dot conjugates the left argument
  if (std::abs(val.imag()) > 1e-9) throw std::runtime_error("expect: imaginary part above 1e-9");
  return val.real();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec apply_alice(const CMat& a, const CVec& psi, int da, int db) {
  if (psi.size() != static_cast<Eigen::Index>(da) * db || a.rows() != da || a.cols() != da)
    throw std::invalid_argument("apply_alice: dimension mismatch");
  using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(psi.data(), da, db);
  RowMat res = a * m;
  return Eigen::Map<const CVec>(res.data(), psi.size());
}

CVec apply_bob(const CMat& b, const CVec& psi, int da, int db) {
  if (psi.size() != static_cast<Eigen::Index>(da) * db || b.rows() != db || b.cols() != db)
    throw std::invalid_argument("apply_bob: dimension mismatch");
  using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(psi.data(), da, db);
  RowMat res = m * b.transpose();
  return Eigen::Map<const CVec>(res.data(), psi.size());
}

}  // namespace qxor
