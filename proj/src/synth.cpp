#include "qxor/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace qxor {

BinaryObservable QuantumStrategy::alice_observable(int x) const {
  return observable_from_pvm(alice.at(x));
}

BinaryObservable QuantumStrategy::bob_observable(int y) const {
  return observable_from_pvm(bob.at(y));
}

void QuantumStrategy::validate() const {
  if (psi.size() != static_cast<Eigen::Index>(da) * db)
    throw std::invalid_argument("strategy: state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("strategy: state not normalized");
  for (const Pvm& p : alice)
    if (p.dim() != da) throw std::invalid_argument("strategy: Alice PVM dimension mismatch");
  for (const Pvm& p : bob)
    if (p.dim() != db) throw std::invalid_argument("strategy: Bob PVM dimension mismatch");
}

QuantumStrategy strategy_from_observables(CVec psi, int da, int db,
                                          const std::vector<CMat>& alice_obs,
                                          const std::vector<CMat>& bob_obs) {
  QuantumStrategy qs;
  qs.da = da;
  qs.db = db;
  qs.psi = std::move(psi);
  for (const CMat& a : alice_obs) qs.alice.push_back(pvm_from_observable(make_observable(a)));
  for (const CMat& b : bob_obs) qs.bob.push_back(pvm_from_observable(make_observable(b)));
  qs.validate();
  return qs;
}

std::vector<BinaryObservable> clifford_generators(int d) {
  if (d < 1 || d > 8) throw std::invalid_argument("clifford_generators: d out of range");
  int qubits = (d + 1) / 2;
  CMat x(2, 2), y(2, 2), z(2, 2), id2 = CMat::Identity(2, 2);
  x << 0, 1, 1, 0;
  y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  z << 1, 0, 0, -1;

  std::vector<BinaryObservable> gammas;
  for (int i = 0; i < d; ++i) {
    int pos = i / 2;
    CMat g = CMat::Identity(1, 1);
    for (int q = 0; q < qubits; ++q) {
      const CMat& factor = q < pos ? z : (q == pos ? (i % 2 == 0 ? x : y) : id2);
      g = kron(g, factor);
    }
    gammas.push_back(make_observable(std::move(g)));
  }
  return gammas;
}

VectorStrategy reduce_rank(const VectorStrategy& vs, double cutoff) {
  int na = static_cast<int>(vs.u.rows());
  int nb = static_cast<int>(vs.v.rows());
  Eigen::MatrixXd w(na + nb, vs.dim());
  w.topRows(na) = vs.u;
  w.bottomRows(nb) = vs.v;
  Eigen::MatrixXd gram = w * w.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > cutoff) ++rank;
  Eigen::MatrixXd coords(na + nb, rank);
  int col = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] <= cutoff) continue;
    coords.col(col++) = es.eigenvectors().col(i) * std::sqrt(es.eigenvalues()[i]);
  }
  VectorStrategy out;
  out.u = coords.topRows(na);
  out.v = coords.bottomRows(nb);
  return out;
}

QuantumStrategy strategy_from_vectors(const VectorStrategy& vs) {
  vs.validate();
  VectorStrategy red = reduce_rank(vs);
  int d = red.dim();
  if (d > 8) throw std::runtime_error("strategy_from_vectors: rank reduction above dimension 8");
  if (d == 0) throw std::invalid_argument("strategy_from_vectors: empty strategy");

  std::vector<BinaryObservable> gammas = clifford_generators(d);
  Eigen::Index dim = gammas[0].m.rows();

  std::vector<CMat> alice_obs, bob_obs;
  for (Eigen::Index x = 0; x < red.u.rows(); ++x) {
    CMat a = CMat::Zero(dim, dim);
    for (int i = 0; i < d; ++i) a += red.u(x, i) * gammas[i].m;
    alice_obs.push_back(std::move(a));
  }
  for (Eigen::Index y = 0; y < red.v.rows(); ++y) {
    // Entrywise conjugates on Bob's side so the maximally entangled state
    // gives <psi|A (x) B|psi> = tr(A B^T)/dim = <u, v>.
    CMat b = CMat::Zero(dim, dim);
    for (int i = 0; i < d; ++i) b += red.v(y, i) * gammas[i].m.conjugate();
    bob_obs.push_back(std::move(b));
  }
  return strategy_from_observables(maximally_entangled(static_cast<int>(dim)).amps,
                                   static_cast<int>(dim), static_cast<int>(dim), alice_obs,
                                   bob_obs);
}

VectorStrategy vectors_from_second_moments(const XorGame& game, const Eigen::MatrixXd& v) {
  game.validate();
  int nb = game.nb();
  if (v.rows() != nb || v.cols() != nb)
    throw std::invalid_argument("vectors_from_second_moments: shape mismatch");
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("vectors_from_second_moments: V not symmetric");
  for (int y = 0; y < nb; ++y)
    if (std::abs(v(y, y) - 1.0) > 1e-9)
      throw std::invalid_argument("vectors_from_second_moments: V diagonal not 1");
  Eigen::MatrixXd vs = (v + v.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vs);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("vectors_from_second_moments: V not PSD");

  VectorStrategy out;
  out.v.resize(nb, nb);
  for (int i = 0; i < nb; ++i)
    out.v.col(i) = es.eigenvectors().col(i) * std::sqrt(std::max(0.0, es.eigenvalues()[i]));
  out.u.resize(game.na(), nb);
  for (int x = 0; x < game.na(); ++x) {
    Eigen::VectorXd g = (game.cost.row(x) * out.v).transpose();
    double n = g.norm();
    if (n < kDegenerateRow) {
      out.u.row(x).setZero();
      out.u(x, 0) = 1.0;
    } else {
      out.u.row(x) = g.transpose() / n;
    }
  }
  return out;
}

Eigen::VectorXd check_optimal_state_relation(const XorGame& game, const QuantumStrategy& qs,
                                             const DualBiases& duals) {
  qs.validate();
  Eigen::VectorXd res(game.na());
  for (int x = 0; x < game.na(); ++x) {
    if (duals.r[x] < 1e-10)
      throw std::invalid_argument("check_optimal_state_relation: r_x below threshold");
    CVec lhs = apply_alice(qs.alice_observable(x).m, qs.psi, qs.da, qs.db);
    CVec rhs = CVec::Zero(qs.psi.size());
    for (int y = 0; y < game.nb(); ++y)
      rhs += game.cost(x, y) * apply_bob(qs.bob_observable(y).m, qs.psi, qs.da, qs.db);
    res[x] = (lhs - rhs / duals.r[x]).norm();
  }
  return res;
}

double quantum_bias(const XorGame& game, const QuantumStrategy& qs) {
  qs.validate();
  double bias = 0.0;
  for (int x = 0; x < game.na(); ++x) {
    CVec ax = apply_alice(qs.alice_observable(x).m, qs.psi, qs.da, qs.db);
    for (int y = 0; y < game.nb(); ++y) {
      if (game.cost(x, y) == 0.0) continue;
      CVec by = apply_bob(qs.bob_observable(y).m, qs.psi, qs.da, qs.db);
      std::complex<double> corr = ax.dot(by);  // <psi|A_x B_y|psi>, A,B Hermitian
      bias += game.cost(x, y) * corr.real();
    }
  }
  return bias;
}

double game_value(const NonlocalGame& game, const QuantumStrategy& qs) {
  game.validate();
  qs.validate();
  if (static_cast<int>(qs.alice.size()) != game.na || static_cast<int>(qs.bob.size()) != game.nb)
    throw std::invalid_argument("game_value: question alphabet mismatch");
  double value = 0.0;
  for (int x = 0; x < game.na; ++x) {
    for (int y = 0; y < game.nb; ++y) {
      if (game.pi(x, y) == 0.0) continue;
      for (int a = 0; a < qs.alice[x].outcomes() && a < game.oa; ++a) {
        CVec branch = apply_alice(qs.alice[x].projectors[a], qs.psi, qs.da, qs.db);
        for (int b = 0; b < qs.bob[y].outcomes() && b < game.ob; ++b) {
          if (!game.wins(x, y, a, b)) continue;
          CVec both = apply_bob(qs.bob[y].projectors[b], branch, qs.da, qs.db);
          value += game.pi(x, y) * both.squaredNorm();
        }
      }
    }
  }
  return value;
}

}  // namespace qxor
