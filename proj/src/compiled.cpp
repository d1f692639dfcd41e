#include "qxor/compiled.hpp"

#include <cmath>
#include <stdexcept>

namespace qxor {

MockQhe::MockQhe(int num_tags) : num_tags_(num_tags) {
  if (num_tags < 1) throw std::invalid_argument("MockQhe: need at least one ciphertext tag");
}

Ciphertext MockQhe::enc(std::uint64_t, int x, int tag) const {
  if (tag < 0 || tag >= num_tags_) throw std::invalid_argument("MockQhe: tag out of range");
  return {x, tag};
}

std::vector<Ciphertext> MockQhe::enc_support(std::uint64_t key, int x) const {
  std::vector<Ciphertext> out;
  out.reserve(num_tags_);
  for (int t = 0; t < num_tags_; ++t) out.push_back(enc(key, x, t));
  return out;
}

Ciphertext MockQhe::eval(const std::function<int(int)>& circuit, const Ciphertext& c) const {
  return {circuit(c.plain), c.tag};
}

BinaryObservable CompiledStrategy::bob_observable(int y) const {
  if (ob() != 2) throw std::invalid_argument("bob_observable: Bob answers are not bits");
  return make_observable(bob.at(y)[0] - bob.at(y)[1]);
}

void CompiledStrategy::validate(const MockQhe& qhe) const {
  if (psi.size() != dim) throw std::invalid_argument("compiled strategy: state dimension");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("compiled strategy: state not normalized");
  for (const auto& per_x : alice) {
    if (static_cast<int>(per_x.size()) != qhe.num_tags())
      throw std::invalid_argument("compiled strategy: one measurement per ciphertext expected");
    for (const auto& branches : per_x) {
      std::vector<CMat> projs;
      for (const auto& br : branches) {
        if (!is_unitary(br.unitary)) throw std::invalid_argument("compiled strategy: U not unitary");
        projs.push_back(br.proj);
      }
      make_pvm(std::move(projs));  // throws if not a valid PVM
    }
  }
  for (const auto& per_y : bob) make_pvm(per_y);
}

void for_each_branch(const CompiledStrategy& strat, const MockQhe& qhe, int x,
                     const std::function<void(double, int, const CVec&)>& fn) {
  double w = 1.0 / qhe.num_tags();
  for (int tag = 0; tag < qhe.num_tags(); ++tag)
    for (const auto& br : strat.alice.at(x).at(tag))
      fn(w, br.alpha, br.unitary * (br.proj * strat.psi));
}

CompiledReport run_compiled(const NonlocalGame& game, const CompiledStrategy& strat,
                            const MockQhe& qhe) {
  game.validate();
  strat.validate(qhe);
  if (strat.na() != game.na || strat.nb() != game.nb)
    throw std::invalid_argument("run_compiled: question alphabet mismatch");
  CompiledReport rep;
  rep.win_prob = Eigen::MatrixXd::Zero(game.na, game.nb);
  for (int x = 0; x < game.na; ++x) {
    for_each_branch(strat, qhe, x, [&](double w, int alpha, const CVec& branch) {
      int a = qhe.dec(0, {alpha, 0});
      if (a < 0 || a >= game.oa) return;  // invalid decrypted answer: loss
      for (int y = 0; y < game.nb; ++y) {
        for (int b = 0; b < static_cast<int>(strat.bob[y].size()) && b < game.ob; ++b) {
          if (!game.wins(x, y, a, b)) continue;
          rep.win_prob(x, y) += w * (strat.bob[y][b] * branch).squaredNorm();
        }
      }
    });
  }
  rep.value = (game.pi.array() * rep.win_prob.array()).sum();
  rep.bias = 2.0 * rep.value - 1.0;
  return rep;
}

CompiledReport run_compiled(const XorGame& game, const CompiledStrategy& strat,
                            const MockQhe& qhe) {
  return run_compiled(xor_to_nonlocal(game), strat, qhe);
}

CompiledStrategy honest_compile(const QuantumStrategy& ns, const MockQhe& qhe) {
  ns.validate();
  CompiledStrategy cs;
  cs.dim = ns.da * ns.db;
  cs.psi = ns.psi;
  CMat ida = CMat::Identity(ns.da, ns.da);
  CMat idb = CMat::Identity(ns.db, ns.db);
  CMat id = CMat::Identity(cs.dim, cs.dim);
  cs.alice.resize(ns.alice.size());
  for (std::size_t x = 0; x < ns.alice.size(); ++x) {
    std::vector<CompiledStrategy::AliceBranch> branches;
    for (int a = 0; a < ns.alice[x].outcomes(); ++a)
      branches.push_back({a, kron(ns.alice[x].projectors[a], idb), id});
    cs.alice[x].assign(qhe.num_tags(), branches);
  }
  for (const Pvm& p : ns.bob) {
    std::vector<CMat> per_y;
    for (const CMat& proj : p.projectors) per_y.push_back(kron(ida, proj));
    cs.bob.push_back(std::move(per_y));
  }
  return cs;
}

CompiledStrategy cheat_plaintext(const XorGame& game, const MockQhe& qhe) {
  game.validate();
  int na = game.na();
  CompiledStrategy cs;
  cs.dim = std::max(na, 2);
  cs.psi = CVec::Zero(cs.dim);
  cs.psi[0] = 1.0;
  CMat id = CMat::Identity(cs.dim, cs.dim);
  cs.alice.resize(na);
  for (int x = 0; x < na; ++x) {
    // Read x from the transparent ciphertext: record it in the register by a
    // swap permutation, then answer alpha = 0 deterministically.
    CMat u = id;
    u(0, 0) = u(x, x) = 0.0;
    u(0, x) = u(x, 0) = 1.0;
    cs.alice[x].assign(qhe.num_tags(), {{0, id, u}});
  }
  for (int y = 0; y < game.nb(); ++y) {
    CMat p0 = CMat::Zero(cs.dim, cs.dim), p1 = CMat::Zero(cs.dim, cs.dim);
    for (int k = 0; k < cs.dim; ++k) {
      int bit = k < na ? game.sign_bit(k, y) : 0;  // a=0, so b must equal g(x,y)
      (bit ? p1 : p0)(k, k) = 1.0;
    }
    cs.bob.push_back({p0, p1});
  }
  return cs;
}

PseudoExpectation pseudo_expectation(const XorGame& game, const CompiledStrategy& strat,
                                     const MockQhe& qhe) {
  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(game.na(), 1.0 / game.na());
  return pseudo_expectation(game, strat, qhe, uniform);
}

PseudoExpectation pseudo_expectation(const XorGame& game, const CompiledStrategy& strat,
                                     const MockQhe& qhe, const Eigen::VectorXd& x_dist) {
  game.validate();
  strat.validate(qhe);
  int na = game.na(), nb = game.nb();
  if (strat.na() != na || strat.nb() != nb)
    throw std::invalid_argument("pseudo_expectation: question alphabet mismatch");
  if (x_dist.size() != na || (x_dist.array() < 0.0).any() ||
      std::abs(x_dist.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("pseudo_expectation: bad question distribution");

  PseudoExpectation pe;
  pe.aa = Eigen::MatrixXd::Identity(na, na);
  pe.ab = Eigen::MatrixXd::Zero(na, nb);
  pe.bb = Eigen::MatrixXd::Zero(nb, nb);
  pe.a1 = Eigen::VectorXd::Zero(na);
  pe.b1 = Eigen::VectorXd::Zero(nb);

  std::vector<CMat> obs;
  for (int y = 0; y < nb; ++y) obs.push_back(strat.bob_observable(y).m);

  for (int x = 0; x < na; ++x) {
    for_each_branch(strat, qhe, x, [&](double w, int alpha, const CVec& branch) {
      double sign = (qhe.dec(0, {alpha, 0}) & 1) ? -1.0 : 1.0;
      pe.a1[x] += w * sign * branch.squaredNorm();
      std::vector<CVec> by(nb);
      for (int y = 0; y < nb; ++y) by[y] = obs[y] * branch;
      for (int y = 0; y < nb; ++y) {
        double corr = branch.dot(by[y]).real();
        pe.ab(x, y) += w * sign * corr;
        pe.b1[y] += w * x_dist[x] * corr;
        for (int v = 0; v < nb; ++v)
          pe.bb(y, v) += w * x_dist[x] * by[y].dot(by[v]).real();
      }
    });
  }
  return pe;
}

double pe_apply(const PseudoExpectation& pe, const NcPolynomial& p) {
  double out = 0.0;
  for (const auto& [w, c] : p.terms()) {
    if (w.degree() > 2) throw std::invalid_argument("pe_apply: word of degree above 2");
    double val = 0.0;
    if (w.empty()) {
      val = 1.0;
    } else if (w.a_part.size() == 2) {
      val = pe.aa(w.a_part[0], w.a_part[1]);
    } else if (w.a_part.size() == 1 && w.b_part.size() == 1) {
      val = pe.ab(w.a_part[0], w.b_part[0]);
    } else if (w.b_part.size() == 2) {
      val = pe.bb(w.b_part[0], w.b_part[1]);
    } else if (w.a_part.size() == 1) {
      val = pe.a1[w.a_part[0]];
    } else {
      val = pe.b1[w.b_part[0]];
    }
    out += c * val;
  }
  return out;
}

}  // namespace qxor
