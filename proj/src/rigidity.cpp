#include "qxor/rigidity.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace qxor {

namespace {

constexpr double kRowThreshold = 1e-10;
constexpr double kSlack = 1e-9;  // absolute slack on bound checks at eps = 0

CMat row_operator(const XorGame& game, const CompiledStrategy& strat, int x) {
  CMat row = CMat::Zero(strat.dim, strat.dim);
  for (int y = 0; y < game.nb(); ++y) {
    if (game.cost(x, y) == 0.0) continue;
    row += game.cost(x, y) * (strat.bob[y][0] - strat.bob[y][1]);
  }
  return row;
}

void check_question(const XorGame& game, const CompiledStrategy& strat, int x) {
  if (x < 0 || x >= game.na()) throw std::invalid_argument("question out of range");
  if (strat.na() != game.na() || strat.nb() != game.nb() || strat.ob() != 2)
    throw std::invalid_argument("strategy does not fit the XOR game");
}

double branch_norm_sq(const CompiledStrategy& strat, const MockQhe& qhe, int x,
                      const CMat& op) {
  double total = 0.0;
  for_each_branch(strat, qhe, x, [&](double w, int, const CVec& psi) {
    total += w * (op * psi).squaredNorm();
  });
  return total;
}

CMat seeded_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat r(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) r(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  CMat h = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top < 1e-12) return CMat::Identity(dim, dim);
  return h / top;
}

CMat unitary_exp(const CMat& h, double theta) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec phases(h.rows());
  for (int i = 0; i < h.rows(); ++i)
    phases[i] = std::exp(std::complex<double>(0.0, theta * es.eigenvalues()[i]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double selftest_row_residual(const XorGame& game, const CompiledStrategy& strat,
                             const MockQhe& qhe, const DualBiases& duals, int x) {
  check_question(game, strat, x);
  const double rx = duals.r[x];
  if (rx < kRowThreshold)
    throw std::runtime_error("selftest_row_residual: row bias below threshold");
  CMat row = row_operator(game, strat, x);
  double residual = 0.0;
  for_each_branch(strat, qhe, x, [&](double w, int alpha, const CVec& psi) {
    const double sign = (alpha & 1) ? -1.0 : 1.0;
    residual += w * (rx * psi - sign * (row * psi)).squaredNorm();
  });
  return residual;
}

double selftest_solution_algebra(const XorGame& game, const CompiledStrategy& strat,
                                 const MockQhe& qhe, const DualBiases& duals, int x) {
  check_question(game, strat, x);
  const double rx = duals.r[x];
  if (rx < kRowThreshold)
    throw std::runtime_error("selftest_solution_algebra: row bias below threshold");
  CMat row = row_operator(game, strat, x);
  CMat op = rx * rx * CMat::Identity(strat.dim, strat.dim) - row * row;
  return branch_norm_sq(strat, qhe, x, op);
}

double anticommutator_residual(const CompiledStrategy& strat, const MockQhe& qhe,
                               int x, int j, int k) {
  if (strat.ob() != 2)
    throw std::invalid_argument("anticommutator_residual: Bob answers are not binary");
  if (j < 0 || j >= strat.nb() || k < 0 || k >= strat.nb() || x < 0 || x >= strat.na())
    throw std::invalid_argument("anticommutator_residual: index out of range");
  CMat bj = strat.bob[j][0] - strat.bob[j][1];
  CMat bk = strat.bob[k][0] - strat.bob[k][1];
  return branch_norm_sq(strat, qhe, x, bj * bk + bk * bj);
}

std::pair<double, double> jensen_check(const XorGame& game, const CompiledStrategy& strat,
                                       const MockQhe& qhe, int x) {
  check_question(game, strat, x);
  CMat row = row_operator(game, strat, x);
  double signed_sum = 0.0, square_sum = 0.0;
  for_each_branch(strat, qhe, x, [&](double w, int alpha, const CVec& psi) {
    const double sign = (alpha & 1) ? -1.0 : 1.0;
    CVec rp = row * psi;
    signed_sum += w * sign * psi.dot(rp).real();
    square_sum += w * rp.squaredNorm();
  });
  return {signed_sum * signed_sum, square_sum};
}

SelfTestReport selftest_report(const XorGame& game, const CompiledStrategy& strat,
                               const MockQhe& qhe, const DualBiases& duals,
                               double beta_star) {
  game.validate();
  strat.validate(qhe);
  if (strat.na() != game.na() || strat.nb() != game.nb() || strat.ob() != 2)
    throw std::invalid_argument("selftest_report: strategy does not fit the XOR game");

  SelfTestReport rep;
  rep.beta_star = beta_star;
  rep.value = run_compiled(game, strat, qhe).value;
  rep.epsilon = std::max(0.0, 0.5 * (1.0 + beta_star) - rep.value);
  rep.eps_prime = 2.0 * rep.epsilon;

  const int na = game.na(), nb = game.nb();
  const double shared = (na + nb) * beta_star + 1.0;
  rep.row_bound = 2.0 * shared * rep.eps_prime;
  rep.row_residual.resize(na);
  rep.algebra_residual.resize(na);
  rep.algebra_bound.resize(na);
  rep.jensen_lhs.resize(na);
  rep.jensen_rhs.resize(na);

  bool ok = true;
  for (int x = 0; x < na; ++x) {
    const double rx = duals.r[x];
    CMat row = row_operator(game, strat, x);
    double res_row = 0.0, signed_sum = 0.0, square_sum = 0.0;
    CMat op = rx * rx * CMat::Identity(strat.dim, strat.dim) - row * row;
    double res_alg = 0.0;
    for_each_branch(strat, qhe, x, [&](double w, int alpha, const CVec& psi) {
      const double sign = (alpha & 1) ? -1.0 : 1.0;
      CVec rp = row * psi;
      res_row += w * (rx * psi - sign * rp).squaredNorm();
      res_alg += w * (op * psi).squaredNorm();
      signed_sum += w * sign * psi.dot(rp).real();
      square_sum += w * rp.squaredNorm();
    });
    rep.row_residual[x] = res_row;
    rep.algebra_residual[x] = res_alg;
    const double row_weight = game.cost.row(x).cwiseAbs().sum();
    rep.algebra_bound[x] = 4.0 * shared * (rx + row_weight * row_weight) * rep.eps_prime;
    rep.jensen_lhs[x] = signed_sum * signed_sum;
    rep.jensen_rhs[x] = square_sum;
    ok = ok && res_row <= rep.row_bound + kSlack &&
         res_alg <= rep.algebra_bound[x] + kSlack &&
         rep.jensen_lhs[x] <= rep.jensen_rhs[x] + 1e-12;
  }
  rep.pass = ok;
  return rep;
}

Eigen::VectorXd vector_row_residuals(const XorGame& game, const VectorStrategy& vs,
                                     const DualBiases& duals) {
  vs.validate();
  if (vs.u.rows() != game.na() || vs.v.rows() != game.nb())
    throw std::invalid_argument("vector_row_residuals: strategy does not fit the game");
  Eigen::MatrixXd gv = game.cost * vs.v;
  Eigen::VectorXd out(game.na());
  for (int x = 0; x < game.na(); ++x) {
    const double dev = duals.r[x] - vs.u.row(x).dot(gv.row(x));
    out[x] = dev * dev;
  }
  return out;
}

QuantumStrategy perturb_bob(const QuantumStrategy& qs, int y, double theta,
                            std::uint64_t seed) {
  if (y < 0 || y >= static_cast<int>(qs.bob.size()))
    throw std::invalid_argument("perturb_bob: question out of range");
  CMat u = unitary_exp(seeded_hermitian(qs.db, seed), theta);
  QuantumStrategy out = qs;
  std::vector<CMat> projs;
  for (const CMat& p : qs.bob[y].projectors) projs.push_back(u * p * u.adjoint());
  out.bob[y] = make_pvm(std::move(projs));
  return out;
}

VectorStrategy perturb_vectors(const VectorStrategy& vs, double theta,
                               std::uint64_t seed) {
  VectorStrategy out = vs;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v0 = vs.v.row(0);
  Eigen::VectorXd w(v0.size());
  Eigen::VectorXd perp;
  do {
    for (int i = 0; i < w.size(); ++i) w[i] = gauss(rng);
    perp = w - w.dot(v0) * v0;
  } while (perp.norm() < 1e-9);
  perp.normalize();
  out.v.row(0) = std::cos(theta) * v0 + std::sin(theta) * perp;
  return out;
}

const int kMagicEquations[6][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8},
                                   {0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
const int kMagicRhs[6] = {0, 0, 0, 0, 0, 1};

NonlocalGame magic_square_game() {
  NonlocalGame g;
  g.na = 6;
  g.nb = 9;
  g.oa = 8;
  g.ob = 2;
  g.pi = Eigen::MatrixXd::Zero(6, 9);
  g.win.assign(std::size_t(6) * 9 * 8 * 2, 0);
  for (int i = 0; i < 6; ++i) {
    for (int pos = 0; pos < 3; ++pos) {
      const int j = kMagicEquations[i][pos];
      g.pi(i, j) = 1.0 / 18.0;
      for (int a = 0; a < 8; ++a) {
        const int a0 = (a >> 2) & 1, a1 = (a >> 1) & 1, a2 = a & 1;
        if ((a0 ^ a1 ^ a2) != kMagicRhs[i]) continue;  // equation violated: lose
        const int aj = (a >> (2 - pos)) & 1;
        g.wins(i, j, a, aj) = 1;
      }
    }
  }
  g.validate();
  return g;
}

QuantumStrategy magic_square_perfect_strategy() {
  CMat id = CMat::Identity(2, 2), x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  z << 1, 0, 0, -1;
  const CMat table[9] = {kron(z, id), kron(id, z), kron(z, z),
                         kron(id, x), kron(x, id), kron(x, x),
                         kron(z, x),  kron(x, z),  kron(y, y)};

  QuantumStrategy qs;
  qs.da = 4;
  qs.db = 4;
  qs.psi = maximally_entangled(4).amps;
  for (int i = 0; i < 6; ++i) {
    std::vector<CMat> projs(8);
    for (int a = 0; a < 8; ++a) {
      CMat p = CMat::Identity(4, 4);
      for (int pos = 0; pos < 3; ++pos) {
        const double sign = ((a >> (2 - pos)) & 1) ? -1.0 : 1.0;
        // Alice plays the transposed assignment so the maximally entangled
        // state correlates her outcomes perfectly with Bob's.
        p = p * 0.5 *
            (CMat::Identity(4, 4) + sign * table[kMagicEquations[i][pos]].transpose());
      }
      projs[a] = std::move(p);
    }
    qs.alice.push_back(make_pvm(std::move(projs)));
  }
  for (int j = 0; j < 9; ++j)
    qs.bob.push_back(pvm_from_observable(make_observable(table[j])));
  qs.validate();
  return qs;
}

double anticommutator_norm(const CompiledStrategy& strat, int j, int k) {
  if (strat.ob() != 2)
    throw std::invalid_argument("anticommutator_norm: Bob answers are not binary");
  CMat bj = strat.bob[j][0] - strat.bob[j][1];
  CMat bk = strat.bob[k][0] - strat.bob[k][1];
  Eigen::SelfAdjointEigenSolver<CMat> es(bj * bk + bk * bj);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

MagicReport magic_anticommutator(const CompiledStrategy& strat, const MockQhe& qhe,
                                 int i, int j, int k) {
  if (strat.na() != 6 || strat.nb() != 9 || strat.ob() != 2)
    throw std::invalid_argument("magic_anticommutator: not a magic square strategy");
  if (i < 0 || i >= 6 || j < 0 || j >= 9 || k < 0 || k >= 9)
    throw std::invalid_argument("magic_anticommutator: index out of range");
  for (const auto& tags : strat.alice)
    for (const auto& branches : tags)
      for (const auto& br : branches)
        if (br.alpha < 0 || br.alpha >= 8)
          throw std::invalid_argument("magic_anticommutator: answer outside 3 bits");

  std::vector<CMat> b(9);
  for (int t = 0; t < 9; ++t) b[t] = strat.bob[t][0] - strat.bob[t][1];

  MagicReport rep;
  rep.value = run_compiled(magic_square_game(), strat, qhe).value;
  rep.epsilon = std::max(0.0, 1.0 - rep.value);
  rep.bound = 17280.0 * rep.epsilon;
  rep.residual = branch_norm_sq(strat, qhe, i, b[j] * b[k] + b[k] * b[j]);

  // Projector identity ||(B_t - (-1)^{a_t}) psi|| = 2 ||B_{t, a_t xor 1} psi||,
  // exact for every branch; checked over all equations and variable slots.
  double ident = 0.0;
  for (int e = 0; e < 6; ++e) {
    for_each_branch(strat, qhe, e, [&](double, int alpha, const CVec& psi) {
      for (int pos = 0; pos < 3; ++pos) {
        const int t = kMagicEquations[e][pos];
        const int at = (alpha >> (2 - pos)) & 1;
        const double sign = at ? -1.0 : 1.0;
        const double lhs = (b[t] * psi - sign * psi).squaredNorm();
        const double rhs = 4.0 * (strat.bob[t][at ^ 1] * psi).squaredNorm();
        ident = std::max(ident, std::abs(lhs - rhs));
      }
    });
  }
  rep.identity_residual = ident;

  std::vector<CMat> triple(6);
  rep.triple_residual.resize(6);
  for (int e = 0; e < 6; ++e) {
    const int* s = kMagicEquations[e];
    const double de = kMagicRhs[e] ? -1.0 : 1.0;
    triple[e] = b[s[0]] * b[s[1]] - de * b[s[2]];
    rep.triple_residual[e] = branch_norm_sq(strat, qhe, e, triple[e]);
  }
  rep.triple_bound = 216.0 * rep.epsilon;

  double shifted = 0.0;
  for (int e = 0; e < 6; ++e)
    for (int q = 0; q < 6; ++q)
      for (int pos = 0; pos < 3; ++pos) {
        const int t = kMagicEquations[q][pos];
        shifted = std::max(shifted, branch_norm_sq(strat, qhe, q, triple[e] * b[t]));
      }
  rep.shifted_residual = shifted;
  rep.shifted_bound_printed = 32.0 * rep.epsilon;
  rep.shifted_bound_proof = 576.0 * rep.epsilon;

  double exchange = 0.0;
  for (int e = 0; e < 6; ++e)
    for (int f = 0; f < 6; ++f) {
      const int* s = kMagicEquations[e];
      const int* t = kMagicEquations[f];
      const double sign = ((kMagicRhs[e] + kMagicRhs[f]) & 1) ? -1.0 : 1.0;
      CMat op = b[s[0]] * b[t[0]] - sign * b[s[1]] * b[s[2]] * b[t[1]] * b[t[2]];
      exchange = std::max(exchange, branch_norm_sq(strat, qhe, f, op));
    }
  rep.exchange_residual = exchange;
  rep.exchange_bound = 1584.0 * rep.epsilon;

  rep.pass = rep.residual <= rep.bound + kSlack && rep.identity_residual <= 1e-12 &&
             rep.triple_residual.maxCoeff() <= rep.triple_bound + kSlack &&
             rep.shifted_residual <= rep.shifted_bound_proof + kSlack &&
             rep.exchange_residual <= rep.exchange_bound + kSlack;
  return rep;
}

}  // namespace qxor
