#include "qxor/game.hpp"

#include <cmath>
#include <stdexcept>

namespace qxor {

namespace {

constexpr double kMassTol = 1e-12;

// Saturating power, avoids overflow for cap comparisons.
std::uint64_t sat_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (UINT64_MAX >> 8) / (base ? base : 1)) return UINT64_MAX;
    r *= base;
  }
  return r;
}

}  // namespace

void NonlocalGame::validate() const {
  if (na <= 0 || nb <= 0 || oa <= 0 || ob <= 0)
    throw std::invalid_argument("game: empty alphabet");
  if (pi.rows() != na || pi.cols() != nb)
    throw std::invalid_argument("game: pi shape mismatch");
  if (win.size() != static_cast<std::size_t>(na) * nb * oa * ob)
    throw std::invalid_argument("game: predicate table size mismatch");
  if ((pi.array() < 0.0).any())
    throw std::invalid_argument("game: negative pi entry");
  if (std::abs(pi.sum() - 1.0) > kMassTol)
    throw std::invalid_argument("game: pi does not sum to 1");
  for (std::uint8_t v : win)
    if (v > 1) throw std::invalid_argument("game: predicate entry not in {0,1}");
}

void XorGame::validate() const {
  if (cost.size() == 0) throw std::invalid_argument("xor game: empty cost matrix");
  if (std::abs(cost.array().abs().sum() - 1.0) > kMassTol)
    throw std::invalid_argument("xor game: |G| does not sum to 1");
}

XorGame make_xor_game(const Eigen::MatrixXi& g_table, const Eigen::MatrixXd& pi) {
  if (g_table.rows() != pi.rows() || g_table.cols() != pi.cols())
    throw std::invalid_argument("make_xor_game: shape mismatch");
  if ((pi.array() < 0.0).any())
    throw std::invalid_argument("make_xor_game: negative pi entry");
  double mass = pi.sum();
  if (std::abs(mass - 1.0) > kMassTol)
    throw std::invalid_argument("make_xor_game: pi does not sum to 1");
  XorGame g;
  g.cost = pi / mass;  // renormalize exactly once
  for (Eigen::Index x = 0; x < pi.rows(); ++x)
    for (Eigen::Index y = 0; y < pi.cols(); ++y) {
      int bit = g_table(x, y);
      if (bit != 0 && bit != 1)
        throw std::invalid_argument("make_xor_game: g entry not a bit");
      if (bit) g.cost(x, y) = -g.cost(x, y);
    }
  return g;
}

XorGame xor_game_from_cost(const Eigen::MatrixXd& cost) {
  XorGame g;
  g.cost = cost;
  g.validate();
  g.cost /= cost.array().abs().sum();
  return g;
}

NonlocalGame xor_to_nonlocal(const XorGame& game) {
  game.validate();
  NonlocalGame n;
  n.na = game.na();
  n.nb = game.nb();
  n.oa = n.ob = 2;
  n.pi.resize(n.na, n.nb);
  n.win.assign(static_cast<std::size_t>(n.na) * n.nb * 4, 0);
  for (int x = 0; x < n.na; ++x)
    for (int y = 0; y < n.nb; ++y) {
      n.pi(x, y) = game.pi(x, y);
      int g = game.sign_bit(x, y);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) n.wins(x, y, a, b) = ((a ^ b) == g) ? 1 : 0;
    }
  return n;
}

// Enumerates the smaller strategy space; the other player's best reply
// factorizes over questions, so the maximum over the big side is exact.
double classical_value(const NonlocalGame& game, std::uint64_t cap) {
  game.validate();
  std::uint64_t a_count = sat_pow(game.oa, game.na);
  std::uint64_t b_count = sat_pow(game.ob, game.nb);
  bool enumerate_bob = b_count <= a_count;
  std::uint64_t outer = enumerate_bob ? b_count : a_count;
  std::uint64_t per_cost = enumerate_bob
      ? static_cast<std::uint64_t>(game.na) * game.oa * game.nb
      : static_cast<std::uint64_t>(game.nb) * game.ob * game.na;
  if (outer > cap / std::max<std::uint64_t>(per_cost, 1))
    throw std::invalid_argument("classical_value: enumeration cap exceeded");

  std::vector<int> assign(enumerate_bob ? game.nb : game.na, 0);
  int radix = enumerate_bob ? game.ob : game.oa;
  double best = 0.0;
  for (;;) {
    double total = 0.0;
    if (enumerate_bob) {
      for (int x = 0; x < game.na; ++x) {
        double bx = 0.0;
        for (int a = 0; a < game.oa; ++a) {
          double s = 0.0;
          for (int y = 0; y < game.nb; ++y)
            if (game.wins(x, y, a, assign[y])) s += game.pi(x, y);
          bx = std::max(bx, s);
        }
        total += bx;
      }
    } else {
      for (int y = 0; y < game.nb; ++y) {
        double by = 0.0;
        for (int b = 0; b < game.ob; ++b) {
          double s = 0.0;
          for (int x = 0; x < game.na; ++x)
            if (game.wins(x, y, assign[x], b)) s += game.pi(x, y);
          by = std::max(by, s);
        }
        total += by;
      }
    }
    best = std::max(best, total);
    // next assignment in mixed radix
    std::size_t pos = 0;
    while (pos < assign.size() && ++assign[pos] == radix) assign[pos++] = 0;
    if (pos == assign.size()) break;
  }
  return best;
}

double classical_bias(const XorGame& game, std::uint64_t cap) {
  game.validate();
  // bias = max over sign vectors t of ||G t||_1 (Alice's best sign reply is
  // row-wise absolute value).
  bool enumerate_bob = game.nb() <= game.na();
  Eigen::MatrixXd G = game.cost;
  if (!enumerate_bob) G = game.cost.transpose();
  int n = static_cast<int>(G.cols());
  if (n >= 63 || (sat_pow(2, n) > cap / std::max(1, static_cast<int>(G.rows()) * n)))
    throw std::invalid_argument("classical_bias: enumeration cap exceeded");
  double best = -1.0;
  Eigen::VectorXd t(n);
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    for (int y = 0; y < n; ++y) t[y] = (mask >> y) & 1 ? -1.0 : 1.0;
    best = std::max(best, (G * t).array().abs().sum());
  }
  return best;
}

double classical_value(const XorGame& game, std::uint64_t cap) {
  return value_of_bias(classical_bias(game, cap));
}

double bias_of_value(double v) {
  if (v < -1e-12 || v > 1.0 + 1e-12)
    throw std::invalid_argument("bias_of_value: value outside [0,1]");
  return 2.0 * v - 1.0;
}

double value_of_bias(double b) {
  if (b < -1.0 - 1e-12 || b > 1.0 + 1e-12)
    throw std::invalid_argument("value_of_bias: bias outside [-1,1]");
  return (1.0 + b) / 2.0;
}

XorGame chsh() {
  Eigen::MatrixXd cost(2, 2);
  cost << 0.25, 0.25, 0.25, -0.25;
  XorGame g;
  g.cost = cost;
  return g;
}

}  // namespace qxor
