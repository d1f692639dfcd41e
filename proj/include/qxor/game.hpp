#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace qxor {

// Two-player one-round game: question distribution pi over I_A x I_B plus a
// {0,1} win predicate V(x,y,a,b).
struct NonlocalGame {
  int na = 0, nb = 0;  // question alphabet sizes
  int oa = 0, ob = 0;  // answer alphabet sizes
  Eigen::MatrixXd pi;  // na x nb, entries >= 0, sums to 1
  std::vector<std::uint8_t> win;  // layout ((x*nb + y)*oa + a)*ob + b

  std::uint8_t wins(int x, int y, int a, int b) const {
    return win[static_cast<std::size_t>(((x * nb + y) * oa + a)) * ob + b];
  }
  std::uint8_t& wins(int x, int y, int a, int b) {
    return win[static_cast<std::size_t>(((x * nb + y) * oa + a)) * ob + b];
  }
  void validate() const;
};

// XOR game, fully described by the signed cost matrix G_xy = (-1)^g(x,y) pi(x,y).
// Invariant: sum |G_xy| = 1 (signed distribution).
struct XorGame {
  Eigen::MatrixXd cost;

  int na() const { return static_cast<int>(cost.rows()); }
  int nb() const { return static_cast<int>(cost.cols()); }
  // g(x,y): sign bit; question pairs with pi = 0 are canonicalized to g = 0.
  int sign_bit(int x, int y) const { return cost(x, y) < 0.0 ? 1 : 0; }
  double pi(int x, int y) const { return std::abs(cost(x, y)); }
  void validate() const;
};

// Builds G = (-1)^g pi. pi is validated to sum to 1 within 1e-12 and then
// renormalized exactly once.
XorGame make_xor_game(const Eigen::MatrixXi& g_table, const Eigen::MatrixXd& pi);

// Wraps a raw cost matrix (validates unit l1 mass, renormalizes once).
XorGame xor_game_from_cost(const Eigen::MatrixXd& cost);

NonlocalGame xor_to_nonlocal(const XorGame& game);

// Exact brute force over deterministic strategies. Enumerates the smaller
// side's strategy space and picks the other side's best reply per question;
// cap bounds the enumeration work (strategies tried x per-strategy cost).
double classical_value(const NonlocalGame& game, std::uint64_t cap = (1ull << 24));
double classical_value(const XorGame& game, std::uint64_t cap = (1ull << 24));
double classical_bias(const XorGame& game, std::uint64_t cap = (1ull << 24));

double bias_of_value(double v);
double value_of_bias(double b);

XorGame chsh();

}  // namespace qxor
