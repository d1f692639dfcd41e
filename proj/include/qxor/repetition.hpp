#pragma once

#include <vector>

#include "qxor/compiled.hpp"
#include "qxor/game.hpp"
#include "qxor/synth.hpp"

namespace qxor {

// Tuple question/answer encodings are mixed-radix with factor 0 outermost,
// matching the Kronecker-product index convention of xor_sum.
NonlocalGame parallel_and(const std::vector<XorGame>& games);

// Kronecker product of the cost matrices over the subset M (bitmask over
// factors). The empty subset returns the trivial game G = [[1]] so the
// decomposition sum ranges over all subsets uniformly.
XorGame xor_sum(const std::vector<XorGame>& games, unsigned subset_mask);
XorGame xor_sum(const std::vector<XorGame>& games, const std::vector<int>& subset);

struct DecompositionReport {
  double value = 0.0;                // omega(S, AND of the games)
  std::vector<double> subset_bias;   // beta(S_M, XOR-sum), indexed by bitmask
  double identity_residual = 0.0;    // |value - 2^-n sum_M beta_M|
};

// Verifies omega(S, AND) = 2^-n sum_M beta(S_M, +_M) where S_M answers with
// the parity over M of the coordinate answers (for compiled strategies the
// parity is computed by the mock Eval on Alice's answer ciphertext).
DecompositionReport decompose_value(const std::vector<XorGame>& games,
                                    const QuantumStrategy& strat);
DecompositionReport decompose_value(const std::vector<XorGame>& games,
                                    const CompiledStrategy& strat, const MockQhe& qhe);

// Tensor product of per-factor strategies, playing the AND game.
QuantumStrategy product_strategy(const std::vector<QuantumStrategy>& factors);

constexpr int kMaxRepetitions = 3;

}  // namespace qxor
