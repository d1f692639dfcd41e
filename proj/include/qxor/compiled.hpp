#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "qxor/game.hpp"
#include "qxor/ncpoly.hpp"
#include "qxor/qsim.hpp"
#include "qxor/synth.hpp"

namespace qxor {

struct Ciphertext {
  int plain = 0;
  int tag = 0;
};

// Transparent mock QHE: a ciphertext is the plaintext with a tag attached,
// Dec strips the tag, Eval applies the circuit to the plaintext directly.
// Correctness holds with zero error (so the compiled-value guarantees hold
// with no negligible slack); security is explicitly not modeled. num_tags > 1
// gives k semantically identical ciphertexts per plaintext to exercise the
// expectation over Enc.
class MockQhe {
 public:
  explicit MockQhe(int num_tags = 1);

  int num_tags() const { return num_tags_; }
  std::uint64_t gen() const { return 0; }
  Ciphertext enc(std::uint64_t key, int x, int tag = 0) const;
  std::vector<Ciphertext> enc_support(std::uint64_t key, int x) const;
  int dec(std::uint64_t /*key*/, const Ciphertext& c) const { return c.plain; }
  Ciphertext eval(const std::function<int(int)>& circuit, const Ciphertext& c) const;

 private:
  int num_tags_;
};

// Single-prover strategy for a compiled game: per question ciphertext c the
// prover measures the PVM {P_c,alpha} and applies U_c,alpha (so A = U P),
// answering the ciphertext label alpha; Bob-stage questions are answered with
// the fixed PVMs {B_yb} on the same Hilbert space.
struct CompiledStrategy {
  int dim = 0;
  CVec psi;

  struct AliceBranch {
    int alpha = 0;            // answer ciphertext label; Dec is the identity
    CMat proj;                // P_c,alpha
    CMat unitary;             // U_c,alpha
  };
  std::vector<std::vector<std::vector<AliceBranch>>> alice;  // [x][tag][branch]
  std::vector<std::vector<CMat>> bob;                        // [y][b]

  int na() const { return static_cast<int>(alice.size()); }
  int nb() const { return static_cast<int>(bob.size()); }
  int ob() const { return bob.empty() ? 0 : static_cast<int>(bob[0].size()); }
  BinaryObservable bob_observable(int y) const;  // requires ob == 2
  void validate(const MockQhe& qhe) const;
};

struct CompiledReport {
  double value = 0.0;
  double bias = 0.0;             // 2 value - 1
  Eigen::MatrixXd win_prob;      // conditional winning probability per (x,y)
};

// Exact enumeration of the 5-step compiled protocol: the verifier encrypts x,
// the prover answers alpha (branch weights ||U P psi||^2 through B_yb),
// decrypted answers outside O_A lose.
CompiledReport run_compiled(const NonlocalGame& game, const CompiledStrategy& strat,
                            const MockQhe& qhe);
CompiledReport run_compiled(const XorGame& game, const CompiledStrategy& strat,
                            const MockQhe& qhe);

// The compiled strategy induced by a tensor strategy: P = A_xa (x) I with
// trivial unitaries, Bob operators I (x) B_yb. Its compiled value equals the
// nonlocal value exactly under the transparent scheme.
CompiledStrategy honest_compile(const QuantumStrategy& ns, const MockQhe& qhe);

// Security-gap demo: under the transparent scheme the prover can read x from
// the ciphertext, commit to a = 0, and answer Bob's question with the target
// parity bit g(x,y), winning every question pair. Works because nothing here
// is actually encrypted.
CompiledStrategy cheat_plaintext(const XorGame& game, const MockQhe& qhe);

// Degree-2 pseudo-expectation induced by a compiled XOR-game strategy.
// bb stores the real part of E_x E_c sum_alpha <psi|A* B_y B_w A|psi>; the
// imaginary parts cancel in every symmetrized combination. a1/b1 are the
// natural degree-1 extensions (unused by the identities but well-defined).
struct PseudoExpectation {
  Eigen::MatrixXd aa;  // delta_xz
  Eigen::MatrixXd ab;
  Eigen::MatrixXd bb;
  Eigen::VectorXd a1;
  Eigen::VectorXd b1;
};

PseudoExpectation pseudo_expectation(const XorGame& game, const CompiledStrategy& strat,
                                     const MockQhe& qhe);
// Same with an explicit distribution over Alice questions (default uniform).
PseudoExpectation pseudo_expectation(const XorGame& game, const CompiledStrategy& strat,
                                     const MockQhe& qhe, const Eigen::VectorXd& x_dist);

double pe_apply(const PseudoExpectation& pe, const NcPolynomial& p);

// Enumerates (weight, alpha, psi_c_alpha) for question x; weight is the
// ciphertext probability 1/num_tags. Branch states are unnormalized.
void for_each_branch(const CompiledStrategy& strat, const MockQhe& qhe, int x,
                     const std::function<void(double, int, const CVec&)>& fn);

}  // namespace qxor
