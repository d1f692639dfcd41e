#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace qxor {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Dense simulation only; 4 qubits per party is all the constructions need.
constexpr int kMaxDim = 64;

struct StateVector {
  CVec amps;
  int dim() const { return static_cast<int>(amps.size()); }
};

// Checks norm 1 within 1e-10 and the dimension cap.
StateVector make_state(CVec amps);
StateVector maximally_entangled(int d);  // (1/sqrt d) sum_k |kk> on d*d

struct BinaryObservable {
  CMat m;
  int dim() const { return static_cast<int>(m.rows()); }
};

// Checks Hermitian within 1e-10 and involution within 1e-9.
BinaryObservable make_observable(CMat m);

struct Pvm {
  std::vector<CMat> projectors;
  int outcomes() const { return static_cast<int>(projectors.size()); }
  int dim() const { return projectors.empty() ? 0 : static_cast<int>(projectors[0].rows()); }
};

// Checks each P = P^2 = P^dagger, mutual orthogonality, sum = I within 1e-9.
Pvm make_pvm(std::vector<CMat> projectors);

BinaryObservable observable_from_pvm(const Pvm& p);
Pvm pvm_from_observable(const BinaryObservable& b);

// Unnormalized post-measurement branches P_k psi; squared norms sum to 1.
std::vector<std::pair<int, CVec>> measure_branches(const CVec& psi, const Pvm& p);

// <psi|O|psi> for Hermitian O; asserts the imaginary part is below 1e-9.
double expect(const CVec& psi, const CMat& o);

CMat kron(const CMat& a, const CMat& b);

// Bipartite actions on psi in C^(da*db) without forming Kronecker products
// (index convention: amp(i*db + j) for Alice row i, Bob column j).
CVec apply_alice(const CMat& a, const CVec& psi, int da, int db);
CVec apply_bob(const CMat& b, const CVec& psi, int da, int db);

bool is_hermitian(const CMat& m, double tol = 1e-9);
bool is_unitary(const CMat& m, double tol = 1e-9);

}  // namespace qxor
