#pragma once

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qxor/compiled.hpp"
#include "qxor/game.hpp"
#include "qxor/sdp.hpp"
#include "qxor/sos.hpp"

namespace qxor {

using Json = nlohmann::json;

// Malformed input (file, JSON, schema, unknown builtin); the CLI maps this to
// exit code 2, keeping it distinct from assertion failures.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);
Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);
// Complex entries as [re, im] pairs.
Json cmatrix_to_json(const CMat& m);
CMat cmatrix_from_json(const Json& j);
Json cvector_to_json(const CVec& v);
CVec cvector_from_json(const Json& j);

// {"kind":"xor","g":[[...]],"pi":[[...]]}
Json game_to_json(const XorGame& game);
// {"kind":"nonlocal","na":..,"nb":..,"oa":..,"ob":..,"pi":[[...]],"V":[...]}
// with V flat row-major over ((x*nb+y)*oa+a)*ob+b.
Json game_to_json(const NonlocalGame& game);
XorGame xor_game_from_json(const Json& j);
NonlocalGame nonlocal_game_from_json(const Json& j);  // accepts either kind

Json solution_to_json(const SdpSolution& sol);
SdpSolution solution_from_json(const Json& j);

Json certificate_to_json(const SosCertificate& cert);
SosCertificate certificate_from_json(const Json& j);

Json compiled_strategy_to_json(const CompiledStrategy& strat);
CompiledStrategy compiled_strategy_from_json(const Json& j);

// Seeded dense game with l1-normalized cost.
XorGame random_xor_game(int na, int nb, std::uint64_t seed);

// Resolves "chsh", "random:NAxNB:seed", or a JSON file path ("msquare" too
// for the nonlocal variant).
XorGame resolve_xor_game(const std::string& name);
NonlocalGame resolve_nonlocal_game(const std::string& name);

std::string read_text_file(const std::string& path);
// Writes via a temp file in the same directory and renames into place.
void write_text_atomic(const std::string& path, const std::string& content);

Json parse_json(const std::string& text);       // InputError on failure
Json load_json_file(const std::string& path);   // InputError on failure

}  // namespace qxor
