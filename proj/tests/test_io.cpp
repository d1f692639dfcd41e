#include "doctest.h"

#include <Eigen/Dense>

#include <cstdio>
#include <string>

#include "qxor/compiled.hpp"
#include "qxor/game.hpp"
#include "qxor/io.hpp"
#include "qxor/rigidity.hpp"
#include "qxor/sdp.hpp"
#include "qxor/sos.hpp"
#include "qxor/synth.hpp"

using namespace qxor;

namespace {

std::string temp_path(const char* name) {
  return std::string("io_test_") + name + ".json";
}

}  // namespace

TEST_CASE("matrix and vector json round trips") {
  Eigen::MatrixXd m(2, 3);
  m << 1.0, -2.5, 3.25, 0.0, 1e-9, -7.0;
  Eigen::MatrixXd m2 = matrix_from_json(matrix_to_json(m));
  CHECK((m - m2).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd v(3);
  v << 0.5, -1.0, 2.0;
  CHECK((v - vector_from_json(vector_to_json(v))).cwiseAbs().maxCoeff() == 0.0);

  CMat c(2, 2);
  c << std::complex<double>(1, 2), std::complex<double>(0, -1),
      std::complex<double>(-0.5, 0), std::complex<double>(3, 4);
  CHECK((c - cmatrix_from_json(cmatrix_to_json(c))).cwiseAbs().maxCoeff() == 0.0);

  CVec cv(2);
  cv << std::complex<double>(0.25, -0.75), std::complex<double>(1, 0);
  CHECK((cv - cvector_from_json(cvector_to_json(cv))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("xor game json round trip") {
  XorGame g = random_xor_game(3, 2, 17);
  Json j = game_to_json(g);
  CHECK(j.at("kind") == "xor");
  XorGame back = xor_game_from_json(j);
  CHECK((g.cost - back.cost).cwiseAbs().maxCoeff() <= 1e-15);

  SUBCASE("bad g entries") {
    j["g"][0][0] = 2;
    CHECK_THROWS_AS(xor_game_from_json(j), InputError);
  }
  SUBCASE("missing field") {
    j.erase("pi");
    CHECK_THROWS_AS(xor_game_from_json(j), InputError);
  }
  SUBCASE("bad mass") {
    j["pi"][0][0] = 5.0;
    CHECK_THROWS_AS(xor_game_from_json(j), InputError);
  }
}

TEST_CASE("nonlocal game json round trip") {
  NonlocalGame g = magic_square_game();
  Json j = game_to_json(g);
  CHECK(j.at("kind") == "nonlocal");
  NonlocalGame back = nonlocal_game_from_json(j);
  CHECK(back.na == g.na);
  CHECK(back.oa == g.oa);
  CHECK(back.win == g.win);
  CHECK((back.pi - g.pi).cwiseAbs().maxCoeff() <= 1e-15);

  // XOR games are accepted and upgraded.
  NonlocalGame chsh_nl = nonlocal_game_from_json(game_to_json(chsh()));
  CHECK(chsh_nl.win == xor_to_nonlocal(chsh()).win);

  SUBCASE("V length mismatch") {
    j["V"].erase(j["V"].size() - 1);
    CHECK_THROWS_AS(nonlocal_game_from_json(j), InputError);
  }
}

TEST_CASE("solution json round trip") {
  XorGame g = random_xor_game(2, 3, 23);
  SdpSolution sol = solve(g, 1e-9);
  SdpSolution back = solution_from_json(solution_to_json(sol));
  CHECK(back.dual_bias == sol.dual_bias);
  CHECK(back.primal_bias == sol.primal_bias);
  CHECK(back.gap == sol.gap);
  CHECK((back.primal.u - sol.primal.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.primal.v - sol.primal.v).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.dual.r - sol.dual.r).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("certificate json round trip") {
  XorGame g = random_xor_game(3, 3, 29);
  SdpSolution sol = solve(g, 1e-9);
  SosCertificate cert = build_certificate(g, sol);
  SosCertificate back = certificate_from_json(certificate_to_json(cert));
  CHECK(back.beta == cert.beta);
  REQUIRE(back.a_terms.size() == cert.a_terms.size());
  REQUIRE(back.b_terms.size() == cert.b_terms.size());
  for (std::size_t i = 0; i < cert.a_terms.size(); ++i) {
    CHECK(back.a_terms[i].x == cert.a_terms[i].x);
    CHECK(back.a_terms[i].weight == cert.a_terms[i].weight);
    CHECK((back.a_terms[i].bhat - cert.a_terms[i].bhat).cwiseAbs().maxCoeff() == 0.0);
  }
  // The verifier agrees byte for byte with the original.
  CHECK(verify_certificate(g, back) == verify_certificate(g, cert));
}

TEST_CASE("compiled strategy json round trip") {
  MockQhe qhe(2);
  QuantumStrategy qs = strategy_from_vectors(solve(chsh(), 1e-10).primal);
  CompiledStrategy cs = honest_compile(qs, qhe);
  CompiledStrategy back = compiled_strategy_from_json(compiled_strategy_to_json(cs));
  CHECK(back.dim == cs.dim);
  CHECK((back.psi - cs.psi).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.na() == cs.na());
  REQUIRE(back.nb() == cs.nb());
  CHECK_NOTHROW(back.validate(qhe));
  CHECK(run_compiled(chsh(), back, qhe).value ==
        doctest::Approx(run_compiled(chsh(), cs, qhe).value).epsilon(1e-15));
}

TEST_CASE("random games are deterministic per seed") {
  XorGame a = random_xor_game(3, 4, 5);
  XorGame b = random_xor_game(3, 4, 5);
  XorGame c = random_xor_game(3, 4, 6);
  CHECK((a.cost - b.cost).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.cost - c.cost).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.cost.array().abs().sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(random_xor_game(0, 2, 1), InputError);
  CHECK_THROWS_AS(random_xor_game(2, 65, 1), InputError);
}

TEST_CASE("game resolution") {
  XorGame g = resolve_xor_game("chsh");
  CHECK((g.cost - chsh().cost).cwiseAbs().maxCoeff() == 0.0);

  XorGame r1 = resolve_xor_game("random:3x4:9");
  CHECK(r1.na() == 3);
  CHECK(r1.nb() == 4);
  CHECK((r1.cost - random_xor_game(3, 4, 9).cost).cwiseAbs().maxCoeff() == 0.0);

  // Default seed when omitted.
  XorGame r2 = resolve_xor_game("random:2x2");
  CHECK((r2.cost - random_xor_game(2, 2, 1).cost).cwiseAbs().maxCoeff() == 0.0);

  NonlocalGame ms = resolve_nonlocal_game("msquare");
  CHECK(ms.win == magic_square_game().win);

  CHECK_THROWS_AS(resolve_xor_game("msquare"), InputError);
  CHECK_THROWS_AS(resolve_xor_game("random:AxB"), InputError);
  CHECK_THROWS_AS(resolve_xor_game("no_such_file.json"), InputError);
}

TEST_CASE("game resolution from files") {
  const std::string path = temp_path("game");
  XorGame g = random_xor_game(2, 3, 31);
  write_text_atomic(path, game_to_json(g).dump(2));
  XorGame back = resolve_xor_game(path);
  CHECK((g.cost - back.cost).cwiseAbs().maxCoeff() <= 1e-15);

  NonlocalGame nl = resolve_nonlocal_game(path);
  CHECK(nl.win == xor_to_nonlocal(g).win);
  std::remove(path.c_str());
}

TEST_CASE("atomic writes and reads") {
  const std::string path = temp_path("atomic");
  write_text_atomic(path, "first");
  CHECK(read_text_file(path) == "first");
  write_text_atomic(path, "second");
  CHECK(read_text_file(path) == "second");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file(path), InputError);
}

TEST_CASE("json parsing errors are input errors") {
  CHECK_THROWS_AS(parse_json("{\"a\": "), InputError);
  CHECK(parse_json("{\"a\": 1}").at("a") == 1);
  CHECK_THROWS_AS(load_json_file("definitely_missing.json"), InputError);

  const std::string path = temp_path("malformed");
  write_text_atomic(path, "{\"beta\": [");
  CHECK_THROWS_AS(load_json_file(path), InputError);
  std::remove(path.c_str());
}
