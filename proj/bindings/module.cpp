#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qxor/compiled.hpp"
#include "qxor/game.hpp"
#include "qxor/io.hpp"
#include "qxor/ncpoly.hpp"
#include "qxor/qsim.hpp"
#include "qxor/repetition.hpp"
#include "qxor/rigidity.hpp"
#include "qxor/sdp.hpp"
#include "qxor/sos.hpp"
#include "qxor/synth.hpp"

namespace py = pybind11;
using namespace qxor;

PYBIND11_MODULE(_qxor, m) {
  m.doc() = "XOR game quantum values, nice SOS certificates, and compiled-game checks";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<XorGame>(m, "XorGame")
      .def_readonly("cost", &XorGame::cost)
      .def_property_readonly("na", &XorGame::na)
      .def_property_readonly("nb", &XorGame::nb)
      .def("sign_bit", &XorGame::sign_bit)
      .def("pi", &XorGame::pi)
      .def("to_json", [](const XorGame& g) { return game_to_json(g).dump(); })
      .def("__repr__", [](const XorGame& g) {
        return "XorGame(" + std::to_string(g.na()) + "x" + std::to_string(g.nb()) + ")";
      });

  py::class_<NonlocalGame>(m, "NonlocalGame")
      .def_readonly("na", &NonlocalGame::na)
      .def_readonly("nb", &NonlocalGame::nb)
      .def_readonly("oa", &NonlocalGame::oa)
      .def_readonly("ob", &NonlocalGame::ob)
      .def_readonly("pi", &NonlocalGame::pi)
      .def("wins", [](const NonlocalGame& g, int x, int y, int a, int b) {
        return static_cast<int>(g.wins(x, y, a, b));
      })
      .def("to_json", [](const NonlocalGame& g) { return game_to_json(g).dump(); });

  py::class_<VectorStrategy>(m, "VectorStrategy")
      .def(py::init<>())
      .def_readwrite("u", &VectorStrategy::u)
      .def_readwrite("v", &VectorStrategy::v)
      .def_property_readonly("dim", &VectorStrategy::dim)
      .def("validate", &VectorStrategy::validate);

  py::class_<DualBiases>(m, "DualBiases")
      .def_readonly("r", &DualBiases::r)
      .def_readonly("c", &DualBiases::c);

  py::class_<SdpSolution>(m, "SdpSolution")
      .def_readonly("primal", &SdpSolution::primal)
      .def_readonly("dual", &SdpSolution::dual)
      .def_readonly("primal_bias", &SdpSolution::primal_bias)
      .def_readonly("dual_bias", &SdpSolution::dual_bias)
      .def_readonly("gap", &SdpSolution::gap)
      .def("to_json", [](const SdpSolution& s) { return solution_to_json(s).dump(); });

  py::class_<SosCertificate::ATerm>(m, "ATerm")
      .def_readonly("x", &SosCertificate::ATerm::x)
      .def_readonly("weight", &SosCertificate::ATerm::weight)
      .def_readonly("bhat", &SosCertificate::ATerm::bhat);
  py::class_<SosCertificate::BTerm>(m, "BTerm")
      .def_readonly("weight", &SosCertificate::BTerm::weight)
      .def_readonly("v", &SosCertificate::BTerm::v);
  py::class_<SosCertificate>(m, "SosCertificate")
      .def_readonly("beta", &SosCertificate::beta)
      .def_readonly("a_terms", &SosCertificate::a_terms)
      .def_readonly("b_terms", &SosCertificate::b_terms)
      .def("to_json", [](const SosCertificate& c) { return certificate_to_json(c).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return certificate_from_json(parse_json(text));
      });

  py::class_<NcPolynomial>(m, "NcPolynomial")
      .def_static("parse", &NcPolynomial::parse)
      .def("to_string", &NcPolynomial::to_string)
      .def_property_readonly("degree", &NcPolynomial::degree)
      .def("__repr__", [](const NcPolynomial& p) { return p.to_string(); });

  py::class_<QuantumStrategy>(m, "QuantumStrategy")
      .def_readonly("da", &QuantumStrategy::da)
      .def_readonly("db", &QuantumStrategy::db)
      .def_readonly("psi", &QuantumStrategy::psi)
      .def("alice_observable",
           [](const QuantumStrategy& s, int x) { return s.alice_observable(x).m; })
      .def("bob_observable",
           [](const QuantumStrategy& s, int y) { return s.bob_observable(y).m; });

  py::class_<MockQhe>(m, "MockQhe")
      .def(py::init<int>(), py::arg("num_tags") = 1)
      .def_property_readonly("num_tags", &MockQhe::num_tags);

  py::class_<CompiledStrategy>(m, "CompiledStrategy")
      .def_readonly("dim", &CompiledStrategy::dim)
      .def_readonly("psi", &CompiledStrategy::psi)
      .def_property_readonly("na", &CompiledStrategy::na)
      .def_property_readonly("nb", &CompiledStrategy::nb)
      .def_property_readonly("ob", &CompiledStrategy::ob)
      .def("to_json",
           [](const CompiledStrategy& s) { return compiled_strategy_to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return compiled_strategy_from_json(parse_json(text));
      });

  py::class_<CompiledReport>(m, "CompiledReport")
      .def_readonly("value", &CompiledReport::value)
      .def_readonly("bias", &CompiledReport::bias)
      .def_readonly("win_prob", &CompiledReport::win_prob);

  py::class_<PseudoExpectation>(m, "PseudoExpectation")
      .def_readonly("aa", &PseudoExpectation::aa)
      .def_readonly("ab", &PseudoExpectation::ab)
      .def_readonly("bb", &PseudoExpectation::bb)
      .def_readonly("a1", &PseudoExpectation::a1)
      .def_readonly("b1", &PseudoExpectation::b1);

  py::class_<DecompositionReport>(m, "DecompositionReport")
      .def_readonly("value", &DecompositionReport::value)
      .def_readonly("subset_bias", &DecompositionReport::subset_bias)
      .def_readonly("identity_residual", &DecompositionReport::identity_residual);

  py::class_<SelfTestReport>(m, "SelfTestReport")
      .def_readonly("beta_star", &SelfTestReport::beta_star)
      .def_readonly("value", &SelfTestReport::value)
      .def_readonly("epsilon", &SelfTestReport::epsilon)
      .def_readonly("eps_prime", &SelfTestReport::eps_prime)
      .def_readonly("row_residual", &SelfTestReport::row_residual)
      .def_readonly("row_bound", &SelfTestReport::row_bound)
      .def_readonly("algebra_residual", &SelfTestReport::algebra_residual)
      .def_readonly("algebra_bound", &SelfTestReport::algebra_bound)
      .def_readonly("jensen_lhs", &SelfTestReport::jensen_lhs)
      .def_readonly("jensen_rhs", &SelfTestReport::jensen_rhs)
      .def_readonly("pass_", &SelfTestReport::pass);

  py::class_<MagicReport>(m, "MagicReport")
      .def_readonly("value", &MagicReport::value)
      .def_readonly("epsilon", &MagicReport::epsilon)
      .def_readonly("residual", &MagicReport::residual)
      .def_readonly("bound", &MagicReport::bound)
      .def_readonly("identity_residual", &MagicReport::identity_residual)
      .def_readonly("triple_residual", &MagicReport::triple_residual)
      .def_readonly("triple_bound", &MagicReport::triple_bound)
      .def_readonly("shifted_residual", &MagicReport::shifted_residual)
      .def_readonly("shifted_bound_printed", &MagicReport::shifted_bound_printed)
      .def_readonly("shifted_bound_proof", &MagicReport::shifted_bound_proof)
      .def_readonly("exchange_residual", &MagicReport::exchange_residual)
      .def_readonly("exchange_bound", &MagicReport::exchange_bound)
      .def_readonly("pass_", &MagicReport::pass);

  m.def("chsh", &chsh);
  m.def("make_xor_game", &make_xor_game, py::arg("g"), py::arg("pi"));
  m.def("xor_game_from_cost", &xor_game_from_cost, py::arg("cost"));
  m.def("xor_to_nonlocal", &xor_to_nonlocal);
  m.def("random_xor_game", &random_xor_game, py::arg("na"), py::arg("nb"), py::arg("seed"));
  m.def("xor_game_from_json",
        [](const std::string& text) { return xor_game_from_json(parse_json(text)); });
  m.def("nonlocal_game_from_json",
        [](const std::string& text) { return nonlocal_game_from_json(parse_json(text)); });
  m.def("bias_of_value", &bias_of_value);
  m.def("value_of_bias", &value_of_bias);
  m.def(
      "classical_value",
      [](const NonlocalGame& g, std::uint64_t cap) { return classical_value(g, cap); },
      py::arg("game"), py::arg("cap") = (1ull << 24));
  m.def(
      "classical_value",
      [](const XorGame& g, std::uint64_t cap) { return classical_value(g, cap); },
      py::arg("game"), py::arg("cap") = (1ull << 24));
  m.def(
      "classical_bias",
      [](const XorGame& g, std::uint64_t cap) { return classical_bias(g, cap); },
      py::arg("game"), py::arg("cap") = (1ull << 24));

  m.def(
      "solve",
      [](const XorGame& g, double tol, std::uint64_t seed) {
        SolveOptions opts;
        opts.tol = tol;
        opts.seed = seed;
        return solve(g, opts);
      },
      py::arg("game"), py::arg("tol") = 1e-8, py::arg("seed") = 0x9e3779b9u);
  m.def("strategy_bias", &strategy_bias);
  m.def("row_col_biases", &row_col_biases);
  m.def("check_dual_feasible", &check_dual_feasible);
  m.def("bias_polynomial", &bias_polynomial);

  m.def("build_certificate", &build_certificate);
  m.def("verify_certificate", &verify_certificate);
  m.def("certificate_passes", &certificate_passes);
  m.def("bound_from_certificate", &bound_from_certificate, py::arg("game"),
        py::arg("cert"), py::arg("residual_threshold") = 1e-6);

  m.def("clifford_generators", [](int d) {
    std::vector<CMat> out;
    for (const auto& g : clifford_generators(d)) out.push_back(g.m);
    return out;
  });
  m.def("strategy_from_vectors", &strategy_from_vectors);
  m.def("vectors_from_second_moments", &vectors_from_second_moments);
  m.def("check_optimal_state_relation", &check_optimal_state_relation);
  m.def("quantum_bias", &quantum_bias);
  m.def("game_value", &game_value);
  m.def("reduce_rank", &reduce_rank, py::arg("vs"), py::arg("cutoff") = 1e-10);
  m.def("maximally_entangled", [](int d) { return maximally_entangled(d).amps; });

  m.def("honest_compile", &honest_compile);
  m.def("cheat_plaintext", &cheat_plaintext);
  m.def(
      "run_compiled",
      [](const NonlocalGame& g, const CompiledStrategy& s, const MockQhe& q) {
        return run_compiled(g, s, q);
      },
      py::arg("game"), py::arg("strat"), py::arg("qhe"));
  m.def(
      "run_compiled",
      [](const XorGame& g, const CompiledStrategy& s, const MockQhe& q) {
        return run_compiled(g, s, q);
      },
      py::arg("game"), py::arg("strat"), py::arg("qhe"));
  m.def(
      "pseudo_expectation",
      [](const XorGame& g, const CompiledStrategy& s, const MockQhe& q) {
        return pseudo_expectation(g, s, q);
      },
      py::arg("game"), py::arg("strat"), py::arg("qhe"));
  m.def(
      "pseudo_expectation",
      [](const XorGame& g, const CompiledStrategy& s, const MockQhe& q,
         const Eigen::VectorXd& x_dist) { return pseudo_expectation(g, s, q, x_dist); },
      py::arg("game"), py::arg("strat"), py::arg("qhe"), py::arg("x_dist"));
  m.def("pe_apply", &pe_apply);

  m.def("parallel_and", &parallel_and);
  m.def(
      "xor_sum",
      [](const std::vector<XorGame>& games, const std::vector<int>& subset) {
        return xor_sum(games, subset);
      },
      py::arg("games"), py::arg("subset"));
  m.def(
      "decompose_value",
      [](const std::vector<XorGame>& games, const QuantumStrategy& s) {
        return decompose_value(games, s);
      },
      py::arg("games"), py::arg("strat"));
  m.def(
      "decompose_value",
      [](const std::vector<XorGame>& games, const CompiledStrategy& s, const MockQhe& q) {
        return decompose_value(games, s, q);
      },
      py::arg("games"), py::arg("strat"), py::arg("qhe"));
  m.def("product_strategy", &product_strategy);

  m.def("selftest_row_residual", &selftest_row_residual);
  m.def("selftest_solution_algebra", &selftest_solution_algebra);
  m.def("anticommutator_residual", &anticommutator_residual);
  m.def("jensen_check", &jensen_check);
  m.def("selftest_report", &selftest_report);
  m.def("vector_row_residuals", &vector_row_residuals);
  m.def("perturb_bob", &perturb_bob, py::arg("strat"), py::arg("y"), py::arg("theta"),
        py::arg("seed") = 7);
  m.def("perturb_vectors", &perturb_vectors, py::arg("vs"), py::arg("theta"),
        py::arg("seed") = 7);

  m.def("magic_square_game", &magic_square_game);
  m.def("magic_square_perfect_strategy", &magic_square_perfect_strategy);
  m.def("magic_anticommutator", &magic_anticommutator, py::arg("strat"), py::arg("qhe"),
        py::arg("i") = 0, py::arg("j") = 1, py::arg("k") = 3);
  m.def("anticommutator_norm", &anticommutator_norm);
}
