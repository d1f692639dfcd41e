#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qxor/compiled.hpp"
#include "qxor/game.hpp"
#include "qxor/io.hpp"
#include "qxor/repetition.hpp"
#include "qxor/rigidity.hpp"
#include "qxor/sdp.hpp"
#include "qxor/sos.hpp"
#include "qxor/synth.hpp"

namespace {

using qxor::Json;

void emit(const Json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) qxor::write_text_atomic(out_path, text);
}

qxor::MockQhe parse_qhe(const std::string& spec) {
  if (spec == "transparent") return qxor::MockQhe(1);
  if (spec.rfind("multi-cipher:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(spec.substr(13));
    } catch (const std::exception&) {
      throw qxor::InputError("expected multi-cipher:<k>");
    }
    if (k < 1) throw qxor::InputError("multi-cipher count must be >= 1");
    return qxor::MockQhe(k);
  }
  throw qxor::InputError("unknown QHE scheme: " + spec);
}

std::vector<double> theta_values(const std::string& sweep) {
  // "a:b:k" inclusive endpoints, k >= 1 samples
  const auto c1 = sweep.find(':');
  const auto c2 = sweep.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw qxor::InputError("expected --theta-sweep a:b:k");
  double a = 0, b = 0;
  int k = 0;
  try {
    a = std::stod(sweep.substr(0, c1));
    b = std::stod(sweep.substr(c1 + 1, c2 - c1 - 1));
    k = std::stoi(sweep.substr(c2 + 1));
  } catch (const std::exception&) {
    throw qxor::InputError("expected --theta-sweep a:b:k");
  }
  if (k < 1) throw qxor::InputError("theta sweep needs at least one sample");
  std::vector<double> values;
  for (int i = 0; i < k; ++i)
    values.push_back(k == 1 ? a : a + (b - a) * i / double(k - 1));
  return values;
}

int cmd_solve(const std::string& game_name, double tol, const std::string& out) {
  qxor::XorGame game = qxor::resolve_xor_game(game_name);
  qxor::SdpSolution sol = qxor::solve(game, tol);
  emit(qxor::solution_to_json(sol), out);
  return 0;
}

int cmd_certify(const std::string& game_name, double tol, const std::string& out) {
  qxor::XorGame game = qxor::resolve_xor_game(game_name);
  qxor::SdpSolution sol = qxor::solve(game, tol);
  qxor::SosCertificate cert = qxor::build_certificate(game, sol);
  const double residual = qxor::verify_certificate(game, cert);
  const bool pass = qxor::certificate_passes(residual, sol.gap);
  Json report = qxor::certificate_to_json(cert);
  report["residual"] = residual;
  report["gap"] = sol.gap;
  report["pass"] = pass;
  emit(report, out);
  return pass ? 0 : 1;
}

int cmd_verify_cert(const std::string& game_name, const std::string& cert_path,
                    double threshold, const std::string& out) {
  qxor::XorGame game = qxor::resolve_xor_game(game_name);
  qxor::SosCertificate cert = qxor::certificate_from_json(qxor::load_json_file(cert_path));
  const double residual = qxor::verify_certificate(game, cert);
  const bool pass = residual <= threshold;
  emit(Json{{"beta", cert.beta},
            {"residual", residual},
            {"threshold", threshold},
            {"pass", pass}},
       out);
  return pass ? 0 : 1;
}

int cmd_synth(const std::string& game_name, double tol, const std::string& out) {
  qxor::XorGame game = qxor::resolve_xor_game(game_name);
  qxor::SdpSolution sol = qxor::solve(game, tol);
  qxor::QuantumStrategy qs = qxor::strategy_from_vectors(sol.primal);
  const double qbias = qxor::quantum_bias(game, qs);
  Json alice = Json::array(), bob = Json::array();
  for (int x = 0; x < game.na(); ++x)
    alice.push_back(qxor::cmatrix_to_json(qs.alice_observable(x).m));
  for (int y = 0; y < game.nb(); ++y)
    bob.push_back(qxor::cmatrix_to_json(qs.bob_observable(y).m));
  const bool pass = std::abs(qbias - sol.dual_bias) <= 1e-6;
  emit(Json{{"sdp_bias", sol.dual_bias},
            {"bias", qbias},
            {"da", qs.da},
            {"db", qs.db},
            {"alice", alice},
            {"bob", bob},
            {"pass", pass}},
       out);
  return pass ? 0 : 1;
}

Json pe_to_json(const qxor::PseudoExpectation& pe) {
  return Json{{"aa", qxor::matrix_to_json(pe.aa)},
              {"ab", qxor::matrix_to_json(pe.ab)},
              {"bb", qxor::matrix_to_json(pe.bb)},
              {"a1", qxor::vector_to_json(pe.a1)},
              {"b1", qxor::vector_to_json(pe.b1)}};
}

int cmd_compile_run(const std::string& game_name, const std::string& prover,
                    const std::string& qhe_spec, double tol, const std::string& out) {
  qxor::MockQhe qhe = parse_qhe(qhe_spec);
  const bool is_magic = game_name == "msquare";
  bool is_xor = !is_magic;
  qxor::XorGame xg;
  qxor::NonlocalGame ng;
  if (is_magic) {
    ng = qxor::magic_square_game();
  } else {
    try {
      xg = qxor::resolve_xor_game(game_name);
      ng = qxor::xor_to_nonlocal(xg);
    } catch (const qxor::InputError&) {
      ng = qxor::resolve_nonlocal_game(game_name);
      is_xor = false;
    }
  }

  qxor::CompiledStrategy strat;
  if (prover == "honest") {
    if (is_xor)
      strat = qxor::honest_compile(qxor::strategy_from_vectors(qxor::solve(xg, tol).primal), qhe);
    else if (is_magic)
      strat = qxor::honest_compile(qxor::magic_square_perfect_strategy(), qhe);
    else
      throw qxor::InputError("honest prover needs an XOR game or msquare");
  } else if (prover == "cheat-plaintext") {
    if (!is_xor) throw qxor::InputError("cheat-plaintext needs an XOR game");
    strat = qxor::cheat_plaintext(xg, qhe);
  } else {
    strat = qxor::compiled_strategy_from_json(qxor::load_json_file(prover));
  }

  qxor::CompiledReport rep = qxor::run_compiled(ng, strat, qhe);
  Json report{{"value", rep.value},
              {"bias", rep.bias},
              {"win_prob", qxor::matrix_to_json(rep.win_prob)}};
  if (is_xor)
    report["pseudo_expectation"] = pe_to_json(qxor::pseudo_expectation(xg, strat, qhe));
  emit(report, out);
  return 0;
}

int cmd_repeat(const std::string& game_name, int n, const std::string& mode,
               const std::string& subset_spec, double tol, const std::string& out) {
  if (n < 1 || n > qxor::kMaxRepetitions)
    throw qxor::InputError("--n must be between 1 and 3");
  qxor::XorGame factor = qxor::resolve_xor_game(game_name);
  std::vector<qxor::XorGame> factors(n, factor);

  if (mode == "and") {
    qxor::SdpSolution sol = qxor::solve(factor, tol);
    qxor::QuantumStrategy one = qxor::strategy_from_vectors(sol.primal);
    qxor::QuantumStrategy prod = qxor::product_strategy(std::vector(n, one));
    qxor::MockQhe qhe(1);
    qxor::DecompositionReport rep =
        qxor::decompose_value(factors, qxor::honest_compile(prod, qhe), qhe);
    double expected = 1.0;
    for (int i = 0; i < n; ++i) expected *= qxor::value_of_bias(sol.dual_bias);
    const bool pass = rep.identity_residual <= 1e-9;
    Json subset_bias = Json::array();
    for (double b : rep.subset_bias) subset_bias.push_back(b);
    emit(Json{{"mode", "and"},
              {"n", n},
              {"value", rep.value},
              {"optimal_value", expected},
              {"subset_bias", subset_bias},
              {"identity_residual", rep.identity_residual},
              {"pass", pass}},
         out);
    return pass ? 0 : 1;
  }
  if (mode != "sum") throw qxor::InputError("--mode must be and|sum");

  std::vector<int> subset;
  if (subset_spec.empty()) {
    for (int i = 0; i < n; ++i) subset.push_back(i);
  } else {
    std::string item;
    std::istringstream ss(subset_spec);
    while (std::getline(ss, item, ',')) {
      try {
        subset.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw qxor::InputError("--subset expects comma-separated indices");
      }
    }
  }
  qxor::XorGame sum = qxor::xor_sum(factors, subset);
  qxor::SdpSolution factor_sol = qxor::solve(factor, tol);
  qxor::SdpSolution sum_sol = qxor::solve(sum, tol);
  double product = 1.0;
  for (std::size_t i = 0; i < subset.size(); ++i) product *= factor_sol.dual_bias;
  const bool pass = std::abs(sum_sol.dual_bias - product) <= 1e-5;
  Json subset_json = Json::array();
  for (int i : subset) subset_json.push_back(i);
  emit(Json{{"mode", "sum"},
            {"subset", subset_json},
            {"game", qxor::game_to_json(sum)},
            {"bias", sum_sol.dual_bias},
            {"factor_bias_product", product},
            {"pass", pass}},
       out);
  return pass ? 0 : 1;
}

int cmd_selftest(const std::string& game_name, const std::string& prover,
                 const std::string& sweep, const std::string& qhe_spec, double tol,
                 std::uint64_t seed, const std::string& out) {
  qxor::XorGame game = qxor::resolve_xor_game(game_name);
  qxor::MockQhe qhe = parse_qhe(qhe_spec);
  qxor::SdpSolution sol = qxor::solve(game, tol);

  Json entries = Json::array();
  bool all_pass = true;
  auto add_entry = [&](const Json& label, const qxor::CompiledStrategy& strat) {
    qxor::SelfTestReport rep =
        qxor::selftest_report(game, strat, qhe, sol.dual, sol.dual_bias);
    Json e{{"epsilon", rep.epsilon},
           {"row_residual", qxor::vector_to_json(rep.row_residual)},
           {"row_bound", rep.row_bound},
           {"algebra_residual", qxor::vector_to_json(rep.algebra_residual)},
           {"algebra_bound", qxor::vector_to_json(rep.algebra_bound)},
           {"jensen_lhs", qxor::vector_to_json(rep.jensen_lhs)},
           {"jensen_rhs", qxor::vector_to_json(rep.jensen_rhs)},
           {"pass", rep.pass}};
    for (auto& [k, v] : label.items()) e[k] = v;
    entries.push_back(std::move(e));
    all_pass = all_pass && rep.pass;
  };

  if (!prover.empty()) {
    add_entry(Json{{"prover", prover}},
              qxor::compiled_strategy_from_json(qxor::load_json_file(prover)));
  } else {
    qxor::QuantumStrategy base = qxor::strategy_from_vectors(sol.primal);
    std::vector<double> thetas = sweep.empty() ? std::vector<double>{0.0}
                                               : theta_values(sweep);
    for (double theta : thetas)
      add_entry(Json{{"theta", theta}},
                qxor::honest_compile(qxor::perturb_bob(base, 0, theta, seed), qhe));
  }
  emit(Json{{"beta_star", sol.dual_bias}, {"entries", entries}, {"pass", all_pass}}, out);
  return all_pass ? 0 : 1;
}

int cmd_magic(const std::string& check, const std::string& sweep, std::uint64_t seed,
              const std::string& out) {
  qxor::MockQhe qhe(1);
  qxor::QuantumStrategy perfect = qxor::magic_square_perfect_strategy();

  if (check == "value") {
    const double value =
        qxor::run_compiled(qxor::magic_square_game(), qxor::honest_compile(perfect, qhe), qhe)
            .value;
    const bool pass = std::abs(value - 1.0) <= 1e-9;
    emit(Json{{"value", value}, {"pass", pass}}, out);
    return pass ? 0 : 1;
  }

  auto report_json = [](double theta, const qxor::MagicReport& rep) {
    return Json{{"theta", theta},
                {"value", rep.value},
                {"epsilon", rep.epsilon},
                {"residual", rep.residual},
                {"bound", rep.bound},
                {"identity_residual", rep.identity_residual},
                {"triple_residual", qxor::vector_to_json(rep.triple_residual)},
                {"triple_bound", rep.triple_bound},
                {"shifted_residual", rep.shifted_residual},
                {"shifted_bound_printed", rep.shifted_bound_printed},
                {"shifted_bound_proof", rep.shifted_bound_proof},
                {"exchange_residual", rep.exchange_residual},
                {"exchange_bound", rep.exchange_bound},
                {"pass", rep.pass}};
  };

  if (check == "anticommutator" || check == "lemmas") {
    std::vector<double> thetas =
        sweep.empty() ? std::vector<double>{0.0, 0.02, 0.05, 0.1} : theta_values(sweep);
    Json entries = Json::array();
    bool all_pass = true;
    for (double theta : thetas) {
      qxor::QuantumStrategy strat =
          theta == 0.0 ? perfect : qxor::perturb_bob(perfect, 1, theta, seed);
      qxor::MagicReport rep =
          qxor::magic_anticommutator(qxor::honest_compile(strat, qhe), qhe);
      entries.push_back(report_json(theta, rep));
      all_pass = all_pass && rep.pass;
      if (theta == 0.0) all_pass = all_pass && rep.residual <= 1e-9;
    }
    if (check == "anticommutator")
      for (Json& e : entries)
        for (const char* k : {"triple_residual", "triple_bound", "shifted_residual",
                              "shifted_bound_printed", "shifted_bound_proof",
                              "exchange_residual", "exchange_bound"})
          e.erase(k);
    emit(Json{{"check", check}, {"entries", entries}, {"pass", all_pass}}, out);
    return all_pass ? 0 : 1;
  }
  throw qxor::InputError("--check must be value|anticommutator|lemmas");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XOR game quantum values, SOS certificates, and compiled-game checks"};
  app.require_subcommand(1);

  std::string game_name, out_path, cert_path, prover, prover_file, subset_spec, sweep, check;
  std::string qhe_spec = "transparent";
  std::string mode = "and";
  double tol = 1e-8, threshold = 1e-6;
  std::uint64_t seed = 7;
  int n = 2;

  auto add_common = [&](CLI::App* cmd, bool needs_game) {
    if (needs_game)
      cmd->add_option("--game", game_name,
                      "Game: chsh, msquare, random:NAxNB[:seed], or a JSON file")
          ->required();
    cmd->add_option("--out", out_path, "Write the JSON report here (atomic)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Optimal quantum bias by SDP");
  add_common(solve, true);
  solve->add_option("--tol", tol, "Duality gap tolerance");

  CLI::App* certify = app.add_subcommand("certify", "Build and verify an SOS certificate");
  add_common(certify, true);
  certify->add_option("--tol", tol, "Duality gap tolerance");

  CLI::App* verify = app.add_subcommand("verify-cert", "Verify a certificate file");
  add_common(verify, true);
  verify->add_option("--cert", cert_path, "Certificate JSON file")->required();
  verify->add_option("--threshold", threshold, "Max residual accepted");

  CLI::App* synth = app.add_subcommand("synth", "Synthesize an optimal quantum strategy");
  add_common(synth, true);
  synth->add_option("--tol", tol, "Duality gap tolerance");

  CLI::App* crun = app.add_subcommand("compile-run", "Run the compiled single-prover game");
  add_common(crun, true);
  crun->add_option("--prover", prover, "honest, cheat-plaintext, or a strategy JSON file")
      ->default_val("honest");
  crun->add_option("--qhe", qhe_spec, "transparent or multi-cipher:<k>");
  crun->add_option("--tol", tol, "Duality gap tolerance for the honest prover");

  CLI::App* repeat = app.add_subcommand("repeat", "Parallel AND / XOR-sum of game copies");
  add_common(repeat, true);
  repeat->add_option("--n", n, "Number of copies (1..3)");
  repeat->add_option("--mode", mode, "and|sum");
  repeat->add_option("--subset", subset_spec, "Comma-separated factor indices for sum");
  repeat->add_option("--tol", tol, "Duality gap tolerance");

  CLI::App* selftest = app.add_subcommand("selftest", "Self-testing residuals and bounds");
  add_common(selftest, true);
  selftest->add_option("--prover", prover_file, "Compiled strategy JSON file");
  selftest->add_option("--theta-sweep", sweep, "a:b:k perturbation sweep");
  selftest->add_option("--qhe", qhe_spec, "transparent or multi-cipher:<k>");
  selftest->add_option("--seed", seed, "Perturbation seed");
  selftest->add_option("--tol", tol, "Duality gap tolerance");

  CLI::App* magic = app.add_subcommand("magic", "Magic square value and rigidity checks");
  add_common(magic, false);
  magic->add_option("--check", check, "value|anticommutator|lemmas")->required();
  magic->add_option("--theta-sweep", sweep, "a:b:k perturbation sweep");
  magic->add_option("--seed", seed, "Perturbation seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(game_name, tol, out_path);
    if (certify->parsed()) return cmd_certify(game_name, tol, out_path);
    if (verify->parsed()) return cmd_verify_cert(game_name, cert_path, threshold, out_path);
    if (synth->parsed()) return cmd_synth(game_name, tol, out_path);
    if (crun->parsed()) return cmd_compile_run(game_name, prover, qhe_spec, tol, out_path);
    if (repeat->parsed()) return cmd_repeat(game_name, n, mode, subset_spec, tol, out_path);
    if (selftest->parsed())
      return cmd_selftest(game_name, prover_file, sweep, qhe_spec, tol, seed, out_path);
    if (magic->parsed()) return cmd_magic(check, sweep, seed, out_path);
  } catch (const qxor::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
