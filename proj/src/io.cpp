#include "qxor/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qxor/rigidity.hpp"

namespace qxor {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing field: ") + key);
  return j.at(key);
}

double to_double(const Json& j) {
  require(j.is_number(), "expected a number");
  return j.get<double>();
}

int to_int(const Json& j) {
  require(j.is_number_integer(), "expected an integer");
  return j.get<int>();
}

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "matrix: expected a non-empty array of rows");
  const auto rows = j.size();
  require(j[0].is_array() && !j[0].empty(), "matrix: expected array rows");
  const auto cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, "matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = to_double(j[r][c]);
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  require(j.is_array(), "vector: expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = to_double(j[i]);
  return v;
}

Json cvector_to_json(const CVec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(Json::array({v[i].real(), v[i].imag()}));
  return a;
}

CVec cvector_from_json(const Json& j) {
  require(j.is_array(), "complex vector: expected an array");
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    require(e.is_array() && e.size() == 2, "complex entry: expected [re, im]");
    v[i] = std::complex<double>(to_double(e[0]), to_double(e[1]));
  }
  return v;
}

Json cmatrix_to_json(const CMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat cmatrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "complex matrix: expected rows");
  const auto rows = j.size();
  require(j[0].is_array() && !j[0].empty(), "complex matrix: expected array rows");
  const auto cols = j[0].size();
  CMat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, "complex matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      require(e.is_array() && e.size() == 2, "complex entry: expected [re, im]");
      m(r, c) = std::complex<double>(to_double(e[0]), to_double(e[1]));
    }
  }
  return m;
}

Json game_to_json(const XorGame& game) {
  Json g = Json::array(), pi = Json::array();
  for (int x = 0; x < game.na(); ++x) {
    Json grow = Json::array(), prow = Json::array();
    for (int y = 0; y < game.nb(); ++y) {
      grow.push_back(game.sign_bit(x, y));
      prow.push_back(game.pi(x, y));
    }
    g.push_back(std::move(grow));
    pi.push_back(std::move(prow));
  }
  return Json{{"kind", "xor"}, {"g", g}, {"pi", pi}};
}

Json game_to_json(const NonlocalGame& game) {
  Json v = Json::array();
  for (std::uint8_t w : game.win) v.push_back(static_cast<int>(w));
  return Json{{"kind", "nonlocal"}, {"na", game.na}, {"nb", game.nb},
              {"oa", game.oa},      {"ob", game.ob}, {"pi", matrix_to_json(game.pi)},
              {"V", v}};
}

XorGame xor_game_from_json(const Json& j) {
  require(field(j, "kind").get<std::string>() == "xor", "expected an XOR game");
  Eigen::MatrixXd gm = matrix_from_json(field(j, "g"));
  Eigen::MatrixXd pi = matrix_from_json(field(j, "pi"));
  require(gm.rows() == pi.rows() && gm.cols() == pi.cols(),
          "g and pi shapes must match");
  Eigen::MatrixXi bits(gm.rows(), gm.cols());
  for (int x = 0; x < gm.rows(); ++x)
    for (int y = 0; y < gm.cols(); ++y) {
      require(gm(x, y) == 0.0 || gm(x, y) == 1.0, "g entries must be 0 or 1");
      bits(x, y) = static_cast<int>(gm(x, y));
    }
  try {
    return make_xor_game(bits, pi);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

NonlocalGame nonlocal_game_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "xor") return xor_to_nonlocal(xor_game_from_json(j));
  require(kind == "nonlocal", "unknown game kind: " + kind);
  NonlocalGame g;
  g.na = to_int(field(j, "na"));
  g.nb = to_int(field(j, "nb"));
  g.oa = to_int(field(j, "oa"));
  g.ob = to_int(field(j, "ob"));
  g.pi = matrix_from_json(field(j, "pi"));
  const Json& v = field(j, "V");
  const std::size_t cells =
      std::size_t(g.na) * std::size_t(g.nb) * std::size_t(g.oa) * std::size_t(g.ob);
  require(v.is_array() && v.size() == cells, "V must be flat row-major with na*nb*oa*ob entries");
  g.win.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const int b = to_int(v[i]);
    require(b == 0 || b == 1, "V entries must be 0 or 1");
    g.win[i] = static_cast<std::uint8_t>(b);
  }
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  return g;
}

Json solution_to_json(const SdpSolution& sol) {
  return Json{{"bias", sol.dual_bias},
              {"value", value_of_bias(sol.dual_bias)},
              {"r", vector_to_json(sol.dual.r)},
              {"c", vector_to_json(sol.dual.c)},
              {"gap", sol.gap},
              {"dim", sol.primal.dim()},
              {"u", matrix_to_json(sol.primal.u)},
              {"v", matrix_to_json(sol.primal.v)}};
}

SdpSolution solution_from_json(const Json& j) {
  SdpSolution sol;
  sol.primal.u = matrix_from_json(field(j, "u"));
  sol.primal.v = matrix_from_json(field(j, "v"));
  sol.dual.r = vector_from_json(field(j, "r"));
  sol.dual.c = vector_from_json(field(j, "c"));
  sol.dual_bias = 0.5 * (sol.dual.r.sum() + sol.dual.c.sum());
  sol.gap = to_double(field(j, "gap"));
  sol.primal_bias = sol.dual_bias - sol.gap;
  return sol;
}

Json certificate_to_json(const SosCertificate& cert) {
  Json a = Json::array(), b = Json::array();
  for (const auto& t : cert.a_terms)
    a.push_back(Json{{"x", t.x}, {"weight", t.weight}, {"bhat", vector_to_json(t.bhat)}});
  for (const auto& t : cert.b_terms)
    b.push_back(Json{{"weight", t.weight}, {"v", vector_to_json(t.v)}});
  return Json{{"beta", cert.beta}, {"a_terms", a}, {"b_terms", b}};
}

SosCertificate certificate_from_json(const Json& j) {
  SosCertificate cert;
  cert.beta = to_double(field(j, "beta"));
  for (const Json& t : field(j, "a_terms")) {
    SosCertificate::ATerm at;
    at.x = to_int(field(t, "x"));
    at.weight = to_double(field(t, "weight"));
    at.bhat = vector_from_json(field(t, "bhat"));
    cert.a_terms.push_back(std::move(at));
  }
  for (const Json& t : field(j, "b_terms")) {
    SosCertificate::BTerm bt;
    bt.weight = to_double(field(t, "weight"));
    bt.v = vector_from_json(field(t, "v"));
    cert.b_terms.push_back(std::move(bt));
  }
  return cert;
}

Json compiled_strategy_to_json(const CompiledStrategy& strat) {
  Json alice = Json::array();
  for (const auto& tags : strat.alice) {
    Json per_tag = Json::array();
    for (const auto& branches : tags) {
      Json list = Json::array();
      for (const auto& br : branches)
        list.push_back(Json{{"alpha", br.alpha},
                            {"proj", cmatrix_to_json(br.proj)},
                            {"unitary", cmatrix_to_json(br.unitary)}});
      per_tag.push_back(std::move(list));
    }
    alice.push_back(std::move(per_tag));
  }
  Json bob = Json::array();
  for (const auto& pvm : strat.bob) {
    Json list = Json::array();
    for (const auto& p : pvm) list.push_back(cmatrix_to_json(p));
    bob.push_back(std::move(list));
  }
  return Json{{"dim", strat.dim}, {"psi", cvector_to_json(strat.psi)},
              {"alice", alice},   {"bob", bob}};
}

CompiledStrategy compiled_strategy_from_json(const Json& j) {
  CompiledStrategy strat;
  strat.dim = to_int(field(j, "dim"));
  strat.psi = cvector_from_json(field(j, "psi"));
  for (const Json& tags : field(j, "alice")) {
    std::vector<std::vector<CompiledStrategy::AliceBranch>> per_tag;
    require(tags.is_array(), "alice: expected per-tag arrays");
    for (const Json& branches : tags) {
      std::vector<CompiledStrategy::AliceBranch> list;
      require(branches.is_array(), "alice: expected branch arrays");
      for (const Json& br : branches) {
        CompiledStrategy::AliceBranch ab;
        ab.alpha = to_int(field(br, "alpha"));
        ab.proj = cmatrix_from_json(field(br, "proj"));
        ab.unitary = cmatrix_from_json(field(br, "unitary"));
        list.push_back(std::move(ab));
      }
      per_tag.push_back(std::move(list));
    }
    strat.alice.push_back(std::move(per_tag));
  }
  for (const Json& pvm : field(j, "bob")) {
    std::vector<CMat> list;
    require(pvm.is_array(), "bob: expected projector arrays");
    for (const Json& p : pvm) list.push_back(cmatrix_from_json(p));
    strat.bob.push_back(std::move(list));
  }
  return strat;
}

XorGame random_xor_game(int na, int nb, std::uint64_t seed) {
  if (na < 1 || nb < 1 || na > 64 || nb > 64)
    throw InputError("random game: sizes must be in [1, 64]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd cost(na, nb);
  double mass = 0.0;
  do {
    for (int x = 0; x < na; ++x)
      for (int y = 0; y < nb; ++y) cost(x, y) = gauss(rng);
    mass = cost.cwiseAbs().sum();
  } while (mass < 1e-9);
  return xor_game_from_cost(cost / mass);
}

namespace {

bool parse_random_spec(const std::string& name, int& na, int& nb, std::uint64_t& seed) {
  if (name.rfind("random:", 0) != 0) return false;
  const std::string body = name.substr(7);
  const auto x = body.find('x');
  require(x != std::string::npos, "random game: expected random:NAxNB[:seed]");
  const auto colon = body.find(':', x);
  try {
    na = std::stoi(body.substr(0, x));
    nb = std::stoi(body.substr(x + 1, colon == std::string::npos ? std::string::npos
                                                                 : colon - x - 1));
    seed = colon == std::string::npos ? 1 : std::stoull(body.substr(colon + 1));
  } catch (const std::exception&) {
    throw InputError("random game: expected random:NAxNB[:seed]");
  }
  return true;
}

}  // namespace

XorGame resolve_xor_game(const std::string& name) {
  if (name == "chsh") return chsh();
  int na = 0, nb = 0;
  std::uint64_t seed = 0;
  if (parse_random_spec(name, na, nb, seed)) return random_xor_game(na, nb, seed);
  if (name == "msquare")
    throw InputError("msquare is not an XOR game; this command needs one");
  return xor_game_from_json(load_json_file(name));
}

NonlocalGame resolve_nonlocal_game(const std::string& name) {
  if (name == "chsh") return xor_to_nonlocal(chsh());
  int na = 0, nb = 0;
  std::uint64_t seed = 0;
  if (parse_random_spec(name, na, nb, seed))
    return xor_to_nonlocal(random_xor_game(na, nb, seed));
  if (name == "msquare") return magic_square_game();
  return nonlocal_game_from_json(load_json_file(name));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

Json parse_json(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON");
  return j;
}

Json load_json_file(const std::string& path) { return parse_json(read_text_file(path)); }

}  // namespace qxor
