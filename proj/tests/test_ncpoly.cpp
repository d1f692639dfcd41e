#include "doctest.h"

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "qxor/game.hpp"
#include "qxor/ncpoly.hpp"

using namespace qxor;

namespace {

// Independent oracle: polynomials as maps over raw letter strings, reduced by
// a stack (involutions within a party, parties commute). Shares no code with
// NcPolynomial.
using RawWord = std::pair<std::vector<int>, std::vector<int>>;
using RawPoly = std::map<RawWord, double>;

std::vector<int> stack_reduce(const std::vector<int>& s) {
  std::vector<int> out;
  for (int g : s) {
    if (!out.empty() && out.back() == g)
      out.pop_back();
    else
      out.push_back(g);
  }
  return out;
}

RawPoly raw_mul(const RawPoly& p, const RawPoly& q) {
  RawPoly r;
  for (const auto& [wp, cp] : p)
    for (const auto& [wq, cq] : q) {
      std::vector<int> a = wp.first;
      a.insert(a.end(), wq.first.begin(), wq.first.end());
      std::vector<int> b = wp.second;
      b.insert(b.end(), wq.second.begin(), wq.second.end());
      RawWord w{stack_reduce(a), stack_reduce(b)};
      if ((r[w] += cp * cq) == 0.0) r.erase(w);
    }
  return r;
}

RawPoly raw_add(RawPoly p, const RawPoly& q) {
  for (const auto& [w, c] : q)
    if ((p[w] += c) == 0.0) p.erase(w);
  return p;
}

RawPoly to_raw(const NcPolynomial& p) {
  RawPoly r;
  for (const auto& [w, c] : p.terms()) r[{w.a_part, w.b_part}] = c;
  return r;
}

bool raw_equal(const RawPoly& p, const RawPoly& q) {
  if (p.size() != q.size()) return false;
  for (const auto& [w, c] : p) {
    auto it = q.find(w);
    if (it == q.end() || std::abs(it->second - c) > 1e-12) return false;
  }
  return true;
}

NcPolynomial random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(1, 3), len(0, 2), idx(0, 2), coef(-2, 2);
  NcPolynomial p;
  for (int t = 0; t < nterms(rng); ++t) {
    std::vector<Letter> letters;
    for (int i = 0; i < len(rng); ++i) letters.push_back({Party::A, idx(rng)});
    for (int i = 0; i < len(rng); ++i) letters.push_back({Party::B, idx(rng)});
    int c = coef(rng);
    if (c != 0) p += NcPolynomial::monomial(normal_form(letters), double(c));
  }
  return p;
}

}  // namespace

TEST_CASE("normal form reduces involutions") {
  Word w = normal_form({{Party::A, 0}, {Party::A, 0}});
  CHECK(w.empty());

  w = normal_form({{Party::A, 0}, {Party::A, 1}, {Party::A, 1}, {Party::A, 0}});
  CHECK(w.empty());

  // Cascade: reduction of an inner pair exposes an outer pair.
  w = normal_form({{Party::A, 2}, {Party::A, 1}, {Party::A, 1}, {Party::A, 2},
                   {Party::A, 5}});
  REQUIRE(w.a_part.size() == 1);
  CHECK(w.a_part[0] == 5);
}

TEST_CASE("parties commute, same party does not") {
  NcPolynomial ab = NcPolynomial::letter(Party::A, 0) * NcPolynomial::letter(Party::B, 0);
  NcPolynomial ba = NcPolynomial::letter(Party::B, 0) * NcPolynomial::letter(Party::A, 0);
  CHECK((ab - ba).is_zero());

  NcPolynomial a01 = NcPolynomial::letter(Party::A, 0) * NcPolynomial::letter(Party::A, 1);
  NcPolynomial a10 = NcPolynomial::letter(Party::A, 1) * NcPolynomial::letter(Party::A, 0);
  CHECK_FALSE((a01 - a10).is_zero());
}

TEST_CASE("square expansion") {
  // (a0 - b0)^2 = 2 - 2 a0 b0 once the cross terms merge.
  NcPolynomial d = NcPolynomial::letter(Party::A, 0) - NcPolynomial::letter(Party::B, 0);
  NcPolynomial sq = d * d;
  CHECK(sq.coeff(Word{}) == doctest::Approx(2.0));
  Word cross;
  cross.a_part = {0};
  cross.b_part = {0};
  CHECK(sq.coeff(cross) == doctest::Approx(-2.0));
  CHECK(sq.degree() == 2);
  CHECK(sq.terms().size() == 2);
}

TEST_CASE("multiplication matches the raw oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    NcPolynomial p = random_poly(rng), q = random_poly(rng);
    CHECK(raw_equal(to_raw(p * q), raw_mul(to_raw(p), to_raw(q))));
    CHECK(raw_equal(to_raw(p + q), raw_add(to_raw(p), to_raw(q))));
  }
}

TEST_CASE("ring laws on random polynomials") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    NcPolynomial p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
    CHECK(((p * q) * r - p * (q * r)).max_abs_coeff() <= 1e-12);
    CHECK((p * (q + r) - (p * q + p * r)).max_abs_coeff() <= 1e-12);
    CHECK((p * NcPolynomial::one() - p).is_zero());
    CHECK((p * NcPolynomial::zero()).is_zero());
  }
}

TEST_CASE("letters are involutions") {
  for (int i = 0; i < 3; ++i) {
    NcPolynomial a = NcPolynomial::letter(Party::A, i);
    NcPolynomial b = NcPolynomial::letter(Party::B, i);
    CHECK((a * a - NcPolynomial::one()).is_zero());
    CHECK((b * b - NcPolynomial::one()).is_zero());
  }
}

TEST_CASE("to_string / parse round trip") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    NcPolynomial p = random_poly(rng);
    NcPolynomial back = NcPolynomial::parse(p.to_string());
    CHECK((p - back).max_abs_coeff() <= 1e-12);
  }
  CHECK(NcPolynomial::zero().to_string() == "0");
  CHECK(NcPolynomial::parse("0").is_zero());
  CHECK((NcPolynomial::parse("1") - NcPolynomial::one()).is_zero());
}

TEST_CASE("bias polynomial of chsh") {
  NcPolynomial h = bias_polynomial(chsh());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      Word w;
      w.a_part = {x};
      w.b_part = {y};
      double expected = (x == 1 && y == 1) ? -0.25 : 0.25;
      CHECK(h.coeff(w) == doctest::Approx(expected));
    }
  CHECK(h.degree() == 2);
  CHECK(h.terms().size() == 4);
}

TEST_CASE("degree") {
  CHECK(NcPolynomial::zero().degree() == 0);
  CHECK(NcPolynomial::one().degree() == 0);
  CHECK(NcPolynomial::letter(Party::B, 4).degree() == 1);
}
