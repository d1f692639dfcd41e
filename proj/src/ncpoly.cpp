#include "qxor/ncpoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qxor/game.hpp"

namespace qxor {

namespace {

// Free reduction for order-2 generators: a letter cancels with an equal
// neighbor; a stack pass is complete because cancellation only exposes
// earlier letters.
void push_reduced(std::vector<int>& stack, int letter) {
  if (!stack.empty() && stack.back() == letter)
    stack.pop_back();
  else
    stack.push_back(letter);
}

std::vector<int> reduce_concat(const std::vector<int>& lhs, const std::vector<int>& rhs) {
  std::vector<int> out = lhs;
  for (int l : rhs) push_reduced(out, l);
  return out;
}

}  // namespace

Word normal_form(const std::vector<Letter>& raw) {
  Word w;
  // Cross-party letters commute, so the within-party subsequences are the
  // only order that matters.
  for (const Letter& l : raw) {
    if (l.index < 0) throw std::invalid_argument("normal_form: negative generator index");
    if (l.party == Party::A)
      push_reduced(w.a_part, l.index);
    else
      push_reduced(w.b_part, l.index);
  }
  return w;
}

Word concat(const Word& lhs, const Word& rhs) {
  Word w;
  w.a_part = reduce_concat(lhs.a_part, rhs.a_part);
  w.b_part = reduce_concat(lhs.b_part, rhs.b_part);
  return w;
}

NcPolynomial NcPolynomial::letter(Party p, int index) {
  Word w;
  (p == Party::A ? w.a_part : w.b_part).push_back(index);
  return monomial(w, 1.0);
}

NcPolynomial NcPolynomial::monomial(Word w, double coeff) {
  NcPolynomial p;
  p.add_term(w, coeff);
  return p;
}

void NcPolynomial::add_term(const Word& w, double c) {
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    if (std::abs(c) > kZeroThreshold) terms_.emplace(w, c);
    return;
  }
  it->second += c;
  if (std::abs(it->second) <= kZeroThreshold) terms_.erase(it);
}

NcPolynomial& NcPolynomial::operator+=(const NcPolynomial& rhs) {
  for (const auto& [w, c] : rhs.terms_) add_term(w, c);
  return *this;
}

NcPolynomial& NcPolynomial::operator-=(const NcPolynomial& rhs) {
  for (const auto& [w, c] : rhs.terms_) add_term(w, -c);
  return *this;
}

NcPolynomial& NcPolynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  std::map<Word, double> out;
  for (const auto& [w, c] : terms_)
    if (std::abs(c * s) > kZeroThreshold) out.emplace(w, c * s);
  terms_ = std::move(out);
  return *this;
}

NcPolynomial operator*(const NcPolynomial& lhs, const NcPolynomial& rhs) {
  NcPolynomial out;
  for (const auto& [wl, cl] : lhs.terms_)
    for (const auto& [wr, cr] : rhs.terms_) out.add_term(concat(wl, wr), cl * cr);
  return out;
}

double NcPolynomial::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0.0 : it->second;
}

double NcPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

int NcPolynomial::degree() const {
  int d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, w.degree());
  return d;
}

std::string NcPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  auto part = [](const std::vector<int>& letters, char prefix) {
    if (letters.empty()) return std::string("1");
    std::string s;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (i) s += '.';
      s += prefix;
      s += std::to_string(letters[i]);
    }
    return s;
  };
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    out += buf;
    out += " * " + part(w.a_part, 'a') + " | " + part(w.b_part, 'b');
  }
  return out;
}

namespace {

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    std::size_t hit = s.find(sep, pos);
    if (hit == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

std::vector<int> parse_part(const std::string& text, char prefix) {
  std::vector<int> letters;
  if (text == "1") return letters;
  for (const std::string& tok : split_on(text, ".")) {
    if (tok.size() < 2 || tok[0] != prefix)
      throw std::invalid_argument("ncpoly parse: bad letter '" + tok + "'");
    std::size_t used = 0;
    int idx = std::stoi(tok.substr(1), &used);
    if (used + 1 != tok.size() || idx < 0)
      throw std::invalid_argument("ncpoly parse: bad letter index '" + tok + "'");
    letters.push_back(idx);
  }
  return letters;
}

}  // namespace

NcPolynomial NcPolynomial::parse(const std::string& text) {
  NcPolynomial p;
  if (text == "0") return p;
  for (const std::string& term : split_on(text, " + ")) {
    auto star = split_on(term, " * ");
    if (star.size() > 2) throw std::invalid_argument("ncpoly parse: repeated ' * ' in term");
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(star[0], &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("ncpoly parse: bad coefficient");
    }
    if (used != star[0].size()) throw std::invalid_argument("ncpoly parse: bad coefficient");
    if (star.size() == 1) {  // bare constant term
      p.add_term(Word{}, c);
      continue;
    }
    auto bar = split_on(star[1], " | ");
    if (bar.size() != 2) throw std::invalid_argument("ncpoly parse: missing ' | ' in term");
    std::vector<Letter> raw;
    for (int idx : parse_part(bar[0], 'a')) raw.push_back({Party::A, idx});
    for (int idx : parse_part(bar[1], 'b')) raw.push_back({Party::B, idx});
    p.add_term(normal_form(raw), c);
  }
  return p;
}

NcPolynomial bias_polynomial(const XorGame& game) {
  game.validate();
  NcPolynomial p;
  for (int x = 0; x < game.na(); ++x)
    for (int y = 0; y < game.nb(); ++y) {
      Word w;
      w.a_part = {x};
      w.b_part = {y};
      p += NcPolynomial::monomial(w, game.cost(x, y));
    }
  return p;
}

}  // namespace qxor
