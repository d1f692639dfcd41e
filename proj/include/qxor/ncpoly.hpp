#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qxor {

struct XorGame;

enum class Party : std::uint8_t { A = 0, B = 1 };

struct Letter {
  Party party;
  int index;
};

// Canonical word in the algebra generated by order-2 observables a_x, b_y
// with a_x^2 = b_y^2 = 1 and [a_x, b_y] = 0: the Alice part precedes the Bob
// part, each part freely reduced (no adjacent equal letters).
struct Word {
  std::vector<int> a_part;
  std::vector<int> b_part;

  auto operator<=>(const Word&) const = default;
  int degree() const { return static_cast<int>(a_part.size() + b_part.size()); }
  bool empty() const { return a_part.empty() && b_part.empty(); }
};

Word normal_form(const std::vector<Letter>& raw);
Word concat(const Word& lhs, const Word& rhs);

class NcPolynomial {
 public:
  // Term-pruning threshold for float coefficients.
  static constexpr double kZeroThreshold = 1e-12;

  NcPolynomial() = default;

  static NcPolynomial zero() { return {}; }
  static NcPolynomial one() { return monomial(Word{}, 1.0); }
  static NcPolynomial letter(Party p, int index);
  static NcPolynomial monomial(Word w, double coeff);

  NcPolynomial& operator+=(const NcPolynomial& rhs);
  NcPolynomial& operator-=(const NcPolynomial& rhs);
  NcPolynomial& operator*=(double s);

  friend NcPolynomial operator+(NcPolynomial lhs, const NcPolynomial& rhs) { return lhs += rhs; }
  friend NcPolynomial operator-(NcPolynomial lhs, const NcPolynomial& rhs) { return lhs -= rhs; }
  friend NcPolynomial operator*(NcPolynomial lhs, double s) { return lhs *= s; }
  friend NcPolynomial operator*(double s, NcPolynomial rhs) { return rhs *= s; }
  friend NcPolynomial operator*(const NcPolynomial& lhs, const NcPolynomial& rhs);

  double coeff(const Word& w) const;
  double max_abs_coeff() const;
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Word, double>& terms() const { return terms_; }

  // One term per line-less "c * a0.a1 | b0.b1" clauses joined by " + ";
  // empty parts render as "1"; the zero polynomial renders as "0".
  std::string to_string() const;
  static NcPolynomial parse(const std::string& text);

 private:
  void add_term(const Word& w, double c);
  std::map<Word, double> terms_;
};

// h_G = sum_xy G_xy a_x b_y.
NcPolynomial bias_polynomial(const XorGame& game);

}  // namespace qxor
