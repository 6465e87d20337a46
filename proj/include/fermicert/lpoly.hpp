#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace fermicert {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses an exact rational from a decimal string "p" or "p/q".
/// Floating-point notation is rejected; use exact fractions.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

/// Monomial in the Laurent variables z1, z2 and the ordinary variables
/// v_0 .. v_{n-1}.  z exponents may be negative (z1*z1^-1 = 1 is structural);
/// v exponents are kept sparse, sorted by variable index, all positive.
struct Monomial {
  std::array<int, 2> z{0, 0};
  std::vector<std::pair<int, int>> v;

  static Monomial one() { return {}; }
  static Monomial z_power(int e1, int e2);
  static Monomial variable(int index, int exponent = 1);

  bool is_one() const { return z[0] == 0 && z[1] == 0 && v.empty(); }
  bool has_z() const { return z[0] != 0 || z[1] != 0; }
  bool has_v() const { return !v.empty(); }
  int v_degree() const;
  Monomial z_part() const;
  Monomial v_part() const;
  Monomial invert_z() const;

  Monomial operator*(const Monomial& o) const;
  bool operator==(const Monomial& o) const = default;
};

/// Total order used for canonical term storage: lexicographic on
/// (z1 exponent, z2 exponent, dense v exponent vector).  Translation
/// invariant: a < b implies a*t < b*t for any monomial t.
int compare(const Monomial& a, const Monomial& b);
inline bool operator<(const Monomial& a, const Monomial& b) { return compare(a, b) < 0; }
inline bool operator>(const Monomial& a, const Monomial& b) { return compare(a, b) > 0; }
inline bool operator<=(const Monomial& a, const Monomial& b) { return compare(a, b) <= 0; }
inline bool operator>=(const Monomial& a, const Monomial& b) { return compare(a, b) >= 0; }

/// Sparse Laurent polynomial with exact rational coefficients.  Terms are
/// kept in strictly descending canonical monomial order with no zero
/// coefficients, so structural equality is semantic equality.
class LaurentPolynomial {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
    bool operator==(const Term& o) const = default;
  };

  LaurentPolynomial() = default;

  static LaurentPolynomial zero() { return {}; }
  static LaurentPolynomial constant(Rational c);
  static LaurentPolynomial variable(int index);
  static LaurentPolynomial z_power(int e1, int e2);
  static LaurentPolynomial term(Monomial m, Rational c);
  /// Builds from an arbitrary term list (merges duplicates, drops zeros).
  static LaurentPolynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool operator==(const LaurentPolynomial& o) const = default;

  LaurentPolynomial operator-() const;
  LaurentPolynomial operator+(const LaurentPolynomial& o) const;
  LaurentPolynomial operator-(const LaurentPolynomial& o) const;
  LaurentPolynomial operator*(const LaurentPolynomial& o) const;
  LaurentPolynomial& operator+=(const LaurentPolynomial& o);
  LaurentPolynomial& operator-=(const LaurentPolynomial& o);
  LaurentPolynomial operator*(const Rational& c) const;

  bool is_v_only() const;
  bool is_z_free() const { return is_v_only(); }
  bool has_v() const;

  /// Total degree in the v variables.  Throws std::domain_error on the zero
  /// polynomial (degree undefined).
  int total_degree() const;

  /// Leading (canonically largest) term's coefficient.  Throws on zero.
  const Rational& leading_coeff() const;
  /// Negated if the leading coefficient is negative.
  LaurentPolynomial sign_normalized() const;

  LaurentPolynomial derivative(int var_index) const;

  /// Substitutes exact rational values for all v variables; z survives.
  LaurentPolynomial substitute_v(const std::vector<Rational>& values) const;
  /// The sub-polynomial of terms free of every v variable.
  LaurentPolynomial v_free_part() const;

  /// Numeric evaluation.  zvals = {z1, z2}; vvals indexed by variable.
  /// Throws std::domain_error when a negative z power meets z = 0.
  std::complex<double> evaluate(std::span<const std::complex<double>> zvals,
                                std::span<const std::complex<double>> vvals) const;
  /// Exact evaluation for z-free polynomials.
  Rational evaluate_exact(const std::vector<Rational>& vvals) const;

  /// Groups terms by their z-monomial.  Returns (z-monomial, v-coefficient)
  /// pairs in descending z order; reassembling them recovers the polynomial.
  std::vector<std::pair<Monomial, LaurentPolynomial>> coefficients_by_z() const;

  using VarNamer = std::function<std::string(int)>;
  /// Renders in descending term order, e.g. "z1^5+v0*v1-2".  var_name maps a
  /// v index to its display name; defaults to v<index>.
  std::string to_string(const VarNamer& var_name = {}) const;

 private:
  std::vector<Term> terms_;
};

inline LaurentPolynomial operator*(const Rational& c, const LaurentPolynomial& p) {
  return p * c;
}

/// Dense square matrix of Laurent polynomials; zero entries are empty
/// polynomials.
class SymbolicMatrix {
 public:
  explicit SymbolicMatrix(int n);
  int size() const { return n_; }
  const LaurentPolynomial& at(int r, int c) const { return entries_[idx(r, c)]; }
  void set(int r, int c, LaurentPolynomial p) { entries_[idx(r, c)] = std::move(p); }
  SymbolicMatrix substitute_v(const std::vector<Rational>& values) const;

 private:
  int idx(int r, int c) const;
  int n_ = 0;
  std::vector<LaurentPolynomial> entries_;
};

/// Exact determinant by cofactor expansion along the sparsest row or column,
/// memoizing minors keyed by (row set, column set) bitmasks.  Requires
/// size <= 64.
LaurentPolynomial sparse_cofactor_det(const SymbolicMatrix& m);

}  // namespace fermicert
