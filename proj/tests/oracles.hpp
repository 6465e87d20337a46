#pragma once

// Shared test helpers: a brute-force determinant, deterministic random input
// generators, known-root system builders, and a Sylvester-resultant
// elimination solver used as an independent oracle for the path tracker.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermicert/interval.hpp"
#include "fermicert/isosys.hpp"
#include "fermicert/lpoly.hpp"
#include "fermicert/polyeval.hpp"

namespace oracles {

using fermicert::LaurentPolynomial;
using fermicert::Monomial;
using fermicert::Rational;
using fermicert::SymbolicMatrix;

/// det by summing over all n! permutations.  Exponential; keep n <= 7.
inline LaurentPolynomial naive_det(const SymbolicMatrix& m) {
  const int n = m.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  LaurentPolynomial det;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    LaurentPolynomial prod =
        LaurentPolynomial::constant(inversions % 2 ? -1 : 1);
    bool zero = false;
    for (int i = 0; i < n && !zero; ++i) {
      if (m.at(i, perm[i]).is_zero())
        zero = true;
      else
        prod = prod * m.at(i, perm[i]);
    }
    if (!zero) det += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// Deterministic generator that draws from raw mt19937_64 words only, so the
/// sequences are identical on every platform (std distributions are not).
struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}

  std::uint64_t word() { return g(); }
  int range(int lo, int hi) {
    return lo + static_cast<int>(word() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  }
  double real01() { return static_cast<double>(word() >> 11) * 0x1p-53; }
  Rational rational(int num_bound, int den_bound) {
    Rational q(range(-num_bound, num_bound), range(1, den_bound));
    q.canonicalize();
    return q;
  }
};

/// Random sparse Laurent polynomial for arithmetic property tests.
inline LaurentPolynomial random_poly(Rng& rng, int max_terms, int n_vars,
                                     bool allow_z) {
  std::vector<LaurentPolynomial::Term> terms;
  const int count = rng.range(0, max_terms);
  for (int t = 0; t < count; ++t) {
    Monomial m;
    if (allow_z) m.z = {rng.range(-2, 2), rng.range(-2, 2)};
    const int nv = rng.range(0, 2);
    std::vector<int> idx;
    for (int k = 0; k < nv; ++k) idx.push_back(rng.range(0, n_vars - 1));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int i : idx) m.v.emplace_back(i, rng.range(1, 2));
    terms.push_back({std::move(m), rng.rational(4, 3)});
  }
  return LaurentPolynomial::from_terms(std::move(terms));
}

/// prod_i (v_var - r_i), expanded exactly.
inline LaurentPolynomial univariate_from_roots(
    int var, const std::vector<Rational>& roots) {
  LaurentPolynomial p = LaurentPolynomial::constant(1);
  for (const auto& r : roots)
    p = p * (LaurentPolynomial::variable(var) -
             LaurentPolynomial::constant(r));
  return p;
}

/// (x - (a+bi))(x - (a-bi)) = x^2 - 2a*x + a^2 + b^2, exact.
inline LaurentPolynomial conjugate_pair_factor(int var, const Rational& a,
                                               const Rational& b) {
  LaurentPolynomial x = LaurentPolynomial::variable(var);
  return x * x - LaurentPolynomial::constant(2 * a) * x +
         LaurentPolynomial::constant(a * a + b * b);
}

/// Two-variable system whose roots form a grid pushed through an invertible
/// linear change of variables:
///   F(x, y) = prod_i (alpha*x + beta*y - a_i)
///   G(x, y) = prod_j (gamma*x + delta*y - b_j)
/// Every root solves a 2x2 rational linear system, so all |a|*|b| of them are
/// known exactly, they are real, and none lie at infinity (the leading forms
/// share no zero when the transform is invertible).
struct GridSystem {
  fermicert::SquareSystem sys;
  std::vector<std::vector<std::pair<Rational, Rational>>> roots;
};

inline GridSystem transformed_grid_system(
    const std::vector<Rational>& as, const std::vector<Rational>& bs,
    const Rational& alpha, const Rational& beta, const Rational& gamma,
    const Rational& delta) {
  const Rational det = alpha * delta - beta * gamma;
  if (det == 0) throw std::invalid_argument("transform is not invertible");
  LaurentPolynomial X = LaurentPolynomial::variable(0);
  LaurentPolynomial Y = LaurentPolynomial::variable(1);
  LaurentPolynomial l1 = alpha * X + beta * Y;
  LaurentPolynomial l2 = gamma * X + delta * Y;
  LaurentPolynomial f = LaurentPolynomial::constant(1);
  LaurentPolynomial g = LaurentPolynomial::constant(1);
  for (const auto& a : as) f = f * (l1 - LaurentPolynomial::constant(a));
  for (const auto& b : bs) g = g * (l2 - LaurentPolynomial::constant(b));
  GridSystem out;
  out.sys = fermicert::SquareSystem::from_polynomials(2, {f, g});
  for (const auto& a : as)
    for (const auto& b : bs) {
      Rational x = (a * delta - beta * b) / det;
      Rational y = (alpha * b - a * gamma) / det;
      out.roots.push_back({{x, Rational(0)}, {y, Rational(0)}});
    }
  return out;
}

inline std::vector<std::vector<std::complex<double>>> to_doubles(
    const std::vector<std::vector<std::pair<Rational, Rational>>>& roots) {
  std::vector<std::vector<std::complex<double>>> out;
  out.reserve(roots.size());
  for (const auto& r : roots) {
    std::vector<std::complex<double>> pt;
    pt.reserve(r.size());
    for (const auto& [re, im] : r) pt.emplace_back(re.get_d(), im.get_d());
    out.push_back(std::move(pt));
  }
  return out;
}

/// Coefficients of p viewed as a polynomial in variable `var`; entry e is the
/// coefficient of var^e, a polynomial in the remaining variables.
inline std::vector<LaurentPolynomial> coeffs_in_var(const LaurentPolynomial& p,
                                                    int var) {
  int deg = 0;
  for (const auto& t : p.terms())
    for (auto [idx, e] : t.mono.v)
      if (idx == var) deg = std::max(deg, e);
  std::vector<LaurentPolynomial> out(deg + 1);
  for (const auto& t : p.terms()) {
    int e = 0;
    Monomial stripped;
    stripped.z = t.mono.z;
    for (auto [idx, ee] : t.mono.v) {
      if (idx == var)
        e = ee;
      else
        stripped.v.emplace_back(idx, ee);
    }
    out[e] += LaurentPolynomial::term(std::move(stripped), t.coeff);
  }
  return out;
}

/// Sylvester-matrix determinant eliminating `var`.  Exact; the result is a
/// polynomial in the remaining variables whose roots are the projections of
/// the common zeros of f and g.
inline LaurentPolynomial resultant(const LaurentPolynomial& f,
                                   const LaurentPolynomial& g, int var) {
  auto fc = coeffs_in_var(f, var);
  auto gc = coeffs_in_var(g, var);
  const int d1 = static_cast<int>(fc.size()) - 1;
  const int d2 = static_cast<int>(gc.size()) - 1;
  if (d1 < 1 || d2 < 1)
    throw std::invalid_argument("resultant needs positive degrees");
  SymbolicMatrix s(d1 + d2);
  for (int r = 0; r < d2; ++r)
    for (int k = 0; k <= d1; ++k) s.set(r, r + k, fc[d1 - k]);
  for (int r = 0; r < d1; ++r)
    for (int k = 0; k <= d2; ++k) s.set(d2 + r, r + k, gc[d2 - k]);
  return fermicert::sparse_cofactor_det(s);
}

/// All complex roots of a univariate polynomial with constant (numeric)
/// coefficients c[0..d]: companion-matrix eigenvalues polished by Newton.
inline std::vector<std::complex<double>> companion_roots(
    const std::vector<std::complex<double>>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1 || std::abs(c[d]) == 0.0)
    throw std::invalid_argument("degenerate polynomial");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) m(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
  std::vector<std::complex<double>> roots;
  roots.reserve(d);
  for (int i = 0; i < d; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    for (int it = 0; it < 6; ++it) {
      std::complex<double> pv = 0.0, dv = 0.0;
      for (int k = d; k >= 0; --k) {
        dv = dv * z + pv;
        pv = pv * z + c[k];
      }
      if (std::abs(dv) == 0.0) break;
      z -= pv / dv;
    }
    roots.push_back(z);
  }
  return roots;
}

/// Roots of an exact univariate polynomial in variable `var`.
inline std::vector<std::complex<double>> univariate_roots(
    const LaurentPolynomial& p, int var) {
  auto cs = coeffs_in_var(p, var);
  std::vector<std::complex<double>> c;
  c.reserve(cs.size());
  for (const auto& q : cs) {
    if (q.is_zero()) {
      c.push_back(0.0);
      continue;
    }
    if (q.term_count() != 1 || !q.terms()[0].mono.is_one())
      throw std::invalid_argument("coefficient is not constant");
    c.emplace_back(q.terms()[0].coeff.get_d(), 0.0);
  }
  return companion_roots(c);
}

/// Intersection points of a bivariate square system (variables 0 and 1):
/// eliminate variable 1 by resultant, recover the second coordinate per
/// projection root, and polish each pair with a joint Newton iteration.
/// Assumes the projections of distinct roots are distinct (generic systems).
inline std::vector<std::vector<std::complex<double>>> solve_2var(
    const fermicert::SquareSystem& sys) {
  const LaurentPolynomial& f = sys.polynomials[0];
  const LaurentPolynomial& g = sys.polynomials[1];
  LaurentPolynomial rx = resultant(f, g, 1);
  auto xroots = univariate_roots(rx, 0);
  auto fy = coeffs_in_var(f, 1);
  fermicert::CompiledSystem cs = fermicert::CompiledSystem::compile(sys);

  std::vector<std::vector<std::complex<double>>> out;
  for (auto x : xroots) {
    std::vector<std::complex<double>> c;
    c.reserve(fy.size());
    const std::complex<double> vv[2] = {x, 0.0};
    for (const auto& q : fy) c.push_back(q.evaluate({}, vv));
    while (c.size() > 1 && std::abs(c.back()) < 1e-9) c.pop_back();
    auto ys = companion_roots(c);
    std::complex<double> best = ys.front();
    double best_norm = std::numeric_limits<double>::infinity();
    for (auto y : ys) {
      Eigen::VectorXcd pt(2);
      pt << x, y;
      double norm = cs.eval(pt).lpNorm<Eigen::Infinity>();
      if (norm < best_norm) {
        best_norm = norm;
        best = y;
      }
    }
    Eigen::VectorXcd pt(2);
    pt << x, best;
    for (int it = 0; it < 5; ++it) {
      Eigen::VectorXcd fv;
      Eigen::MatrixXcd jv;
      cs.eval_jacobian(pt, fv, jv);
      pt -= jv.partialPivLu().solve(fv);
    }
    out.push_back({pt(0), pt(1)});
  }
  return out;
}

/// Exact membership of an exact complex-rational point in a box.
inline bool box_contains_exact(
    const fermicert::ComplexBox& box,
    const std::vector<std::pair<Rational, Rational>>& pt) {
  if (box.size() != static_cast<int>(pt.size())) return false;
  for (std::size_t i = 0; i < pt.size(); ++i) {
    if (!box.coords[i].re.contains(pt[i].first)) return false;
    if (!box.coords[i].im.contains(pt[i].second)) return false;
  }
  return true;
}

/// Two root lists match when they pair up one-to-one within tol (inf norm).
inline bool roots_match(
    const std::vector<std::vector<std::complex<double>>>& a,
    const std::vector<std::vector<std::complex<double>>>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& pa : a) {
    bool hit = false;
    for (std::size_t j = 0; j < b.size() && !hit; ++j) {
      if (used[j] || b[j].size() != pa.size()) continue;
      double d = 0.0;
      for (std::size_t k = 0; k < pa.size(); ++k)
        d = std::max(d, std::abs(pa[k] - b[j][k]));
      if (d <= tol) {
        used[j] = true;
        hit = true;
      }
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace oracles
