#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fermicert/lpoly.hpp"

namespace fermicert {

struct IntervalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed real interval [lo, hi] with finite endpoints.  Arithmetic rounds
/// outward by a one-ulp post-adjustment of both endpoints; operations whose
/// floating-point result is exact by construction (adding a degenerate zero,
/// multiplying by exact 0 or +-1, negation) skip the adjustment.  Overflow
/// raises IntervalError rather than producing infinities.
struct RealInterval {
  double lo = 0.0, hi = 0.0;

  RealInterval() = default;
  RealInterval(double lo_, double hi_);
  static RealInterval exact(double x) { return RealInterval(x, x); }
  /// Tightest double enclosure of an exact rational.
  static RealInterval enclose(const Rational& q);

  double mid() const;
  /// Radius r such that [mid - r, mid + r] covers [lo, hi].
  double rad() const;
  double width() const;
  bool is_degenerate() const { return lo == hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Rational& q) const;
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool strictly_inside(const RealInterval& outer) const {
    return outer.lo < lo && hi < outer.hi;
  }
  bool intersects(const RealInterval& o) const { return lo <= o.hi && o.lo <= hi; }

  bool operator==(const RealInterval&) const = default;
};

RealInterval operator-(const RealInterval& a);
RealInterval operator+(const RealInterval& a, const RealInterval& b);
RealInterval operator-(const RealInterval& a, const RealInterval& b);
RealInterval operator*(const RealInterval& a, const RealInterval& b);
RealInterval operator/(const RealInterval& a, const RealInterval& b);
RealInterval hull(const RealInterval& a, const RealInterval& b);
/// Throws IntervalError when the intersection is empty.
RealInterval intersect(const RealInterval& a, const RealInterval& b);

/// "mid +/- rad" in the printed certificate style.
std::string interval_to_string(const RealInterval& a);

/// Axis-aligned rectangle in the complex plane.
struct ComplexInterval {
  RealInterval re, im;

  static ComplexInterval exact(std::complex<double> p) {
    return {RealInterval::exact(p.real()), RealInterval::exact(p.imag())};
  }
  std::complex<double> mid() const { return {re.mid(), im.mid()}; }
  bool contains(std::complex<double> p) const {
    return re.contains(p.real()) && im.contains(p.imag());
  }
  bool strictly_inside(const ComplexInterval& outer) const {
    return re.strictly_inside(outer.re) && im.strictly_inside(outer.im);
  }
  ComplexInterval conj() const { return {re, -im}; }
  bool operator==(const ComplexInterval&) const = default;
};

ComplexInterval operator-(const ComplexInterval& a);
ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval intersect(const ComplexInterval& a, const ComplexInterval& b);

/// Cartesian product of complex rectangles (one per coordinate).
struct ComplexBox {
  std::vector<ComplexInterval> coords;

  static ComplexBox degenerate(const std::vector<std::complex<double>>& pt);
  /// Box of the given radius around pt.  With symmetric_imaginary the
  /// imaginary intervals are [-r, r], making the box conjugate-symmetric.
  static ComplexBox centered(const std::vector<std::complex<double>>& pt,
                             double radius, bool symmetric_imaginary);

  int size() const { return static_cast<int>(coords.size()); }
  std::vector<std::complex<double>> midpoint() const;
  double max_radius() const;
  bool contains(const std::vector<std::complex<double>>& pt) const;
  bool strictly_inside(const ComplexBox& outer) const;
  /// Exact test: every imaginary interval satisfies lo == -hi.
  bool is_conjugate_symmetric() const;
  ComplexBox conj() const;

  bool operator==(const ComplexBox&) const = default;
};

ComplexBox operator+(const ComplexBox& a, const ComplexBox& b);
ComplexBox operator-(const ComplexBox& a, const ComplexBox& b);
ComplexBox intersect(const ComplexBox& a, const ComplexBox& b);

using ComplexIntervalMatrix = std::vector<std::vector<ComplexInterval>>;

/// Enclosure of M*x for an interval matrix and box vector.
ComplexBox interval_mat_vec(const ComplexIntervalMatrix& m, const ComplexBox& x);

/// Floating-point inverse (full-pivot LU).  Throws SingularMatrixError when
/// the factorization reports rank deficiency.
Eigen::MatrixXcd midpoint_inverse(const Eigen::MatrixXcd& m);

}  // namespace fermicert
