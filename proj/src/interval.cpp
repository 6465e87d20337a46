#include "fermicert/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fermicert {

namespace {

void check_finite(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw IntervalError("interval endpoint overflowed");
}

double step_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

double step_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

/// One-ulp outward widening applied after an inexact operation.
RealInterval widen(double lo, double hi) {
  check_finite(lo, hi);
  lo = step_down(lo);
  hi = step_up(hi);
  check_finite(lo, hi);
  return RealInterval(lo, hi);
}

bool is_exact_zero(const RealInterval& a) { return a.lo == 0.0 && a.hi == 0.0; }
bool is_exact(const RealInterval& a, double x) { return a.lo == x && a.hi == x; }

}  // namespace

RealInterval::RealInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  check_finite(lo_, hi_);
  if (lo_ > hi_) throw IntervalError("empty interval: lo > hi");
}

RealInterval RealInterval::enclose(const Rational& q) {
  double d = mpq_get_d(q.get_mpq_t());  // rounds toward zero
  if (!std::isfinite(d)) throw IntervalError("rational out of double range");
  double lo = d, hi = d;
  // mpq_get_d is inexact in general; push the violated endpoint outward
  // until the exact value is contained.
  while (Rational(lo) > q) lo = step_down(lo);
  while (Rational(hi) < q) hi = step_up(hi);
  check_finite(lo, hi);
  return RealInterval(lo, hi);
}

double RealInterval::mid() const {
  double m = 0.5 * (lo + hi);
  if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
  if (m < lo) m = lo;
  if (m > hi) m = hi;
  return m;
}

double RealInterval::rad() const {
  if (lo == hi) return 0.0;
  double m = mid();
  double r = std::max(step_up(m - lo), step_up(hi - m));
  return std::max(r, 0.0);
}

double RealInterval::width() const { return step_up(hi - lo); }

bool RealInterval::contains(const Rational& q) const {
  return Rational(lo) <= q && q <= Rational(hi);
}

RealInterval operator-(const RealInterval& a) {
  return RealInterval(-a.hi, -a.lo);  // exact
}

RealInterval operator+(const RealInterval& a, const RealInterval& b) {
  if (is_exact_zero(a)) return b;
  if (is_exact_zero(b)) return a;
  return widen(a.lo + b.lo, a.hi + b.hi);
}

RealInterval operator-(const RealInterval& a, const RealInterval& b) {
  if (is_exact_zero(b)) return a;
  if (is_exact_zero(a)) return -b;
  return widen(a.lo - b.hi, a.hi - b.lo);
}

RealInterval operator*(const RealInterval& a, const RealInterval& b) {
  // Exact shortcuts keep degenerate zeros degenerate, so purely real data
  // stays purely real through a computation.
  if (is_exact_zero(a) || is_exact_zero(b)) return RealInterval(0.0, 0.0);
  if (is_exact(a, 1.0)) return b;
  if (is_exact(b, 1.0)) return a;
  if (is_exact(a, -1.0)) return -b;
  if (is_exact(b, -1.0)) return -a;
  double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return widen(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

RealInterval operator/(const RealInterval& a, const RealInterval& b) {
  if (b.contains_zero()) throw IntervalError("division by interval containing zero");
  if (is_exact(b, 1.0)) return a;
  if (is_exact_zero(a)) return RealInterval(0.0, 0.0);
  double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  return widen(std::min({q1, q2, q3, q4}), std::max({q1, q2, q3, q4}));
}

RealInterval hull(const RealInterval& a, const RealInterval& b) {
  return RealInterval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

RealInterval intersect(const RealInterval& a, const RealInterval& b) {
  double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (lo > hi) throw IntervalError("empty intersection");
  return RealInterval(lo, hi);
}

std::string interval_to_string(const RealInterval& a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g +/- %.2e", a.mid(), a.rad());
  return buf;
}

ComplexInterval operator-(const ComplexInterval& a) { return {-a.re, -a.im}; }

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re + b.re, a.im + b.im};
}

ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re - b.re, a.im - b.im};
}

ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
  RealInterval den = b.re * b.re + b.im * b.im;
  ComplexInterval num = a * b.conj();
  return {num.re / den, num.im / den};
}

ComplexInterval intersect(const ComplexInterval& a, const ComplexInterval& b) {
  return {intersect(a.re, b.re), intersect(a.im, b.im)};
}

ComplexBox ComplexBox::degenerate(const std::vector<std::complex<double>>& pt) {
  ComplexBox b;
  b.coords.reserve(pt.size());
  for (auto p : pt) b.coords.push_back(ComplexInterval::exact(p));
  return b;
}

ComplexBox ComplexBox::centered(const std::vector<std::complex<double>>& pt,
                                double radius, bool symmetric_imaginary) {
  if (!(radius >= 0.0)) throw IntervalError("negative box radius");
  ComplexBox b;
  b.coords.reserve(pt.size());
  for (auto p : pt) {
    RealInterval re(p.real() - radius, p.real() + radius);
    RealInterval im = symmetric_imaginary
                          ? RealInterval(-radius, radius)
                          : RealInterval(p.imag() - radius, p.imag() + radius);
    b.coords.push_back({re, im});
  }
  return b;
}

std::vector<std::complex<double>> ComplexBox::midpoint() const {
  std::vector<std::complex<double>> m;
  m.reserve(coords.size());
  for (const auto& c : coords) m.push_back(c.mid());
  return m;
}

double ComplexBox::max_radius() const {
  double r = 0.0;
  for (const auto& c : coords) r = std::max({r, c.re.rad(), c.im.rad()});
  return r;
}

bool ComplexBox::contains(const std::vector<std::complex<double>>& pt) const {
  if (pt.size() != coords.size()) return false;
  for (size_t i = 0; i < pt.size(); ++i)
    if (!coords[i].contains(pt[i])) return false;
  return true;
}

bool ComplexBox::strictly_inside(const ComplexBox& outer) const {
  if (outer.coords.size() != coords.size()) return false;
  for (size_t i = 0; i < coords.size(); ++i)
    if (!coords[i].strictly_inside(outer.coords[i])) return false;
  return true;
}

bool ComplexBox::is_conjugate_symmetric() const {
  for (const auto& c : coords)
    if (c.im.lo != -c.im.hi) return false;
  return true;
}

ComplexBox ComplexBox::conj() const {
  ComplexBox b;
  b.coords.reserve(coords.size());
  for (const auto& c : coords) b.coords.push_back(c.conj());
  return b;
}

ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) {
  if (a.coords.size() != b.coords.size()) throw IntervalError("box size mismatch");
  ComplexBox r;
  r.coords.reserve(a.coords.size());
  for (size_t i = 0; i < a.coords.size(); ++i)
    r.coords.push_back(a.coords[i] + b.coords[i]);
  return r;
}

ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) {
  if (a.coords.size() != b.coords.size()) throw IntervalError("box size mismatch");
  ComplexBox r;
  r.coords.reserve(a.coords.size());
  for (size_t i = 0; i < a.coords.size(); ++i)
    r.coords.push_back(a.coords[i] - b.coords[i]);
  return r;
}

ComplexBox intersect(const ComplexBox& a, const ComplexBox& b) {
  if (a.coords.size() != b.coords.size()) throw IntervalError("box size mismatch");
  ComplexBox r;
  r.coords.reserve(a.coords.size());
  for (size_t i = 0; i < a.coords.size(); ++i)
    r.coords.push_back(intersect(a.coords[i], b.coords[i]));
  return r;
}

ComplexBox interval_mat_vec(const ComplexIntervalMatrix& m, const ComplexBox& x) {
  ComplexBox r;
  r.coords.reserve(m.size());
  for (const auto& row : m) {
    if (row.size() != x.coords.size()) throw IntervalError("matrix/vector size mismatch");
    ComplexInterval acc = ComplexInterval::exact(0.0);
    for (size_t j = 0; j < row.size(); ++j) acc = acc + row[j] * x.coords[j];
    r.coords.push_back(acc);
  }
  return r;
}

Eigen::MatrixXcd midpoint_inverse(const Eigen::MatrixXcd& m) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw SingularMatrixError("midpoint matrix is singular");
  return lu.inverse();
}

}  // namespace fermicert
