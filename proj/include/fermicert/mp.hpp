#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "fermicert/lpoly.hpp"

namespace fermicert {

/// Complex number with mpf_class components.  Both parts always carry the
/// precision requested at construction; arithmetic results inherit the
/// operands' precision per GMP rules (max of the two).
struct MpComplex {
  mpf_class re, im;

  MpComplex() = default;
  explicit MpComplex(unsigned prec) : re(0, prec), im(0, prec) {}
  MpComplex(mpf_class r, mpf_class i) : re(std::move(r)), im(std::move(i)) {}
  static MpComplex from(std::complex<double> z, unsigned prec) {
    return {mpf_class(z.real(), prec), mpf_class(z.imag(), prec)};
  }
  static MpComplex from(const Rational& q, unsigned prec) {
    return {mpf_class(q, prec), mpf_class(0, prec)};
  }

  std::complex<double> to_double() const { return {re.get_d(), im.get_d()}; }
  /// |re| + |im|; cheap norm used for residual and step-size reporting.
  mpf_class abs1() const { return abs(re) + abs(im); }
};

MpComplex operator-(const MpComplex& a);
MpComplex operator+(const MpComplex& a, const MpComplex& b);
MpComplex operator-(const MpComplex& a, const MpComplex& b);
MpComplex operator*(const MpComplex& a, const MpComplex& b);
MpComplex operator/(const MpComplex& a, const MpComplex& b);

using MpVector = std::vector<MpComplex>;
using MpMatrix = std::vector<std::vector<MpComplex>>;

/// max_i |x_i| in the abs1 norm.
mpf_class vector_norm(const MpVector& x);

/// Solves A x = b by Gaussian elimination with partial pivoting (pivot
/// selected by abs1).  Throws SingularMatrixError on a zero pivot.
MpVector solve_linear(MpMatrix a, MpVector b);

}  // namespace fermicert
