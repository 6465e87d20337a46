#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fermicert/interval.hpp"
#include "fermicert/isosys.hpp"
#include "fermicert/lpoly.hpp"
#include "fermicert/mp.hpp"

namespace fermicert {

/// Complex number with exact rational components.
struct ComplexRational {
  Rational re, im;

  static ComplexRational from(std::complex<double> z) {
    // double -> mpq conversion is exact
    return {Rational(z.real()), Rational(z.imag())};
  }
  bool is_real() const { return im == 0; }
};

ComplexRational operator+(const ComplexRational& a, const ComplexRational& b);
ComplexRational operator-(const ComplexRational& a, const ComplexRational& b);
ComplexRational operator*(const ComplexRational& a, const ComplexRational& b);

struct CompiledTerm {
  Rational coeff;
  std::complex<double> coeff_d;
  /// (variable index, exponent >= 1) pairs, strictly increasing indices.
  std::vector<std::pair<int, int>> factors;
};

/// A potential-only polynomial flattened to a term list for fast repeated
/// evaluation over several scalar types.  Gradients use the prefix/suffix
/// product trick, so no derivative polynomials are stored.
class CompiledPoly {
 public:
  static CompiledPoly compile(const LaurentPolynomial& p, int n_vars);

  int n_vars() const { return n_vars_; }
  int total_degree() const { return degree_; }
  const std::vector<CompiledTerm>& terms() const { return terms_; }

  std::complex<double> eval(const std::complex<double>* x) const;
  /// Accumulates the gradient into grad (not cleared here); returns the value.
  std::complex<double> eval_grad(const std::complex<double>* x,
                                 std::complex<double>* grad) const;

  ComplexInterval eval(const ComplexBox& x) const;
  void grad(const ComplexBox& x, std::vector<ComplexInterval>& out) const;

  MpComplex eval(const MpVector& x, unsigned prec) const;
  void eval_grad(const MpVector& x, unsigned prec, MpComplex& value,
                 MpVector& grad) const;

  ComplexRational eval_exact(const std::vector<ComplexRational>& x) const;

 private:
  int n_vars_ = 0;
  int degree_ = 0;
  std::vector<CompiledTerm> terms_;
};

/// A square (or slice-reduced) system compiled for numeric work.
class CompiledSystem {
 public:
  static CompiledSystem compile(const SquareSystem& sys);

  int n_vars() const { return n_vars_; }
  int n_polys() const { return static_cast<int>(polys_.size()); }
  const CompiledPoly& poly(int i) const { return polys_[i]; }
  /// Total degrees, the Bezout factors of the start system.
  std::vector<int> degrees() const;

  Eigen::VectorXcd eval(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& x) const;
  void eval_jacobian(const Eigen::VectorXcd& x, Eigen::VectorXcd& f,
                     Eigen::MatrixXcd& j) const;

  ComplexBox eval(const ComplexBox& x) const;
  ComplexIntervalMatrix jacobian(const ComplexBox& x) const;

  MpVector eval(const MpVector& x, unsigned prec) const;
  MpMatrix jacobian(const MpVector& x, unsigned prec) const;

  std::vector<ComplexRational> eval_exact(const std::vector<ComplexRational>& x) const;

 private:
  int n_vars_ = 0;
  std::vector<CompiledPoly> polys_;
};

}  // namespace fermicert
