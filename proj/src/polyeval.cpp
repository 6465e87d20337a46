#include "fermicert/polyeval.hpp"

#include <stdexcept>

namespace fermicert {

ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
  return {a.re + b.re, a.im + b.im};
}

ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
  return {a.re - b.re, a.im - b.im};
}

ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

namespace {

template <class T>
T generic_pow(const T& base, int e, const T& one) {
  T acc = one;
  for (int k = 0; k < e; ++k) acc = acc * base;
  return acc;
}

}  // namespace

CompiledPoly CompiledPoly::compile(const LaurentPolynomial& p, int n_vars) {
  if (!p.is_v_only())
    throw std::invalid_argument("cannot compile a polynomial with z dependence");
  CompiledPoly c;
  c.n_vars_ = n_vars;
  c.degree_ = p.is_zero() ? 0 : p.total_degree();
  c.terms_.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    CompiledTerm ct;
    ct.coeff = t.coeff;
    ct.coeff_d = {mpq_get_d(t.coeff.get_mpq_t()), 0.0};
    for (auto [idx, e] : t.mono.v) {
      if (idx < 0 || idx >= n_vars)
        throw std::invalid_argument("variable index out of range for system");
      ct.factors.emplace_back(idx, e);
    }
    c.terms_.push_back(std::move(ct));
  }
  return c;
}

std::complex<double> CompiledPoly::eval(const std::complex<double>* x) const {
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) {
    std::complex<double> v = t.coeff_d;
    for (auto [idx, e] : t.factors)
      for (int k = 0; k < e; ++k) v *= x[idx];
    acc += v;
  }
  return acc;
}

std::complex<double> CompiledPoly::eval_grad(const std::complex<double>* x,
                                             std::complex<double>* grad) const {
  std::complex<double> acc = 0.0;
  std::vector<std::complex<double>> fw;  // factor powers
  std::vector<std::complex<double>> prefix;
  for (const auto& t : terms_) {
    const size_t k = t.factors.size();
    if (k == 0) {
      acc += t.coeff_d;
      continue;
    }
    fw.assign(k, 1.0);
    for (size_t i = 0; i < k; ++i)
      fw[i] = generic_pow<std::complex<double>>(x[t.factors[i].first],
                                                t.factors[i].second, 1.0);
    // prefix[i] = product of fw[0..i), suffix built on the fly
    prefix.assign(k + 1, 1.0);
    for (size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * fw[i];
    acc += t.coeff_d * prefix[k];
    std::complex<double> suffix = 1.0;
    for (size_t i = k; i-- > 0;) {
      auto [idx, e] = t.factors[i];
      std::complex<double> others = prefix[i] * suffix;
      std::complex<double> dpow =
          double(e) * generic_pow<std::complex<double>>(x[idx], e - 1, 1.0);
      grad[idx] += t.coeff_d * others * dpow;
      suffix *= fw[i];
    }
  }
  return acc;
}

ComplexInterval CompiledPoly::eval(const ComplexBox& x) const {
  ComplexInterval acc = ComplexInterval::exact(0.0);
  const ComplexInterval one = ComplexInterval::exact(1.0);
  for (const auto& t : terms_) {
    ComplexInterval v = {RealInterval::enclose(t.coeff),
                         RealInterval::exact(0.0)};
    for (auto [idx, e] : t.factors)
      v = v * generic_pow(x.coords[idx], e, one);
    acc = acc + v;
  }
  return acc;
}

void CompiledPoly::grad(const ComplexBox& x, std::vector<ComplexInterval>& out) const {
  out.assign(n_vars_, ComplexInterval::exact(0.0));
  const ComplexInterval one = ComplexInterval::exact(1.0);
  std::vector<ComplexInterval> fw;
  std::vector<ComplexInterval> prefix;
  for (const auto& t : terms_) {
    const size_t k = t.factors.size();
    if (k == 0) continue;
    ComplexInterval cq = {RealInterval::enclose(t.coeff), RealInterval::exact(0.0)};
    fw.assign(k, one);
    for (size_t i = 0; i < k; ++i)
      fw[i] = generic_pow(x.coords[t.factors[i].first], t.factors[i].second, one);
    prefix.assign(k + 1, one);
    for (size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * fw[i];
    ComplexInterval suffix = one;
    for (size_t i = k; i-- > 0;) {
      auto [idx, e] = t.factors[i];
      ComplexInterval others = prefix[i] * suffix;
      ComplexInterval dpow = generic_pow(x.coords[idx], e - 1, one);
      if (e != 1) {
        ComplexInterval ce = ComplexInterval::exact(double(e));
        dpow = ce * dpow;
      }
      out[idx] = out[idx] + cq * others * dpow;
      suffix = suffix * fw[i];
    }
  }
}

MpComplex CompiledPoly::eval(const MpVector& x, unsigned prec) const {
  MpComplex acc(prec);
  for (const auto& t : terms_) {
    MpComplex v = MpComplex::from(t.coeff, prec);
    for (auto [idx, e] : t.factors)
      for (int k = 0; k < e; ++k) v = v * x[idx];
    acc = acc + v;
  }
  return acc;
}

void CompiledPoly::eval_grad(const MpVector& x, unsigned prec, MpComplex& value,
                             MpVector& grad) const {
  value = MpComplex(prec);
  grad.assign(n_vars_, MpComplex(prec));
  const MpComplex one{mpf_class(1, prec), mpf_class(0, prec)};
  MpVector fw;
  MpVector prefix;
  for (const auto& t : terms_) {
    const size_t k = t.factors.size();
    MpComplex cq = MpComplex::from(t.coeff, prec);
    if (k == 0) {
      value = value + cq;
      continue;
    }
    fw.assign(k, one);
    for (size_t i = 0; i < k; ++i)
      fw[i] = generic_pow(x[t.factors[i].first], t.factors[i].second, one);
    prefix.assign(k + 1, one);
    for (size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * fw[i];
    value = value + cq * prefix[k];
    MpComplex suffix = one;
    for (size_t i = k; i-- > 0;) {
      auto [idx, e] = t.factors[i];
      MpComplex others = prefix[i] * suffix;
      MpComplex dpow = generic_pow(x[idx], e - 1, one);
      if (e != 1) dpow = MpComplex{mpf_class(e, prec), mpf_class(0, prec)} * dpow;
      grad[idx] = grad[idx] + cq * others * dpow;
      suffix = suffix * fw[i];
    }
  }
}

ComplexRational CompiledPoly::eval_exact(const std::vector<ComplexRational>& x) const {
  ComplexRational acc{0, 0};
  const ComplexRational one{1, 0};
  for (const auto& t : terms_) {
    ComplexRational v{t.coeff, 0};
    for (auto [idx, e] : t.factors) v = v * generic_pow(x[idx], e, one);
    acc = acc + v;
  }
  return acc;
}

CompiledSystem CompiledSystem::compile(const SquareSystem& sys) {
  CompiledSystem c;
  c.n_vars_ = sys.n_vars;
  c.polys_.reserve(sys.polynomials.size());
  for (const auto& p : sys.polynomials)
    c.polys_.push_back(CompiledPoly::compile(p, sys.n_vars));
  return c;
}

std::vector<int> CompiledSystem::degrees() const {
  std::vector<int> d;
  d.reserve(polys_.size());
  for (const auto& p : polys_) d.push_back(p.total_degree());
  return d;
}

Eigen::VectorXcd CompiledSystem::eval(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd f(polys_.size());
  for (size_t i = 0; i < polys_.size(); ++i) f(i) = polys_[i].eval(x.data());
  return f;
}

Eigen::MatrixXcd CompiledSystem::jacobian(const Eigen::VectorXcd& x) const {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(polys_.size(), n_vars_);
  std::vector<std::complex<double>> row(n_vars_);
  for (size_t i = 0; i < polys_.size(); ++i) {
    std::fill(row.begin(), row.end(), std::complex<double>(0.0));
    polys_[i].eval_grad(x.data(), row.data());
    for (int c = 0; c < n_vars_; ++c) j(i, c) = row[c];
  }
  return j;
}

void CompiledSystem::eval_jacobian(const Eigen::VectorXcd& x, Eigen::VectorXcd& f,
                                   Eigen::MatrixXcd& j) const {
  f.resize(polys_.size());
  j = Eigen::MatrixXcd::Zero(polys_.size(), n_vars_);
  std::vector<std::complex<double>> row(n_vars_);
  for (size_t i = 0; i < polys_.size(); ++i) {
    std::fill(row.begin(), row.end(), std::complex<double>(0.0));
    f(i) = polys_[i].eval_grad(x.data(), row.data());
    for (int c = 0; c < n_vars_; ++c) j(i, c) = row[c];
  }
}

ComplexBox CompiledSystem::eval(const ComplexBox& x) const {
  ComplexBox f;
  f.coords.reserve(polys_.size());
  for (const auto& p : polys_) f.coords.push_back(p.eval(x));
  return f;
}

ComplexIntervalMatrix CompiledSystem::jacobian(const ComplexBox& x) const {
  ComplexIntervalMatrix j(polys_.size());
  for (size_t i = 0; i < polys_.size(); ++i) polys_[i].grad(x, j[i]);
  return j;
}

MpVector CompiledSystem::eval(const MpVector& x, unsigned prec) const {
  MpVector f;
  f.reserve(polys_.size());
  for (const auto& p : polys_) f.push_back(p.eval(x, prec));
  return f;
}

MpMatrix CompiledSystem::jacobian(const MpVector& x, unsigned prec) const {
  MpMatrix j(polys_.size());
  MpComplex val(prec);
  for (size_t i = 0; i < polys_.size(); ++i) polys_[i].eval_grad(x, prec, val, j[i]);
  return j;
}

std::vector<ComplexRational> CompiledSystem::eval_exact(
    const std::vector<ComplexRational>& x) const {
  std::vector<ComplexRational> f;
  f.reserve(polys_.size());
  for (const auto& p : polys_) f.push_back(p.eval_exact(x));
  return f;
}

}  // namespace fermicert
