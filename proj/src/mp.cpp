#include "fermicert/mp.hpp"

#include "fermicert/interval.hpp"

namespace fermicert {

MpComplex operator-(const MpComplex& a) { return {-a.re, -a.im}; }

MpComplex operator+(const MpComplex& a, const MpComplex& b) {
  return {a.re + b.re, a.im + b.im};
}

MpComplex operator-(const MpComplex& a, const MpComplex& b) {
  return {a.re - b.re, a.im - b.im};
}

MpComplex operator*(const MpComplex& a, const MpComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

MpComplex operator/(const MpComplex& a, const MpComplex& b) {
  mpf_class den = b.re * b.re + b.im * b.im;
  if (den == 0) throw SingularMatrixError("division by zero");
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

mpf_class vector_norm(const MpVector& x) {
  mpf_class n = 0;
  for (const auto& c : x) {
    mpf_class a = c.abs1();
    if (a > n) n = a;
  }
  return n;
}

MpVector solve_linear(MpMatrix a, MpVector b) {
  const size_t n = b.size();
  if (a.size() != n) throw SingularMatrixError("non-square system");
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    mpf_class best = a[col][col].abs1();
    for (size_t r = col + 1; r < n; ++r) {
      mpf_class cand = a[r][col].abs1();
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == 0) throw SingularMatrixError("singular linear system");
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    for (size_t r = col + 1; r < n; ++r) {
      if (a[r][col].re == 0 && a[r][col].im == 0) continue;
      MpComplex f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] = a[r][c] - f * a[col][c];
      b[r] = b[r] - f * b[col];
    }
  }
  MpVector x(n);
  for (size_t i = n; i-- > 0;) {
    MpComplex acc = b[i];
    for (size_t c = i + 1; c < n; ++c) acc = acc - a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace fermicert
