#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fermicert/lpoly.hpp"

namespace fermicert {

/// Fundamental domain of the period lattice q1*Z x q2*Z on Z^2.  Site labels
/// (m, n) are 1-based with 1 <= m <= q1, 1 <= n <= q2; the canonical linear
/// order is (1,1), (2,1), ..., (q1,1), (1,2), ... (first index fastest).
struct Lattice2 {
  int q1 = 0, q2 = 0;

  Lattice2(int q1_, int q2_, bool allow_non_coprime = false);

  int sites() const { return q1 * q2; }
  int site_index(int m, int n) const;
  std::pair<int, int> site_label(int index) const;
};

/// Real potential sampled on the fundamental domain, canonical site order.
struct PotentialGrid {
  Lattice2 lattice;
  std::vector<double> values;

  static PotentialGrid zero(const Lattice2& lat) {
    return {lat, std::vector<double>(lat.sites(), 0.0)};
  }
  double at(int m, int n) const { return values[lattice.site_index(m, n)]; }
  double mean() const;
};

/// Parsers reject wrong-sized value arrays and malformed input with
/// descriptive errors (CSV errors carry a line number).
/// JSON layout: {"q1": ..., "q2": ..., "values": [... canonical order ...]}.
/// CSV layout: q2 rows of q1 comma-separated values; line n holds sites
/// (1,n) .. (q1,n), so reading row by row follows the canonical order.
PotentialGrid load_potential_json(const std::string& path);
PotentialGrid load_potential_csv(const std::string& path);
/// Dispatches on the file extension (.json / .csv).
PotentialGrid load_potential(const std::string& path);
void save_potential_json(const PotentialGrid& grid, const std::string& path);

/// The Floquet matrix of the discrete Schrodinger operator -- entries over
/// sites (m,n), (m',n'):
///   the variable v_{m,n}              if (m,n) == (m',n')
///   1                                 if |m-m'|^2 + |n-n'|^2 == 1
///   z1   if m' = 1, m = q1, n = n'    (wrap in the first direction)
///   z1^-1 if m' = q1, m = 1, n = n'
///   z2   if m = m', n' = 1, n = q2    (wrap in the second direction)
///   z2^-1 if m = m', n' = q2, n = 1
///   0                                 otherwise
/// Requires q1, q2 >= 3 so the wrap cases stay disjoint from the adjacency
/// case.
SymbolicMatrix build_symbolic_floquet(const Lattice2& lat);

/// det of the Floquet matrix at V = 0 (exact, symbolic in z1, z2).
LaurentPolynomial det_zero_potential(const Lattice2& lat);

/// Floquet matrix with numbers substituted for the potential and z.
/// Throws std::domain_error at z = 0 (the inverse powers have a pole).
Eigen::MatrixXcd build_numeric_floquet(const PotentialGrid& grid,
                                       std::complex<double> z1,
                                       std::complex<double> z2);

/// det(D_V(z) - lambda*I) by LU factorization.
std::complex<double> numeric_det(const PotentialGrid& grid,
                                 std::complex<double> z1,
                                 std::complex<double> z2,
                                 std::complex<double> lambda);

}  // namespace fermicert
