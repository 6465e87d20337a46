#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermicert/floquet.hpp"
#include "fermicert/lpoly.hpp"

namespace fermicert {

/// The polynomial system characterizing potentials whose Floquet determinant
/// at energy lambda0 coincides with the zero potential's.  Polynomials are
/// v-only, sign-normalized (positive leading coefficient), deduplicated, and
/// listed in order of first appearance when scanning z-monomials in
/// descending canonical order.
struct PolynomialSystem {
  Lattice2 lattice;
  Rational lambda0;
  std::vector<LaurentPolynomial> polynomials;
  /// For each polynomial, the z-monomials whose coefficient it arose as.
  std::vector<std::vector<Monomial>> sources;
  /// Count of z-monomials with nonzero coefficient before deduplication.
  int z_monomial_count = 0;
  /// Distinct coefficient count under exact equality only (no sign
  /// normalization); equals polynomials.size() when plain equality already
  /// collapses the symmetric pairs.
  int distinct_before_sign_normalization = 0;

  int num_vars() const { return lattice.sites(); }
  std::vector<int> degrees() const;
};

/// Coefficients of det(D_V - lambda0) - det(D_0 - lambda0) by z-monomial.
PolynomialSystem generate_system(const Lattice2& lat, const Rational& lambda0);

/// A square system: n polynomials in n variables.  Produced from a
/// PolynomialSystem by adding an affine slice, or assembled directly
/// (tests, toy systems).
struct SquareSystem {
  int n_vars = 0;
  std::vector<LaurentPolynomial> polynomials;
  int slice_var = -1;      // >= 0 when built via slice()
  Rational slice_value = 0;

  static SquareSystem from_polynomials(int n_vars,
                                       std::vector<LaurentPolynomial> polys);
};

/// Appends the equation v[var_index] - value = 0.
SquareSystem slice(const PolynomialSystem& sys, int var_index,
                   const Rational& value);

/// Product of the total degrees (the classical root-count bound).
BigInt bezout_bound(const SquareSystem& sys);

struct ResidualReport {
  double max_coeff_residual = 0.0;
  double max_torus_residual = 0.0;
  double mean = 0.0;
  std::uint64_t seed = 0;
  int samples = 0;

  nlohmann::ordered_json to_json() const;
};

/// (a) max |f_i(V)| over the system polynomials, (b) max
/// |det(D_V - lambda0) - det(D_0 - lambda0)| over seeded pseudo-random
/// unit-torus points z, (c) mean(V).
ResidualReport residual_report(const PotentialGrid& V, const Rational& lambda0,
                               int samples, std::uint64_t seed);

enum class Dialect {
  A,  // variables rendered v_(i,j)
  B,  // variables rendered v[i,j]
};

/// One polynomial per line, terms in descending canonical order.  A
/// non-empty header is written first as '#' comment lines (import skips
/// them).
void export_system(const PolynomialSystem& sys, Dialect dialect,
                   const std::string& path, const std::string& header = "");

struct ImportedSystem {
  std::vector<LaurentPolynomial> polynomials;
  /// (i, j) label for each variable index, canonical order.
  std::vector<std::pair<int, int>> labels;
  int n_vars = 0;
};

/// Reads either dialect.  Variable indices are assigned canonically: labels
/// sorted with the second component outermost, so a full lattice's labels
/// reproduce the generator's indexing.
ImportedSystem import_system(const std::string& path);

}  // namespace fermicert
