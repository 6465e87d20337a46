#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <vector>

#include "fermicert/isosys.hpp"
#include "oracles.hpp"

using namespace fermicert;
using oracles::Rng;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fermicert_isosys_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

const PolynomialSystem& headline_system() {
  static PolynomialSystem sys = generate_system(Lattice2(3, 5), 0);
  return sys;
}

}  // namespace

TEST_CASE("headline system has the expected shape") {
  const auto& sys = headline_system();
  CHECK(sys.polynomials.size() == 14);
  CHECK(sys.z_monomial_count == 29);
  CHECK(sys.distinct_before_sign_normalization == 14);
  CHECK(sys.num_vars() == 15);

  std::vector<int> degs = sys.degrees();
  CHECK(degs == std::vector<int>{3, 1, 6, 4, 9, 4, 2, 7, 12, 7, 2, 5, 10, 15});
  std::vector<int> sorted = degs;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted ==
        std::vector<int>{1, 2, 2, 3, 4, 4, 5, 6, 7, 7, 9, 10, 12, 15});

  std::vector<std::size_t> counts;
  for (const auto& p : sys.polynomials) counts.push_back(p.term_count());
  CHECK(counts == std::vector<std::size_t>{20, 15, 100, 225, 330, 225, 30, 585,
                                           1155, 585, 30, 63, 468, 6754});
}

TEST_CASE("the degree-one equation is the mean of the potential") {
  const auto& sys = headline_system();
  LaurentPolynomial sum;
  for (int i = 0; i < 15; ++i) sum += LaurentPolynomial::variable(i);
  auto it = std::find_if(sys.polynomials.begin(), sys.polynomials.end(),
                         [](const auto& p) { return p.total_degree() == 1; });
  REQUIRE(it != sys.polynomials.end());
  CHECK(*it == sum);
}

TEST_CASE("system polynomials are multilinear, v-only, sign-normalized") {
  const auto& sys = headline_system();
  for (const auto& p : sys.polynomials) {
    CHECK(p.is_v_only());
    CHECK(p.leading_coeff() > 0);
    for (const auto& t : p.terms())
      for (auto [idx, e] : t.mono.v) {
        CHECK(e == 1);
        CHECK(idx >= 0);
        CHECK(idx < 15);
      }
  }
}

TEST_CASE("source monomials are closed under z inversion and cover all 29") {
  const auto& sys = headline_system();
  std::set<std::pair<int, int>> all;
  std::size_t total = 0;
  for (const auto& src : sys.sources) {
    CHECK(!src.empty());
    total += src.size();
    std::set<std::pair<int, int>> exps;
    for (const auto& m : src) {
      CHECK(!m.has_v());
      exps.insert({m.z[0], m.z[1]});
      auto [it, fresh] = all.insert({m.z[0], m.z[1]});
      CHECK(fresh);  // no monomial sourced twice
    }
    for (const auto& m : src)
      CHECK(exps.count({-m.z[0], -m.z[1]}) == 1);  // inversion closure
  }
  CHECK(total == 29);
}

TEST_CASE("coefficient values reconstruct the determinant difference") {
  const auto& sys = headline_system();
  Lattice2 lat(3, 5);
  SymbolicMatrix mat = build_symbolic_floquet(lat);
  Rng rng(127);

  for (int rep = 0; rep < 3; ++rep) {
    std::vector<Rational> vals;
    for (int i = 0; i < 15; ++i) vals.push_back(rng.rational(2, 3));
    LaurentPolynomial diff =
        sparse_cofactor_det(mat.substitute_v(vals)) - det_zero_potential(lat);

    std::map<std::pair<int, int>, Rational> coeffs;
    for (const auto& [zm, c] : diff.coefficients_by_z()) {
      REQUIRE(c.term_count() == 1);
      coeffs[{zm.z[0], zm.z[1]}] = c.terms()[0].coeff;
    }
    // every sourced monomial's coefficient matches the polynomial's value up
    // to the normalization sign, and absent monomials evaluate to zero
    for (std::size_t k = 0; k < sys.polynomials.size(); ++k) {
      Rational value = sys.polynomials[k].evaluate_exact(vals);
      for (const auto& m : sys.sources[k]) {
        auto it = coeffs.find({m.z[0], m.z[1]});
        if (it == coeffs.end())
          CHECK(value == 0);
        else
          CHECK(abs(it->second) == abs(value));
      }
    }
    // and no coefficient appears outside the sourced set
    std::set<std::pair<int, int>> sourced;
    for (const auto& src : sys.sources)
      for (const auto& m : src) sourced.insert({m.z[0], m.z[1]});
    for (const auto& [zexp, c] : coeffs) CHECK(sourced.count(zexp) == 1);
  }
}

TEST_CASE("zero potential satisfies every equation") {
  const auto& sys = headline_system();
  std::vector<Rational> zeros(15, 0);
  for (const auto& p : sys.polynomials) CHECK(p.evaluate_exact(zeros) == 0);
}

TEST_CASE("slice appends an affine pin and squares the system") {
  const auto& sys = headline_system();
  SquareSystem sq = slice(sys, 0, Rational(61, 17));
  CHECK(sq.n_vars == 15);
  CHECK(sq.polynomials.size() == 15);
  CHECK(sq.slice_var == 0);
  CHECK(sq.slice_value == Rational(61, 17));
  CHECK(sq.polynomials.back() ==
        LaurentPolynomial::variable(0) -
            LaurentPolynomial::constant(Rational(61, 17)));
  CHECK_THROWS_AS(slice(sys, -1, 1), std::out_of_range);
  CHECK_THROWS_AS(slice(sys, 15, 1), std::out_of_range);
}

TEST_CASE("bezout bound multiplies the total degrees") {
  const auto& sys = headline_system();
  SquareSystem sq = slice(sys, 0, Rational(61, 17));
  CHECK(bezout_bound(sq) == BigInt("4572288000"));

  SquareSystem toy = SquareSystem::from_polynomials(
      2, {oracles::univariate_from_roots(0, {1, -1}),
          oracles::univariate_from_roots(1, {2, -2})});
  CHECK(bezout_bound(toy) == 4);
}

TEST_CASE("from_polynomials validates its input") {
  CHECK_THROWS_AS(SquareSystem::from_polynomials(
                      2, {LaurentPolynomial::variable(0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SquareSystem::from_polynomials(
                      1, {LaurentPolynomial::z_power(1, 0)}),
                  std::invalid_argument);
}

TEST_CASE("residual report vanishes at the zero potential") {
  PotentialGrid zero = PotentialGrid::zero(Lattice2(3, 5));
  ResidualReport rep = residual_report(zero, 0, 4, 7);
  CHECK(rep.max_coeff_residual == 0.0);
  CHECK(rep.max_torus_residual < 1e-10);
  CHECK(rep.mean == 0.0);
  CHECK(rep.samples == 4);
  CHECK(rep.seed == 7);
  CHECK_THROWS_AS(residual_report(zero, 0, 0, 7), std::invalid_argument);
}

TEST_CASE("residual report singles out the shipped candidate") {
  PotentialGrid vstar =
      load_potential(std::string(FERMICERT_DATA_DIR) + "/vstar.json");
  ResidualReport rep = residual_report(vstar, 0, 8, 1);
  CHECK(rep.max_coeff_residual < 1e-6);
  CHECK(rep.max_coeff_residual > 1e-10);  // the candidate is only approximate
  CHECK(rep.max_torus_residual < 1e-6);
  CHECK(std::abs(rep.mean) < 1e-12);

  ResidualReport again = residual_report(vstar, 0, 8, 1);
  CHECK(rep.to_json().dump() == again.to_json().dump());

  // a garbage potential does not pass
  PotentialGrid junk = vstar;
  junk.values[3] += 0.5;
  ResidualReport bad = residual_report(junk, 0, 8, 1);
  CHECK(bad.max_coeff_residual > 1e-3);
  CHECK(bad.max_torus_residual > 1e-3);
}

TEST_CASE("export and import round trip in both dialects") {
  const auto& sys = headline_system();
  for (Dialect d : {Dialect::A, Dialect::B}) {
    auto path = temp_file(d == Dialect::A ? "sys_a.txt" : "sys_b.txt");
    export_system(sys, d, path.string(), "tool version 0.1.0\nq1=3 q2=5");
    // header lines are written as comments
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "# tool version 0.1.0");

    ImportedSystem imp = import_system(path.string());
    CHECK(imp.n_vars == 15);
    REQUIRE(imp.polynomials.size() == sys.polynomials.size());
    for (std::size_t k = 0; k < sys.polynomials.size(); ++k)
      CHECK(imp.polynomials[k] == sys.polynomials[k]);
    // canonical label order reproduces the generator's indexing
    for (int i = 0; i < 15; ++i)
      CHECK(imp.labels[i] == sys.lattice.site_label(i));
  }
}

TEST_CASE("import accepts handwritten systems in either dialect") {
  auto path = temp_file("toy.txt");
  {
    std::ofstream out(path);
    out << "# a comment line\n";
    out << "\n";
    out << "v[1,1]^2 - 2\n";
    out << "  v[2,1] - v[1,1]\n";
  }
  ImportedSystem imp = import_system(path.string());
  CHECK(imp.n_vars == 2);
  REQUIRE(imp.polynomials.size() == 2);
  LaurentPolynomial x = LaurentPolynomial::variable(0);
  LaurentPolynomial y = LaurentPolynomial::variable(1);
  CHECK(imp.polynomials[0] == x * x - LaurentPolynomial::constant(2));
  CHECK(imp.polynomials[1] == y - x);
  CHECK(imp.labels == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}});

  auto path_a = temp_file("toy_a.txt");
  {
    std::ofstream out(path_a);
    out << "1/2*v_(1,1)*v_(2,1) + 3\n";
  }
  ImportedSystem impa = import_system(path_a.string());
  REQUIRE(impa.polynomials.size() == 1);
  CHECK(impa.polynomials[0] ==
        LaurentPolynomial::constant(Rational(1, 2)) * x * y +
            LaurentPolynomial::constant(3));
}

TEST_CASE("import reports parse errors with line numbers") {
  auto bad = temp_file("bad.txt");
  {
    std::ofstream out(bad);
    out << "# header\n";
    out << "v[1,1] - 1\n";
    out << "v[1,1] + & 3\n";
  }
  CHECK_THROWS_WITH_AS(import_system(bad.string()), doctest::Contains("line 3"),
                       std::runtime_error);

  auto unterminated = temp_file("unterminated.txt");
  {
    std::ofstream out(unterminated);
    out << "v[1,1\n";
  }
  CHECK_THROWS_WITH_AS(import_system(unterminated.string()),
                       doctest::Contains("unterminated"), std::runtime_error);

  auto badexp = temp_file("badexp.txt");
  {
    std::ofstream out(badexp);
    out << "v[1,1]^0 - 1\n";
  }
  CHECK_THROWS_AS(import_system(badexp.string()), std::runtime_error);

  CHECK_THROWS_AS(import_system("no_such_system.txt"), std::runtime_error);
}

TEST_CASE("imported toy system feeds the square-system pipeline") {
  auto imp = import_system(std::string(FERMICERT_DATA_DIR) + "/toy_system.txt");
  SquareSystem sq =
      SquareSystem::from_polynomials(imp.n_vars, imp.polynomials);
  CHECK(sq.n_vars == 2);
  CHECK(bezout_bound(sq) == 2);
}
