#include "fermicert/floquet.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace fermicert {

Lattice2::Lattice2(int q1_, int q2_, bool allow_non_coprime) : q1(q1_), q2(q2_) {
  if (q1 < 3 || q2 < 3)
    throw std::invalid_argument("lattice periods must be at least 3");
  if (!allow_non_coprime && std::gcd(q1, q2) != 1)
    throw std::invalid_argument("lattice periods must be coprime (pass "
                                "allow_non_coprime to override)");
}

int Lattice2::site_index(int m, int n) const {
  if (m < 1 || m > q1 || n < 1 || n > q2)
    throw std::out_of_range("site label out of range");
  return (n - 1) * q1 + (m - 1);
}

std::pair<int, int> Lattice2::site_label(int index) const {
  if (index < 0 || index >= sites()) throw std::out_of_range("site index");
  return {index % q1 + 1, index / q1 + 1};
}

double PotentialGrid::mean() const {
  double s = std::accumulate(values.begin(), values.end(), 0.0);
  return s / static_cast<double>(values.size());
}

PotentialGrid load_potential_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  if (!j.contains("q1") || !j.contains("q2") || !j.contains("values"))
    throw std::runtime_error("parse error in " + path +
                             ": expected keys q1, q2, values");
  Lattice2 lat(j.at("q1").get<int>(), j.at("q2").get<int>(),
               j.value("allow_non_coprime", false));
  auto vals = j.at("values").get<std::vector<double>>();
  if (static_cast<int>(vals.size()) != lat.sites())
    throw std::runtime_error("parse error in " + path + ": expected " +
                             std::to_string(lat.sites()) + " values, got " +
                             std::to_string(vals.size()));
  return {lat, std::move(vals)};
}

PotentialGrid load_potential_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
          ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("parse error in " + path + " line " +
                                 std::to_string(lineno) + ": bad number '" +
                                 cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("parse error in " + path + " line " +
                               std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw std::runtime_error("parse error in " + path + ": no data rows");
  Lattice2 lat(static_cast<int>(rows.front().size()),
               static_cast<int>(rows.size()),
               /*allow_non_coprime=*/true);
  PotentialGrid grid = PotentialGrid::zero(lat);
  for (int n = 1; n <= lat.q2; ++n)
    for (int m = 1; m <= lat.q1; ++m)
      grid.values[lat.site_index(m, n)] = rows[n - 1][m - 1];
  return grid;
}

PotentialGrid load_potential(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return load_potential_csv(path);
  return load_potential_json(path);
}

void save_potential_json(const PotentialGrid& grid, const std::string& path) {
  nlohmann::ordered_json j;
  j["q1"] = grid.lattice.q1;
  j["q2"] = grid.lattice.q2;
  j["values"] = grid.values;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

namespace {

// -1 = not adjacent; 0 = diagonal; 1 = unit entry; 2..5 = z1, z1^-1, z2, z2^-1
int entry_kind(const Lattice2& lat, int m, int n, int mp, int np) {
  if (m == mp && n == np) return 0;
  int dm = m - mp, dn = n - np;
  if (dm * dm + dn * dn == 1) return 1;
  if (mp == 1 && m == lat.q1 && n == np) return 2;
  if (mp == lat.q1 && m == 1 && n == np) return 3;
  if (m == mp && np == 1 && n == lat.q2) return 4;
  if (m == mp && np == lat.q2 && n == 1) return 5;
  return -1;
}

}  // namespace

SymbolicMatrix build_symbolic_floquet(const Lattice2& lat) {
  int q = lat.sites();
  SymbolicMatrix mat(q);
  for (int r = 0; r < q; ++r) {
    auto [m, n] = lat.site_label(r);
    for (int c = 0; c < q; ++c) {
      auto [mp, np] = lat.site_label(c);
      switch (entry_kind(lat, m, n, mp, np)) {
        case 0: mat.set(r, c, LaurentPolynomial::variable(r)); break;
        case 1: mat.set(r, c, LaurentPolynomial::constant(1)); break;
        case 2: mat.set(r, c, LaurentPolynomial::z_power(1, 0)); break;
        case 3: mat.set(r, c, LaurentPolynomial::z_power(-1, 0)); break;
        case 4: mat.set(r, c, LaurentPolynomial::z_power(0, 1)); break;
        case 5: mat.set(r, c, LaurentPolynomial::z_power(0, -1)); break;
        default: break;
      }
    }
  }
  return mat;
}

LaurentPolynomial det_zero_potential(const Lattice2& lat) {
  SymbolicMatrix mat = build_symbolic_floquet(lat);
  std::vector<Rational> zeros(lat.sites(), Rational(0));
  return sparse_cofactor_det(mat.substitute_v(zeros));
}

Eigen::MatrixXcd build_numeric_floquet(const PotentialGrid& grid,
                                       std::complex<double> z1,
                                       std::complex<double> z2) {
  if (z1 == std::complex<double>(0.0) || z2 == std::complex<double>(0.0))
    throw std::domain_error("Floquet matrix has a pole at z = 0");
  const Lattice2& lat = grid.lattice;
  int q = lat.sites();
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(q, q);
  std::complex<double> z1i = 1.0 / z1, z2i = 1.0 / z2;
  for (int r = 0; r < q; ++r) {
    auto [m, n] = lat.site_label(r);
    for (int c = 0; c < q; ++c) {
      auto [mp, np] = lat.site_label(c);
      switch (entry_kind(lat, m, n, mp, np)) {
        case 0: mat(r, c) = grid.values[r]; break;
        case 1: mat(r, c) = 1.0; break;
        case 2: mat(r, c) = z1; break;
        case 3: mat(r, c) = z1i; break;
        case 4: mat(r, c) = z2; break;
        case 5: mat(r, c) = z2i; break;
        default: break;
      }
    }
  }
  return mat;
}

std::complex<double> numeric_det(const PotentialGrid& grid,
                                 std::complex<double> z1,
                                 std::complex<double> z2,
                                 std::complex<double> lambda) {
  Eigen::MatrixXcd mat = build_numeric_floquet(grid, z1, z2);
  mat.diagonal().array() -= lambda;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(mat).determinant();
}

}  // namespace fermicert
