#include "fermicert/isosys.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace fermicert {

std::vector<int> PolynomialSystem::degrees() const {
  std::vector<int> d;
  d.reserve(polynomials.size());
  for (const auto& p : polynomials) d.push_back(p.total_degree());
  return d;
}

PolynomialSystem generate_system(const Lattice2& lat, const Rational& lambda0) {
  SymbolicMatrix mat = build_symbolic_floquet(lat);
  if (lambda0 != 0) {
    for (int i = 0; i < mat.size(); ++i)
      mat.set(i, i, mat.at(i, i) - LaurentPolynomial::constant(lambda0));
  }
  LaurentPolynomial det_v = sparse_cofactor_det(mat);
  // Substituting V = 0 into the determinant deletes exactly the terms with a
  // v factor, so the v-free part is det(D_0 - lambda0).
  LaurentPolynomial diff = det_v - det_v.v_free_part();

  PolynomialSystem sys{lat, lambda0, {}, {}, 0, 0};
  std::map<LaurentPolynomial, std::size_t,
           decltype([](const LaurentPolynomial& a, const LaurentPolynomial& b) {
             return std::lexicographical_compare(
                 a.terms().begin(), a.terms().end(), b.terms().begin(),
                 b.terms().end(), [](const auto& s, const auto& t) {
                   int c = compare(s.mono, t.mono);
                   return c != 0 ? c < 0 : s.coeff < t.coeff;
                 });
           })>
      seen;
  std::set<LaurentPolynomial, decltype([](const LaurentPolynomial& a,
                                          const LaurentPolynomial& b) {
             return std::lexicographical_compare(
                 a.terms().begin(), a.terms().end(), b.terms().begin(),
                 b.terms().end(), [](const auto& s, const auto& t) {
                   int c = compare(s.mono, t.mono);
                   return c != 0 ? c < 0 : s.coeff < t.coeff;
                 });
           })>
      seen_exact;

  for (const auto& [zmono, coeff] : diff.coefficients_by_z()) {
    ++sys.z_monomial_count;
    seen_exact.insert(coeff);
    LaurentPolynomial norm = coeff.sign_normalized();
    auto it = seen.find(norm);
    if (it == seen.end()) {
      seen.emplace(norm, sys.polynomials.size());
      sys.polynomials.push_back(std::move(norm));
      sys.sources.push_back({zmono});
    } else {
      sys.sources[it->second].push_back(zmono);
    }
  }
  sys.distinct_before_sign_normalization = static_cast<int>(seen_exact.size());
  return sys;
}

SquareSystem SquareSystem::from_polynomials(int n_vars,
                                            std::vector<LaurentPolynomial> polys) {
  if (static_cast<int>(polys.size()) != n_vars)
    throw std::invalid_argument("square system needs as many polynomials as variables");
  for (const auto& p : polys)
    if (!p.is_v_only())
      throw std::invalid_argument("square system polynomials must be v-only");
  SquareSystem sys;
  sys.n_vars = n_vars;
  sys.polynomials = std::move(polys);
  return sys;
}

SquareSystem slice(const PolynomialSystem& sys, int var_index,
                   const Rational& value) {
  if (var_index < 0 || var_index >= sys.num_vars())
    throw std::out_of_range("slice variable out of range");
  if (static_cast<int>(sys.polynomials.size()) + 1 != sys.num_vars())
    throw std::invalid_argument("slicing expects one fewer polynomial than variables");
  SquareSystem sq;
  sq.n_vars = sys.num_vars();
  sq.polynomials = sys.polynomials;
  sq.polynomials.push_back(LaurentPolynomial::variable(var_index) -
                           LaurentPolynomial::constant(value));
  sq.slice_var = var_index;
  sq.slice_value = value;
  return sq;
}

BigInt bezout_bound(const SquareSystem& sys) {
  BigInt prod = 1;
  for (const auto& p : sys.polynomials) prod *= p.total_degree();
  return prod;
}

nlohmann::ordered_json ResidualReport::to_json() const {
  nlohmann::ordered_json j;
  j["max_coeff_residual"] = max_coeff_residual;
  j["max_torus_residual"] = max_torus_residual;
  j["mean"] = mean;
  j["seed"] = seed;
  j["samples"] = samples;
  return j;
}

ResidualReport residual_report(const PotentialGrid& V, const Rational& lambda0,
                               int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  PolynomialSystem sys = generate_system(V.lattice, lambda0);

  std::vector<std::complex<double>> vvals(V.values.begin(), V.values.end());
  ResidualReport rep;
  rep.seed = seed;
  rep.samples = samples;
  rep.mean = V.mean();
  for (const auto& p : sys.polynomials)
    rep.max_coeff_residual =
        std::max(rep.max_coeff_residual, std::abs(p.evaluate({}, vvals)));

  PotentialGrid zero = PotentialGrid::zero(V.lattice);
  std::complex<double> lam(lambda0.get_d(), 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int s = 0; s < samples; ++s) {
    double a1 = angle(rng), a2 = angle(rng);
    std::complex<double> z1(std::cos(a1), std::sin(a1));
    std::complex<double> z2(std::cos(a2), std::sin(a2));
    std::complex<double> dv = numeric_det(V, z1, z2, lam);
    std::complex<double> d0 = numeric_det(zero, z1, z2, lam);
    rep.max_torus_residual = std::max(rep.max_torus_residual, std::abs(dv - d0));
  }
  return rep;
}

namespace {

std::string dialect_name(Dialect d, int i, int j) {
  std::ostringstream out;
  if (d == Dialect::A)
    out << "v_(" << i << ',' << j << ')';
  else
    out << "v[" << i << ',' << j << ']';
  return out.str();
}

// Recursive-descent parser for exported polynomial lines.  Grammar:
//   poly   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := rational | var ['^' int]
//   var    := 'v_(' int ',' int ')' | 'v[' int ',' int ']'
class LineParser {
 public:
  LineParser(const std::string& line, int lineno,
             std::map<std::pair<int, int>, int>& var_ids)
      : s_(line), lineno_(lineno), var_ids_(var_ids) {}

  LaurentPolynomial parse() {
    LaurentPolynomial sum;
    bool negative = accept_sign();
    while (true) {
      LaurentPolynomial t = parse_term();
      sum += negative ? -t : t;
      skip_ws();
      if (pos_ == s_.size()) break;
      if (s_[pos_] == '+')
        negative = false;
      else if (s_[pos_] == '-')
        negative = true;
      else
        fail("expected '+' or '-'");
      ++pos_;
    }
    return sum;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("parse error at line " + std::to_string(lineno_) +
                             ", column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept_sign() {
    skip_ws();
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-'))
      return s_[pos_++] == '-';
    return false;
  }

  long parse_int() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer");
    return std::stol(s_.substr(start, pos_ - start));
  }

  LaurentPolynomial parse_term() {
    LaurentPolynomial prod = LaurentPolynomial::constant(1);
    while (true) {
      prod = prod * parse_factor();
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return prod;
  }

  LaurentPolynomial parse_factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of line");
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string num = s_.substr(start, pos_ - start);
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip_ws();
        start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected denominator");
        num += "/" + s_.substr(start, pos_ - start);
      }
      return LaurentPolynomial::constant(parse_rational(num));
    }
    if (s_[pos_] != 'v') fail("expected variable or number");
    ++pos_;
    char open, close;
    if (pos_ < s_.size() && s_[pos_] == '_') {
      ++pos_;
      open = '(', close = ')';
    } else {
      open = '[', close = ']';
    }
    if (pos_ >= s_.size() || s_[pos_] != open) fail("expected variable subscript");
    ++pos_;
    long i = parse_int();
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != ',') fail("expected ','");
    ++pos_;
    long j = parse_int();
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != close) fail("unterminated variable subscript");
    ++pos_;
    int exponent = 1;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      exponent = static_cast<int>(parse_int());
      if (exponent <= 0) fail("exponent must be positive");
    }
    auto it = var_ids_.find({static_cast<int>(i), static_cast<int>(j)});
    if (it == var_ids_.end()) fail("unknown variable label");
    return LaurentPolynomial::term(Monomial::variable(it->second, exponent), 1);
  }

  const std::string& s_;
  int lineno_;
  std::size_t pos_ = 0;
  std::map<std::pair<int, int>, int>& var_ids_;
};

}  // namespace

void export_system(const PolynomialSystem& sys, Dialect dialect,
                   const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (!header.empty()) {
    std::stringstream hs(header);
    std::string hline;
    while (std::getline(hs, hline)) out << "# " << hline << '\n';
  }
  auto namer = [&](int index) {
    auto [i, j] = sys.lattice.site_label(index);
    return dialect_name(dialect, i, j);
  };
  for (const auto& p : sys.polynomials) out << p.to_string(namer) << '\n';
}

ImportedSystem import_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  // First pass: collect every variable label so indices can be assigned
  // canonically (second component outermost) before parsing polynomials.
  // Blank lines and '#' comment lines are skipped.
  std::vector<std::pair<std::string, int>> lines;  // text, original line number
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.emplace_back(line, lineno);
  }
  std::set<std::pair<int, int>> labels;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::string& l = lines[k].first;
    for (std::size_t p = 0; p + 1 < l.size(); ++p) {
      if (l[p] != 'v') continue;
      std::size_t q = p + 1;
      if (l[q] == '_') ++q;
      if (q >= l.size() || (l[q] != '(' && l[q] != '[')) continue;
      char close = l[q] == '(' ? ')' : ']';
      std::size_t end = l.find(close, q);
      if (end == std::string::npos)
        throw std::runtime_error("parse error at line " + std::to_string(lines[k].second) +
                                 ": unterminated variable subscript");
      std::string body = l.substr(q + 1, end - q - 1);
      auto comma = body.find(',');
      if (comma == std::string::npos)
        throw std::runtime_error("parse error at line " + std::to_string(lines[k].second) +
                                 ": expected 'i,j' subscript");
      try {
        labels.emplace(std::stoi(body.substr(0, comma)),
                       std::stoi(body.substr(comma + 1)));
      } catch (const std::exception&) {
        throw std::runtime_error("parse error at line " + std::to_string(lines[k].second) +
                                 ": bad variable subscript '" + body + "'");
      }
    }
  }

  ImportedSystem result;
  std::map<std::pair<int, int>, int> var_ids;
  {
    std::vector<std::pair<int, int>> ordered(labels.begin(), labels.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    for (std::size_t k = 0; k < ordered.size(); ++k)
      var_ids[ordered[k]] = static_cast<int>(k);
    result.labels = std::move(ordered);
  }
  result.n_vars = static_cast<int>(result.labels.size());
  for (std::size_t k = 0; k < lines.size(); ++k)
    result.polynomials.push_back(
        LineParser(lines[k].first, lines[k].second, var_ids).parse());
  return result;
}

}  // namespace fermicert
