#include "fermicert/lpoly.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <unordered_map>

namespace fermicert {

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto is_int = [](const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  // mpq_set_str does not understand a leading '+'
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_int(s)) throw std::invalid_argument("bad rational literal: " + text);
    return Rational(strip_plus(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!is_int(num) || !is_int(den))
    throw std::invalid_argument("bad rational literal: " + text);
  Rational q(strip_plus(num) + "/" + strip_plus(den));
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  return q.get_str();
}

Monomial Monomial::z_power(int e1, int e2) {
  Monomial m;
  m.z = {e1, e2};
  return m;
}

Monomial Monomial::variable(int index, int exponent) {
  if (index < 0 || exponent <= 0) throw std::invalid_argument("bad variable monomial");
  Monomial m;
  m.v = {{index, exponent}};
  return m;
}

int Monomial::v_degree() const {
  int d = 0;
  for (const auto& [idx, e] : v) d += e;
  return d;
}

Monomial Monomial::z_part() const {
  Monomial m;
  m.z = z;
  return m;
}

Monomial Monomial::v_part() const {
  Monomial m;
  m.v = v;
  return m;
}

Monomial Monomial::invert_z() const {
  Monomial m = *this;
  m.z = {-z[0], -z[1]};
  return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.z = {z[0] + o.z[0], z[1] + o.z[1]};
  r.v.reserve(v.size() + o.v.size());
  std::size_t i = 0, j = 0;
  while (i < v.size() && j < o.v.size()) {
    if (v[i].first < o.v[j].first) {
      r.v.push_back(v[i++]);
    } else if (v[i].first > o.v[j].first) {
      r.v.push_back(o.v[j++]);
    } else {
      r.v.emplace_back(v[i].first, v[i].second + o.v[j].second);
      ++i, ++j;
    }
  }
  for (; i < v.size(); ++i) r.v.push_back(v[i]);
  for (; j < o.v.size(); ++j) r.v.push_back(o.v[j]);
  return r;
}

int compare(const Monomial& a, const Monomial& b) {
  if (a.z[0] != b.z[0]) return a.z[0] < b.z[0] ? -1 : 1;
  if (a.z[1] != b.z[1]) return a.z[1] < b.z[1] ? -1 : 1;
  // Lex on the dense v exponent vector: an entry missing from one side is a
  // zero exponent, so the side with the smaller variable index is larger.
  std::size_t i = 0, j = 0;
  while (i < a.v.size() && j < b.v.size()) {
    if (a.v[i].first != b.v[j].first)
      return a.v[i].first < b.v[j].first ? 1 : -1;
    if (a.v[i].second != b.v[j].second)
      return a.v[i].second < b.v[j].second ? -1 : 1;
    ++i, ++j;
  }
  if (i < a.v.size()) return 1;
  if (j < b.v.size()) return -1;
  return 0;
}

LaurentPolynomial LaurentPolynomial::constant(Rational c) {
  LaurentPolynomial p;
  if (c != 0) p.terms_.push_back({Monomial::one(), std::move(c)});
  return p;
}

LaurentPolynomial LaurentPolynomial::variable(int index) {
  return term(Monomial::variable(index), 1);
}

LaurentPolynomial LaurentPolynomial::z_power(int e1, int e2) {
  return term(Monomial::z_power(e1, e2), 1);
}

LaurentPolynomial LaurentPolynomial::term(Monomial m, Rational c) {
  LaurentPolynomial p;
  if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

LaurentPolynomial LaurentPolynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono > b.mono; });
  LaurentPolynomial p;
  for (auto& t : terms) {
    if (t.coeff == 0) continue;
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
      if (p.terms_.back().coeff == 0) p.terms_.pop_back();
    } else {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

LaurentPolynomial LaurentPolynomial::operator-() const {
  LaurentPolynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& o) const {
  LaurentPolynomial r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    int c = compare(terms_[i].mono, o.terms_[j].mono);
    if (c > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Rational sum = terms_[i].coeff + o.terms_[j].coeff;
      if (sum != 0) r.terms_.push_back({terms_[i].mono, std::move(sum)});
      ++i, ++j;
    }
  }
  for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
  for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
  return r;
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& o) const {
  return *this + (-o);
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  *this = *this + o;
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& o) {
  *this = *this - o;
  return *this;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  // Multiplying by a single term preserves the canonical order.
  if (o.terms_.size() == 1) {
    LaurentPolynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_)
      r.terms_.push_back({t.mono * o.terms_[0].mono, t.coeff * o.terms_[0].coeff});
    return r;
  }
  if (terms_.size() == 1) return o * *this;
  std::map<Monomial, Rational, decltype([](const Monomial& a, const Monomial& b) {
             return a > b;
           })>
      acc;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Monomial m = a.mono * b.mono;
      auto [it, inserted] = acc.try_emplace(std::move(m), a.coeff * b.coeff);
      if (!inserted) it->second += a.coeff * b.coeff;
    }
  }
  LaurentPolynomial r;
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) r.terms_.push_back({m, std::move(c)});
  return r;
}

LaurentPolynomial LaurentPolynomial::operator*(const Rational& c) const {
  if (c == 0) return {};
  LaurentPolynomial r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

bool LaurentPolynomial::is_v_only() const {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const Term& t) { return t.mono.has_z(); });
}

bool LaurentPolynomial::has_v() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.mono.has_v(); });
}

int LaurentPolynomial::total_degree() const {
  if (is_zero()) throw std::domain_error("total degree of the zero polynomial");
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.v_degree());
  return d;
}

const Rational& LaurentPolynomial::leading_coeff() const {
  if (is_zero()) throw std::domain_error("leading coefficient of the zero polynomial");
  return terms_.front().coeff;
}

LaurentPolynomial LaurentPolynomial::sign_normalized() const {
  if (is_zero() || terms_.front().coeff > 0) return *this;
  return -*this;
}

LaurentPolynomial LaurentPolynomial::derivative(int var_index) const {
  LaurentPolynomial r;
  for (const auto& t : terms_) {
    auto it = std::find_if(t.mono.v.begin(), t.mono.v.end(),
                           [&](const auto& p) { return p.first == var_index; });
    if (it == t.mono.v.end()) continue;
    Term d;
    d.coeff = t.coeff * it->second;
    d.mono = t.mono;
    auto& entry = d.mono.v[it - t.mono.v.begin()];
    if (--entry.second == 0)
      d.mono.v.erase(d.mono.v.begin() + (it - t.mono.v.begin()));
    r.terms_.push_back(std::move(d));
  }
  // Decrementing one fixed exponent preserves the relative order of the
  // surviving terms, so no re-sort is needed.
  return r;
}

LaurentPolynomial LaurentPolynomial::substitute_v(const std::vector<Rational>& values) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    for (const auto& [idx, e] : t.mono.v) {
      if (idx >= static_cast<int>(values.size()))
        throw std::out_of_range("substitute_v: missing value for variable");
      for (int k = 0; k < e; ++k) c *= values[idx];
    }
    out.push_back({t.mono.z_part(), std::move(c)});
  }
  return from_terms(std::move(out));
}

LaurentPolynomial LaurentPolynomial::v_free_part() const {
  LaurentPolynomial r;
  for (const auto& t : terms_)
    if (!t.mono.has_v()) r.terms_.push_back(t);
  return r;
}

std::complex<double> LaurentPolynomial::evaluate(
    std::span<const std::complex<double>> zvals,
    std::span<const std::complex<double>> vvals) const {
  auto power = [](std::complex<double> base, int e) {
    if (e < 0) {
      if (base == std::complex<double>(0.0, 0.0))
        throw std::domain_error("evaluate: pole at z = 0");
      base = 1.0 / base;
      e = -e;
    }
    std::complex<double> r = 1.0;
    while (e-- > 0) r *= base;
    return r;
  };
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) {
    std::complex<double> val = t.coeff.get_d();
    for (int k = 0; k < 2; ++k) {
      if (t.mono.z[k] != 0) {
        if (k >= static_cast<int>(zvals.size()))
          throw std::out_of_range("evaluate: missing z value");
        val *= power(zvals[k], t.mono.z[k]);
      }
    }
    for (const auto& [idx, e] : t.mono.v) {
      if (idx >= static_cast<int>(vvals.size()))
        throw std::out_of_range("evaluate: missing v value");
      val *= power(vvals[idx], e);
    }
    sum += val;
  }
  return sum;
}

Rational LaurentPolynomial::evaluate_exact(const std::vector<Rational>& vvals) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    if (t.mono.has_z())
      throw std::domain_error("evaluate_exact: polynomial has z variables");
    Rational val = t.coeff;
    for (const auto& [idx, e] : t.mono.v) {
      if (idx >= static_cast<int>(vvals.size()))
        throw std::out_of_range("evaluate_exact: missing v value");
      for (int k = 0; k < e; ++k) val *= vvals[idx];
    }
    sum += val;
  }
  return sum;
}

std::vector<std::pair<Monomial, LaurentPolynomial>>
LaurentPolynomial::coefficients_by_z() const {
  // Terms are sorted with the z part as the most significant key, so each
  // z group is contiguous and its v parts arrive already ordered.
  std::vector<std::pair<Monomial, LaurentPolynomial>> groups;
  for (const auto& t : terms_) {
    Monomial zm = t.mono.z_part();
    if (groups.empty() || !(groups.back().first == zm))
      groups.emplace_back(zm, LaurentPolynomial{});
    groups.back().second.terms_.push_back({t.mono.v_part(), t.coeff});
  }
  return groups;
}

std::string LaurentPolynomial::to_string(const VarNamer& var_name) const {
  if (is_zero()) return "0";
  auto vname = var_name ? var_name : [](int i) { return "v" + std::to_string(i); };
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    Rational a = abs(t.coeff);
    if (first) {
      if (t.coeff < 0) out << '-';
      first = false;
    } else {
      out << (t.coeff < 0 ? '-' : '+');
    }
    std::vector<std::string> factors;
    for (int k = 0; k < 2; ++k) {
      if (t.mono.z[k] != 0) {
        std::string f = "z" + std::to_string(k + 1);
        if (t.mono.z[k] != 1) f += "^" + std::to_string(t.mono.z[k]);
        factors.push_back(std::move(f));
      }
    }
    for (const auto& [idx, e] : t.mono.v) {
      std::string f = vname(idx);
      if (e != 1) f += "^" + std::to_string(e);
      factors.push_back(std::move(f));
    }
    if (factors.empty()) {
      out << a.get_str();
    } else {
      if (a != 1) out << a.get_str() << '*';
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out << '*';
        out << factors[i];
      }
    }
  }
  return out.str();
}

SymbolicMatrix::SymbolicMatrix(int n) : n_(n), entries_(n * n) {
  if (n <= 0) throw std::invalid_argument("matrix size must be positive");
}

int SymbolicMatrix::idx(int r, int c) const {
  if (r < 0 || r >= n_ || c < 0 || c >= n_)
    throw std::out_of_range("matrix index");
  return r * n_ + c;
}

SymbolicMatrix SymbolicMatrix::substitute_v(const std::vector<Rational>& values) const {
  SymbolicMatrix m(n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c)
      if (!at(r, c).is_zero()) m.set(r, c, at(r, c).substitute_v(values));
  return m;
}

namespace {

struct MaskPair {
  std::uint64_t rows, cols;
  bool operator==(const MaskPair&) const = default;
};

struct MaskPairHash {
  std::size_t operator()(const MaskPair& k) const {
    std::uint64_t h = k.rows * 0x9e3779b97f4a7c15ULL;
    h ^= k.cols + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class DetWorker {
 public:
  explicit DetWorker(const SymbolicMatrix& m) : m_(m), n_(m.size()) {
    row_nz_.resize(n_);
    col_nz_.resize(n_);
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c)
        if (!m.at(r, c).is_zero()) {
          row_nz_[r].push_back(c);
          col_nz_[c].push_back(r);
        }
  }

  LaurentPolynomial run() {
    std::uint64_t full = (n_ == 64) ? ~0ULL : ((1ULL << n_) - 1);
    return det(full, full);
  }

 private:
  static int rank_in(std::uint64_t mask, int i) {
    return std::popcount(mask & ((1ULL << i) - 1));
  }

  LaurentPolynomial det(std::uint64_t rows, std::uint64_t cols) {
    if (rows == 0) return LaurentPolynomial::constant(1);
    auto it = memo_.find({rows, cols});
    if (it != memo_.end()) return it->second;

    // Pick the active row or column with the fewest active nonzeros.
    int best_count = n_ + 1, best_line = -1;
    bool best_is_row = true;
    for (std::uint64_t m = rows; m;) {
      int r = std::countr_zero(m);
      m &= m - 1;
      int cnt = 0;
      for (int c : row_nz_[r]) cnt += (cols >> c) & 1;
      if (cnt < best_count) best_count = cnt, best_line = r, best_is_row = true;
    }
    for (std::uint64_t m = cols; m;) {
      int c = std::countr_zero(m);
      m &= m - 1;
      int cnt = 0;
      for (int r : col_nz_[c]) cnt += (rows >> r) & 1;
      if (cnt < best_count) best_count = cnt, best_line = c, best_is_row = false;
    }

    LaurentPolynomial result;
    if (best_count > 0) {
      if (best_is_row) {
        int r = best_line, rr = rank_in(rows, r);
        for (int c : row_nz_[r]) {
          if (!((cols >> c) & 1)) continue;
          LaurentPolynomial sub =
              m_.at(r, c) * det(rows & ~(1ULL << r), cols & ~(1ULL << c));
          if ((rr + rank_in(cols, c)) & 1)
            result -= sub;
          else
            result += sub;
        }
      } else {
        int c = best_line, rc = rank_in(cols, c);
        for (int r : col_nz_[c]) {
          if (!((rows >> r) & 1)) continue;
          LaurentPolynomial sub =
              m_.at(r, c) * det(rows & ~(1ULL << r), cols & ~(1ULL << c));
          if ((rank_in(rows, r) + rc) & 1)
            result -= sub;
          else
            result += sub;
        }
      }
    }
    memo_.emplace(MaskPair{rows, cols}, result);
    return result;
  }

  const SymbolicMatrix& m_;
  int n_;
  std::vector<std::vector<int>> row_nz_, col_nz_;
  std::unordered_map<MaskPair, LaurentPolynomial, MaskPairHash> memo_;
};

}  // namespace

LaurentPolynomial sparse_cofactor_det(const SymbolicMatrix& m) {
  if (m.size() > 64)
    throw std::invalid_argument("cofactor determinant limited to size 64");
  return DetWorker(m).run();
}

}  // namespace fermicert
