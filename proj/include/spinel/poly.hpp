#pragma once

// Exact sparse multilinear polynomials over Ising spins s_i in {+1, -1}.
//
// Every Hamiltonian in the library is a Polynomial: a map from Monomial
// (a strictly increasing set of 1-based spin indices) to a nonzero exact
// rational coefficient, plus a declared variable set that may be larger than
// the set of indices that actually occur in terms.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "spinel/error.hpp"

namespace spinel {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using SpinIndex = std::uint32_t;
using Spin = std::int8_t;

// ---------------------------------------------------------------------------
// Rational text form: "p" or "p/q" in lowest terms, q > 0.

inline std::string format_rational(const Rational& r) {
  return r.str();
}

inline bool parse_integer_digits(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

// Returns false on malformed text instead of throwing so callers can attach a
// line number.
inline bool try_parse_rational(std::string_view text, Rational& out) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!parse_integer_digits(num, true)) return false;
  std::string num_str(num.front() == '+' ? num.substr(1) : num);
  Integer n(num_str);
  Integer d = 1;
  if (slash != std::string_view::npos) {
    std::string_view den = text.substr(slash + 1);
    if (!parse_integer_digits(den, false)) return false;
    d = Integer(std::string(den));
    if (d == 0) return false;
  }
  out = Rational(n, d);
  return true;
}

inline Rational parse_rational(std::string_view text) {
  Rational r;
  if (!try_parse_rational(text, r)) {
    throw ParseError(0, "malformed rational '" + std::string(text) + "'");
  }
  return r;
}

// ---------------------------------------------------------------------------

class Monomial {
 public:
  Monomial() = default;

  // Canonicalizing constructor: s_i^2 = 1, so repeated indices cancel in pairs.
  Monomial(std::initializer_list<SpinIndex> indices)
      : Monomial(canonical(std::vector<SpinIndex>(indices))) {}

  static Monomial canonical(std::vector<SpinIndex> indices) {
    std::sort(indices.begin(), indices.end());
    std::vector<SpinIndex> out;
    out.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size();) {
      std::size_t j = i;
      while (j < indices.size() && indices[j] == indices[i]) ++j;
      if ((j - i) % 2 == 1) out.push_back(indices[i]);
      i = j;
    }
    Monomial m;
    m.indices_ = std::move(out);
    m.validate();
    return m;
  }

  // Accepts only strictly increasing, 1-based indices.
  static Monomial from_sorted(std::vector<SpinIndex> indices) {
    for (std::size_t i = 1; i < indices.size(); ++i) {
      if (indices[i - 1] >= indices[i]) throw Error("monomial indices must be strictly increasing");
    }
    Monomial m;
    m.indices_ = std::move(indices);
    m.validate();
    return m;
  }

  const std::vector<SpinIndex>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool contains(SpinIndex i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

  Monomial without(SpinIndex i) const {
    Monomial m;
    m.indices_.reserve(indices_.size());
    for (SpinIndex j : indices_) {
      if (j != i) m.indices_.push_back(j);
    }
    return m;
  }

  // Product of two monomials is the symmetric difference of their index sets.
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    std::set_symmetric_difference(a.indices_.begin(), a.indices_.end(), b.indices_.begin(),
                                  b.indices_.end(), std::back_inserter(m.indices_));
    return m;
  }

  // Graded order: by size first, then lexicographically. The constant sorts first.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.indices_.begin(), a.indices_.end(),
                                                  b.indices_.begin(), b.indices_.end());
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  void validate() const {
    if (!indices_.empty() && indices_.front() == 0) throw Error("spin indices are 1-based");
  }

  std::vector<SpinIndex> indices_;
};

inline Monomial canonicalize_monomial(std::span<const SpinIndex> indices) {
  return Monomial::canonical(std::vector<SpinIndex>(indices.begin(), indices.end()));
}

// ---------------------------------------------------------------------------

class SpinAssignment {
 public:
  using Map = std::map<SpinIndex, Spin>;

  SpinAssignment() = default;
  SpinAssignment(std::initializer_list<std::pair<const SpinIndex, Spin>> init) {
    for (const auto& [i, v] : init) set(i, v);
  }

  // Assigns spins 1..values.size() in order.
  static SpinAssignment from_vector(std::span<const Spin> values) {
    SpinAssignment a;
    for (std::size_t k = 0; k < values.size(); ++k) a.set(static_cast<SpinIndex>(k + 1), values[k]);
    return a;
  }

  void set(SpinIndex i, int value) {
    if (i == 0) throw Error("spin indices are 1-based");
    if (value != 1 && value != -1) throw Error("spin value must be +1 or -1");
    values_[i] = static_cast<Spin>(value);
  }

  bool contains(SpinIndex i) const { return values_.count(i) != 0; }

  Spin at(SpinIndex i) const {
    auto it = values_.find(i);
    if (it == values_.end()) throw UnassignedVariable(i);
    return it->second;
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }
  const Map& values() const noexcept { return values_; }

  SpinAssignment flipped() const {
    SpinAssignment a = *this;
    for (auto& [i, v] : a.values_) v = static_cast<Spin>(-v);
    return a;
  }

  SpinAssignment restricted(const std::set<SpinIndex>& keep) const {
    SpinAssignment a;
    for (const auto& [i, v] : values_) {
      if (keep.count(i)) a.values_.emplace(i, v);
    }
    return a;
  }

  // "+-+-" style string in ascending index order.
  std::string sign_string() const {
    std::string s;
    s.reserve(values_.size());
    for (const auto& [i, v] : values_) s.push_back(v > 0 ? '+' : '-');
    return s;
  }

  friend auto operator<=>(const SpinAssignment&, const SpinAssignment&) = default;
  friend bool operator==(const SpinAssignment&, const SpinAssignment&) = default;

 private:
  Map values_;
};

// Text form "1=+1 2=-1 ..."; the reader also accepts commas and an optional
// leading 's' on each index.
inline std::string format_assignment(const SpinAssignment& a) {
  std::string out;
  for (const auto& [i, v] : a) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(i);
    out += v > 0 ? "=+1" : "=-1";
  }
  return out;
}

inline SpinAssignment parse_assignment(std::string_view text) {
  SpinAssignment a;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    auto eq = token.find('=');
    std::string lhs = token.substr(0, eq);
    if (!lhs.empty() && (lhs[0] == 's' || lhs[0] == 'S')) lhs.erase(0, 1);
    if (eq == std::string::npos || !parse_integer_digits(lhs, false)) {
      throw ParseError(0, "malformed assignment token '" + token + "'");
    }
    std::string rhs = token.substr(eq + 1);
    int v = 0;
    if (rhs == "+1" || rhs == "1" || rhs == "+") v = 1;
    else if (rhs == "-1" || rhs == "-") v = -1;
    else throw ParseError(0, "spin value must be +1 or -1 in '" + token + "'");
    auto idx = std::stoul(lhs);
    if (a.contains(static_cast<SpinIndex>(idx))) throw ParseError(0, "spin assigned twice: " + lhs);
    a.set(static_cast<SpinIndex>(idx), v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == ',' || ch == '\t' || ch == '\n' || ch == '{' || ch == '}') flush();
    else token.push_back(ch);
  }
  flush();
  return a;
}

// ---------------------------------------------------------------------------

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;

  static Polynomial constant(const Rational& c) {
    Polynomial p;
    p.add_term(Monomial{}, c);
    return p;
  }

  // Single monomial c * prod s_i (indices canonicalized).
  static Polynomial term(const Rational& c, std::initializer_list<SpinIndex> indices) {
    Polynomial p;
    p.add_term(Monomial(indices), c);
    return p;
  }

  static Polynomial spin(SpinIndex i) { return term(1, {i}); }

  // Adds c to the coefficient of m; a coefficient that reaches zero is erased.
  void add_term(const Monomial& m, const Rational& c) {
    for (SpinIndex i : m) vars_.insert(i);
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void declare(SpinIndex i) {
    if (i == 0) throw Error("spin indices are 1-based");
    vars_.insert(i);
  }

  template <typename Range>
  void declare_all(const Range& r) {
    for (SpinIndex i : r) declare(i);
  }

  const Terms& terms() const noexcept { return terms_; }
  const std::set<SpinIndex>& variables() const noexcept { return vars_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational constant_term() const { return coefficient(Monomial{}); }

  // True when no monomial mentions a spin (declared variables may remain).
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  // Indices that occur in at least one term.
  std::set<SpinIndex> support() const {
    std::set<SpinIndex> s;
    for (const auto& [m, c] : terms_) s.insert(m.begin(), m.end());
    return s;
  }

  std::size_t locality() const {
    std::size_t k = 0;
    for (const auto& [m, c] : terms_) k = std::max(k, m.size());
    return k;
  }

  // Number of distinct monomials of size >= 2 containing v.
  std::size_t degree(SpinIndex v) const {
    std::size_t d = 0;
    for (const auto& [m, c] : terms_) {
      if (m.size() >= 2 && m.contains(v)) ++d;
    }
    return d;
  }

  std::size_t max_degree() const {
    std::map<SpinIndex, std::size_t> deg;
    for (const auto& [m, c] : terms_) {
      if (m.size() < 2) continue;
      for (SpinIndex i : m) ++deg[i];
    }
    std::size_t best = 0;
    for (const auto& [i, d] : deg) best = std::max(best, d);
    return best;
  }

  // Distinct variables that share a monomial with v.
  std::set<SpinIndex> neighbors(SpinIndex v) const {
    std::set<SpinIndex> out;
    for (const auto& [m, c] : terms_) {
      if (!m.contains(v)) continue;
      for (SpinIndex i : m) {
        if (i != v) out.insert(i);
      }
    }
    return out;
  }

  // Only monomials of even size.
  bool is_even() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.size() % 2 == 0; });
  }

  Rational evaluate(const SpinAssignment& a) const {
    for (SpinIndex i : vars_) {
      if (!a.contains(i)) throw UnassignedVariable(i);
    }
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
      int sign = 1;
      for (SpinIndex i : m) sign *= a.at(i);
      if (sign > 0) sum += c;
      else sum -= c;
    }
    return sum;
  }

  // Fixes the given spins to values and returns the polynomial in the rest.
  Polynomial substitute(const SpinAssignment& a) const {
    Polynomial out;
    for (SpinIndex i : vars_) {
      if (!a.contains(i)) out.declare(i);
    }
    for (const auto& [m, c] : terms_) {
      std::vector<SpinIndex> keep;
      int sign = 1;
      for (SpinIndex i : m) {
        if (a.contains(i)) sign *= a.at(i);
        else keep.push_back(i);
      }
      out.add_term(Monomial::from_sorted(std::move(keep)), sign > 0 ? c : Rational(-c));
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& q) {
    vars_.insert(q.vars_.begin(), q.vars_.end());
    for (const auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& q) {
    vars_.insert(q.vars_.begin(), q.vars_.end());
    for (const auto& [m, c] : q.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(Polynomial p, const Rational& s) { return p *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial p) { return p *= s; }
  friend Polynomial operator-(Polynomial p) { return p *= Rational(-1); }

  // Multilinear product (s_i^2 = 1).
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    Polynomial out;
    out.vars_ = p.vars_;
    out.vars_.insert(q.vars_.begin(), q.vars_.end());
    for (const auto& [m1, c1] : p.terms_) {
      for (const auto& [m2, c2] : q.terms_) out.add_term(m1 * m2, c1 * c2);
    }
    return out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  Terms terms_;
  std::set<SpinIndex> vars_;
};

inline Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }

inline Rational evaluate(const Polynomial& p, const SpinAssignment& a) { return p.evaluate(a); }

// ---------------------------------------------------------------------------
// Line-oriented text format:
//   # comment
//   c <rational>            constant term
//   t <rational> i j ...    one monomial, indices strictly increasing, 1-based
//   v i j ...               declares variables that occur in no term
// Rationals are written "p" or "p/q" in lowest terms.

inline void write_polynomial(std::ostream& os, const Polynomial& p) {
  auto support = p.support();
  std::vector<SpinIndex> bare;
  for (SpinIndex i : p.variables()) {
    if (!support.count(i)) bare.push_back(i);
  }
  for (const auto& [m, c] : p.terms()) {
    if (m.empty()) {
      os << "c " << format_rational(c) << '\n';
    } else {
      os << "t " << format_rational(c);
      for (SpinIndex i : m) os << ' ' << i;
      os << '\n';
    }
  }
  if (!bare.empty()) {
    os << 'v';
    for (SpinIndex i : bare) os << ' ' << i;
    os << '\n';
  }
}

inline std::string format_polynomial(const Polynomial& p) {
  std::ostringstream os;
  write_polynomial(os, p);
  return os.str();
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline SpinIndex parse_index(std::string_view tok, std::size_t line_no) {
  if (!parse_integer_digits(tok, false)) {
    throw ParseError(line_no, "malformed spin index '" + std::string(tok) + "'");
  }
  unsigned long long v = std::stoull(std::string(tok));
  if (v == 0 || v > 0xffffffffULL) throw ParseError(line_no, "spin index out of range");
  return static_cast<SpinIndex>(v);
}

// Incremental reader shared by the polynomial and trace parsers.
class PolynomialReader {
 public:
  // Returns false if the line is not a polynomial line (caller handles it).
  bool consume(std::string_view line, std::size_t line_no) {
    auto toks = split_ws(line);
    if (toks.empty() || toks[0].front() == '#') return true;
    if (toks[0] == "c") {
      if (toks.size() != 2) throw ParseError(line_no, "constant line takes one rational");
      add(Monomial{}, toks[1], line_no);
      return true;
    }
    if (toks[0] == "t") {
      if (toks.size() < 3) throw ParseError(line_no, "term line needs a coefficient and indices");
      std::vector<SpinIndex> idx;
      for (std::size_t k = 2; k < toks.size(); ++k) idx.push_back(parse_index(toks[k], line_no));
      for (std::size_t k = 1; k < idx.size(); ++k) {
        if (idx[k - 1] >= idx[k]) throw ParseError(line_no, "indices must be strictly increasing");
      }
      add(Monomial::from_sorted(std::move(idx)), toks[1], line_no);
      return true;
    }
    if (toks[0] == "v") {
      for (std::size_t k = 1; k < toks.size(); ++k) poly_.declare(parse_index(toks[k], line_no));
      return true;
    }
    return false;
  }

  Polynomial take() {
    seen_.clear();
    return std::exchange(poly_, Polynomial{});
  }

 private:
  void add(const Monomial& m, std::string_view coef, std::size_t line_no) {
    Rational c;
    if (!try_parse_rational(coef, c)) throw ParseError(line_no, "malformed rational '" + std::string(coef) + "'");
    if (!seen_.insert(m).second) throw ParseError(line_no, "duplicate monomial");
    poly_.add_term(m, c);
  }

  Polynomial poly_;
  std::set<Monomial> seen_;
};

}  // namespace detail

inline Polynomial read_polynomial(std::istream& is) {
  detail::PolynomialReader reader;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!reader.consume(line, line_no)) throw ParseError(line_no, "unrecognized line '" + line + "'");
  }
  return reader.take();
}

inline Polynomial parse_polynomial(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_polynomial(is);
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    first = false;
    Rational a = c < 0 ? Rational(-c) : c;
    if (m.empty() || a != 1) os << format_rational(a);
    for (SpinIndex i : m) os << (m.empty() || (a == 1 && i == *m.begin()) ? "" : " ") << 's' << i;
  }
  if (first) os << '0';
  return os;
}

}  // namespace spinel
