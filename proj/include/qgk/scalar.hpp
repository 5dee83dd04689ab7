#pragma once

// Exact scalars in the ring generated by q, q^{-1} and the root atoms
// r_k = sqrt(1 - q^{2k}) (k >= 1), with rational coefficients.
//
// A ScalarExpr is a finite sum  sum_t c_t q^{a_t} prod_{k in K_t} r_k  kept in
// normal form: atom sets are square-free (r_k^2 is rewritten as 1 - q^{2k}),
// no zero coefficients, terms ordered by (q exponent, atom set). Distinct
// square-free atom products are linearly independent over Q(q), so zero
// testing is syntactic.

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgk {

using Rational = mpq_class;
using Real = boost::multiprecision::mpfr_float;

/// q^qexp times the product of r_k over the sorted, distinct atoms.
struct Monomial {
  int qexp = 0;
  std::vector<int> atoms;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

/// Laurent polynomial in q: exponent -> coefficient.
using LaurentPoly = std::map<int, Rational>;

namespace detail {

inline void add_into(LaurentPoly& p, int e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

/// prod_{k in ks} (1 - q^{2k}) as a Laurent polynomial.
inline LaurentPoly reduction_factor(const std::vector<int>& ks) {
  LaurentPoly poly{{0, Rational(1)}};
  for (int k : ks) {
    LaurentPoly next;
    for (const auto& [e, c] : poly) {
      add_into(next, e, c);
      add_into(next, e + 2 * k, -c);
    }
    poly = std::move(next);
  }
  return poly;
}

}  // namespace detail

/// RAII guard for the MPFR default working precision (decimal digits).
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits10) : saved_(Real::default_precision()) {
    Real::default_precision(digits10);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/// Number of extra decimal digits carried during numeric evaluation.
inline constexpr unsigned kGuardDigits = 10;

class ScalarExpr {
 public:
  using TermMap = std::map<Monomial, Rational>;

  ScalarExpr() = default;
  ScalarExpr(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(Monomial{}, c);
  }
  ScalarExpr(int c) : ScalarExpr(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  /// c * q^e
  static ScalarExpr q_power(int e, const Rational& c = 1) {
    ScalarExpr s;
    if (c != 0) s.terms_.emplace(Monomial{e, {}}, c);
    return s;
  }

  /// r_k = sqrt(1 - q^{2k}); r_0 = 0.
  static ScalarExpr root(int k) {
    if (k < 0) throw std::domain_error("root atom index must be nonnegative");
    ScalarExpr s;
    if (k > 0) s.terms_.emplace(Monomial{0, {k}}, Rational(1));
    return s;
  }

  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Add c * monomial, where the monomial's atoms are already square-free and sorted.
  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Add c * q^{qexp} * prod_{k in atoms} r_k for an arbitrary atom multiset.
  /// Zero atoms kill the term; repeated atoms are reduced.
  void add_raw(const Rational& c, int qexp, std::vector<int> atoms) {
    if (c == 0) return;
    std::sort(atoms.begin(), atoms.end());
    if (!atoms.empty() && atoms.front() < 0) throw std::domain_error("negative root atom");
    if (!atoms.empty() && atoms.front() == 0) return;
    std::vector<int> odd;
    std::vector<int> pairs;
    for (std::size_t i = 0; i < atoms.size();) {
      if (i + 1 < atoms.size() && atoms[i] == atoms[i + 1]) {
        pairs.push_back(atoms[i]);
        i += 2;
      } else {
        odd.push_back(atoms[i]);
        ++i;
      }
    }
    for (const auto& [e, pc] : detail::reduction_factor(pairs)) {
      add_term(Monomial{qexp + e, odd}, c * pc);
    }
  }

  ScalarExpr& operator+=(const ScalarExpr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  ScalarExpr& operator-=(const ScalarExpr& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  ScalarExpr& operator*=(const ScalarExpr& o) {
    *this = *this * o;
    return *this;
  }
  ScalarExpr operator-() const {
    ScalarExpr r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
  friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }

  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    ScalarExpr r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        std::vector<int> odd;
        std::vector<int> common;
        std::set_symmetric_difference(ma.atoms.begin(), ma.atoms.end(), mb.atoms.begin(),
                                      mb.atoms.end(), std::back_inserter(odd));
        std::set_intersection(ma.atoms.begin(), ma.atoms.end(), mb.atoms.begin(), mb.atoms.end(),
                              std::back_inserter(common));
        const Rational c = ca * cb;
        const int e0 = ma.qexp + mb.qexp;
        for (const auto& [e, pc] : detail::reduction_factor(common)) {
          r.add_term(Monomial{e0 + e, odd}, c * pc);
        }
      }
    }
    return r;
  }

  bool operator==(const ScalarExpr& o) const { return terms_ == o.terms_; }

  /// Evaluate at a rational q0 in (0,1) with `digits` significant decimal digits.
  Real eval(const Rational& q0, unsigned digits = 30) const {
    if (q0 <= 0 || q0 >= 1) throw std::domain_error("q0 must lie in (0,1)");
    PrecisionGuard guard(digits + kGuardDigits);
    const Real q = Real(q0.get_num().get_str()) / Real(q0.get_den().get_str());
    Real sum = 0;
    for (const auto& [m, c] : terms_) {
      Real t = Real(c.get_num().get_str()) / Real(c.get_den().get_str());
      t *= boost::multiprecision::pow(q, m.qexp);
      for (int k : m.atoms) t *= boost::multiprecision::sqrt(1 - boost::multiprecision::pow(q, 2 * k));
      sum += t;
    }
    return sum;
  }

  double eval_double(double q0) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
      double t = c.get_d() * std::pow(q0, m.qexp);
      for (int k : m.atoms) t *= std::sqrt(1.0 - std::pow(q0, 2 * k));
      sum += t;
    }
    return sum;
  }

  /// Canonical text form, e.g. "1 - 2*q^2" or "-q^3*r2*r5".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational mag = c;
      if (c < 0) {
        os << (first ? "-" : " - ");
        mag = -c;
      } else if (!first) {
        os << " + ";
      }
      first = false;
      std::vector<std::string> factors;
      if (mag != 1 || (m.qexp == 0 && m.atoms.empty())) factors.push_back(mag.get_str());
      if (m.qexp == 1) {
        factors.emplace_back("q");
      } else if (m.qexp != 0) {
        factors.push_back("q^" + std::to_string(m.qexp));
      }
      for (int k : m.atoms) factors.push_back("r" + std::to_string(k));
      for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
    }
    return os.str();
  }

  /// If every term carries the same atom set, returns it with the Laurent
  /// polynomial cofactor.
  std::optional<std::pair<std::vector<int>, LaurentPoly>> split_atoms() const {
    if (terms_.empty()) return std::nullopt;
    const auto& atoms = terms_.begin()->first.atoms;
    LaurentPoly poly;
    for (const auto& [m, c] : terms_) {
      if (m.atoms != atoms) return std::nullopt;
      detail::add_into(poly, m.qexp, c);
    }
    return std::make_pair(atoms, poly);
  }

 private:
  TermMap terms_;
};

inline std::ostream& operator<<(std::ostream& os, const ScalarExpr& s) { return os << s.str(); }

/// Exact quotient of Laurent polynomials, or nullopt when den does not divide num.
/// q is a unit, so this is ordinary polynomial division after stripping the
/// lowest powers of q from both operands.
inline std::optional<LaurentPoly> divide_laurent(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.empty()) throw std::domain_error("division by zero polynomial");
  if (num.empty()) return LaurentPoly{};
  const int nlow = num.begin()->first;
  const int dlow = den.begin()->first;
  const int ddeg = den.rbegin()->first - dlow;
  const Rational dlead = den.rbegin()->second;
  LaurentPoly rem;
  for (const auto& [e, c] : num) rem.emplace(e - nlow, c);
  LaurentPoly quot;
  while (!rem.empty() && rem.rbegin()->first >= ddeg) {
    const auto [re, rc] = *rem.rbegin();
    const int qe = re - ddeg;
    const Rational qc = rc / dlead;
    detail::add_into(quot, qe + nlow - dlow, qc);
    for (const auto& [e, c] : den) detail::add_into(rem, qe + e - dlow, -qc * c);
  }
  if (!rem.empty()) return std::nullopt;
  return quot;
}

/// Exact quotient num/den in the scalar ring when it exists and each operand
/// has a single atom profile; nullopt otherwise.
inline std::optional<ScalarExpr> divide_exact(const ScalarExpr& num, const ScalarExpr& den) {
  if (den.is_zero()) throw std::domain_error("division by zero scalar");
  if (num.is_zero()) return ScalarExpr{};
  auto n = num.split_atoms();
  auto d = den.split_atoms();
  if (!n || !d) return std::nullopt;
  const auto& [na, np] = *n;
  const auto& [da, dp] = *d;
  // r_A / r_B = r_{A xor B} / prod_{k in B \ A} (1 - q^{2k})
  std::vector<int> b_only;
  std::set_difference(da.begin(), da.end(), na.begin(), na.end(), std::back_inserter(b_only));
  LaurentPoly denom;
  for (const auto& [e1, c1] : dp)
    for (const auto& [e2, c2] : detail::reduction_factor(b_only)) detail::add_into(denom, e1 + e2, c1 * c2);
  auto q = divide_laurent(np, denom);
  if (!q) return std::nullopt;
  std::vector<int> atoms;
  std::set_symmetric_difference(na.begin(), na.end(), da.begin(), da.end(), std::back_inserter(atoms));
  ScalarExpr r;
  for (const auto& [e, c] : *q) r.add_term(Monomial{e, atoms}, c);
  return r;
}

}  // namespace qgk
