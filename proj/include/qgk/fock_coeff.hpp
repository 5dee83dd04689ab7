#pragma once

// Coefficient functions of the number operators N_1..N_l of the Fock factors.
//
// A FockCoeff is a finite sum of
//     s * q^{u_1 N_1 + ... + u_l N_l} * prod sqrt(1 - q^{2 d N_f + 2 c})
// with s a ScalarExpr. The root functions in a term are square-free: a
// repeated (f, d, c) is rewritten as 1 - q^{2c} q^{2 d N_f}.

#include "qgk/scalar.hpp"

#include <compare>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgk {

/// sqrt(1 - q^{2 d N_factor + 2 c})
struct RootFn {
  int factor = 0;
  int d = 1;
  int c = 0;

  auto operator<=>(const RootFn&) const = default;
  bool operator==(const RootFn&) const = default;
};

struct CoeffKey {
  std::vector<int> u;  // exponent of q^{N_f}, one per factor
  std::vector<RootFn> roots;

  auto operator<=>(const CoeffKey&) const = default;
  bool operator==(const CoeffKey&) const = default;
};

class FockCoeff {
 public:
  using TermMap = std::map<CoeffKey, ScalarExpr>;

  explicit FockCoeff(int vars = 0) : vars_(vars) {}

  static FockCoeff constant(int vars, const ScalarExpr& s) {
    FockCoeff f(vars);
    f.add_term(CoeffKey{std::vector<int>(vars, 0), {}}, s);
    return f;
  }
  static FockCoeff one(int vars) { return constant(vars, ScalarExpr(1)); }

  /// s * q^{u N_factor}
  static FockCoeff q_power_n(int vars, int factor, int u, const ScalarExpr& s = ScalarExpr(1)) {
    check_factor(vars, factor);
    FockCoeff f(vars);
    CoeffKey key{std::vector<int>(vars, 0), {}};
    key.u[factor] = u;
    f.add_term(key, s);
    return f;
  }

  /// sqrt(1 - q^{2 d N_factor + 2 c})
  static FockCoeff root(int vars, int factor, int d, int c) {
    check_factor(vars, factor);
    if (d < 1) throw std::domain_error("root function needs d >= 1");
    FockCoeff f(vars);
    f.add_term(CoeffKey{std::vector<int>(vars, 0), {RootFn{factor, d, c}}}, ScalarExpr(1));
    return f;
  }

  int vars() const { return vars_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  void add_term(const CoeffKey& key, const ScalarExpr& s) {
    if (s.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, s);
    if (!inserted) {
      it->second += s;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  FockCoeff& operator+=(const FockCoeff& o) {
    check_vars(o);
    for (const auto& [k, s] : o.terms_) add_term(k, s);
    return *this;
  }
  FockCoeff& operator-=(const FockCoeff& o) {
    check_vars(o);
    for (const auto& [k, s] : o.terms_) add_term(k, -s);
    return *this;
  }
  friend FockCoeff operator+(FockCoeff a, const FockCoeff& b) { return a += b; }
  friend FockCoeff operator-(FockCoeff a, const FockCoeff& b) { return a -= b; }

  FockCoeff scaled(const ScalarExpr& s) const {
    FockCoeff r(vars_);
    for (const auto& [k, t] : terms_) r.add_term(k, t * s);
    return r;
  }

  friend FockCoeff operator*(const FockCoeff& a, const FockCoeff& b) {
    a.check_vars(b);
    FockCoeff r(a.vars_);
    for (const auto& [ka, sa] : a.terms_) {
      for (const auto& [kb, sb] : b.terms_) {
        std::vector<int> u(a.vars_);
        for (int f = 0; f < a.vars_; ++f) u[f] = ka.u[f] + kb.u[f];
        std::vector<RootFn> odd;
        std::vector<RootFn> common;
        std::set_symmetric_difference(ka.roots.begin(), ka.roots.end(), kb.roots.begin(),
                                      kb.roots.end(), std::back_inserter(odd));
        std::set_intersection(ka.roots.begin(), ka.roots.end(), kb.roots.begin(), kb.roots.end(),
                              std::back_inserter(common));
        // Expand prod over common roots of (1 - q^{2c} q^{2 d N_f}).
        std::map<std::vector<int>, ScalarExpr> expansion{{u, sa * sb}};
        for (const RootFn& rf : common) {
          std::map<std::vector<int>, ScalarExpr> next;
          for (const auto& [uu, s] : expansion) {
            next[uu] += s;
            std::vector<int> shifted = uu;
            shifted[rf.factor] += 2 * rf.d;
            next[shifted] -= s * ScalarExpr::q_power(2 * rf.c);
          }
          expansion = std::move(next);
        }
        for (const auto& [uu, s] : expansion) r.add_term(CoeffKey{uu, odd}, s);
      }
    }
    return r;
  }

  /// Substitute N_f -> N_f + t_f for every factor.
  FockCoeff shifted(std::span<const int> t) const {
    if (static_cast<int>(t.size()) != vars_) throw std::invalid_argument("shift arity mismatch");
    FockCoeff r(vars_);
    for (const auto& [k, s] : terms_) {
      int qshift = 0;
      for (int f = 0; f < vars_; ++f) qshift += k.u[f] * t[f];
      CoeffKey nk{k.u, k.roots};
      for (RootFn& rf : nk.roots) rf.c += rf.d * t[rf.factor];
      std::sort(nk.roots.begin(), nk.roots.end());
      r.add_term(nk, s * ScalarExpr::q_power(qshift));
    }
    return r;
  }

  FockCoeff shifted(int factor, int t) const {
    std::vector<int> v(vars_, 0);
    v.at(factor) = t;
    return shifted(v);
  }

  /// Fix N_factor = value, leaving a function of the remaining factors.
  /// Returns false in `ok` when a root argument would be negative there.
  FockCoeff substituted(int factor, int value, bool& ok) const {
    ok = true;
    FockCoeff r(vars_);
    for (const auto& [k, s] : terms_) {
      CoeffKey nk{k.u, {}};
      nk.u[factor] = 0;
      std::vector<int> atoms;
      bool dead = false;
      for (const RootFn& rf : k.roots) {
        if (rf.factor != factor) {
          nk.roots.push_back(rf);
          continue;
        }
        const int arg = rf.d * value + rf.c;
        if (arg < 0) {
          ok = false;
          return FockCoeff(vars_);
        }
        if (arg == 0) dead = true;
        atoms.push_back(arg);
      }
      if (dead) continue;
      ScalarExpr factor_value;
      factor_value.add_raw(Rational(1), k.u[factor] * value, atoms);
      r.add_term(nk, s * factor_value);
    }
    return r;
  }

  /// Value at N = (N_1..N_l), all entries >= 0.
  ScalarExpr eval(std::span<const int> n) const {
    if (static_cast<int>(n.size()) != vars_) throw std::invalid_argument("evaluation arity mismatch");
    ScalarExpr r;
    for (const auto& [k, s] : terms_) {
      int qexp = 0;
      for (int f = 0; f < vars_; ++f) qexp += k.u[f] * n[f];
      std::vector<int> atoms;
      atoms.reserve(k.roots.size());
      for (const RootFn& rf : k.roots) atoms.push_back(rf.d * n[rf.factor] + rf.c);
      ScalarExpr t;
      t.add_raw(Rational(1), qexp, std::move(atoms));
      r += s * t;
    }
    return r;
  }

  /// Coefficient on vars_ + o.vars_ factors: this on the first block, o on the second.
  FockCoeff tensor(const FockCoeff& o) const {
    FockCoeff r(vars_ + o.vars_);
    for (const auto& [ka, sa] : terms_) {
      for (const auto& [kb, sb] : o.terms_) {
        CoeffKey k;
        k.u = ka.u;
        k.u.insert(k.u.end(), kb.u.begin(), kb.u.end());
        k.roots = ka.roots;
        for (RootFn rf : kb.roots) {
          rf.factor += vars_;
          k.roots.push_back(rf);
        }
        r.add_term(k, sa * sb);
      }
    }
    return r;
  }

  bool operator==(const FockCoeff& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

  /// e.g. "(-q)*q^(N1)" or "(1)*sqrt(1-q^(2N1+2))"
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, s] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << s.str() << ")";
      std::ostringstream ex;
      bool any = false;
      for (int f = 0; f < vars_; ++f) {
        if (k.u[f] == 0) continue;
        if (any) ex << (k.u[f] > 0 ? "+" : "");
        any = true;
        if (k.u[f] == 1) {
          ex << "N" << f + 1;
        } else if (k.u[f] == -1) {
          ex << "-N" << f + 1;
        } else {
          ex << k.u[f] << "N" << f + 1;
        }
      }
      if (any) os << "*q^(" << ex.str() << ")";
      for (const RootFn& rf : k.roots) {
        os << "*sqrt(1-q^(" << 2 * rf.d << "N" << rf.factor + 1;
        if (rf.c != 0) os << (rf.c > 0 ? "+" : "") << 2 * rf.c;
        os << "))";
      }
    }
    return os.str();
  }

 private:
  static void check_factor(int vars, int factor) {
    if (factor < 0 || factor >= vars) throw std::out_of_range("Fock factor index out of range");
  }
  void check_vars(const FockCoeff& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("Fock coefficient arity mismatch");
  }

  int vars_ = 0;
  TermMap terms_;
};

}  // namespace qgk
