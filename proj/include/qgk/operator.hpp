#pragma once

// Normal-form operators on c00(Z)^{(x) n} (x) c00(N)^{(x) l}.
//
// Each term is a tensor of per-factor pieces:
//   Laurent factor t:  the shift e_m -> e_{m + z_t}
//   Fock factor f:     (S*)^{a_f} g(N_f) S^{c_f}, i.e. e_p -> g(p - c) e_{p - c + a}
//                      for p >= c and 0 otherwise,
// where the coefficient g is shared across the Fock factors of the term (a
// FockCoeff in N_1..N_l). Terms with equal shift data are merged.

#include "qgk/fock_coeff.hpp"
#include "qgk/scalar.hpp"

#include <compare>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgk {

struct Signature {
  int laurent = 0;
  int fock = 0;

  auto operator<=>(const Signature&) const = default;
  bool operator==(const Signature&) const = default;

  Signature concat(const Signature& o) const { return {laurent + o.laurent, fock + o.fock}; }
};

/// (S*)^raise g(N) S^lower on one Fock factor
struct FockShift {
  int raise = 0;
  int lower = 0;

  auto operator<=>(const FockShift&) const = default;
  bool operator==(const FockShift&) const = default;
};

struct ShiftKey {
  std::vector<int> laurent;
  std::vector<FockShift> fock;

  auto operator<=>(const ShiftKey&) const = default;
  bool operator==(const ShiftKey&) const = default;
};

struct BasisIndex {
  std::vector<int> laurent;
  std::vector<int> fock;

  auto operator<=>(const BasisIndex&) const = default;
  bool operator==(const BasisIndex&) const = default;

  static BasisIndex origin(const Signature& sig) {
    return {std::vector<int>(sig.laurent, 0), std::vector<int>(sig.fock, 0)};
  }
};

using SparseVector = std::map<BasisIndex, ScalarExpr>;

class Operator {
 public:
  using TermMap = std::map<ShiftKey, FockCoeff>;

  Operator() = default;
  explicit Operator(Signature sig) : sig_(sig) {}

  static Operator zero(Signature sig) { return Operator(sig); }

  static Operator identity(Signature sig) { return scalar(sig, ScalarExpr(1)); }

  static Operator scalar(Signature sig, const ScalarExpr& s) {
    Operator op(sig);
    op.add_term(op.neutral_key(), FockCoeff::constant(sig.fock, s));
    return op;
  }

  /// Laurent shift e_m -> e_{m+z} on one factor (z = -1 is S, z = +1 is S*).
  static Operator laurent_shift(Signature sig, int position, int z) {
    if (position < 0 || position >= sig.laurent) throw std::out_of_range("Laurent position out of range");
    Operator op(sig);
    ShiftKey key = op.neutral_key();
    key.laurent[position] = z;
    op.add_term(key, FockCoeff::one(sig.fock));
    return op;
  }

  /// (S*)^raise g(N) S^lower on Fock factor `position`, identity elsewhere.
  /// `g` is a one-variable coefficient in N of that factor.
  static Operator fock(Signature sig, int position, int raise, const FockCoeff& g, int lower) {
    if (position < 0 || position >= sig.fock) throw std::out_of_range("Fock position out of range");
    if (g.vars() != 1) throw std::invalid_argument("single-factor coefficient expected");
    if (raise < 0 || lower < 0) throw std::invalid_argument("negative Fock shift");
    Operator op(sig);
    ShiftKey key = op.neutral_key();
    key.fock[position] = FockShift{raise, lower};
    FockCoeff embedded = FockCoeff::one(position).tensor(g).tensor(FockCoeff::one(sig.fock - position - 1));
    op.add_term(key, embedded);
    return op;
  }

  const Signature& signature() const { return sig_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds a term and restores the normal form.
  void add_term(const ShiftKey& key, const FockCoeff& g) {
    if (g.is_zero()) return;
    check_key(key);
    ShiftKey k = key;
    FockCoeff c = g;
    reduce(k, c);
    merge(k, c);
  }

  Operator& operator+=(const Operator& o) {
    check_sig(o);
    for (const auto& [k, g] : o.terms_) add_term(k, g);
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    check_sig(o);
    for (const auto& [k, g] : o.terms_) add_term(k, g.scaled(ScalarExpr(-1)));
    return *this;
  }
  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }

  Operator scaled(const ScalarExpr& s) const {
    Operator r(sig_);
    for (const auto& [k, g] : terms_) r.add_term(k, g.scaled(s));
    return r;
  }

  bool operator==(const Operator& o) const { return sig_ == o.sig_ && terms_ == o.terms_; }

  /// x* : Laurent z -> -z, Fock (a, g, c) -> (c, g, a). All scalars are real.
  Operator adjoint() const {
    Operator r(sig_);
    for (const auto& [k, g] : terms_) {
      ShiftKey nk = k;
      for (int& z : nk.laurent) z = -z;
      for (FockShift& fs : nk.fock) std::swap(fs.raise, fs.lower);
      r.add_term(nk, g);
    }
    return r;
  }

  /// this (x) o, with Laurent factors [this, o] followed by Fock factors [this, o].
  Operator tensor(const Operator& o) const {
    Operator r(sig_.concat(o.sig_));
    for (const auto& [ka, ga] : terms_) {
      for (const auto& [kb, gb] : o.terms_) {
        ShiftKey k;
        k.laurent = ka.laurent;
        k.laurent.insert(k.laurent.end(), kb.laurent.begin(), kb.laurent.end());
        k.fock = ka.fock;
        k.fock.insert(k.fock.end(), kb.fock.begin(), kb.fock.end());
        r.add_term(k, ga.tensor(gb));
      }
    }
    return r;
  }

  /// Image of one basis vector, exact.
  SparseVector apply(const BasisIndex& in) const {
    if (static_cast<int>(in.laurent.size()) != sig_.laurent || static_cast<int>(in.fock.size()) != sig_.fock)
      throw std::invalid_argument("basis index does not match operator signature");
    for (int p : in.fock)
      if (p < 0) throw std::invalid_argument("Fock index must be nonnegative");
    SparseVector out;
    std::vector<int> n(sig_.fock);
    for (const auto& [k, g] : terms_) {
      BasisIndex o;
      o.laurent = in.laurent;
      for (int t = 0; t < sig_.laurent; ++t) o.laurent[t] += k.laurent[t];
      o.fock.resize(sig_.fock);
      bool alive = true;
      for (int f = 0; f < sig_.fock && alive; ++f) {
        const FockShift& fs = k.fock[f];
        if (in.fock[f] < fs.lower) {
          alive = false;
          break;
        }
        n[f] = in.fock[f] - fs.lower;
        o.fock[f] = n[f] + fs.raise;
      }
      if (!alive) continue;
      ScalarExpr v = g.eval(n);
      if (v.is_zero()) continue;
      auto [it, inserted] = out.try_emplace(o, v);
      if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) out.erase(it);
      }
    }
    return out;
  }

  /// Apply to a finite vector.
  SparseVector apply(const SparseVector& v) const {
    SparseVector out;
    for (const auto& [idx, s] : v) {
      for (const auto& [o, t] : apply(idx)) {
        out[o] += s * t;
        if (out[o].is_zero()) out.erase(o);
      }
    }
    return out;
  }

  /// One line per term: "term: z=[..] a=[..] c=[..] coeff=<...>"
  std::string dump() const {
    std::ostringstream os;
    for (const auto& [k, g] : terms_) os << term_line(k, g) << "\n";
    return os.str();
  }

  std::vector<std::string> dump_lines() const {
    std::vector<std::string> lines;
    for (const auto& [k, g] : terms_) lines.push_back(term_line(k, g));
    return lines;
  }

 private:
  ShiftKey neutral_key() const {
    return ShiftKey{std::vector<int>(sig_.laurent, 0), std::vector<FockShift>(sig_.fock)};
  }

  void check_key(const ShiftKey& k) const {
    if (static_cast<int>(k.laurent.size()) != sig_.laurent || static_cast<int>(k.fock.size()) != sig_.fock)
      throw std::invalid_argument("term does not match operator signature");
  }
  void check_sig(const Operator& o) const {
    if (sig_ != o.sig_) throw std::invalid_argument("operator signature mismatch");
  }

  // (S*)^a g S^c = (S*)^{a-1} g(N-1) S^{c-1} whenever g vanishes at N = -1.
  void reduce(ShiftKey& k, FockCoeff& g) const {
    for (int f = 0; f < sig_.fock; ++f) {
      while (k.fock[f].raise > 0 && k.fock[f].lower > 0) {
        bool ok = true;
        FockCoeff at_boundary = g.substituted(f, -1, ok);
        if (!ok || !at_boundary.is_zero()) break;
        g = g.shifted(f, -1);
        --k.fock[f].raise;
        --k.fock[f].lower;
      }
    }
  }

  void merge(const ShiftKey& k, const FockCoeff& g) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, g);
      return;
    }
    FockCoeff sum = it->second + g;
    terms_.erase(it);
    if (sum.is_zero()) return;
    ShiftKey nk = k;
    const ShiftKey before = nk;
    reduce(nk, sum);
    if (nk == before) {
      terms_.emplace(nk, sum);
    } else {
      merge(nk, sum);
    }
  }

  static std::string vec_str(const std::vector<int>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
    return os.str();
  }

  static std::string term_line(const ShiftKey& k, const FockCoeff& g) {
    std::vector<int> a;
    std::vector<int> c;
    for (const FockShift& fs : k.fock) {
      a.push_back(fs.raise);
      c.push_back(fs.lower);
    }
    return "term: z=" + vec_str(k.laurent) + " a=" + vec_str(a) + " c=" + vec_str(c) + " coeff=" + g.str();
  }

  Signature sig_;
  TermMap terms_;
};

/// x * y (apply y first).
inline Operator compose(const Operator& x, const Operator& y) {
  if (x.signature() != y.signature()) throw std::invalid_argument("operator signature mismatch");
  const Signature sig = x.signature();
  Operator r(sig);
  std::vector<int> tx(sig.fock);
  std::vector<int> ty(sig.fock);
  for (const auto& [kx, gx] : x.terms()) {
    for (const auto& [ky, gy] : y.terms()) {
      ShiftKey k;
      k.laurent.resize(sig.laurent);
      for (int t = 0; t < sig.laurent; ++t) k.laurent[t] = kx.laurent[t] + ky.laurent[t];
      k.fock.resize(sig.fock);
      for (int f = 0; f < sig.fock; ++f) {
        const FockShift& a = kx.fock[f];
        const FockShift& b = ky.fock[f];
        // (S*)^{a1} g1 S^{c1} (S*)^{a2} g2 S^{c2} with S S* = 1.
        if (b.raise >= a.lower) {
          const int t = b.raise - a.lower;  // g1(N) S*^t = S*^t g1(N+t)
          k.fock[f] = FockShift{a.raise + t, b.lower};
          tx[f] = t;
          ty[f] = 0;
        } else {
          const int t = a.lower - b.raise;  // S^t g2(N) = g2(N+t) S^t
          k.fock[f] = FockShift{a.raise, t + b.lower};
          tx[f] = 0;
          ty[f] = t;
        }
      }
      r.add_term(k, gx.shifted(tx) * gy.shifted(ty));
    }
  }
  return r;
}

inline Operator operator*(const Operator& x, const Operator& y) { return compose(x, y); }

/// x^k, with x^0 the identity.
inline Operator power(const Operator& x, int k) {
  if (k < 0) throw std::invalid_argument("negative operator power");
  Operator r = Operator::identity(x.signature());
  for (int i = 0; i < k; ++i) r = compose(r, x);
  return r;
}

// Quantum-disc generators on a single Fock factor, for parameter q^d.

/// S sqrt(1 - q^{2dN}):  e_p -> sqrt(1 - q^{2dp}) e_{p-1}
inline Operator disc_alpha(int d = 1, Signature sig = {0, 1}, int position = 0) {
  return Operator::fock(sig, position, 0, FockCoeff::root(1, 0, d, d), 1);
}

/// sqrt(1 - q^{2dN}) S*:  e_p -> sqrt(1 - q^{2d(p+1)}) e_{p+1}
inline Operator disc_alpha_star(int d = 1, Signature sig = {0, 1}, int position = 0) {
  return Operator::fock(sig, position, 1, FockCoeff::root(1, 0, d, d), 0);
}

/// q^{dN}
inline Operator disc_beta(int d = 1, Signature sig = {0, 1}, int position = 0) {
  return Operator::fock(sig, position, 0, FockCoeff::q_power_n(1, 0, d), 0);
}

}  // namespace qgk
