#pragma once

// Rank of finite families of operators restricted to a window of inputs.
//
// An operator x becomes a row indexed by (input, output) pairs, with entry the
// matrix coefficient <e_out, x e_in>. Two backends:
//
//   multipoint  every entry at a fixed (input, output) carries the same odd
//               root product; it is divided out, the remaining Laurent
//               polynomial is evaluated at q0 modulo a 62-bit prime, and the
//               exact rank there is taken. Max over several q0.
//   numeric     MPFR evaluation of the raw entries at one q0 with pivoted
//               elimination and a relative tolerance.

#include "qgk/operator.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgk {

enum class Backend { Multipoint, Numeric };

inline std::string backend_name(Backend b) { return b == Backend::Multipoint ? "multipoint" : "numeric"; }

inline Backend parse_backend(const std::string& s) {
  if (s == "multipoint") return Backend::Multipoint;
  if (s == "numeric") return Backend::Numeric;
  throw std::invalid_argument("unknown backend '" + s + "' (expected multipoint or numeric)");
}

struct RankOptions {
  Backend backend = Backend::Multipoint;
  /// Evaluation points; the numeric backend uses the first.
  std::vector<Rational> points{Rational(1, 2), Rational(1, 3), Rational(2, 5)};
  unsigned digits = 30;
  double tolerance = 1e-9;
};

/// Input basis vectors: Laurent indices in [-laurent_radius, laurent_radius],
/// Fock indices in [0, fock_cap], all factors independently.
inline std::vector<BasisIndex> window_inputs(const Signature& sig, int laurent_radius, int fock_cap) {
  std::vector<BasisIndex> out{BasisIndex::origin(sig)};
  auto extend = [&](bool laurent, int pos, int lo, int hi) {
    std::vector<BasisIndex> next;
    next.reserve(out.size() * (hi - lo + 1));
    for (const BasisIndex& b : out) {
      for (int v = lo; v <= hi; ++v) {
        BasisIndex c = b;
        (laurent ? c.laurent : c.fock)[pos] = v;
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  };
  for (int t = 0; t < sig.laurent; ++t) extend(true, t, -laurent_radius, laurent_radius);
  for (int f = 0; f < sig.fock; ++f) extend(false, f, 0, fock_cap);
  return out;
}

// ---------------------------------------------------------------------------
// Modular arithmetic

namespace modp {

inline constexpr std::uint64_t kPrime = 4611686018427387847ULL;  // 2^62 - 57

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s >= kPrime ? s - kPrime : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
inline std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t inv(std::uint64_t a) {
  if (a == 0) throw std::domain_error("inverse of zero modulo p");
  return pow(a, kPrime - 2);
}
inline std::uint64_t from_mpz(const mpz_class& z) {
  mpz_class r = z % mpz_class(std::to_string(kPrime));
  if (r < 0) r += mpz_class(std::to_string(kPrime));
  return std::stoull(r.get_str());
}
inline std::uint64_t from_rational(const Rational& c) {
  const std::uint64_t den = from_mpz(c.get_den());
  if (den == 0) throw std::domain_error("denominator divisible by the modulus");
  return mul(from_mpz(c.get_num()), inv(den));
}

}  // namespace modp

// ---------------------------------------------------------------------------
// Row construction

/// Column bookkeeping shared by all rows of one rank computation.
class ColumnIndex {
 public:
  /// Id of (input, output) and, for the multipoint backend, the column's root set.
  int id(const BasisIndex& in, const BasisIndex& out) {
    auto [it, inserted] = ids_.try_emplace(std::make_pair(in, out), static_cast<int>(atoms_.size()));
    if (inserted) atoms_.emplace_back();
    return it->second;
  }
  std::optional<std::vector<int>>& atoms(int col) { return atoms_.at(col); }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::map<std::pair<BasisIndex, BasisIndex>, int> ids_;
  std::vector<std::optional<std::vector<int>>> atoms_;
};

/// Exact images of the window inputs, computed once per operator.
using WindowImage = std::vector<std::pair<BasisIndex, SparseVector>>;

inline WindowImage window_image(const Operator& x, const std::vector<BasisIndex>& inputs) {
  WindowImage img;
  for (const BasisIndex& in : inputs) {
    SparseVector v = x.apply(in);
    if (!v.empty()) img.emplace_back(in, std::move(v));
  }
  return img;
}

using ModRow = std::map<int, std::uint64_t>;

class ModularEvaluator {
 public:
  explicit ModularEvaluator(const Rational& q0) {
    if (q0 <= 0 || q0 >= 1) throw std::domain_error("q0 must lie in (0,1)");
    q_ = modp::from_rational(q0);
    q_inv_ = modp::inv(q_);
  }

  std::uint64_t q_power(int e) {
    auto it = powers_.find(e);
    if (it != powers_.end()) return it->second;
    const std::uint64_t v = e >= 0 ? modp::pow(q_, e) : modp::pow(q_inv_, -e);
    powers_.emplace(e, v);
    return v;
  }

  /// Row of x on the window; the odd root product of each column is divided out.
  ModRow row(const WindowImage& img, ColumnIndex& cols) {
    ModRow r;
    for (const auto& [in, vec] : img) {
      for (const auto& [out, s] : vec) {
        const int col = cols.id(in, out);
        auto split = s.split_atoms();
        if (!split) throw std::logic_error("matrix entry mixes root profiles: " + s.str());
        auto& known = cols.atoms(col);
        if (!known) {
          known = split->first;
        } else if (*known != split->first) {
          throw std::logic_error("column root profile mismatch: " + s.str());
        }
        std::uint64_t v = 0;
        for (const auto& [e, c] : split->second) v = modp::add(v, modp::mul(modp::from_rational(c), q_power(e)));
        if (v != 0) r.emplace(col, v);
      }
    }
    return r;
  }

 private:
  std::uint64_t q_ = 0;
  std::uint64_t q_inv_ = 0;
  std::map<int, std::uint64_t> powers_;
};

/// Incremental row echelon form over F_p.
class ModularEliminator {
 public:
  /// Adds the row if it is independent of the rows kept so far.
  bool insert(ModRow row) {
    while (!row.empty()) {
      const auto [col, lead] = *row.begin();
      auto pit = pivots_.find(col);
      if (pit == pivots_.end()) {
        const std::uint64_t li = modp::inv(lead);
        std::vector<std::pair<int, std::uint64_t>> stored;
        stored.reserve(row.size());
        for (const auto& [c, v] : row) stored.emplace_back(c, modp::mul(v, li));
        pivots_.emplace(col, std::move(stored));
        return true;
      }
      for (const auto& [c, v] : pit->second) {
        const std::uint64_t delta = modp::mul(lead, v);
        auto [it, inserted] = row.try_emplace(c, 0);
        it->second = modp::sub(it->second, delta);
        if (it->second == 0) row.erase(it);
      }
    }
    return false;
  }
  int rank() const { return static_cast<int>(pivots_.size()); }

 private:
  std::map<int, std::vector<std::pair<int, std::uint64_t>>> pivots_;
};

// ---------------------------------------------------------------------------
// Numeric backend

using RealRow = std::map<int, Real>;

class NumericEvaluator {
 public:
  NumericEvaluator(const Rational& q0, unsigned digits) : q0_(q0), digits_(digits) {
    if (q0 <= 0 || q0 >= 1) throw std::domain_error("q0 must lie in (0,1)");
  }

  RealRow row(const WindowImage& img, ColumnIndex& cols) {
    RealRow r;
    PrecisionGuard guard(digits_ + kGuardDigits);
    for (const auto& [in, vec] : img) {
      for (const auto& [out, s] : vec) {
        Real v = s.eval(q0_, digits_);
        if (v != 0) r.emplace(cols.id(in, out), std::move(v));
      }
    }
    return r;
  }

  unsigned digits() const { return digits_; }

 private:
  Rational q0_;
  unsigned digits_;
};

/// Incremental elimination with a relative tolerance: a reduced row whose
/// largest entry is below tol * (largest entry of the original row) is dependent.
/// The pivot of a new row is its largest remaining entry (first column on ties).
class NumericEliminator {
 public:
  NumericEliminator(double tol, unsigned digits) : tol_(tol), digits_(digits) {}

  bool insert(RealRow row) {
    PrecisionGuard guard(digits_ + kGuardDigits);
    Real scale = 0;
    for (const auto& [c, v] : row) scale = std::max<Real>(scale, boost::multiprecision::abs(v));
    if (scale == 0) return false;
    for (const auto& [pcol, prow] : basis_) {
      auto it = row.find(pcol);
      if (it == row.end()) continue;
      const Real factor = it->second;
      for (const auto& [c, v] : prow) {
        Real& x = row[c];
        x -= factor * v;
      }
      row.erase(pcol);
    }
    int best = -1;
    Real best_abs = 0;
    for (const auto& [c, v] : row) {
      const Real a = boost::multiprecision::abs(v);
      if (a > best_abs) {
        best_abs = a;
        best = c;
      }
    }
    if (best < 0 || best_abs <= Real(tol_) * scale) return false;
    const Real piv = row.at(best);
    RealRow stored;
    for (const auto& [c, v] : row)
      if (v != 0) stored.emplace(c, v / piv);
    // keep earlier pivot rows clear of the new pivot column
    for (auto& [pcol, prow] : basis_) {
      auto it = prow.find(best);
      if (it == prow.end()) continue;
      const Real factor = it->second;
      for (const auto& [c, v] : stored) prow[c] -= factor * v;
      prow.erase(best);
    }
    basis_.emplace_back(best, std::move(stored));
    return true;
  }
  int rank() const { return static_cast<int>(basis_.size()); }

 private:
  double tol_;
  unsigned digits_;
  std::vector<std::pair<int, RealRow>> basis_;
};

/// One evaluation point of one backend: evaluator, shared columns and eliminator.
class RankAccumulator {
 public:
  RankAccumulator(Backend backend, const Rational& q0, const RankOptions& opt) : backend_(backend) {
    if (backend == Backend::Multipoint) {
      mod_eval_ = std::make_unique<ModularEvaluator>(q0);
    } else {
      num_eval_ = std::make_unique<NumericEvaluator>(q0, opt.digits);
      num_elim_ = std::make_unique<NumericEliminator>(opt.tolerance, opt.digits);
    }
  }

  bool insert(const WindowImage& img) {
    if (backend_ == Backend::Multipoint) return mod_elim_.insert(mod_eval_->row(img, cols_));
    return num_elim_->insert(num_eval_->row(img, cols_));
  }
  int rank() const { return backend_ == Backend::Multipoint ? mod_elim_.rank() : num_elim_->rank(); }

 private:
  Backend backend_;
  ColumnIndex cols_;
  std::unique_ptr<ModularEvaluator> mod_eval_;
  ModularEliminator mod_elim_;
  std::unique_ptr<NumericEvaluator> num_eval_;
  std::unique_ptr<NumericEliminator> num_elim_;
};

/// Evaluation points used by a backend.
inline std::vector<Rational> backend_points(const RankOptions& opt) {
  if (opt.points.empty()) throw std::invalid_argument("no evaluation points");
  if (opt.backend == Backend::Numeric) return {opt.points.front()};
  return opt.points;
}

/// Rank of the span of `ops` restricted to `inputs` (max over evaluation points).
inline int rank_of(const std::vector<Operator>& ops, const std::vector<BasisIndex>& inputs, const RankOptions& opt) {
  std::vector<WindowImage> images;
  images.reserve(ops.size());
  for (const Operator& x : ops) images.push_back(window_image(x, inputs));
  int best = 0;
  for (const Rational& q0 : backend_points(opt)) {
    RankAccumulator acc(opt.backend, q0, opt);
    for (const auto& img : images) acc.insert(img);
    best = std::max(best, acc.rank());
  }
  return best;
}

}  // namespace qgk
