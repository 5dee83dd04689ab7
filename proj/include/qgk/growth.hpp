#pragma once

// Span growth d(m) = dim span(Xi^m) of a generating set Xi containing 1.
//
// Basis maintenance is incremental: the candidates at step m are xi * b for
// the generators xi and the elements b that entered at step m - 1. Left
// multiplication preserves linear relations among restrictions to the input
// window, so the count at each step is the exact rank of span(Xi^m) on that
// window (at the evaluation point).

#include "qgk/corep.hpp"
#include "qgk/rank.hpp"
#include "qgk/span_modular.hpp"
#include "qgk/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace qgk {

struct GeneratorSet {
  Signature signature;
  /// gens[0] is the unit.
  std::vector<Operator> gens;
  std::vector<std::string> names;
  bool adjoint_closed = false;

  void add(const Operator& x, const std::string& name) {
    if (x.signature() != signature) throw std::invalid_argument("generator signature mismatch");
    if (x.is_zero()) return;
    for (const Operator& g : gens)
      if (g == x) return;
    gens.push_back(x);
    names.push_back(name);
  }

  bool is_adjoint_closed() const {
    for (const Operator& g : gens) {
      const Operator a = g.adjoint();
      if (std::none_of(gens.begin(), gens.end(), [&](const Operator& h) { return h == a; })) return false;
    }
    return true;
  }

  static GeneratorSet with_unit(Signature sig) {
    GeneratorSet s;
    s.signature = sig;
    s.gens.push_back(Operator::identity(sig));
    s.names.emplace_back("1");
    return s;
  }
};

/// {1, S, S*} on one Laurent factor.
inline GeneratorSet laurent_generators() {
  const Signature sig{1, 0};
  GeneratorSet s = GeneratorSet::with_unit(sig);
  s.add(Operator::laurent_shift(sig, 0, -1), "S");
  s.add(Operator::laurent_shift(sig, 0, +1), "S*");
  s.adjoint_closed = s.is_adjoint_closed();
  return s;
}

/// {1, alpha_d, alpha_d*, beta_d} on one Fock factor (d = 1 is P_q(T)).
inline GeneratorSet disc_generators(int d = 1) {
  const Signature sig{0, 1};
  GeneratorSet s = GeneratorSet::with_unit(sig);
  s.add(disc_alpha(d), "alpha");
  s.add(disc_alpha_star(d), "alpha*");
  s.add(disc_beta(d), "beta");
  s.adjoint_closed = s.is_adjoint_closed();
  return s;
}

/// {1} with the entries of chi_w and, if requested, their adjoints.
inline GeneratorSet chi_generators(const WeylFamily& fam, const Word& word, bool with_adjoints = true) {
  const CorepMatrix m = chi_word(fam, word);
  GeneratorSet s = GeneratorSet::with_unit(m.signature());
  for (int i = 1; i <= m.size(); ++i)
    for (int j = 1; j <= m.size(); ++j)
      s.add(m.at(i, j), "u" + std::to_string(i) + "_" + std::to_string(j));
  if (with_adjoints) {
    for (int i = 1; i <= m.size(); ++i)
      for (int j = 1; j <= m.size(); ++j)
        s.add(m.at(i, j).adjoint(), "u" + std::to_string(i) + "_" + std::to_string(j) + "*");
  }
  s.adjoint_closed = s.is_adjoint_closed();
  return s;
}

/// (alpha*)^a alpha^b with a + b <= m on one Fock factor.
inline std::vector<Operator> lower_family(int m) {
  if (m < 0) throw std::invalid_argument("m must be nonnegative");
  std::vector<Operator> out;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; a + b <= m; ++b) out.push_back(power(disc_alpha_star(1), a) * power(disc_alpha(1), b));
  return out;
}

struct WindowPolicy {
  int laurent_radius = 0;
  /// Initial Fock cap; negative selects 2 * m_max + 2.
  int initial_cap = -1;
  int step = 2;
  /// Largest Fock cap tried; negative selects initial + 4 * step.
  int budget = -1;

  int resolved_initial(int m_max) const { return initial_cap >= 0 ? initial_cap : 2 * m_max + 2; }
  int resolved_budget(int m_max) const {
    return budget >= 0 ? budget : resolved_initial(m_max) + 4 * step;
  }
  void validate(int m_max) const {
    if (laurent_radius < 0 || step < 1) throw std::invalid_argument("invalid window policy");
    if (resolved_budget(m_max) < resolved_initial(m_max)) throw std::invalid_argument("window budget below initial size");
  }
};

struct GrowthRow {
  int m = 0;
  int d = 0;
  int window_rz = 0;
  int window_rf = 0;
  bool stable = false;
};

struct GrowthSeries {
  std::vector<GrowthRow> rows;
  Backend backend = Backend::Multipoint;
  std::vector<Rational> points;
  double tolerance = 0;
  unsigned digits = 0;
  /// d(m) per tried Fock cap, in order.
  std::vector<std::pair<int, std::vector<int>>> history;

  bool all_stable() const {
    return std::all_of(rows.begin(), rows.end(), [](const GrowthRow& r) { return r.stable; });
  }
  std::vector<int> values() const {
    std::vector<int> v;
    for (const GrowthRow& r : rows) v.push_back(r.d);
    return v;
  }
  std::vector<GrowthRow> stable_rows() const {
    std::vector<GrowthRow> out;
    for (const GrowthRow& r : rows)
      if (r.stable) out.push_back(r);
    return out;
  }
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  for (std::size_t k = 0; k < t; ++k) {
    pool.emplace_back([&, k] {
      for (std::size_t i = k; i < n; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// Products of generators indexed by their word (leftmost letter applied last).
class ProductCache {
 public:
  explicit ProductCache(const GeneratorSet& gens) : gens_(gens) { ops_.emplace(Word{}, gens.gens.front()); }

  /// Fills the cache for all `words` whose tail word is already cached.
  void ensure(const std::vector<Word>& words, int threads) {
    std::vector<Word> missing;
    for (const Word& w : words)
      if (!ops_.count(w)) missing.push_back(w);
    std::vector<Operator> made(missing.size());
    parallel_for(missing.size(), threads, [&](std::size_t i) {
      const Word& w = missing[i];
      const Word tail(w.begin() + 1, w.end());
      made[i] = gens_.gens.at(w.front()) * ops_.at(tail);
    });
    for (std::size_t i = 0; i < missing.size(); ++i) ops_.emplace(missing[i], std::move(made[i]));
  }
  const Operator& at(const Word& w) const { return ops_.at(w); }

 private:
  const GeneratorSet& gens_;
  std::map<Word, Operator> ops_;
};

/// d(0..m_max) at one Fock cap, max over the backend's evaluation points.
inline std::vector<int> series_at_cap(const GeneratorSet& gens, int m_max, int rz, int cap, const RankOptions& opt,
                                      ProductCache& cache, int threads) {
  const std::vector<BasisIndex> inputs = window_inputs(gens.signature, rz, cap);
  std::map<Word, WindowImage> images;
  auto image_of = [&](const std::vector<Word>& words) {
    std::vector<Word> missing;
    for (const Word& w : words)
      if (!images.count(w)) missing.push_back(w);
    cache.ensure(missing, threads);
    std::vector<WindowImage> made(missing.size());
    parallel_for(missing.size(), threads, [&](std::size_t i) { made[i] = window_image(cache.at(missing[i]), inputs); });
    for (std::size_t i = 0; i < missing.size(); ++i) images.emplace(missing[i], std::move(made[i]));
  };

  std::vector<int> best(m_max + 1, 0);
  if (opt.backend == Backend::Multipoint) {
    for (const Rational& q0 : backend_points(opt)) {
      ModularSpanEngine engine(gens.gens, q0, inputs);
      SparseModEliminator elim;
      std::vector<SparseModRow> fresh{engine.unit()};
      elim.insert(fresh.front());
      best[0] = std::max(best[0], elim.rank());
      for (int m = 1; m <= m_max; ++m) {
        std::vector<std::pair<std::size_t, const SparseModRow*>> jobs;
        for (const SparseModRow& b : fresh)
          for (std::size_t g = 1; g < gens.gens.size(); ++g) jobs.emplace_back(g, &b);
        std::vector<SparseModRow> cands = engine.products(jobs, threads);
        std::vector<SparseModRow> next;
        for (SparseModRow& c : cands)
          if (elim.insert(c)) next.push_back(std::move(c));
        fresh = std::move(next);
        best[m] = std::max(best[m], elim.rank());
      }
    }
    return best;
  }
  for (const Rational& q0 : backend_points(opt)) {
    RankAccumulator acc(opt.backend, q0, opt);
    std::vector<Word> fresh{Word{}};
    image_of(fresh);
    acc.insert(images.at(Word{}));
    int d = acc.rank();
    best[0] = std::max(best[0], d);
    for (int m = 1; m <= m_max; ++m) {
      std::vector<Word> cands;
      for (const Word& b : fresh) {
        for (std::size_t g = 1; g < gens.gens.size(); ++g) {
          Word w{static_cast<int>(g)};
          w.insert(w.end(), b.begin(), b.end());
          cands.push_back(std::move(w));
        }
      }
      image_of(cands);
      std::vector<Word> next;
      for (const Word& w : cands)
        if (acc.insert(images.at(w))) next.push_back(w);
      fresh = std::move(next);
      best[m] = std::max(best[m], acc.rank());
    }
  }
  return best;
}

}  // namespace detail

/// Growth series with window stabilization: the series is recomputed at Fock
/// caps R, R + step, ... and row m is stable once its value agrees at the last
/// three caps tried.
inline GrowthSeries span_growth(const GeneratorSet& gens, int m_max, const WindowPolicy& policy = {},
                                const RankOptions& opt = {}, int threads = 1) {
  if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  if (gens.gens.empty()) throw std::invalid_argument("generator set must contain the unit");
  policy.validate(m_max);
  GrowthSeries out;
  out.backend = opt.backend;
  out.points = backend_points(opt);
  out.tolerance = opt.backend == Backend::Numeric ? opt.tolerance : 0.0;
  out.digits = opt.backend == Backend::Numeric ? opt.digits : 0;

  detail::ProductCache cache(gens);
  const int budget = policy.resolved_budget(m_max);
  const int rz = gens.signature.laurent > 0 ? policy.laurent_radius : 0;
  const int rf_base = gens.signature.fock > 0 ? policy.resolved_initial(m_max) : 0;
  for (int cap = rf_base;; cap += policy.step) {
    out.history.emplace_back(cap, detail::series_at_cap(gens, m_max, rz, cap, opt, cache, threads));
    const std::size_t h = out.history.size();
    // no Fock factor: a single pass
    if (gens.signature.fock == 0) break;
    if (h >= 3 && out.history[h - 1].second == out.history[h - 2].second &&
        out.history[h - 2].second == out.history[h - 3].second)
      break;
    if (cap + policy.step > budget) break;
  }
  const std::size_t h = out.history.size();
  const auto& last = out.history.back();
  for (int m = 1; m <= m_max; ++m) {
    GrowthRow row;
    row.m = m;
    row.d = last.second[m];
    row.window_rz = rz;
    row.window_rf = last.first;
    if (gens.signature.fock == 0) {
      row.stable = true;
    } else {
      row.stable = h >= 3 && out.history[h - 2].second[m] == row.d && out.history[h - 3].second[m] == row.d;
    }
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degree detection

struct DegreeEstimate {
  int degree = 0;
  /// True when a finite-difference order became constant; otherwise the
  /// degree is the rounded log-log slope.
  bool from_differences = false;
  /// Last three entries of each difference order tried.
  std::vector<std::vector<long long>> difference_tail;
  double loglog_slope = 0;
  double loglog_residual = 0;
};

/// Degree from the stable rows of a series (at least five needed).
inline DegreeEstimate degree_detect(const std::vector<GrowthRow>& rows_in) {
  std::vector<GrowthRow> rows;
  for (const GrowthRow& r : rows_in)
    if (r.stable) rows.push_back(r);
  if (rows.size() < 5) throw std::invalid_argument("degree detection needs at least five stable rows");
  std::sort(rows.begin(), rows.end(), [](const GrowthRow& a, const GrowthRow& b) { return a.m < b.m; });

  DegreeEstimate est;
  // least squares of ln d against ln m over the last half
  {
    const std::size_t start = rows.size() / 2;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = start; i < rows.size(); ++i) {
      if (rows[i].m < 1 || rows[i].d < 1) continue;
      xs.push_back(std::log(static_cast<double>(rows[i].m)));
      ys.push_back(std::log(static_cast<double>(rows[i].d)));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    if (xs.size() >= 2 && den != 0) {
      est.loglog_slope = (n * sxy - sx * sy) / den;
      const double icpt = (sy - est.loglog_slope * sx) / n;
      double ss = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (icpt + est.loglog_slope * xs[i]);
        ss += r * r;
      }
      est.loglog_residual = std::sqrt(ss / n);
    }
  }

  bool consecutive = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].m != rows[i - 1].m + 1) consecutive = false;
  std::vector<long long> diff;
  for (const GrowthRow& r : rows) diff.push_back(r.d);
  for (int t = 0; consecutive && diff.size() >= 3; ++t) {
    est.difference_tail.emplace_back(diff.end() - 3, diff.end());
    const std::size_t k = diff.size();
    if (diff[k - 1] == diff[k - 2] && diff[k - 2] == diff[k - 3] && diff[k - 1] != 0) {
      est.degree = t;
      est.from_differences = true;
      return est;
    }
    std::vector<long long> next;
    for (std::size_t i = 1; i < diff.size(); ++i) next.push_back(diff[i] - diff[i - 1]);
    diff = std::move(next);
  }
  est.degree = std::max(0, static_cast<int>(std::lround(est.loglog_slope)));
  return est;
}

inline DegreeEstimate degree_detect(const GrowthSeries& s) { return degree_detect(s.rows); }

// ---------------------------------------------------------------------------
// Dimension tables

struct GkdimReport {
  WeylFamily family;
  int longest_length = 0;
  bool enumerated = false;
  int gkdim = 0;
  int manifold_dim = 0;
  bool match = false;
};

inline GkdimReport gkdim_report(const WeylFamily& fam) {
  GkdimReport r;
  r.family = fam;
  if (fam.rank <= 5) {
    const WeylGroup g(fam);
    r.longest_length = g.length(g.longest());
    r.enumerated = true;
  } else {
    r.longest_length = fam.longest_length_formula();
  }
  r.gkdim = 2 * r.longest_length + fam.rank;
  r.manifold_dim = fam.manifold_dim();
  r.match = r.gkdim == r.manifold_dim;
  return r;
}

}  // namespace qgk
