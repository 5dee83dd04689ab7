#pragma once

// Lower-bound witnesses: the path function r_w(k), the ~ relation, the
// alpha_d independence family and the ladder element g_0.

#include "qgk/corep.hpp"
#include "qgk/rank.hpp"
#include "qgk/weyl.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgk {

// ---------------------------------------------------------------------------
// r_w(k)

struct PathResult {
  int k = 0;
  /// Unique column r with pi_w(u^k_r) e_0 = C e_0; 0 when none or several.
  int r = 0;
  ScalarExpr constant;
  std::vector<int> candidates;
  bool unique = false;
  /// pi_w(u^j_r) e_0 = 0 for admissible j != k
  bool clause1 = false;
  /// pi_w((u^k_r)^*) e_0 = C e_0
  bool clause2 = false;
  /// pi_w((u^j_r)^*) e_0 = 0 for admissible j != k
  bool clause3 = false;

  bool ok() const { return unique && clause1 && clause2 && clause3; }
};

namespace detail {

/// C when x e_0 = C e_0 with C != 0.
inline std::optional<ScalarExpr> vacuum_eigenvalue(const Operator& x) {
  const BasisIndex origin = BasisIndex::origin(x.signature());
  const SparseVector v = x.apply(origin);
  if (v.size() != 1 || v.begin()->first != origin) return std::nullopt;
  return v.begin()->second;
}

inline bool kills_vacuum(const Operator& x) { return x.apply(BasisIndex::origin(x.signature())).empty(); }

}  // namespace detail

/// Searches all columns r in 1..N_n. `first`, `last` bound the admissible rows
/// used by clauses (1) and (3).
inline PathResult find_rw(const CorepMatrix& pi, int k, int first, int last) {
  if (k < first || k > last || first < 1 || last > pi.size()) throw std::out_of_range("row index out of range");
  PathResult res;
  res.k = k;
  for (int r = 1; r <= pi.size(); ++r) {
    if (auto c = detail::vacuum_eigenvalue(pi.at(k, r))) {
      res.candidates.push_back(r);
      if (res.candidates.size() == 1) res.constant = *c;
    }
  }
  res.unique = res.candidates.size() == 1;
  if (!res.unique) return res;
  res.r = res.candidates.front();
  res.clause1 = res.clause3 = true;
  for (int j = first; j <= last; ++j) {
    if (j == k) continue;
    if (!detail::kills_vacuum(pi.at(j, res.r))) res.clause1 = false;
    if (!detail::kills_vacuum(pi.at(j, res.r).adjoint())) res.clause3 = false;
  }
  const auto cs = detail::vacuum_eigenvalue(pi.at(k, res.r).adjoint());
  res.clause2 = cs && *cs == res.constant;
  return res;
}

/// r_w(k) for the word w = w_{i+1} ... w_l, with k in [M_n^i, N_n^i].
inline PathResult find_rw(const WeylFamily& fam, const Word& word, int i, int k) {
  return find_rw(pi_word(fam, word), k, fam.lower_index(i), fam.upper_index(i));
}

struct PathTableEntry {
  int i = 0;
  int l = 0;
  Word word;
  PathResult result;
};

/// r_w(k) for every product of consecutive parts w_{i+1}..w_l of the longest
/// element and every admissible k.
inline std::vector<PathTableEntry> path_table(const WeylFamily& fam) {
  const WeylGroup g(fam);
  const PartsDecomposition pd = parts_decompose(g, longest_element(g));
  std::vector<PathTableEntry> out;
  for (int i = 0; i < fam.rank; ++i) {
    for (int l = i + 1; l <= fam.rank; ++l) {
      Word w;
      for (int r = i + 1; r <= l; ++r) w.insert(w.end(), pd.part(r).letters.begin(), pd.part(r).letters.end());
      const CorepMatrix pi = pi_word(fam, w);
      for (int k = fam.lower_index(i); k <= fam.upper_index(i); ++k)
        out.push_back({i, l, w, find_rw(pi, k, fam.lower_index(i), fam.upper_index(i))});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The ~ relation

struct SimWitness {
  ScalarExpr constant;
  std::vector<int> exponents;
};

/// T = C * T' * (q^{m_1 N_1} (x) ... (x) q^{m_l N_l}) on every window input,
/// searching m in [0, bound]^l. Throws when T' vanishes on the window.
inline std::optional<SimWitness> sim_check(const Operator& t, const Operator& tp, const std::vector<BasisIndex>& inputs,
                                           int bound) {
  if (t.signature() != tp.signature()) throw std::invalid_argument("operator signature mismatch");
  const int l = tp.signature().fock;
  std::vector<std::pair<SparseVector, SparseVector>> cols;
  bool tp_zero = true;
  for (const BasisIndex& in : inputs) {
    cols.emplace_back(t.apply(in), tp.apply(in));
    if (!cols.back().second.empty()) tp_zero = false;
  }
  if (tp_zero) throw std::invalid_argument("comparison operator vanishes on the window");

  std::vector<int> m(l, 0);
  while (true) {
    std::optional<ScalarExpr> c;
    bool ok = true;
    for (std::size_t x = 0; x < inputs.size() && ok; ++x) {
      int qe = 0;
      for (int f = 0; f < l; ++f) qe += m[f] * inputs[x].fock[f];
      const ScalarExpr twist = ScalarExpr::q_power(qe);
      const auto& [tv, tpv] = cols[x];
      if (!c) {
        if (tpv.empty()) {
          if (!tv.empty()) ok = false;
          continue;
        }
        const auto& [out, s] = *tpv.begin();
        auto it = tv.find(out);
        if (it == tv.end()) {
          ok = false;
          break;
        }
        c = divide_exact(it->second, s * twist);
        if (!c || c->is_zero()) {
          ok = false;
          break;
        }
      }
      SparseVector expect;
      for (const auto& [out, s] : tpv) expect.emplace(out, *c * twist * s);
      if (expect != tv) ok = false;
    }
    if (ok && c) return SimWitness{*c, m};
    int f = 0;
    for (; f < l; ++f) {
      if (m[f] < bound) {
        ++m[f];
        break;
      }
      m[f] = 0;
    }
    if (f == l) return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// alpha_d family

/// T_i = alpha_d^i (alpha_d^*)^{i+k}, 0 <= i <= j.
inline std::vector<Operator> alpha_family(int d, int j, int k) {
  if (d < 1 || j < 0 || k < 0) throw std::invalid_argument("alpha family needs d >= 1 and j, k >= 0");
  std::vector<Operator> out;
  for (int i = 0; i <= j; ++i) out.push_back(power(disc_alpha(d), i) * power(disc_alpha_star(d), i + k));
  return out;
}

struct AlphaFamilyRank {
  int rank = 0;
  bool stable = false;
  int window = 0;
};

/// Rank of the family on inputs e_0..e_cap, rechecked at cap + 2.
inline AlphaFamilyRank alpha_family_rank(int d, int j, int k, int cap, const RankOptions& opt = {}) {
  const auto ops = alpha_family(d, j, k);
  const Signature sig{0, 1};
  AlphaFamilyRank r;
  r.rank = rank_of(ops, window_inputs(sig, 0, cap), opt);
  r.stable = rank_of(ops, window_inputs(sig, 0, cap + 2), opt) == r.rank;
  r.window = cap;
  return r;
}

struct VandermondeCertificate {
  /// Leading exponent of q^{N} in the normalized coefficient of each T_i.
  std::vector<int> leading;
  /// prod_{p < r} (q^{a_p} - q^{a_r})
  ScalarExpr determinant;
  bool common_shift = false;
  bool common_roots = false;
  bool valid = false;
};

/// Exact certificate: every T_i shifts by the same amount and carries the same
/// root prefactor; the remaining coefficient is a polynomial in q^{N} with
/// pairwise distinct leading exponents, and the Vandermonde product of those
/// exponents is a nonzero scalar.
inline VandermondeCertificate alpha_family_certificate(int d, int j, int k) {
  const auto ops = alpha_family(d, j, k);
  VandermondeCertificate cert;
  cert.common_shift = cert.common_roots = true;
  std::optional<ShiftKey> key;
  std::optional<std::vector<RootFn>> roots;
  for (const Operator& t : ops) {
    if (t.terms().size() != 1) {
      cert.common_shift = false;
      continue;
    }
    const auto& [tk, g] = *t.terms().begin();
    if (!key) key = tk;
    if (*key != tk) cert.common_shift = false;
    int lead = 0;
    bool first = true;
    for (const auto& [ck, s] : g.terms()) {
      if (!roots) roots = ck.roots;
      if (*roots != ck.roots) cert.common_roots = false;
      if (first || ck.u[0] > lead) lead = ck.u[0];
      first = false;
    }
    cert.leading.push_back(lead);
  }
  cert.determinant = ScalarExpr(1);
  for (std::size_t p = 0; p < cert.leading.size(); ++p)
    for (std::size_t r = p + 1; r < cert.leading.size(); ++r)
      cert.determinant *= ScalarExpr::q_power(cert.leading[p]) - ScalarExpr::q_power(cert.leading[r]);
  cert.valid = cert.common_shift && cert.common_roots && !cert.determinant.is_zero() &&
               cert.leading.size() == ops.size();
  return cert;
}

// ---------------------------------------------------------------------------
// Ladder element g_0

struct LadderResult {
  int row = 0;
  int column = 0;
  Operator g0;
  std::optional<SimWitness> witness;
};

/// g_0 = chi_w(u^{N_n}_{N_n - l(w_n)}) compared with S* (x) 1 (x) ... (x) 1.
inline LadderResult ladder_witness(const WeylFamily& fam, const Word& word, int fock_cap = 4, int bound = 2) {
  const WeylGroup g(fam);
  if (!g.is_reduced(word)) throw std::invalid_argument("ladder witness needs a reduced word");
  const PartsDecomposition pd = parts_decompose(g, word);
  const int ln = static_cast<int>(pd.part(fam.rank).letters.size());
  if (ln == 0) throw std::invalid_argument("ladder witness needs a nonempty last part");
  const CorepMatrix chi = chi_word(fam, pd.concatenated());
  LadderResult res;
  res.row = fam.corep_dim();
  res.column = fam.corep_dim() - ln;
  res.g0 = chi.at(res.row, res.column);
  const Operator target = Operator::laurent_shift(chi.signature(), 0, +1);
  res.witness = sim_check(res.g0, target, window_inputs(chi.signature(), 1, fock_cap), bound);
  return res;
}

}  // namespace qgk
