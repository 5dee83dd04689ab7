#pragma once

// Corepresentation matrices: images of the generators u^i_j (row i, column j)
// under the actions Psi, pi_{s_i}, chi_e and their convolutions.

#include "qgk/operator.hpp"
#include "qgk/weyl.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgk {

/// Truncation used when evaluating operator identities numerically.
struct Window {
  int laurent_radius = 0;
  int fock_cap = 14;
  int margin = 6;

  void validate() const {
    if (margin < 0 || laurent_radius < 0 || fock_cap < margin)
      throw std::invalid_argument("window needs R_f >= margin >= 0 and R_z >= 0");
  }
};

class CorepMatrix {
 public:
  CorepMatrix() = default;
  CorepMatrix(int size, Signature sig) : size_(size), sig_(sig), entries_(size * size, Operator::zero(sig)) {
    if (size < 1) throw std::invalid_argument("matrix size must be positive");
  }

  static CorepMatrix identity(int size, Signature sig) {
    CorepMatrix m(size, sig);
    for (int i = 1; i <= size; ++i) m.at(i, i) = Operator::identity(sig);
    return m;
  }

  int size() const { return size_; }
  const Signature& signature() const { return sig_; }

  /// Image of u^i_j, 1-based.
  const Operator& at(int i, int j) const { return entries_.at(index(i, j)); }
  Operator& at(int i, int j) { return entries_.at(index(i, j)); }

  bool operator==(const CorepMatrix& o) const {
    return size_ == o.size_ && sig_ == o.sig_ && entries_ == o.entries_;
  }

  /// {size, signature, entries}: entries[i][j] is the list of dumped term lines.
  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 1; i <= size_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 1; j <= size_; ++j) row.push_back(at(i, j).dump_lines());
      rows.push_back(std::move(row));
    }
    return {{"size", size_},
            {"signature", {{"laurent", sig_.laurent}, {"fock", sig_.fock}}},
            {"entries", std::move(rows)}};
  }

 private:
  std::size_t index(int i, int j) const {
    if (i < 1 || i > size_ || j < 1 || j > size_) throw std::out_of_range("matrix index out of range");
    return static_cast<std::size_t>((i - 1) * size_ + (j - 1));
  }

  int size_ = 0;
  Signature sig_;
  std::vector<Operator> entries_;
};

/// Psi with parameter q^d on one Fock factor.
inline CorepMatrix psi_corep(int d) {
  if (d < 1) throw std::invalid_argument("psi_corep needs d >= 1");
  const Signature sig{0, 1};
  CorepMatrix m(2, sig);
  m.at(1, 1) = disc_alpha(d);
  m.at(2, 2) = disc_alpha_star(d);
  m.at(1, 2) = Operator::fock(sig, 0, 0, FockCoeff::q_power_n(1, 0, d, ScalarExpr::q_power(d, -1)), 0);
  m.at(2, 1) = disc_beta(d);
  return m;
}

/// Index pairs (a, b) on which pi_{s_i} acts as Psi.
inline std::vector<std::pair<int, int>> doublets(const WeylFamily& fam, int i) {
  fam.check_index(i);
  const int n = fam.rank;
  if (fam.family == Family::A) return {{i, i + 1}};
  if (i < n) return {{i, i + 1}, {2 * n - i, 2 * n - i + 1}};
  if (fam.family == Family::C) return {{n, n + 1}};
  return {{n - 1, n + 1}, {n, n + 2}};
}

inline CorepMatrix pi_simple(const WeylFamily& fam, int i) {
  const auto pairs = doublets(fam, i);
  const CorepMatrix psi = psi_corep(fam.root_exponent(i));
  const Signature sig{0, 1};
  CorepMatrix m(fam.corep_dim(), sig);
  std::vector<bool> paired(fam.corep_dim() + 1, false);
  for (const auto& [a, b] : pairs) {
    paired[a] = paired[b] = true;
    m.at(a, a) = psi.at(1, 1);
    m.at(a, b) = psi.at(1, 2);
    m.at(b, a) = psi.at(2, 1);
    m.at(b, b) = psi.at(2, 2);
  }
  for (int k = 1; k <= fam.corep_dim(); ++k)
    if (!paired[k]) m.at(k, k) = Operator::identity(sig);
  return m;
}

/// Diagonal Laurent matrix chi_e.
inline CorepMatrix chi_e(const WeylFamily& fam) {
  const int n = fam.rank;
  const Signature sig{n, 0};
  CorepMatrix m(fam.corep_dim(), sig);
  auto shift_at = [&](int position, int z) { return Operator::laurent_shift(sig, position - 1, z); };
  if (fam.family == Family::A) {
    Operator all = Operator::identity(sig);
    for (int p = 1; p <= n; ++p) all = all * shift_at(p, -1);
    m.at(1, 1) = all;
    for (int i = 2; i <= n + 1; ++i) m.at(i, i) = shift_at(n + 2 - i, +1);
  } else {
    for (int i = 1; i <= 2 * n; ++i) m.at(i, i) = i > n ? shift_at(2 * n + 1 - i, +1) : shift_at(i, -1);
  }
  return m;
}

/// (A * B)(u^i_j) = sum_k A(u^i_k) (x) B(u^k_j)
inline CorepMatrix convolve(const CorepMatrix& a, const CorepMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("corepresentation size mismatch");
  const int n = a.size();
  CorepMatrix r(n, a.signature().concat(b.signature()));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      Operator sum = Operator::zero(r.signature());
      for (int k = 1; k <= n; ++k) {
        if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
        sum += a.at(i, k).tensor(b.at(k, j));
      }
      r.at(i, j) = std::move(sum);
    }
  }
  return r;
}

/// pi_{s_{i1}} * ... * pi_{s_{ik}}; the empty word gives the unit matrix on no factors.
inline CorepMatrix pi_word(const WeylFamily& fam, const Word& word) {
  CorepMatrix m = CorepMatrix::identity(fam.corep_dim(), Signature{0, 0});
  for (int i : word) m = convolve(m, pi_simple(fam, i));
  return m;
}

/// chi_e * pi_w. When `reduced` is given it receives whether the word is reduced.
inline CorepMatrix chi_word(const WeylFamily& fam, const Word& word, bool* reduced = nullptr) {
  for (int i : word) fam.check_index(i);
  if (reduced) *reduced = WeylGroup(fam).is_reduced(word);
  return convolve(chi_e(fam), pi_word(fam, word));
}

/// Whether every entry satisfies chi_w(u^i_j) = chi_e(u^i_i) (x) pi_w(u^i_j).
inline bool diagonal_factorization_holds(const WeylFamily& fam, const Word& word) {
  const CorepMatrix chi = chi_word(fam, word);
  const CorepMatrix e = chi_e(fam);
  const CorepMatrix pi = pi_word(fam, word);
  for (int i = 1; i <= fam.corep_dim(); ++i)
    for (int j = 1; j <= fam.corep_dim(); ++j)
      if (!(chi.at(i, j) == e.at(i, i).tensor(pi.at(i, j)))) return false;
  return true;
}

namespace detail {

inline void for_each_interior(const Signature& sig, const Window& w, const std::function<void(const BasisIndex&)>& fn) {
  const int zr = std::max(0, w.laurent_radius - w.margin);
  const int fr = std::max(0, w.fock_cap - w.margin);
  BasisIndex idx = BasisIndex::origin(sig);
  for (int& z : idx.laurent) z = -zr;
  const int total = sig.laurent + sig.fock;
  while (true) {
    fn(idx);
    int pos = total - 1;
    for (; pos >= 0; --pos) {
      if (pos >= sig.laurent) {
        int& p = idx.fock[pos - sig.laurent];
        if (p < fr) {
          ++p;
          break;
        }
        p = 0;
      } else {
        int& z = idx.laurent[pos];
        if (z < zr) {
          ++z;
          break;
        }
        z = -zr;
      }
    }
    if (pos < 0) return;
  }
}

}  // namespace detail

/// Max over interior basis vectors v and (i, j) of
/// |(sum_k M_ik M_jk^* - delta_ij) v| and |(sum_k M_ki^* M_kj - delta_ij) v|, at q0.
inline double unitarity_defect(const CorepMatrix& m, const Window& w, const Rational& q0) {
  w.validate();
  const int n = m.size();
  const Signature sig = m.signature();
  std::vector<Operator> residuals;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      Operator row = Operator::zero(sig);
      Operator col = Operator::zero(sig);
      for (int k = 1; k <= n; ++k) {
        row += m.at(i, k) * m.at(j, k).adjoint();
        col += m.at(k, i).adjoint() * m.at(k, j);
      }
      if (i == j) {
        row -= Operator::identity(sig);
        col -= Operator::identity(sig);
      }
      if (!row.is_zero()) residuals.push_back(std::move(row));
      if (!col.is_zero()) residuals.push_back(std::move(col));
    }
  }
  double worst = 0;
  for (const Operator& r : residuals) {
    detail::for_each_interior(sig, w, [&](const BasisIndex& v) {
      Real norm2 = 0;
      for (const auto& [out, s] : r.apply(v)) {
        const Real x = s.eval(q0);
        norm2 += x * x;
      }
      worst = std::max(worst, static_cast<double>(boost::multiprecision::sqrt(norm2)));
    });
  }
  return worst;
}

}  // namespace qgk
