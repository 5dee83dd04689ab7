#pragma once

// Quotient spaces: torus subgroups L of T^m given by their annihilator
// lattice, Smith normal form, and the dimension count 2 l(w^S) + rank L.

#include "qgk/growth.hpp"
#include "qgk/weyl.hpp"

#include <gmpxx.h>

#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgk {

using IntMatrix = std::vector<std::vector<mpz_class>>;

inline IntMatrix identity_matrix(int n) {
  IntMatrix m(n, std::vector<mpz_class>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t rows = a.size();
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b[0].size() : 0;
  IntMatrix r(rows, std::vector<mpz_class>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i].size() != inner) throw std::invalid_argument("matrix shape mismatch");
    for (std::size_t k = 0; k < inner; ++k)
      for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
  }
  return r;
}

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... .
struct SmithForm {
  IntMatrix u;
  IntMatrix v;
  IntMatrix d;
  /// nonzero diagonal entries, positive
  std::vector<mpz_class> invariants;
  int rank = 0;
};

inline SmithForm smith_normal_form(const IntMatrix& a, int cols) {
  const int rows = static_cast<int>(a.size());
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("ragged lattice matrix");
  SmithForm s;
  s.d = a;
  s.u = identity_matrix(rows);
  s.v = identity_matrix(cols);
  IntMatrix& d = s.d;

  auto swap_rows = [&](int i, int j) {
    std::swap(d[i], d[j]);
    std::swap(s.u[i], s.u[j]);
  };
  auto swap_cols = [&](int i, int j) {
    for (auto& row : d) std::swap(row[i], row[j]);
    for (auto& row : s.v) std::swap(row[i], row[j]);
  };
  // row_i -= f * row_j
  auto row_op = [&](int i, int j, const mpz_class& f) {
    for (int c = 0; c < cols; ++c) d[i][c] -= f * d[j][c];
    for (int c = 0; c < rows; ++c) s.u[i][c] -= f * s.u[j][c];
  };
  // col_i -= f * col_j
  auto col_op = [&](int i, int j, const mpz_class& f) {
    for (int r = 0; r < rows; ++r) d[r][i] -= f * d[r][j];
    for (int r = 0; r < cols; ++r) s.v[r][i] -= f * s.v[r][j];
  };

  int t = 0;
  for (; t < rows && t < cols; ++t) {
    // smallest nonzero entry in the remaining block becomes the pivot
    for (;;) {
      int pr = -1, pc = -1;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j)
          if (d[i][j] != 0 && (pr < 0 || abs(d[i][j]) < abs(d[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr < 0) goto done;
      swap_rows(t, pr);
      swap_cols(t, pc);
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), d[i][t].get_mpz_t(), d[t][t].get_mpz_t());
        row_op(i, t, f);
        if (d[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), d[t][j].get_mpz_t(), d[t][t].get_mpz_t());
        col_op(j, t, f);
        if (d[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: fold any entry not divisible by the pivot into row t
      bool divides = true;
      for (int i = t + 1; i < rows && divides; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (d[i][j] % d[t][t] != 0) {
            for (int c = 0; c < cols; ++c) d[t][c] += d[i][c];
            for (int c = 0; c < rows; ++c) s.u[t][c] += s.u[i][c];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d[t][t] < 0) {
      for (int c = 0; c < cols; ++c) d[t][c] = -d[t][c];
      for (int c = 0; c < rows; ++c) s.u[t][c] = -s.u[t][c];
    }
  }
done:
  for (int i = 0; i < rows && i < cols; ++i)
    if (d[i][i] != 0) s.invariants.push_back(d[i][i]);
  s.rank = static_cast<int>(s.invariants.size());
  return s;
}

/// Closed subgroup of T^m given by its annihilator lattice (rows).
struct TorusSubgroup {
  int ambient = 0;
  IntMatrix annihilator;
};

/// Rows of integers separated by ';', e.g. "1 0; 0 2". Empty text is the zero lattice.
inline TorusSubgroup parse_lattice(int ambient, const std::string& text) {
  if (ambient < 0) throw std::invalid_argument("ambient dimension must be nonnegative");
  TorusSubgroup l;
  l.ambient = ambient;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::stringstream cells(row);
    std::vector<mpz_class> v;
    std::string cell;
    while (cells >> cell) {
      mpz_class z;
      if (z.set_str(cell, 10) != 0) throw std::invalid_argument("bad lattice entry '" + cell + "'");
      v.push_back(z);
    }
    if (v.empty()) continue;
    if (static_cast<int>(v.size()) != ambient)
      throw std::invalid_argument("lattice row has " + std::to_string(v.size()) + " entries, expected " +
                                  std::to_string(ambient));
    l.annihilator.push_back(std::move(v));
  }
  return l;
}

struct LatticeRank {
  int k = 0;
  SmithForm smith;
  bool torsion = false;
};

/// rank L = m - rank(annihilator).
inline LatticeRank lattice_rank(const TorusSubgroup& l) {
  LatticeRank r;
  r.smith = smith_normal_form(l.annihilator, l.ambient);
  r.k = l.ambient - r.smith.rank;
  for (const auto& x : r.smith.invariants)
    if (x != 1) r.torsion = true;
  return r;
}

/// Monomial isomorphism of the free part of Z^m / annihilator with Z^k.
struct TorusEmbedding {
  int k = 0;
  /// m x k: column c is a lift of the c-th basis vector of the free quotient,
  /// i.e. the map t -> (t^{col_1}, ..., ) from T^k onto L.
  IntMatrix embedding;
  /// k x m: row c gives the character of T^m restricting to the c-th coordinate of T^k.
  IntMatrix characters;
  bool torsion = false;
};

inline IntMatrix inverse_unimodular(const IntMatrix& v) {
  const int n = static_cast<int>(v.size());
  IntMatrix a = v;
  IntMatrix inv = identity_matrix(n);
  for (int c = 0; c < n; ++c) {
    // Euclid on column c to bring a unit to the diagonal
    for (;;) {
      int p = -1;
      for (int r = c; r < n; ++r)
        if (a[r][c] != 0 && (p < 0 || abs(a[r][c]) < abs(a[p][c]))) p = r;
      if (p < 0) throw std::invalid_argument("matrix is singular");
      std::swap(a[c], a[p]);
      std::swap(inv[c], inv[p]);
      bool clean = true;
      for (int r = c + 1; r < n; ++r) {
        if (a[r][c] == 0) continue;
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), a[r][c].get_mpz_t(), a[c][c].get_mpz_t());
        for (int j = 0; j < n; ++j) {
          a[r][j] -= f * a[c][j];
          inv[r][j] -= f * inv[c][j];
        }
        if (a[r][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (abs(a[c][c]) != 1) throw std::invalid_argument("matrix is not unimodular");
    if (a[c][c] < 0) {
      for (int j = 0; j < n; ++j) {
        a[c][j] = -a[c][j];
        inv[c][j] = -inv[c][j];
      }
    }
  }
  for (int c = n - 1; c >= 0; --c)
    for (int r = 0; r < c; ++r) {
      const mpz_class f = a[r][c];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  return inv;
}

inline TorusEmbedding torus_embedding(const TorusSubgroup& l) {
  const LatticeRank lr = lattice_rank(l);
  TorusEmbedding e;
  e.k = lr.k;
  e.torsion = lr.torsion;
  const int m = l.ambient;
  const int s = lr.smith.rank;
  const IntMatrix vinv = inverse_unimodular(lr.smith.v);
  e.embedding.assign(m, std::vector<mpz_class>(e.k, 0));
  e.characters.assign(e.k, std::vector<mpz_class>(m, 0));
  for (int c = 0; c < e.k; ++c) {
    for (int r = 0; r < m; ++r) {
      e.embedding[r][c] = lr.smith.v[r][s + c];
      e.characters[c][r] = vinv[s + c][r];
    }
    // first nonzero entry of each character positive
    for (int r = 0; r < m; ++r) {
      if (e.characters[c][r] == 0) continue;
      if (e.characters[c][r] < 0) {
        for (int x = 0; x < m; ++x) {
          e.characters[c][x] = -e.characters[c][x];
          e.embedding[x][c] = -e.embedding[x][c];
        }
      }
      break;
    }
  }
  return e;
}

/// Standard parabolic subsets for quotients of size m: {1..n-m} for A_n and {m+1..n} for C_n.
inline std::set<int> standard_quotient_subset(const WeylFamily& fam, int m) {
  if (m < 1 || m > fam.rank) throw std::out_of_range("quotient size out of range");
  std::set<int> s;
  if (fam.family == Family::A) {
    for (int i = 1; i <= fam.rank - m; ++i) s.insert(i);
  } else if (fam.family == Family::C) {
    for (int i = m + 1; i <= fam.rank; ++i) s.insert(i);
  } else {
    throw std::invalid_argument("standard quotient subsets are defined for types A and C");
  }
  return s;
}

struct QuotientReport {
  int coset_length = 0;
  int k = 0;
  int value = 0;
  bool proven = false;
  bool torsion = false;
};

inline QuotientReport gkdim_quotient(const WeylFamily& fam, const std::set<int>& subset, const TorusSubgroup& l) {
  const WeylGroup g(fam);
  g.check_subset(subset);
  QuotientReport r;
  r.coset_length = g.length(g.longest_coset_rep(subset));
  const LatticeRank lr = lattice_rank(l);
  r.k = lr.k;
  r.torsion = lr.torsion;
  r.value = 2 * r.coset_length + r.k;
  if (fam.family != Family::D) {
    for (int m = 1; m <= fam.rank; ++m)
      if (standard_quotient_subset(fam, m) == subset) r.proven = true;
  }
  return r;
}

/// dim G - dim K for SU(n+1)/SU(n+1-m) and SP(2n)/SP(2n-2m).
inline int homogeneous_space_dim(const WeylFamily& fam, int m) {
  const int n = fam.rank;
  const int r = n - m;
  if (fam.family == Family::A) return (n * n + 2 * n) - (r * r + 2 * r);
  if (fam.family == Family::C) return (2 * n * n + n) - (2 * r * r + r);
  throw std::invalid_argument("homogeneous spaces are tabulated for types A and C");
}

}  // namespace qgk
