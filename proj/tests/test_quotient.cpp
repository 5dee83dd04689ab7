#include "qgk/quotient.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qgk;

namespace {

mpz_class determinant(IntMatrix a) {
  // fraction-free Bareiss elimination
  const int n = static_cast<int>(a.size());
  mpz_class sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return n == 0 ? mpz_class(1) : sign * a[n - 1][n - 1];
}

void expect_smith(const IntMatrix& a, int cols) {
  const SmithForm s = smith_normal_form(a, cols);
  EXPECT_EQ(multiply(multiply(s.u, a), s.v), s.d);
  EXPECT_EQ(abs(determinant(s.u)), 1);
  EXPECT_EQ(abs(determinant(s.v)), 1);
  for (std::size_t i = 0; i < s.d.size(); ++i)
    for (int j = 0; j < cols; ++j)
      if (static_cast<int>(i) != j) {
        EXPECT_EQ(s.d[i][j], 0);
      }
  for (std::size_t i = 1; i < s.invariants.size(); ++i) EXPECT_EQ(s.invariants[i] % s.invariants[i - 1], 0);
  for (const auto& x : s.invariants) EXPECT_GT(x, 0);
}

// rank over Q by fraction elimination, independent of the Smith routine
int rational_rank(const IntMatrix& a, int cols) {
  std::vector<std::vector<mpq_class>> m;
  for (const auto& row : a) {
    std::vector<mpq_class> r;
    for (const auto& x : row) r.emplace_back(x);
    m.push_back(r);
  }
  int rank = 0;
  for (int c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    int p = rank;
    while (p < static_cast<int>(m.size()) && m[p][c] == 0) ++p;
    if (p == static_cast<int>(m.size())) continue;
    std::swap(m[rank], m[p]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (static_cast<int>(i) == rank || m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[rank][c];
      for (int j = 0; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST(Lattice, RankExamples) {
  EXPECT_EQ(lattice_rank(parse_lattice(2, "")).k, 2);
  const LatticeRank diag = lattice_rank(parse_lattice(2, "1 -1"));
  EXPECT_EQ(diag.k, 1);
  EXPECT_FALSE(diag.torsion);
  const LatticeRank fin = lattice_rank(parse_lattice(2, "2 0; 0 2"));
  EXPECT_EQ(fin.k, 0);
  EXPECT_TRUE(fin.torsion);
  EXPECT_EQ(fin.smith.invariants, (std::vector<mpz_class>{2, 2}));
}

TEST(Lattice, ParseErrors) {
  EXPECT_THROW(parse_lattice(2, "1 x"), std::invalid_argument);
  EXPECT_THROW(parse_lattice(2, "1 2 3"), std::invalid_argument);
  EXPECT_THROW(parse_lattice(-1, ""), std::invalid_argument);
  EXPECT_EQ(parse_lattice(3, " ; 1 2 3 ;").annihilator.size(), 1u);
}

TEST(Smith, FixedExamples) {
  expect_smith({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, 3);
  expect_smith({{6, 0}, {0, 4}}, 2);  // 2, 12
  EXPECT_EQ(smith_normal_form({{6, 0}, {0, 4}}, 2).invariants, (std::vector<mpz_class>{2, 12}));
  expect_smith({{0, 0, 0}}, 3);
  expect_smith({}, 4);
}

TEST(Smith, RandomMatrices) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> val(-6, 6);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int t = 0; t < 200; ++t) {
    const int rows = dim(rng);
    const int cols = dim(rng);
    IntMatrix a(rows, std::vector<mpz_class>(cols));
    for (auto& row : a)
      for (auto& x : row) x = val(rng);
    expect_smith(a, cols);
    EXPECT_EQ(smith_normal_form(a, cols).rank, rational_rank(a, cols));
  }
}

TEST(Embedding, Examples) {
  const TorusEmbedding id = torus_embedding(parse_lattice(1, ""));
  EXPECT_EQ(id.k, 1);
  EXPECT_EQ(id.embedding, (IntMatrix{{1}}));
  EXPECT_EQ(id.characters, (IntMatrix{{1}}));

  // Z^2 / (1,-1) is Z via (a, b) -> a + b; L is the diagonal t -> (t, t)
  const TorusEmbedding diag = torus_embedding(parse_lattice(2, "1 -1"));
  EXPECT_EQ(diag.k, 1);
  EXPECT_EQ(diag.embedding, (IntMatrix{{1}, {1}}));

  const TorusEmbedding proj = torus_embedding(parse_lattice(2, "0 1"));
  EXPECT_EQ(proj.k, 1);
  EXPECT_EQ(proj.embedding, (IntMatrix{{1}, {0}}));
  EXPECT_EQ(proj.characters, (IntMatrix{{1, 0}}));
}

TEST(Embedding, CharactersAreDualAndKillAnnihilator) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> val(-3, 3);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 4;
    const int r = t % m;
    IntMatrix a(r, std::vector<mpz_class>(m));
    for (auto& row : a)
      for (auto& x : row) x = val(rng);
    TorusSubgroup l{m, a};
    const TorusEmbedding e = torus_embedding(l);
    EXPECT_EQ(e.k, m - rational_rank(a, m));
    if (e.k == 0) continue;
    EXPECT_EQ(multiply(e.characters, e.embedding), identity_matrix(e.k));
    // every annihilator character is trivial on the embedded torus
    if (!a.empty()) {
      const IntMatrix z = multiply(a, e.embedding);
      for (const auto& row : z)
        for (const auto& x : row) EXPECT_EQ(x, 0);
    }
  }
}

TEST(Quotient, ReferenceValues) {
  const QuotientReport a = gkdim_quotient(WeylFamily(Family::A, 2), {1}, parse_lattice(1, ""));
  EXPECT_EQ(a.coset_length, 2);
  EXPECT_EQ(a.value, 5);
  EXPECT_TRUE(a.proven);
  const QuotientReport c = gkdim_quotient(WeylFamily(Family::C, 2), {2}, parse_lattice(1, ""));
  EXPECT_EQ(c.coset_length, 3);
  EXPECT_EQ(c.value, 7);
  EXPECT_TRUE(c.proven);
  const QuotientReport full = gkdim_quotient(WeylFamily(Family::A, 2), {}, parse_lattice(2, ""));
  EXPECT_EQ(full.value, 8);
  EXPECT_TRUE(full.proven);
}

TEST(Quotient, MatchesHomogeneousSpaceDimension) {
  for (Family f : {Family::A, Family::C}) {
    for (int n = (f == Family::A ? 1 : 2); n <= 4; ++n) {
      const WeylFamily fam(f, n);
      for (int m = 1; m <= n; ++m) {
        const QuotientReport r = gkdim_quotient(fam, standard_quotient_subset(fam, m), parse_lattice(m, ""));
        EXPECT_EQ(r.value, homogeneous_space_dim(fam, m)) << fam.name() << " m=" << m;
        EXPECT_TRUE(r.proven);
      }
    }
  }
}

TEST(Quotient, CosetLengthIdentity) {
  for (const WeylFamily& fam : {WeylFamily(Family::A, 3), WeylFamily(Family::C, 3), WeylFamily(Family::D, 3)}) {
    const WeylGroup g(fam);
    const int full = g.length(g.longest());
    for (int mask = 0; mask < (1 << fam.rank); ++mask) {
      std::set<int> s;
      for (int i = 0; i < fam.rank; ++i)
        if (mask >> i & 1) s.insert(i + 1);
      const QuotientReport r = gkdim_quotient(fam, s, parse_lattice(0, ""));
      EXPECT_EQ(r.coset_length, full - g.length(g.parabolic_longest(s)));
    }
  }
}

TEST(Quotient, NonstandardSubsetsAreUnproven) {
  EXPECT_FALSE(gkdim_quotient(WeylFamily(Family::A, 3), {2}, parse_lattice(1, "")).proven);
  EXPECT_FALSE(gkdim_quotient(WeylFamily(Family::D, 3), {1}, parse_lattice(1, "")).proven);
  const QuotientReport t = gkdim_quotient(WeylFamily(Family::A, 2), {1}, parse_lattice(2, "2 0"));
  EXPECT_EQ(t.k, 1);
  EXPECT_TRUE(t.torsion);
  EXPECT_THROW(gkdim_quotient(WeylFamily(Family::A, 2), {3}, parse_lattice(1, "")), std::exception);
}
