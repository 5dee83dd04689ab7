#include "qgk/corep.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qgk;

namespace {

ScalarExpr q(int e) { return ScalarExpr::q_power(e); }

BasisIndex fock_index(int p) { return BasisIndex{{}, {p}}; }

// Dense double matrix of a one-Fock-factor operator on e_0..e_cap (rows may reach cap+1).
std::vector<std::vector<double>> dense(const Operator& x, int cap, double q0) {
  std::vector<std::vector<double>> m(cap + 2, std::vector<double>(cap + 1, 0.0));
  for (int p = 0; p <= cap; ++p)
    for (const auto& [out, s] : x.apply(fock_index(p)))
      if (out.fock[0] <= cap + 1) m[out.fock[0]][p] += s.eval_double(q0);
  return m;
}

// Product A B^T restricted to columns 0..cap-1 of the square part.
double entry_product(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b, int r,
                     int c, int cap, bool transpose_left) {
  double sum = 0;
  for (int k = 0; k <= cap; ++k) {
    const double x = transpose_left ? a[k][r] : a[r][k];
    const double y = transpose_left ? b[k][c] : b[c][k];
    sum += x * y;
  }
  return sum;
}

std::vector<WeylFamily> families_up_to(int a, int c, int d_lo, int d_hi) {
  std::vector<WeylFamily> out;
  for (int n = 1; n <= a; ++n) out.emplace_back(Family::A, n);
  for (int n = 2; n <= c; ++n) out.emplace_back(Family::C, n);
  for (int n = d_lo; n <= d_hi; ++n) out.emplace_back(Family::D, n);
  return out;
}

void all_words(int rank, int max_len, Word& cur, const std::function<void(const Word&)>& fn) {
  fn(cur);
  if (static_cast<int>(cur.size()) == max_len) return;
  for (int i = 1; i <= rank; ++i) {
    cur.push_back(i);
    all_words(rank, max_len, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

TEST(Corep, PsiEntries) {
  const CorepMatrix psi = psi_corep(1);
  for (int p = 0; p < 6; ++p) {
    const auto a = psi.at(1, 1).apply(fock_index(p));
    if (p == 0) {
      EXPECT_TRUE(a.empty());
    } else {
      EXPECT_EQ(a, (SparseVector{{fock_index(p - 1), ScalarExpr::root(p)}}));
    }
    EXPECT_EQ(psi.at(1, 2).apply(fock_index(p)), (SparseVector{{fock_index(p), -q(p + 1)}}));
    EXPECT_EQ(psi.at(2, 1).apply(fock_index(p)), (SparseVector{{fock_index(p), q(p)}}));
    EXPECT_EQ(psi.at(2, 2).apply(fock_index(p)), (SparseVector{{fock_index(p + 1), ScalarExpr::root(p + 1)}}));
  }
  EXPECT_THROW(psi_corep(0), std::invalid_argument);
}

TEST(Corep, PsiBlocksUnitaryByDenseSummation) {
  const int cap = 12;
  for (int d : {1, 2}) {
    const CorepMatrix psi = psi_corep(d);
    std::vector<std::vector<std::vector<double>>> m(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m[2 * i + j] = dense(psi.at(i + 1, j + 1), cap, 0.5);
    // sum_k M_ik M_jk^T and sum_k M_ki^T M_kj on interior indices
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int r = 0; r < cap - 1; ++r) {
          for (int c = 0; c < cap - 1; ++c) {
            double row = 0;
            double col = 0;
            for (int k = 0; k < 2; ++k) {
              row += entry_product(m[2 * i + k], m[2 * j + k], r, c, cap, false);
              col += entry_product(m[2 * k + i], m[2 * k + j], r, c, cap, true);
            }
            const double expect = (i == j && r == c) ? 1.0 : 0.0;
            EXPECT_NEAR(row, expect, 1e-12);
            EXPECT_NEAR(col, expect, 1e-12);
          }
        }
      }
    }
    EXPECT_LT(unitarity_defect(psi, Window{0, 14, 6}, Rational(1, 2)), 1e-12);
  }
}

TEST(Corep, PiSimpleExamples) {
  EXPECT_EQ(pi_simple(WeylFamily(Family::A, 1), 1), psi_corep(1));
  const CorepMatrix a21 = pi_simple(WeylFamily(Family::A, 2), 1);
  EXPECT_EQ(a21.at(3, 3), Operator::identity({0, 1}));
  EXPECT_TRUE(a21.at(1, 3).is_zero());
  const CorepMatrix c22 = pi_simple(WeylFamily(Family::C, 2), 2);
  for (int p = 0; p < 5; ++p)
    EXPECT_EQ(c22.at(2, 3).apply(fock_index(p)), (SparseVector{{fock_index(p), -q(2 * (p + 1))}}));
  EXPECT_THROW(pi_simple(WeylFamily(Family::A, 2), 3), std::out_of_range);
}

TEST(Corep, ChiEExamples) {
  const CorepMatrix a2 = chi_e(WeylFamily(Family::A, 2));
  const Signature s2{2, 0};
  EXPECT_EQ(a2.at(1, 1), Operator::laurent_shift(s2, 0, -1) * Operator::laurent_shift(s2, 1, -1));
  EXPECT_EQ(a2.at(2, 2), Operator::laurent_shift(s2, 1, +1));
  EXPECT_EQ(a2.at(3, 3), Operator::laurent_shift(s2, 0, +1));
  EXPECT_TRUE(a2.at(1, 2).is_zero());
  const CorepMatrix c2 = chi_e(WeylFamily(Family::C, 2));
  EXPECT_EQ(c2.at(4, 4), Operator::laurent_shift(s2, 0, +1));
  EXPECT_EQ(c2.at(3, 3), Operator::laurent_shift(s2, 1, +1));
  EXPECT_EQ(c2.at(1, 1), Operator::laurent_shift(s2, 0, -1));
}

TEST(Corep, ConvolveWithIdentity) {
  const CorepMatrix b = pi_simple(WeylFamily(Family::A, 2), 2);
  const CorepMatrix id = CorepMatrix::identity(3, Signature{0, 0});
  EXPECT_EQ(convolve(id, b), b);
  const CorepMatrix id1 = CorepMatrix::identity(3, Signature{1, 0});
  const CorepMatrix r = convolve(id1, b);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) EXPECT_EQ(r.at(i, j), Operator::identity({1, 0}).tensor(b.at(i, j)));
}

TEST(Corep, ConvolveTwoPsi) {
  const CorepMatrix psi = psi_corep(1);
  const CorepMatrix r = convolve(psi, psi);
  const Operator expect = disc_alpha().tensor(disc_alpha()) + psi.at(1, 2).tensor(disc_beta());
  EXPECT_EQ(r.at(1, 1), expect);
  EXPECT_EQ(r.signature(), (Signature{0, 2}));
  EXPECT_THROW(convolve(psi, chi_e(WeylFamily(Family::A, 2))), std::invalid_argument);
}

TEST(Corep, ChiWordSmall) {
  const WeylFamily a1(Family::A, 1);
  EXPECT_EQ(chi_word(a1, {}), convolve(chi_e(a1), CorepMatrix::identity(2, {0, 0})));
  const CorepMatrix m = chi_word(a1, {1});
  EXPECT_EQ(m.signature(), (Signature{1, 1}));
  EXPECT_EQ(m.at(2, 1), Operator::laurent_shift({1, 0}, 0, +1).tensor(disc_beta()));
  bool reduced = true;
  chi_word(WeylFamily(Family::A, 2), {1, 1}, &reduced);
  EXPECT_FALSE(reduced);
  chi_word(WeylFamily(Family::A, 2), {1, 2, 1}, &reduced);
  EXPECT_TRUE(reduced);
}

TEST(CorepProperty, DiagonalFactorization) {
  for (const auto& fam : families_up_to(3, 3, 2, 3)) {
    const WeylGroup g(fam);
    Word cur;
    all_words(fam.rank, 4, cur, [&](const Word& w) {
      if (!g.is_reduced(w)) return;
      EXPECT_TRUE(diagonal_factorization_holds(fam, w)) << fam.name() << " " << word_str(w);
    });
  }
}

TEST(CorepProperty, UnitarityOfLongestWord) {
  for (const auto& fam : families_up_to(3, 2, 3, 3)) {
    const CorepMatrix m = chi_word(fam, longest_element(WeylGroup(fam)));
    EXPECT_LE(unitarity_defect(m, Window{0, 14, 6}, Rational(1, 2)), 1e-10) << fam.name();
  }
}

TEST(Corep, FlippedSignFailsUnitarity) {
  CorepMatrix psi = psi_corep(1);
  psi.at(1, 2) = psi.at(1, 2).scaled(ScalarExpr(-1));
  EXPECT_GT(unitarity_defect(psi, Window{0, 14, 6}, Rational(1, 2)), 0.1);
}

TEST(Corep, JsonExport) {
  const auto j = psi_corep(1).to_json();
  EXPECT_EQ(j["size"], 2);
  EXPECT_EQ(j["signature"]["fock"], 1);
  EXPECT_EQ(j["entries"][1][0][0], "term: z=[] a=[0] c=[0] coeff=(1)*q^(N1)");
}
