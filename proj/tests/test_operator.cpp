#include "qgk/operator.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qgk;

namespace {

const Signature kDisc{0, 1};

ScalarExpr q(int e) { return ScalarExpr::q_power(e); }

SparseVector basis(const BasisIndex& b) { return SparseVector{{b, ScalarExpr(1)}}; }

BasisIndex fock_index(int p) { return BasisIndex{{}, {p}}; }

// Random word in the generators of signature (1, 2), with random scalars.
Operator random_operator(std::mt19937& rng, const Signature& sig) {
  std::vector<Operator> gens;
  for (int t = 0; t < sig.laurent; ++t) {
    gens.push_back(Operator::laurent_shift(sig, t, -1));
    gens.push_back(Operator::laurent_shift(sig, t, +1));
  }
  for (int f = 0; f < sig.fock; ++f) {
    for (int d : {1, 2}) {
      gens.push_back(disc_alpha(d, sig, f));
      gens.push_back(disc_alpha_star(d, sig, f));
      gens.push_back(disc_beta(d, sig, f));
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> len(0, 3);
  std::uniform_int_distribution<int> nterms(1, 2);
  std::uniform_int_distribution<int> coef(-3, 3);
  Operator sum = Operator::zero(sig);
  const int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Operator w = Operator::scalar(sig, q(coef(rng)) * ScalarExpr(coef(rng) == 0 ? 1 : coef(rng)));
    const int l = len(rng);
    for (int j = 0; j < l; ++j) w = w * gens[pick(rng)];
    sum += w;
  }
  return sum;
}

std::vector<BasisIndex> window_indices(const Signature& sig, int radius, int cap) {
  std::vector<BasisIndex> out{BasisIndex::origin(sig)};
  for (int t = 0; t < sig.laurent; ++t) {
    std::vector<BasisIndex> next;
    for (const auto& b : out)
      for (int z = -radius; z <= radius; ++z) {
        BasisIndex c = b;
        c.laurent[t] = z;
        next.push_back(c);
      }
    out = std::move(next);
  }
  for (int f = 0; f < sig.fock; ++f) {
    std::vector<BasisIndex> next;
    for (const auto& b : out)
      for (int p = 0; p <= cap; ++p) {
        BasisIndex c = b;
        c.fock[f] = p;
        next.push_back(c);
      }
    out = std::move(next);
  }
  return out;
}

ScalarExpr matrix_entry(const Operator& x, const BasisIndex& out, const BasisIndex& in) {
  const SparseVector v = x.apply(in);
  auto it = v.find(out);
  return it == v.end() ? ScalarExpr() : it->second;
}

}  // namespace

TEST(Operator, AlphaKillsVacuum) { EXPECT_TRUE(disc_alpha().apply(fock_index(0)).empty()); }

TEST(Operator, BetaIsDiagonal) {
  for (int p = 0; p < 6; ++p) EXPECT_EQ(disc_beta().apply(fock_index(p)), (SparseVector{{fock_index(p), q(p)}}));
}

TEST(Operator, LaurentShift) {
  const Signature sig{1, 0};
  const Operator s = Operator::laurent_shift(sig, 0, -1);
  EXPECT_EQ(s.apply(BasisIndex{{5}, {}}), (SparseVector{{BasisIndex{{4}, {}}, ScalarExpr(1)}}));
  EXPECT_EQ(s.adjoint(), Operator::laurent_shift(sig, 0, +1));
}

TEST(Operator, AlphaAction) {
  for (int p = 1; p < 6; ++p)
    EXPECT_EQ(disc_alpha().apply(fock_index(p)), (SparseVector{{fock_index(p - 1), ScalarExpr::root(p)}}));
  for (int p = 0; p < 6; ++p)
    EXPECT_EQ(disc_alpha_star().apply(fock_index(p)), (SparseVector{{fock_index(p + 1), ScalarExpr::root(p + 1)}}));
}

TEST(Operator, BetaAlphaCommutation) {
  const Operator a = disc_alpha();
  const Operator b = disc_beta();
  EXPECT_EQ((b * a).scaled(q(1)), a * b);
}

TEST(Operator, AlphaCommutator) {
  const Operator a = disc_alpha();
  const Operator as = disc_alpha_star();
  const Operator b = disc_beta();
  EXPECT_EQ(a * as - as * a, (b * b).scaled(ScalarExpr(1) - q(2)));
}

TEST(Operator, IdentityIsNeutral) {
  std::mt19937 rng(1);
  const Signature sig{1, 2};
  for (int i = 0; i < 20; ++i) {
    const Operator x = random_operator(rng, sig);
    EXPECT_EQ(Operator::identity(sig) * x, x);
    EXPECT_EQ(x * Operator::identity(sig), x);
  }
}

TEST(Operator, AdjointOfAlpha) {
  const Operator as = disc_alpha().adjoint();
  EXPECT_EQ(as, disc_alpha_star());
  ASSERT_EQ(as.terms().size(), 1u);
  const auto& [key, g] = *as.terms().begin();
  EXPECT_EQ(key.fock[0], (FockShift{1, 0}));
  EXPECT_EQ(g, FockCoeff::root(1, 0, 1, 1));
  EXPECT_EQ(as.dump(), "term: z=[] a=[1] c=[0] coeff=(1)*sqrt(1-q^(2N1+2))\n");
}

TEST(OperatorProperty, AdjointIsInvolution) {
  std::mt19937 rng(2);
  const Signature sig{1, 2};
  for (int i = 0; i < 200; ++i) {
    const Operator x = random_operator(rng, sig);
    EXPECT_EQ(x.adjoint().adjoint(), x);
  }
}

TEST(OperatorProperty, AdjointIsAntiMultiplicative) {
  std::mt19937 rng(3);
  const Signature sig{1, 2};
  for (int i = 0; i < 100; ++i) {
    const Operator x = random_operator(rng, sig);
    const Operator y = random_operator(rng, sig);
    EXPECT_EQ((x * y).adjoint(), y.adjoint() * x.adjoint());
  }
}

TEST(OperatorProperty, AdjointIsTransposeOnWindow) {
  std::mt19937 rng(4);
  const Signature sig{1, 1};
  const auto win = window_indices(sig, 2, 6);
  for (int i = 0; i < 30; ++i) {
    const Operator x = random_operator(rng, sig);
    const Operator xs = x.adjoint();
    for (const auto& in : win)
      for (const auto& [out, s] : x.apply(in)) EXPECT_EQ(matrix_entry(xs, in, out), s);
  }
}

TEST(OperatorProperty, ComposeIsAssociative) {
  std::mt19937 rng(5);
  const Signature sig{1, 2};
  for (int i = 0; i < 200; ++i) {
    const Operator x = random_operator(rng, sig);
    const Operator y = random_operator(rng, sig);
    const Operator z = random_operator(rng, sig);
    EXPECT_EQ((x * y) * z, x * (y * z));
  }
}

TEST(OperatorProperty, ComposeAgreesWithColumns) {
  std::mt19937 rng(6);
  const Signature sig{1, 2};
  const auto win = window_indices(sig, 1, 5);
  for (int i = 0; i < 60; ++i) {
    const Operator x = random_operator(rng, sig);
    const Operator y = random_operator(rng, sig);
    const Operator xy = x * y;
    for (const auto& in : win) EXPECT_EQ(xy.apply(in), x.apply(y.apply(basis(in))));
  }
}

TEST(OperatorProperty, TensorActsFactorwise) {
  std::mt19937 rng(8);
  const Signature sig{1, 1};
  for (int i = 0; i < 30; ++i) {
    const Operator x = random_operator(rng, sig);
    const Operator y = random_operator(rng, sig);
    const Operator xy = x.tensor(y);
    for (const auto& a : window_indices(sig, 1, 3)) {
      for (const auto& b : window_indices(sig, 1, 3)) {
        const BasisIndex in{{a.laurent[0], b.laurent[0]}, {a.fock[0], b.fock[0]}};
        SparseVector expect;
        for (const auto& [oa, sa] : x.apply(a))
          for (const auto& [ob, sb] : y.apply(b))
            expect[BasisIndex{{oa.laurent[0], ob.laurent[0]}, {oa.fock[0], ob.fock[0]}}] += sa * sb;
        std::erase_if(expect, [](const auto& kv) { return kv.second.is_zero(); });
        EXPECT_EQ(xy.apply(in), expect);
      }
    }
  }
}

TEST(Operator, SignatureMismatchThrows) {
  EXPECT_THROW(compose(disc_alpha(), Operator::identity({1, 0})), std::invalid_argument);
  EXPECT_THROW(disc_alpha().apply(BasisIndex{{0}, {0}}), std::invalid_argument);
}

TEST(Operator, DumpFormat) {
  const Operator b = disc_beta();
  EXPECT_EQ(b.dump_lines(), std::vector<std::string>{"term: z=[] a=[0] c=[0] coeff=(1)*q^(N1)"});
}
