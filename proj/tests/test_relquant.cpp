#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "mslab/observer.hpp"
#include "mslab/random.hpp"
#include "mslab/relquant.hpp"
#include "mslab/topology.hpp"
#include "oracles.hpp"

using namespace mslab;

namespace {

// (s;t)(i,k) iff s(i,j) and t(j,k) for some j.
BoolMatrix compose_oracle(const BoolMatrix &s, const BoolMatrix &t) {
  const std::size_t n = s.size();
  BoolMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        if (s(i, j) && t(j, k))
          out.set(i, k);
  return out;
}

// Support read off the span by testing each coordinate functional against
// every basis matrix with an absolute threshold.
BoolMatrix support_oracle(const Subspace &p) {
  const std::size_t n = p.ambient();
  BoolMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto &b : p.basis())
        if (std::abs(b(Eigen::Index(i), Eigen::Index(j))) > 1e-7)
          out.set(i, j);
  return out;
}

} // namespace

TEST(BoolMatrix, Operations) {
  const auto a = BoolMatrix::from_pairs(2, {{0, 1}});
  const auto b = BoolMatrix::from_pairs(2, {{1, 0}});
  EXPECT_EQ(bool_product(a, b), BoolMatrix::from_pairs(2, {{0, 0}}));
  EXPECT_EQ(bool_product(b, a), BoolMatrix::from_pairs(2, {{1, 1}}));
  EXPECT_EQ(bool_involution(a), b);
  EXPECT_EQ(bool_join(a, b), BoolMatrix::from_pairs(2, {{0, 1}, {1, 0}}));
  EXPECT_TRUE(bool_leq(a, bool_join(a, b)));
  EXPECT_FALSE(bool_leq(a, b));
  EXPECT_EQ(BoolMatrix::from_mask(2, a.mask()), a);
  EXPECT_EQ(BoolMatrix::full(2).mask(), 15u);
  EXPECT_THROW(bool_product(a, BoolMatrix(3)), Error);
}

TEST(BoolMatrix, ProductMatchesComposition) {
  for (std::size_t u = 0; u < 512; u += 7)
    for (std::size_t v = 0; v < 512; v += 11) {
      const auto s = BoolMatrix::from_mask(3, u), t = BoolMatrix::from_mask(3, v);
      ASSERT_EQ(bool_product(s, t), compose_oracle(s, t));
    }
}

TEST(Groupoid, PairGroupoidLaws) {
  const FiniteGroupoid g = pair_groupoid(2);
  EXPECT_EQ(g.arrows.size(), 4u);
  EXPECT_TRUE(check_groupoid(g).passed());
  EXPECT_TRUE(check_groupoid(pair_groupoid(3)).passed());
  EXPECT_TRUE(check_groupoid(space_groupoid(3)).passed());
  EXPECT_THROW(pair_groupoid(0), Error);
}

TEST(Groupoid, TamperedGroupoidsFail) {
  FiniteGroupoid g = pair_groupoid(2);
  g.inverse[1] = 1;
  EXPECT_FALSE(check_groupoid(g).holds("inverses"));
  g = pair_groupoid(2);
  // (1,2) then (2,1) is the identity at 2, not at 1.
  g.compose[2][1] = 0;
  EXPECT_FALSE(check_groupoid(g).passed());
  g = pair_groupoid(2);
  g.compose[0][3] = 0;
  EXPECT_FALSE(check_groupoid(g).holds("composable_domain"));
}

TEST(Groupoid, QuantaleOfPairGroupoidIsRelations) {
  for (std::size_t n : {1, 2}) {
    const FiniteQuantale o = groupoid_quantale(pair_groupoid(n));
    const FiniteQuantale m = relation_quantale(n);
    ASSERT_TRUE(check_axioms(o).passed());
    const auto h = pair_groupoid_to_relations(n);
    EXPECT_EQ(std::set<std::size_t>(h.begin(), h.end()).size(), h.size());
    const LawReport r = check_homomorphism(h, o, m);
    EXPECT_TRUE(r.passed()) << r;
  }
}

TEST(Groupoid, QuantaleOfSpaceIsPowerSetFrame) {
  const FiniteQuantale o = groupoid_quantale(space_groupoid(3));
  EXPECT_EQ(o.size(), 8u);
  EXPECT_TRUE(check_local(o).passed());
  EXPECT_TRUE(check_axioms(o).passed());
}

TEST(Groupoid, ArrowCap) {
  EXPECT_NO_THROW(groupoid_quantale(pair_groupoid(3)));
  EXPECT_THROW(groupoid_quantale(space_groupoid(max_quantale_arrows + 1)), Error);
  EXPECT_THROW(relation_quantale(4), Error);
}

TEST(Support, SectionLaw) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t u = 0; u < (std::size_t(1) << (n * n)); ++u) {
      const auto rel = BoolMatrix::from_mask(n, u);
      const Subspace i = iota(rel);
      ASSERT_EQ(supp(i), rel);
      ASSERT_EQ(i.dim(), std::size_t(__builtin_popcountll(u)));
    }
}

TEST(Support, Examples) {
  const Subspace p = span_of({matrix_unit(2, 0, 0) + matrix_unit(2, 0, 1)});
  EXPECT_EQ(supp(p), BoolMatrix::from_pairs(2, {{0, 0}, {0, 1}}));
  EXPECT_TRUE(contains(iota(supp(p)), p));
  EXPECT_FALSE(equal(iota(supp(p)), p));
  EXPECT_EQ(supp(Subspace::zero(2)), BoolMatrix(2));
  EXPECT_EQ(supp(full_space(2)), BoolMatrix::full(2));
}

TEST(Support, HomomorphismInvariants) {
  Rng rng(99);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + t % 3;
    const Subspace p = random_subspace(rng, n, 3, true), q = random_subspace(rng, n, 3, true);
    const BoolMatrix sp = supp(p), sq = supp(q);
    ASSERT_EQ(sp, support_oracle(p));
    ASSERT_EQ(supp(join(p, q)), bool_join(sp, sq));
    ASSERT_EQ(supp(involution(p)), bool_involution(sp));
    ASSERT_TRUE(bool_leq(supp(product(p, q)), bool_product(sp, sq)));
    ASSERT_TRUE(contains(iota(sp), p));
    ASSERT_TRUE(equal(product(iota(sp), iota(sq)), iota(bool_product(sp, sq))));
  }
}

TEST(GroupoidObserver, RetractionExamples) {
  const auto ctx = groupoid_observer(2);
  EXPECT_EQ(ctx.carrier.size(), 16u);
  const Subspace p = span_of({matrix_unit(2, 0, 0) + matrix_unit(2, 0, 1)});
  const Subspace w = iota(BoolMatrix::from_pairs(2, {{0, 0}, {1, 0}}));
  const Subspace pw = product(p, w);
  EXPECT_TRUE(equal(pw, span_of({matrix_unit(2, 0, 0)})));
  EXPECT_TRUE(equal(ctx.retraction(pw), iota(BoolMatrix::from_pairs(2, {{0, 0}}))));
  EXPECT_TRUE(equal(ctx.retraction(p), iota(BoolMatrix::from_pairs(2, {{0, 0}, {0, 1}}))));
  EXPECT_TRUE(equal(product(ctx.retraction(p), w), ctx.retraction(pw)));
  EXPECT_EQ(ctx.carrier_names[0], "{}");
  EXPECT_EQ(ctx.carrier_names[15], "{(1,1),(1,2),(2,1),(2,2)}");
  EXPECT_THROW(groupoid_observer(4), Error);
}

TEST(GroupoidObserver, AxiomsOnRandomSamples) {
  Rng rng(17);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto ctx = groupoid_observer(n);
    std::vector<Subspace> samples;
    for (int t = 0; t < 40; ++t)
      samples.push_back(random_subspace(rng, n, 3, true));
    const LawReport r = check_observer_axioms(ctx, samples);
    EXPECT_TRUE(r.passed()) << "n=" << n << "\n" << r;
  }
}

TEST(Groupoid, PairQuantaleWithAlexandrovTopologyIsClassical) {
  FiniteQuantale o = groupoid_quantale(pair_groupoid(2));
  o.opens = upper_sets(o.leq);
  EXPECT_TRUE(check_axioms(o).passed());
  EXPECT_TRUE(check_continuity(o).passed());
  const LawReport r = check_classical(o);
  EXPECT_TRUE(r.passed()) << r;
  EXPECT_FALSE(check_local(o).passed());
}
