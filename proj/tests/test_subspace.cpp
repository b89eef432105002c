#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "mslab/maxa.hpp"
#include "mslab/random.hpp"
#include "mslab/subspace.hpp"
#include "oracles.hpp"

using namespace mslab;

namespace {

constexpr std::size_t property_samples = 500;

ComplexMatrix diag2(double a, double b) { return real_matrix({{a, 0}, {0, b}}); }

Subspace span1(const ComplexMatrix &m) { return span_of({m}); }

} // namespace

TEST(Canonicalize, ZeroMatrixSpansZero) {
  EXPECT_EQ(span1(ComplexMatrix::Zero(2, 2)).dim(), 0u);
}

TEST(Canonicalize, DependentGeneratorsCollapse) {
  const Subspace s = span_of({identity_matrix(2), 3.0 * identity_matrix(2)});
  EXPECT_EQ(s.dim(), 1u);
  EXPECT_TRUE(oracle::in_span(identity_matrix(2), s.basis(), 2));
}

TEST(Canonicalize, DiagonalUnitsGiveDiagonalAlgebra) {
  const Subspace d = span_of({diag2(1, 0), diag2(0, 1)});
  EXPECT_EQ(d.dim(), 2u);
  EXPECT_TRUE(equal(d, spin_half_fixtures()["z"]));
}

TEST(Canonicalize, BasisIsOrthonormal) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Subspace s = random_subspace(rng, 3, 5);
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t j = 0; j < s.dim(); ++j) {
        const Complex ip = trace_inner(s.basis()[i], s.basis()[j]);
        EXPECT_NEAR(std::abs(ip - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-9);
      }
  }
}

TEST(Canonicalize, IdempotentAndDeterministic) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<ComplexMatrix> gens;
    for (int k = 0; k < 3; ++k)
      gens.push_back(random_matrix(rng, 2, false));
    const Subspace a = canonicalize(2, gens), b = canonicalize(2, gens);
    ASSERT_EQ(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
      EXPECT_TRUE(a.basis()[i] == b.basis()[i]);
    const Subspace again = canonicalize(2, a.basis());
    EXPECT_TRUE(equal(a, again));
    EXPECT_TRUE(oracle::same(a, again));
  }
}

TEST(Canonicalize, Errors) {
  std::vector<ComplexMatrix> mixed{identity_matrix(2), identity_matrix(3)};
  EXPECT_THROW(canonicalize(std::span<const ComplexMatrix>(mixed)), Error);
  EXPECT_THROW(canonicalize(std::span<const ComplexMatrix>{}), Error);
  EXPECT_THROW(Subspace::zero(0), Error);
  ComplexMatrix bad = identity_matrix(2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(span1(bad), Error);
  EXPECT_THROW(Tolerance(0.0), Error);
  EXPECT_THROW(Tolerance(-1e-9), Error);
}

TEST(Join, SpinAtomsJoinToZ) {
  const auto f = spin_half_fixtures();
  const Subspace j = join(f["z_up"], f["z_down"]);
  EXPECT_EQ(j.dim(), 2u);
  EXPECT_TRUE(equal(j, f["z"]));
}

TEST(Join, ZeroIsUnitAndMatrixUnitsAdd) {
  const auto f = spin_half_fixtures();
  EXPECT_TRUE(equal(join(f["x"], f["0"]), f["x"]));
  const Subspace j = join(span1(matrix_unit(2, 0, 0)), span1(matrix_unit(2, 0, 1)));
  EXPECT_EQ(j.dim(), 2u);
  EXPECT_TRUE(oracle::in_span(matrix_unit(2, 0, 1), j.basis(), 2));
}

TEST(Join, AmbientMismatchThrows) {
  EXPECT_THROW(join(full_space(2), full_space(3)), Error);
  EXPECT_THROW(meet(full_space(2), full_space(3)), Error);
  EXPECT_THROW(product(full_space(2), full_space(3)), Error);
  EXPECT_THROW(contains(full_space(2), full_space(3)), Error);
}

TEST(Meet, XMeetZIsE) {
  const auto f = spin_half_fixtures();
  const Subspace m = meet(f["x"], f["z"]);
  EXPECT_EQ(m.dim(), 1u);
  EXPECT_TRUE(equal(m, f["e"]));
}

TEST(Meet, AtomsMeetAtZeroAndMeetIsIdempotent) {
  const auto f = spin_half_fixtures();
  EXPECT_TRUE(meet(f["z_up"], f["z_down"]).is_zero());
  for (const auto &p : f.elements())
    EXPECT_TRUE(equal(meet(p, p), p));
}

TEST(Product, Examples) {
  const auto f = spin_half_fixtures();
  EXPECT_TRUE(product(f["z_up"], f["z_down"]).is_zero());
  EXPECT_TRUE(product(f["x_up"], f["x_down"]).is_zero());
  for (const auto &p : f.elements()) {
    EXPECT_TRUE(equal(product(f["e"], p), p));
    EXPECT_TRUE(equal(product(p, f["e"]), p));
  }
}

TEST(Involution, Examples) {
  const auto f = spin_half_fixtures();
  EXPECT_TRUE(equal(involution(span1(matrix_unit(2, 0, 1))), span1(matrix_unit(2, 1, 0))));
  EXPECT_TRUE(equal(involution(f["z"]), f["z"]));
  EXPECT_TRUE(equal(involution(f["x_up"]), f["x_up"]));
}

TEST(Contains, FragmentOrder) {
  const auto f = spin_half_fixtures();
  EXPECT_TRUE(contains(f["z"], f["z_up"]));
  EXPECT_FALSE(contains(f["z_up"], f["z"]));
  EXPECT_TRUE(equal(f["x"], canonicalize(2, f["x"].basis())));
}

TEST(Distance, Examples) {
  const auto f = spin_half_fixtures();
  EXPECT_NEAR(distance(identity_matrix(2), f["e"]), 0.0, 1e-12);
  EXPECT_NEAR(distance(matrix_unit(2, 0, 1), f["z"]), 1.0, 1e-12);
  EXPECT_NEAR(distance(ComplexMatrix::Zero(2, 2), f["x"]), 0.0, 1e-12);
  // Projection residual of diag(1,0) onto <I> is diag(1/2,-1/2).
  EXPECT_NEAR(distance(diag2(1, 0), f["e"]), std::sqrt(0.5), 1e-12);
  EXPECT_THROW(distance(identity_matrix(3), f["e"]), Error);
}

TEST(GeneratedAlgebra, SpinOneGeneratorsSpanThreeDimensions) {
  const ComplexMatrix sx = real_matrix({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
  const Subspace a = generated_algebra(3, std::vector<ComplexMatrix>{sx});
  EXPECT_EQ(a.dim(), 3u);
  EXPECT_TRUE(oracle::in_span(sx * sx, a.basis(), 3));
}

// ---------------------------------------------------------------------------
// Properties on seeded random subspaces of M_1..M_3.

class SubspaceProperties : public ::testing::Test {
protected:
  Rng rng{0x5eed};
  std::size_t pick_n() { return std::uniform_int_distribution<std::size_t>(1, 3)(rng); }
  Subspace any(std::size_t n) { return random_subspace(rng, n, n * n, true); }
};

TEST_F(SubspaceProperties, OperationsMatchOracleDimensions) {
  for (std::size_t t = 0; t < property_samples; ++t) {
    const std::size_t n = pick_n();
    const Subspace p = any(n), q = any(n);
    ASSERT_EQ(join(p, q).dim(), oracle::join_dim(p, q));
    ASSERT_EQ(meet(p, q).dim(), oracle::meet_dim(p, q));
    ASSERT_EQ(product(p, q).dim(), oracle::rank(oracle::products(p, q), n));
    const Subspace m = meet(p, q), pq = product(p, q);
    for (const auto &b : m.basis()) {
      ASSERT_TRUE(oracle::in_span(b, p.basis(), n));
      ASSERT_TRUE(oracle::in_span(b, q.basis(), n));
    }
    for (const auto &b : pq.basis())
      ASSERT_TRUE(oracle::in_span(b, oracle::products(p, q), n));
  }
}

TEST_F(SubspaceProperties, LatticeLaws) {
  for (std::size_t t = 0; t < property_samples; ++t) {
    const std::size_t n = pick_n();
    const Subspace p = any(n), q = any(n), r = any(n);
    ASSERT_TRUE(equal(join(p, q), join(q, p)));
    ASSERT_TRUE(equal(meet(p, q), meet(q, p)));
    ASSERT_TRUE(equal(join(join(p, q), r), join(p, join(q, r))));
    ASSERT_TRUE(equal(meet(meet(p, q), r), meet(p, meet(q, r))));
    ASSERT_TRUE(equal(join(p, meet(p, q)), p));
    ASSERT_TRUE(equal(meet(p, join(p, q)), p));
    ASSERT_EQ(join(p, q).dim() + meet(p, q).dim(), p.dim() + q.dim());
  }
}

TEST_F(SubspaceProperties, ContainmentIsPartialOrder) {
  for (std::size_t t = 0; t < property_samples; ++t) {
    const std::size_t n = pick_n();
    const Subspace p = any(n), q = any(n), r = any(n);
    ASSERT_TRUE(contains(p, p));
    ASSERT_EQ(contains(p, q), oracle::subset(q, p));
    if (contains(p, q) && contains(q, p)) {
      ASSERT_TRUE(equal(p, q));
    }
    const Subspace pq = join(p, q), pqr = join(pq, r);
    ASSERT_TRUE(contains(pq, p));
    ASSERT_TRUE(contains(pqr, pq));
    ASSERT_TRUE(contains(pqr, p));
  }
}

TEST_F(SubspaceProperties, QuantaleLaws) {
  for (std::size_t t = 0; t < property_samples; ++t) {
    const std::size_t n = pick_n();
    const Subspace p = any(n), q = any(n), r = any(n);
    ASSERT_TRUE(equal(product(product(p, q), r), product(p, product(q, r))));
    ASSERT_TRUE(equal(product(join(p, q), r), join(product(p, r), product(q, r))));
    ASSERT_TRUE(equal(product(r, join(p, q)), join(product(r, p), product(r, q))));
    ASSERT_TRUE(product(Subspace::zero(n), p).is_zero());
    ASSERT_TRUE(product(p, Subspace::zero(n)).is_zero());
    ASSERT_TRUE(equal(involution(involution(p)), p));
    ASSERT_TRUE(equal(involution(product(p, q)), product(involution(q), involution(p))));
    ASSERT_EQ(contains(p, q), contains(involution(p), involution(q)));
  }
}

TEST_F(SubspaceProperties, PartialIsometrySpansAreStablyGelfand) {
  for (std::size_t t = 0; t < property_samples; ++t) {
    const std::size_t n = 1 + t % 3;
    const ComplexMatrix v = random_partial_isometry(rng, n);
    const Subspace p = span1(v);
    ASSERT_TRUE(equal(product(product(p, involution(p)), p), p));
  }
}
