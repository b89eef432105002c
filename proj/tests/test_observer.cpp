#include <vector>

#include <gtest/gtest.h>

#include "mslab/closure.hpp"
#include "mslab/observer.hpp"
#include "mslab/random.hpp"
#include "mslab/spin.hpp"
#include "oracles.hpp"

using namespace mslab;

namespace {

const SpinSetup &half() {
  static const SpinSetup s = spin_setup(Spin::half);
  return s;
}

const SpinSetup &one() {
  static const SpinSetup s = spin_setup(Spin::one);
  return s;
}

std::vector<std::size_t> points_of(const PointSet &s) {
  std::vector<std::size_t> out;
  for (std::size_t p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
    out.push_back(p);
  return out;
}

} // namespace

TEST(Expectation, DiagonalExamples) {
  const auto theta = diag_expectation(2);
  const ComplexMatrix sx = real_matrix({{0, 1}, {1, 0}});
  EXPECT_TRUE(theta.apply(sx).isZero());
  EXPECT_TRUE(theta.apply(identity_matrix(2)).isApprox(identity_matrix(2)));
  EXPECT_TRUE(theta.apply(real_matrix({{1, 1}, {1, 1}})).isApprox(identity_matrix(2)));
  EXPECT_TRUE(equal(theta.block_algebra(), half().fixtures["z"]));
  EXPECT_TRUE(equal(theta.apply(half().fixtures["x"]), half().fixtures["e"]));
  EXPECT_THROW(theta.apply(identity_matrix(3)), Error);
}

TEST(Expectation, BlocksMustPartition) {
  EXPECT_THROW(ConditionalExpectation(3, {{0, 1}}), Error);
  EXPECT_THROW(ConditionalExpectation(2, {{0, 1}, {1}}), Error);
  EXPECT_THROW(ConditionalExpectation(2, {{0, 2}}), Error);
  EXPECT_THROW(ConditionalExpectation(0, {}), Error);
  const ConditionalExpectation theta(3, {{0, 2}, {1}});
  EXPECT_EQ(theta.block_algebra().dim(), 5u);
  // Theta is idempotent and linear on random inputs.
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix a = random_matrix(rng, 3, false), b = random_matrix(rng, 3, false);
    ASSERT_TRUE(theta.apply(theta.apply(a)).isApprox(theta.apply(a)));
    ASSERT_TRUE(theta.apply(a + 2.0 * b).isApprox(theta.apply(a) + 2.0 * theta.apply(b)));
  }
}

TEST(SpinObserver, RzImages) {
  const auto &s = half();
  const auto &f = s.fixtures;
  const auto &r = s.rz.retraction;
  EXPECT_TRUE(equal(r(f["0"]), f["0"]));
  EXPECT_TRUE(equal(r(f["z_up"]), f["z_up"]));
  EXPECT_TRUE(equal(r(f["z_down"]), f["z_down"]));
  EXPECT_TRUE(equal(r(f["z"]), f["z"]));
  EXPECT_TRUE(equal(r(f["e"]), f["z"]));
  EXPECT_TRUE(equal(r(f["x"]), f["z"]));
  EXPECT_TRUE(equal(r(f["x_up"]), f["z"]));
  EXPECT_TRUE(equal(r(f["x_down"]), f["z"]));
  EXPECT_TRUE(equal(r(f["1"]), f["z"]));
  EXPECT_EQ(s.describe(r(f["x_up"])), "z");
  EXPECT_EQ(s.describe(f["x_up"]), "x_up");
}

TEST(SpinObserver, SpinOneImages) {
  const auto &s = one();
  const auto &f = s.fixtures;
  const auto &r = s.rz.retraction;
  for (const char *atom : {"x_minus", "x_plus"})
    EXPECT_TRUE(equal(r(f[atom]), f["z"])) << atom;
  // x_zero has zero middle diagonal entry: its image misses z_zero.
  EXPECT_EQ(s.describe(r(f["x_zero"])), "z_minus v z_plus");
  EXPECT_TRUE(equal(r(f["z_zero"]), f["z_zero"]));
}

TEST(SpinObserver, AxiomsOnClosure) {
  const auto &s = half();
  const auto c = bounded_closure(s.fixtures.elements(), 3, s.fixtures.names);
  ASSERT_TRUE(c.terminated());
  const LawReport r = check_observer_axioms(s.rz, c.elements);
  EXPECT_TRUE(r.passed()) << r;
  for (const char *law : {"carrier_contains_zero", "carrier_joins", "carrier_products",
                          "carrier_involution", "retraction_fixes_carrier",
                          "retraction_into_carrier", "preserves_joins",
                          "preserves_involution", "right_module"})
    EXPECT_TRUE(r.holds(law)) << law;
}

TEST(SpinObserver, CorruptedRetractionFails) {
  auto ctx = half().rz;
  const auto theta = diag_expectation(2);
  ctx.retraction = [theta](const Subspace &p) { return theta.apply(p); };
  const LawReport r = check_observer_axioms(ctx, half().fixtures.elements());
  EXPECT_FALSE(r.holds("retraction_into_carrier"));
  auto id = half().rz;
  id.retraction = [](const Subspace &p) { return p; };
  EXPECT_FALSE(check_observer_axioms(id, half().fixtures.elements()).passed());
}

TEST(SpinObserver, CarrierMustBeJoinClosed) {
  const auto &f = half().fixtures;
  EXPECT_THROW(observer_from_expectation(diag_expectation(2), {f["0"], f["z_up"], f["z_down"]}),
               Error);
}

TEST(Approximation, XLocaleCollapsesToZ) {
  const auto &s = half();
  const auto af = approximation_map(s.rz, s.ox.elements());
  EXPECT_TRUE(af.report.passed()) << af.report;
  ASSERT_EQ(af.image.size(), 4u);
  EXPECT_TRUE(af.image[0].is_zero());
  for (std::size_t i = 1; i < 4; ++i)
    EXPECT_TRUE(equal(af.image[i], s.fixtures["z"]));
  // x_down x_up = 0 but z z = z: products are not preserved.
  const auto *p = af.report.find("preserves_products");
  ASSERT_TRUE(p);
  EXPECT_FALSE(p->passed);
}

TEST(Approximation, ZLocaleIsFixed) {
  const auto &s = one();
  const auto af = approximation_map(s.rz, s.oz.elements());
  EXPECT_TRUE(af.report.passed());
  for (std::size_t i = 0; i < af.image.size(); ++i)
    EXPECT_TRUE(equal(af.image[i], s.oz.element(i)));
  EXPECT_TRUE(af.report.holds("preserves_products"));
}

TEST(Locale, AtomicLocaleShape) {
  const auto &s = one();
  EXPECT_EQ(s.oz.elements().size(), 8u);
  EXPECT_EQ(s.oz.names()[5], "z_minus v z_plus");
  EXPECT_EQ(s.oz.space().opens.size(), 8u);
  EXPECT_EQ(s.oz.locate(s.fixtures["z"]), std::optional<std::size_t>(7));
  EXPECT_FALSE(s.oz.locate(s.fixtures["x_zero"]));
  const auto &f = half().fixtures;
  EXPECT_THROW(AtomicLocale({"a", "b"}, {f["z_up"], f["z_up"]}), Error);
  EXPECT_THROW(AtomicLocale({"a"}, {f["z_up"], f["z_down"]}), Error);
  const AtomicLocale d = diagonal_locale(2, {"1", "2"});
  EXPECT_TRUE(equal(d.element(3), f["z"]));
}

TEST(Hyperspace, DiscreteTwoPoint) {
  const LowerHyperspace h(discrete_space({"a", "b"}));
  EXPECT_EQ(h.closed().size(), 4u);
  EXPECT_EQ(h.diamond_lattice().size(), 5u);
  EXPECT_EQ(h.topology().opens.size(), 6u);
  // diamond({a}) holds the closed sets meeting a.
  const PointSet d = h.diamond(point_set(2, {0}));
  EXPECT_EQ(d.count(), 2u);
  EXPECT_TRUE(d.test(h.index_of(point_set(2, {0}))));
  EXPECT_TRUE(d.test(h.index_of(~PointSet(2))));
  EXPECT_THROW(h.index_of(PointSet(3)), Error);
}

TEST(Hyperspace, SmallBases) {
  const LowerHyperspace one_point(discrete_space({"p"}));
  EXPECT_EQ(one_point.closed().size(), 2u);
  const LowerHyperspace s(make_space({"a", "b"}, {PointSet(2), point_set(2, {1}), ~PointSet(2)}));
  EXPECT_EQ(s.closed().size(), 3u);
  EXPECT_TRUE(check_sober(s.topology()).passed());
  std::vector<std::string> many(13, "p");
  for (std::size_t i = 0; i < many.size(); ++i)
    many[i] += std::to_string(i);
  EXPECT_THROW(LowerHyperspace(make_space(many, {PointSet(13), ~PointSet(13)})), Error);
}

TEST(Beta, IdentityIsSingletons) {
  const auto b = beta(identity_opens_map(half().oz));
  EXPECT_TRUE(b.report.passed()) << b.report;
  EXPECT_TRUE(b.report.holds("discrete_formula_agrees"));
  ASSERT_EQ(b.assignment.size(), 2u);
  EXPECT_EQ(points_of(b.assignment[0]), std::vector<std::size_t>{0});
  EXPECT_EQ(points_of(b.assignment[1]), std::vector<std::size_t>{1});
}

TEST(Beta, XToZSendsEveryPointToEverything) {
  const auto &s = half();
  const OpensMap f = restrict_to_opens(s.rz, s.ox, s.oz);
  const auto b = beta(f);
  EXPECT_TRUE(b.report.passed()) << b.report;
  for (const auto &a : b.assignment)
    EXPECT_EQ(a, ~PointSet(2));
}

TEST(Beta, SpinOneMiddlePoint) {
  const auto &s = one();
  const auto b = beta(restrict_to_opens(s.rz, s.ox, s.oz));
  EXPECT_TRUE(b.report.passed()) << b.report;
  // f({x_zero}) = z_minus v z_plus and the outer x points map onto z, so
  // only z_zero loses a preimage point.
  ASSERT_EQ(b.assignment.size(), 3u);
  EXPECT_EQ(points_of(b.assignment[0]), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(points_of(b.assignment[1]), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(points_of(b.assignment[2]), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Beta, RejectsBadOpensMaps) {
  const FiniteSpace d = discrete_space({"a", "b"});
  OpensMap f{d, d, d.opens};
  EXPECT_NO_THROW(beta(f));
  OpensMap bad = f;
  bad.image[detail::open_index(d, point_set(2, {0}))] = ~PointSet(2);
  bad.image[detail::open_index(d, point_set(2, {1}))] = ~PointSet(2);
  bad.image[detail::open_index(d, ~PointSet(2))] = point_set(2, {0});
  EXPECT_THROW(beta(bad), Error);
  OpensMap nonempty = f;
  nonempty.image[detail::open_index(d, PointSet(2))] = point_set(2, {0});
  EXPECT_THROW(beta(nonempty), Error);
  OpensMap short_map = f;
  short_map.image.pop_back();
  EXPECT_THROW(beta(short_map), Error);
}
