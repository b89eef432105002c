#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/finite_quantale.hpp"
#include "mslab/law_report.hpp"
#include "mslab/order.hpp"
#include "mslab/relquant.hpp"
#include "mslab/subspace.hpp"
#include "mslab/topology.hpp"

namespace mslab {

// ---------------------------------------------------------------------------
// Ambient quantales

/// What an observer context needs from its ambient measurement space.
template <class A>
concept AmbientQuantale = requires(const A &a, const typename A::element_type &x,
                                   const std::vector<typename A::element_type> &xs) {
  { a.zero() } -> std::convertible_to<typename A::element_type>;
  { a.join(x, x) } -> std::convertible_to<typename A::element_type>;
  { a.product(x, x) } -> std::convertible_to<typename A::element_type>;
  { a.involution(x) } -> std::convertible_to<typename A::element_type>;
  { a.equal(x, x) } -> std::convertible_to<bool>;
  a.require_member(x);
  { a.make_index(xs).find(x) } -> std::convertible_to<std::optional<std::size_t>>;
};

/// Max M_n(C) at a fixed tolerance.
struct MaxAlgebra {
  using element_type = Subspace;

  std::size_t n = 2;
  Tolerance tol{};

  Subspace zero() const { return Subspace::zero(n); }
  Subspace join(const Subspace &p, const Subspace &q) const {
    return mslab::join(p, q, tol);
  }
  Subspace product(const Subspace &p, const Subspace &q) const {
    return mslab::product(p, q, tol);
  }
  Subspace involution(const Subspace &p) const {
    return mslab::involution(p, tol);
  }
  bool equal(const Subspace &p, const Subspace &q) const {
    return mslab::equal(p, q, tol);
  }
  void require_member(const Subspace &p) const {
    if (p.ambient() != n)
      throw Error("sample lives in M_" + std::to_string(p.ambient()) +
                  ", ambient is M_" + std::to_string(n));
  }
  SubspaceTable make_index(const std::vector<Subspace> &xs) const {
    SubspaceTable t(tol);
    for (const auto &x : xs)
      t.intern(x);
    return t;
  }
};

/// A finite quantale given by tables; elements are indices.
class TableAlgebra {
public:
  using element_type = std::size_t;

  explicit TableAlgebra(const FiniteQuantale &q)
      : q_(&q), lattice_(detail::lattice_of(q)) {}

  std::size_t zero() const { return lattice_.bottom(); }
  std::size_t join(std::size_t a, std::size_t b) const {
    return lattice_.join(a, b);
  }
  std::size_t product(std::size_t a, std::size_t b) const {
    return q_->mul(a, b);
  }
  std::size_t involution(std::size_t a) const { return q_->inv[a]; }
  bool equal(std::size_t a, std::size_t b) const { return a == b; }
  void require_member(std::size_t a) const {
    if (a >= q_->size())
      throw Error("sample " + std::to_string(a) + " is not an ambient element");
  }

  struct Index {
    std::vector<std::optional<std::size_t>> slot;
    std::optional<std::size_t> find(std::size_t a) const {
      return a < slot.size() ? slot[a] : std::nullopt;
    }
  };
  Index make_index(const std::vector<std::size_t> &xs) const {
    Index idx{std::vector<std::optional<std::size_t>>(q_->size())};
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!idx.slot[xs[i]])
        idx.slot[xs[i]] = i;
    return idx;
  }

  const FiniteQuantale &tables() const { return *q_; }

private:
  const FiniteQuantale *q_;
  FiniteLattice lattice_;
};

// ---------------------------------------------------------------------------
// Observer contexts

/// A carrier O inside the ambient quantale together with a retraction
/// r: M -> O. Carriers are listed extensionally; the retraction is computed.
template <AmbientQuantale A> struct ObserverContext {
  using element_type = typename A::element_type;

  A ambient;
  std::vector<element_type> carrier;
  std::vector<std::string> carrier_names;
  std::function<element_type(const element_type &)> retraction;

  std::string carrier_name(std::size_t i) const {
    return i < carrier_names.size() ? carrier_names[i] : std::to_string(i);
  }
};

/// Observer axioms over a finite sample of ambient elements:
///   r(m v n) = r(m) v r(n) for all sample pairs,
///   r(m*) = r(m)* and r(m) in O for every sample,
///   r(m w) = r(m) w for every sample m and carrier element w,
/// plus the carrier being a subquantale containing 0 and fixed by r.
/// Witnesses index the sample list, then the carrier list.
template <AmbientQuantale A>
LawReport check_observer_axioms(
    const ObserverContext<A> &ctx,
    const std::vector<typename A::element_type> &samples) {
  const A &a = ctx.ambient;
  for (const auto &s : samples)
    a.require_member(s);
  for (const auto &w : ctx.carrier)
    a.require_member(w);
  const auto index = a.make_index(ctx.carrier);
  const std::size_t c = ctx.carrier.size();
  LawReport r;

  index.find(a.zero()) ? r.pass("carrier_contains_zero")
                       : r.fail("carrier_contains_zero", {});

  auto closed_under = [&](const std::string &law, auto op) {
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (!index.find(op(ctx.carrier[i], ctx.carrier[j]))) {
          r.fail(law, {i, j});
          return;
        }
    r.pass(law);
  };
  closed_under("carrier_joins",
               [&](const auto &x, const auto &y) { return a.join(x, y); });
  closed_under("carrier_products",
               [&](const auto &x, const auto &y) { return a.product(x, y); });
  {
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < c && !bad; ++i)
      if (!index.find(a.involution(ctx.carrier[i])))
        bad = i;
    bad ? r.fail("carrier_involution", {*bad}) : r.pass("carrier_involution");
  }
  {
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < c && !bad; ++i)
      if (!a.equal(ctx.retraction(ctx.carrier[i]), ctx.carrier[i]))
        bad = i;
    bad ? r.fail("retraction_fixes_carrier", {*bad},
                 "r moves " + ctx.carrier_name(*bad))
        : r.pass("retraction_fixes_carrier");
  }

  std::vector<typename A::element_type> rs;
  rs.reserve(samples.size());
  for (const auto &s : samples)
    rs.push_back(ctx.retraction(s));
  const std::size_t k = samples.size();

  {
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      if (!index.find(rs[i]))
        bad = i;
    bad ? r.fail("retraction_into_carrier", {*bad})
        : r.pass("retraction_into_carrier");
  }
  {
    std::optional<std::vector<std::size_t>> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      for (std::size_t j = i; j < k && !bad; ++j)
        if (!a.equal(ctx.retraction(a.join(samples[i], samples[j])),
                     a.join(rs[i], rs[j])))
          bad = std::vector<std::size_t>{i, j};
    bad ? r.fail("preserves_joins", *bad) : r.pass("preserves_joins");
  }
  {
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      if (!a.equal(ctx.retraction(a.involution(samples[i])),
                   a.involution(rs[i])))
        bad = i;
    bad ? r.fail("preserves_involution", {*bad})
        : r.pass("preserves_involution");
  }
  {
    std::optional<std::vector<std::size_t>> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      for (std::size_t w = 0; w < c && !bad; ++w)
        if (!a.equal(ctx.retraction(a.product(samples[i], ctx.carrier[w])),
                     a.product(rs[i], ctx.carrier[w])))
          bad = std::vector<std::size_t>{i, w};
    bad ? r.fail("right_module", *bad) : r.pass("right_module");
  }
  return r;
}

/// Restriction of an observer's retraction to another subquantale.
template <AmbientQuantale A> struct ApproximationMap {
  std::vector<typename A::element_type> source;
  std::vector<typename A::element_type> image;
  std::vector<std::size_t> image_index; // index into the observer's carrier
  LawReport report;
};

/// af = r restricted to `source` (a subquantale of the ambient). Verifies
/// that af fixes source-and-carrier elements, preserves 0, binary joins and
/// the involution. Product preservation is recorded as an informational
/// verdict with a witness, never as a failure.
template <AmbientQuantale A>
ApproximationMap<A>
approximation_map(const ObserverContext<A> &ctx,
                  const std::vector<typename A::element_type> &source) {
  const A &a = ctx.ambient;
  ApproximationMap<A> out;
  out.source = source;
  const auto carrier_index = a.make_index(ctx.carrier);
  const auto source_index = a.make_index(source);
  LawReport &r = out.report;
  const std::size_t k = source.size();

  {
    std::optional<std::vector<std::size_t>> bad;
    for (std::size_t i = 0; i < k && !bad; ++i) {
      if (!source_index.find(a.involution(source[i])))
        bad = std::vector<std::size_t>{i};
      for (std::size_t j = 0; j < k && !bad; ++j)
        if (!source_index.find(a.join(source[i], source[j])) ||
            !source_index.find(a.product(source[i], source[j])))
          bad = std::vector<std::size_t>{i, j};
    }
    bad ? r.fail("source_subquantale", *bad) : r.pass("source_subquantale");
  }

  for (const auto &m : source) {
    out.image.push_back(ctx.retraction(m));
    auto idx = carrier_index.find(out.image.back());
    if (!idx)
      throw Error("retraction leaves the observer carrier");
    out.image_index.push_back(*idx);
  }

  {
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      if (carrier_index.find(source[i]) && !a.equal(out.image[i], source[i]))
        bad = i;
    bad ? r.fail("fixes_common_elements", {*bad})
        : r.pass("fixes_common_elements");
  }
  a.equal(ctx.retraction(a.zero()), a.zero())
      ? r.pass("preserves_zero")
      : r.fail("preserves_zero", {});
  {
    std::optional<std::vector<std::size_t>> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      for (std::size_t j = i; j < k && !bad; ++j)
        if (!a.equal(ctx.retraction(a.join(source[i], source[j])),
                     a.join(out.image[i], out.image[j])))
          bad = std::vector<std::size_t>{i, j};
    bad ? r.fail("preserves_joins", *bad) : r.pass("preserves_joins");
  }
  {
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      if (!a.equal(ctx.retraction(a.involution(source[i])),
                   a.involution(out.image[i])))
        bad = i;
    bad ? r.fail("preserves_involution", {*bad})
        : r.pass("preserves_involution");
  }
  {
    std::optional<std::vector<std::size_t>> bad;
    for (std::size_t i = 0; i < k && !bad; ++i)
      for (std::size_t j = 0; j < k && !bad; ++j)
        if (!a.equal(ctx.retraction(a.product(source[i], source[j])),
                     a.product(out.image[i], out.image[j])))
          bad = std::vector<std::size_t>{i, j};
    r.note("preserves_products", !bad, bad.value_or(std::vector<std::size_t>{}),
           bad ? "af(mn) differs from af(m)af(n)" : "");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditional expectations onto block algebras

/// Theta: M_n(C) -> B that keeps the entries (i, j) with i and j in the same
/// block and zeroes the rest. Singleton blocks give the diagonal restriction.
class ConditionalExpectation {
public:
  ConditionalExpectation(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
      : n_(n), blocks_(std::move(blocks)), block_of_(n, n) {
    if (n == 0)
      throw Error("ambient dimension must be positive");
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (std::size_t i : blocks_[b]) {
        if (i >= n || block_of_[i] != n)
          throw Error("blocks must partition {0..n-1}");
        block_of_[i] = b;
      }
    for (std::size_t i = 0; i < n; ++i)
      if (block_of_[i] == n)
        throw Error("blocks must partition {0..n-1}");
  }

  std::size_t ambient() const { return n_; }
  const std::vector<std::vector<std::size_t>> &blocks() const { return blocks_; }

  ComplexMatrix apply(const ComplexMatrix &a) const {
    if (std::size_t(a.rows()) != n_ || std::size_t(a.cols()) != n_)
      throw Error("conditional expectation applied to a matrix of wrong size");
    ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (block_of_[i] == block_of_[j])
          out(Eigen::Index(i), Eigen::Index(j)) = a(Eigen::Index(i), Eigen::Index(j));
    return out;
  }

  /// Span of Theta applied to a basis of p.
  Subspace apply(const Subspace &p, Tolerance tol = {}) const {
    SubspaceBuilder b(n_, tol);
    for (const auto &m : p.basis())
      b.offer(apply(m));
    return std::move(b).build();
  }

  /// The range B of Theta.
  Subspace block_algebra(Tolerance tol = {}) const {
    SubspaceBuilder b(n_, tol);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (block_of_[i] == block_of_[j])
          b.offer(matrix_unit(n_, i, j));
    return std::move(b).build();
  }

private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

inline ConditionalExpectation diag_expectation(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i)
    blocks.push_back({i});
  return ConditionalExpectation(n, std::move(blocks));
}

/// Observer context with retraction r(P) = Theta(P) B on a join-closed
/// carrier (typically the locale of ideals of B). Throws if the carrier is
/// not closed under binary joins.
inline ObserverContext<MaxAlgebra>
observer_from_expectation(const ConditionalExpectation &theta,
                          std::vector<Subspace> carrier,
                          std::vector<std::string> names = {},
                          Tolerance tol = {}) {
  MaxAlgebra a{theta.ambient(), tol};
  for (const auto &p : carrier)
    a.require_member(p);
  const SubspaceTable index = a.make_index(carrier);
  for (std::size_t i = 0; i < carrier.size(); ++i)
    for (std::size_t j = i + 1; j < carrier.size(); ++j)
      if (!index.find(a.join(carrier[i], carrier[j])))
        throw Error("observer carrier is not closed under joins (elements " +
                    std::to_string(i) + ", " + std::to_string(j) + ")");
  const Subspace b = theta.block_algebra(tol);
  ObserverContext<MaxAlgebra> ctx{a, std::move(carrier), std::move(names), {}};
  ctx.retraction = [theta, b, tol](const Subspace &p) {
    return product(theta.apply(p, tol), b, tol);
  };
  return ctx;
}

/// Canonical observer for the pair groupoid on n points: carrier iota(U) for
/// every relation U (index = row-major bitmask), retraction iota(supp(P)).
inline ObserverContext<MaxAlgebra> groupoid_observer(std::size_t n,
                                                     Tolerance tol = {}) {
  if (n == 0 || n * n > max_quantale_arrows)
    throw Error("groupoid observer supports 1 <= n <= 3");
  ObserverContext<MaxAlgebra> ctx{MaxAlgebra{n, tol}, {}, {}, {}};
  for (std::size_t u = 0; u < (std::size_t(1) << (n * n)); ++u) {
    const BoolMatrix rel = BoolMatrix::from_mask(n, u);
    ctx.carrier.push_back(iota(rel, tol));
    std::string name = "{";
    bool first = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rel(i, j)) {
          name += (first ? "" : ",") + std::string("(") + std::to_string(i + 1) +
                  "," + std::to_string(j + 1) + ")";
          first = false;
        }
    ctx.carrier_names.push_back(name + "}");
  }
  ctx.retraction = [tol](const Subspace &p) { return iota(supp(p, tol), tol); };
  return ctx;
}

// ---------------------------------------------------------------------------
// Atomic locales inside Max M_n(C)

/// Boolean locale generated by pairwise-orthogonal atoms, identified with
/// the discrete space on the atoms: element `mask` is the join of the atoms
/// whose bits are set.
class AtomicLocale {
public:
  AtomicLocale(std::vector<std::string> point_names, std::vector<Subspace> atoms,
               std::map<std::size_t, std::string> element_names = {},
               Tolerance tol = {})
      : points_(std::move(point_names)), atoms_(std::move(atoms)), tol_(tol) {
    if (atoms_.empty() || atoms_.size() != points_.size())
      throw Error("atomic locale needs one name per atom");
    const std::size_t a = atoms_.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << a); ++mask) {
      Subspace s = Subspace::zero(atoms_.front().ambient());
      std::string name;
      for (std::size_t i = 0; i < a; ++i)
        if (mask >> i & 1U) {
          s = join(s, atoms_[i], tol_);
          name += (name.empty() ? "" : " v ") + points_[i];
        }
      if (auto it = element_names.find(mask); it != element_names.end())
        name = it->second;
      names_.push_back(name.empty() ? "0" : name);
      elements_.push_back(std::move(s));
    }
    index_ = MaxAlgebra{atoms_.front().ambient(), tol_}.make_index(elements_);
    if (index_.size() != elements_.size())
      throw Error("atoms of a locale must be independent");
  }

  const std::vector<std::string> &point_names() const { return points_; }
  const std::vector<Subspace> &elements() const { return elements_; }
  const std::vector<std::string> &names() const { return names_; }
  const Subspace &element(std::size_t mask) const { return elements_.at(mask); }
  std::size_t atom_count() const { return atoms_.size(); }

  std::optional<std::size_t> locate(const Subspace &p) const {
    return index_.find(p);
  }

  FiniteSpace space() const { return discrete_space(points_); }

private:
  std::vector<std::string> points_;
  std::vector<Subspace> atoms_;
  std::vector<Subspace> elements_;
  std::vector<std::string> names_;
  SubspaceTable index_;
  Tolerance tol_;
};

/// The locale of ideals of the diagonal algebra D_n: atoms E_11, ..., E_nn.
inline AtomicLocale diagonal_locale(std::size_t n,
                                    std::vector<std::string> point_names,
                                    std::map<std::size_t, std::string> names = {},
                                    Tolerance tol = {}) {
  std::vector<Subspace> atoms;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix e = matrix_unit(n, i, i);
    atoms.push_back(canonicalize(n, std::span<const ComplexMatrix>(&e, 1), tol));
  }
  return AtomicLocale(std::move(point_names), std::move(atoms), std::move(names),
                      tol);
}

// ---------------------------------------------------------------------------
// Lower hyperspace and change of basis

/// Points are the closed sets of `base`; the topology is generated by
/// diamond(U) = {C : C meets U} for U open in base.
class LowerHyperspace {
public:
  static constexpr std::size_t max_base_points = 12;

  explicit LowerHyperspace(FiniteSpace base) : base_(std::move(base)) {
    if (base_.size() > max_base_points)
      throw Error("lower hyperspace limited to " +
                  std::to_string(max_base_points) + " base points");
    closed_ = closed_sets(base_);
    for (const auto &u : base_.opens)
      diamonds_.push_back(diamond(u));
  }

  const FiniteSpace &base() const { return base_; }
  const std::vector<PointSet> &closed() const { return closed_; }
  /// diamond of each base open, aligned with base().opens
  const std::vector<PointSet> &diamonds() const { return diamonds_; }

  PointSet diamond(const PointSet &u) const {
    PointSet d(closed_.size());
    for (std::size_t i = 0; i < closed_.size(); ++i)
      if (closed_[i].intersects(u))
        d.set(i);
    return d;
  }

  std::size_t index_of(const PointSet &closed_set) const {
    auto it = std::lower_bound(closed_.begin(), closed_.end(), closed_set);
    if (it == closed_.end() || *it != closed_set)
      throw Error("not a closed set of the base space");
    return std::size_t(it - closed_.begin());
  }

  /// Lattice generated by the diamonds under binary union and intersection
  /// (no empty intersection, so the whole hyperspace is absent unless some
  /// diamond already equals it).
  std::vector<PointSet> diamond_lattice() const {
    std::set<PointSet> acc(diamonds_.begin(), diamonds_.end());
    for (;;) {
      std::vector<PointSet> fresh;
      for (const auto &a : acc)
        for (const auto &b : acc) {
          if (!acc.count(a | b))
            fresh.push_back(a | b);
          if (!acc.count(a & b))
            fresh.push_back(a & b);
        }
      if (fresh.empty())
        return {acc.begin(), acc.end()};
      acc.insert(fresh.begin(), fresh.end());
    }
  }

  /// Full generated topology: unions of minimal neighbourhoods, where the
  /// neighbourhood of C is the intersection of the diamonds containing it.
  /// Throws if more than `cap` opens would be produced.
  FiniteSpace topology(std::size_t cap = std::size_t(1) << 16) const {
    const std::size_t k = closed_.size();
    std::vector<PointSet> nbhd(k, PointSet(k));
    for (auto &n : nbhd)
      n.set();
    for (const auto &d : diamonds_)
      for (std::size_t c = 0; c < k; ++c)
        if (d.test(c))
          nbhd[c] &= d;
    std::set<PointSet> acc{PointSet(k)};
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<PointSet> fresh;
      for (const auto &u : acc)
        fresh.push_back(u | nbhd[c]);
      acc.insert(fresh.begin(), fresh.end());
      if (acc.size() > cap)
        throw Error("hyperspace topology exceeds " + std::to_string(cap) +
                    " opens");
    }
    std::vector<std::string> labels;
    for (const auto &c : closed_) {
      std::string s = "{";
      bool first = true;
      for (std::size_t p = c.find_first(); p != PointSet::npos; p = c.find_next(p)) {
        s += (first ? "" : ",") + base_.points[p];
        first = false;
      }
      labels.push_back(s + "}");
    }
    return make_space(std::move(labels), {acc.begin(), acc.end()});
  }

private:
  FiniteSpace base_;
  std::vector<PointSet> closed_;
  std::vector<PointSet> diamonds_;
};

/// A union-preserving map f: opens(from) -> opens(to); image[i] is the image
/// of from.opens[i].
struct OpensMap {
  FiniteSpace from;
  FiniteSpace to;
  std::vector<PointSet> image;
};

struct BasisChangeMap {
  FiniteSpace source;              // X_p
  LowerHyperspace target;          // C(X_q)
  std::vector<PointSet> assignment; // beta(x) for each point x of X_p
  LawReport report;
};

namespace detail {
inline std::size_t open_index(const FiniteSpace &x, const PointSet &u) {
  auto it = std::lower_bound(x.opens.begin(), x.opens.end(), u);
  if (it == x.opens.end() || *it != u)
    throw Error("set is not open");
  return std::size_t(it - x.opens.begin());
}

inline bool is_discrete(const FiniteSpace &x) {
  return x.opens.size() == (std::size_t(1) << x.size());
}
} // namespace detail

/// beta: X_p -> C(X_q) determined by beta^-1(diamond U) = f(U), computed as
/// beta(x) = X_q minus the union of the opens U with x not in f(U). For a
/// discrete X_q the shortcut beta(x) = {y : x in f({y})} is cross-checked.
/// Throws if f does not preserve the empty set and binary unions.
inline BasisChangeMap beta(const OpensMap &f) {
  const FiniteSpace &xq = f.from;
  const FiniteSpace &xp = f.to;
  if (f.image.size() != xq.opens.size())
    throw Error("opens map must give an image for every open");
  for (const auto &im : f.image) {
    if (im.size() != xp.size())
      throw Error("opens map image has wrong carrier size");
    detail::open_index(xp, im);
  }
  const std::size_t empty = detail::open_index(xq, PointSet(xq.size()));
  if (f.image[empty].any())
    throw Error("opens map does not preserve the empty set");
  for (std::size_t i = 0; i < xq.opens.size(); ++i)
    for (std::size_t j = i + 1; j < xq.opens.size(); ++j) {
      const std::size_t u = detail::open_index(xq, xq.opens[i] | xq.opens[j]);
      if (f.image[u] != (f.image[i] | f.image[j]))
        throw Error("opens map does not preserve unions: opens " +
                    std::to_string(i) + " and " + std::to_string(j));
    }

  BasisChangeMap out{xp, LowerHyperspace(xq), {}, {}};
  LawReport &r = out.report;
  for (std::size_t x = 0; x < xp.size(); ++x) {
    PointSet excluded(xq.size());
    for (std::size_t i = 0; i < xq.opens.size(); ++i)
      if (!f.image[i].test(x))
        excluded |= xq.opens[i];
    out.assignment.push_back(~excluded);
  }

  {
    std::optional<std::size_t> bad;
    for (std::size_t x = 0; x < xp.size() && !bad; ++x) {
      try {
        out.target.index_of(out.assignment[x]);
      } catch (const Error &) {
        bad = x;
      }
    }
    bad ? r.fail("assignment_closed", {*bad}) : r.pass("assignment_closed");
  }

  if (detail::is_discrete(xq)) {
    std::optional<std::size_t> bad;
    for (std::size_t x = 0; x < xp.size() && !bad; ++x) {
      PointSet direct(xq.size());
      for (std::size_t y = 0; y < xq.size(); ++y)
        if (f.image[detail::open_index(xq, point_set(xq.size(), {y}))].test(x))
          direct.set(y);
      if (direct != out.assignment[x])
        bad = x;
    }
    bad ? r.fail("discrete_formula_agrees", {*bad})
        : r.pass("discrete_formula_agrees");
  }

  {
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < xq.opens.size() && !bad; ++i) {
      PointSet pre(xp.size());
      for (std::size_t x = 0; x < xp.size(); ++x)
        if (out.assignment[x].intersects(xq.opens[i]))
          pre.set(x);
      if (pre != f.image[i])
        bad = i;
    }
    bad ? r.fail("preimage_of_diamond", {*bad}) : r.pass("preimage_of_diamond");
  }

  {
    const FiniteSpace hyper = out.target.topology();
    const std::set<PointSet> xp_opens(xp.opens.begin(), xp.opens.end());
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < hyper.opens.size() && !bad; ++i) {
      PointSet pre(xp.size());
      for (std::size_t x = 0; x < xp.size(); ++x)
        if (hyper.opens[i].test(out.target.index_of(out.assignment[x])))
          pre.set(x);
      if (!xp_opens.count(pre))
        bad = i;
    }
    bad ? r.fail("continuous", {*bad}) : r.pass("continuous");
  }
  return out;
}

/// The opens map U -> r(join of U's atoms) read back in the target locale.
/// Throws if the retraction leaves the target locale.
inline OpensMap restrict_to_opens(const ObserverContext<MaxAlgebra> &ctx,
                                  const AtomicLocale &from,
                                  const AtomicLocale &to) {
  OpensMap f{from.space(), to.space(), {}};
  for (const auto &u : f.from.opens) {
    const std::size_t mask = u.to_ulong();
    const Subspace image = ctx.retraction(from.element(mask));
    auto at = to.locate(image);
    if (!at)
      throw Error("retraction of " + from.names()[mask] +
                  " is not in the target locale");
    f.image.emplace_back(to.atom_count(), *at);
  }
  return f;
}

} // namespace mslab
