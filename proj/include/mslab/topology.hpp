#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/finite_quantale.hpp"
#include "mslab/law_report.hpp"
#include "mslab/order.hpp"

namespace mslab {

/// A finite topological space: labelled points and the list of open sets.
struct FiniteSpace {
  std::vector<std::string> points;
  std::vector<PointSet> opens;

  std::size_t size() const { return points.size(); }
};

/// Sorts and dedupes the open sets, then checks the topology axioms.
/// Throws Error when they fail.
inline FiniteSpace make_space(std::vector<std::string> points,
                              std::vector<PointSet> opens) {
  const std::size_t k = points.size();
  for (const auto &o : opens)
    if (o.size() != k)
      throw Error("open set has wrong number of points");
  std::set<PointSet> uniq(opens.begin(), opens.end());
  FiniteSpace x{std::move(points), {uniq.begin(), uniq.end()}};
  LawReport r = detail::check_topology(x.opens, k);
  if (!r.passed()) {
    for (const auto &v : r.verdicts())
      if (!v.passed)
        throw Error("not a topology: " + v.law);
  }
  return x;
}

inline FiniteSpace discrete_space(std::vector<std::string> points) {
  const std::size_t k = points.size();
  std::vector<PointSet> opens;
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask)
    opens.emplace_back(k, mask);
  return make_space(std::move(points), std::move(opens));
}

inline PointSet complement(const PointSet &s) { return ~s; }

inline std::vector<PointSet> closed_sets(const FiniteSpace &x) {
  std::vector<PointSet> c;
  c.reserve(x.opens.size());
  for (const auto &o : x.opens)
    c.push_back(~o);
  std::sort(c.begin(), c.end());
  return c;
}

/// Topological closure of a set: complement of the largest open missing it.
inline PointSet closure(const FiniteSpace &x, const PointSet &s) {
  PointSet interior_of_complement(x.size());
  for (const auto &o : x.opens)
    if (!o.intersects(s))
      interior_of_complement |= o;
  return ~interior_of_complement;
}

struct SpecializationOrder {
  Relation leq;          // m <= n iff m lies in the closure of {n}
  bool t0 = false;       // antisymmetric, i.e. a partial order
  bool has_bottom = false;
  bool has_binary_joins = false;
};

inline SpecializationOrder specialization_order(const FiniteSpace &x) {
  const std::size_t k = x.size();
  SpecializationOrder s{Relation(k)};
  for (std::size_t n = 0; n < k; ++n) {
    const PointSet cl = closure(x, point_set(k, {n}));
    for (std::size_t m = 0; m < k; ++m)
      s.leq.set(m, n, cl.test(m));
  }
  s.t0 = check_partial_order(s.leq).passed();
  if (s.t0 && k > 0) {
    LawReport r = check_complete_lattice(s.leq);
    s.has_bottom = r.holds("bottom");
    s.has_binary_joins = r.holds("binary_joins");
  }
  return s;
}

/// Sobriety by brute force over closed sets: each nonempty irreducible
/// closed set (not the union of two proper closed subsets) must be the
/// closure of exactly one point. T0 is reported as its own verdict.
/// Witness for "sober" is the list of points of the offending closed set.
inline LawReport check_sober(const FiniteSpace &x) {
  const std::size_t k = x.size();
  LawReport r;
  const auto spec = specialization_order(x);
  spec.t0 ? r.pass("T0") : r.fail("T0", {}, "two points share all opens");

  const auto closed = closed_sets(x);
  std::vector<PointSet> point_closures;
  for (std::size_t p = 0; p < k; ++p)
    point_closures.push_back(closure(x, point_set(k, {p})));

  for (const auto &c : closed) {
    if (c.none())
      continue;
    bool reducible = false;
    for (std::size_t i = 0; i < closed.size() && !reducible; ++i) {
      const auto &a = closed[i];
      if (a == c || !a.is_subset_of(c))
        continue;
      for (std::size_t j = i; j < closed.size() && !reducible; ++j) {
        const auto &b = closed[j];
        reducible = b != c && b.is_subset_of(c) && (a | b) == c;
      }
    }
    if (reducible)
      continue;
    std::size_t generic = 0;
    for (std::size_t p = 0; p < k; ++p)
      if (point_closures[p] == c)
        ++generic;
    if (generic != 1) {
      std::vector<std::size_t> members;
      for (std::size_t p = c.find_first(); p != PointSet::npos; p = c.find_next(p))
        members.push_back(p);
      r.fail("sober", members,
             "irreducible closed set with " + std::to_string(generic) +
                 " generic points");
      return r;
    }
  }
  r.pass("sober");
  return r;
}

/// The opens of x ordered by inclusion, as a lattice. Element i is x.opens[i].
inline FiniteLattice topology_lattice(const FiniteSpace &x) {
  const std::size_t k = x.opens.size();
  Relation leq(k);
  std::vector<std::string> names;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b)
      leq.set(a, b, x.opens[a].is_subset_of(x.opens[b]));
    std::string label = "{";
    bool first = true;
    for (std::size_t p = x.opens[a].find_first(); p != PointSet::npos;
         p = x.opens[a].find_next(p)) {
      label += (first ? "" : ",") + x.points[p];
      first = false;
    }
    names.push_back(label + "}");
  }
  return FiniteLattice(std::move(leq), std::move(names));
}

/// A point p: L -> 2, stored as the set of elements sent to 1.
using LocalePoint = PointSet;

/// Checks that a 0/1 valuation preserves top, bottom, binary meets and
/// binary joins (hence all finite meets and all joins of a finite lattice).
inline bool is_locale_point(const FiniteLattice &l, const LocalePoint &p) {
  const std::size_t k = l.size();
  if (!p.test(l.top()) || p.test(l.bottom()))
    return false;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (p.test(l.meet(a, b)) != (p.test(a) && p.test(b)))
        return false;
      if (p.test(l.join(a, b)) != (p.test(a) || p.test(b)))
        return false;
    }
  return true;
}

/// All points of a finite lattice. A point's true-set is a filter, so in a
/// finite lattice it is the principal filter of its least element; each
/// principal filter is tested against the homomorphism conditions.
/// Points are returned ordered by that least element.
inline std::vector<LocalePoint> points_of_locale(const FiniteLattice &l) {
  const std::size_t k = l.size();
  std::vector<LocalePoint> points;
  for (std::size_t a = 0; a < k; ++a) {
    LocalePoint p(k);
    for (std::size_t b = 0; b < k; ++b)
      if (l.leq(a, b))
        p.set(b);
    if (is_locale_point(l, p))
      points.push_back(std::move(p));
  }
  return points;
}

/// Alexandrov (= Scott, at finite scale) topology of a finite lattice: every
/// directed subset of a finite poset has a greatest element, so
/// inaccessibility by directed joins holds for every upper set.
inline FiniteSpace alexandrov_scott(const FiniteLattice &l) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < l.size(); ++i)
    labels.push_back(l.name(i));
  return make_space(std::move(labels), upper_sets(l.order()));
}

struct Spectrum {
  FiniteSpace space;
  std::vector<std::size_t> point_generators; // least element of each point
  std::vector<std::size_t> open_of_element;  // lattice element -> open index
  bool isomorphic = false;                   // U -> {p : p(U)=1} is an iso
};

/// Builds the space of points of l; its opens are {p : p(U) = 1} for U in l.
/// With require_distributive, a non-distributive l throws an Error naming
/// the failing triple.
inline Spectrum spectrum(const FiniteLattice &l, bool require_distributive) {
  if (require_distributive) {
    LawReport d = check_distributive(l);
    if (!d.passed()) {
      const auto &w = d.find("distributive")->witness;
      throw Error("lattice is not distributive: p=" + l.name(w[0]) +
                  ", m=" + l.name(w[1]) + ", n=" + l.name(w[2]));
    }
  }
  const auto pts = points_of_locale(l);
  const std::size_t k = l.size();
  Spectrum s;
  std::vector<std::string> labels;
  for (const auto &p : pts) {
    const std::size_t gen = p.find_first();
    s.point_generators.push_back(gen);
    labels.push_back(l.name(gen));
  }
  std::vector<PointSet> opens;
  for (std::size_t u = 0; u < k; ++u) {
    PointSet o(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i].test(u))
        o.set(i);
    opens.push_back(o);
  }
  s.space = make_space(std::move(labels), opens);
  s.isomorphic = true;
  for (std::size_t u = 0; u < k; ++u) {
    auto it = std::lower_bound(s.space.opens.begin(), s.space.opens.end(),
                               opens[u]);
    s.open_of_element.push_back(std::size_t(it - s.space.opens.begin()));
    for (std::size_t v = 0; v < k; ++v)
      if (l.leq(u, v) != opens[u].is_subset_of(opens[v]))
        s.isomorphic = false;
  }
  if (s.space.opens.size() != k)
    s.isomorphic = false;
  return s;
}

/// A bijection between two finite spaces that carries opens onto opens, if
/// one exists with the given point map. Returns true when `map` (points of a
/// -> points of b) is a homeomorphism.
inline bool is_homeomorphism(const FiniteSpace &a, const FiniteSpace &b,
                             const std::vector<std::size_t> &map) {
  if (a.size() != b.size() || map.size() != a.size() ||
      a.opens.size() != b.opens.size())
    return false;
  std::vector<char> hit(b.size(), 0);
  for (std::size_t m : map) {
    if (m >= b.size() || hit[m])
      return false;
    hit[m] = 1;
  }
  const std::set<PointSet> b_opens(b.opens.begin(), b.opens.end());
  for (const auto &o : a.opens) {
    PointSet image(b.size());
    for (std::size_t p = 0; p < a.size(); ++p)
      if (o.test(p))
        image.set(map[p]);
    if (!b_opens.count(image))
      return false;
  }
  return true;
}

/// Finite reading of classicality for a quantale that already satisfies the
/// measurement-space axioms:
///   (1) the order is a distributive lattice; for finite lattices this is the
///       whole of "countably based locally compact locale";
///   (2) the topology, when present, is the Alexandrov/Scott topology;
///   (3) m <= m m* m for every m.
inline LawReport check_classical(const FiniteQuantale &q) {
  const FiniteLattice l = detail::lattice_of(q);
  LawReport r;
  LawReport d = check_distributive(l);
  if (d.passed())
    r.pass("distributive_lattice",
           "finite distributive lattice: continuity and countable basis hold "
           "vacuously");
  else
    r.fail("distributive_lattice", d.find("distributive")->witness,
           d.find("distributive")->detail);

  if (q.opens) {
    std::set<PointSet> have(q.opens->begin(), q.opens->end());
    auto up = upper_sets(q.leq);
    std::set<PointSet> want(up.begin(), up.end());
    have == want ? r.pass("scott_topology")
                 : r.fail("scott_topology", {},
                          "topology differs from the upper-set topology");
  } else {
    r.note("scott_topology", true, {}, "no topology attached; not checked");
  }

  detail::unary_law(r, "m_below_mm*m", q.size(), [&](std::size_t m) {
    return l.leq(m, q.mul(q.mul(m, q.inv[m]), m));
  });
  return r;
}

/// mn = m ^ n and m* = m for all m, n.
inline LawReport check_local(const FiniteQuantale &q) {
  const FiniteLattice l = detail::lattice_of(q);
  LawReport r;
  detail::binary_law(r, "product_is_meet", q.size(), [&](auto m, auto n) {
    return q.mul(m, n) == l.meet(m, n);
  });
  detail::unary_law(r, "involution_trivial", q.size(),
                    [&](auto m) { return q.inv[m] == m; });
  return r;
}

/// Local measurement space of a finite space: opens under inclusion with
/// product = intersection, trivial involution, and the Scott topology.
inline FiniteQuantale local_measurement_space(const FiniteSpace &x) {
  const FiniteLattice l = topology_lattice(x);
  FiniteQuantale q = local_quantale(l);
  q.opens = upper_sets(q.leq);
  return q;
}

} // namespace mslab
