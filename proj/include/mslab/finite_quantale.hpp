#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/law_report.hpp"
#include "mslab/order.hpp"

namespace mslab {

/// A finite involutive quantale given by tables over {0..k-1}: the order,
/// the product (row-major, prod[a*k+b] = a.b), the involution, and an
/// optional topology as a list of open subsets.
struct FiniteQuantale {
  Relation leq;
  std::vector<std::size_t> prod;
  std::vector<std::size_t> inv;
  std::optional<std::vector<PointSet>> opens;
  std::vector<std::string> names;

  std::size_t size() const { return leq.size(); }
  std::size_t mul(std::size_t a, std::size_t b) const {
    return prod[a * size() + b];
  }
  std::string name(std::size_t i) const {
    return names.empty() ? std::to_string(i) : names[i];
  }
};

/// Table shapes and index ranges. Throws Error on the first inconsistency.
inline void validate_tables(const FiniteQuantale &q) {
  const std::size_t k = q.size();
  if (k == 0)
    throw Error("quantale carrier is empty");
  if (q.prod.size() != k * k)
    throw Error("product table must be " + std::to_string(k) + "x" +
                std::to_string(k));
  if (q.inv.size() != k)
    throw Error("involution table must have " + std::to_string(k) + " entries");
  for (std::size_t v : q.prod)
    if (v >= k)
      throw Error("product table entry " + std::to_string(v) + " out of range");
  for (std::size_t v : q.inv)
    if (v >= k)
      throw Error("involution entry " + std::to_string(v) + " out of range");
  if (!q.names.empty() && q.names.size() != k)
    throw Error("names must have one entry per element");
  if (q.opens)
    for (const auto &o : *q.opens)
      if (o.size() != k)
        throw Error("open set has wrong carrier size");
}

inline LawReport check_complete_lattice(const FiniteQuantale &q) {
  return check_complete_lattice(q.leq);
}

/// Above this size check_axioms samples triples instead of enumerating.
inline constexpr std::size_t exhaustive_law_limit = 256;
inline constexpr std::size_t sampled_law_triples = std::size_t(1) << 20;
inline constexpr std::uint64_t sampled_law_seed = 0x6d736c6162ULL;

namespace detail {

// Calls visit(a, b, c) over all triples in lexicographic order (or over a
// seeded sample for large carriers) until it returns false.
template <class Visit>
void for_triples(std::size_t k, Visit &&visit) {
  if (k <= exhaustive_law_limit) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t c = 0; c < k; ++c)
          if (!visit(a, b, c))
            return;
    return;
  }
  std::mt19937_64 rng(sampled_law_seed);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  for (std::size_t i = 0; i < sampled_law_triples; ++i) {
    const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    if (!visit(a, b, c))
      return;
  }
}

// Runs one law over triples and records its verdict.
template <class Holds>
void triple_law(LawReport &r, const std::string &law, std::size_t k,
                Holds &&holds) {
  std::optional<std::vector<std::size_t>> bad;
  for_triples(k, [&](std::size_t a, std::size_t b, std::size_t c) {
    if (holds(a, b, c))
      return true;
    bad = std::vector<std::size_t>{a, b, c};
    return false;
  });
  const std::string how = k <= exhaustive_law_limit
                              ? std::string("exhaustive")
                              : "sampled " + std::to_string(sampled_law_triples) +
                                    " triples";
  bad ? r.fail(law, *bad, how) : r.pass(law, how);
}

template <class Holds>
void unary_law(LawReport &r, const std::string &law, std::size_t k,
               Holds &&holds) {
  for (std::size_t a = 0; a < k; ++a)
    if (!holds(a)) {
      r.fail(law, {a});
      return;
    }
  r.pass(law);
}

template <class Holds>
void binary_law(LawReport &r, const std::string &law, std::size_t k,
                Holds &&holds) {
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (!holds(a, b)) {
        r.fail(law, {a, b});
        return;
      }
  r.pass(law);
}

inline FiniteLattice lattice_of(const FiniteQuantale &q) {
  validate_tables(q);
  return FiniteLattice(q.leq, q.names);
}

} // namespace detail

/// The axioms of a measurement space at table level: associativity,
/// distributivity over binary joins on both sides, absorption on both sides,
/// the two involution laws, order preservation of the involution, and
/// reversibility (m m* m <= m implies m m* m = m). Preservation of all joins
/// is reported as a consequence: in a finite lattice every join is a finite
/// iterate of binary joins or the empty join.
/// Throws Error if the order is not a complete lattice.
inline LawReport check_axioms(const FiniteQuantale &q) {
  const FiniteLattice l = detail::lattice_of(q);
  const std::size_t k = q.size();
  const std::size_t zero = l.bottom();
  LawReport r;

  detail::triple_law(r, "associativity", k, [&](auto n, auto m, auto p) {
    return q.mul(q.mul(n, m), p) == q.mul(n, q.mul(m, p));
  });
  detail::triple_law(r, "distributivity_left", k, [&](auto n, auto m, auto p) {
    return q.mul(l.join(n, m), p) == l.join(q.mul(n, p), q.mul(m, p));
  });
  detail::triple_law(r, "distributivity_right", k, [&](auto n, auto m, auto p) {
    return q.mul(p, l.join(n, m)) == l.join(q.mul(p, n), q.mul(p, m));
  });
  detail::unary_law(r, "absorption_left", k,
                    [&](auto p) { return q.mul(zero, p) == zero; });
  detail::unary_law(r, "absorption_right", k,
                    [&](auto p) { return q.mul(p, zero) == zero; });
  detail::unary_law(r, "involution_involutive", k,
                    [&](auto m) { return q.inv[q.inv[m]] == m; });
  detail::binary_law(r, "involution_antimultiplicative", k, [&](auto n, auto m) {
    return q.inv[q.mul(n, m)] == q.mul(q.inv[m], q.inv[n]);
  });
  detail::binary_law(r, "involution_order", k, [&](auto m, auto n) {
    return !l.leq(m, n) || l.leq(q.inv[m], q.inv[n]);
  });
  detail::unary_law(r, "reversibility", k, [&](auto m) {
    const std::size_t mmm = q.mul(q.mul(m, q.inv[m]), m);
    return !l.leq(mmm, m) || mmm == m;
  });

  const bool joins = r.holds("distributivity_left") &&
                     r.holds("distributivity_right") &&
                     r.holds("absorption_left") && r.holds("absorption_right");
  if (joins)
    r.pass("preserves_all_joins", "binary joins and the empty join preserved");
  else
    r.fail("preserves_all_joins", {}, "see distributivity/absorption");
  return r;
}

namespace detail {

inline LawReport check_topology(const std::vector<PointSet> &opens,
                                std::size_t k) {
  LawReport r;
  std::set<PointSet> all(opens.begin(), opens.end());
  PointSet empty(k), full(k);
  full.set();
  all.count(empty) ? r.pass("topology_has_empty")
                   : r.fail("topology_has_empty", {});
  all.count(full) ? r.pass("topology_has_full") : r.fail("topology_has_full", {});
  for (std::size_t i = 0; i < opens.size(); ++i)
    for (std::size_t j = i + 1; j < opens.size(); ++j) {
      if (!all.count(opens[i] | opens[j])) {
        r.fail("topology_unions", {i, j});
        return r;
      }
      if (!all.count(opens[i] & opens[j])) {
        r.fail("topology_intersections", {i, j});
        return r;
      }
    }
  r.pass("topology_closed");
  return r;
}

// Smallest open set containing each point.
inline std::vector<PointSet> minimal_neighbourhoods(
    const std::vector<PointSet> &opens, std::size_t k) {
  std::vector<PointSet> nbhd(k, PointSet(k));
  for (auto &n : nbhd)
    n.set();
  for (const auto &o : opens)
    for (std::size_t a = 0; a < k; ++a)
      if (o.test(a))
        nbhd[a] &= o;
  return nbhd;
}

// The preimage set of pairs S (as a predicate) is open in the product
// topology iff every member (a,b) has an open rectangle inside S; the
// smallest rectangle at (a,b) is N(a) x N(b).
template <class InPreimage>
std::optional<std::vector<std::size_t>>
pair_preimage_violation(const std::vector<PointSet> &nbhd, std::size_t k,
                        InPreimage &&in) {
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (!in(a, b))
        continue;
      for (std::size_t c = nbhd[a].find_first(); c != PointSet::npos;
           c = nbhd[a].find_next(c))
        for (std::size_t d = nbhd[b].find_first(); d != PointSet::npos;
             d = nbhd[b].find_next(d))
          if (!in(c, d))
            return std::vector<std::size_t>{a, b, c, d};
    }
  return std::nullopt;
}

} // namespace detail

/// Continuity of the involution, the product and binary join against the
/// carried topology, by literal preimage openness. Witnesses are
/// (open index, element) for the involution and (open index, a, b, c, d)
/// for binary operations: (a,b) is in the preimage but (c,d) from its
/// smallest open rectangle is not. Throws if no topology is present.
inline LawReport check_continuity(const FiniteQuantale &q) {
  if (!q.opens)
    throw Error("continuity check needs a topology");
  const FiniteLattice l = detail::lattice_of(q);
  const std::size_t k = q.size();
  const auto &opens = *q.opens;
  LawReport r = detail::check_topology(opens, k);
  if (!r.passed())
    return r;
  const std::set<PointSet> open_set(opens.begin(), opens.end());
  const auto nbhd = detail::minimal_neighbourhoods(opens, k);

  std::optional<std::vector<std::size_t>> inv_bad;
  for (std::size_t i = 0; i < opens.size() && !inv_bad; ++i) {
    PointSet pre(k);
    for (std::size_t a = 0; a < k; ++a)
      if (opens[i].test(q.inv[a]))
        pre.set(a);
    if (!open_set.count(pre))
      for (std::size_t a = 0; a < k && !inv_bad; ++a)
        if (pre.test(a) && !nbhd[a].is_subset_of(pre))
          inv_bad = std::vector<std::size_t>{i, a};
  }
  inv_bad ? r.fail("involution_continuous", *inv_bad)
          : r.pass("involution_continuous");

  auto binary = [&](const std::string &law, auto op) {
    for (std::size_t i = 0; i < opens.size(); ++i) {
      auto bad = detail::pair_preimage_violation(
          nbhd, k, [&](std::size_t a, std::size_t b) {
            return opens[i].test(op(a, b));
          });
      if (bad) {
        bad->insert(bad->begin(), i);
        r.fail(law, *bad);
        return;
      }
    }
    r.pass(law);
  };
  binary("product_continuous",
         [&](std::size_t a, std::size_t b) { return q.mul(a, b); });
  binary("join_continuous",
         [&](std::size_t a, std::size_t b) { return l.join(a, b); });
  return r;
}

/// Homomorphism laws for h: src -> dst (h[i] is the image of element i):
/// h(0)=0, binary joins, products, involution, and continuity when both
/// carry topologies. Assumes both sides already satisfy check_axioms.
/// Throws if h is not a total map into dst.
inline LawReport check_homomorphism(const std::vector<std::size_t> &h,
                                    const FiniteQuantale &src,
                                    const FiniteQuantale &dst) {
  if (h.size() != src.size())
    throw Error("homomorphism must map every source element (got " +
                std::to_string(h.size()) + " of " + std::to_string(src.size()) +
                ")");
  for (std::size_t v : h)
    if (v >= dst.size())
      throw Error("homomorphism image " + std::to_string(v) + " out of range");
  const FiniteLattice ls = detail::lattice_of(src);
  const FiniteLattice ld = detail::lattice_of(dst);
  const std::size_t k = src.size();
  LawReport r;
  h[ls.bottom()] == ld.bottom() ? r.pass("preserves_zero")
                                : r.fail("preserves_zero", {ls.bottom()});
  detail::binary_law(r, "preserves_joins", k, [&](auto a, auto b) {
    return h[ls.join(a, b)] == ld.join(h[a], h[b]);
  });
  detail::binary_law(r, "preserves_products", k, [&](auto a, auto b) {
    return h[src.mul(a, b)] == dst.mul(h[a], h[b]);
  });
  detail::unary_law(r, "preserves_involution", k,
                    [&](auto a) { return h[src.inv[a]] == dst.inv[h[a]]; });
  if (src.opens && dst.opens) {
    const std::set<PointSet> src_opens(src.opens->begin(), src.opens->end());
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < dst.opens->size() && !bad; ++i) {
      PointSet pre(k);
      for (std::size_t a = 0; a < k; ++a)
        if ((*dst.opens)[i].test(h[a]))
          pre.set(a);
      if (!src_opens.count(pre))
        bad = i;
    }
    bad ? r.fail("continuous", {*bad}, "preimage of destination open not open")
        : r.pass("continuous");
  }
  return r;
}

/// Upper sets of a partial order (the Alexandrov topology), generated as
/// all unions of principal up-sets.
inline std::vector<PointSet> upper_sets(const Relation &leq) {
  const std::size_t k = leq.size();
  std::set<PointSet> acc{PointSet(k)};
  for (std::size_t x = 0; x < k; ++x) {
    PointSet up(k);
    for (std::size_t y = 0; y < k; ++y)
      if (leq(x, y))
        up.set(y);
    std::vector<PointSet> fresh;
    for (const auto &u : acc)
      fresh.push_back(u | up);
    acc.insert(fresh.begin(), fresh.end());
  }
  return {acc.begin(), acc.end()};
}

/// Finite frame as a quantale: product = meet, involution = identity.
inline FiniteQuantale local_quantale(const FiniteLattice &l) {
  FiniteQuantale q;
  q.leq = l.order();
  q.names = l.names();
  const std::size_t k = l.size();
  q.prod.resize(k * k);
  q.inv.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    q.inv[a] = a;
    for (std::size_t b = 0; b < k; ++b)
      q.prod[a * k + b] = l.meet(a, b);
  }
  return q;
}

} // namespace mslab
