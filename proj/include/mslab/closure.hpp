#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/finite_quantale.hpp"
#include "mslab/subspace.hpp"

namespace mslab {

struct ClosureResult {
  /// Present iff the closure reached a fixed point within the round budget.
  std::optional<FiniteQuantale> quantale;
  /// Elements in canonical order; index i is element i of the quantale.
  std::vector<Subspace> elements;
  /// Element count after the initial join saturation and after each round.
  std::vector<std::size_t> growth;

  bool terminated() const { return quantale.has_value(); }
};

namespace detail {

// Adds every binary join until the table is join-closed. Returns false if
// the table grows past `cap`.
inline bool join_saturate(SubspaceTable &t, std::size_t cap, Tolerance tol) {
  std::size_t done = 0;
  while (done < t.size()) {
    const std::size_t i = done++;
    for (std::size_t j = 0; j < i; ++j) {
      t.intern(join(t[i], t[j], tol));
      if (t.size() > cap)
        return false;
    }
  }
  return true;
}

} // namespace detail

/// Smallest set containing 0 and `seed` closed under binary join and
/// involution, in canonical order. Throws past `max_elements`.
inline std::vector<Subspace> join_involution_closure(
    const std::vector<Subspace> &seed, Tolerance tol = {},
    std::size_t max_elements = 4096) {
  if (seed.empty())
    throw Error("join_involution_closure: empty seed");
  SubspaceTable t(tol);
  t.intern(Subspace::zero(seed.front().ambient()));
  for (const auto &s : seed)
    t.intern(s);
  for (;;) {
    if (!detail::join_saturate(t, max_elements, tol))
      throw Error("join_involution_closure exceeds " +
                  std::to_string(max_elements) + " elements");
    const std::size_t before = t.size();
    for (std::size_t i = 0; i < before; ++i)
      t.intern(involution(t[i], tol));
    if (t.size() == before)
      break;
  }
  std::vector<Subspace> out = t.elements();
  std::vector<std::vector<long long>> keys;
  for (const auto &e : out)
    keys.push_back(canonical_key(e));
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<Subspace> sorted;
  for (std::size_t i : order)
    sorted.push_back(out[i]);
  return sorted;
}

/// Closes `seed` under binary join, product and involution. One round adds
/// all pairwise products and involutions of the current set and then
/// saturates under joins; a round that adds nothing ends the closure.
/// Returns growth counts without tables if `depth` rounds pass without a
/// quiet one or the set exceeds `max_elements`. Seed elements keep their
/// names; other elements are named q<index>.
inline ClosureResult bounded_closure(const std::vector<Subspace> &seed,
                                     std::size_t depth,
                                     const std::vector<std::string> &seed_names = {},
                                     Tolerance tol = {},
                                     std::size_t max_elements = 4096) {
  if (seed.empty())
    throw Error("bounded_closure: empty seed");
  if (!seed_names.empty() && seed_names.size() != seed.size())
    throw Error("bounded_closure: one name per seed element");
  const std::size_t n = seed.front().ambient();
  for (const auto &s : seed)
    if (s.ambient() != n)
      throw Error("bounded_closure: seed elements live in different M_n");

  ClosureResult out;
  SubspaceTable t(tol);
  t.intern(Subspace::zero(n));
  for (const auto &s : seed)
    t.intern(s);
  bool ok = detail::join_saturate(t, max_elements, tol);
  out.growth.push_back(t.size());

  bool quiet = false;
  for (std::size_t round = 0; ok && !quiet && round < depth; ++round) {
    const std::size_t before = t.size();
    for (std::size_t i = 0; i < before && ok; ++i) {
      t.intern(involution(t[i], tol));
      for (std::size_t j = 0; j < before && ok; ++j) {
        t.intern(product(t[i], t[j], tol));
        ok = t.size() <= max_elements;
      }
    }
    ok = ok && detail::join_saturate(t, max_elements, tol);
    out.growth.push_back(t.size());
    quiet = t.size() == before;
  }
  if (!ok || !quiet)
    return out;

  const std::size_t k = t.size();
  std::vector<std::vector<long long>> keys;
  for (const auto &e : t.elements())
    keys.push_back(canonical_key(e));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  SubspaceTable sorted(tol);
  for (std::size_t i : order)
    sorted.intern(t[i]);
  out.elements = sorted.elements();

  auto lookup = [&](const Subspace &p) {
    auto i = sorted.find(p);
    if (!i)
      throw Error("bounded_closure: closure not stable under re-evaluation "
                  "(tolerance too coarse?)");
    return *i;
  };
  FiniteQuantale q;
  q.leq = Relation(k);
  q.prod.assign(k * k, 0);
  q.inv.assign(k, 0);
  q.names.assign(k, "");
  for (std::size_t i = 0; i < k; ++i) {
    q.inv[i] = lookup(involution(sorted[i], tol));
    for (std::size_t j = 0; j < k; ++j) {
      q.leq.set(i, j, contains(sorted[j], sorted[i], tol));
      q.prod[i * k + j] = lookup(product(sorted[i], sorted[j], tol));
    }
  }
  for (std::size_t s = seed.size(); s-- > 0;)
    if (!seed_names.empty())
      q.names[lookup(seed[s])] = seed_names[s];
  for (std::size_t i = 0; i < k; ++i)
    if (q.names[i].empty())
      q.names[i] = "q" + std::to_string(i);
  out.quantale = std::move(q);
  return out;
}

} // namespace mslab
