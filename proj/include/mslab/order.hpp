#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "mslab/error.hpp"
#include "mslab/law_report.hpp"

namespace mslab {

/// Subset of a finite carrier, one bit per element.
using PointSet = boost::dynamic_bitset<>;

inline PointSet point_set(std::size_t size,
                          std::initializer_list<std::size_t> members) {
  PointSet s(size);
  for (std::size_t m : members)
    s.set(m);
  return s;
}

/// Binary relation on {0..k-1} stored densely; used for partial orders and,
/// before validation, for preorders such as a specialization relation of a
/// non-T0 space.
class Relation {
public:
  Relation() = default;
  explicit Relation(std::size_t k) : k_(k), bits_(k * k, 0) {}

  std::size_t size() const { return k_; }
  bool operator()(std::size_t a, std::size_t b) const {
    return bits_[a * k_ + b] != 0;
  }
  void set(std::size_t a, std::size_t b, bool v = true) {
    bits_[a * k_ + b] = v ? 1 : 0;
  }

  bool operator==(const Relation &) const = default;

private:
  std::size_t k_ = 0;
  std::vector<char> bits_;
};

/// Reflexivity, antisymmetry and transitivity, with witnesses.
inline LawReport check_partial_order(const Relation &leq) {
  LawReport r;
  const std::size_t k = leq.size();
  auto refl = [&]() -> std::optional<std::vector<std::size_t>> {
    for (std::size_t a = 0; a < k; ++a)
      if (!leq(a, a))
        return std::vector<std::size_t>{a};
    return std::nullopt;
  }();
  refl ? r.fail("reflexive", *refl) : r.pass("reflexive");

  auto anti = [&]() -> std::optional<std::vector<std::size_t>> {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        if (leq(a, b) && leq(b, a))
          return std::vector<std::size_t>{a, b};
    return std::nullopt;
  }();
  anti ? r.fail("antisymmetric", *anti) : r.pass("antisymmetric");

  auto trans = [&]() -> std::optional<std::vector<std::size_t>> {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (leq(a, b))
          for (std::size_t c = 0; c < k; ++c)
            if (leq(b, c) && !leq(a, c))
              return std::vector<std::size_t>{a, b, c};
    return std::nullopt;
  }();
  trans ? r.fail("transitive", *trans) : r.pass("transitive");
  return r;
}

namespace detail {

// Least upper bound of a and b under a partial order, if it exists.
inline std::optional<std::size_t> least_upper_bound(const Relation &leq,
                                                    std::size_t a,
                                                    std::size_t b) {
  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < leq.size(); ++c) {
    if (!leq(a, c) || !leq(b, c))
      continue;
    if (!best || leq(c, *best))
      best = c;
  }
  if (!best)
    return std::nullopt;
  for (std::size_t c = 0; c < leq.size(); ++c)
    if (leq(a, c) && leq(b, c) && !leq(*best, c))
      return std::nullopt;
  return best;
}

inline std::optional<std::size_t> greatest_lower_bound(const Relation &leq,
                                                       std::size_t a,
                                                       std::size_t b) {
  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < leq.size(); ++c) {
    if (!leq(c, a) || !leq(c, b))
      continue;
    if (!best || leq(*best, c))
      best = c;
  }
  if (!best)
    return std::nullopt;
  for (std::size_t c = 0; c < leq.size(); ++c)
    if (leq(c, a) && leq(c, b) && !leq(c, *best))
      return std::nullopt;
  return best;
}

} // namespace detail

/// Completeness of a finite poset. A finite poset is a complete lattice iff
/// it is nonempty, has a bottom, and every pair has a join: any subset's join
/// is then the iterated binary join, and the empty join is the bottom.
/// Throws if leq is not a partial order.
inline LawReport check_complete_lattice(const Relation &leq) {
  LawReport po = check_partial_order(leq);
  if (!po.passed()) {
    std::string msg = "order table is not a partial order:";
    for (const auto &v : po.verdicts())
      if (!v.passed)
        msg += " " + v.law;
    throw Error(msg);
  }
  LawReport r;
  const std::size_t k = leq.size();
  std::optional<std::size_t> bottom;
  for (std::size_t a = 0; a < k && !bottom; ++a) {
    bool below_all = true;
    for (std::size_t b = 0; b < k && below_all; ++b)
      below_all = leq(a, b);
    if (below_all)
      bottom = a;
  }
  bottom ? r.pass("bottom", "bottom = " + std::to_string(*bottom))
         : r.fail("bottom", {}, k == 0 ? "empty carrier" : "no least element");

  std::optional<std::vector<std::size_t>> missing;
  for (std::size_t a = 0; a < k && !missing; ++a)
    for (std::size_t b = a + 1; b < k && !missing; ++b)
      if (!detail::least_upper_bound(leq, a, b))
        missing = std::vector<std::size_t>{a, b};
  missing ? r.fail("binary_joins", *missing, "pair has no least upper bound")
          : r.pass("binary_joins");
  return r;
}

/// A finite lattice with precomputed join/meet tables.
class FiniteLattice {
public:
  FiniteLattice() = default;

  /// Throws Error if leq is not a complete lattice order.
  explicit FiniteLattice(Relation leq, std::vector<std::string> names = {})
      : leq_(std::move(leq)), names_(std::move(names)) {
    LawReport r = check_complete_lattice(leq_);
    if (!r.passed()) {
      std::string msg = "order is not a lattice";
      if (const auto *v = r.find("binary_joins"); v && !v->passed)
        msg += ": elements " + std::to_string(v->witness[0]) + " and " +
               std::to_string(v->witness[1]) + " have no join";
      throw Error(msg);
    }
    const std::size_t k = leq_.size();
    if (!names_.empty() && names_.size() != k)
      throw Error("lattice names do not match size");
    join_.assign(k * k, 0);
    meet_.assign(k * k, 0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        join_[a * k + b] = *detail::least_upper_bound(leq_, a, b);
        // Finite complete lattices have all meets: meet = join of lower bounds.
        meet_[a * k + b] = *detail::greatest_lower_bound(leq_, a, b);
      }
    for (std::size_t a = 0; a < k; ++a) {
      bool is_bottom = true, is_top = true;
      for (std::size_t b = 0; b < k; ++b) {
        is_bottom = is_bottom && leq_(a, b);
        is_top = is_top && leq_(b, a);
      }
      if (is_bottom)
        bottom_ = a;
      if (is_top)
        top_ = a;
    }
  }

  std::size_t size() const { return leq_.size(); }
  const Relation &order() const { return leq_; }
  bool leq(std::size_t a, std::size_t b) const { return leq_(a, b); }
  std::size_t join(std::size_t a, std::size_t b) const {
    return join_[a * size() + b];
  }
  std::size_t meet(std::size_t a, std::size_t b) const {
    return meet_[a * size() + b];
  }
  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }

  const std::vector<std::string> &names() const { return names_; }
  std::string name(std::size_t i) const {
    return names_.empty() ? std::to_string(i) : names_[i];
  }

private:
  Relation leq_;
  std::vector<std::string> names_;
  std::vector<std::size_t> join_;
  std::vector<std::size_t> meet_;
  std::size_t bottom_ = 0;
  std::size_t top_ = 0;
};

/// Cover relation (a, b): a < b with nothing strictly between.
inline std::vector<std::pair<std::size_t, std::size_t>>
cover_relation(const Relation &leq) {
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  const std::size_t k = leq.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b || !leq(a, b))
        continue;
      bool between = false;
      for (std::size_t c = 0; c < k && !between; ++c)
        between = c != a && c != b && leq(a, c) && leq(c, b);
      if (!between)
        covers.emplace_back(a, b);
    }
  return covers;
}

/// Exhaustive check of p ^ (m v n) = (p ^ m) v (p ^ n); witness (p, m, n).
inline LawReport check_distributive(const FiniteLattice &l) {
  LawReport r;
  const std::size_t k = l.size();
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t m = 0; m < k; ++m)
      for (std::size_t n = 0; n < k; ++n)
        if (l.meet(p, l.join(m, n)) != l.join(l.meet(p, m), l.meet(p, n))) {
          r.fail("distributive", {p, m, n},
                 "p^(m v n) = " + l.name(l.meet(p, l.join(m, n))) +
                     " but (p^m) v (p^n) = " +
                     l.name(l.join(l.meet(p, m), l.meet(p, n))));
          return r;
        }
  r.pass("distributive");
  return r;
}

} // namespace mslab
