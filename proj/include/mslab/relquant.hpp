#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/finite_quantale.hpp"
#include "mslab/law_report.hpp"
#include "mslab/subspace.hpp"

namespace mslab {

/// An n x n matrix over the two-element locale, i.e. a binary relation on
/// {0..n-1}: (i, j) set means i is related to j.
class BoolMatrix {
public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  static BoolMatrix identity(std::size_t n) {
    BoolMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      m.set(i, i);
    return m;
  }
  static BoolMatrix full(std::size_t n) {
    BoolMatrix m(n);
    m.bits_.assign(n * n, 1);
    return m;
  }
  /// Relation whose row-major bit pattern is `mask`.
  static BoolMatrix from_mask(std::size_t n, std::size_t mask) {
    BoolMatrix m(n);
    for (std::size_t k = 0; k < n * n; ++k)
      m.bits_[k] = (mask >> k) & 1U;
    return m;
  }
  static BoolMatrix from_pairs(
      std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> ps) {
    BoolMatrix m(n);
    for (auto [i, j] : ps)
      m.set(i, j);
    return m;
  }

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const {
    return bits_[i * n_ + j] != 0;
  }
  void set(std::size_t i, std::size_t j, bool v = true) {
    bits_[i * n_ + j] = v ? 1 : 0;
  }
  std::size_t mask() const {
    std::size_t m = 0;
    for (std::size_t k = 0; k < bits_.size(); ++k)
      if (bits_[k])
        m |= std::size_t(1) << k;
    return m;
  }
  bool operator==(const BoolMatrix &) const = default;

private:
  std::size_t n_ = 0;
  std::vector<char> bits_;
};

namespace detail {
inline void require_same_size(const BoolMatrix &s, const BoolMatrix &t) {
  if (s.size() != t.size())
    throw Error("relation size mismatch: " + std::to_string(s.size()) + " vs " +
                std::to_string(t.size()));
}
} // namespace detail

/// (ST)_ij = OR_k s_ik t_kj
inline BoolMatrix bool_product(const BoolMatrix &s, const BoolMatrix &t) {
  detail::require_same_size(s, t);
  const std::size_t n = s.size();
  BoolMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (s(i, k))
        for (std::size_t j = 0; j < n; ++j)
          if (t(k, j))
            out.set(i, j);
  return out;
}

inline BoolMatrix bool_involution(const BoolMatrix &s) {
  BoolMatrix out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      out.set(j, i, s(i, j));
  return out;
}

inline BoolMatrix bool_join(const BoolMatrix &s, const BoolMatrix &t) {
  detail::require_same_size(s, t);
  BoolMatrix out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      out.set(i, j, s(i, j) || t(i, j));
  return out;
}

inline bool bool_leq(const BoolMatrix &s, const BoolMatrix &t) {
  detail::require_same_size(s, t);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s(i, j) && !t(i, j))
        return false;
  return true;
}

struct Arrow {
  std::size_t src = 0;
  std::size_t tgt = 0;
  std::string label;
};

/// A finite discrete groupoid. compose[h][g] is the arrow hg ("g, then h"),
/// defined exactly when tgt(g) == src(h).
struct FiniteGroupoid {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<std::vector<std::optional<std::size_t>>> compose;
  std::vector<std::size_t> inverse;
};

/// Exhaustive sweep of the groupoid axioms. Witnesses are arrow indices
/// (object indices for "identities").
inline LawReport check_groupoid(const FiniteGroupoid &g) {
  LawReport r;
  const std::size_t m = g.arrows.size();
  if (g.compose.size() != m || g.inverse.size() != m) {
    r.fail("shape", {}, "composition/inverse tables do not match arrow count");
    return r;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (g.compose[i].size() != m) {
      r.fail("shape", {i}, "composition row has wrong length");
      return r;
    }
    if (g.arrows[i].src >= g.objects.size() ||
        g.arrows[i].tgt >= g.objects.size()) {
      r.fail("shape", {i}, "arrow endpoint is not an object");
      return r;
    }
    if (g.inverse[i] >= m) {
      r.fail("shape", {i}, "inverse out of range");
      return r;
    }
    for (const auto &c : g.compose[i])
      if (c && *c >= m) {
        r.fail("shape", {i}, "composite out of range");
        return r;
      }
  }
  r.pass("shape");

  auto law = [&](const std::string &name, auto &&bad) {
    if (auto w = bad())
      r.fail(name, *w);
    else
      r.pass(name);
  };
  using W = std::optional<std::vector<std::size_t>>;

  law("composable_domain", [&]() -> W {
    for (std::size_t h = 0; h < m; ++h)
      for (std::size_t k = 0; k < m; ++k) {
        const bool ok = g.arrows[k].tgt == g.arrows[h].src;
        if (ok != g.compose[h][k].has_value())
          return std::vector<std::size_t>{h, k};
        if (ok) {
          const Arrow &hk = g.arrows[*g.compose[h][k]];
          if (hk.src != g.arrows[k].src || hk.tgt != g.arrows[h].tgt)
            return std::vector<std::size_t>{h, k};
        }
      }
    return std::nullopt;
  });
  if (!r.passed())
    return r;

  law("associativity", [&]() -> W {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c) {
          if (!g.compose[a][b] || !g.compose[b][c])
            continue;
          if (g.compose[*g.compose[a][b]][c] != g.compose[a][*g.compose[b][c]])
            return std::vector<std::size_t>{a, b, c};
        }
    return std::nullopt;
  });

  std::vector<std::optional<std::size_t>> unit(g.objects.size());
  law("identities", [&]() -> W {
    for (std::size_t x = 0; x < g.objects.size(); ++x) {
      for (std::size_t u = 0; u < m && !unit[x]; ++u) {
        if (g.arrows[u].src != x || g.arrows[u].tgt != x)
          continue;
        bool is_unit = true;
        for (std::size_t a = 0; a < m && is_unit; ++a) {
          if (g.arrows[a].src == x)
            is_unit = g.compose[a][u] == a;
          if (is_unit && g.arrows[a].tgt == x)
            is_unit = g.compose[u][a] == a;
        }
        if (is_unit)
          unit[x] = u;
      }
      if (!unit[x])
        return std::vector<std::size_t>{x};
    }
    return std::nullopt;
  });
  if (!r.holds("identities"))
    return r;

  law("inverses", [&]() -> W {
    for (std::size_t a = 0; a < m; ++a) {
      const std::size_t b = g.inverse[a];
      if (!g.compose[a][b] || !g.compose[b][a] ||
          *g.compose[b][a] != *unit[g.arrows[a].src] ||
          *g.compose[a][b] != *unit[g.arrows[a].tgt])
        return std::vector<std::size_t>{a};
    }
    return std::nullopt;
  });
  return r;
}

/// pair({0..n-1}): one arrow (t, s): s -> t for every ordered pair, stored at
/// index t*n + s; (k,j)(j,i) = (k,i) and the inverse swaps.
inline FiniteGroupoid pair_groupoid(std::size_t n) {
  if (n == 0)
    throw Error("pair groupoid needs at least one object");
  FiniteGroupoid g;
  for (std::size_t i = 0; i < n; ++i)
    g.objects.push_back(std::to_string(i + 1));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t s = 0; s < n; ++s)
      g.arrows.push_back(
          {s, t, "(" + std::to_string(t + 1) + "," + std::to_string(s + 1) + ")"});
  const std::size_t m = n * n;
  g.compose.assign(m, std::vector<std::optional<std::size_t>>(m));
  g.inverse.resize(m);
  for (std::size_t h = 0; h < m; ++h) {
    const std::size_t ht = h / n, hs = h % n;
    g.inverse[h] = hs * n + ht;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t kt = k / n, ks = k % n;
      if (kt == hs)
        g.compose[h][k] = ht * n + ks;
    }
  }
  return g;
}

/// A space viewed as a groupoid: one identity arrow per object.
inline FiniteGroupoid space_groupoid(std::size_t objects) {
  FiniteGroupoid g;
  for (std::size_t i = 0; i < objects; ++i) {
    g.objects.push_back(std::to_string(i + 1));
    g.arrows.push_back({i, i, "1_" + std::to_string(i + 1)});
  }
  g.compose.assign(objects, std::vector<std::optional<std::size_t>>(objects));
  g.inverse.resize(objects);
  for (std::size_t i = 0; i < objects; ++i) {
    g.compose[i][i] = i;
    g.inverse[i] = i;
  }
  return g;
}

/// Largest arrow count accepted by groupoid_quantale. Tables are dense
/// k x k with k = 2^arrows, so 16 arrows would need 2^32 product entries.
inline constexpr std::size_t max_quantale_arrows = 9;

/// O(G) for a finite discrete groupoid: all subsets of arrows (element index
/// = bitmask over arrow indices), inclusion order, pointwise composition and
/// pointwise inverse. No topology is attached.
inline FiniteQuantale groupoid_quantale(const FiniteGroupoid &g) {
  const std::size_t m = g.arrows.size();
  if (m > max_quantale_arrows)
    throw Error("groupoid has " + std::to_string(m) +
                " arrows; O(G) tables are limited to " +
                std::to_string(max_quantale_arrows) +
                " arrows, restrict to a sub-groupoid");
  LawReport ok = check_groupoid(g);
  if (!ok.passed())
    throw Error("not a groupoid");
  const std::size_t k = std::size_t(1) << m;
  FiniteQuantale q;
  q.leq = Relation(k);
  q.prod.assign(k * k, 0);
  q.inv.assign(k, 0);
  // Single-arrow products first; subset products are unions of those.
  std::vector<std::size_t> single(m * m, 0);
  for (std::size_t h = 0; h < m; ++h)
    for (std::size_t a = 0; a < m; ++a)
      if (g.compose[h][a])
        single[h * m + a] = std::size_t(1) << *g.compose[h][a];
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = 0; v < k; ++v) {
      q.leq.set(u, v, (u & ~v) == 0);
      std::size_t out = 0;
      for (std::size_t h = 0; h < m; ++h)
        if (u >> h & 1U)
          for (std::size_t a = 0; a < m; ++a)
            if (v >> a & 1U)
              out |= single[h * m + a];
      q.prod[u * k + v] = out;
    }
    std::size_t iv = 0;
    for (std::size_t a = 0; a < m; ++a)
      if (u >> a & 1U)
        iv |= std::size_t(1) << g.inverse[a];
    q.inv[u] = iv;
  }
  q.names.reserve(k);
  for (std::size_t u = 0; u < k; ++u) {
    std::string s = "{";
    bool first = true;
    for (std::size_t a = 0; a < m; ++a)
      if (u >> a & 1U) {
        s += (first ? "" : ",") + g.arrows[a].label;
        first = false;
      }
    q.names.push_back(s + "}");
  }
  return q;
}

/// M_n(2) as a finite quantale; element index = row-major bitmask.
inline FiniteQuantale relation_quantale(std::size_t n) {
  if (n == 0 || n * n > max_quantale_arrows)
    throw Error("relation quantale size out of range");
  const std::size_t k = std::size_t(1) << (n * n);
  FiniteQuantale q;
  q.leq = Relation(k);
  q.prod.assign(k * k, 0);
  q.inv.assign(k, 0);
  for (std::size_t u = 0; u < k; ++u) {
    const BoolMatrix s = BoolMatrix::from_mask(n, u);
    for (std::size_t v = 0; v < k; ++v) {
      q.leq.set(u, v, (u & ~v) == 0);
      q.prod[u * k + v] = bool_product(s, BoolMatrix::from_mask(n, v)).mask();
    }
    q.inv[u] = bool_involution(s).mask();
  }
  return q;
}

/// Isomorphism O(pair(n)) -> M_n(2): arrow (t, s) becomes entry (t, s).
/// Returns the element map between the two tables above.
inline std::vector<std::size_t> pair_groupoid_to_relations(std::size_t n) {
  const FiniteGroupoid g = pair_groupoid(n);
  const std::size_t m = g.arrows.size();
  std::vector<std::size_t> h(std::size_t(1) << m);
  for (std::size_t u = 0; u < h.size(); ++u) {
    BoolMatrix rel(n);
    for (std::size_t a = 0; a < m; ++a)
      if (u >> a & 1U)
        rel.set(g.arrows[a].tgt, g.arrows[a].src);
    h[u] = rel.mask();
  }
  return h;
}

/// Support of a subspace: (i, j) set iff some basis matrix has a
/// non-negligible (i, j) entry. A coordinate that vanishes on a basis
/// vanishes on the whole span.
inline BoolMatrix supp(const Subspace &p, Tolerance tol = {}) {
  const std::size_t n = p.ambient();
  BoolMatrix s(n);
  for (const auto &b : p.basis())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!tol.negligible(std::abs(b(Eigen::Index(i), Eigen::Index(j)))))
          s.set(i, j);
  return s;
}

/// Matrices vanishing outside u: the span of E_ij with u_ij = 1.
inline Subspace iota(const BoolMatrix &u, Tolerance tol = {}) {
  const std::size_t n = u.size();
  SubspaceBuilder b(n, tol);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (u(i, j))
        b.offer(matrix_unit(n, i, j));
  return std::move(b).build();
}

} // namespace mslab
