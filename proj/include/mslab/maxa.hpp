#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/order.hpp"
#include "mslab/subspace.hpp"

namespace mslab {

/// Named subspaces of M_n(C). `names` keeps the display order.
struct FixtureSet {
  std::size_t n = 0;
  std::vector<std::string> names;
  std::map<std::string, Subspace> named;

  const Subspace &operator[](const std::string &name) const {
    auto it = named.find(name);
    if (it == named.end())
      throw Error("unknown fixture '" + name + "'");
    return it->second;
  }

  std::vector<Subspace> elements() const {
    std::vector<Subspace> out;
    for (const auto &name : names)
      out.push_back(named.at(name));
    return out;
  }

  void add(const std::string &name, Subspace s) {
    names.push_back(name);
    named.emplace(name, std::move(s));
  }
};

inline FixtureSet spin_half_fixtures(Tolerance tol = {}) {
  FixtureSet f;
  f.n = 2;
  const ComplexMatrix i2 = identity_matrix(2);
  const ComplexMatrix up = real_matrix({{1, 0}, {0, 0}});
  const ComplexMatrix down = real_matrix({{0, 0}, {0, 1}});
  const ComplexMatrix sigma_z = real_matrix({{1, 0}, {0, -1}});
  const ComplexMatrix sigma_x = real_matrix({{0, 1}, {1, 0}});
  const ComplexMatrix x_up = real_matrix({{1, 1}, {1, 1}});
  const ComplexMatrix x_down = real_matrix({{1, -1}, {-1, 1}});

  f.add("0", Subspace::zero(2));
  f.add("e", span_of({i2}, tol));
  f.add("1", full_space(2, tol));
  f.add("z", span_of({i2, sigma_z}, tol));
  f.add("z_up", span_of({up}, tol));
  f.add("z_down", span_of({down}, tol));
  f.add("x", span_of({i2, sigma_x}, tol));
  f.add("x_up", span_of({x_up}, tol));
  f.add("x_down", span_of({x_down}, tol));
  return f;
}

inline FixtureSet spin_one_fixtures(Tolerance tol = {}) {
  FixtureSet f;
  f.n = 3;
  const double r2 = std::sqrt(2.0);
  const ComplexMatrix i3 = identity_matrix(3);
  const ComplexMatrix s_z = real_matrix({{1, 0, 0}, {0, 0, 0}, {0, 0, -1}});
  const ComplexMatrix s_x = real_matrix({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});

  f.add("z", generated_algebra(3, std::vector<ComplexMatrix>{s_z}, tol));
  f.add("z_minus", span_of({real_matrix({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}})}, tol));
  f.add("z_zero", span_of({real_matrix({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}})}, tol));
  f.add("z_plus", span_of({real_matrix({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}})}, tol));
  f.add("x", generated_algebra(3, std::vector<ComplexMatrix>{s_x}, tol));
  f.add("x_minus",
        span_of({real_matrix({{1, -r2, 1}, {-r2, 2, -r2}, {1, -r2, 1}})}, tol));
  f.add("x_zero", span_of({real_matrix({{1, 0, -1}, {0, 0, 0}, {-1, 0, 1}})}, tol));
  f.add("x_plus",
        span_of({real_matrix({{1, r2, 1}, {r2, 2, r2}, {1, r2, 1}})}, tol));
  f.add("e", span_of({i3}, tol));
  f.add("0", Subspace::zero(3));
  f.add("1", full_space(3, tol));
  return f;
}

/// Cover edges (lower, upper) of containment restricted to `elements`.
/// Throws if two elements are equal.
inline std::vector<std::pair<std::size_t, std::size_t>>
hasse(const std::vector<Subspace> &elements, Tolerance tol = {}) {
  const std::size_t k = elements.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (equal(elements[i], elements[j], tol))
        throw Error("hasse: elements " + std::to_string(i) + " and " +
                    std::to_string(j) + " are equal");
  Relation leq(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      leq.set(i, j, contains(elements[j], elements[i], tol));
  return cover_relation(leq);
}

struct DistributivityWitness {
  Subspace lhs;
  Subspace rhs;
  bool distributive;
};

/// lhs = (p ^ m) v (p ^ n), rhs = p ^ (m v n).
inline DistributivityWitness distributivity_witness(const Subspace &p,
                                                    const Subspace &m,
                                                    const Subspace &n,
                                                    Tolerance tol = {}) {
  Subspace lhs = join(meet(p, m, tol), meet(p, n, tol), tol);
  Subspace rhs = meet(p, join(m, n, tol), tol);
  const bool d = equal(lhs, rhs, tol);
  return {std::move(lhs), std::move(rhs), d};
}

} // namespace mslab
