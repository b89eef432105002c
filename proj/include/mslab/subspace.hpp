#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mslab/error.hpp"
#include "mslab/tolerance.hpp"

namespace mslab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Trace inner product <A,B> = tr(A* B).
inline Complex trace_inner(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

inline ComplexMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index(n), Eigen::Index(n));
  m(Eigen::Index(i), Eigen::Index(j)) = 1.0;
  return m;
}

inline ComplexMatrix identity_matrix(std::size_t n) {
  return ComplexMatrix::Identity(Eigen::Index(n), Eigen::Index(n));
}

/// Real matrix from row literals, e.g. real_matrix({{1, 0}, {0, -1}}).
inline ComplexMatrix
real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = Eigen::Index(rows.size());
  ComplexMatrix m(n, n);
  Eigen::Index i = 0;
  for (const auto &row : rows) {
    if (Eigen::Index(row.size()) != n)
      throw Error("real_matrix: rows must form a square matrix");
    Eigen::Index j = 0;
    for (double v : row)
      m(i, j++) = v;
    ++i;
  }
  return m;
}

/// A linear subspace of M_n(C) held as an orthonormal basis under the trace
/// inner product. Values are immutable; the only way to make one with a
/// nonempty basis is canonicalize() (directly or through an operation).
class Subspace {
public:
  static Subspace zero(std::size_t n) {
    if (n == 0)
      throw Error("ambient dimension must be positive");
    return Subspace(n, {});
  }

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<ComplexMatrix> &basis() const { return basis_; }

private:
  Subspace(std::size_t n, std::vector<ComplexMatrix> basis)
      : n_(n), basis_(std::move(basis)) {}

  friend class SubspaceBuilder;

  std::size_t n_ = 0;
  std::vector<ComplexMatrix> basis_;
};

/// Sequential Gram-Schmidt with one re-orthogonalization pass. Vectors are
/// accepted in the order offered; a vector whose residual falls under
/// tol.negligible(residual, |input|) is dropped.
class SubspaceBuilder {
public:
  SubspaceBuilder(std::size_t n, Tolerance tol) : n_(n), tol_(tol) {
    if (n == 0)
      throw Error("ambient dimension must be positive");
  }

  /// Seeds with an already orthonormal basis (no re-normalization).
  SubspaceBuilder(const Subspace &start, Tolerance tol)
      : n_(start.ambient()), tol_(tol), basis_(start.basis()) {}

  bool offer(const ComplexMatrix &g) {
    if (std::size_t(g.rows()) != n_ || std::size_t(g.cols()) != n_)
      throw Error("generator dimension mismatch: expected " +
                  std::to_string(n_) + "x" + std::to_string(n_) + ", got " +
                  std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
    if (!g.allFinite())
      throw Error("generator has non-finite entries");
    if (basis_.size() == n_ * n_)
      return false;
    const double norm = g.norm();
    ComplexMatrix r = g;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto &b : basis_)
        r -= trace_inner(b, r) * b;
    const double residual = r.norm();
    if (tol_.negligible(residual, norm))
      return false;
    basis_.push_back(r / residual);
    return true;
  }

  std::size_t dim() const { return basis_.size(); }

  Subspace build() && { return Subspace(n_, std::move(basis_)); }

private:
  std::size_t n_;
  Tolerance tol_;
  std::vector<ComplexMatrix> basis_;
};

inline Subspace canonicalize(std::size_t n, std::span<const ComplexMatrix> gens,
                             Tolerance tol = {}) {
  SubspaceBuilder b(n, tol);
  for (const auto &g : gens)
    b.offer(g);
  return std::move(b).build();
}

/// Span of a nonempty generator list; the ambient dimension is read off the
/// first generator.
inline Subspace canonicalize(std::span<const ComplexMatrix> gens,
                             Tolerance tol = {}) {
  if (gens.empty())
    throw Error("canonicalize: empty generator list has no ambient dimension");
  return canonicalize(std::size_t(gens.front().rows()), gens, tol);
}

inline Subspace span_of(std::initializer_list<ComplexMatrix> gens,
                        Tolerance tol = {}) {
  return canonicalize(std::span<const ComplexMatrix>(gens.begin(), gens.size()),
                      tol);
}

inline Subspace full_space(std::size_t n, Tolerance tol = {}) {
  SubspaceBuilder b(n, tol);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b.offer(matrix_unit(n, i, j));
  return std::move(b).build();
}

namespace detail {

inline void require_same_ambient(const Subspace &p, const Subspace &q) {
  if (p.ambient() != q.ambient())
    throw Error("ambient dimension mismatch: " + std::to_string(p.ambient()) +
                " vs " + std::to_string(q.ambient()));
}

inline void require_ambient(const ComplexMatrix &a, const Subspace &p) {
  if (std::size_t(a.rows()) != p.ambient() ||
      std::size_t(a.cols()) != p.ambient())
    throw Error("matrix does not live in the subspace's ambient algebra");
}

// Orthonormal basis of the orthogonal complement of p, scanning matrix
// units in row-major order.
inline std::vector<ComplexMatrix> complement_basis(const Subspace &p,
                                                   Tolerance tol) {
  const std::size_t n = p.ambient();
  SubspaceBuilder b(p, tol);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b.offer(matrix_unit(n, i, j));
  Subspace all = std::move(b).build();
  return {all.basis().begin() + std::ptrdiff_t(p.dim()), all.basis().end()};
}

} // namespace detail

/// Orthogonal projection of a onto p.
inline ComplexMatrix project(const ComplexMatrix &a, const Subspace &p) {
  detail::require_ambient(a, p);
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto &b : p.basis())
    out += trace_inner(b, a) * b;
  return out;
}

/// Trace-norm distance from a to its orthogonal projection onto p.
inline double distance(const ComplexMatrix &a, const Subspace &p) {
  detail::require_ambient(a, p);
  ComplexMatrix r = a;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto &b : p.basis())
      r -= trace_inner(b, r) * b;
  return r.norm();
}

/// q is a subspace of p.
inline bool contains(const Subspace &p, const Subspace &q, Tolerance tol = {}) {
  detail::require_same_ambient(p, q);
  if (q.dim() > p.dim())
    return false;
  return std::all_of(q.basis().begin(), q.basis().end(), [&](const auto &v) {
    return tol.negligible(distance(v, p));
  });
}

inline bool equal(const Subspace &p, const Subspace &q, Tolerance tol = {}) {
  detail::require_same_ambient(p, q);
  return p.dim() == q.dim() && contains(p, q, tol) && contains(q, p, tol);
}

inline Subspace join(const Subspace &p, const Subspace &q, Tolerance tol = {}) {
  detail::require_same_ambient(p, q);
  SubspaceBuilder b(p.ambient(), tol);
  for (const auto &v : p.basis())
    b.offer(v);
  for (const auto &v : q.basis())
    b.offer(v);
  return std::move(b).build();
}

/// Intersection, computed as the complement of the sum of the complements.
inline Subspace meet(const Subspace &p, const Subspace &q, Tolerance tol = {}) {
  detail::require_same_ambient(p, q);
  SubspaceBuilder perp(p.ambient(), tol);
  for (const auto &v : detail::complement_basis(p, tol))
    perp.offer(v);
  for (const auto &v : detail::complement_basis(q, tol))
    perp.offer(v);
  const Subspace sum = std::move(perp).build();
  SubspaceBuilder out(p.ambient(), tol);
  for (const auto &v : detail::complement_basis(sum, tol))
    out.offer(v);
  return std::move(out).build();
}

/// PQ = span{ab : a in P, b in Q}.
inline Subspace product(const Subspace &p, const Subspace &q,
                        Tolerance tol = {}) {
  detail::require_same_ambient(p, q);
  SubspaceBuilder b(p.ambient(), tol);
  for (const auto &a : p.basis())
    for (const auto &c : q.basis())
      b.offer(a * c);
  return std::move(b).build();
}

inline Subspace involution(const Subspace &p, Tolerance tol = {}) {
  SubspaceBuilder b(p.ambient(), tol);
  for (const auto &a : p.basis())
    b.offer(a.adjoint());
  return std::move(b).build();
}

/// Unital algebra generated by the given matrices: smallest subspace that
/// contains I and the generators and is closed under products.
inline Subspace generated_algebra(std::size_t n,
                                  std::span<const ComplexMatrix> gens,
                                  Tolerance tol = {}) {
  std::vector<ComplexMatrix> all{identity_matrix(n)};
  all.insert(all.end(), gens.begin(), gens.end());
  Subspace s = canonicalize(n, all, tol);
  for (;;) {
    Subspace next = join(s, product(s, s, tol), tol);
    if (next.dim() == s.dim())
      return s;
    s = std::move(next);
  }
}

/// Orthogonal projector onto p as an n^2 x n^2 matrix acting on row-major
/// vectorized matrices. Basis independent, so usable as a canonical key.
inline ComplexMatrix projector(const Subspace &p) {
  const auto big = Eigen::Index(p.ambient() * p.ambient());
  ComplexMatrix out = ComplexMatrix::Zero(big, big);
  for (const auto &b : p.basis()) {
    Eigen::VectorXcd v(big);
    for (Eigen::Index i = 0; i < Eigen::Index(p.ambient()); ++i)
      for (Eigen::Index j = 0; j < Eigen::Index(p.ambient()); ++j)
        v(i * Eigen::Index(p.ambient()) + j) = b(i, j);
    out += v * v.adjoint();
  }
  return out;
}

/// Quantized projector entries, ordered lexicographically after the
/// dimension. Distinct subspaces differ far above the quantum, so the order
/// is deterministic and independent of how the basis was produced.
inline std::vector<long long> canonical_key(const Subspace &p,
                                            double quantum = 1e-7) {
  const ComplexMatrix proj = projector(p);
  std::vector<long long> key;
  key.reserve(std::size_t(1 + 2 * proj.size()));
  key.push_back((long long)p.dim());
  for (Eigen::Index i = 0; i < proj.rows(); ++i)
    for (Eigen::Index j = 0; j < proj.cols(); ++j) {
      key.push_back(std::llround(proj(i, j).real() / quantum));
      key.push_back(std::llround(proj(i, j).imag() / quantum));
    }
  return key;
}

/// Interning table: assigns a stable index to each distinct subspace.
/// Lookup buckets by dimension and the quantized diagonal of the projector,
/// then confirms with equal(); a miss falls back to scanning all elements of
/// the same dimension so rounding at bucket edges never duplicates.
class SubspaceTable {
public:
  explicit SubspaceTable(Tolerance tol = {}) : tol_(tol) {}

  std::optional<std::size_t> find(const Subspace &p) const {
    const auto key = bucket_key(p);
    if (auto it = buckets_.find(key); it != buckets_.end())
      for (std::size_t i : it->second)
        if (equal(elements_[i], p, tol_))
          return i;
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i].dim() == p.dim() && equal(elements_[i], p, tol_))
        return i;
    return std::nullopt;
  }

  /// Index of p, inserting it when new. Second member is true on insertion.
  std::pair<std::size_t, bool> intern(const Subspace &p) {
    if (auto i = find(p))
      return {*i, false};
    elements_.push_back(p);
    buckets_[bucket_key(p)].push_back(elements_.size() - 1);
    return {elements_.size() - 1, true};
  }

  std::size_t size() const { return elements_.size(); }
  const Subspace &operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Subspace> &elements() const { return elements_; }

private:
  static std::vector<long long> bucket_key(const Subspace &p) {
    const std::size_t big = p.ambient() * p.ambient();
    std::vector<double> diag(big, 0.0);
    for (const auto &b : p.basis())
      for (std::size_t k = 0; k < big; ++k)
        diag[k] += std::norm(b(Eigen::Index(k / p.ambient()),
                               Eigen::Index(k % p.ambient())));
    std::vector<long long> key{(long long)p.dim()};
    for (double d : diag)
      key.push_back(std::llround(d * 1e6));
    return key;
  }

  Tolerance tol_;
  std::vector<Subspace> elements_;
  std::map<std::vector<long long>, std::vector<std::size_t>> buckets_;
};

} // namespace mslab
