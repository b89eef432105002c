#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mslab/subspace.hpp"

namespace mslab {

using Rng = std::mt19937_64;

/// Gaussian complex matrix. With `sparse`, each entry is zeroed with
/// probability 1/2 so supports vary.
inline ComplexMatrix random_matrix(Rng &rng, std::size_t n, bool sparse = false) {
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution keep(0.5);
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(i, j) = (!sparse || keep(rng)) ? Complex(re, im) : Complex(0, 0);
    }
  return m;
}

/// Span of 0..max_generators random (optionally sparse) matrices.
inline Subspace random_subspace(Rng &rng, std::size_t n, std::size_t max_generators,
                                bool sparse = false, Tolerance tol = {}) {
  std::uniform_int_distribution<std::size_t> count(0, max_generators);
  std::vector<ComplexMatrix> gens;
  for (std::size_t k = count(rng); k > 0; --k)
    gens.push_back(random_matrix(rng, n, sparse));
  return canonicalize(n, gens, tol);
}

inline ComplexMatrix random_unitary(Rng &rng, std::size_t n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n));
  return qr.householderQ() * ComplexMatrix::Identity(qr.rows(), qr.cols());
}

/// U diag(1,..,1,0,..,0) V with random unitaries and rank in [1, n].
inline ComplexMatrix random_partial_isometry(Rng &rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> rank(1, n);
  ComplexMatrix d = ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(n));
  for (std::size_t i = 0, r = rank(rng); i < r; ++i)
    d(Eigen::Index(i), Eigen::Index(i)) = 1.0;
  return random_unitary(rng, n) * d * random_unitary(rng, n);
}

} // namespace mslab
