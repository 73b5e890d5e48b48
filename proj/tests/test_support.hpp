#pragma once

#include <random>
#include <vector>

#include "porc/matrix.hpp"

namespace porc::testing_support {

/// Random integer matrix of determinant 1, built from elementary row operations.
inline IntMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps = 12) {
  IntMatrix u = int_identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> mult(-3, 3);
  for (int s = 0; s < steps; ++s) {
    auto i = idx(rng), j = idx(rng);
    if (i == j) continue;
    int c = mult(rng);
    for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
  }
  return u;
}

/// Complete family of orthogonal idempotents: coordinate projections grouped
/// into `count` nonempty blocks, conjugated by a random unimodular matrix.
inline std::vector<RatMatrix> random_idempotent_family(std::mt19937& rng, std::size_t n, std::size_t count) {
  RationalField f;
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i < count ? i : std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
  std::shuffle(owner.begin(), owner.end(), rng);
  auto p = to_rational(random_unimodular(rng, n));
  auto pinv = inverse(f, p);
  std::vector<RatMatrix> out;
  for (std::size_t c = 0; c < count; ++c) {
    RatMatrix d = zeros(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
      if (owner[i] == c) d(i, i) = 1;
    out.push_back(mat_mul(f, mat_mul(f, pinv, d), p));
  }
  return out;
}

}  // namespace porc::testing_support
