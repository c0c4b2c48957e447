#pragma once

#include "qecool/qcore.hpp"

#include <random>
#include <vector>

namespace qecool::testing {

inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex{normal(rng), normal(rng)};
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // fix phases so Q is exactly unitary regardless of R's signs
  return q;
}

/// Mixed-unitary channel: {sqrt(w_i) U_i} with convex weights.
inline KrausChannel random_mixed_unitary_channel(int n_qubits, int n_ops,
                                                 std::mt19937_64& rng) {
  const int dim = 1 << n_qubits;
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(n_ops));
  double total = 0.0;
  for (auto& w : weights) {
    w = uniform(rng);
    total += w;
  }
  std::vector<Matrix> ops;
  ops.reserve(weights.size());
  for (double w : weights)
    ops.push_back(std::sqrt(w / total) * random_unitary(dim, rng));
  return KrausChannel(std::move(ops));
}

}  // namespace qecool::testing
