#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "mtgmm/ensemble.hpp"

namespace mtgmm {

/// Nodes and weights for computing E[g(Z)], Z ~ N(0,1).
struct QuadratureRule {
  Vector nodes;
  Vector weights;

  template <typename Fn>
  double expectation(Fn&& g) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
      acc += weights[i] * g(nodes[i]);
    }
    return acc;
  }
};

/// Gauss-Hermite rule in the probabilists' normalization, built by
/// Golub-Welsch: the Jacobi matrix of the three-term recurrence has zero
/// diagonal and off-diagonal sqrt(k); its eigenvalues are the nodes and the
/// squared first eigenvector components the weights.
inline QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1) {
    throw std::invalid_argument("quadrature rule needs at least one node");
  }
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = es.eigenvectors().row(0).array().square().matrix();
  rule.weights /= rule.weights.sum();
  return rule;
}

/// Fixed 61-node rule shared by all overlap evaluations; keeps results
/// bit-reproducible across runs.
inline const QuadratureRule& standard_normal_rule() {
  static const QuadratureRule rule = gauss_hermite_rule(61);
  return rule;
}

}  // namespace mtgmm
