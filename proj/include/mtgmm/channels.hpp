#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mtgmm/ensemble.hpp"
#include "mtgmm/quadrature.hpp"

namespace mtgmm {

class NegativeInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rademacher-channel overlap F(q) = E[tanh(sqrt(q) Z + q)], Z ~ N(0,1).
/// Nondecreasing in q, valued in [0,1); for large q the quadrature result
/// clamps to 1 - eps rather than reaching 1.
inline double overlap_F(double q) {
  if (q < 0.0 || std::isnan(q)) {
    throw NegativeInput("overlap_F: q must be nonnegative");
  }
  const double root = std::sqrt(q);
  const double value = standard_normal_rule().expectation(
      [&](double z) { return std::tanh(root * z + q); });
  constexpr double kUpper = 1.0 - std::numeric_limits<double>::epsilon();
  return std::clamp(value, 0.0, kUpper);
}

/// dF/dq in the integration-by-parts form E[sech^2(X)(1 - tanh(X))],
/// X = sqrt(q) Z + q, which stays finite as q -> 0 (F'(0) = 1).
inline double overlap_F_derivative(double q) {
  if (q < 0.0 || std::isnan(q)) {
    throw NegativeInput("overlap_F_derivative: q must be nonnegative");
  }
  const double root = std::sqrt(q);
  return standard_normal_rule().expectation([&](double z) {
    const double t = std::tanh(root * z + q);
    return (1.0 - t * t) * (1.0 - t);
  });
}

/// Bayes risk of the Rademacher channel at SNR q: P(Z > sqrt(q)),
/// the error rate of sgn(Y). Equals 0.5 exactly at q = 0.
inline double rademacher_bayes_risk(double q) {
  if (q < 0.0 || std::isnan(q)) {
    throw NegativeInput("rademacher_bayes_risk: q must be nonnegative");
  }
  return 0.5 * std::erfc(std::sqrt(0.5 * q));
}

/// Posterior mean of the Rademacher input given channel output y at SNR q.
inline double mmse_rademacher(double y, double q) {
  if (q < 0.0 || std::isnan(q)) {
    throw NegativeInput("mmse_rademacher: q must be nonnegative");
  }
  return std::tanh(std::sqrt(q) * y);
}

namespace detail {

inline void check_channel_args(const Matrix& M, const Vector& snr,
                               const char* who) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument(std::string(who) + ": M must be square");
  }
  if (snr.size() != M.rows()) {
    throw std::invalid_argument(std::string(who) +
                                ": snr length must match M");
  }
  for (Eigen::Index t = 0; t < snr.size(); ++t) {
    if (snr[t] < 0.0 || std::isnan(snr[t])) {
      throw NegativeInput(std::string(who) + ": snr[" + std::to_string(t) +
                          "] must be nonnegative");
    }
  }
}

/// Cholesky factor of I + D^{1/2} M D^{1/2}; the symmetric form keeps the
/// solve well conditioned for any PSD M and nonnegative snr.
inline Eigen::LLT<Matrix> factor_channel_gram(const Matrix& M,
                                              const Vector& root_snr,
                                              const char* who) {
  const Eigen::Index T = M.rows();
  Matrix gram = root_snr.asDiagonal() * M * root_snr.asDiagonal();
  gram = 0.5 * (gram + gram.transpose()).eval();
  gram += Matrix::Identity(T, T);
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularSystem(std::string(who) +
                         ": I + D^{1/2} M D^{1/2} is not factorizable");
  }
  return llt;
}

}  // namespace detail

/// Full overlap matrix M - M(I + D_snr M)^{-1} of the jointly Gaussian
/// channel Y = D_snr^{1/2} X + Z, X ~ N(0, M), computed in the equivalent
/// symmetric form M S (I + S M S)^{-1} S M with S = D_snr^{1/2}.
inline Matrix gaussian_overlap_matrix(const Matrix& M, const Vector& snr) {
  detail::check_channel_args(M, snr, "gaussian_overlap_matrix");
  const Vector root = snr.cwiseSqrt();
  const auto llt = detail::factor_channel_gram(M, root, "gaussian_overlap_matrix");
  const Matrix SM = root.asDiagonal() * M;
  const Matrix Q = SM.transpose() * llt.solve(SM);
  return 0.5 * (Q + Q.transpose());
}

/// Per-coordinate overlaps E[X_t Xhat_t] = diag(M - M(I + D_snr M)^{-1}).
/// Each entry lies in [0, M_tt]; tiny negative roundoff is clamped to 0.
inline Vector gaussian_vector_overlap(const Matrix& M, const Vector& snr) {
  return gaussian_overlap_matrix(M, snr).diagonal().cwiseMax(0.0);
}

/// MMSE mixing matrix B = M D^{1/2} (I + D^{1/2} M D^{1/2})^{-1} with
/// D = D_snr, so that Xhat = B Y.
inline Matrix gaussian_vector_mmse_matrix(const Matrix& M, const Vector& snr) {
  detail::check_channel_args(M, snr, "gaussian_vector_mmse_matrix");
  const Vector root = snr.cwiseSqrt();
  const auto llt =
      detail::factor_channel_gram(M, root, "gaussian_vector_mmse_matrix");
  const Matrix SM = root.asDiagonal() * M;
  return llt.solve(SM).transpose();
}

}  // namespace mtgmm
