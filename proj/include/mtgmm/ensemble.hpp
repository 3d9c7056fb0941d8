#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mtgmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ConfigErrorCode {
  NonSymmetric,
  NonUnitDiagonal,
  NotPositiveDefinite,
  OutOfRangeScalar,
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(ConfigErrorCode code, const std::string& message)
      : std::invalid_argument(message), code_(code) {}
  ConfigErrorCode code() const { return code_; }

 private:
  ConfigErrorCode code_;
};

/// Full parameter set of a multitask ensemble: task-correlation matrix C,
/// per-task noise scale sigma, sampling ratios alpha, labeled fractions eta.
/// An infinite sigma_t encodes a zero-SNR task (lambda_t = 0), which only
/// makes sense for phase/risk sweeps, never for data generation.
struct EnsembleConfig {
  Matrix C;
  Vector sigma;
  Vector alpha;
  Vector eta;

  int tasks() const { return static_cast<int>(sigma.size()); }

  /// Per-task SNR lambda_t = 1/sigma_t^2.
  Vector lambda() const {
    return sigma.array().square().inverse().matrix();
  }
};

/// Convenience constructor for SNR-parameterized configs (lambda_t >= 0).
inline EnsembleConfig make_config_from_lambda(Matrix C, const Vector& lambda,
                                              Vector alpha, Vector eta) {
  EnsembleConfig cfg;
  cfg.C = std::move(C);
  cfg.sigma = lambda.array().sqrt().inverse().matrix();
  cfg.alpha = std::move(alpha);
  cfg.eta = std::move(eta);
  return cfg;
}

/// M_tt' = C_tt'/(sigma_t sigma_t') and the SNR vector lambda_t = M_tt.
struct EffectiveMatrices {
  Matrix M;
  Vector lambda;
};

/// An EnsembleConfig the validator has certified: C symmetric with unit
/// diagonal and positive semidefinite (smallest eigenvalue above
/// -1e-10 * largest), scalars in range. Immutable; safe to share across
/// threads.
class ValidatedEnsemble {
 public:
  const EnsembleConfig& config() const { return config_; }
  int tasks() const { return config_.tasks(); }
  const Matrix& C() const { return config_.C; }
  const Vector& sigma() const { return config_.sigma; }
  const Vector& alpha() const { return config_.alpha; }
  const Vector& eta() const { return config_.eta; }
  const Vector& lambda() const { return lambda_; }
  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }
  bool unsupervised() const { return (config_.eta.array() == 0.0).all(); }

  friend ValidatedEnsemble validate(const EnsembleConfig& config);

 private:
  ValidatedEnsemble(EnsembleConfig config, double min_eig, double max_eig)
      : config_(std::move(config)),
        lambda_(config_.lambda()),
        min_eig_(min_eig),
        max_eig_(max_eig) {}

  EnsembleConfig config_;
  Vector lambda_;
  double min_eig_;
  double max_eig_;
};

namespace detail {
inline std::string entry_name(const char* field, int i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}
inline std::string entry_name(const char* field, int i, int j) {
  return std::string(field) + "[" + std::to_string(i) + "][" +
         std::to_string(j) + "]";
}
}  // namespace detail

/// Checks every model constraint and returns the certified ensemble.
/// The spectrum check accepts singular-but-PSD C (e.g. identical tasks,
/// C all-ones), which the reductions of identical-task ensembles need.
inline ValidatedEnsemble validate(const EnsembleConfig& config) {
  const int T = config.tasks();
  if (T < 1) {
    throw std::invalid_argument("ensemble must contain at least one task");
  }
  if (config.C.rows() != T || config.C.cols() != T) {
    throw std::invalid_argument("C must be " + std::to_string(T) + "x" +
                                std::to_string(T) +
                                " to match the scalar vectors");
  }
  if (config.alpha.size() != T || config.eta.size() != T) {
    throw std::invalid_argument("alpha/eta length must equal the task count");
  }

  constexpr double kEntryTol = 1e-12;
  for (int i = 0; i < T; ++i) {
    for (int j = i + 1; j < T; ++j) {
      if (std::abs(config.C(i, j) - config.C(j, i)) > kEntryTol) {
        throw ConfigError(ConfigErrorCode::NonSymmetric,
                          "C is not symmetric at " +
                              detail::entry_name("C", i, j));
      }
    }
    if (std::abs(config.C(i, i) - 1.0) > kEntryTol) {
      throw ConfigError(ConfigErrorCode::NonUnitDiagonal,
                        detail::entry_name("C", i, i) + " = " +
                            std::to_string(config.C(i, i)) + ", expected 1");
    }
  }

  for (int t = 0; t < T; ++t) {
    const double s = config.sigma(t);
    if (std::isnan(s) || s <= 0.0) {
      throw ConfigError(ConfigErrorCode::OutOfRangeScalar,
                        detail::entry_name("sigma", t) +
                            " must be positive");
    }
    const double a = config.alpha(t);
    if (!std::isfinite(a) || a <= 0.0) {
      throw ConfigError(ConfigErrorCode::OutOfRangeScalar,
                        detail::entry_name("alpha", t) +
                            " must be a positive real");
    }
    const double e = config.eta(t);
    if (!(e >= 0.0 && e <= 1.0)) {
      throw ConfigError(ConfigErrorCode::OutOfRangeScalar,
                        detail::entry_name("eta", t) + " must lie in [0,1]");
    }
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(config.C);
  if (es.info() != Eigen::Success) {
    throw ConfigError(ConfigErrorCode::NotPositiveDefinite,
                      "eigendecomposition of C failed");
  }
  const double min_eig = es.eigenvalues().minCoeff();
  const double max_eig = es.eigenvalues().maxCoeff();
  if (min_eig < -1e-10 * std::max(max_eig, 1.0)) {
    throw ConfigError(ConfigErrorCode::NotPositiveDefinite,
                      "C is not positive semidefinite: smallest eigenvalue " +
                          std::to_string(min_eig));
  }

  EnsembleConfig canonical = config;
  canonical.C = 0.5 * (config.C + config.C.transpose());
  canonical.C.diagonal().setOnes();
  return ValidatedEnsemble(std::move(canonical), min_eig, max_eig);
}

/// M = D_{sqrt(lambda)} C D_{sqrt(lambda)}, symmetric by construction,
/// with M_tt = lambda_t.
inline EffectiveMatrices effective_matrices(const ValidatedEnsemble& ensemble) {
  const Vector root = ensemble.lambda().cwiseSqrt();
  EffectiveMatrices eff;
  eff.M = root.asDiagonal() * ensemble.C() * root.asDiagonal();
  eff.lambda = ensemble.lambda();
  return eff;
}

}  // namespace mtgmm
