#pragma once

#include "netfolio/market_data.hpp"

namespace netfolio {

enum class EstimatorKind { Sample, ConstantCorrelation, Shrinkage };

std::string estimator_name(EstimatorKind kind);

struct MeanEstimate {
    Vector mu;  // per-day expected log-returns, one entry per asset
};

struct CovarianceEstimate {
    Matrix sigma;  // N x N, symmetric positive semidefinite
    EstimatorKind estimator = EstimatorKind::Sample;
    double kappa = 0.0;  // shrinkage intensity; meaningful only for Shrinkage
    Vector vols;         // sqrt(diag(sigma))
};

// Arithmetic column means. Requires >= 2 rows.
MeanEstimate sample_mean(const Eigen::Ref<const Matrix>& window);

// Unbiased sample covariance (divisor T-1). Requires >= 2 rows. Zero-variance
// columns are allowed here; estimators that need correlations reject them.
CovarianceEstimate sample_covariance(const Eigen::Ref<const Matrix>& window);

// Constant-correlation target: every off-diagonal correlation replaced by
// rho_bar, the average of the off-diagonal sample correlations; the diagonal
// is preserved exactly. For N == 2 the average over the single pair is that
// pair's own correlation, so the target is returned as an exact copy of the
// sample matrix (no divide/multiply round trip).
CovarianceEstimate constant_correlation_covariance(const CovarianceEstimate& sample);

// Intermediate quantities of the Ledoit-Wolf intensity, exposed for testing.
// See the module notes in estimation.cpp for the estimator formulas.
struct ShrinkageDiagnostics {
    double pi_hat = 0.0;     // summed asymptotic variances of sample entries
    double rho_hat = 0.0;    // covariance of estimation errors, sample vs target
    double gamma_hat = 0.0;  // squared Frobenius distance between target and sample
    double raw = 0.0;        // (pi_hat - rho_hat) / gamma_hat / T, unclamped
    double kappa = 0.0;      // raw clamped to [0, 1]
};

ShrinkageDiagnostics shrinkage_diagnostics(const Eigen::Ref<const Matrix>& window);

// Ledoit-Wolf asymptotically optimal intensity for shrinking the sample
// covariance toward the constant-correlation target, clamped to [0, 1].
// A target identical to the sample (gamma_hat = 0) yields 0: either endpoint
// gives the same matrix, so shrinkage is a no-op rather than an error.
double shrinkage_intensity(const Eigen::Ref<const Matrix>& window,
                           const CovarianceEstimate& sample,
                           const CovarianceEstimate& target);

// Entrywise convex combination kappa * target + (1 - kappa) * sample.
CovarianceEstimate shrink_covariance(const CovarianceEstimate& sample,
                                     const CovarianceEstimate& target, double kappa);

// Convenience chain: sample -> constant-correlation target -> intensity -> shrink.
CovarianceEstimate shrinkage_covariance(const Eigen::Ref<const Matrix>& window);

}  // namespace netfolio
