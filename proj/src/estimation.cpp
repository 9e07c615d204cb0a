#include "netfolio/estimation.hpp"

#include <algorithm>
#include <cmath>

// ============================================================================
// Shrinkage intensity notes
// ----------------------------------------------------------------------------
// The intensity follows Ledoit & Wolf, "Honey, I Shrunk the Sample Covariance
// Matrix" (J. Portfolio Management, 2004), constant-correlation target.
// With x the demeaned T x N window and, *internally to this estimator only*,
// s = x'x / T (divisor 1/T as the reference prescribes; the public sample
// covariance uses the unbiased T-1 divisor):
//
//   rho_bar  = average off-diagonal sample correlation
//   f        = target: f_ii = s_ii, f_ij = rho_bar * sqrt(s_ii s_jj)
//   pi_hat   = sum_ij [ (1/T) sum_t x_ti^2 x_tj^2  -  s_ij^2 ]
//   theta_ij = (1/T) sum_t x_ti^3 x_tj  -  s_ii s_ij          (i != j)
//   rho_hat  = sum_i pi_hat_ii  +  rho_bar * sum_{i != j} sqrt(s_jj/s_ii) theta_ij
//   gamma_hat= || s - f ||_F^2
//   kappa    = clamp( (pi_hat - rho_hat) / gamma_hat / T , 0, 1 )
//
// Because correlations are invariant under a uniform rescaling of the
// covariance, the internal 1/T quantities give gamma_hat = 0 exactly when the
// public (T-1) target equals the public sample; that degenerate case returns
// kappa = 0.
// ============================================================================

namespace netfolio {

namespace {

void require_window(const Eigen::Ref<const Matrix>& window, const char* op) {
    if (window.rows() < 2) throw DataError(std::string(op) + " needs a window of at least 2 rows");
    if (window.cols() < 1) throw DataError(std::string(op) + " needs at least 1 asset");
}

Vector positive_sd(const Matrix& sigma, const char* op) {
    const Index n = sigma.rows();
    Vector sd(n);
    for (Index i = 0; i < n; ++i) {
        const double v = sigma(i, i);
        if (!(v > 0.0))
            throw DataError(std::string(op) + ": zero variance in column " + std::to_string(i));
        sd(i) = std::sqrt(v);
    }
    return sd;
}

double mean_off_diagonal_correlation(const Matrix& sigma, const Vector& sd) {
    const Index n = sigma.rows();
    double sum = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j) sum += sigma(i, j) / (sd(i) * sd(j));
    return sum / static_cast<double>(n * (n - 1));
}

}  // namespace

std::string estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Sample: return "sample";
        case EstimatorKind::ConstantCorrelation: return "constant_correlation";
        case EstimatorKind::Shrinkage: return "shrinkage";
    }
    return "unknown";
}

MeanEstimate sample_mean(const Eigen::Ref<const Matrix>& window) {
    require_window(window, "sample mean");
    return MeanEstimate{window.colwise().mean().transpose()};
}

CovarianceEstimate sample_covariance(const Eigen::Ref<const Matrix>& window) {
    require_window(window, "sample covariance");
    const double t = static_cast<double>(window.rows());
    Matrix centered = window.rowwise() - window.colwise().mean();
    Matrix sigma = (centered.adjoint() * centered) / (t - 1.0);
    sigma = ((sigma + sigma.transpose()) * 0.5).eval();  // enforce exact symmetry
    CovarianceEstimate out;
    out.sigma = std::move(sigma);
    out.estimator = EstimatorKind::Sample;
    out.vols = out.sigma.diagonal().array().sqrt();
    return out;
}

CovarianceEstimate constant_correlation_covariance(const CovarianceEstimate& sample) {
    const Index n = sample.sigma.rows();
    if (n < 2) throw DataError("constant-correlation target needs at least 2 assets");
    Vector sd = positive_sd(sample.sigma, "constant-correlation target");

    CovarianceEstimate out;
    out.estimator = EstimatorKind::ConstantCorrelation;
    if (n == 2) {
        out.sigma = sample.sigma;  // single pair: the average is the pair itself
    } else {
        const double rho_bar = mean_off_diagonal_correlation(sample.sigma, sd);
        // Filled per pair and mirrored so the result is symmetric to the bit;
        // a scaled outer-product expression is not (the scalar folds into one
        // factor and rounds differently on each side of the diagonal).
        out.sigma = Matrix(n, n);
        out.sigma.diagonal() = sample.sigma.diagonal();
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j)
                out.sigma(i, j) = out.sigma(j, i) = rho_bar * (sd(i) * sd(j));
    }
    out.vols = std::move(sd);
    return out;
}

ShrinkageDiagnostics shrinkage_diagnostics(const Eigen::Ref<const Matrix>& window) {
    require_window(window, "shrinkage intensity");
    const Index n = window.cols();
    if (n < 2) throw DataError("shrinkage intensity needs at least 2 assets");
    const double t = static_cast<double>(window.rows());

    Matrix x = window.rowwise() - window.colwise().mean();
    Matrix s = (x.adjoint() * x) / t;  // internal 1/T divisor, see notes above
    s = ((s + s.transpose()) * 0.5).eval();
    Vector var = s.diagonal();
    Vector sd = positive_sd(s, "shrinkage intensity");

    const double rho_bar = mean_off_diagonal_correlation(s, sd);
    Matrix f;
    if (n == 2) {
        f = s;  // target coincides with the sample matrix, exactly
    } else {
        f = Matrix(n, n);
        f.diagonal() = var;
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) f(i, j) = f(j, i) = rho_bar * (sd(i) * sd(j));
    }

    ShrinkageDiagnostics d;

    Matrix x2 = x.array().square();
    Matrix phi = (x2.adjoint() * x2) / t - s.array().square().matrix();
    d.pi_hat = phi.sum();

    Matrix x3 = x.array().cube();
    Matrix theta = (x3.adjoint() * x) / t - var.replicate(1, n).cwiseProduct(s);
    theta.diagonal().setZero();
    double cross = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j) cross += (sd(j) / sd(i)) * theta(i, j);
    d.rho_hat = phi.diagonal().sum() + rho_bar * cross;

    d.gamma_hat = (s - f).squaredNorm();
    if (d.gamma_hat == 0.0) return d;  // raw/kappa stay 0: shrinkage is a no-op

    d.raw = (d.pi_hat - d.rho_hat) / d.gamma_hat / t;
    d.kappa = std::clamp(d.raw, 0.0, 1.0);
    return d;
}

double shrinkage_intensity(const Eigen::Ref<const Matrix>& window,
                           const CovarianceEstimate& sample,
                           const CovarianceEstimate& target) {
    const Index n = window.cols();
    if (sample.sigma.rows() != n || sample.sigma.cols() != n ||
        target.sigma.rows() != n || target.sigma.cols() != n)
        throw ConfigError("shrinkage intensity: dimension mismatch between window and estimates");
    if ((sample.sigma - target.sigma).squaredNorm() == 0.0) return 0.0;
    return shrinkage_diagnostics(window).kappa;
}

CovarianceEstimate shrink_covariance(const CovarianceEstimate& sample,
                                     const CovarianceEstimate& target, double kappa) {
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw ConfigError("shrinkage weight must lie in [0, 1], got " + std::to_string(kappa));
    if (sample.sigma.rows() != target.sigma.rows() || sample.sigma.cols() != target.sigma.cols())
        throw ConfigError("shrinkage: sample and target shapes differ");
    CovarianceEstimate out;
    out.sigma = kappa * target.sigma + (1.0 - kappa) * sample.sigma;
    out.estimator = EstimatorKind::Shrinkage;
    out.kappa = kappa;
    out.vols = out.sigma.diagonal().array().sqrt();
    return out;
}

CovarianceEstimate shrinkage_covariance(const Eigen::Ref<const Matrix>& window) {
    CovarianceEstimate sample = sample_covariance(window);
    CovarianceEstimate target = constant_correlation_covariance(sample);
    const double kappa = shrinkage_intensity(window, sample, target);
    return shrink_covariance(sample, target, kappa);
}

}  // namespace netfolio
