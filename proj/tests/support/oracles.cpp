#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace testsupport {

using netfolio::Index;
using netfolio::Matrix;
using netfolio::Vector;

double grid_search_min_qp(const Matrix& a, const Vector& b, double step) {
    if (a.rows() != 3 || a.cols() != 3 || b.size() != 3)
        throw std::invalid_argument("grid_search_min_qp: oracle is fixed to 3 assets");
    const int ticks = static_cast<int>(std::lround(1.0 / step));
    double best = std::numeric_limits<double>::infinity();
    Vector x(3);
    for (int k1 = 0; k1 <= ticks; ++k1) {
        for (int k2 = 0; k2 <= ticks - k1; ++k2) {
            x(0) = static_cast<double>(k1) / ticks;
            x(1) = static_cast<double>(k2) / ticks;
            x(2) = std::max(0.0, 1.0 - x(0) - x(1));
            const double value = x.dot(a * x) - b.dot(x);
            best = std::min(best, value);
        }
    }
    return best;
}

double grid_search_max_dr(const Matrix& m, double step) {
    if (m.rows() != 3 || m.cols() != 3)
        throw std::invalid_argument("grid_search_max_dr: oracle is fixed to 3 assets");
    const Vector sd = m.diagonal().cwiseSqrt();
    const int ticks = static_cast<int>(std::lround(1.0 / step));
    double best = -std::numeric_limits<double>::infinity();
    Vector x(3);
    for (int k1 = 0; k1 <= ticks; ++k1) {
        for (int k2 = 0; k2 <= ticks - k1; ++k2) {
            x(0) = static_cast<double>(k1) / ticks;
            x(1) = static_cast<double>(k2) / ticks;
            x(2) = std::max(0.0, 1.0 - x(0) - x(1));
            const double variance = x.dot(m * x);
            if (variance <= 0.0) continue;
            best = std::max(best, sd.dot(x) / std::sqrt(variance));
        }
    }
    return best;
}

double contribution_spread(const Matrix& m, const Vector& x) {
    const Vector c = x.cwiseProduct(m * x);
    const double mean = c.mean();
    if (mean <= 0.0) return std::numeric_limits<double>::infinity();
    return (c.maxCoeff() - c.minCoeff()) / mean;
}

namespace {

enum class SweepStatus { Converged, Nonpositive, Exhausted };

// One run of the damped multiplicative iteration on `m` starting from `x`.
// On Converged, x holds the weights; Nonpositive means a risk contribution
// went nonpositive along the way.
SweepStatus erc_sweep(const Matrix& m, Vector& x, double tol, int max_iter, double eta) {
    const Index n = m.rows();
    for (int iter = 0; iter < max_iter; ++iter) {
        const Vector c = x.cwiseProduct(m * x);
        if (c.minCoeff() <= 0.0) return SweepStatus::Nonpositive;
        const double mean = c.mean();
        if ((c.maxCoeff() - c.minCoeff()) / mean <= tol) return SweepStatus::Converged;
        for (Index i = 0; i < n; ++i) x(i) *= std::pow(mean / c(i), eta);
        x /= x.sum();
    }
    return SweepStatus::Exhausted;
}

}  // namespace

Vector erc_fixed_point(const Matrix& m, double tol, int max_iter, double eta) {
    Vector x = m.diagonal().cwiseSqrt().cwiseInverse();
    x /= x.sum();
    switch (erc_sweep(m, x, tol, max_iter, eta)) {
        case SweepStatus::Converged: return x;
        case SweepStatus::Exhausted: throw std::runtime_error("erc_fixed_point: did not converge");
        case SweepStatus::Nonpositive: break;
    }

    // Strong anti-correlations can push a contribution x_i(Mx)_i nonpositive
    // during the plain iteration, or even at the inverse-vol start.  The ERC
    // weights still exist for a positive-definite matrix, so walk a homotopy
    // from the diagonal (where inverse-vol weights are exact) to the full
    // matrix, warm-starting every leg from the previous solution.  When a leg
    // fails, halve both the continuation step and the damping: near the
    // hardest matrices the fixed point is repelling at large eta, so only a
    // smaller eta (not a smaller step) restores local convergence.
    const Matrix d = Matrix(m.diagonal().asDiagonal());
    Vector good = m.diagonal().cwiseSqrt().cwiseInverse();
    good /= good.sum();
    double t_good = 0.0;
    double step = 0.125;
    double damp = eta;
    while (t_good < 1.0) {
        if (step < 1e-4 || damp < 1e-4)
            throw std::runtime_error("erc_fixed_point: continuation stalled");
        const double t = std::min(1.0, t_good + step);
        const Matrix mt = (1.0 - t) * d + t * m;
        Vector trial = good;
        if (erc_sweep(mt, trial, tol, max_iter, damp) == SweepStatus::Converged) {
            good = trial;
            t_good = t;
        } else {
            step *= 0.5;
            damp *= 0.5;
        }
    }
    return good;
}

double lw_intensity_oracle(const Matrix& window) {
    const int t_obs = static_cast<int>(window.rows());
    const int n = static_cast<int>(window.cols());
    if (t_obs < 2 || n < 2)
        throw std::invalid_argument("lw_intensity_oracle: window too small");
    const double t = static_cast<double>(t_obs);

    // Demean.
    std::vector<std::vector<double>> y(static_cast<std::size_t>(t_obs),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j) {
        double mean = 0.0;
        for (int r = 0; r < t_obs; ++r) mean += window(r, j);
        mean /= t;
        for (int r = 0; r < t_obs; ++r)
            y[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] = window(r, j) - mean;
    }
    auto yy = [&](int r, int j) { return y[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]; };

    // Sample second moments with divisor T.
    std::vector<std::vector<double>> s(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int r = 0; r < t_obs; ++r) acc += yy(r, i) * yy(r, j);
            s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc / t;
        }
    auto ss = [&](int i, int j) { return s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };

    // Average off-diagonal correlation.
    double rbar = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) rbar += ss(i, j) / std::sqrt(ss(i, i) * ss(j, j));
    rbar /= static_cast<double>(n) * static_cast<double>(n - 1);

    // pi-hat: asymptotic variance of every sample covariance entry.
    double pi_hat = 0.0;
    std::vector<double> pi_diag(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int r = 0; r < t_obs; ++r) {
                const double dev = yy(r, i) * yy(r, j) - ss(i, j);
                acc += dev * dev;
            }
            acc /= t;
            pi_hat += acc;
            if (i == j) pi_diag[static_cast<std::size_t>(i)] = acc;
        }

    // rho-hat: diagonal pieces plus the constant-correlation cross terms.
    double rho_hat = 0.0;
    for (int i = 0; i < n; ++i) rho_hat += pi_diag[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double theta = 0.0;
            for (int r = 0; r < t_obs; ++r)
                theta += (yy(r, i) * yy(r, i) - ss(i, i)) * (yy(r, i) * yy(r, j) - ss(i, j));
            theta /= t;
            rho_hat += rbar * std::sqrt(ss(j, j) / ss(i, i)) * theta;
        }

    // gamma-hat: squared distance between target and sample.
    double gamma_hat = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double f = i == j ? ss(i, i) : rbar * std::sqrt(ss(i, i) * ss(j, j));
            const double diff = f - ss(i, j);
            gamma_hat += diff * diff;
        }

    if (gamma_hat == 0.0) return 0.0;
    const double kappa = (pi_hat - rho_hat) / gamma_hat / t;
    return std::clamp(kappa, 0.0, 1.0);
}

Vector naive_threshold_clustering(const Matrix& weights, double s) {
    const int n = static_cast<int>(weights.rows());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n),
                                      std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && weights(i, j) >= s) adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    auto edge = [&](int i, int j) { return adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };

    Vector out = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        int degree = 0;
        for (int j = 0; j < n; ++j) degree += edge(i, j);
        if (degree < 2) continue;
        int triangles = 0;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (edge(i, j) && edge(i, k) && edge(j, k)) ++triangles;
        out(i) = 2.0 * triangles / (static_cast<double>(degree) * (degree - 1));
    }
    return out;
}

Vector trapezoid_clustering(const Matrix& weights, int points) {
    if (points < 2) throw std::invalid_argument("trapezoid_clustering: need at least two points");
    const int n = static_cast<int>(weights.rows());
    const double h = 2.0 / static_cast<double>(points - 1);
    Vector acc = Vector::Zero(n);
    for (int k = 0; k < points; ++k) {
        const double s = -1.0 + h * static_cast<double>(k);
        const double w = (k == 0 || k == points - 1) ? 0.5 : 1.0;
        acc += w * naive_threshold_clustering(weights, s);
    }
    acc *= h;        // integral over [-1, 1]
    return acc / 2.0;  // averaged over the interval length
}

}  // namespace testsupport
