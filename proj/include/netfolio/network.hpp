#pragma once

#include "netfolio/estimation.hpp"

namespace netfolio {

// Complete weighted undirected graph on the asset universe; weights are
// Pearson correlations clamped to [-1, 1], diagonal 0 by convention.
struct CorrelationNetwork {
    Matrix weights;
    std::vector<std::string> tickers;  // may be empty (unnamed assets)
};

// Unweighted graph keeping the edges with weight >= threshold.
struct ThresholdGraph {
    Eigen::MatrixXi adjacency;  // 0/1 symmetric, zero diagonal
    double threshold = 0.0;
};

struct ClusteringVector {
    Vector c;  // per-node coefficient, each entry in [0, 1]
};

// The displayed integral runs over an interval of length 2 while the stated
// bound 0 <= C_i <= 1 only holds for its average; Averaged (the default)
// divides by 2, Integral keeps the raw integral (a pure rescaling c -> 2c),
// exposed for sensitivity analysis.
enum class ClusteringNormalization { Averaged, Integral };

enum class RiskKind { Standard, Network };

// The matrix handed to an optimizer: the covariance Sigma (standard) or the
// interconnectedness-based H (network), plus per-asset volatilities.
struct RiskModel {
    Matrix matrix;
    Vector vols;
    RiskKind kind = RiskKind::Standard;
};

// w_ij = sigma_ij / (sigma_i sigma_j) clamped to [-1, 1]; diagonal 0.
// tickers, when given, label the nodes and error messages.
CorrelationNetwork correlation_from_covariance(const CovarianceEstimate& cov,
                                               std::vector<std::string> tickers = {});

// a_ij = 1 iff w_ij >= s, i != j. Requires s in [-1, 1].
ThresholdGraph threshold_graph(const CorrelationNetwork& net, double s);

// Watts-Strogatz local clustering: C_i = (triangles at i) / (k_i choose 2),
// 0 where the degree is below 2.
ClusteringVector watts_clustering(const ThresholdGraph& g);

// Threshold-integrated clustering, evaluated exactly: the integrand is
// piecewise constant in s with breakpoints at the distinct edge weights, so
// the integral is a finite sum of interval-length * clustering terms. An
// incremental descending sweep adds each weight class of edges once and
// maintains degrees and per-node triangle counts.
ClusteringVector integrated_clustering(
    const CorrelationNetwork& net,
    ClusteringNormalization norm = ClusteringNormalization::Averaged);

// c_ij = C_i C_j off-diagonal, 1 on the diagonal. The result is PSD: it
// decomposes as cc' + diag(1 - C_i^2).
Matrix interconnectedness_matrix(const ClusteringVector& c);

// H = Delta' C Delta with Delta = diag(s_i), s_i = sigma_i / ||sigma||_2.
// trace(H) = sum s_i^2 = 1 whenever C has unit diagonal.
RiskModel risk_matrix_h(const Matrix& interconnectedness, const Vector& vols);

// Pass-through: RiskModel(Sigma, vols, standard).
RiskModel standard_risk_model(const CovarianceEstimate& cov);

// Full chain: covariance -> correlation network -> integrated clustering ->
// interconnectedness matrix -> H.
RiskModel network_risk_model(const CovarianceEstimate& cov,
                             ClusteringNormalization norm = ClusteringNormalization::Averaged,
                             std::vector<std::string> tickers = {});

}  // namespace netfolio
