#include "netfolio/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace netfolio {

namespace {

std::string node_name(const std::vector<std::string>& tickers, Index i) {
    if (static_cast<size_t>(i) < tickers.size()) return tickers[static_cast<size_t>(i)];
    return "column " + std::to_string(i);
}

void require_network(const CorrelationNetwork& net) {
    const Index n = net.weights.rows();
    if (n < 2 || net.weights.cols() != n)
        throw DataError("correlation network must be square with at least 2 nodes");
}

Vector clustering_from_counts(const std::vector<int>& degree, const std::vector<long long>& triangles) {
    const Index n = static_cast<Index>(degree.size());
    Vector c = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
        const int k = degree[static_cast<size_t>(i)];
        if (k >= 2)
            c(i) = 2.0 * static_cast<double>(triangles[static_cast<size_t>(i)]) /
                   (static_cast<double>(k) * (k - 1));
    }
    return c;
}

}  // namespace

CorrelationNetwork correlation_from_covariance(const CovarianceEstimate& cov,
                                               std::vector<std::string> tickers) {
    const Index n = cov.sigma.rows();
    if (n < 2) throw DataError("correlation network needs at least 2 assets");
    if (!tickers.empty() && static_cast<Index>(tickers.size()) != n)
        throw ConfigError("ticker list does not match the covariance dimension");
    Vector sd(n);
    for (Index i = 0; i < n; ++i) {
        const double v = cov.sigma(i, i);
        if (!(v > 0.0))
            throw DataError("zero variance for " + node_name(tickers, i) +
                            "; correlation is undefined");
        sd(i) = std::sqrt(v);
    }
    CorrelationNetwork net;
    net.weights = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double w = std::clamp(cov.sigma(i, j) / (sd(i) * sd(j)), -1.0, 1.0);
            net.weights(i, j) = w;
            net.weights(j, i) = w;
        }
    net.tickers = std::move(tickers);
    return net;
}

ThresholdGraph threshold_graph(const CorrelationNetwork& net, double s) {
    require_network(net);
    if (!(s >= -1.0 && s <= 1.0))
        throw ConfigError("threshold must lie in [-1, 1], got " + std::to_string(s));
    const Index n = net.weights.rows();
    ThresholdGraph g;
    g.threshold = s;
    g.adjacency = Eigen::MatrixXi::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (i != j && net.weights(i, j) >= s) g.adjacency(i, j) = 1;
    return g;
}

ClusteringVector watts_clustering(const ThresholdGraph& g) {
    const Index n = g.adjacency.rows();
    std::vector<int> degree(static_cast<size_t>(n), 0);
    std::vector<long long> triangles(static_cast<size_t>(n), 0);
    for (Index i = 0; i < n; ++i)
        degree[static_cast<size_t>(i)] = g.adjacency.row(i).sum();
    // (A^3)_ii counts closed walks of length 3, i.e. 2 * triangles at i.
    Eigen::MatrixXi a3 = g.adjacency * g.adjacency * g.adjacency;
    for (Index i = 0; i < n; ++i)
        triangles[static_cast<size_t>(i)] = a3(i, i) / 2;
    return ClusteringVector{clustering_from_counts(degree, triangles)};
}

ClusteringVector integrated_clustering(const CorrelationNetwork& net,
                                       ClusteringNormalization norm) {
    require_network(net);
    const Index n = net.weights.rows();

    // Group edges by weight, keeping only weights in (-1, 1]: an edge at
    // exactly -1 exists only at the measure-zero point s = -1.
    std::map<double, std::vector<std::pair<Index, Index>>> by_weight;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double w = net.weights(i, j);
            if (w > -1.0) by_weight[w].emplace_back(i, j);
        }

    // Breakpoint grid -1 = g_0 < g_1 < ... < g_m with g_m = 1; on each
    // interval (g_j, g_{j+1}] the graph is constant and equals the threshold
    // graph at s = g_{j+1}.
    std::vector<double> grid;
    grid.push_back(-1.0);
    for (const auto& [w, edges] : by_weight) grid.push_back(w);
    if (grid.back() < 1.0) grid.push_back(1.0);

    std::vector<int> degree(static_cast<size_t>(n), 0);
    std::vector<long long> triangles(static_cast<size_t>(n), 0);
    std::vector<std::vector<char>> adj(static_cast<size_t>(n),
                                       std::vector<char>(static_cast<size_t>(n), 0));
    Vector total = Vector::Zero(n);

    // Sweep the intervals from the top down; entering interval (g_{j-1}, g_j]
    // adds exactly the edges whose weight equals g_j.
    for (size_t j = grid.size() - 1; j >= 1; --j) {
        const double s = grid[j];
        if (auto it = by_weight.find(s); it != by_weight.end()) {
            for (const auto& [u, v] : it->second) {
                const auto su = static_cast<size_t>(u), sv = static_cast<size_t>(v);
                for (Index w = 0; w < n; ++w) {
                    const auto sw = static_cast<size_t>(w);
                    if (adj[su][sw] && adj[sv][sw]) {
                        ++triangles[su];
                        ++triangles[sv];
                        ++triangles[sw];
                    }
                }
                adj[su][sv] = adj[sv][su] = 1;
                ++degree[su];
                ++degree[sv];
            }
        }
        const double length = grid[j] - grid[j - 1];
        total += length * clustering_from_counts(degree, triangles);
    }

    if (norm == ClusteringNormalization::Averaged) total *= 0.5;
    return ClusteringVector{std::move(total)};
}

Matrix interconnectedness_matrix(const ClusteringVector& c) {
    const Index n = c.c.size();
    for (Index i = 0; i < n; ++i)
        if (!(c.c(i) >= 0.0) || !(c.c(i) <= 1.0 + 1e-12))
            throw DataError("clustering coefficient out of [0, 1] at node " + std::to_string(i));
    Matrix m = c.c * c.c.transpose();
    m.diagonal().setOnes();
    return m;
}

RiskModel risk_matrix_h(const Matrix& interconnectedness, const Vector& vols) {
    const Index n = vols.size();
    if (interconnectedness.rows() != n || interconnectedness.cols() != n)
        throw ConfigError("interconnectedness matrix does not match the volatility vector");
    for (Index i = 0; i < n; ++i)
        if (!(vols(i) > 0.0))
            throw DataError("zero volatility at asset " + std::to_string(i) +
                            "; cannot build the network risk matrix");
    Vector s = vols / vols.norm();
    RiskModel model;
    model.matrix = s.asDiagonal() * interconnectedness * s.asDiagonal();
    model.matrix = ((model.matrix + model.matrix.transpose()) * 0.5).eval();
    model.vols = vols;
    model.kind = RiskKind::Network;
    return model;
}

RiskModel standard_risk_model(const CovarianceEstimate& cov) {
    RiskModel model;
    model.matrix = cov.sigma;
    model.vols = cov.vols;
    model.kind = RiskKind::Standard;
    return model;
}

RiskModel network_risk_model(const CovarianceEstimate& cov, ClusteringNormalization norm,
                             std::vector<std::string> tickers) {
    CorrelationNetwork net = correlation_from_covariance(cov, std::move(tickers));
    ClusteringVector c = integrated_clustering(net, norm);
    return risk_matrix_h(interconnectedness_matrix(c), cov.vols);
}

}  // namespace netfolio
