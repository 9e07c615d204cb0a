#pragma once

#include "netfolio/network.hpp"

namespace netfolio {

struct SolverConfig {
    double kkt_tolerance = 1e-8;  // absolute KKT residual target for the QPs
    int max_iterations = 10000;
    double erc_tolerance = 1e-6;  // max relative spread of risk contributions
};

struct SolverReport {
    int iterations = 0;
    // For the QP-based solvers (GMV, MV, MDP via its correlation reduction)
    // this is the KKT residual; for ERC it is the relative contribution
    // spread (max - min) / mean, checked against erc_tolerance.
    double kkt_residual = 0.0;
    bool converged = false;
};

struct Allocation {
    Vector weights;               // on the unit simplex
    double objective_value = 0.0; // GMV/MV: the minimized objective; ERC: the
                                  // least-squares spread; MDP: the achieved
                                  // diversification ratio
    SolverReport report;
};

// Euclidean projection onto {x : x >= 0, sum x = 1}; components pushed to the
// boundary come out as exact zeros. Exposed for testing.
Vector project_to_simplex(const Vector& v);

// min x' M x on the simplex.
Allocation solve_gmv(const RiskModel& risk, const SolverConfig& cfg = {});

// min lambda x' M x - (1 - lambda) mu' x on the simplex; lambda = 1 is GMV,
// lambda = 0 a linear program whose solution is a maximal-mean vertex.
Allocation solve_mv(const RiskModel& risk, const MeanEstimate& mu, double lambda,
                    const SolverConfig& cfg = {});

// Equal risk contributions: minimizes sum_ij (x_i (Mx)_i - x_j (Mx)_j)^2 by a
// projected Barzilai-Borwein gradient method, with a damped fixed-point
// iteration as fallback.
Allocation solve_erc(const RiskModel& risk, const SolverConfig& cfg = {});

// Maximum diversification: max sum_i x_i sqrt(M_ii) / sqrt(x' M x), solved by
// GMV on the correlation reduction R_ij = M_ij / sqrt(M_ii M_jj) followed by
// the rescaling x_i = (y_i / sqrt(M_ii)) / sum_j (y_j / sqrt(M_jj)).
Allocation solve_mdp(const RiskModel& risk, const SolverConfig& cfg = {});

// x_i = 1/N, with the last component set to 1 - sum(others) so the budget
// holds exactly.
Allocation equal_weights(Index n);

}  // namespace netfolio
