#include "netfolio/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace netfolio {

namespace {

constexpr double kWeightClamp = 1e-12;  // dust threshold for returned weights

void require_square(const Matrix& m, const char* what) {
    if (m.rows() < 2 || m.rows() != m.cols())
        throw ConfigError(std::string(what) + ": risk matrix must be square with N >= 2");
    if (!m.allFinite())
        throw DataError(std::string(what) + ": risk matrix has non-finite entries");
}

// KKT residual for min x'Ax - b'x on the simplex: with g = 2Ax - b and the
// multiplier estimate nu = x'g, active components must have g_i = nu and
// inactive ones g_i >= nu; the residual is the worst violation plus any
// budget error.
double qp_kkt_residual(const Matrix& A, const Vector& b, const Vector& x) {
    Vector g = 2.0 * (A * x) - b;
    const double nu = x.dot(g);
    double res = std::abs(x.sum() - 1.0);
    for (Index i = 0; i < x.size(); ++i) {
        if (x(i) > kWeightClamp)
            res = std::max(res, std::abs(g(i) - nu));
        else
            res = std::max(res, std::max(0.0, nu - g(i)));
    }
    return res;
}

void clamp_weights(Vector& x) {
    for (Index i = 0; i < x.size(); ++i)
        if (x(i) < kWeightClamp) x(i) = 0.0;
    const double s = x.sum();
    if (!(s > 0.0)) throw SolverError("weight clamping removed the whole budget");
    x /= s;
}

std::string format_weights(const Vector& x) {
    std::ostringstream os;
    os << "[";
    for (Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
    os << "]";
    return os.str();
}

struct QpResult {
    Vector x;
    int iterations = 0;
    double residual = 0.0;
};

// Accelerated projected gradient (FISTA with adaptive restart), step 1/L with
// L the Gershgorin bound on ||2A||. Tracks the iterate with the smallest KKT
// residual; precision is left to the active-set polish.
QpResult projected_gradient(const Matrix& A, const Vector& b, int max_iter, double target) {
    const Index n = A.rows();
    const double L = 2.0 * A.cwiseAbs().rowwise().sum().maxCoeff();
    QpResult r;
    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    if (L <= 0.0) {  // zero matrix; caller handles the pure-LP case
        r.x = x;
        r.residual = qp_kkt_residual(A, b, x);
        return r;
    }
    auto value = [&](const Vector& z) { return z.dot(A * z) - b.dot(z); };
    Vector x_prev = x;
    double t = 1.0;
    double prev_val = value(x);
    Vector best = x;
    double best_res = qp_kkt_residual(A, b, x);
    int since_improved = 0;
    int k = 0;
    for (; k < max_iter; ++k) {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Vector y = x + ((t - 1.0) / t_next) * (x - x_prev);
        Vector g = 2.0 * (A * y) - b;
        Vector x_next = project_to_simplex(y - g / L);
        x_prev = x;
        x = x_next;
        t = t_next;
        const double val = value(x);
        if (val > prev_val) t = 1.0;  // restart momentum on non-monotone steps
        prev_val = val;
        const double res = qp_kkt_residual(A, b, x);
        if (res < best_res) {
            best_res = res;
            best = x;
            since_improved = 0;
        } else if (++since_improved > 200) {
            ++k;
            break;  // stalled; hand over to the polish
        }
        if (best_res <= target) {
            ++k;
            break;
        }
    }
    r.x = best;
    r.iterations = k;
    r.residual = best_res;
    return r;
}

struct PolishResult {
    Vector x;
    int rounds = 0;
    bool ok = false;
};

// Active-set refinement: repeatedly solve the equality-constrained QP on the
// current support via the bordered KKT system [2A_SS, -e; e', 0] (complete
// orthogonal decomposition, so singular faces from duplicated assets still
// yield a minimum-norm solution), step toward it with a ratio test when
// components would go negative, and grow the support when the dual check
// g_i >= nu fails off-support.
PolishResult active_set_polish(const Matrix& A, const Vector& b, Vector x, double tol) {
    const Index n = A.rows();
    std::vector<Index> support;
    auto rebuild_support = [&]() {
        support.clear();
        for (Index i = 0; i < n; ++i)
            if (x(i) > 1e-10) support.push_back(i);
        if (support.empty()) {
            Index top = 0;
            x.maxCoeff(&top);
            support.push_back(top);
        }
    };
    rebuild_support();
    const int round_cap = 30 + static_cast<int>(2 * n * n);
    int round = 0;
    for (; round < round_cap; ++round) {
        const Index m = static_cast<Index>(support.size());
        Matrix K = Matrix::Zero(m + 1, m + 1);
        Vector rhs = Vector::Zero(m + 1);
        for (Index a = 0; a < m; ++a) {
            for (Index c = 0; c < m; ++c) K(a, c) = 2.0 * A(support[a], support[c]);
            K(a, m) = -1.0;
            K(m, a) = 1.0;
            rhs(a) = b(support[a]);
        }
        rhs(m) = 1.0;
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(K);
        Vector sol = cod.solve(rhs);
        if (!sol.allFinite() ||
            (K * sol - rhs).norm() > 1e-8 * (1.0 + rhs.norm() + K.norm()))
            break;  // inconsistent face; keep the gradient iterate

        Vector z = Vector::Zero(n);
        double min_on_support = std::numeric_limits<double>::infinity();
        for (Index a = 0; a < m; ++a) {
            z(support[a]) = sol(a);
            min_on_support = std::min(min_on_support, sol(a));
        }

        if (min_on_support < -1e-12) {
            double alpha = 1.0;
            for (Index a = 0; a < m; ++a) {
                const double d = z(support[a]) - x(support[a]);
                if (d < 0.0) alpha = std::min(alpha, x(support[a]) / -d);
            }
            x += alpha * (z - x);
            for (Index i = 0; i < n; ++i)
                if (x(i) < kWeightClamp) x(i) = 0.0;
            rebuild_support();
            continue;
        }

        x = z.cwiseMax(0.0);
        Vector g = 2.0 * (A * x) - b;
        const double nu = sol(m);
        Index worst = -1;
        double worst_gap = 0.0;
        for (Index i = 0; i < n; ++i) {
            if (std::find(support.begin(), support.end(), i) != support.end()) continue;
            const double gap = nu - g(i);
            if (gap > worst_gap) {
                worst_gap = gap;
                worst = i;
            }
        }
        if (worst >= 0 && worst_gap > 0.5 * tol) {
            support.push_back(worst);
            std::sort(support.begin(), support.end());
            continue;
        }
        return {x, round + 1, true};
    }
    return {x, round, false};
}

// Shared core for GMV / MV / the MDP reduction: min x'Ax - b'x on the simplex.
Allocation solve_qp_simplex(const Matrix& A, const Vector& b, const SolverConfig& cfg,
                            const char* what) {
    require_square(A, what);
    const Index n = A.rows();
    Allocation out;

    if (A.cwiseAbs().maxCoeff() == 0.0) {
        // Pure linear objective: a maximal-b vertex (equal weights when b is
        // constant, covering the all-ties and the degenerate zero-matrix case).
        if (b.maxCoeff() - b.minCoeff() == 0.0) {
            out = equal_weights(n);
        } else {
            Index top = 0;
            b.maxCoeff(&top);
            out.weights = Vector::Zero(n);
            out.weights(top) = 1.0;
        }
        out.objective_value = -b.dot(out.weights);
        out.report.kkt_residual = qp_kkt_residual(A, b, out.weights);
        out.report.converged = out.report.kkt_residual <= cfg.kkt_tolerance;
        return out;
    }

    QpResult pg = projected_gradient(A, b, cfg.max_iterations, 0.1 * cfg.kkt_tolerance);
    PolishResult pol = active_set_polish(A, b, pg.x, cfg.kkt_tolerance);

    Vector x = pg.x;
    if (pol.ok && qp_kkt_residual(A, b, pol.x) < pg.residual) x = pol.x;
    clamp_weights(x);

    out.weights = x;
    out.objective_value = x.dot(A * x) - b.dot(x);
    out.report.iterations = pg.iterations + pol.rounds;
    out.report.kkt_residual = qp_kkt_residual(A, b, x);
    out.report.converged = out.report.kkt_residual <= cfg.kkt_tolerance;
    if (!out.report.converged) {
        std::ostringstream os;
        os << what << " did not converge: KKT residual " << out.report.kkt_residual
           << " after " << out.report.iterations << " iterations; best weights "
           << format_weights(x);
        throw SolverError(os.str());
    }
    return out;
}

double contribution_spread(const Vector& c) {
    const double mean = c.mean();
    if (!(mean > 0.0)) return std::numeric_limits<double>::infinity();
    return (c.maxCoeff() - c.minCoeff()) / mean;
}

}  // namespace

Vector project_to_simplex(const Vector& v) {
    const Index n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = u.empty() ? 0.0 : u[0] - 1.0;
    for (Index i = 0; i < n; ++i) {
        cumulative += u[static_cast<size_t>(i)];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (u[static_cast<size_t>(i)] - t > 0.0)
            theta = t;
        else
            break;
    }
    Vector out(n);
    for (Index i = 0; i < n; ++i) out(i) = std::max(v(i) - theta, 0.0);
    return out;
}

Allocation solve_gmv(const RiskModel& risk, const SolverConfig& cfg) {
    return solve_qp_simplex(risk.matrix, Vector::Zero(risk.matrix.rows()), cfg, "gmv");
}

Allocation solve_mv(const RiskModel& risk, const MeanEstimate& mu, double lambda,
                    const SolverConfig& cfg) {
    require_square(risk.matrix, "mv");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw ConfigError("mv: lambda must lie in [0, 1], got " + std::to_string(lambda));
    if (mu.mu.size() != risk.matrix.rows())
        throw ConfigError("mv: mean vector does not match the risk matrix dimension");
    Matrix A = lambda * risk.matrix;
    Vector b = (1.0 - lambda) * mu.mu;
    return solve_qp_simplex(A, b, cfg, "mv");
}

Allocation solve_erc(const RiskModel& risk, const SolverConfig& cfg) {
    const Matrix& M0 = risk.matrix;
    require_square(M0, "erc");
    const Index n = M0.rows();
    for (Index i = 0; i < n; ++i)
        if (!(M0(i, i) > 0.0))
            throw DataError("erc: non-positive variance at asset " + std::to_string(i));

    // The minimizer is invariant under a uniform rescaling of M; normalizing
    // to a unit mean diagonal keeps gradient magnitudes in a sane range.
    const double tau = M0.diagonal().mean();
    Matrix M = M0 / tau;
    const double nd = static_cast<double>(n);

    auto objective = [&](const Vector& c) {
        const double s = c.sum();
        return 2.0 * nd * c.squaredNorm() - 2.0 * s * s;
    };
    auto gradient = [&](const Vector& x, const Vector& u, const Vector& c) {
        const double s = c.sum();
        return Vector(4.0 * nd * (c.cwiseProduct(u) + M * x.cwiseProduct(c)) - 8.0 * s * u);
    };

    Vector x = M.diagonal().array().rsqrt();  // inverse-volatility start
    x /= x.sum();
    int used = 0;
    bool done = false;

    // Iterate past the requested tolerance while progress is cheap: the
    // reported weights then sit close to the exact fixed point instead of on
    // the acceptance boundary. Convergence is still judged against
    // cfg.erc_tolerance only.
    const double target_tol = std::min(cfg.erc_tolerance, 1e-10);

    // Primary: projected Barzilai-Borwein descent on the least-squares spread
    // objective, with a non-monotone backtracking safeguard.
    {
        Vector u = M * x;
        Vector c = x.cwiseProduct(u);
        Vector g = gradient(x, u, c);
        double alpha = 0.1 / std::max(g.cwiseAbs().maxCoeff(), 1e-12);
        std::vector<double> recent{objective(c)};
        for (int k = 0; k < cfg.max_iterations; ++k, ++used) {
            if (contribution_spread(c) <= target_tol) {
                done = true;
                break;
            }
            const double f_ref = *std::max_element(recent.begin(), recent.end());
            double a = alpha;
            Vector x_new, u_new, c_new, step;
            double f_new = 0.0;
            for (int ls = 0;; ++ls) {
                x_new = project_to_simplex(x - a * g);
                step = x_new - x;
                u_new = M * x_new;
                c_new = x_new.cwiseProduct(u_new);
                f_new = objective(c_new);
                if (f_new <= f_ref + 1e-4 * g.dot(step) || ls >= 60 ||
                    step.cwiseAbs().maxCoeff() < 1e-18)
                    break;
                a *= 0.5;
            }
            if (step.cwiseAbs().maxCoeff() < 1e-18) break;  // stalled
            Vector g_new = gradient(x_new, u_new, c_new);
            const double sy = step.dot(g_new - g);
            alpha = sy > 0.0 ? std::clamp(step.squaredNorm() / sy, 1e-14, 1e14)
                             : std::min(alpha * 2.0, 1e14);
            x = x_new;
            u = u_new;
            c = c_new;
            g = g_new;
            recent.push_back(f_new);
            if (recent.size() > 10) recent.erase(recent.begin());
        }
        if (!done) {
            Vector cu = x.cwiseProduct(M * x);
            done = contribution_spread(cu) <= cfg.erc_tolerance;  // contract, not target
        }
    }

    // Fallback: damped fixed point x_i <- x_i * (mean(c)/c_i)^(1/2), valid
    // while every contribution stays positive.
    if (!done) {
        Vector xf = M.diagonal().array().rsqrt();
        xf /= xf.sum();
        for (int k = 0; k < cfg.max_iterations; ++k, ++used) {
            Vector u = M * xf;
            Vector c = xf.cwiseProduct(u);
            if ((c.array() <= 0.0).any()) break;
            if (contribution_spread(c) <= target_tol) {
                done = true;
                x = xf;
                break;
            }
            const double target = c.mean();
            for (Index i = 0; i < n; ++i) xf(i) *= std::sqrt(target / c(i));
            xf /= xf.sum();
        }
    }

    clamp_weights(x);
    Vector c = x.cwiseProduct(Vector(M0 * x));
    const double spread = contribution_spread(c);
    Allocation out;
    out.weights = x;
    const double s = c.sum();
    out.objective_value = 2.0 * nd * c.squaredNorm() - 2.0 * s * s;
    out.report.iterations = used;
    out.report.kkt_residual = spread;
    out.report.converged = spread <= cfg.erc_tolerance;
    if (!out.report.converged) {
        std::ostringstream os;
        os << "erc did not converge: relative contribution spread " << spread << " after "
           << used << " iterations; best weights " << format_weights(x);
        throw SolverError(os.str());
    }
    return out;
}

Allocation solve_mdp(const RiskModel& risk, const SolverConfig& cfg) {
    const Matrix& M = risk.matrix;
    require_square(M, "mdp");
    const Index n = M.rows();
    Vector sd(n);
    for (Index i = 0; i < n; ++i) {
        if (!(M(i, i) > 0.0))
            throw DataError("mdp: non-positive variance at asset " + std::to_string(i));
        sd(i) = std::sqrt(M(i, i));
    }
    Matrix R(n, n);
    for (Index i = 0; i < n; ++i) {
        R(i, i) = 1.0;
        for (Index j = i + 1; j < n; ++j) {
            const double r = M(i, j) / (sd(i) * sd(j));
            R(i, j) = r;
            R(j, i) = r;
        }
    }
    Allocation inner = solve_qp_simplex(R, Vector::Zero(n), cfg, "mdp");
    Vector t = inner.weights.array() / sd.array();
    Vector x = t / t.sum();
    clamp_weights(x);

    const double denominator = std::sqrt(x.dot(M * x));
    if (!(denominator > 0.0)) throw SolverError("mdp: degenerate portfolio variance");
    Allocation out;
    out.weights = x;
    out.objective_value = x.dot(sd) / denominator;  // the achieved diversification ratio
    out.report = inner.report;                      // certificate of the correlation reduction
    return out;
}

Allocation equal_weights(Index n) {
    if (n < 1) throw ConfigError("equal weights need at least 1 asset");
    Allocation out;
    out.weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
    if (n > 1) out.weights(n - 1) = 1.0 - out.weights.head(n - 1).sum();
    out.objective_value = 0.0;
    out.report.converged = true;
    return out;
}

}  // namespace netfolio
