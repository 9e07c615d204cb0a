#include "netfolio/metrics.hpp"

#include <cmath>

namespace netfolio {

namespace {

void require_series(const Vector& series, const char* what) {
    if (series.size() < 2)
        throw DataError(std::string(what) + " needs a series of at least 2 observations");
    if (!series.allFinite())
        throw DataError(std::string(what) + ": series contains non-finite values");
}

}  // namespace

Moments moments(const Vector& series) {
    require_series(series, "moments");
    const double t = static_cast<double>(series.size());
    Moments m;
    m.mean = series.mean();
    Vector d = series.array() - m.mean;
    const double m2 = d.squaredNorm() / t;
    m.std = std::sqrt(d.squaredNorm() / (t - 1.0));
    if (m2 > 0.0) {
        const double m3 = d.array().cube().sum() / t;
        const double m4 = d.array().square().square().sum() / t;
        m.skew = m3 / std::pow(m2, 1.5);
        m.kurt = m4 / (m2 * m2);
    }
    return m;
}

double sharpe_ratio(const Vector& series, double mu_f) {
    Moments m = moments(series);
    if (!(m.std > 0.0)) throw DataError("sharpe ratio undefined: series has zero variance");
    return (m.mean - mu_f) / m.std;
}

double information_ratio(const Vector& series, const Vector& reference) {
    require_series(series, "information ratio");
    if (series.size() != reference.size())
        throw ConfigError("information ratio: series and reference lengths differ");
    Vector diff = series - reference;
    Moments m = moments(diff);
    if (!(m.std > 0.0))
        throw DataError("information ratio undefined: zero tracking error against the reference");
    return m.mean / m.std;
}

double omega_ratio(const Vector& series, double eps) {
    require_series(series, "omega ratio");
    const double t = static_cast<double>(series.size());
    const double gains = (series.array() - eps).max(0.0).sum() / t;
    const double losses = (eps - series.array()).max(0.0).sum() / t;
    if (!(losses > 0.0))
        throw DataError("omega ratio infinite: no observation below the threshold");
    return gains / losses;
}

Vector cumulative_performance(const Vector& series) {
    if (series.size() < 1) throw DataError("cumulative performance needs at least 1 observation");
    Vector wealth(series.size());
    double w = 1.0;
    for (Index t = 0; t < series.size(); ++t) {
        if (!(series(t) > -1.0))
            throw DataError("cumulative performance: return <= -1 at position " + std::to_string(t));
        w *= 1.0 + series(t);
        wealth(t) = w;
    }
    return wealth;
}

PerformanceReport performance_report(const Vector& series, const Vector* reference,
                                     const std::string& reference_label, double mu_f,
                                     double eps) {
    PerformanceReport report;
    report.stats = moments(series);
    report.sharpe = sharpe_ratio(series, mu_f);
    report.omega = omega_ratio(series, eps);
    report.info_reference = reference_label;
    if (reference != nullptr) report.info_ratio = information_ratio(series, *reference);
    return report;
}

}  // namespace netfolio
