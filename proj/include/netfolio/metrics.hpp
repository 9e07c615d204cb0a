#pragma once

#include "netfolio/market_data.hpp"

#include <optional>

namespace netfolio {

// First four moments of a daily return series. std uses the unbiased (T-1)
// divisor; skew and kurt use the uncorrected central-moment forms
// m3 / m2^(3/2) and m4 / m2^2 with m_j computed with the 1/T divisor.
// Kurtosis is raw (a normal sample gives ~3), not excess. For a constant
// series std is 0 and skew/kurt are absent (undefined, flagged by nullopt).
struct Moments {
    double mean = 0.0;
    double std = 0.0;
    std::optional<double> skew;
    std::optional<double> kurt;
};

Moments moments(const Vector& series);

// (mean - mu_f) / std, daily basis. Zero variance is an error, never +-inf.
double sharpe_ratio(const Vector& series, double mu_f = 0.0);

// Mean of the difference series divided by its standard deviation (tracking
// error, T-1 divisor). Identical series have zero tracking error -> error.
double information_ratio(const Vector& series, const Vector& reference);

// E(r - eps)+ / E(eps - r)+ with both expectations averaged over the full
// length T. A series with no observation below eps has an infinite ratio and
// is reported as a distinct error, never as an overflow.
double omega_ratio(const Vector& series, double eps = 0.0);

// wealth[t] = prod_{u <= t} (1 + r_u), starting from 1 before the first
// observation. Any return <= -1 is an error.
Vector cumulative_performance(const Vector& series);

// One row of the out-of-sample statistics table.
struct PerformanceReport {
    Moments stats;
    double sharpe = 0.0;
    double omega = 0.0;
    std::optional<double> info_ratio;  // absent for the reference row itself
    std::string info_reference;        // label of the IR reference strategy
};

// reference == nullptr marks the reference row itself: its IR cell stays
// empty, mirroring the omitted self-comparison in the statistics table.
PerformanceReport performance_report(const Vector& series, const Vector* reference,
                                     const std::string& reference_label, double mu_f = 0.0,
                                     double eps = 0.0);

}  // namespace netfolio
