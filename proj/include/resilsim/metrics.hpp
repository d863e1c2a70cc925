#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace resilsim {

/// Hourly quality samples Q(t0), Q(t0+1), ..., Q(t1).
struct QualitySeries {
    int t0 = 0;
    std::vector<double> q;

    int t1() const { return t0 + static_cast<int>(q.size()) - 1; }
    int horizon() const { return static_cast<int>(q.size()) - 1; }
};

/// Transient resilience loss: left-rectangle sum of (1 - Q) over [t0, t1).
double trl(const QualitySeries& series);

/// Baseline quality 1.0 integrated over the horizon.
double mpr(double horizon_hours);

/// Percent reduction of TRL against a baseline; nullopt when the baseline is 0.
std::optional<double> improvement_pct(double trl_strategy, double trl_baseline);

inline constexpr double kDefaultQuantileLevels[] = {0.75, 0.90, 1.0};

/// First hour (from t0) at which Q reaches each level. Throws
/// std::invalid_argument if a level is never reached.
std::vector<int> restoration_quantiles(const QualitySeries& series,
                                       std::span<const double> levels = kDefaultQuantileLevels);

/// Mean of the hourly samples; the per-replication Monte Carlo statistic.
double time_averaged_quality(const QualitySeries& series);

}  // namespace resilsim
