#include "resilsim/metrics.hpp"

#include <stdexcept>
#include <string>

namespace resilsim {

double trl(const QualitySeries& series) {
    if (series.q.empty()) throw std::invalid_argument("quality series is empty");
    double loss = 0.0;
    for (std::size_t i = 0; i + 1 < series.q.size(); ++i) loss += 1.0 - series.q[i];
    return loss;
}

double mpr(double horizon_hours) {
    if (!(horizon_hours > 0.0)) throw std::invalid_argument("MPR horizon must be positive");
    return 1.0 * horizon_hours;
}

std::optional<double> improvement_pct(double trl_strategy, double trl_baseline) {
    if (trl_baseline == 0.0) return std::nullopt;
    return (trl_baseline - trl_strategy) / trl_baseline * 100.0;
}

std::vector<int> restoration_quantiles(const QualitySeries& series, std::span<const double> levels) {
    std::vector<int> hours;
    hours.reserve(levels.size());
    for (double level : levels) {
        int found = -1;
        for (std::size_t i = 0; i < series.q.size(); ++i) {
            if (series.q[i] >= level - 1e-12) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0) throw std::invalid_argument("quality never reaches " + std::to_string(level));
        hours.push_back(found);
    }
    return hours;
}

double time_averaged_quality(const QualitySeries& series) {
    if (series.q.empty()) throw std::invalid_argument("quality series is empty");
    double sum = 0.0;
    for (double v : series.q) sum += v;
    return sum / static_cast<double>(series.q.size());
}

}  // namespace resilsim
