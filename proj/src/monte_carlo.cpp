#include "resilsim/monte_carlo.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace resilsim {

void MonteCarloConfig::validate() const {
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0, 1)");
    if (!(relative_halfwidth > 0.0)) throw std::invalid_argument("relative half-width must be positive");
    if (min_replications < 2) throw std::invalid_argument("min replications must be at least 2");
    if (max_replications < min_replications)
        throw std::invalid_argument("max replications must be >= min replications");
}

ConfidenceInterval normal_ci(std::span<const double> samples, double confidence) {
    ConfidenceInterval ci;
    ci.n = samples.size();
    if (samples.empty()) return ci;
    double sum = 0.0;
    for (double x : samples) sum += x;
    ci.mean = sum / static_cast<double>(ci.n);
    if (ci.n < 2) {
        ci.halfwidth = std::numeric_limits<double>::infinity();
        return ci;
    }
    double ss = 0.0;
    for (double x : samples) ss += (x - ci.mean) * (x - ci.mean);
    const double sd = std::sqrt(ss / static_cast<double>(ci.n - 1));
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
    ci.halfwidth = z * sd / std::sqrt(static_cast<double>(ci.n));
    return ci;
}

bool stopping_rule_met(const ConfidenceInterval& ci, const MonteCarloConfig& config) {
    return ci.n >= 2 && ci.halfwidth <= config.relative_halfwidth * std::abs(ci.mean);
}

}  // namespace resilsim
