#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace resilsim {

struct MonteCarloConfig {
    double confidence = 0.90;
    double relative_halfwidth = 0.10;
    int min_replications = 10;
    int max_replications = 500;
    std::uint64_t base_seed = 1;
    unsigned threads = 1;  // 0 = hardware concurrency

    /// Throws std::invalid_argument.
    void validate() const;
};

struct ConfidenceInterval {
    double mean = 0.0;
    double halfwidth = 0.0;
    std::size_t n = 0;
};

/// Normal-approximation interval for the mean (sample standard deviation).
ConfidenceInterval normal_ci(std::span<const double> samples, double confidence);

/// Half-width within the relative tolerance of the mean.
bool stopping_rule_met(const ConfidenceInterval& ci, const MonteCarloConfig& config);

template <class Rep>
struct MonteCarloRun {
    std::vector<Rep> replications;               // seed order, seeds base + i
    std::vector<ConfidenceInterval> intervals;   // one per tracked statistic
    bool converged = false;
};

/// Sequential replication driver. `replicate(seed)` produces one replication;
/// `statistics(rep)` returns the scalars whose means must all satisfy the
/// stopping rule. Replications may run concurrently in batches but are
/// reduced in seed order, so the outcome does not depend on `threads`.
template <class Replicate, class Statistics>
auto run_monte_carlo(const MonteCarloConfig& config, Replicate&& replicate, Statistics&& statistics)
    -> MonteCarloRun<std::invoke_result_t<Replicate&, std::uint64_t>> {
    using Rep = std::invoke_result_t<Replicate&, std::uint64_t>;
    config.validate();

    unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    MonteCarloRun<Rep> run;
    std::vector<std::vector<double>> samples;

    auto evaluate = [&]() {
        run.intervals.clear();
        bool ok = true;
        for (const auto& s : samples) {
            run.intervals.push_back(normal_ci(s, config.confidence));
            ok = ok && stopping_rule_met(run.intervals.back(), config);
        }
        return ok;
    };

    int next = 0;
    while (next < config.max_replications) {
        const int batch = static_cast<int>(std::min<unsigned>(workers, config.max_replications - next));
        std::vector<std::optional<Rep>> results(batch);
        if (batch == 1) {
            results[0].emplace(replicate(config.base_seed + static_cast<std::uint64_t>(next)));
        } else {
            std::vector<std::exception_ptr> errors(batch);
            std::vector<std::thread> pool;
            for (int b = 0; b < batch; ++b) {
                pool.emplace_back([&, b] {
                    try {
                        results[b].emplace(replicate(config.base_seed + static_cast<std::uint64_t>(next + b)));
                    } catch (...) {
                        errors[b] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
            for (auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
        }
        for (int b = 0; b < batch; ++b) {
            const std::vector<double> stats = statistics(static_cast<const Rep&>(*results[b]));
            if (samples.empty()) samples.resize(stats.size());
            for (std::size_t k = 0; k < stats.size(); ++k) samples[k].push_back(stats[k]);
            run.replications.push_back(std::move(*results[b]));
            ++next;
            if (next >= config.min_replications && evaluate()) {
                run.converged = true;
                return run;
            }
        }
    }
    evaluate();
    return run;
}

}  // namespace resilsim
