#pragma once

#include <cstdint>
#include <random>

namespace resilsim {

using Rng = std::mt19937_64;

/// Independent substreams of one replication seed. Failure sampling and
/// repair durations never depend on the restoration strategy, so paired runs
/// see identical damage.
enum class Stream : std::uint64_t {
    Failures = 0x6661696c,
    Repairs = 0x72657061,
    Strategy = 0x73747261,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Rng(seq);
}

}  // namespace resilsim
