#pragma once

#include "resilsim/monte_carlo.hpp"
#include "resilsim/restoration.hpp"
#include "resilsim/testbed.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace resilsim {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::filesystem::path power, roads, couplings, scenario;
    std::vector<Strategy> strategies;  // every strategy when none given
    std::optional<int> teams;          // overrides the scenario's crew count
    MonteCarloConfig monte_carlo;
    std::filesystem::path out_dir = "out";
    bool crew_access_dependence = true;
    bool fuel_dependence = true;
};

struct GenerateOptions {
    TestbedParams params;
    std::filesystem::path out_dir;
};

struct PlotOptions {
    std::filesystem::path out_dir;
};

/// Result of parsing; `help` holds usage text when --help was requested.
struct Command {
    std::variant<std::monostate, RunOptions, GenerateOptions, PlotOptions> action;
    std::string help;
};

/// Parses argv (without the program name). Throws UsageError naming the
/// offending flag or value.
Command parse_cli(const std::vector<std::string>& args);

/// Full command-line entry point. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resilsim
