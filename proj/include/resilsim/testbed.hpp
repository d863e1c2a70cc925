#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace resilsim {

struct TestbedParams {
    int grid_size = 46;          // intersections per side
    int households = 7657;
    int substations = 4;
    double lights_fraction = 0.04;  // of all intersections
    std::uint64_t seed = 1;

    double spacing_m = 100.0;
    double wind_mph = 65.0;
    int teams = 11;
    double runoff_min_in = 13.0;
    double runoff_max_in = 26.0;
};

class InfeasibleParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File contents of a generated testbed.
struct Testbed {
    std::string power;
    std::string roads;
    std::string couplings;
    std::string scenario;  // JSON
};

/// Grid road network with a radial power system laid over it: one plant in
/// the (0, 0) corner feeding substations through towers and lines along the
/// roads, pole/conductor feeder trees under the inner block, households
/// hanging off poles and traffic lights at arterial crossings. Output is a
/// pure function of the parameters.
Testbed generate_testbed(const TestbedParams& params);

/// Writes power.csv, roads.csv, couplings.csv and scenario.json into `dir`.
void write_testbed(const Testbed& bed, const std::filesystem::path& dir);

}  // namespace resilsim
