#pragma once

#include "resilsim/engine.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace resilsim {

inline constexpr const char* kTimeseriesHeader =
    "replication,hour,q_households,q_traffic_lights,failed_components,passable_links";

struct RunInfo {
    std::uint64_t seed = 1;
    double confidence = 0.9;
    double relative_halfwidth = 0.1;
    std::optional<std::size_t> baseline;  // treatment improvements are measured against
};

/// Writes timeseries.csv (one per treatment; in `<out>/<label>/` when there
/// is more than one) and `<out>/summary.json`. Returns the files written.
std::vector<std::filesystem::path> emit_outputs(const StudyResult& study, const RunInfo& info,
                                                const std::filesystem::path& out_dir);

std::string timeseries_csv(const std::vector<ReplicationResult>& runs);
std::string summary_json(const StudyResult& study, const RunInfo& info);

struct MeanCurve {
    std::string label;
    std::vector<double> q_households;      // index = hour
    std::vector<double> q_traffic_lights;
};

/// Mean Q per hour across replications; a finished replication counts as
/// fully restored for the rest of the window.
MeanCurve mean_curve(const std::string& label, std::istream& timeseries);

/// Reshapes every timeseries.csv under `out_dir` into `plot_<label>.csv`
/// files with columns hour,q_households,q_traffic_lights.
std::vector<std::filesystem::path> plot_data(const std::filesystem::path& out_dir);

}  // namespace resilsim
