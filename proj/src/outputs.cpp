#include "resilsim/outputs.hpp"

#include "resilsim/text_records.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace resilsim {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

std::string timeseries_csv(const std::vector<ReplicationResult>& runs) {
    std::string out = kTimeseriesHeader;
    out += '\n';
    for (std::size_t r = 0; r < runs.size(); ++r) {
        for (const auto& h : runs[r].hours) {
            out += std::to_string(r);
            out += ',';
            out += std::to_string(h.hour);
            out += ',';
            out += shortest(h.q_households);
            out += ',';
            out += shortest(h.q_traffic_lights);
            out += ',';
            out += std::to_string(h.failed_components);
            out += ',';
            out += std::to_string(h.passable_links);
            out += '\n';
        }
    }
    return out;
}

std::string summary_json(const StudyResult& study, const RunInfo& info) {
    ordered_json doc;
    doc["seed"] = info.seed;
    doc["confidence"] = info.confidence;
    doc["relative_halfwidth_target"] = info.relative_halfwidth;
    doc["converged"] = study.converged;
    doc["baseline"] = info.baseline ? ordered_json(study.treatments.at(*info.baseline).label) : ordered_json(nullptr);
    ordered_json per = ordered_json::object();
    for (const auto& s : study.summaries) {
        ordered_json j;
        j["strategy"] = std::string(to_string(s.strategy));
        j["replications"] = s.replications;
        j["mean_trl"] = s.mean_trl;
        j["mpr_hours"] = s.mpr;
        j["trl_over_mpr_pct"] = s.trl_over_mpr_pct;
        j["improvement_pct"] = optional_number(s.improvement_pct);
        j["restoration_hours"] = {{"households_75", s.mean_restore_75},
                                  {"households_90", s.mean_restore_90},
                                  {"households_100", s.mean_restore_100},
                                  {"traffic_lights_100", s.mean_lights_restore_100}};
        j["mean_traffic_light_trl"] = s.mean_lights_trl;
        j["mean_initial_failures"] = s.mean_initial_failures;
        j["ci"] = {{"mean_time_averaged_q", s.ci.mean},
                   {"halfwidth", s.ci.halfwidth},
                   {"relative_halfwidth", s.ci.mean != 0.0 ? s.ci.halfwidth / std::abs(s.ci.mean) : 0.0}};
        per[s.label] = std::move(j);
    }
    doc["strategies"] = std::move(per);
    return doc.dump(2) + "\n";
}

std::vector<fs::path> emit_outputs(const StudyResult& study, const RunInfo& info, const fs::path& out_dir) {
    std::vector<fs::path> written;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
    const bool nested = study.treatments.size() > 1;
    for (std::size_t t = 0; t < study.treatments.size(); ++t) {
        fs::path dir = nested ? out_dir / study.treatments[t].label : out_dir;
        fs::create_directories(dir, ec);
        if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
        written.push_back(dir / "timeseries.csv");
        write_file(written.back(), timeseries_csv(study.runs[t]));
    }
    written.push_back(out_dir / "summary.json");
    write_file(written.back(), summary_json(study, info));
    return written;
}

MeanCurve mean_curve(const std::string& label, std::istream& in) {
    std::map<long, std::vector<std::pair<double, double>>> reps;  // replication -> (qh, ql) by hour
    bool header_seen = false;
    for_each_record(in, label, [&](const Record& r) {
        if (!header_seen) {
            if (r.tag() != "replication") throw ParseError(label, r.line, "missing timeseries header");
            header_seen = true;
            return;
        }
        r.expect_fields(6);
        const long rep = std::stol(r.fields[0]);
        const auto hour = static_cast<std::size_t>(r.number(1));
        auto& series = reps[rep];
        if (hour != series.size()) throw ParseError(label, r.line, "hours must be consecutive from 0");
        series.emplace_back(r.number(2), r.number(3));
    });
    MeanCurve curve{label, {}, {}};
    std::size_t horizon = 0;
    for (const auto& [_, s] : reps) horizon = std::max(horizon, s.size());
    curve.q_households.assign(horizon, 0.0);
    curve.q_traffic_lights.assign(horizon, 0.0);
    for (const auto& [_, s] : reps) {
        for (std::size_t h = 0; h < horizon; ++h) {
            curve.q_households[h] += h < s.size() ? s[h].first : 1.0;
            curve.q_traffic_lights[h] += h < s.size() ? s[h].second : 1.0;
        }
    }
    const double n = static_cast<double>(reps.size());
    for (std::size_t h = 0; h < horizon; ++h) {
        curve.q_households[h] /= n;
        curve.q_traffic_lights[h] /= n;
    }
    return curve;
}

std::vector<fs::path> plot_data(const fs::path& out_dir) {
    std::vector<std::pair<std::string, fs::path>> sources;
    if (fs::exists(out_dir / "timeseries.csv")) sources.emplace_back("run", out_dir / "timeseries.csv");
    if (fs::is_directory(out_dir)) {
        std::vector<fs::path> subdirs;
        for (const auto& entry : fs::directory_iterator(out_dir)) {
            if (entry.is_directory() && fs::exists(entry.path() / "timeseries.csv")) subdirs.push_back(entry.path());
        }
        std::sort(subdirs.begin(), subdirs.end());
        for (const auto& d : subdirs) sources.emplace_back(d.filename().string(), d / "timeseries.csv");
    }
    if (sources.empty()) throw std::runtime_error("no timeseries.csv found under '" + out_dir.string() + "'");

    std::vector<fs::path> written;
    for (const auto& [label, path] : sources) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
        const MeanCurve c = mean_curve(path.string(), in);
        std::string text = "hour,q_households,q_traffic_lights\n";
        for (std::size_t h = 0; h < c.q_households.size(); ++h) {
            text += std::to_string(h) + ',' + shortest(c.q_households[h]) + ',' + shortest(c.q_traffic_lights[h]) + '\n';
        }
        written.push_back(out_dir / ("plot_" + label + ".csv"));
        write_file(written.back(), text);
    }
    return written;
}

}  // namespace resilsim
