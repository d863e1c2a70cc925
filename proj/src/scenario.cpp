#include "resilsim/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace resilsim {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& label,
                    const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ParseError(label, 0, "unknown key '" + key + "' in " + where);
    }
}

LognormalParams lognormal(const json& j) {
    return {j.at("mu").get<double>(), j.at("sigma").get<double>()};
}

std::optional<DamageLevel> parse_damage(const json& j) {
    if (j.is_null()) return std::nullopt;
    const auto s = j.get<std::string>();
    for (auto d : {DamageLevel::Moderate, DamageLevel::Severe, DamageLevel::Complete}) {
        if (to_string(d) == s) return d;
    }
    throw std::invalid_argument("unknown damage level '" + s + "'");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text, const RoadNetwork& roads, const std::string& label) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(label, 0, e.what());
    }
    if (!doc.is_object()) throw ParseError(label, 0, "scenario must be a JSON object");
    reject_unknown(doc,
                   {"wind_mph", "wind_cells", "runoff_in", "drainage_in_per_hr", "passability_threshold_in",
                    "fuel_dependence", "crew_access_dependence", "fuel_source_m", "teams", "fragility", "repair",
                    "description"},
                   label, "scenario");

    ScenarioConfig cfg;
    auto& hz = cfg.hazard;
    try {
        if (doc.contains("wind_mph") == doc.contains("wind_cells"))
            throw ParseError(label, 0, "give exactly one of 'wind_mph' or 'wind_cells'");
        if (doc.contains("wind_mph")) {
            hz.wind = WindField(doc["wind_mph"].get<double>());
        } else {
            std::vector<WindCell> cells;
            for (const auto& c : doc["wind_cells"]) {
                cells.push_back({c.at("name").get<std::string>(), c.at("x_min").get<double>(),
                                 c.at("y_min").get<double>(), c.at("x_max").get<double>(),
                                 c.at("y_max").get<double>(), c.at("mph").get<double>()});
            }
            hz.wind = WindField(std::move(cells));
        }

        hz.initial_runoff_in.assign(roads.links.size(), 0.0);
        if (doc.contains("runoff_in")) {
            const auto& r = doc["runoff_in"];
            reject_unknown(r, {"uniform", "default", "links"}, label, "runoff_in");
            if (r.contains("uniform")) {
                hz.initial_runoff_in.assign(roads.links.size(), r["uniform"].get<double>());
            } else {
                hz.initial_runoff_in.assign(roads.links.size(), r.value("default", 0.0));
                if (r.contains("links")) {
                    for (const auto& [id, depth] : r["links"].items()) {
                        hz.initial_runoff_in[roads.find_link(id)] = depth.get<double>();
                    }
                }
            }
        }
        hz.drainage_in_per_hr = doc.value("drainage_in_per_hr", 0.65);
        hz.passability_threshold_in = doc.value("passability_threshold_in", 2.0);
        hz.fuel_dependence = doc.value("fuel_dependence", true);
        hz.crew_access_dependence = doc.value("crew_access_dependence", true);
        hz.validate(roads.links.size());

        if (doc.contains("fuel_source_m")) {
            const auto& p = doc["fuel_source_m"];
            cfg.fuel_source_m = Point{p.at("x").get<double>(), p.at("y").get<double>()};
        }
        if (doc.contains("teams")) {
            const int teams = doc["teams"].get<int>();
            if (teams < 1) throw std::invalid_argument("teams must be positive");
            cfg.teams = teams;
        }

        if (doc.contains("fragility")) {
            const auto& f = doc["fragility"];
            reject_unknown(f, {"substation", "line"}, label, "fragility");
            if (f.contains("substation")) {
                const auto& s = f["substation"];
                cfg.fragility.substation =
                    SubstationFragility(lognormal(s.at("moderate")), lognormal(s.at("severe")),
                                        lognormal(s.at("complete")));
            }
            if (f.contains("line")) {
                const auto& l = f["line"];
                cfg.fragility.line =
                    LineFragility(l.at("w_critical_mph").get<double>(), l.at("w_collapse_mph").get<double>());
            }
        }

        if (doc.contains("repair")) {
            for (const auto& row : doc["repair"]) {
                const auto kind = parse_component_kind(row.at("kind").get<std::string>());
                const auto damage = parse_damage(row.value("damage", json(nullptr)));
                cfg.repair.set_row(kind, damage,
                                   {row.at("mean_h").get<double>(), row.at("sd_h").get<double>(),
                                    row.at("crews").get<int>()});
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(label, 0, e.what());
    } catch (const InvalidParams&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ParseError(label, 0, e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path, const RoadNetwork& roads) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), roads, path.string());
}

}  // namespace resilsim
