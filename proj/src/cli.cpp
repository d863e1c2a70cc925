#include "resilsim/cli.hpp"

#include "resilsim/engine.hpp"
#include "resilsim/interdependency.hpp"
#include "resilsim/outputs.hpp"
#include "resilsim/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace resilsim {

namespace {

std::string strategy_check(const std::string& value) {
    try {
        parse_strategy(value);
        return {};
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
}

std::string open_unit_check(const std::string& value) {
    try {
        const double v = std::stod(value);
        if (v > 0.0 && v < 1.0) return {};
    } catch (const std::exception&) {
    }
    return "must be in (0,1), got " + value;
}

}  // namespace

Command parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"Hurricane restoration simulator for coupled power and road networks", "resilsim"};
    app.require_subcommand(1);

    RunOptions run;
    std::vector<std::string> strategy_names;
    int teams = 0;
    bool no_crew = false, no_fuel = false;
    auto* run_cmd = app.add_subcommand("run", "Monte Carlo restoration study");
    run_cmd->add_option("--power", run.power, "power network records")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--roads", run.roads, "road network records")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--couplings", run.couplings, "households, traffic lights, fuel")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--scenario", run.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--strategy", strategy_names, "component | distance | traffic-light (repeatable)")
        ->check(CLI::Validator(strategy_check, "STRATEGY", "strategy"));
    run_cmd->add_option("--teams", teams, "restoration teams (overrides the scenario)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.monte_carlo.base_seed, "base seed")->capture_default_str();
    run_cmd->add_option("--min-reps", run.monte_carlo.min_replications)->capture_default_str();
    run_cmd->add_option("--max-reps", run.monte_carlo.max_replications)->capture_default_str();
    run_cmd->add_option("--confidence", run.monte_carlo.confidence)
        ->capture_default_str()
        ->check(CLI::Validator(open_unit_check, "(0,1)", "confidence"));
    run_cmd->add_option("--rel-halfwidth", run.monte_carlo.relative_halfwidth)
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--threads", run.monte_carlo.threads, "worker threads, 0 = all cores")->capture_default_str();
    run_cmd->add_option("--out", run.out_dir, "output directory")->capture_default_str();
    run_cmd->add_flag("--no-crew-access-dependence", no_crew, "crews ignore flooded roads");
    run_cmd->add_flag("--no-fuel-dependence", no_fuel, "plants never run short of fuel");

    GenerateOptions gen;
    auto* gen_cmd = app.add_subcommand("generate", "write a synthetic testbed");
    gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();
    gen_cmd->add_option("--grid-size", gen.params.grid_size)->capture_default_str();
    gen_cmd->add_option("--households", gen.params.households)->capture_default_str();
    gen_cmd->add_option("--substations", gen.params.substations)->capture_default_str();
    gen_cmd->add_option("--lights-fraction", gen.params.lights_fraction)->capture_default_str();
    gen_cmd->add_option("--seed", gen.params.seed)->capture_default_str();
    gen_cmd->add_option("--wind-mph", gen.params.wind_mph)->capture_default_str();
    gen_cmd->add_option("--teams", gen.params.teams)->capture_default_str();

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot-data", "mean Q curves per strategy from a run directory");
    plot_cmd->add_option("--out", plot.out_dir, "run output directory")->required()->check(CLI::ExistingDirectory);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    Command cmd;
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (auto* sub : {run_cmd, gen_cmd, plot_cmd}) {
            if (sub->parsed()) target = sub;
        }
        cmd.help = target->help();
        return cmd;
    } catch (const CLI::Error& e) {
        throw UsageError(e.what());
    }

    if (run_cmd->parsed()) {
        for (const auto& name : strategy_names) {
            const Strategy s = parse_strategy(name);
            if (std::find(run.strategies.begin(), run.strategies.end(), s) == run.strategies.end())
                run.strategies.push_back(s);
        }
        if (run.strategies.empty()) run.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
        if (teams > 0) run.teams = teams;
        run.crew_access_dependence = !no_crew;
        run.fuel_dependence = !no_fuel;
        try {
            run.monte_carlo.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        cmd.action = std::move(run);
    } else if (gen_cmd->parsed()) {
        cmd.action = std::move(gen);
    } else {
        cmd.action = std::move(plot);
    }
    return cmd;
}

namespace {

int execute(const RunOptions& opt, std::ostream& out) {
    Networks nets = load_networks(opt.power, opt.roads, opt.couplings);
    ScenarioConfig sc = load_scenario(opt.scenario, nets.roads);
    sc.hazard.crew_access_dependence = sc.hazard.crew_access_dependence && opt.crew_access_dependence;
    sc.hazard.fuel_dependence = sc.hazard.fuel_dependence && opt.fuel_dependence;
    if (sc.fuel_source_m) assign_fuel_sources(nets.power, nets.roads, *sc.fuel_source_m);

    const std::optional<int> teams = opt.teams ? opt.teams : sc.teams;
    if (!teams) throw UsageError("no crew count: pass --teams or set \"teams\" in the scenario");

    const RestorationContext ctx(nets.power, nets.roads, nets.households);
    std::vector<Treatment> treatments;
    std::optional<std::size_t> baseline;
    for (Strategy s : opt.strategies) {
        ReplicationConfig rc;
        rc.hazard = sc.hazard;
        rc.fragility = sc.fragility;
        rc.repair = sc.repair;
        rc.strategy = s;
        rc.teams = *teams;
        if (s == Strategy::ComponentBased) baseline = treatments.size();
        treatments.push_back({std::string(to_string(s)), std::move(rc)});
    }
    if (!baseline && treatments.size() > 1) baseline = 0;

    const StudyResult study = run_study(nets, ctx, std::move(treatments), opt.monte_carlo, baseline);
    RunInfo info{opt.monte_carlo.base_seed, opt.monte_carlo.confidence, opt.monte_carlo.relative_halfwidth, baseline};
    for (const auto& path : emit_outputs(study, info, opt.out_dir)) out << "wrote " << path.string() << '\n';

    for (const auto& s : study.summaries) {
        char line[256];
        std::snprintf(line, sizeof line, "%-14s reps=%zu  TRL=%.1f  TRL/MPR=%.1f%%  100%%-restored=%.1f h", s.label.c_str(),
                      s.replications, s.mean_trl, s.trl_over_mpr_pct, s.mean_restore_100);
        out << line;
        if (s.improvement_pct) {
            std::snprintf(line, sizeof line, "  improvement=%.1f%%", *s.improvement_pct);
            out << line;
        }
        out << '\n';
    }
    if (!study.converged) out << "warning: stopping rule not met within --max-reps\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Command cmd;
    try {
        cmd = parse_cli(args);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    if (!cmd.help.empty()) {
        out << cmd.help;
        return 0;
    }
    try {
        if (auto* run = std::get_if<RunOptions>(&cmd.action)) return execute(*run, out);
        if (auto* gen = std::get_if<GenerateOptions>(&cmd.action)) {
            write_testbed(generate_testbed(gen->params), gen->out_dir);
            out << "wrote testbed to " << gen->out_dir.string() << '\n';
            return 0;
        }
        if (auto* plot = std::get_if<PlotOptions>(&cmd.action)) {
            for (const auto& path : plot_data(plot->out_dir)) out << "wrote " << path.string() << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace resilsim
