// nodalab: run named nodal-length experiments and write their reports.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nodal/experiments.hpp"

namespace {

int run(const std::string& name, const std::string& config_path, const std::vector<std::string>& sets, int jobs,
        const std::string& output) {
    using nodal::ExperimentConfig;
    ExperimentConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot open config " << config_path << '\n';
            return 2;
        }
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) {
            std::cerr << config_path << ": not valid JSON\n";
            return 2;
        }
        if (!j.contains("experiment")) j["experiment"] = name;
        if (j["experiment"] != name) {
            std::cerr << "config names experiment " << j["experiment"] << " but the subcommand is " << name << '\n';
            return 2;
        }
        cfg = nodal::config_from_json(j);
    } else {
        cfg = nodal::default_config(name);
    }
    cfg = nodal::apply_overrides(cfg, sets);
    if (!output.empty()) cfg.output_dir = output;

    const nodal::ExperimentReport report = nodal::run_experiment(cfg, jobs);
    nodal::write_report(report, cfg.output_dir);
    for (const auto& v : report.verdicts)
        std::printf("%-4s %-40s %.6g %s %.6g\n", v.passed ? "PASS" : "FAIL", v.name.c_str(), v.value,
                    v.comparison.c_str(), v.threshold);
    std::printf("%s: %s (%.1f s), report in %s\n", name.c_str(), report.all_passed() ? "pass" : "fail",
                report.wall_seconds, cfg.output_dir.c_str());
    return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nodal-length laboratory"};
    app.require_subcommand(1);

    std::string config_path, output;
    std::vector<std::string> sets;
    int jobs = 1;

    app.add_subcommand("list", "list experiments");
    for (const auto& info : nodal::list_experiments()) {
        auto* sub = app.add_subcommand(info.name, info.description);
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--set", sets, "override a config field, key=value (repeatable)");
        sub->add_option("--jobs", jobs, "worker threads for sweep points")->check(CLI::PositiveNumber);
        sub->add_option("--output", output, "output directory");
    }

    CLI11_PARSE(app, argc, argv);

    const auto* chosen = app.get_subcommands().front();
    if (chosen->get_name() == "list") {
        for (const auto& info : nodal::list_experiments())
            std::printf("%-16s %s\n", info.name.c_str(), info.description.c_str());
        return 0;
    }
    try {
        return run(chosen->get_name(), config_path, sets, jobs, output);
    } catch (const nodal::ConfigError& e) {
        std::cerr << "usage error:\n";
        for (const auto& d : e.diagnostics()) std::cerr << "  " << d << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
