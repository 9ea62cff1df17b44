#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodal/errors.hpp"

namespace nodal {

/// Invalid configuration; one diagnostic per offending field.
class ConfigError : public InvalidArgument {
public:
    explicit ConfigError(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

struct ExperimentConfig {
    std::string experiment;
    std::string coefficient;
    std::vector<double> epsilon;
    int grid_n = 257;
    /// Boundary trace name, or a family token ("random-harmonic", "trig-family").
    std::string boundary;
    std::uint64_t seed = 1;
    int family_size = 0;
    double half_width = 1.0;
    /// Sup sizes of the perturbation delta * cos(x2) (perturbation experiment).
    std::vector<double> perturbations;
    /// Every verdict threshold and numerical knob in effect.
    std::map<std::string, double> tolerances;
    std::string output_dir = "out";
};

/// Defaults for a named experiment; throws ConfigError for unknown names.
ExperimentConfig default_config(const std::string& experiment);

/// Defaults for j["experiment"] overlaid with the fields of j, validated.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Applies "key=value" (value parsed as JSON, else taken as a string; nested
/// tolerance keys as tolerances.name) and revalidates.
ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& assignments);

void validate(const ExperimentConfig& cfg);

struct Verdict {
    std::string name;
    bool passed;
    double value;
    std::string comparison;
    double threshold;
};

struct ExperimentReport {
    nlohmann::json config;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    std::vector<std::pair<std::string, nlohmann::json>> certificates;
    std::vector<std::pair<std::string, std::string>> figures;
    std::vector<Verdict> verdicts;
    double wall_seconds = 0.0;

    bool all_passed() const;
};

/// Runs sweep points on `jobs` workers; results come back in sweep order.
ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs = 1);

/// report.csv, config.json, verdicts.json, certificates/*.json, figures/*.svg
/// and metadata.json (the only file with timestamps).
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

struct ExperimentInfo {
    std::string name;
    std::string description;
};

std::vector<ExperimentInfo> list_experiments();

/// f(0..n-1) on up to `jobs` threads, results in index order.
template <class R>
std::vector<R> parallel_map(int n, int jobs, const std::function<R(int)>& f) {
    std::vector<std::optional<R>> slots(n);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int k = next++; k < n; k = next++) slots[k].emplace(f(k));
    };
    const int workers = std::max(1, std::min(jobs, n));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace nodal
