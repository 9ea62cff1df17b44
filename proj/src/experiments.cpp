#include "nodal/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "nodal/certify.hpp"
#include "nodal/coeffs.hpp"
#include "nodal/families.hpp"
#include "nodal/indices.hpp"
#include "nodal/nodal.hpp"
#include "nodal/serialize.hpp"
#include "nodal/smp.hpp"
#include "nodal/solver.hpp"

namespace nodal {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
    return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : InvalidArgument("bad config: " + join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace {

const std::set<int> kGridSizes = {65, 129, 257, 513};
const std::string kRandomHarmonic = "random-harmonic";
const std::string kTrigFamily = "trig-family";

struct ExperimentEntry {
    std::string description;
    std::string coefficient;
    std::string boundary;
    std::vector<double> epsilon;
    int grid_n;
    int family_size;
    double half_width;
    std::map<std::string, double> tolerances;
};

const std::map<std::string, ExperimentEntry>& entries() {
    static const std::map<std::string, ExperimentEntry> table = {
        {"solve-validate",
         {"discrete maximum principle and manufactured-solution convergence order",
          "sinsin", "trig-1", {0.125}, 257, 0, 1.0,
          {{"min_order", 1.9}, {"dmp_tol", 1e-10}, {"cg_tol", 1e-12}}}},
        {"nodal-measure",
         {"nodal length by marching squares against box counting",
          "identity", "linear-x1", {1.0}, 257, 0, 1.0,
          {{"box_rel_tol", 0.1}, {"box_cells", 4.0}, {"expected_length", 2.0}, {"length_tol", 0.02}}}},
        {"doubling",
         {"L2 and sup doubling indices against the homogeneous-degree oracle",
          "identity", "harmonic-d3", {1.0}, 257, 0, 1.0,
          {{"l2_tol", 0.05}, {"sup_tol", 0.03}, {"radius_a", 0.2}, {"radius_b", 0.4}}}},
        {"harnack",
         {"Harnack ratios of positive solutions and the sup growth floor for solutions vanishing at 0",
          "sinsin", kTrigFamily, {0.125}, 257, 50, 1.0,
          {{"harnack_max", 2.0}, {"growth_min", 1.01}}}},
        {"approx-sweep",
         {"O(eps) distance to the harmonic extension",
          "sinsin", "harmonic-mix", {0.125, 0.0625, 0.03125, 0.015625}, 513, 0, 0.5,
          {{"ball_radius", 0.2}, {"min_slope", 0.8}}}},
        {"goodidx-certify",
         {"S-good annulus decomposition and sign-definite ball certification",
          "identity", kRandomHarmonic, {1.0}, 257, 20, 1.0,
          {{"inner", 0.5}, {"outer", 0.7}, {"S", 2.0}, {"min_pair_fraction", 0.8}, {"soundness_slack", 0.02}}}},
        {"tiling-sweep",
         {"epsilon-independent lower bound from the homogenization cube tiling",
          "sinsin", "linear-x1", {0.125, 0.0625, 0.03125}, 513, 0, 1.0,
          {{"case_threshold", 0.2}, {"cells_per_period", 8.0}, {"local_n", 257.0}, {"S", 2.0}, {"spread_max", 0.2},
           {"min_measured", 0.5}, {"soundness_slack", 0.02}}}},
        {"perturbation",
         {"stability of the annulus certificate under small perturbations",
          "identity", "linear-x1", {1.0}, 257, 0, 1.0,
          {{"positive_below", 0.1}, {"zero_above", 1.0}, {"soundness_slack", 0.02}}}},
        {"smp-certify",
         {"shell-descent certificate of the nodal length lower bound 2",
          "identity", "linear-x1", {1.0}, 257, 0, 1.0,
          {{"m_angles", 1024.0}, {"stop_radius", 0.004}, {"min_shell_width", 0.0}, {"min_certified", 1.96},
           {"soundness_slack", 0.02}}}},
        {"wsmp-infimum",
         {"measured and certified nodal length over a WSMP family vanishing at 0",
          "identity", kRandomHarmonic, {1.0}, 257, 20, 1.0,
          {{"m_angles", 256.0}, {"stop_radius", 0.01}, {"min_shell_width", 0.0}, {"min_measured", 1.95}, {"min_certified", 1.5},
           {"soundness_slack", 0.02}}}},
    };
    return table;
}

const ExperimentEntry& entry_for(const std::string& name) {
    auto it = entries().find(name);
    if (it == entries().end()) throw ConfigError({"experiment: unknown name '" + name + "'"});
    return it->second;
}

}  // namespace

std::vector<ExperimentInfo> list_experiments() {
    static const std::vector<std::string> order = {"solve-validate", "nodal-measure", "doubling",     "harnack",
                                                   "approx-sweep",   "goodidx-certify", "tiling-sweep", "perturbation",
                                                   "smp-certify",    "wsmp-infimum"};
    std::vector<ExperimentInfo> out;
    for (const auto& name : order) out.push_back({name, entries().at(name).description});
    return out;
}

ExperimentConfig default_config(const std::string& experiment) {
    const ExperimentEntry& s = entry_for(experiment);
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.coefficient = s.coefficient;
    cfg.epsilon = s.epsilon;
    cfg.grid_n = s.grid_n;
    cfg.boundary = s.boundary;
    cfg.family_size = s.family_size;
    cfg.half_width = s.half_width;
    cfg.tolerances = s.tolerances;
    if (experiment == "perturbation") cfg.perturbations = {0.01, 0.05, 10.0};
    cfg.output_dir = "out/" + experiment;
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    return {{"experiment", cfg.experiment},     {"coefficient", cfg.coefficient}, {"epsilon", cfg.epsilon},
            {"grid_n", cfg.grid_n},             {"boundary", cfg.boundary},       {"seed", cfg.seed},
            {"family_size", cfg.family_size},   {"half_width", cfg.half_width},   {"perturbations", cfg.perturbations},
            {"tolerances", cfg.tolerances},     {"output_dir", cfg.output_dir}};
}

void validate(const ExperimentConfig& cfg) {
    std::vector<std::string> bad;
    if (!entries().count(cfg.experiment)) throw ConfigError({"experiment: unknown name '" + cfg.experiment + "'"});
    const ExperimentEntry& s = entries().at(cfg.experiment);

    bool known = false;
    for (const auto& e : coefficient_library()) known = known || e.name == cfg.coefficient;
    if (!known) bad.push_back("coefficient: unknown library entry '" + cfg.coefficient + "'");
    if (cfg.epsilon.empty()) bad.push_back("epsilon: sweep is empty");
    for (double e : cfg.epsilon)
        if (!(e > 0.0 && e <= 1.0)) bad.push_back("epsilon: " + std::to_string(e) + " outside (0, 1]");
    if (!kGridSizes.count(cfg.grid_n)) bad.push_back("grid_n: must be one of 65, 129, 257, 513");

    const bool family_ok = (cfg.boundary == kRandomHarmonic &&
                            (cfg.experiment == "goodidx-certify" || cfg.experiment == "wsmp-infimum" ||
                             cfg.experiment == "smp-certify")) ||
                           (cfg.boundary == kTrigFamily && cfg.experiment == "harnack");
    if (!family_ok) {
        try {
            boundary_trace(cfg.boundary);
        } catch (const Error& e) {
            bad.push_back("boundary: " + std::string(e.what()));
        }
    }
    if (family_ok && cfg.family_size < 1) bad.push_back("family_size: a family needs at least one member");
    if (cfg.family_size < 0) bad.push_back("family_size: must be nonnegative");
    if (!(cfg.half_width > 0.0)) bad.push_back("half_width: must be positive");
    if (cfg.experiment == "perturbation" && cfg.perturbations.empty()) bad.push_back("perturbations: list is empty");
    for (const auto& [k, v] : cfg.tolerances) {
        if (!s.tolerances.count(k)) bad.push_back("tolerances." + k + ": not used by " + cfg.experiment);
        if (!std::isfinite(v)) bad.push_back("tolerances." + k + ": not finite");
    }
    if (cfg.output_dir.empty()) bad.push_back("output_dir: empty");
    if (!bad.empty()) throw ConfigError(bad);
}

namespace {

std::vector<double> number_list(const json& v, const std::string& field, std::vector<std::string>& bad) {
    std::vector<double> out;
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) {
        bad.push_back(field + ": expected a number or a list of numbers");
        return out;
    }
    for (const auto& x : v) {
        if (!x.is_number()) {
            bad.push_back(field + ": non-numeric entry " + x.dump());
            continue;
        }
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError({"config: expected a JSON object"});
    if (!j.contains("experiment") || !j["experiment"].is_string())
        throw ConfigError({"experiment: missing or not a string"});
    ExperimentConfig cfg = default_config(j["experiment"].get<std::string>());

    std::vector<std::string> bad;
    auto str = [&](const char* key, std::string& dst) {
        if (!j.contains(key)) return;
        if (j[key].is_string())
            dst = j[key].get<std::string>();
        else
            bad.push_back(std::string(key) + ": expected a string");
    };
    auto integer = [&](const char* key, auto& dst) {
        if (!j.contains(key)) return;
        if (j[key].is_number_integer())
            dst = j[key].get<std::remove_reference_t<decltype(dst)>>();
        else
            bad.push_back(std::string(key) + ": expected an integer");
    };
    static const std::set<std::string> fields = {"experiment", "coefficient", "epsilon",       "grid_n",
                                                 "boundary",   "seed",        "family_size",   "half_width",
                                                 "perturbations", "tolerances", "output_dir"};
    for (const auto& [k, v] : j.items())
        if (!fields.count(k)) bad.push_back(k + ": unknown field");

    str("coefficient", cfg.coefficient);
    str("boundary", cfg.boundary);
    str("output_dir", cfg.output_dir);
    integer("grid_n", cfg.grid_n);
    integer("family_size", cfg.family_size);
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned())
            cfg.seed = j["seed"].get<std::uint64_t>();
        else
            bad.push_back("seed: expected a nonnegative integer");
    }
    if (j.contains("half_width")) {
        if (j["half_width"].is_number())
            cfg.half_width = j["half_width"].get<double>();
        else
            bad.push_back("half_width: expected a number");
    }
    if (j.contains("epsilon")) cfg.epsilon = number_list(j["epsilon"], "epsilon", bad);
    if (j.contains("perturbations")) cfg.perturbations = number_list(j["perturbations"], "perturbations", bad);
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) {
            bad.push_back("tolerances: expected an object");
        } else {
            for (const auto& [k, v] : j["tolerances"].items()) {
                if (v.is_number())
                    cfg.tolerances[k] = v.get<double>();
                else
                    bad.push_back("tolerances." + k + ": expected a number");
            }
        }
    }
    if (!bad.empty()) throw ConfigError(bad);
    validate(cfg);
    return cfg;
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& assignments) {
    json j = config_to_json(cfg);
    std::vector<std::string> bad;
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) {
            bad.push_back("--set " + a + ": expected key=value");
            continue;
        }
        const std::string key = a.substr(0, eq), text = a.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) value = text;
        if (key.rfind("tolerances.", 0) == 0)
            j["tolerances"][key.substr(11)] = value;
        else if (key == "experiment")
            bad.push_back("--set experiment: choose the experiment as the subcommand");
        else
            j[key] = value;
    }
    if (!bad.empty()) throw ConfigError(bad);
    return config_from_json(j);
}

bool ExperimentReport::all_passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Verdict at_least(const std::string& name, double value, double threshold) {
    return {name, value >= threshold, value, ">=", threshold};
}

Verdict at_most(const std::string& name, double value, double threshold) {
    return {name, value <= threshold, value, "<=", threshold};
}

double tol(const ExperimentConfig& cfg, const std::string& key) { return cfg.tolerances.at(key); }

Grid grid_for(const ExperimentConfig& cfg, int n) { return Grid({0.0, 0.0}, cfg.half_width, n); }

ScalarField solve_trace(const ExperimentConfig& cfg, double eps, int n, const std::string& trace,
                        SolveReport* report = nullptr) {
    const CoefficientField a = library_coefficient(cfg.coefficient, eps);
    auto [u, rep] = solve_dirichlet(a, grid_for(cfg, n), boundary_trace(trace));
    if (report) *report = rep;
    return u;
}

// Constants solve the equation, so shifting by u(0) keeps a solution.
ScalarField centered(const ScalarField& u) { return u.affine(1.0, -u({0.0, 0.0})); }

std::string svg_string(const std::function<void(std::ostream&)>& emit) {
    std::ostringstream os;
    emit(os);
    return os.str();
}

std::vector<NamedField> build_family(const ExperimentConfig& cfg, double eps, int jobs) {
    if (cfg.boundary == kRandomHarmonic) {
        const Grid g = grid_for(cfg, cfg.grid_n);
        return parallel_map<NamedField>(cfg.family_size, jobs, [&](int k) {
            const HarmonicPolynomial p = random_harmonic(cfg.seed + k);
            return NamedField{p.id, ScalarField::sample(g, [&](Point x) { return p(x); })};
        });
    }
    return {NamedField{cfg.boundary, centered(solve_trace(cfg, eps, cfg.grid_n, cfg.boundary))}};
}

// --- solve-validate -------------------------------------------------------

// div(a(x1) grad u) = 0 with a = 2 + sin x1 and u = F(x1) + x2, F' = 1/a.
double manufactured_exact(Point p) {
    const double s3 = std::sqrt(3.0);
    return 2.0 / s3 * std::atan((2.0 * std::tan(0.5 * p.x) + 1.0) / s3) + p.y;
}

double manufactured_error(const ExperimentConfig& cfg, int n, double cg_tol) {
    const CoefficientField a = CoefficientField::general(
        [](Point x) { return Matrix2{2.0 + std::sin(x.x), 0.0, 2.0 + std::sin(x.x)}; }, 3.0, 1.0, "manufactured");
    const Grid g = grid_for(cfg, n);
    auto [u, rep] = solve_dirichlet(a, g, {manufactured_exact, "manufactured"}, cg_tol);
    double err = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(u.at(i, j) - manufactured_exact(g.node(i, j))));
    return err;
}

void run_solve_validate(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"run", "epsilon", "n", "iterations", "residual", "dmp_excess", "max_error", "status"};
    struct Row {
        std::vector<std::string> cells;
        double excess;
        bool ok;
    };
    const double cg = tol(cfg, "cg_tol");
    auto rows = parallel_map<Row>(static_cast<int>(cfg.epsilon.size()), jobs, [&](int k) {
        const double eps = cfg.epsilon[k];
        try {
            const CoefficientField a = library_coefficient(cfg.coefficient, eps);
            auto [u, r] = solve_dirichlet(a, grid_for(cfg, cfg.grid_n), boundary_trace(cfg.boundary), cg);
            const MaxPrincipleCheck m = max_principle_check(u);
            const double scale = std::max(1.0, u.max_abs());
            return Row{{"solve", num(eps), std::to_string(cfg.grid_n), std::to_string(r.iterations), num(r.residual),
                        num(m.excess / scale), "", "ok"},
                       m.excess / scale, true};
        } catch (const Error& e) {
            return Row{{"solve", num(eps), std::to_string(cfg.grid_n), "", "", "", "", e.what()}, 0.0, false};
        }
    });
    double worst = 0.0;
    bool all_solved = true;
    for (auto& r : rows) {
        rep.csv_rows.push_back(r.cells);
        worst = std::max(worst, r.excess);
        all_solved = all_solved && r.ok;
    }
    rep.verdicts.push_back({"all_solves_succeeded", all_solved, all_solved ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back(at_most("max_principle_excess", worst, tol(cfg, "dmp_tol")));

    const int fine = cfg.grid_n, coarse = (cfg.grid_n + 1) / 2;
    const std::vector<int> sizes = {coarse, fine};
    auto errs = parallel_map<double>(2, jobs, [&](int k) { return manufactured_error(cfg, sizes[k], cg); });
    for (int k = 0; k < 2; ++k)
        rep.csv_rows.push_back({"manufactured", "", std::to_string(sizes[k]), "", "", "", num(errs[k]), "ok"});
    rep.verdicts.push_back(at_least("convergence_order", std::log2(errs[0] / errs[1]), tol(cfg, "min_order")));
}

// --- nodal-measure --------------------------------------------------------

void run_nodal_measure(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"epsilon", "n", "marching_length", "box_length", "relative_gap", "status"};
    struct Out {
        std::vector<std::string> cells;
        double marching = 0.0, gap = 0.0;
        bool ok = false;
        std::string svg;
    };
    auto outs = parallel_map<Out>(static_cast<int>(cfg.epsilon.size()), jobs, [&](int k) {
        const double eps = cfg.epsilon[k];
        Out o;
        try {
            const ScalarField u = centered(solve_trace(cfg, eps, cfg.grid_n, cfg.boundary));
            const Ball unit({0.0, 0.0}, std::min(1.0, cfg.half_width));
            const NodalSet z = extract_nodal_set(u);
            o.marching = nodal_length_in(z, unit);
            const double box = box_counting_length(u, unit, tol(cfg, "box_cells") * u.grid().spacing());
            o.gap = o.marching > 0.0 ? std::abs(box - o.marching) / o.marching : 0.0;
            o.ok = true;
            o.cells = {num(eps), std::to_string(cfg.grid_n), num(o.marching), num(box), num(o.gap), "ok"};
            o.svg = svg_string([&](std::ostream& os) {
                SvgPlot plot({0.0, 0.0}, cfg.half_width);
                plot.circle(unit, "#999999");
                plot.segments(z.segments, "black");
                plot.write(os);
            });
        } catch (const Error& e) {
            o.cells = {num(eps), std::to_string(cfg.grid_n), "", "", "", e.what()};
        }
        return o;
    });
    for (std::size_t k = 0; k < outs.size(); ++k) {
        const Out& o = outs[k];
        rep.csv_rows.push_back(o.cells);
        const std::string tag = "eps=" + num(cfg.epsilon[k]);
        if (!o.ok) {
            rep.verdicts.push_back({"measured_" + tag, false, 0.0, "==", 1.0});
            continue;
        }
        rep.figures.push_back({"nodal-" + std::to_string(k) + ".svg", o.svg});
        rep.verdicts.push_back(at_most("box_counting_gap_" + tag, o.gap, tol(cfg, "box_rel_tol")));
        if (tol(cfg, "expected_length") >= 0.0)
            rep.verdicts.push_back(at_most("length_error_" + tag, std::abs(o.marching - tol(cfg, "expected_length")),
                                           tol(cfg, "length_tol")));
    }
}

// --- doubling -------------------------------------------------------------

void run_doubling(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"epsilon", "radius", "doubling_l2", "doubling_sup"};
    int degree = -1;
    if (cfg.boundary.rfind("harmonic-d", 0) == 0 && cfg.coefficient == "identity")
        degree = std::stoi(cfg.boundary.substr(10));
    const std::vector<double> radii = {tol(cfg, "radius_a"), tol(cfg, "radius_b")};
    struct Out {
        std::vector<std::array<double, 2>> values;
        std::string error;
    };
    auto outs = parallel_map<Out>(static_cast<int>(cfg.epsilon.size()), jobs, [&](int k) {
        Out o;
        try {
            const ScalarField u = solve_trace(cfg, cfg.epsilon[k], cfg.grid_n, cfg.boundary);
            for (double r : radii)
                o.values.push_back({doubling_index_l2(u, {0.0, 0.0}, r), doubling_index_sup(u, {0.0, 0.0}, r, 0.5 * r)});
        } catch (const Error& e) {
            o.error = e.what();
        }
        return o;
    });
    if (degree >= 0) {
        rep.config["oracle"] = {{"l2_expected", 2 * degree + 2}, {"sup_expected", degree}};
    }
    for (std::size_t k = 0; k < outs.size(); ++k) {
        const std::string tag = "eps=" + num(cfg.epsilon[k]);
        if (!outs[k].error.empty()) {
            rep.csv_rows.push_back({num(cfg.epsilon[k]), "", "", outs[k].error});
            rep.verdicts.push_back({"solved_" + tag, false, 0.0, "==", 1.0});
            continue;
        }
        for (std::size_t r = 0; r < radii.size(); ++r) {
            const auto [l2, sup] = outs[k].values[r];
            rep.csv_rows.push_back({num(cfg.epsilon[k]), num(radii[r]), num(l2), num(sup)});
            const std::string rt = tag + "_r=" + num(radii[r]);
            if (degree >= 0) {
                rep.verdicts.push_back(at_most("l2_error_" + rt, std::abs(l2 - (2 * degree + 2)), tol(cfg, "l2_tol")));
                rep.verdicts.push_back(at_most("sup_error_" + rt, std::abs(sup - degree), tol(cfg, "sup_tol")));
            } else {
                rep.verdicts.push_back({"finite_" + rt, std::isfinite(l2) && std::isfinite(sup), l2, "finite", 0.0});
            }
        }
    }
}

// --- harnack --------------------------------------------------------------

void run_harnack(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"member", "epsilon", "harnack_ratio", "growth_ratio", "harnack_type_ratio", "status"};
    const bool family = cfg.boundary == kTrigFamily;
    const int members = family ? cfg.family_size : 1;
    struct Out {
        std::vector<std::string> cells;
        double harnack = 0.0, growth = 0.0, type_ratio = 0.0;
        bool ok = false;
    };
    double worst_harnack = 0.0, min_growth = std::numeric_limits<double>::infinity(),
           min_type = std::numeric_limits<double>::infinity();
    bool all_ok = true;
    for (double eps : cfg.epsilon) {
        auto outs = parallel_map<Out>(members, jobs, [&](int k) {
            const std::string seed = std::to_string(cfg.seed + k);
            const std::string signed_trace = family ? "trig-" + seed : cfg.boundary;
            const std::string positive_trace = family ? "positive-trig-" + seed : cfg.boundary;
            Out o;
            try {
                const ScalarField p = solve_trace(cfg, eps, cfg.grid_n, positive_trace);
                o.harnack = harnack_ratio(p, Ball({0.0, 0.0}, 0.5)).ratio;
                const ScalarField u = centered(solve_trace(cfg, eps, cfg.grid_n, signed_trace));
                o.growth = interpolant_sup_abs(u, Ball({0.0, 0.0}, 0.8)) / interpolant_sup_abs(u, Ball({0.0, 0.0}, 0.4));
                const HarnackTypeValues hv = harnack_type_check(u);
                o.type_ratio = hv.rhs > 0.0 ? hv.lhs / hv.rhs : 0.0;
                o.ok = true;
                o.cells = {signed_trace, num(eps), num(o.harnack), num(o.growth), num(o.type_ratio), "ok"};
            } catch (const Error& e) {
                o.cells = {signed_trace, num(eps), "", "", "", e.what()};
            }
            return o;
        });
        for (const auto& o : outs) {
            rep.csv_rows.push_back(o.cells);
            all_ok = all_ok && o.ok;
            if (!o.ok) continue;
            worst_harnack = std::max(worst_harnack, o.harnack);
            min_growth = std::min(min_growth, o.growth);
            min_type = std::min(min_type, o.type_ratio);
        }
    }
    rep.verdicts.push_back({"all_members_solved", all_ok, all_ok ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back(at_most("max_harnack_ratio", worst_harnack, tol(cfg, "harnack_max")));
    rep.verdicts.push_back({"min_growth_ratio", min_growth > tol(cfg, "growth_min"), min_growth, ">",
                            tol(cfg, "growth_min")});
    rep.verdicts.push_back({"min_harnack_type_ratio", min_type > 0.0, min_type, ">", 0.0});
}

// --- approx-sweep ---------------------------------------------------------

void run_approx_sweep(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"epsilon", "n", "h_over_eps", "err_sup", "doubling_of_extension", "status"};
    const Ball ball({0.0, 0.0}, tol(cfg, "ball_radius"));
    struct Out {
        double err = 0.0, doubling = 0.0;
        std::string error;
    };
    auto outs = parallel_map<Out>(static_cast<int>(cfg.epsilon.size()), jobs, [&](int k) {
        Out o;
        try {
            const ApproximationError a =
                approximation_error(solve_trace(cfg, cfg.epsilon[k], cfg.grid_n, cfg.boundary), ball);
            o.err = a.err_sup;
            o.doubling = a.doubling_of_extension;
        } catch (const Error& e) {
            o.error = e.what();
        }
        return o;
    });
    std::vector<double> lx, ly;
    const double h = grid_for(cfg, cfg.grid_n).spacing();
    for (std::size_t k = 0; k < outs.size(); ++k) {
        const double eps = cfg.epsilon[k];
        rep.csv_rows.push_back({num(eps), std::to_string(cfg.grid_n), num(h / eps), outs[k].error.empty() ? num(outs[k].err) : "",
                                outs[k].error.empty() ? num(outs[k].doubling) : "",
                                outs[k].error.empty() ? "ok" : outs[k].error});
        if (outs[k].error.empty() && outs[k].err > 0.0) {
            lx.push_back(std::log(eps));
            ly.push_back(std::log(outs[k].err));
        }
    }
    double slope = 0.0;
    if (lx.size() >= 2) {
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < lx.size(); ++k) {
            sxy += (lx[k] - mx) * (ly[k] - my);
            sxx += (lx[k] - mx) * (lx[k] - mx);
        }
        slope = sxy / sxx;
    }
    rep.verdicts.push_back({"all_points_solved", lx.size() == outs.size(), static_cast<double>(lx.size()), "==",
                            static_cast<double>(outs.size())});
    rep.verdicts.push_back(at_least("loglog_slope", slope, tol(cfg, "min_slope")));
}

// --- goodidx-certify ------------------------------------------------------

void run_goodidx(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"member", "k", "k_plus", "k_minus", "good_both", "pairs", "chain_ok", "certified", "measured",
                      "status"};
    struct Out {
        std::vector<std::string> cells;
        bool ok = false, chain = false;
        int k = 0, both = 0, pairs = 0;
        double certified = 0.0, measured = 0.0;
        json cert;
        std::string svg;
    };
    const double inner = tol(cfg, "inner"), outer = tol(cfg, "outer"), S = tol(cfg, "S");
    const auto family = build_family(cfg, cfg.epsilon.front(), jobs);
    auto outs = parallel_map<Out>(static_cast<int>(family.size()), jobs, [&](int m) {
        const auto& [id, u] = family[m];
        Out o;
        try {
            const AnnulusDecomposition dec = decompose_annuli(u, {0.0, 0.0}, inner, outer, 0, S);
            const double rho = std::max(0.5 * dec.width(), 4.0 * u.grid().spacing());
            std::vector<SignDefiniteBall> balls;
            if (rho < dec.width()) balls = locate_sign_definite_balls(u, dec, rho);
            o.k = dec.k();
            o.both = static_cast<int>(dec.good_both().size());
            std::set<int> plus, minus;
            for (const auto& b : balls) (b.sign > 0 ? plus : minus).insert(b.index);
            for (int i : plus) o.pairs += minus.count(i) ? 1 : 0;
            o.chain = chain_inequality_holds(dec);
            o.certified = certified_length_from_decomposition(u, dec, balls);
            o.measured = nodal_length_in(u, Annulus({0.0, 0.0}, std::max(0.0, inner - dec.width()), outer));
            o.ok = true;
            o.cert = certificate_json(dec, balls, o.certified, inputs_hash(u));
            if (m == 0)
                o.svg = svg_string([&](std::ostream& os) { write_annulus_svg(extract_nodal_set(u), dec, balls, os); });
            o.cells = {id,           std::to_string(o.k), std::to_string(dec.k_plus), std::to_string(dec.k_minus),
                       std::to_string(o.both), std::to_string(o.pairs), o.chain ? "1" : "0", num(o.certified),
                       num(o.measured), "ok"};
        } catch (const Error& e) {
            o.cells = {id, "", "", "", "", "", "", "", "", e.what()};
        }
        return o;
    });
    bool all_ok = true, chain = true, third = true;
    double worst_excess = -std::numeric_limits<double>::infinity();
    int both = 0, pairs = 0;
    for (std::size_t m = 0; m < outs.size(); ++m) {
        const Out& o = outs[m];
        rep.csv_rows.push_back(o.cells);
        all_ok = all_ok && o.ok;
        if (!o.ok) continue;
        chain = chain && o.chain;
        third = third && 3 * o.both >= o.k;
        worst_excess = std::max(worst_excess, o.certified - o.measured);
        both += o.both;
        pairs += o.pairs;
        rep.certificates.push_back({"annulus-" + family[m].id + ".json", o.cert});
        if (!o.svg.empty()) rep.figures.push_back({"annulus-" + family[m].id + ".svg", o.svg});
    }
    rep.verdicts.push_back({"all_members_decomposed", all_ok, all_ok ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back({"chain_inequality", chain, chain ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back({"good_both_at_least_k_over_3", third, third ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back(
        at_least("verified_pair_fraction", both > 0 ? static_cast<double>(pairs) / both : 0.0, tol(cfg, "min_pair_fraction")));
    rep.verdicts.push_back(at_most("certified_minus_measured", worst_excess, tol(cfg, "soundness_slack")));
}

// --- tiling-sweep ---------------------------------------------------------

void run_tiling(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"epsilon", "n", "k", "single_ball", "disjoint_count", "per_cube_bound", "min_cube_bound",
                      "total_bound", "measured", "chain_ok", "status"};
    struct Out {
        std::vector<std::string> cells;
        bool ok = false, chain = true;
        double total = 0.0, measured = 0.0;
        json cert;
        std::string svg;
    };
    TilingOptions opts;
    opts.case_threshold = tol(cfg, "case_threshold");
    opts.local_n = static_cast<int>(tol(cfg, "local_n"));
    opts.S = tol(cfg, "S");
    auto outs = parallel_map<Out>(static_cast<int>(cfg.epsilon.size()), jobs, [&](int k) {
        const double eps = cfg.epsilon[k];
        // h = eps / cells_per_period, capped by grid_n
        const int wanted = static_cast<int>(std::lround(2.0 * tol(cfg, "cells_per_period") * cfg.half_width / eps)) + 1;
        const int n = std::clamp(wanted, 17, cfg.grid_n);
        Out o;
        try {
            const ScalarField u = centered(solve_trace(cfg, eps, n, cfg.boundary));
            const TilingCertificate t = tile_and_certify(u, library_coefficient(cfg.coefficient, eps), opts);
            for (const auto& c : t.cubes) o.chain = o.chain && c.chain_ok;
            const NodalSet z = extract_nodal_set(u);
            o.measured = nodal_length_in(z, Ball({0.0, 0.0}, 1.0));
            o.total = t.total_bound;
            o.ok = true;
            o.cert = certificate_json(t, inputs_hash(u));
            o.svg = svg_string([&](std::ostream& os) { write_tiling_svg(z, t, {0.0, 0.0}, os); });
            o.cells = {num(eps),           std::to_string(n),       std::to_string(t.k), t.single_ball ? "1" : "0",
                       std::to_string(t.disjoint_count), num(t.per_cube_bound), num(t.min_cube_bound),
                       num(t.total_bound), num(o.measured),         o.chain ? "1" : "0", "ok"};
        } catch (const Error& e) {
            o.cells = {num(eps), std::to_string(n), "", "", "", "", "", "", "", "", e.what()};
        }
        return o;
    });
    std::vector<double> totals;
    bool all_ok = true, chain = true, positive = true;
    double min_measured = std::numeric_limits<double>::infinity(), worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < outs.size(); ++k) {
        const Out& o = outs[k];
        rep.csv_rows.push_back(o.cells);
        all_ok = all_ok && o.ok;
        if (!o.ok) continue;
        const std::string tag = std::to_string(k);
        rep.certificates.push_back({"tiling-" + tag + ".json", o.cert});
        rep.figures.push_back({"tiling-" + tag + ".svg", o.svg});
        totals.push_back(o.total);
        chain = chain && o.chain;
        positive = positive && o.total > 0.0;
        min_measured = std::min(min_measured, o.measured);
        worst_excess = std::max(worst_excess, o.total - o.measured);
    }
    double spread = std::numeric_limits<double>::infinity();
    if (!totals.empty()) {
        const double mean = std::accumulate(totals.begin(), totals.end(), 0.0) / totals.size();
        spread = 0.0;
        for (double t : totals) spread = std::max(spread, mean > 0.0 ? std::abs(t - mean) / mean : spread);
    }
    rep.verdicts.push_back({"all_points_certified", all_ok, all_ok ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back({"bounds_positive", positive, positive ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back(at_most("relative_spread", spread, tol(cfg, "spread_max")));
    rep.verdicts.push_back(at_least("min_measured_length", min_measured, tol(cfg, "min_measured")));
    rep.verdicts.push_back(at_most("certified_minus_measured", worst_excess, tol(cfg, "soundness_slack")));
    rep.verdicts.push_back({"chain_inequality", chain, chain ? 1.0 : 0.0, "==", 1.0});
}

// --- perturbation ---------------------------------------------------------

void run_perturbation(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"delta", "eps_observed", "certified", "measured", "status"};
    const Grid g = grid_for(cfg, cfg.grid_n);
    const BoundaryData trace = boundary_trace(cfg.boundary);
    const ScalarField u0 = ScalarField::sample(g, trace.trace);
    const Ball region({0.0, 0.0}, 1.0);
    struct Out {
        std::vector<std::string> cells;
        bool ok = false;
        double certified = 0.0, measured = 0.0;
        json cert;
    };
    auto outs = parallel_map<Out>(static_cast<int>(cfg.perturbations.size()), jobs, [&](int k) {
        const double delta = cfg.perturbations[k];
        Out o;
        try {
            const ScalarField u = ScalarField::sample(g, [&](Point p) { return trace.trace(p) + delta * std::cos(p.y); });
            const PerturbationResult r = perturbation_certificate(u, u0, region);
            o.certified = r.certified_length;
            o.measured = nodal_length_in(u, region);
            o.ok = true;
            o.cert = certificate_json(r, inputs_hash(u));
            o.cells = {num(delta), num(r.eps_observed), num(o.certified), num(o.measured), "ok"};
        } catch (const Error& e) {
            o.cells = {num(delta), "", "", "", e.what()};
        }
        return o;
    });
    for (std::size_t k = 0; k < outs.size(); ++k) {
        const Out& o = outs[k];
        const double delta = cfg.perturbations[k];
        const std::string tag = "delta=" + num(delta);
        rep.csv_rows.push_back(o.cells);
        if (!o.ok) {
            rep.verdicts.push_back({"certified_" + tag, false, 0.0, "==", 1.0});
            continue;
        }
        rep.certificates.push_back({"perturbation-" + std::to_string(k) + ".json", o.cert});
        if (delta <= tol(cfg, "positive_below"))
            rep.verdicts.push_back({"positive_" + tag, o.certified > 0.0, o.certified, ">", 0.0});
        if (delta >= tol(cfg, "zero_above"))
            rep.verdicts.push_back({"zero_" + tag, o.certified == 0.0, o.certified, "==", 0.0});
        rep.verdicts.push_back(at_most("soundness_" + tag, o.certified - o.measured, tol(cfg, "soundness_slack")));
    }
}

// --- smp-certify / wsmp-infimum -------------------------------------------

void run_smp(const ExperimentConfig& cfg, int jobs, ExperimentReport& rep) {
    rep.csv_header = {"member", "shells", "s_final", "certified", "measured", "completed", "diagnostic"};
    const auto family = build_family(cfg, cfg.epsilon.front(), jobs);
    struct Out {
        std::vector<std::string> cells;
        bool ok = false;
        double certified = 0.0, measured = 0.0;
        json cert;
        std::string svg;
    };
    SmpCertifyOptions opts;
    opts.min_shell_width = tol(cfg, "min_shell_width");
    const int m_angles = static_cast<int>(tol(cfg, "m_angles"));
    auto outs = parallel_map<Out>(static_cast<int>(family.size()), jobs, [&](int k) {
        const auto& [id, u] = family[k];
        Out o;
        try {
            const SmpCertificate c = certify_smp_lower_bound(u, m_angles, tol(cfg, "stop_radius"), opts);
            const NodalSet z = extract_nodal_set(u);
            o.measured = nodal_length_in(z, Ball({0.0, 0.0}, 1.0));
            o.certified = c.certified_lower_bound;
            o.ok = true;
            o.cert = certificate_json(c, inputs_hash(u));
            o.svg = svg_string([&](std::ostream& os) { write_smp_svg(z, c, os); });
            o.cells = {id,          std::to_string(c.shells.size()), num(c.s_final), num(c.certified_lower_bound),
                       num(o.measured), c.completed ? "1" : "0",     c.diagnostic};
        } catch (const Error& e) {
            o.cells = {id, "", "", "", "", "", e.what()};
        }
        return o;
    });
    bool all_ok = true;
    double min_cert = std::numeric_limits<double>::infinity(), min_measured = min_cert;
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < outs.size(); ++k) {
        const Out& o = outs[k];
        rep.csv_rows.push_back(o.cells);
        all_ok = all_ok && o.ok;
        if (!o.ok) continue;
        rep.certificates.push_back({"smp-" + family[k].id + ".json", o.cert});
        rep.figures.push_back({"smp-" + family[k].id + ".svg", o.svg});
        min_cert = std::min(min_cert, o.certified);
        min_measured = std::min(min_measured, o.measured);
        worst_excess = std::max(worst_excess, o.certified - o.measured);
    }
    rep.verdicts.push_back({"all_members_certified", all_ok, all_ok ? 1.0 : 0.0, "==", 1.0});
    rep.verdicts.push_back(at_least("min_certified", min_cert, tol(cfg, "min_certified")));
    if (cfg.tolerances.count("min_measured"))
        rep.verdicts.push_back(at_least("min_measured", min_measured, tol(cfg, "min_measured")));
    rep.verdicts.push_back(at_most("certified_minus_measured", worst_excess, tol(cfg, "soundness_slack")));
}

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, int jobs) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.config = config_to_json(cfg);
    const std::string& e = cfg.experiment;
    if (e == "solve-validate")
        run_solve_validate(cfg, jobs, rep);
    else if (e == "nodal-measure")
        run_nodal_measure(cfg, jobs, rep);
    else if (e == "doubling")
        run_doubling(cfg, jobs, rep);
    else if (e == "harnack")
        run_harnack(cfg, jobs, rep);
    else if (e == "approx-sweep")
        run_approx_sweep(cfg, jobs, rep);
    else if (e == "goodidx-certify")
        run_goodidx(cfg, jobs, rep);
    else if (e == "tiling-sweep")
        run_tiling(cfg, jobs, rep);
    else if (e == "perturbation")
        run_perturbation(cfg, jobs, rep);
    else
        run_smp(cfg, jobs, rep);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "certificates");
    fs::create_directories(dir / "figures");
    auto open = [](const fs::path& p) {
        std::ofstream os(p, std::ios::binary);
        if (!os) throw Error("cannot write " + p.string());
        return os;
    };
    {
        auto os = open(dir / "report.csv");
        for (std::size_t k = 0; k < report.csv_header.size(); ++k) os << (k ? "," : "") << report.csv_header[k];
        os << '\n';
        for (const auto& row : report.csv_rows) {
            for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_cell(row[k]);
            os << '\n';
        }
    }
    open(dir / "config.json") << report.config.dump(2) << '\n';
    json verdicts = json::array();
    for (const auto& v : report.verdicts)
        verdicts.push_back({{"name", v.name},
                            {"passed", v.passed},
                            {"value", v.value},
                            {"comparison", v.comparison},
                            {"threshold", v.threshold}});
    open(dir / "verdicts.json") << json{{"all_passed", report.all_passed()}, {"verdicts", verdicts}}.dump(2) << '\n';
    for (const auto& [name, doc] : report.certificates) open(dir / "certificates" / name) << doc.dump(2) << '\n';
    for (const auto& [name, svg] : report.figures) open(dir / "figures" / name) << svg;
    open(dir / "metadata.json") << json{{"written_at", iso_now()}, {"wall_seconds", report.wall_seconds}}.dump(2)
                                << '\n';
}

}  // namespace nodal
