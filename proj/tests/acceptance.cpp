// One line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <thread>

#include "nodal/coeffs.hpp"
#include "nodal/experiments.hpp"
#include "nodal/families.hpp"
#include "nodal/nodal.hpp"
#include "nodal/smp.hpp"
#include "nodal/solver.hpp"

using namespace nodal;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::map<std::string, ExperimentReport>& cache() {
    static std::map<std::string, ExperimentReport> c;
    return c;
}

const ExperimentReport& report(const std::string& name, const std::vector<std::string>& overrides = {}) {
    std::string key = name;
    for (const auto& o : overrides) key += " " + o;
    auto it = cache().find(key);
    if (it == cache().end())
        it = cache().emplace(key, run_experiment(apply_overrides(default_config(name), overrides), jobs())).first;
    return it->second;
}

const Verdict& verdict(const ExperimentReport& r, const std::string& name) {
    for (const auto& v : r.verdicts)
        if (v.name == name) return v;
    throw Error("no verdict " + name);
}

std::string show(const Verdict& v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.6g %s %.6g", v.name.c_str(), v.value, v.comparison.c_str(), v.threshold);
    return buf;
}

// every verdict of the report must pass; detail lists the named ones
Outcome all_of(const ExperimentReport& r, const std::vector<std::string>& shown) {
    Outcome o{r.all_passed(), ""};
    for (const auto& v : r.verdicts)
        if (!v.passed) o.detail += (o.detail.empty() ? "" : "; ") + std::string("FAILED ") + show(v);
    for (const auto& n : shown) o.detail += (o.detail.empty() ? "" : "; ") + show(verdict(r, n));
    return o;
}

Outcome c1() {
    const ScalarField u = ScalarField::sample(Grid({0, 0}, 1.0, 257), [](Point p) { return p.x; });
    const auto cert = certify_smp_lower_bound(u, 1024, 0.004);
    const double len = nodal_length_in(u, Ball({0, 0}, 1.0));
    char buf[160];
    std::snprintf(buf, sizeof buf, "certified=%.6f measured=%.6f shells=%zu", cert.certified_lower_bound, len,
                  cert.shells.size());
    const bool ok = cert.certified_lower_bound >= 1.95 && cert.certified_lower_bound <= 2.0 && std::abs(len - 2.0) <= 0.02;
    return {ok, buf};
}

Outcome c2() {
    const auto& r = report("wsmp-infimum");
    Outcome o = all_of(r, {"min_measured", "min_certified"});
    o.passed = o.passed && r.csv_rows.size() == 20 && verdict(r, "min_measured").value >= 1.95 &&
               verdict(r, "min_certified").value >= 1.5;
    return o;
}

Outcome c3() {
    Outcome o{true, ""};
    for (int d = 1; d <= 3; ++d) {
        const auto& r = report("doubling", {"boundary=harmonic-d" + std::to_string(d)});
        double worst_l2 = 0.0, worst_sup = 0.0;
        for (const auto& v : r.verdicts) {
            if (v.name.rfind("l2_error_", 0) == 0) worst_l2 = std::max(worst_l2, v.value);
            if (v.name.rfind("sup_error_", 0) == 0) worst_sup = std::max(worst_sup, v.value);
        }
        o.passed = o.passed && r.all_passed() && worst_l2 <= 0.05 && worst_sup <= 0.03;
        char buf[120];
        std::snprintf(buf, sizeof buf, "%sd=%d l2_err=%.4f sup_err=%.4f", d > 1 ? "; " : "", d, worst_l2, worst_sup);
        o.detail += buf;
    }
    return o;
}

Outcome c4() {
    const auto cfg = default_config("approx-sweep");
    const double h = 2.0 * cfg.half_width / (cfg.grid_n - 1);
    bool resolved = true;
    for (double e : cfg.epsilon) resolved = resolved && h <= e / 8 + 1e-15;
    const auto& r = report("approx-sweep");
    Outcome o = all_of(r, {"loglog_slope"});
    o.passed = o.passed && resolved && verdict(r, "loglog_slope").value >= 0.8;
    o.detail += resolved ? "; h<=eps/8" : "; UNDER-RESOLVED";
    return o;
}

Outcome c5() {
    const auto& r = report("tiling-sweep");
    Outcome o = all_of(r, {"relative_spread", "bounds_positive", "min_measured_length"});
    o.passed = o.passed && verdict(r, "relative_spread").value <= 0.2 && verdict(r, "min_measured_length").value >= 0.5;
    return o;
}

Outcome c6() {
    const auto& g = report("goodidx-certify");
    bool ok = verdict(g, "chain_inequality").passed && verdict(g, "good_both_at_least_k_over_3").passed &&
              verdict(g, "all_members_decomposed").passed;
    int cubes = 0;
    for (const auto& [name, doc] : report("tiling-sweep").certificates) {
        for (const auto& item : doc["items"]) {
            if (!item["selected"].get<bool>()) continue;
            ++cubes;
            const int k = item["annuli"], both = item["good_both"];
            ok = ok && item["chain_ok"].get<bool>() && k > 0 && 3 * both >= k;
        }
    }
    return {ok && cubes > 0, "family members=" + std::to_string(g.csv_rows.size()) +
                                 ", tiling cubes=" + std::to_string(cubes)};
}

Outcome c7() {
    Outcome o{true, ""};
    auto add = [&](const std::string& label, double excess) {
        o.passed = o.passed && excess <= 0.02;
        char buf[80];
        std::snprintf(buf, sizeof buf, "%s%s=%.4g", o.detail.empty() ? "" : "; ", label.c_str(), excess);
        o.detail += buf;
    };
    add("goodidx", verdict(report("goodidx-certify"), "certified_minus_measured").value);
    add("tiling", verdict(report("tiling-sweep"), "certified_minus_measured").value);
    add("wsmp", verdict(report("wsmp-infimum"), "certified_minus_measured").value);
    double pert = -1e300;
    for (const auto& v : report("perturbation").verdicts)
        if (v.name.rfind("soundness_", 0) == 0) pert = std::max(pert, v.value);
    add("perturbation", pert);
    const ScalarField u = ScalarField::sample(Grid({0, 0}, 1.0, 257), [](Point p) { return p.x; });
    add("smp", certify_smp_lower_bound(u, 1024, 0.004).certified_lower_bound - nodal_length_in(u, Ball({0, 0}, 1.0)));
    return o;
}

Outcome c8() {
    const auto& r = report("harnack");
    Outcome o = all_of(r, {"min_growth_ratio", "max_harnack_ratio"});
    o.passed = o.passed && r.csv_rows.size() == 50 && verdict(r, "min_growth_ratio").value > 1.01;
    return o;
}

Outcome c9() {
    const auto& r = report("perturbation");
    return all_of(r, {"positive_delta=0.01", "positive_delta=0.05", "zero_delta=10"});
}

Outcome c10() {
    const auto& r = report("solve-validate");
    Outcome o = all_of(r, {"max_principle_excess", "convergence_order"});
    o.passed = o.passed && verdict(r, "convergence_order").value >= 1.9;
    double worst = 0.0;
    int solves = 0;
    for (const std::string coeff : {"identity", "diagonal", "sinsin", "checkerboard"}) {
        for (double eps : {0.125, 0.0625}) {
            for (const std::string trace : {"linear-x1", "trig-3", "harmonic-mix"}) {
                auto [u, rep] = solve_dirichlet(library_coefficient(coeff, eps), Grid({0, 0}, 1.0, 257),
                                                boundary_trace(trace));
                const auto m = max_principle_check(u);
                worst = std::max(worst, m.excess / std::max(1.0, u.max_abs()));
                ++solves;
            }
        }
    }
    o.passed = o.passed && worst <= 1e-10;
    char buf[80];
    std::snprintf(buf, sizeof buf, "; extra solves=%d worst_dmp_excess=%.3g", solves, worst);
    o.detail += buf;
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"C1 shell certificate on x1", c1},
        {"C2 WSMP family infimum", c2},
        {"C3 doubling index oracle", c3},
        {"C4 homogenization rate", c4},
        {"C5 epsilon-independent tiling bound", c5},
        {"C6 chain inequality and good annuli", c6},
        {"C7 certificates below measured length", c7},
        {"C8 Harnack and sup growth", c8},
        {"C9 perturbation stability", c9},
        {"C10 maximum principle and solver order", c10},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s | %s | %.1fs\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.passed ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
