#include "nodal/families.hpp"

#include <cmath>
#include <complex>

#include "nodal/errors.hpp"

namespace nodal {

double HarmonicPolynomial::operator()(Point p) const {
    const std::complex<double> z(p.x, p.y);
    std::complex<double> zd(1.0, 0.0);
    double sum = 0.0;
    for (std::size_t d = 0; d < re.size(); ++d) {
        sum += re[d] * zd.real() + im[d] * zd.imag();
        zd *= z;
    }
    return sum;
}

HarmonicPolynomial homogeneous_harmonic(int d, double angle) {
    if (d < 0) throw InvalidArgument("degree must be nonnegative");
    HarmonicPolynomial p;
    p.re.assign(d + 1, 0.0);
    p.im.assign(d + 1, 0.0);
    // Re(e^{-i d a} z^d) = cos(d a) Re z^d + sin(d a) Im z^d
    p.re[d] = std::cos(d * angle);
    p.im[d] = std::sin(d * angle);
    p.id = "harmonic-d" + std::to_string(d);
    return p;
}

HarmonicPolynomial random_harmonic(std::uint64_t seed, int max_degree) {
    if (max_degree < 1) throw InvalidArgument("max degree must be at least 1");
    Rng rng(seed);
    const int degree = rng.integer(1, max_degree);
    HarmonicPolynomial p;
    p.re.assign(degree + 1, 0.0);
    p.im.assign(degree + 1, 0.0);
    for (int d = 1; d <= degree; ++d) {
        p.re[d] = rng.uniform(-1.0, 1.0);
        p.im[d] = rng.uniform(-1.0, 1.0);
    }
    p.id = "random-harmonic-" + std::to_string(seed);
    return p;
}

std::vector<HarmonicPolynomial> random_harmonic_family(int count, std::uint64_t first_seed, int max_degree) {
    std::vector<HarmonicPolynomial> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) out.push_back(random_harmonic(first_seed + k, max_degree));
    return out;
}

namespace {

struct TrigTerm {
    int a, b;
    double amp, phase;
};

std::vector<TrigTerm> trig_terms(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TrigTerm> terms;
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 2; ++b) {
            if (a == 0 && b == 0) continue;
            const double amp = rng.uniform(-1.0, 1.0) / (1.0 + a + b);
            terms.push_back({a, b, amp, rng.uniform(0.0, kTwoPi)});
        }
    }
    return terms;
}

double trig_value(const std::vector<TrigTerm>& terms, Point p) {
    double s = 0.0;
    for (const auto& t : terms) s += t.amp * std::cos(kPi * 0.5 * (t.a * p.x + t.b * p.y) + t.phase);
    return s;
}

std::uint64_t parse_seed(const std::string& text, const std::string& name) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument("bad seed in boundary trace '" + name + "'");
}

}  // namespace

BoundaryData boundary_trace(const std::string& name) {
    if (name == "linear-x1") return {[](Point p) { return p.x; }, name};
    if (name == "linear-x2") return {[](Point p) { return p.y; }, name};
    if (name == "harmonic-mix") {
        HarmonicPolynomial poly;
        poly.re = {0.0, 1.0, 0.5, 0.25};
        poly.im = {0.0, 0.0, 0.0, 0.0};
        return {[poly](Point p) { return poly(p); }, name};
    }
    if (name.rfind("harmonic-d", 0) == 0) {
        const int d = static_cast<int>(parse_seed(name.substr(10), name));
        if (d < 1 || d > 12) throw InvalidArgument("harmonic trace degree must lie in [1, 12]");
        HarmonicPolynomial poly = homogeneous_harmonic(d);
        return {[poly](Point p) { return poly(p); }, name};
    }
    if (name.rfind("positive-trig-", 0) == 0) {
        auto terms = trig_terms(parse_seed(name.substr(14), name));
        double bound = 0.0;
        for (const auto& t : terms) bound += std::abs(t.amp);
        return {[terms, bound](Point p) { return 3.0 + trig_value(terms, p) / bound; }, name};
    }
    if (name.rfind("trig-", 0) == 0) {
        auto terms = trig_terms(parse_seed(name.substr(5), name));
        return {[terms](Point p) { return trig_value(terms, p); }, name};
    }
    throw InvalidArgument("unknown boundary trace '" + name + "'");
}

std::vector<std::string> boundary_trace_names() {
    return {"linear-x1", "linear-x2", "harmonic-d<k>", "harmonic-mix", "trig-<seed>", "positive-trig-<seed>"};
}

}  // namespace nodal
