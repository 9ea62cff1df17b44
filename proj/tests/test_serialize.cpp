#include <doctest.h>

#include <sstream>

#include "nodal/serialize.hpp"

using namespace nodal;

namespace {

ScalarField sampled(int n, const std::function<double(Point)>& f) { return ScalarField::sample(Grid({0, 0}, 1.0, n), f); }

void check_schema(const nlohmann::json& j, const std::string& kind) {
    CHECK(j.at("schema_version") == kCertificateSchemaVersion);
    CHECK(j.at("kind") == kind);
    CHECK(j.at("inputs_hash").get<std::string>().size() == 16);
    CHECK(j.contains("constants"));
    CHECK(j.at("items").is_array());
    CHECK(j.at("total_bound").is_number());
}

}  // namespace

TEST_CASE("inputs hash") {
    const ScalarField a = sampled(33, [](Point p) { return p.x; });
    const ScalarField b = sampled(33, [](Point p) { return p.x; });
    const ScalarField c = sampled(33, [](Point p) { return p.x + 1e-15; });
    const ScalarField d = ScalarField::sample(Grid({0, 0}, 2.0, 33), [](Point p) { return p.x / 2; });
    CHECK(inputs_hash(a) == inputs_hash(b));
    CHECK(inputs_hash(a) != inputs_hash(c));
    CHECK(inputs_hash(a) != inputs_hash(d));
}

TEST_CASE("certificate documents") {
    const ScalarField u = sampled(257, [](Point p) { return p.x; });
    const std::string hash = inputs_hash(u);

    const auto smp = certify_smp_lower_bound(u, 256, 0.05);
    const auto js = certificate_json(smp, hash);
    check_schema(js, "smp-shell");
    CHECK(js["items"].size() == smp.shells.size());
    CHECK(js["total_bound"].get<double>() == smp.certified_lower_bound);

    const auto dec = decompose_annuli(u, {0, 0}, 0.5, 0.7, 4, 2.0);
    const auto balls = locate_sign_definite_balls(u, dec, 4 * u.grid().spacing());
    const double cert = certified_length_from_decomposition(u, dec, balls);
    const auto ja = certificate_json(dec, balls, cert, hash);
    check_schema(ja, "annulus");
    CHECK(ja["items"].size() == balls.size());

    const auto pert = perturbation_certificate(u, u, Ball({0, 0}, 1.0));
    check_schema(certificate_json(pert, hash), "perturbation");

    // round trip through text
    CHECK(nlohmann::json::parse(js.dump()) == js);
}

TEST_CASE("svg output") {
    const ScalarField u = sampled(65, [](Point p) { return p.x; });
    SvgPlot plot({0, 0}, 1.0, 200);
    plot.segments(extract_nodal_set(u).segments, "black");
    plot.circle(Ball({0, 0}, 0.5), "red");
    plot.point({1.0, 1.0}, "blue");
    plot.text({0, 0}, "a<b");
    std::ostringstream os;
    plot.write(os);
    const std::string s = os.str();
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(s.find("a&lt;b") != std::string::npos);
    // y axis points up: (1, 1) lands at the top right
    CHECK(s.find("cx=\"200.000\" cy=\"0.000\"") != std::string::npos);
}
