#include "nodal/serialize.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ostream>

namespace nodal {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
        h ^= p[k];
        h *= 0x100000001b3ULL;
    }
    return h;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json envelope(const std::string& kind, const std::string& hash) {
    return {{"schema_version", kCertificateSchemaVersion}, {"kind", kind}, {"inputs_hash", hash}};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string inputs_hash(const ScalarField& u) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const Grid& g = u.grid();
    const double desc[4] = {g.center().x, g.center().y, g.half_width(), static_cast<double>(g.n())};
    h = fnv1a(desc, sizeof desc, h);
    h = fnv1a(u.values().data(), u.values().size_bytes(), h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json certificate_json(const SmpCertificate& cert, const std::string& hash) {
    json j = envelope("smp-shell", hash);
    j["constants"] = {{"m_angles", cert.m_angles},         {"stop_radius", cert.stop_radius},
                      {"resolution", cert.resolution},     {"min_shell_width", cert.min_shell_width},
                      {"s_initial", cert.s_initial},       {"center", point_json(cert.center)}};
    json items = json::array();
    for (const auto& s : cert.shells)
        items.push_back({{"s", s.s},
                         {"x_s", point_json(s.x_s)},
                         {"y_s", point_json(s.y_s)},
                         {"r_s", s.r_s},
                         {"theta1", s.theta1},
                         {"theta2", s.theta2},
                         {"circles_checked", s.circles_checked},
                         {"credit", s.credit}});
    j["items"] = items;
    j["s_final"] = cert.s_final;
    j["completed"] = cert.completed;
    j["diagnostic"] = cert.diagnostic;
    j["total_bound"] = cert.certified_lower_bound;
    return j;
}

json certificate_json(const TilingCertificate& cert, const std::string& hash) {
    json j = envelope("cube-tiling", hash);
    j["constants"] = {{"epsilon", cert.epsilon}, {"radius", cert.radius}, {"k", cert.k},
                      {"single_ball", cert.single_ball}};
    json items = json::array();
    for (const auto& c : cert.cubes)
        items.push_back({{"t", c.t},
                         {"witness", point_json(c.witness)},
                         {"cube_center", json::array({c.cx, c.cy})},
                         {"admissible", c.admissible},
                         {"selected", c.selected},
                         {"bound", c.bound},
                         {"annuli", c.annuli},
                         {"good_both", c.good_both},
                         {"chain_ok", c.chain_ok},
                         {"diagnostic", c.diagnostic}});
    j["items"] = items;
    j["disjoint_count"] = cert.disjoint_count;
    j["per_cube_bound"] = cert.per_cube_bound;
    j["min_cube_bound"] = cert.min_cube_bound;
    j["total_fast"] = cert.total_fast;
    j["total_bound"] = cert.total_bound;
    return j;
}

namespace {

json decomposition_json(const AnnulusDecomposition& dec) {
    return {{"center", point_json(dec.center)}, {"radii", dec.radii},       {"M", dec.M},
            {"m", dec.m},                       {"S", dec.S},               {"good_plus", dec.good_plus},
            {"good_minus", dec.good_minus},     {"k_plus", dec.k_plus},     {"k_minus", dec.k_minus}};
}

json balls_json(const std::vector<SignDefiniteBall>& balls) {
    json items = json::array();
    for (const auto& b : balls)
        items.push_back({{"center", point_json(b.ball.center)},
                         {"radius", b.ball.radius},
                         {"sign", b.sign},
                         {"index", b.index}});
    return items;
}

}  // namespace

json certificate_json(const AnnulusDecomposition& dec, const std::vector<SignDefiniteBall>& balls, double certified,
                      const std::string& hash) {
    json j = envelope("annulus", hash);
    j["constants"] = decomposition_json(dec);
    j["items"] = balls_json(balls);
    j["total_bound"] = certified;
    return j;
}

json certificate_json(const PerturbationResult& res, const std::string& hash) {
    json j = envelope("perturbation", hash);
    j["constants"] = decomposition_json(res.decomposition);
    j["constants"]["perturbation_sup"] = res.perturbation_sup;
    j["constants"]["eps_observed"] = res.eps_observed;
    j["items"] = balls_json(res.balls);
    j["total_bound"] = res.certified_length;
    return j;
}

SvgPlot::SvgPlot(Point center, double half_width, int pixels)
    : center_(center), half_width_(half_width), pixels_(pixels) {}

double SvgPlot::sx(double x) const { return (x - center_.x + half_width_) / (2.0 * half_width_) * pixels_; }
double SvgPlot::sy(double y) const { return (center_.y + half_width_ - y) / (2.0 * half_width_) * pixels_; }

void SvgPlot::segments(const std::vector<Segment>& segs, const std::string& color, double stroke) {
    std::string d;
    for (const auto& s : segs) d += "M" + fmt(sx(s.a.x)) + " " + fmt(sy(s.a.y)) + "L" + fmt(sx(s.b.x)) + " " + fmt(sy(s.b.y));
    if (d.empty()) return;
    items_.push_back("<path d=\"" + d + "\" stroke=\"" + color + "\" stroke-width=\"" + fmt(stroke) +
                     "\" fill=\"none\"/>");
}

void SvgPlot::circle(const Ball& b, const std::string& stroke, const std::string& fill, double width) {
    const double r = b.radius / (2.0 * half_width_) * pixels_;
    items_.push_back("<circle cx=\"" + fmt(sx(b.center.x)) + "\" cy=\"" + fmt(sy(b.center.y)) + "\" r=\"" + fmt(r) +
                     "\" stroke=\"" + stroke + "\" fill=\"" + fill + "\" stroke-width=\"" + fmt(width) + "\"/>");
}

void SvgPlot::point(Point p, const std::string& color, double pixels) {
    items_.push_back("<circle cx=\"" + fmt(sx(p.x)) + "\" cy=\"" + fmt(sy(p.y)) + "\" r=\"" + fmt(pixels) +
                     "\" fill=\"" + color + "\"/>");
}

void SvgPlot::text(Point p, const std::string& label) {
    std::string escaped;
    for (char ch : label) {
        switch (ch) {
            case '<': escaped += "&lt;"; break;
            case '>': escaped += "&gt;"; break;
            case '&': escaped += "&amp;"; break;
            default: escaped += ch;
        }
    }
    items_.push_back("<text x=\"" + fmt(sx(p.x)) + "\" y=\"" + fmt(sy(p.y)) + "\" font-size=\"12\">" + escaped +
                     "</text>");
}

void SvgPlot::write(std::ostream& os) const {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels_ << "\" height=\"" << pixels_
       << "\" viewBox=\"0 0 " << pixels_ << ' ' << pixels_ << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& item : items_) os << item << '\n';
    os << "</svg>\n";
}

void write_smp_svg(const NodalSet& z, const SmpCertificate& cert, std::ostream& os) {
    SvgPlot plot(cert.center, 1.1 * cert.s_initial);
    plot.circle(Ball(cert.center, cert.s_initial), "#999999");
    plot.segments(z.segments, "black");
    for (const auto& s : cert.shells) {
        plot.circle(Ball(cert.center, s.s), "#cccccc", "none", 0.5);
        plot.circle(Ball(s.x_s, s.r_s), "#d62728");
        plot.circle(Ball(s.y_s, s.r_s), "#1f77b4");
    }
    plot.write(os);
}

void write_tiling_svg(const NodalSet& z, const TilingCertificate& cert, Point center, std::ostream& os) {
    SvgPlot plot(center, 1.1 * cert.radius);
    plot.circle(Ball(center, cert.radius), "#999999");
    plot.segments(z.segments, "black");
    for (const auto& c : cert.cubes) {
        const Point w = center + c.witness * cert.epsilon;
        if (c.selected) {
            plot.circle(Ball(w, 0.5 * cert.epsilon), c.bound > 0.0 ? "#2ca02c" : "#d62728");
            plot.point(w, "#2ca02c");
        } else {
            plot.point(w, "#999999", 2.0);
        }
    }
    plot.write(os);
}

void write_annulus_svg(const NodalSet& z, const AnnulusDecomposition& dec, const std::vector<SignDefiniteBall>& balls,
                       std::ostream& os) {
    SvgPlot plot(dec.center, 1.1 * dec.radii.back());
    plot.segments(z.segments, "black");
    for (double r : dec.radii) plot.circle(Ball(dec.center, r), "#cccccc", "none", 0.5);
    for (const auto& b : balls) plot.circle(b.ball, b.sign > 0 ? "#d62728" : "#1f77b4");
    plot.write(os);
}

}  // namespace nodal
