#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodal/certify.hpp"
#include "nodal/nodal.hpp"
#include "nodal/smp.hpp"

namespace nodal {

inline constexpr int kCertificateSchemaVersion = 1;

/// FNV-1a over the grid description and the raw field values, as 16 hex digits.
std::string inputs_hash(const ScalarField& u);

/// Every certificate document carries schema_version, kind, inputs_hash,
/// constants, items and total_bound.
nlohmann::json certificate_json(const SmpCertificate& cert, const std::string& hash);
nlohmann::json certificate_json(const TilingCertificate& cert, const std::string& hash);
nlohmann::json certificate_json(const AnnulusDecomposition& dec, const std::vector<SignDefiniteBall>& balls,
                                double certified, const std::string& hash);
nlohmann::json certificate_json(const PerturbationResult& res, const std::string& hash);

/// Minimal SVG emitter; world coordinates map onto a square canvas with y up.
class SvgPlot {
public:
    SvgPlot(Point center, double half_width, int pixels = 600);

    void segments(const std::vector<Segment>& segs, const std::string& color, double stroke = 1.0);
    void circle(const Ball& b, const std::string& stroke, const std::string& fill = "none", double width = 1.0);
    void point(Point p, const std::string& color, double pixels = 3.0);
    void text(Point p, const std::string& label);

    void write(std::ostream& os) const;

private:
    double sx(double x) const;
    double sy(double y) const;

    Point center_;
    double half_width_;
    int pixels_;
    std::vector<std::string> items_;
};

void write_smp_svg(const NodalSet& z, const SmpCertificate& cert, std::ostream& os);
void write_tiling_svg(const NodalSet& z, const TilingCertificate& cert, Point center, std::ostream& os);
void write_annulus_svg(const NodalSet& z, const AnnulusDecomposition& dec, const std::vector<SignDefiniteBall>& balls,
                       std::ostream& os);

}  // namespace nodal
