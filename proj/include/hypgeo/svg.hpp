#pragma once

/**
 * @file svg.hpp
 * @brief Minimal SVG writer for Poincare-disk pictures.
 *
 * The view box is the unit disk with a small margin; y points up in model
 * coordinates and is flipped on output. Numbers use fixed six-digit
 * formatting so that files are byte-stable.
 */

#include "hypgeo/hyperboloid.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

namespace hypgeo::svg {

/// Fixed-point with six decimals; negative zero printed as zero.
inline std::string num(double v) {
    if (std::abs(v) < 5e-7) v = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

using Vec2 = std::array<double, 2>;

class Document {
public:
    explicit Document(std::string title) : title_(std::move(title)) {}

    void disk(const std::string& stroke = "#000000") {
        body_ += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"0.006\"/>\n";
    }

    void circle(Vec2 c, double r, const std::string& stroke, const std::string& fill = "none", double width = 0.004) {
        body_ += "<circle cx=\"" + num(c[0]) + "\" cy=\"" + num(-c[1]) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\" stroke=\"" +
                 stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
    }

    void point(Vec2 p, const std::string& fill, double r = 0.012) {
        body_ += "<circle cx=\"" + num(p[0]) + "\" cy=\"" + num(-p[1]) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\"/>\n";
    }

    void line(Vec2 a, Vec2 b, const std::string& stroke, double width = 0.005) {
        body_ += "<path d=\"M " + num(a[0]) + " " + num(-a[1]) + " L " + num(b[0]) + " " + num(-b[1]) + "\" fill=\"none\" stroke=\"" +
                 stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
    }

    /// Arc of the circle (center c, radius r) from a to b, taking the short way round.
    void arc(Vec2 c, double r, Vec2 a, Vec2 b, const std::string& stroke, double width = 0.005) {
        // in output coordinates (y down) a positive cross product means the sweep flag is 1
        const Vec2 ao = {a[0] - c[0], -(a[1] - c[1])}, bo = {b[0] - c[0], -(b[1] - c[1])};
        const int sweep = ao[0] * bo[1] - ao[1] * bo[0] > 0 ? 1 : 0;
        body_ += "<path d=\"M " + num(a[0]) + " " + num(-a[1]) + " A " + num(r) + " " + num(r) + " 0 0 " + std::to_string(sweep) + " " +
                 num(b[0]) + " " + num(-b[1]) + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
    }

    void text(Vec2 p, const std::string& s, double size = 0.05) {
        body_ += "<text x=\"" + num(p[0]) + "\" y=\"" + num(-p[1]) + "\" font-size=\"" + num(size) + "\" font-family=\"sans-serif\">" + s +
                 "</text>\n";
    }

    std::string str() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"600\" height=\"600\">\n"
               "<title>" +
               title_ + "</title>\n" + body_ + "</svg>\n";
    }

private:
    std::string title_;
    std::string body_;
};

/// First two ball coordinates of a sheet point or light-cone vector.
inline Vec2 to_disk(const RealForm& f, const Vec<double>& x) {
    const Vec<double> b = ball_coordinates(f, x);
    return {b[0], b.size() > 1 ? b[1] : 0.0};
}

/// Draws the part of the geodesic line `h` between two disk points lying on it.
inline void geodesic_segment(Document& doc, const RealForm& f, const Hyperplane& h, Vec2 a, Vec2 b, const std::string& stroke,
                             double width = 0.005) {
    const BoundarySphere s = boundary_sphere(f, h);
    if (s.flat) doc.line(a, b, stroke, width);
    else doc.arc({s.center[0], s.center[1]}, s.radius, a, b, stroke, width);
}

/// Ideal endpoints of a geodesic line of the plane, in the disk.
inline std::array<Vec2, 2> ideal_endpoints(const RealForm& f, const Hyperplane& h) {
    const BoundarySphere s = boundary_sphere(f, h);
    if (s.flat) {
        const Vec2 d = {-s.normal[1], s.normal[0]};
        return {{{d[0], d[1]}, {-d[0], -d[1]}}};
    }
    const double cx = s.center[0], cy = s.center[1];
    const double d2 = cx * cx + cy * cy, d = std::sqrt(d2);
    const Vec2 foot = {cx / d2, cy / d2};
    const Vec2 perp = {-cy / d * s.radius / d, cx / d * s.radius / d};
    return {{{foot[0] + perp[0], foot[1] + perp[1]}, {foot[0] - perp[0], foot[1] - perp[1]}}};
}

inline void geodesic(Document& doc, const RealForm& f, const Hyperplane& h, const std::string& stroke, double width = 0.005) {
    const auto e = ideal_endpoints(f, h);
    geodesic_segment(doc, f, h, e[0], e[1], stroke, width);
}

}  // namespace hypgeo::svg
