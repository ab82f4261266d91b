#pragma once

/**
 * @file voronoi_scenes.hpp
 * @brief Standard configurations in H^2 (form J_2) used by demos and tests:
 *        two disjoint closed geodesics, axis-pair nesting, sphere shrinking,
 *        the regular genus-2 octagon and a family of desk groups.
 */

#include "hypgeo/voronoi.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypgeo::scenes {

inline RealForm plane() { return RealForm::standard(2); }

inline Point origin() { return plane().base_point(); }

/// Point at distance r from the origin in direction theta.
inline Point polar_point(double r, double theta) {
    return {std::cosh(r), std::sinh(r) * std::cos(theta), std::sinh(r) * std::sin(theta)};
}

/// Unit tangent at the origin in direction theta.
inline Vec<double> direction(double theta) { return {0.0, std::cos(theta), std::sin(theta)}; }

/// Geodesic through the origin in direction theta.
inline Hyperplane line_through_origin(double theta) {
    return make_hyperplane(plane(), {0.0, -std::sin(theta), std::cos(theta)});
}

/// Geodesic perpendicular to the ray at angle theta, crossing it at signed distance a.
inline Hyperplane perpendicular_line(double a, double theta) {
    return make_hyperplane(plane(), {std::sinh(a), std::cosh(a) * std::cos(theta), std::cosh(a) * std::sin(theta)});
}

inline RealMatrix translation_through_origin(double theta, double length) {
    return translation_along_geodesic(plane(), origin(), direction(theta), length);
}

inline double degrees(double deg) { return deg * std::numbers::pi / 180; }

// ---------------------------------------------------------------------------
// Two disjoint closed geodesics.

/**
 * S_1, S_2 perpendicular to the x-axis at -delta/2 and +delta/2; generator
 * t_i translates along S_i by len_i, so S_i projects to a closed geodesic of
 * length len_i at distance delta from the other.
 */
struct TwoGeodesicScene {
    double delta = 0, len1 = 0, len2 = 0;
    GroupData group;
    std::vector<MarkedSurface> surfaces;
};

inline TwoGeodesicScene two_geodesic_scene(double delta, double len1, double len2) {
    const RealForm f = plane();
    std::vector<MarkedSurface> surfaces;
    std::vector<RealMatrix> gens;
    const double feet[2] = {-delta / 2, delta / 2};
    const double lens[2] = {len1, len2};
    for (int i = 0; i < 2; ++i) {
        const Point foot = polar_point(feet[i], 0);
        const Vec<double> up = {0.0, 0.0, 1.0};
        surfaces.push_back(surface_from_segment_2d(f, foot, up, lens[i]));
        gens.push_back(translation_along_geodesic(f, foot, up, lens[i]));
    }
    std::vector<Hyperplane> marked = {surfaces[0].lift, surfaces[1].lift};
    GroupData group(f, std::move(gens), std::move(marked), std::min(len1, len2));
    return {delta, len1, len2, std::move(group), std::move(surfaces)};
}

/// delta in [0.5, 1], lengths in [5, 7].
inline TwoGeodesicScene random_two_geodesic_scene(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(0.5, 1.0), l(5.0, 7.0);
    const double delta = d(rng);
    const double l1 = l(rng);
    const double l2 = l(rng);
    return two_geodesic_scene(delta, l1, l2);
}

/**
 * Ping-pong test: the lines perpendicular to S_i at distance len_i/2 from
 * its foot bound four halfspaces around the origin whose complements must
 * be pairwise disjoint.
 */
inline bool ping_pong_valid(const TwoGeodesicScene& s) {
    const RealForm f = plane();
    const Point o = origin();
    std::vector<HalfSpace> hs;
    for (const auto& S : s.surfaces)
        for (double sign : {1.0, -1.0}) {
            const double t = sign * S.length / 2;
            Vec<double> tangent(3);
            for (int k = 0; k < 3; ++k) tangent[k] = std::sinh(t) * S.start[k] + std::cosh(t) * S.tangent[k];
            hs.push_back(halfspace_containing(f, tangent, o));
        }
    for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = i + 1; j < hs.size(); ++j)
            if (are_nested(f, hs[i], hs[j], o).kind != Nesting::DisjointNotNested) return false;
    return true;
}

/// The sparse two-point set: the foot of S_1 and the point of S_2 half a period above its foot.
inline AdmissibleSet sparse_set(const TwoGeodesicScene& s) {
    return {s.surfaces, {{s.surfaces[0].at(0), 0}, {s.surfaces[1].at(s.len2 / 2), 1}}};
}

// ---------------------------------------------------------------------------
// Nesting of Dirichlet domains of two axes.

struct NestingScene {
    double angle = 0, len_h = 0, len_v = 0;
    GroupData group_h, group_v;
    std::vector<VoronoiCell> cells;  ///< C_H, C_V
    Domain domain;
    std::vector<Pairing> pairings;
    PoincareReport report;
};

/**
 * H along angle 0 and V along `angle_deg`, both through the origin; C_H and
 * C_V are the Dirichlet cells of the origin for the cyclic groups of the
 * translations along H and V. The candidate domain is C_H intersected with C_V.
 */
inline NestingScene nesting_scene(double angle_deg, double len_h, double len_v, int cutoff = 3) {
    if (!(len_h > 0) || !(len_v > 0)) throw std::invalid_argument("nesting_scene: lengths must be positive");
    const RealForm f = plane();
    const double theta = degrees(angle_deg);
    GroupData gh(f, {translation_through_origin(0, len_h)}, {line_through_origin(0)});
    GroupData gv(f, {translation_through_origin(theta, len_v)}, {line_through_origin(theta)});
    std::vector<VoronoiCell> cells;
    for (const GroupData* g : {&gh, &gv}) {
        const OrbitSet orbit = build_orbit({origin()}, *g, cutoff);
        cells.push_back(classify_facets(dirichlet_cell(origin(), orbit), g->marked()));
    }
    Domain domain = build_domain_2d(cells);
    auto pairings = derive_pairings(domain, {&gh, &gv});
    PoincareReport report = check_poincare_2d(domain, pairings);
    return {angle_deg, len_h, len_v, std::move(gh), std::move(gv), std::move(cells), std::move(domain), std::move(pairings), std::move(report)};
}

/// Passing criterion used for the threshold search: Poincare conditions hold and the group is torsion free.
inline bool nesting_scene_passes(double angle_deg, double len_h, double len_v) {
    const auto s = nesting_scene(angle_deg, len_h, len_v);
    return s.report.passed && s.report.torsion_free;
}

/// Smallest V-length (to `tol`) in [lo, hi] for which the domain passes; assumes failure at lo, success at hi.
inline double bisect_threshold(double angle_deg, double len_h, double lo, double hi, double tol = 1e-6) {
    if (nesting_scene_passes(angle_deg, len_h, lo) || !nesting_scene_passes(angle_deg, len_h, hi))
        throw std::invalid_argument("bisect_threshold: bracket does not straddle the threshold");
    while (hi - lo > tol) {
        const double mid = (lo + hi) / 2;
        (nesting_scene_passes(angle_deg, len_h, mid) ? hi : lo) = mid;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Sphere shrinking.

struct ShrinkFacet {
    double R = 0;
    std::string word;
    FacetType type = FacetType::Unclassified;
    double radius = 0;
};

struct ShrinkRow {
    double R = 0;
    double first_radius = 0;   ///< largest boundary radius among first-type facets
    double second_radius = 0;  ///< largest boundary radius among second-type facets
    std::size_t first_count = 0, second_count = 0;
};

struct ShrinkReport {
    std::vector<ShrinkRow> rows;
    std::vector<ShrinkFacet> facets;
    bool second_decreasing = true;
    bool first_constant = true;
    double min_ratio = std::numeric_limits<double>::infinity();  ///< smallest consecutive second-type radius ratio
    double first_spread = 0;
};

/**
 * Standard demo: H is the x-axis (horizontal, marked), V the y-axis. The
 * group is generated by s, a translation of length `fixed_length` along H
 * (it stabilizes H, so it is exempt from the floor), and t_R, a translation
 * of length R along V. For each R the Dirichlet cell of the origin is built
 * over the whole plane and each facet's boundary circle radius is reported.
 */
inline ShrinkReport sphere_shrink_report(const std::vector<double>& r_list, double fixed_length = 2.0, int cutoff = 2) {
    if (r_list.empty()) throw std::invalid_argument("sphere_shrink_report: empty R list");
    for (std::size_t i = 1; i < r_list.size(); ++i)
        if (!(r_list[i] > r_list[i - 1])) throw std::invalid_argument("sphere_shrink_report: R list must be increasing");
    const RealForm f = plane();
    const Hyperplane h = line_through_origin(0);
    ShrinkReport rep;
    for (double R : r_list) {
        GroupData g(f, {translation_through_origin(0, fixed_length), translation_through_origin(std::numbers::pi / 2, R)}, {h}, R, h);
        const OrbitSet orbit = build_orbit({origin()}, g, cutoff);
        CellOptions opts;
        opts.region_radius = std::numeric_limits<double>::infinity();
        const VoronoiCell cell = classify_facets(dirichlet_cell(origin(), orbit, opts), g.marked());
        ShrinkRow row{R, 0, 0, 0, 0};
        for (const auto& fc : cell.facets) {
            const auto& ch = cell.halfspaces[fc.halfspace];
            const double radius = boundary_sphere(f, ch.halfspace.plane).radius;
            rep.facets.push_back({R, word_to_string(ch.word), fc.type, radius});
            if (fc.type == FacetType::First) {
                row.first_radius = std::max(row.first_radius, radius);
                ++row.first_count;
            } else {
                row.second_radius = std::max(row.second_radius, radius);
                ++row.second_count;
            }
        }
        rep.rows.push_back(row);
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const auto& a = rep.rows[i - 1];
        const auto& b = rep.rows[i];
        if (!(b.second_radius < a.second_radius)) rep.second_decreasing = false;
        rep.min_ratio = std::min(rep.min_ratio, a.second_radius / b.second_radius);
        rep.first_spread = std::max(rep.first_spread, std::abs(a.first_radius - b.first_radius));
    }
    rep.first_constant = rep.first_spread <= 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// Regular octagon (genus 2).

/// Inradius of the regular octagon with interior angles pi/4.
inline double octagon_inradius() { return std::acosh(1 / std::tan(std::numbers::pi / 8)); }

/// Translations pairing opposite sides of the regular octagon centered at the origin.
inline GroupData octagon_group() {
    std::vector<RealMatrix> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(translation_through_origin(i * std::numbers::pi / 4, 2 * octagon_inradius()));
    return GroupData(plane(), std::move(gens));
}

// ---------------------------------------------------------------------------
// Desk configurations for oracle checks.

struct DeskConfiguration {
    std::string name;
    GroupData group;
    Point seed;
    int cutoff = 3;
};

/**
 * Twenty small configurations: cyclic groups (seed on and off the axis),
 * orthogonal axis pairs and oblique axis pairs, all through the origin.
 */
inline std::vector<DeskConfiguration> desk_configurations() {
    const RealForm f = plane();
    std::vector<DeskConfiguration> out;
    const double cyc[] = {0.8, 1.5, 2.5, 4.0};
    for (int i = 0; i < 4; ++i) {
        GroupData g(f, {translation_through_origin(0.3 * i, cyc[i])});
        out.push_back({"cyclic-on-axis-" + std::to_string(i), g, origin(), 3});
        out.push_back({"cyclic-off-axis-" + std::to_string(i), g, polar_point(0.4 + 0.2 * i, 1.2 + 0.3 * i), 3});
    }
    const double orth[][2] = {{1.0, 3.0}, {2.0, 2.0}, {1.5, 4.0}, {3.0, 3.5}, {0.8, 5.0}, {2.5, 1.8}};
    for (int i = 0; i < 6; ++i) {
        GroupData g(f, {translation_through_origin(0, orth[i][0]), translation_through_origin(std::numbers::pi / 2, orth[i][1])});
        out.push_back({"orthogonal-" + std::to_string(i), g, i % 2 ? polar_point(0.2, 0.7) : origin(), 2});
    }
    const double obl[][3] = {{60, 2.0, 3.0}, {45, 3.0, 3.0}, {30, 2.5, 4.0}, {75, 1.2, 2.2}, {50, 4.0, 2.0}, {20, 3.5, 3.5}};
    for (int i = 0; i < 6; ++i) {
        GroupData g(f, {translation_through_origin(0, obl[i][1]), translation_through_origin(degrees(obl[i][0]), obl[i][2])});
        out.push_back({"oblique-" + std::to_string(i), g, i % 2 ? origin() : polar_point(0.3, -0.5), 2});
    }
    return out;
}

}  // namespace hypgeo::scenes
