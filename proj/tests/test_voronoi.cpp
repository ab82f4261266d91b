#include "hypgeo/voronoi.hpp"
#include "hypgeo/voronoi_scenes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hypgeo;
using namespace hypgeo::scenes;

namespace {

const double kPi = std::numbers::pi;

/// Uniformly random point of the hyperbolic disk of radius rho around c (area-uniform not needed).
Point random_point_near(std::mt19937_64& rng, const Point& c, double rho) {
    std::uniform_real_distribution<double> u(0, 1);
    const Point p = polar_point(rho * std::sqrt(u(rng)), 2 * kPi * u(rng));
    const RealForm f = plane();
    return inverse_isometry(f, move_to_base_point(f, c)) * p;
}

/// Brute-force nearest-center decision: is x at least as close to orbit point `center` as to all others?
/// Returns -1 for ties within tol.
int nearest_is_center(const OrbitSet& orbit, std::size_t center, const Point& x, double tol) {
    const double dc = fast_distance(orbit.form, orbit.points[center].point, x);
    double best_other = INFINITY;
    for (std::size_t i = 0; i < orbit.points.size(); ++i)
        if (i != center) best_other = std::min(best_other, fast_distance(orbit.form, orbit.points[i].point, x));
    if (std::abs(dc - best_other) <= tol) return -1;
    return dc < best_other ? 1 : 0;
}

double max_abs_diff(const Vec<double>& a, const Vec<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Voronoi, ReducedWordCounts) {
    EXPECT_EQ(reduced_words(4, 2).size(), 17u);
    EXPECT_EQ(reduced_words(4, 3).size(), 53u);
    EXPECT_EQ(reduced_words(2, 3).size(), 7u);
    EXPECT_EQ(word_to_string({0, 3, 1}), "aBA");
    EXPECT_EQ(word_to_string({}), "e");
    EXPECT_EQ(inverse_word({0, 3}), (Word{2, 1}));
}

TEST(Voronoi, CyclicOrbitDistances) {
    const double len = 1.3;
    GroupData g(plane(), {translation_through_origin(0, len)});
    const OrbitSet orbit = build_orbit({origin()}, g, 3);
    ASSERT_EQ(orbit.points.size(), 7u);
    std::vector<double> d;
    for (const auto& p : orbit.points) d.push_back(distance(plane(), origin(), p.point));
    std::sort(d.begin(), d.end());
    const double want[] = {0, len, len, 2 * len, 2 * len, 3 * len, 3 * len};
    for (int i = 0; i < 7; ++i) EXPECT_NEAR(d[i], want[i], 1e-9);
    EXPECT_NEAR(orbit.certification_radius, 1.5 * len, 1e-12);
}

TEST(Voronoi, EmptyGeneratorsGiveSeedsOnly) {
    GroupData g(plane(), {});
    const OrbitSet orbit = build_orbit({origin(), polar_point(1, 0)}, g, 2);
    EXPECT_EQ(orbit.points.size(), 2u);
    EXPECT_TRUE(std::isinf(orbit.certification_radius));
    EXPECT_THROW(build_orbit({origin()}, g, 0), std::invalid_argument);
}

TEST(Voronoi, FreeGroupOrbitSize) {
    GroupData g(plane(), {translation_through_origin(0, 3), translation_through_origin(kPi / 2, 3)});
    EXPECT_EQ(build_orbit({origin()}, g, 2).points.size(), 17u);
}

TEST(Voronoi, GroupValidation) {
    auto bad = RealMatrix::identity(3, 0.0, 1.0);
    bad(0, 0) = 2;
    EXPECT_THROW(GroupData(plane(), {bad}), std::invalid_argument);
    // floor above the translation length
    EXPECT_THROW(GroupData(plane(), {translation_through_origin(0, 1)}, {}, 2.0), std::invalid_argument);
    // the same generator is exempt when it stabilizes the horizontal line
    EXPECT_NO_THROW(GroupData(plane(), {translation_through_origin(0, 1)}, {}, 2.0, line_through_origin(0)));
}

TEST(Voronoi, StripCell) {
    const double len = 1.7;
    GroupData g(plane(), {translation_through_origin(0, len)}, {line_through_origin(0)});
    const OrbitSet orbit = build_orbit({origin()}, g, 3);
    VoronoiCell cell = dirichlet_cell(origin(), orbit);
    ASSERT_EQ(cell.halfspaces.size(), 2u);
    for (const auto& h : cell.halfspaces) {
        const Hyperplane want = perpendicular_line(h.word == Word{0} ? len / 2 : -len / 2, 0);
        EXPECT_TRUE(same_hyperplane(h.halfspace.plane, want, 1e-9)) << word_to_string(h.word);
        EXPECT_TRUE(h.halfspace.contains(plane(), origin()));
    }
    cell = classify_facets(cell, g.marked());
    for (const auto& fc : cell.facets) EXPECT_EQ(fc.type, FacetType::First);
    // a marked line far from the cell
    cell = classify_facets(cell, {perpendicular_line(3.0, kPi / 2)});
    for (const auto& fc : cell.facets) EXPECT_EQ(fc.type, FacetType::Second);
}

TEST(Voronoi, TwoPointOrbit) {
    OrbitSet orbit{plane(), {origin()}, {{origin(), {}, 0}, {polar_point(1, 0.3), {0}, 0}}, INFINITY, 1};
    const auto cell = dirichlet_cell(origin(), orbit);
    ASSERT_EQ(cell.halfspaces.size(), 1u);
    EXPECT_THROW(dirichlet_cell(polar_point(0.5, 0), orbit), std::invalid_argument);
}

TEST(Voronoi, NonPositiveCertificationRadius) {
    GroupData g(plane(), {translation_through_origin(0, 0.5)});
    const OrbitSet orbit = build_orbit({origin(), polar_point(3, 1)}, g, 1);
    EXPECT_LT(orbit.certification_radius, 0);
    EXPECT_THROW(dirichlet_cell(origin(), orbit), std::domain_error);
}

TEST(Voronoi, MembershipMatchesNearestCenterOracle) {
    std::mt19937_64 rng(2024);
    for (const auto& cfg : desk_configurations()) {
        const OrbitSet orbit = build_orbit({cfg.seed}, cfg.group, cfg.cutoff);
        const VoronoiCell cell = dirichlet_cell(cfg.seed, orbit);
        const double rho = orbit.certification_radius;
        int checked = 0;
        for (int i = 0; i < 2000; ++i) {
            const Point x = random_point_near(rng, cfg.seed, rho);
            const int want = nearest_is_center(orbit, 0, x, 1e-9);
            if (want < 0) continue;
            ++checked;
            ASSERT_EQ(cell.contains(x, 0.0), want == 1) << cfg.name;
        }
        EXPECT_GT(checked, 1900) << cfg.name;
    }
}

TEST(Voronoi, ChordAndLinearProgramPruningAgree) {
    for (const auto& cfg : desk_configurations()) {
        const OrbitSet orbit = build_orbit({cfg.seed}, cfg.group, cfg.cutoff);
        CellOptions lp;
        lp.method = PruneMethod::LinearProgram;
        const auto a = dirichlet_cell(cfg.seed, orbit);
        const auto b = dirichlet_cell(cfg.seed, orbit, lp);
        ASSERT_EQ(a.halfspaces.size(), b.halfspaces.size()) << cfg.name;
        for (std::size_t i = 0; i < a.halfspaces.size(); ++i) EXPECT_EQ(a.halfspaces[i].source, b.halfspaces[i].source);
    }
}

TEST(Voronoi, MixedFacetTypes) {
    // center on the marked x-axis, one neighbour on it, one off it
    const RealForm f = plane();
    OrbitSet orbit{f, {origin()}, {{origin(), {}, 0}, {polar_point(1.0, 0), {0}, 0}, {polar_point(1.0, kPi / 2), {2}, 0}}, INFINITY, 1};
    const auto cell = classify_facets(dirichlet_cell(origin(), orbit), {line_through_origin(0)});
    ASSERT_EQ(cell.facets.size(), 2u);
    EXPECT_EQ(cell.facets[0].type, FacetType::First);
    EXPECT_EQ(cell.facets[1].type, FacetType::Second);
    // sampled membership along the axis: leaving the cell along it only crosses the first-type facet
    for (double s = -4; s <= 4; s += 0.001) {
        const Point x = polar_point(s, 0);
        EXPECT_TRUE(cell.halfspaces[1].halfspace.contains(f, x));
    }
    EXPECT_FALSE(cell.halfspaces[0].halfspace.contains(f, polar_point(0.6, 0)));
}

TEST(Voronoi, Equivariance) {
    const auto cfg = desk_configurations()[12];
    const RealForm f = plane();
    const RealMatrix g = translation_along_geodesic(f, polar_point(0.4, 2.0), {0.3, 1.0, -0.2}, 0.9);
    const GroupData moved = cfg.group.conjugated(g);
    const auto a = dirichlet_cell(cfg.seed, build_orbit({cfg.seed}, cfg.group, cfg.cutoff));
    const Point gs = g * cfg.seed;
    const auto b = dirichlet_cell(gs, build_orbit({gs}, moved, cfg.cutoff));
    ASSERT_EQ(a.halfspaces.size(), b.halfspaces.size());
    for (std::size_t i = 0; i < a.halfspaces.size(); ++i) {
        const Hyperplane image = make_hyperplane(f, g * a.halfspaces[i].halfspace.plane.normal);
        EXPECT_TRUE(same_hyperplane(image, b.halfspaces[i].halfspace.plane, 1e-7));
    }
    // vertex sets agree
    const auto sa = facet_segments_2d(f, a.center, a.plain_halfspaces());
    const auto sb = facet_segments_2d(f, b.center, b.plain_halfspaces());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        ASSERT_TRUE(sa[i] && sb[i]);
        for (int e = 0; e < 2; ++e) {
            if (sa[i]->ideal[e]) continue;
            EXPECT_LT(max_abs_diff(g * sa[i]->endpoints[e], sb[i]->endpoints[e]), 1e-7);
        }
    }
}

TEST(Voronoi, SurfaceSeparationMatchesClosestApproach) {
    std::mt19937_64 rng(8);
    const RealForm f = plane();
    for (int trial = 0; trial < 10; ++trial) {
        const auto scene = random_two_geodesic_scene(rng);
        const auto delta = surface_separation(scene.surfaces, scene.group, 2);
        // oracle: golden-section search of the distance from S_1 points to the line S_2
        const auto& s1 = scene.surfaces[0];
        const auto& n2 = scene.surfaces[1].lift.normal;
        auto dist_to_s2 = [&](double s) { return std::asinh(std::abs(f.bilinear(s1.at(s), n2))); };
        double lo = -3, hi = 3;
        const double phi = (std::sqrt(5.0) - 1) / 2;
        for (int it = 0; it < 200; ++it) {
            const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
            (dist_to_s2(a) < dist_to_s2(b) ? hi : lo) = dist_to_s2(a) < dist_to_s2(b) ? b : a;
        }
        EXPECT_NEAR(delta[0], dist_to_s2((lo + hi) / 2), 1e-9);
        EXPECT_NEAR(delta[0], scene.delta, 1e-9);
        EXPECT_NEAR(delta[1], scene.delta, 1e-9);
    }
}

TEST(Voronoi, SparseSetViolates) {
    const auto scene = two_geodesic_scene(0.7, 6.0, 5.5);
    ASSERT_TRUE(ping_pong_valid(scene));
    const auto rep = is_admissible(sparse_set(scene), scene.group, 3);
    EXPECT_FALSE(rep.admissible);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_EQ(rep.witness_surface, 1u);
    // the witness lies on S_2 and is closer to the S_1 center than to any S_2 center
    EXPECT_NEAR(plane().bilinear(*rep.witness, scene.surfaces[1].lift.normal), 0, 1e-9);
}

TEST(Voronoi, BuiltSetsAreAdmissible) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto scene = random_two_geodesic_scene(rng);
        ASSERT_TRUE(ping_pong_valid(scene));
        const auto set = build_admissible_set(scene.surfaces, scene.group, 3);
        for (const auto& p : set.points)
            EXPECT_NEAR(plane().bilinear(p.point, scene.surfaces[p.surface].lift.normal), 0, 1e-9);
        const auto rep = is_admissible(set, scene.group, 3);
        EXPECT_TRUE(rep.admissible) << "trial " << trial;
        EXPECT_GT(rep.min_gap, 0);
    }
}

TEST(Voronoi, FarApartSinglePointsAdmissible) {
    const auto scene = two_geodesic_scene(3.0, 7.0, 7.0);
    AdmissibleSet x{scene.surfaces, {{scene.surfaces[0].at(0), 0}, {scene.surfaces[1].at(0.3), 1}}};
    EXPECT_TRUE(is_admissible(x, scene.group, 4).admissible);
    // short translations with far-apart surfaces leave no certified radius
    const auto loose = two_geodesic_scene(6.0, 1.0, 1.0);
    AdmissibleSet y{loose.surfaces, {{loose.surfaces[0].at(0), 0}, {loose.surfaces[1].at(0.3), 1}}};
    EXPECT_THROW(is_admissible(y, loose.group, 4), Undecidable);
}

TEST(Voronoi, SingleSurfaceAdmissible) {
    const RealForm f = plane();
    const MarkedSurface s = surface_from_segment_2d(f, origin(), direction(0), 2.0);
    GroupData g(f, {translation_through_origin(0, 2.0)}, {s.lift});
    AdmissibleSet x{{s}, {{polar_point(0.5, 0), 0}}};
    EXPECT_TRUE(is_admissible(x, g, 2).admissible);
    EXPECT_EQ(build_admissible_set({s}, g).points.size(), 1u);
}

TEST(Voronoi, UndecidableWithTinyCutoff) {
    const auto scene = two_geodesic_scene(0.7, 6.0, 6.0);
    const auto set = build_admissible_set(scene.surfaces, scene.group, 3);
    EXPECT_THROW(is_admissible(set, scene.group, 1), Undecidable);
}

TEST(Voronoi, IntersectingAndAsymptoticSurfacesRejected) {
    const RealForm f = plane();
    GroupData g(f, {});
    const auto a = surface_from_segment_2d(f, origin(), direction(0), 1.0);
    const auto b = surface_from_segment_2d(f, origin(), direction(1.0), 1.0);
    EXPECT_THROW(build_admissible_set({a, b}, g), std::invalid_argument);
    // two lines sharing the ideal point (1, 1, 0)
    MarkedSurface c = a;
    c.lift = make_hyperplane(f, {1.0, 1.0, 1.0});
    MarkedSurface d = a;
    d.lift = make_hyperplane(f, {1.0, 1.0, -1.0});
    EXPECT_THROW(surface_separation({c, d}, g, 1), std::domain_error);
}

TEST(Voronoi, OrthogonalExtensionSlab) {
    const double len = 1.4;
    GroupData g(plane(), {translation_through_origin(0, len)}, {line_through_origin(0)});
    const auto cell = classify_facets(dirichlet_cell(origin(), build_orbit({origin()}, g, 3)), g.marked());
    const auto ext = orthogonal_extension(cell, 2.0);
    EXPECT_EQ(ext.form.dimension(), 4u);
    const Vec<double> vertical = {0, 0, 0, 1};
    for (const auto& h : ext.halfspaces) EXPECT_DOUBLE_EQ(ext.form.bilinear(h.halfspace.plane.normal, vertical), 0.0);
    for (std::size_t i = 0; i < ext.facets.size(); ++i) EXPECT_EQ(ext.facets[i].type, cell.facets[i].type);
    // cross-section at height 0 recovers the strip
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
        Point x = random_point_near(rng, origin(), 3.0);
        const bool in = cell.contains(x, 0.0);
        x.push_back(0.0);
        EXPECT_EQ(ext.contains(x, 0.0), in);
    }
    const auto rep = boundary_copies_check(ext, cell, 4000, 17);
    EXPECT_EQ(rep.mismatches, 0u);
    EXPECT_GT(rep.in_upper, 100u);
    EXPECT_GT(rep.in_lower, 100u);
}

TEST(Voronoi, ExtendThenClassifyEqualsClassifyThenInherit) {
    for (const auto& cfg : desk_configurations()) {
        const auto cell = dirichlet_cell(cfg.seed, build_orbit({cfg.seed}, cfg.group, cfg.cutoff));
        // mark one line through the seed and one far away
        const std::vector<Hyperplane> marked = {line_through_origin(0.4), perpendicular_line(2.5, 1.0)};
        const auto classified = classify_facets(cell, marked);
        std::vector<Hyperplane> marked_ext;
        for (const auto& m : marked) {
            Vec<double> n = m.normal;
            n.push_back(0.0);
            marked_ext.push_back({n});
        }
        const auto extended = classify_facets(orthogonal_extension(cell, 1.0), marked_ext);
        for (std::size_t i = 0; i < cell.facets.size(); ++i)
            EXPECT_EQ(extended.facets[i].type, classified.facets[i].type) << cfg.name << " facet " << i;
    }
}

TEST(Voronoi, ShrinkReportMatchesAnalyticRadii) {
    const auto rep = sphere_shrink_report({2, 4, 8, 16});
    ASSERT_EQ(rep.rows.size(), 4u);
    for (const auto& row : rep.rows) {
        EXPECT_EQ(row.first_count, 2u);
        EXPECT_EQ(row.second_count, 2u);
        EXPECT_NEAR(row.first_radius, 1 / std::sinh(1.0), 1e-9);
        EXPECT_NEAR(row.second_radius, 1 / std::sinh(row.R / 2), 1e-9 * std::max(1.0, row.second_radius));
    }
    EXPECT_TRUE(rep.second_decreasing);
    EXPECT_TRUE(rep.first_constant);
    EXPECT_GE(rep.min_ratio, 1.5);
    EXPECT_EQ(sphere_shrink_report({3}).rows.size(), 1u);
    EXPECT_THROW(sphere_shrink_report({4, 2}), std::invalid_argument);
}

TEST(Voronoi, PoincareStripPasses) {
    GroupData g(plane(), {translation_through_origin(0, 1.2)});
    const auto cell = dirichlet_cell(origin(), build_orbit({origin()}, g, 3));
    const Domain d = build_domain_2d({cell});
    ASSERT_EQ(d.facets.size(), 2u);
    const auto rep = check_poincare_2d(d, derive_pairings(d, {&g}));
    EXPECT_TRUE(rep.passed);
    EXPECT_TRUE(rep.cycles.empty());
}

TEST(Voronoi, PoincareOctagonPasses) {
    const GroupData g = octagon_group();
    const auto cell = dirichlet_cell(origin(), build_orbit({origin()}, g, 2));
    ASSERT_EQ(cell.halfspaces.size(), 8u);
    for (const auto& h : cell.halfspaces) EXPECT_EQ(h.word.size(), 1u);
    const Domain d = build_domain_2d({cell});
    const auto rep = check_poincare_2d(d, derive_pairings(d, {&g}));
    EXPECT_TRUE(rep.passed);
    EXPECT_TRUE(rep.torsion_free);
    ASSERT_EQ(rep.cycles.size(), 1u);
    EXPECT_EQ(rep.cycles[0].vertices.size(), 8u);
    EXPECT_NEAR(rep.cycles[0].angle_sum, 2 * kPi, 1e-9);
}

TEST(Voronoi, PoincareDetectsMissingPairing) {
    GroupData g(plane(), {translation_through_origin(0, 1.2)});
    const auto cell = dirichlet_cell(origin(), build_orbit({origin()}, g, 3));
    const Domain d = build_domain_2d({cell});
    auto pairings = derive_pairings(d, {&g});
    pairings.pop_back();
    const auto rep = check_poincare_2d(d, pairings);
    EXPECT_FALSE(rep.passed);
    EXPECT_EQ(rep.unpaired.size(), 1u);
}

TEST(Voronoi, NestingDichotomy) {
    const auto good = nesting_scene(90, 1.0, 6.0);
    EXPECT_TRUE(good.report.passed);
    EXPECT_TRUE(good.report.torsion_free);
    EXPECT_FALSE(good.report.nested_witness.has_value());
    EXPECT_EQ(good.domain.facets.size(), 4u);

    const auto bad = nesting_scene(60, 0.3, 8.0);
    EXPECT_FALSE(bad.report.passed);
    ASSERT_TRUE(bad.report.nested_witness.has_value());
    const auto [a, b] = *bad.report.nested_witness;
    EXPECT_EQ(are_nested(plane(), bad.cells[a.first].halfspaces[a.second].halfspace, bad.cells[b.first].halfspaces[b.second].halfspace,
                         origin())
                  .kind,
              Nesting::Nested);
}

TEST(Voronoi, OrthogonalThresholdMatchesAnalyticValue) {
    for (double lh : {1.0, 1.6}) {
        const double found = bisect_threshold(90, lh, 0.5, 8.0, 1e-7);
        const double analytic = 2 * std::asinh(1 / std::sinh(lh / 2));
        EXPECT_NEAR(found, analytic, 1e-5) << lh;
    }
}
