#pragma once

/**
 * @file voronoi.hpp
 * @brief Dirichlet cells of truncated group orbits in H^n, facet types,
 *        admissible point sets, orthogonal extension and a 2D Poincare check.
 *
 * Orbits are generated from reduced words up to a cutoff. Cells are built
 * as intersections of bisector halfspaces, pruned in the Klein model of a
 * frame centered at the cell center: in dimension 2 by exact chord clipping,
 * otherwise by linear programming plus a Frank-Wolfe ball test. All outputs
 * are ordered by (word length, word, seed) so results are deterministic.
 */

#include "hypgeo/hyperboloid.hpp"
#include "hypgeo/lp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace hypgeo {

// ---------------------------------------------------------------------------
// Words and groups.

/// Letter 2i is generator i, letter 2i+1 its inverse. A word l1 l2 ... lk
/// acts as g_{l1} g_{l2} ... g_{lk}.
using Word = std::vector<int>;

inline int inverse_letter(int l) { return l ^ 1; }

inline Word inverse_word(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (int& l : r) l = inverse_letter(l);
    return r;
}

/// "e" for the empty word, generators a, b, c, ..., inverses A, B, C, ...
inline std::string word_to_string(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int l : w) s.push_back(static_cast<char>((l % 2 ? 'A' : 'a') + l / 2));
    return s;
}

inline bool word_less(const Word& x, const Word& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
}

/**
 * Generators of a discrete group (inverses implied), marked hyperplane lifts
 * and a declared translation-length floor R. Generators stabilizing the
 * optional horizontal hyperplane are exempt from the floor.
 */
class GroupData {
public:
    GroupData(RealForm form, std::vector<RealMatrix> generators, std::vector<Hyperplane> marked = {},
              double translation_floor = 0, std::optional<Hyperplane> horizontal = std::nullopt)
        : form_(std::move(form)),
          marked_(std::move(marked)),
          floor_(translation_floor),
          horizontal_(std::move(horizontal)) {
        if (translation_floor < 0) throw std::invalid_argument("GroupData: translation floor must be nonnegative");
        for (std::size_t i = 0; i < generators.size(); ++i) {
            const RealMatrix& g = generators[i];
            if (!is_isometry(form_, g) || !preserves_upper_sheet(form_, g))
                throw std::invalid_argument("GroupData: generator " + std::to_string(i) + " is not an isometry of H^n");
            letters_.push_back(g);
            letters_.push_back(inverse_isometry(form_, g));
        }
        for (std::size_t i = 0; i < rank(); ++i) {
            if (stabilizes_horizontal(i)) continue;
            const double len = translation_length(letters_[2 * i]);
            if (len < floor_ - 1e-9 * std::max(1.0, floor_))
                throw std::invalid_argument("GroupData: generator " + std::to_string(i) + " has translation length " +
                                            std::to_string(len) + " below the floor " + std::to_string(floor_));
        }
        for (const auto& h : marked_)
            if (h.normal.size() != form_.dimension()) throw std::invalid_argument("GroupData: marked lift dimension mismatch");
    }

    const RealForm& form() const { return form_; }
    std::size_t rank() const { return letters_.size() / 2; }
    std::size_t letter_count() const { return letters_.size(); }
    const RealMatrix& letter(int l) const { return letters_.at(static_cast<std::size_t>(l)); }
    const RealMatrix& generator(std::size_t i) const { return letters_.at(2 * i); }
    const std::vector<Hyperplane>& marked() const { return marked_; }
    double translation_floor() const { return floor_; }
    const std::optional<Hyperplane>& horizontal() const { return horizontal_; }

    bool stabilizes_horizontal(std::size_t i) const {
        if (!horizontal_) return false;
        const Vec<double> img = letters_[2 * i] * horizontal_->normal;
        double plus = 0, minus = 0;
        for (std::size_t k = 0; k < img.size(); ++k) {
            plus = std::max(plus, std::abs(img[k] - horizontal_->normal[k]));
            minus = std::max(minus, std::abs(img[k] + horizontal_->normal[k]));
        }
        return std::min(plus, minus) <= 1e-9;
    }

    RealMatrix word_matrix(const Word& w) const {
        auto m = RealMatrix::identity(form_.dimension(), 0.0, 1.0);
        for (int l : w) m = m * letter(l);
        return m;
    }

    /// The conjugate group g G g^-1 with marked lifts moved by g.
    GroupData conjugated(const RealMatrix& g) const {
        const RealMatrix gi = inverse_isometry(form_, g);
        std::vector<RealMatrix> gens;
        for (std::size_t i = 0; i < rank(); ++i) gens.push_back(g * generator(i) * gi);
        std::vector<Hyperplane> marked;
        for (const auto& h : marked_) marked.push_back(make_hyperplane(form_, g * h.normal));
        std::optional<Hyperplane> hor;
        if (horizontal_) hor = make_hyperplane(form_, g * horizontal_->normal);
        return GroupData(form_, std::move(gens), std::move(marked), floor_, std::move(hor));
    }

private:
    RealForm form_;
    std::vector<RealMatrix> letters_;
    std::vector<Hyperplane> marked_;
    double floor_;
    std::optional<Hyperplane> horizontal_;
};

/// All reduced words of length <= cutoff in (length, lexicographic) order.
inline std::vector<Word> reduced_words(std::size_t letter_count, int cutoff) {
    std::vector<Word> out{Word{}};
    std::size_t level_begin = 0;
    for (int len = 1; len <= cutoff; ++len) {
        const std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (std::size_t l = 0; l < letter_count; ++l) {
                const Word& w = out[i];
                if (!w.empty() && static_cast<int>(l) == inverse_letter(w.back())) continue;
                Word next = w;
                next.push_back(static_cast<int>(l));
                out.push_back(std::move(next));
            }
        level_begin = level_end;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orbits.

struct OrbitPoint {
    Point point;
    Word word;
    std::size_t seed = 0;
};

/**
 * A truncated orbit. Omitted points (words longer than the cutoff) are
 * taken to lie farther than 2 * certification_radius from every seed,
 * using the bound (delta_min * cutoff - D) / 2 with delta_min the least
 * generator displacement over the seeds and D the seed-set diameter.
 */
struct OrbitSet {
    RealForm form;
    std::vector<Point> seeds;
    std::vector<OrbitPoint> points;
    double certification_radius = std::numeric_limits<double>::infinity();
    int cutoff = 0;

    std::optional<std::size_t> find(const Point& x, double tol = 1e-9) const {
        for (std::size_t i = 0; i < points.size(); ++i)
            if (fast_distance(form, points[i].point, x) <= tol) return i;
        return std::nullopt;
    }
};

inline OrbitSet build_orbit(const std::vector<Point>& seeds, const GroupData& group, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("build_orbit: word cutoff must be at least 1");
    const RealForm& f = group.form();
    for (const auto& s : seeds) require_on_sheet(f, s, "build_orbit");

    OrbitSet orbit{f, seeds, {}, std::numeric_limits<double>::infinity(), cutoff};
    const auto words = reduced_words(group.letter_count(), group.rank() ? cutoff : 0);
    // matrices by prefix: W(w l) = W(w) G(l)
    std::map<Word, RealMatrix> cache;
    for (const Word& w : words) {
        RealMatrix m = w.empty() ? RealMatrix::identity(f.dimension(), 0.0, 1.0)
                                 : cache.at(Word(w.begin(), w.end() - 1)) * group.letter(w.back());
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            Point p = project_to_sheet(f, m * seeds[s]);
            bool duplicate = false;
            for (const auto& q : orbit.points)
                if (fast_distance(f, q.point, p) <= 1e-9) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) orbit.points.push_back({std::move(p), w, s});
        }
        if (static_cast<int>(w.size()) < cutoff) cache.emplace(w, std::move(m));
    }

    if (group.rank() > 0 && !seeds.empty()) {
        double delta = std::numeric_limits<double>::infinity();
        for (const auto& s : seeds)
            for (std::size_t l = 0; l < group.letter_count(); ++l)
                delta = std::min(delta, fast_distance(f, s, project_to_sheet(f, group.letter(static_cast<int>(l)) * s)));
        double diameter = 0;
        for (const auto& a : seeds)
            for (const auto& b : seeds) diameter = std::max(diameter, fast_distance(f, a, b));
        orbit.certification_radius = (delta * cutoff - diameter) / 2;
    }
    return orbit;
}

// ---------------------------------------------------------------------------
// Klein frame centered at a point.

/// Klein coordinates of the frame moved so that `center` is the origin.
struct KleinFrame {
    RealForm form;
    RealMatrix to_origin;
    RealMatrix from_origin;

    KleinFrame(const RealForm& f, const Point& center)
        : form(f), to_origin(move_to_base_point(f, center)), from_origin(inverse_isometry(f, to_origin)) {}

    /// Halfspace side * b(x, n) >= 0 as a . k >= b with |a| = 1.
    lp::LinearConstraint constraint(const HalfSpace& h) const {
        const Vec<double> n = to_origin * h.plane.normal;
        lp::LinearConstraint c{std::vector<double>(n.size() - 1), lp::Relation::GreaterEqual, 0};
        double norm = 0;
        for (std::size_t i = 1; i < n.size(); ++i) {
            c.a[i - 1] = h.side * std::sqrt(form.coefficient(i)) * n[i];
            norm += c.a[i - 1] * c.a[i - 1];
        }
        c.b = h.side * std::sqrt(-form.coefficient(0)) * n[0];
        norm = std::sqrt(norm);
        for (double& v : c.a) v /= norm;
        c.b /= norm;
        return c;
    }

    lp::LinearConstraint constraint(const Hyperplane& h) const {
        auto c = constraint(HalfSpace{h, 1});
        c.rel = lp::Relation::Equal;
        return c;
    }

    Vec<double> klein(const Vec<double>& x) const { return klein_coordinates(form, to_origin * x); }

    /// Global point (|k| < 1) or light-cone vector (|k| = 1) for Klein coordinates k.
    Vec<double> global(const Vec<double>& k) const {
        double r2 = 0;
        for (double c : k) r2 += c * c;
        if (r2 < 1 - 1e-12) return from_origin * from_klein(form, k);
        Vec<double> z(k.size() + 1);
        const double s = 1 / std::sqrt(r2);
        z[0] = 1;
        for (std::size_t i = 0; i < k.size(); ++i) z[i + 1] = k[i] * s;
        return from_origin * from_standard(form, z);
    }
};

// ---------------------------------------------------------------------------
// Cells.

enum class FacetType { Unclassified, First, Second };

inline const char* to_string(FacetType t) {
    switch (t) {
        case FacetType::First: return "first";
        case FacetType::Second: return "second";
        case FacetType::Unclassified: return "unclassified";
    }
    return "?";
}

struct CellHalfSpace {
    HalfSpace halfspace;
    std::size_t source = 0;  ///< orbit index of the neighbouring center
    Word word;
    std::size_t seed = 0;
};

struct Facet {
    std::size_t halfspace = 0;
    FacetType type = FacetType::Unclassified;
};

struct VoronoiCell {
    RealForm form;
    Point center;
    Word center_word;
    std::size_t center_seed = 0;
    std::vector<CellHalfSpace> halfspaces;  ///< irredundant within the region
    std::vector<Facet> facets;              ///< one per halfspace, same order
    double region_radius = std::numeric_limits<double>::infinity();

    bool contains(const Point& x, double tol = kEpsilon) const {
        return std::all_of(halfspaces.begin(), halfspaces.end(),
                           [&](const CellHalfSpace& h) { return h.halfspace.contains(form, x, tol); });
    }

    std::vector<HalfSpace> plain_halfspaces() const {
        std::vector<HalfSpace> out;
        for (const auto& h : halfspaces) out.push_back(h.halfspace);
        return out;
    }
};

enum class PruneMethod { Auto, Chord2D, LinearProgram };

struct CellOptions {
    /// Hyperbolic radius of the pruning ball around the center; defaults to
    /// the orbit's certification radius (the whole space when infinite).
    std::optional<double> region_radius;
    PruneMethod method = PruneMethod::Auto;
};

/// Endpoints (Klein coordinates) of line j inside the disk |k| <= r after
/// clipping by the other constraints, or nothing if the piece is shorter than tol.
inline std::optional<std::pair<Vec<double>, Vec<double>>> clip_chord(const std::vector<lp::LinearConstraint>& cons,
                                                                     std::size_t j, double r, double tol = 1e-10) {
    const auto& a = cons[j].a;
    const double b = cons[j].b;
    if (std::abs(b) >= r) return std::nullopt;
    const double h = std::sqrt(r * r - b * b);
    const Vec<double> p0 = {b * a[0], b * a[1]};
    const Vec<double> d = {-a[1], a[0]};
    double lo = -h, hi = h;
    for (std::size_t i = 0; i < cons.size() && lo < hi; ++i) {
        if (i == j) continue;
        const double alpha = cons[i].a[0] * d[0] + cons[i].a[1] * d[1];
        const double beta = cons[i].b - (cons[i].a[0] * p0[0] + cons[i].a[1] * p0[1]);
        if (std::abs(alpha) < 1e-14) {
            if (beta > tol) return std::nullopt;
            continue;
        }
        if (alpha > 0) lo = std::max(lo, beta / alpha);
        else hi = std::min(hi, beta / alpha);
    }
    if (!(hi - lo > tol)) return std::nullopt;
    return std::make_pair(Vec<double>{p0[0] + lo * d[0], p0[1] + lo * d[1]}, Vec<double>{p0[0] + hi * d[0], p0[1] + hi * d[1]});
}

/// Indices of the constraints that carry a facet inside the Klein ball of radius r.
inline std::vector<std::size_t> irredundant_constraints(const std::vector<lp::LinearConstraint>& cons, double r,
                                                        PruneMethod method) {
    const std::size_t dim = cons.empty() ? 0 : cons.front().a.size();
    if (method == PruneMethod::Auto) method = dim == 2 ? PruneMethod::Chord2D : PruneMethod::LinearProgram;
    if (method == PruneMethod::Chord2D && dim != 2) throw std::invalid_argument("chord pruning needs dimension 2");
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < cons.size(); ++j) {
        if (std::abs(cons[j].b) >= r) continue;
        if (method == PruneMethod::Chord2D) {
            if (clip_chord(cons, j, r)) keep.push_back(j);
            continue;
        }
        // is there a point of the ball obeying the others but violating j?
        std::vector<lp::LinearConstraint> q;
        for (std::size_t i = 0; i < cons.size(); ++i)
            if (i != j) q.push_back(cons[i]);
        q.push_back({cons[j].a, lp::Relation::LessEqual, cons[j].b - 1e-9});
        const auto mn = lp::min_norm(dim, q, r, r * r);
        if (mn.feasible && mn.lower < r * r) keep.push_back(j);
    }
    return keep;
}

/**
 * Dirichlet cell of the orbit point `center`: bisector halfspaces toward
 * every other orbit point, keeping those that bound the cell inside the
 * pruning ball.
 */
inline VoronoiCell dirichlet_cell(const Point& center, const OrbitSet& orbit, const CellOptions& options = {}) {
    const auto idx = orbit.find(center);
    if (!idx) throw std::invalid_argument("dirichlet_cell: center is not an orbit point");
    const RealForm& f = orbit.form;
    const OrbitPoint& c = orbit.points[*idx];

    double radius = options.region_radius.value_or(orbit.certification_radius);
    if (!(radius > 0)) throw std::domain_error("dirichlet_cell: certification radius is not positive; raise the word cutoff");
    const double r = std::isinf(radius) ? 1.0 : std::tanh(radius);

    KleinFrame frame(f, c.point);
    std::vector<CellHalfSpace> all;
    std::vector<lp::LinearConstraint> cons;
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        if (i == *idx) continue;
        const auto& q = orbit.points[i];
        CellHalfSpace h{closer_halfspace(f, c.point, q.point), i, q.word, q.seed};
        cons.push_back(frame.constraint(h.halfspace));
        all.push_back(std::move(h));
    }
    VoronoiCell cell{f, c.point, c.word, c.seed, {}, {}, radius};
    for (std::size_t j : irredundant_constraints(cons, r, options.method)) {
        cell.facets.push_back({cell.halfspaces.size(), FacetType::Unclassified});
        cell.halfspaces.push_back(all[j]);
    }
    return cell;
}

/**
 * Tags a facet First when it meets one of the marked lifts inside H^n and
 * Second otherwise.
 */
inline VoronoiCell classify_facets(VoronoiCell cell, const std::vector<Hyperplane>& marked) {
    const KleinFrame frame(cell.form, cell.center);
    std::vector<lp::LinearConstraint> cons;
    for (const auto& h : cell.halfspaces) cons.push_back(frame.constraint(h.halfspace));
    std::vector<lp::LinearConstraint> lifts;
    for (const auto& m : marked) lifts.push_back(frame.constraint(m));
    const std::size_t dim = cell.form.dimension() - 1;

    auto others_hold = [&](const Vec<double>& k, std::size_t j) {
        for (std::size_t i = 0; i < cons.size(); ++i) {
            if (i == j) continue;
            double v = -cons[i].b;
            for (std::size_t t = 0; t < dim; ++t) v += cons[i].a[t] * k[t];
            if (v < -1e-9) return false;
        }
        return true;
    };

    for (auto& facet : cell.facets) {
        const std::size_t j = facet.halfspace;
        bool first = false;
        for (const auto& m : lifts) {
            if (dim == 2) {
                const auto& a = cons[j].a;
                const double det = a[0] * m.a[1] - a[1] * m.a[0];
                if (std::abs(det) < 1e-12) {
                    // parallel unit normals: same line iff the offsets agree up to sign
                    const double sgn = a[0] * m.a[0] + a[1] * m.a[1] > 0 ? 1 : -1;
                    if (std::abs(cons[j].b - sgn * m.b) < 1e-12 && clip_chord(cons, j, 1.0)) first = true;
                } else {
                    const Vec<double> k = {(cons[j].b * m.a[1] - a[1] * m.b) / det, (a[0] * m.b - cons[j].b * m.a[0]) / det};
                    if (k[0] * k[0] + k[1] * k[1] < 1 - 1e-12 && others_hold(k, j)) first = true;
                }
            } else {
                std::vector<lp::LinearConstraint> q;
                for (std::size_t i = 0; i < cons.size(); ++i)
                    if (i != j) q.push_back(cons[i]);
                q.push_back({cons[j].a, lp::Relation::Equal, cons[j].b});
                q.push_back(m);
                const auto mn = lp::min_norm(dim, q, 1.0, 1.0);
                if (mn.feasible && mn.upper < 1 - 1e-12) first = true;
            }
            if (first) break;
        }
        facet.type = first ? FacetType::First : FacetType::Second;
    }
    return cell;
}

/// A facet of a 2D cell or domain as a geodesic segment; ideal endpoints are light-cone vectors.
struct FacetSegment {
    std::size_t halfspace = 0;
    std::array<Vec<double>, 2> endpoints;
    std::array<bool, 2> ideal{false, false};
};

/// Facet segments of the intersection of halfspaces in the whole disk, in input order.
inline std::vector<std::optional<FacetSegment>> facet_segments_2d(const RealForm& f, const Point& center,
                                                                  const std::vector<HalfSpace>& halfspaces) {
    if (f.dimension() != 3) throw std::invalid_argument("facet_segments_2d: ambient dimension must be 2");
    const KleinFrame frame(f, center);
    std::vector<lp::LinearConstraint> cons;
    for (const auto& h : halfspaces) cons.push_back(frame.constraint(h));
    std::vector<std::optional<FacetSegment>> out(halfspaces.size());
    for (std::size_t j = 0; j < cons.size(); ++j) {
        const auto chord = clip_chord(cons, j, 1.0);
        if (!chord) continue;
        FacetSegment s;
        s.halfspace = j;
        const Vec<double>* ends[2] = {&chord->first, &chord->second};
        for (int e = 0; e < 2; ++e) {
            const Vec<double>& k = *ends[e];
            s.ideal[e] = k[0] * k[0] + k[1] * k[1] >= 1 - 1e-12;
            s.endpoints[e] = frame.global(k);
        }
        out[j] = std::move(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Admissible point sets.

/// A marked surface: a hyperplane lift with a fundamental geodesic segment on it.
struct MarkedSurface {
    Hyperplane lift;
    Point start;
    Vec<double> tangent;  ///< unit tangent at start, along the lift
    double length = 0;

    Point at(double s) const { return geodesic_point(start, tangent, s); }
};

/// The geodesic of H^2 through `start` with direction `tangent`, as a marked surface.
inline MarkedSurface surface_from_segment_2d(const RealForm& f, const Point& start, const Vec<double>& tangent, double length) {
    if (f.dimension() != 3) throw std::invalid_argument("surface_from_segment_2d: ambient dimension must be 2");
    require_on_sheet(f, start, "surface_from_segment_2d");
    const Vec<double> t = unit_tangent(f, start, tangent);
    // F n is the Euclidean cross product of start and t
    const Vec<double> w = {start[1] * t[2] - start[2] * t[1], start[2] * t[0] - start[0] * t[2], start[0] * t[1] - start[1] * t[0]};
    Vec<double> n(3);
    for (std::size_t i = 0; i < 3; ++i) n[i] = w[i] / f.coefficient(i);
    return {make_hyperplane(f, n), start, t, length};
}

struct AdmissiblePoint {
    Point point;
    std::size_t surface = 0;
};

struct AdmissibleSet {
    std::vector<MarkedSurface> surfaces;
    std::vector<AdmissiblePoint> points;
};

/// Raised when the truncated orbit cannot certify a nearest-center decision.
class Undecidable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * delta_i = distance from surface i to the union of the other surfaces,
 * over lifts g * S_j for reduced words g up to the cutoff. Infinite for a
 * lone surface.
 */
inline std::vector<double> surface_separation(const std::vector<MarkedSurface>& surfaces, const GroupData& group, int cutoff) {
    const RealForm& f = group.form();
    std::vector<double> delta(surfaces.size(), std::numeric_limits<double>::infinity());
    const auto words = reduced_words(group.letter_count(), group.rank() ? cutoff : 0);
    std::vector<RealMatrix> mats;
    for (const Word& w : words) mats.push_back(group.word_matrix(w));
    for (std::size_t i = 0; i < surfaces.size(); ++i)
        for (std::size_t j = 0; j < surfaces.size(); ++j) {
            if (i == j) continue;
            const Vec<double>& ni = surfaces[i].lift.normal;
            const Vec<double>& nj = surfaces[j].lift.normal;
            // isometries preserve f(n); using the original norms avoids cancellation in f(m n)
            const double norm = std::sqrt(f.evaluate(ni) * f.evaluate(nj));
            for (const RealMatrix& m : mats) {
                const double beta = std::abs(f.bilinear(ni, m * nj)) / norm;
                if (beta < 1 - 1e-12)
                    throw std::invalid_argument("surfaces " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
                if (beta <= 1 + 1e-9)
                    throw std::domain_error("surfaces " + std::to_string(i) + " and " + std::to_string(j) +
                                            " are asymptotic; the cusped case is not supported");
                delta[i] = std::min(delta[i], std::acosh(beta));
            }
        }
    return delta;
}

/// Points spaced at most delta_i / 2 along each fundamental segment.
inline AdmissibleSet build_admissible_set(const std::vector<MarkedSurface>& surfaces, const GroupData& group, int cutoff = 3) {
    const auto delta = surface_separation(surfaces, group, cutoff);
    AdmissibleSet set{surfaces, {}};
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        const double len = surfaces[i].length;
        const std::size_t n =
            std::isinf(delta[i]) || len <= 0 ? 1 : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / (delta[i] / 2))));
        for (std::size_t k = 0; k < n; ++k) set.points.push_back({surfaces[i].at(len * static_cast<double>(k) / static_cast<double>(n)), i});
    }
    return set;
}

struct AdmissibilityReport {
    bool admissible = false;
    std::optional<Point> witness;           ///< sample point covered by a foreign cell
    std::size_t witness_surface = 0;
    std::optional<std::size_t> witness_center;  ///< orbit index of the offending center
    double min_gap = std::numeric_limits<double>::infinity();
    double grid_spacing = 0;
    std::size_t samples = 0;
};

/**
 * Samples every fundamental segment at spacing <= eps_grid = min(delta_i)/10
 * and checks that the nearest orbit points of each sample come from points
 * of X on the same surface. The gap (distance to foreign centers minus
 * distance to own centers) is 2-Lipschitz, so an interval whose end gaps
 * exceed its length is clean; other intervals are bisected.
 */
inline AdmissibilityReport is_admissible(const AdmissibleSet& x, const GroupData& group, int cutoff) {
    const RealForm& f = group.form();
    for (const auto& p : x.points) {
        if (p.surface >= x.surfaces.size()) throw std::invalid_argument("is_admissible: point tagged with unknown surface");
        const auto& h = x.surfaces[p.surface].lift;
        if (std::abs(f.bilinear(p.point, h.normal)) > 1e-7 * std::max(1.0, std::sqrt(f.magnitude(p.point))))
            throw std::invalid_argument("is_admissible: point does not lie on its surface");
    }
    std::vector<Point> seeds;
    for (const auto& p : x.points) seeds.push_back(p.point);
    const OrbitSet orbit = build_orbit(seeds, group, cutoff);
    std::vector<std::size_t> tag;
    for (const auto& q : orbit.points) tag.push_back(x.points[q.seed].surface);

    const auto delta = surface_separation(x.surfaces, group, cutoff);
    double grid = std::numeric_limits<double>::infinity();
    for (double d : delta) grid = std::min(grid, d / 10);
    for (const auto& s : x.surfaces)
        if (s.length > 0) grid = std::min(grid, s.length / 16);
    if (std::isinf(grid)) grid = 1.0;

    AdmissibilityReport report;
    report.grid_spacing = grid;
    const double rho2 = 2 * orbit.certification_radius;

    struct Sample {
        double gap;
        bool violation;
        std::size_t culprit;
    };
    auto evaluate = [&](std::size_t surf, double s) -> Sample {
        ++report.samples;
        const Point y = x.surfaces[surf].at(s);
        double own = std::numeric_limits<double>::infinity(), foreign = own;
        std::size_t culprit = 0;
        for (std::size_t k = 0; k < orbit.points.size(); ++k) {
            const double d = fast_distance(f, y, orbit.points[k].point);
            if (tag[k] == surf) own = std::min(own, d);
            else if (d < foreign) {
                foreign = d;
                culprit = k;
            }
        }
        double to_seed = std::numeric_limits<double>::infinity();
        for (const auto& sd : seeds) to_seed = std::min(to_seed, fast_distance(f, y, sd));
        const double bound = rho2 - to_seed;  // every omitted orbit point is farther than this
        if (std::min(own, foreign) >= bound)
            throw Undecidable("is_admissible: certification radius too small near a sample; increase the orbit cutoff");
        if (foreign <= own + 1e-9) return {foreign - own, true, culprit};
        return {std::min(foreign, bound) - own, false, culprit};
    };

    for (std::size_t surf = 0; surf < x.surfaces.size(); ++surf) {
        const MarkedSurface& S = x.surfaces[surf];
        const std::size_t n = S.length > 0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(S.length / grid))) : 0;
        const double h = n ? S.length / static_cast<double>(n) : 0;
        std::vector<double> pos;
        for (std::size_t k = 0; k <= n; ++k) pos.push_back(h * static_cast<double>(k));

        auto fail = [&](double s, const Sample& smp) {
            report.admissible = false;
            report.witness = S.at(s);
            report.witness_surface = surf;
            report.witness_center = smp.culprit;
            report.min_gap = std::min(report.min_gap, smp.gap);
            return report;
        };

        std::vector<Sample> vals;
        for (double s : pos) {
            vals.push_back(evaluate(surf, s));
            report.min_gap = std::min(report.min_gap, vals.back().gap);
            if (vals.back().violation) return fail(s, vals.back());
        }
        // (a, b, gap_a, gap_b) intervals still to certify
        std::vector<std::tuple<double, double, double, double>> todo;
        for (std::size_t k = 0; k + 1 < pos.size(); ++k) todo.emplace_back(pos[k], pos[k + 1], vals[k].gap, vals[k + 1].gap);
        while (!todo.empty()) {
            const auto [a, b, ga, gb] = todo.back();
            todo.pop_back();
            const double len = b - a;
            if (ga > len && gb > len) continue;
            const double mid = (a + b) / 2;
            const Sample m = evaluate(surf, mid);
            report.min_gap = std::min(report.min_gap, m.gap);
            if (m.violation || len < 1e-7) return fail(mid, m);
            todo.emplace_back(a, mid, ga, m.gap);
            todo.emplace_back(mid, b, m.gap, gb);
        }
    }
    report.admissible = true;
    return report;
}

// ---------------------------------------------------------------------------
// Orthogonal extension.

/// Extends a cell of (R^{n+1}, f) to (R^{n+2}, f + <q>): normals (v) -> (v, 0).
inline VoronoiCell orthogonal_extension(const VoronoiCell& cell, double q) {
    VoronoiCell out = cell;
    out.form = cell.form.append(q);
    out.center.push_back(0.0);
    for (auto& h : out.halfspaces) h.halfspace.plane.normal.push_back(0.0);
    return out;
}

struct BoundaryCopiesReport {
    std::size_t samples = 0;
    std::size_t in_upper = 0;     ///< ideal points with last coordinate > 0 inside the extended cell
    std::size_t in_lower = 0;
    std::size_t mismatches = 0;   ///< membership disagreeing with the projected base cell or its mirror
};

/**
 * Samples ideal points xi of the extended cell's sphere at infinity. Off the
 * horizontal boundary, xi projects to the point (1, xi_1..xi_n) / |xi_{n+1}|
 * of the horizontal hyperplane; membership must agree with the base cell and
 * with the mirror image xi_{n+1} -> -xi_{n+1}, i.e. the boundary consists of
 * two conformal copies of the base cell.
 */
inline BoundaryCopiesReport boundary_copies_check(const VoronoiCell& extended, const VoronoiCell& base, std::size_t samples,
                                                  std::uint64_t seed) {
    const std::size_t n = base.form.dimension();  // extended ambient is n + 1
    if (extended.form.dimension() != n + 1) throw std::invalid_argument("boundary_copies_check: dimension mismatch");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    BoundaryCopiesReport rep;

    auto ideal_membership = [&](const Vec<double>& xi, bool& near) {
        bool in = true;
        for (const auto& h : extended.halfspaces) {
            const double v = h.halfspace.value(extended.form, xi);
            if (std::abs(v) < 1e-9) near = true;
            if (v < 0) in = false;
        }
        return in;
    };

    while (rep.samples < samples) {
        Vec<double> d(n);
        double norm = 0;
        for (double& c : d) {
            c = gauss(rng);
            norm += c * c;
        }
        norm = std::sqrt(norm);
        for (double& c : d) c /= norm;
        if (std::abs(d.back()) < 1e-6) continue;
        ++rep.samples;

        Vec<double> z(n + 1), zm(n + 1);
        z[0] = zm[0] = 1;
        for (std::size_t i = 0; i < n; ++i) z[i + 1] = zm[i + 1] = d[i];
        zm[n] = -zm[n];
        bool near = false;
        const bool in = ideal_membership(from_standard(extended.form, z), near);
        const bool in_mirror = ideal_membership(from_standard(extended.form, zm), near);

        Vec<double> p(n);
        p[0] = 1 / std::abs(d.back());
        for (std::size_t i = 1; i < n; ++i) p[i] = d[i - 1] / std::abs(d.back());
        const Point proj = normalize_point(base.form, from_standard(base.form, p));
        for (const auto& h : base.halfspaces)
            if (std::abs(h.halfspace.value(base.form, proj)) < 1e-9 * std::max(1.0, std::sqrt(base.form.magnitude(proj)))) near = true;
        if (near) {
            --rep.samples;
            continue;
        }
        const bool in_base = base.contains(proj, 0.0);
        if (in) ++(d.back() > 0 ? rep.in_upper : rep.in_lower);
        if (in != in_base || in != in_mirror) ++rep.mismatches;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Poincare check in dimension 2.

struct DomainFacet {
    std::size_t cell = 0;       ///< index of the cell contributing the halfspace
    std::size_t halfspace = 0;  ///< index inside that cell
    FacetSegment segment;
};

/// Intersection of cells sharing one center, with its facets in the whole disk.
struct Domain {
    RealForm form;
    Point center;
    std::vector<VoronoiCell> cells;
    std::vector<DomainFacet> facets;
};

inline Domain build_domain_2d(const std::vector<VoronoiCell>& cells) {
    if (cells.empty()) throw std::invalid_argument("build_domain_2d: no cells");
    const RealForm& f = cells.front().form;
    for (const auto& c : cells)
        if (!(c.form == f) || fast_distance(f, c.center, cells.front().center) > 1e-9)
            throw std::invalid_argument("build_domain_2d: cells must share form and center");
    std::vector<HalfSpace> hs;
    std::vector<std::pair<std::size_t, std::size_t>> origin;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t h = 0; h < cells[c].halfspaces.size(); ++h) {
            // identical bounding lines from two cells contribute one facet
            const HalfSpace& cand = cells[c].halfspaces[h].halfspace;
            bool dup = false;
            for (const auto& e : hs) dup = dup || (e.side * cand.side > 0 ? same_hyperplane(e.plane, cand.plane) : false);
            if (dup) continue;
            hs.push_back(cand);
            origin.emplace_back(c, h);
        }
    Domain d{f, cells.front().center, cells, {}};
    const auto segs = facet_segments_2d(f, d.center, hs);
    for (std::size_t j = 0; j < segs.size(); ++j)
        if (segs[j]) d.facets.push_back({origin[j].first, origin[j].second, *segs[j]});
    return d;
}

/// `map` sends facet `from` onto facet `to`.
struct Pairing {
    std::size_t from = 0;
    std::size_t to = 0;
    RealMatrix map;
};

/**
 * Side pairings from provenance: the facet of center p toward w p is sent
 * by w^-1 onto the bisector of w^-1 p and p. The partner is located
 * geometrically among the domain facets; facets without one stay unpaired.
 */
inline std::vector<Pairing> derive_pairings(const Domain& d, const std::vector<const GroupData*>& groups) {
    if (groups.size() != d.cells.size()) throw std::invalid_argument("derive_pairings: one group per cell required");
    std::vector<Pairing> out;
    for (std::size_t i = 0; i < d.facets.size(); ++i) {
        const auto& df = d.facets[i];
        const VoronoiCell& cell = d.cells[df.cell];
        if (!cell.center_word.empty()) continue;
        const auto& ch = cell.halfspaces[df.halfspace];
        if (ch.seed != cell.center_seed) continue;
        const RealMatrix g = groups[df.cell]->word_matrix(inverse_word(ch.word));
        const Hyperplane image = make_hyperplane(d.form, g * ch.halfspace.plane.normal);
        for (std::size_t j = 0; j < d.facets.size(); ++j) {
            const auto& other = d.cells[d.facets[j].cell].halfspaces[d.facets[j].halfspace].halfspace.plane;
            if (same_hyperplane(other, image, 1e-7)) {
                out.push_back({i, j, g});
                break;
            }
        }
    }
    return out;
}

struct VertexCycle {
    std::vector<Vec<double>> vertices;  ///< Klein coordinates around the domain center
    double angle_sum = 0;
    int order = 0;  ///< m with angle_sum = 2 pi / m, 0 if not of that form
};

struct PoincareReport {
    bool passed = false;
    bool torsion_free = false;
    std::vector<std::string> failures;
    std::vector<std::size_t> unpaired;
    std::vector<VertexCycle> cycles;
    /// (cell, halfspace) references of a nested pair of bounding hyperplanes
    std::optional<std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>> nested_witness;
};

/**
 * Checks (i) every facet paired exactly once with a consistent inverse,
 * (ii) each pairing maps its facet's endpoints onto the partner's,
 * (iii) every finite vertex cycle has angle sum 2 pi / m, and
 * (iv) no two bounding hyperplanes from distinct cells are nested.
 */
inline PoincareReport check_poincare_2d(const Domain& d, const std::vector<Pairing>& pairings) {
    PoincareReport rep;
    const RealForm& f = d.form;
    const KleinFrame frame(f, d.center);
    auto klein_of = [&](const Vec<double>& v) { return frame.klein(v); };
    auto close = [](const Vec<double>& a, const Vec<double>& b, double tol) {
        return std::hypot(a[0] - b[0], a[1] - b[1]) <= tol;
    };

    // (i)
    std::vector<int> count(d.facets.size(), 0);
    std::vector<const Pairing*> by_from(d.facets.size(), nullptr);
    for (const auto& p : pairings) {
        if (p.from >= d.facets.size() || p.to >= d.facets.size()) throw std::invalid_argument("check_poincare_2d: bad facet index");
        ++count[p.from];
        by_from[p.from] = &p;
    }
    for (std::size_t i = 0; i < d.facets.size(); ++i) {
        if (count[i] == 0) {
            rep.unpaired.push_back(i);
            rep.failures.push_back("facet " + std::to_string(i) + " is unpaired");
        } else if (count[i] > 1) {
            rep.failures.push_back("facet " + std::to_string(i) + " is paired " + std::to_string(count[i]) + " times");
        } else if (!by_from[by_from[i]->to] || by_from[by_from[i]->to]->to != i) {
            rep.failures.push_back("facet " + std::to_string(i) + " has no inverse pairing");
        }
    }

    // (ii)
    for (const auto& p : pairings) {
        const auto& src = d.facets[p.from].segment;
        const auto& dst = d.facets[p.to].segment;
        const Vec<double> a0 = klein_of(p.map * src.endpoints[0]), a1 = klein_of(p.map * src.endpoints[1]);
        const Vec<double> b0 = klein_of(dst.endpoints[0]), b1 = klein_of(dst.endpoints[1]);
        const bool ok = (close(a0, b0, 1e-7) && close(a1, b1, 1e-7)) || (close(a0, b1, 1e-7) && close(a1, b0, 1e-7));
        if (!ok)
            rep.failures.push_back("pairing " + std::to_string(p.from) + " -> " + std::to_string(p.to) +
                                   " does not map the facet onto its partner");
    }

    // (iii) finite vertices and their cycles
    struct Corner {
        Vec<double> k;
        std::size_t facet;
    };
    std::vector<Corner> corners;
    for (std::size_t i = 0; i < d.facets.size(); ++i)
        for (int e = 0; e < 2; ++e)
            if (!d.facets[i].segment.ideal[e]) corners.push_back({klein_of(d.facets[i].segment.endpoints[e]), i});
    auto other_facet_at = [&](const Vec<double>& k, std::size_t facet) -> std::optional<std::size_t> {
        for (const auto& c : corners)
            if (c.facet != facet && close(c.k, k, 1e-7)) return c.facet;
        return std::nullopt;
    };
    auto inward_unit = [&](std::size_t facet) {
        const auto& df = d.facets[facet];
        return d.cells[df.cell].halfspaces[df.halfspace].halfspace.inward_normal();
    };
    auto angle_at = [&](std::size_t fa, std::size_t fb) {
        const Vec<double> u = inward_unit(fa), w = inward_unit(fb);
        return std::acos(std::clamp(-f.bilinear(u, w), -1.0, 1.0));
    };

    std::vector<bool> done(corners.size(), false);
    auto mark = [&](const Vec<double>& k, std::size_t facet) {
        for (std::size_t c = 0; c < corners.size(); ++c)
            if (corners[c].facet == facet && close(corners[c].k, k, 1e-7)) done[c] = true;
    };
    // cycles are only meaningful once every facet has a consistent pairing
    const bool pairing_ok = rep.failures.empty();
    bool cycles_ok = pairing_ok;
    for (std::size_t start = 0; pairing_ok && start < corners.size(); ++start) {
        if (done[start]) continue;
        VertexCycle cyc;
        Vec<double> v = corners[start].k;
        std::size_t facet = corners[start].facet;
        bool broken = false;
        for (std::size_t steps = 0; steps <= corners.size(); ++steps) {
            mark(v, facet);
            const auto partner_here = other_facet_at(v, facet);
            if (!partner_here) {
                broken = true;
                break;
            }
            cyc.vertices.push_back(v);
            cyc.angle_sum += angle_at(facet, *partner_here);
            // leave through `facet` via its pairing
            const Pairing* p = by_from[facet];
            if (!p) {
                broken = true;
                break;
            }
            const Vec<double> v2 = klein_of(p->map * frame.global(v));
            mark(v2, p->to);
            const auto next = other_facet_at(v2, p->to);
            if (!next) {
                broken = true;
                break;
            }
            v = v2;
            facet = *next;
            if (facet == corners[start].facet && close(v, corners[start].k, 1e-7)) break;
        }
        if (broken) {
            rep.failures.push_back("vertex cycle through facet " + std::to_string(corners[start].facet) + " does not close");
            cycles_ok = false;
            continue;
        }
        const double m = 2 * std::numbers::pi / cyc.angle_sum;
        const double mr = std::round(m);
        cyc.order = std::abs(m - mr) < 1e-6 && mr >= 1 ? static_cast<int>(mr) : 0;
        if (cyc.order == 0) {
            cycles_ok = false;
            rep.failures.push_back("vertex cycle angle sum " + std::to_string(cyc.angle_sum) + " is not 2pi/m");
        }
        rep.cycles.push_back(std::move(cyc));
    }

    // (iv)
    for (std::size_t a = 0; a < d.cells.size() && !rep.nested_witness; ++a)
        for (std::size_t b = a + 1; b < d.cells.size() && !rep.nested_witness; ++b)
            for (std::size_t i = 0; i < d.cells[a].halfspaces.size() && !rep.nested_witness; ++i)
                for (std::size_t j = 0; j < d.cells[b].halfspaces.size(); ++j) {
                    const auto r = are_nested(f, d.cells[a].halfspaces[i].halfspace, d.cells[b].halfspaces[j].halfspace, d.center);
                    if (r.kind == Nesting::Nested) {
                        rep.nested_witness = std::make_pair(std::make_pair(a, i), std::make_pair(b, j));
                        rep.failures.push_back("bounding hyperplanes " + std::to_string(a) + ":" + word_to_string(d.cells[a].halfspaces[i].word) +
                                               " and " + std::to_string(b) + ":" + word_to_string(d.cells[b].halfspaces[j].word) +
                                               " are nested");
                        break;
                    }
                }

    rep.passed = rep.failures.empty();
    rep.torsion_free = rep.passed && cycles_ok &&
                       std::all_of(rep.cycles.begin(), rep.cycles.end(), [](const VertexCycle& c) { return c.order == 1; });
    return rep;
}

}  // namespace hypgeo
