#pragma once

/**
 * @file hyperboloid.hpp
 * @brief Hyperboloid-model geometry of H^n inside (R^{n+1}, f).
 *
 * H^n is the upper sheet { f(x) = -1, x_0 > 0 } of a diagonal form with
 * one negative coefficient, at index 0. Operations that only need the form
 * and k-rational vectors (reflections, isometry checks, orthogonality) are
 * templates over the form type and run exactly on DiagonalForm; metric
 * operations (distances, bisectors, ball coordinates, nesting) run on
 * RealForm in binary64 with tolerance kEpsilon.
 */

#include "hypgeo/matrix.hpp"
#include "hypgeo/qforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace hypgeo {

inline constexpr double kEpsilon = 1e-9;

using Point = std::vector<double>;
using RealMatrix = Matrix<double>;

/// Floating image of a diagonal form (identity embedding).
class RealForm {
public:
    explicit RealForm(std::vector<double> coefficients) : c_(std::move(coefficients)) {
        if (c_.size() < 2) throw std::invalid_argument("RealForm: dimension must be at least 2");
        if (!(c_[0] < 0)) throw std::invalid_argument("RealForm: coefficient 0 must be negative");
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (!(c_[i] > 0)) throw std::invalid_argument("RealForm: coefficients 1..n must be positive");
    }

    static RealForm standard(std::size_t n) {
        std::vector<double> c(n + 1, 1.0);
        c[0] = -1.0;
        return RealForm(std::move(c));
    }

    static RealForm from(const DiagonalForm& f) {
        std::vector<double> c;
        for (const auto& x : f.coefficients()) c.push_back(x.to_double(Embedding::Identity));
        return RealForm(std::move(c));
    }

    std::size_t dimension() const { return c_.size(); }
    std::size_t hyperbolic_dimension() const { return c_.size() - 1; }
    double coefficient(std::size_t i) const { return c_.at(i); }
    const std::vector<double>& coefficients() const { return c_; }

    double bilinear(const Vec<double>& u, const Vec<double>& w) const {
        if (u.size() != c_.size() || w.size() != c_.size()) throw std::invalid_argument("vector/form dimension mismatch");
        double s = 0;
        for (std::size_t i = 0; i < c_.size(); ++i) s += c_[i] * u[i] * w[i];
        return s;
    }
    double evaluate(const Vec<double>& v) const { return bilinear(v, v); }

    /// Euclidean-weighted size sum |c_i| v_i^2, the scale for relative tolerances.
    double magnitude(const Vec<double>& v) const {
        double s = 0;
        for (std::size_t i = 0; i < c_.size(); ++i) s += std::abs(c_[i]) * v[i] * v[i];
        return s;
    }

    RealForm append(double q) const {
        auto c = c_;
        c.push_back(q);
        return RealForm(std::move(c));
    }

    /// Base point e_0 / sqrt|c_0| of the upper sheet.
    Point base_point() const {
        Point o(c_.size(), 0.0);
        o[0] = 1.0 / std::sqrt(-c_[0]);
        return o;
    }

    friend bool operator==(const RealForm&, const RealForm&) = default;

private:
    std::vector<double> c_;
};

// ---------------------------------------------------------------------------
// Scalar plumbing shared by the exact and floating code paths.

inline QuadFieldElement scalar_zero(const DiagonalForm& f) { return QuadFieldElement::zero(f.field()); }
inline QuadFieldElement scalar_one(const DiagonalForm& f) { return QuadFieldElement::one(f.field()); }
inline double scalar_zero(const RealForm&) { return 0.0; }
inline double scalar_one(const RealForm&) { return 1.0; }

inline int identity_sign(const QuadFieldElement& x) { return x.sign_at(Embedding::Identity); }
inline int identity_sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

template <class Form>
using scalar_of = std::decay_t<decltype(scalar_zero(std::declval<const Form&>()))>;

template <class Form>
scalar_of<Form> bilinear(const Form& f, const Vec<scalar_of<Form>>& u, const Vec<scalar_of<Form>>& w) {
    return f.bilinear(u, w);
}

template <class Form>
Matrix<scalar_of<Form>> form_matrix(const Form& f) {
    Matrix<scalar_of<Form>> m(f.dimension(), f.dimension(), scalar_zero(f));
    for (std::size_t i = 0; i < f.dimension(); ++i) m(i, i) = f.coefficient(i);
    return m;
}

/// Reflection r_v(w) = w - 2 b_f(w,v)/f(v) v in the hyperplane orthogonal to a space-like v.
template <class Form>
Matrix<scalar_of<Form>> reflection(const Form& f, const Vec<scalar_of<Form>>& v) {
    using S = scalar_of<Form>;
    const S fv = f.evaluate(v);
    if (identity_sign(fv) <= 0) throw std::domain_error("reflection: vector is not space-like");
    const std::size_t n = f.dimension();
    auto r = Matrix<S>::identity(n, scalar_zero(f), scalar_one(f));
    const S two = scalar_one(f) + scalar_one(f);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) -= two * v[i] * f.coefficient(j) * v[j] / fv;
    return r;
}

/// A^t F A == F, exactly for exact scalars and within kEpsilon (max-norm) for doubles.
template <class Form>
bool is_isometry(const Form& f, const Matrix<scalar_of<Form>>& a) {
    const std::size_t n = f.dimension();
    if (a.rows() != n || a.cols() != n) return false;
    const auto lhs = a.transpose() * form_matrix(f) * a;
    const auto rhs = form_matrix(f);
    if constexpr (std::is_floating_point_v<scalar_of<Form>>) {
        double scale = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (std::abs(lhs(i, j) - rhs(i, j)) > kEpsilon * scale * scale) return false;
        return true;
    } else {
        return lhs == rhs;
    }
}

/// Time orientation: an isometry preserves the upper sheet iff it keeps x_0 > 0 on the base point.
inline bool preserves_upper_sheet(const RealForm& f, const RealMatrix& a) { return (a * f.base_point())[0] > 0; }

inline RealMatrix to_real(const Matrix<QuadFieldElement>& m) {
    RealMatrix r(m.rows(), m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_double();
    return r;
}

inline Vec<double> to_real(const KVector& v) {
    Vec<double> r;
    for (const auto& x : v) r.push_back(x.to_double());
    return r;
}

// ---------------------------------------------------------------------------
// Points, distances, geodesics.

inline bool on_sheet(const RealForm& f, const Point& x, double tol = kEpsilon) {
    if (x.size() != f.dimension() || !(x[0] > 0)) return false;
    return std::abs(f.evaluate(x) + 1.0) <= tol * std::max(1.0, f.magnitude(x));
}

inline void require_on_sheet(const RealForm& f, const Point& x, const char* who) {
    if (!on_sheet(f, x)) throw std::domain_error(std::string(who) + ": point is not on the upper sheet");
}

/// Rescales a time-like vector with x_0 > 0 onto the upper sheet.
inline Point normalize_point(const RealForm& f, Point x) {
    const double q = f.evaluate(x);
    if (!(q < 0) || !(x[0] > 0)) throw std::domain_error("normalize_point: vector is not future time-like");
    const double s = 1.0 / std::sqrt(-q);
    for (double& c : x) c *= s;
    return x;
}

/// Snaps an image of a sheet point back onto the sheet by recomputing x_0
/// from the spatial coordinates. Unlike rescaling, this survives the
/// cancellation in f(x) for points far from the base point.
inline Point project_to_sheet(const RealForm& f, Point x) {
    if (!(x[0] > 0)) throw std::domain_error("project_to_sheet: vector is not future directed");
    double s = 1;
    for (std::size_t i = 1; i < x.size(); ++i) s += f.coefficient(i) * x[i] * x[i];
    x[0] = std::sqrt(s / -f.coefficient(0));
    return x;
}

/// Unchecked distance for hot loops over points already known to be on the sheet.
/// Near points use 2 asinh(sqrt(f(x - y)) / 2), which stays accurate where acosh does not.
inline double fast_distance(const RealForm& f, const Point& x, const Point& y) {
    const double c = -f.bilinear(x, y);
    if (c > 1.5) return std::acosh(c);
    double q = 0;
    for (std::size_t i = 0; i < x.size(); ++i) q += f.coefficient(i) * (x[i] - y[i]) * (x[i] - y[i]);
    return 2 * std::asinh(std::sqrt(std::max(0.0, q)) / 2);
}

inline double distance(const RealForm& f, const Point& x, const Point& y) {
    require_on_sheet(f, x, "distance");
    require_on_sheet(f, y, "distance");
    return fast_distance(f, x, y);
}

/// Projects t onto the tangent space at p and scales it to unit length.
inline Vec<double> unit_tangent(const RealForm& f, const Point& p, Vec<double> t) {
    const double bp = f.bilinear(t, p);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += bp * p[i];
    const double q = f.evaluate(t);
    if (!(q > 1e-24)) throw std::domain_error("unit_tangent: zero tangent");
    const double s = 1.0 / std::sqrt(q);
    for (double& c : t) c *= s;
    return t;
}

/// Point at arc length s along the geodesic through p with unit tangent t.
inline Point geodesic_point(const Point& p, const Vec<double>& t, double s) {
    Point x(p.size());
    const double ch = std::cosh(s), sh = std::sinh(s);
    for (std::size_t i = 0; i < p.size(); ++i) x[i] = ch * p[i] + sh * t[i];
    return x;
}

/// Unit tangent at x of the geodesic from x towards y.
inline Vec<double> direction_to(const RealForm& f, const Point& x, const Point& y) { return unit_tangent(f, x, y); }

/**
 * Hyperbolic translation along the geodesic through `p` with tangent `t`,
 * by `length`: p -> cosh(l) p + sinh(l) t, t -> sinh(l) p + cosh(l) t,
 * identity on the orthogonal complement.
 */
inline RealMatrix translation_along_geodesic(const RealForm& f, const Point& p, const Vec<double>& tangent, double length) {
    require_on_sheet(f, p, "translation_along_geodesic");
    const Vec<double> t = unit_tangent(f, p, tangent);
    const std::size_t n = f.dimension();
    const double ch = std::cosh(length), sh = std::sinh(length);
    Vec<double> along_p(n), along_t(n);
    for (std::size_t i = 0; i < n; ++i) {
        along_p[i] = (ch - 1.0) * p[i] + sh * t[i];
        along_t[i] = sh * p[i] + (ch - 1.0) * t[i];
    }
    auto a = RealMatrix::identity(n, 0.0, 1.0);
    // w = alpha p + beta t + rest with alpha = -b(w,p), beta = b(w,t)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) += along_p[i] * (-f.coefficient(j) * p[j]) + along_t[i] * (f.coefficient(j) * t[j]);
    return a;
}

/// Isometry (a translation) moving x to the base point of the sheet.
inline RealMatrix move_to_base_point(const RealForm& f, const Point& x) {
    const Point o = f.base_point();
    const double d = distance(f, x, o);
    if (d < 1e-15) return RealMatrix::identity(f.dimension(), 0.0, 1.0);
    return translation_along_geodesic(f, x, direction_to(f, x, o), d);
}

inline RealMatrix inverse_isometry(const RealForm& f, const RealMatrix& a) {
    // A^{-1} = F^{-1} A^t F
    const std::size_t n = f.dimension();
    RealMatrix r(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = a(j, i) * f.coefficient(j) / f.coefficient(i);
    return r;
}

/// Translation length log(max |eigenvalue|); zero for elliptic and parabolic elements.
inline double translation_length(const RealMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues();
    double top = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) top = std::max(top, std::abs(ev(i)));
    return std::max(0.0, std::log(top));
}

// ---------------------------------------------------------------------------
// Hyperplanes and halfspaces.

/**
 * H_v = v-perp intersected with H^n. Canonical normals: first nonzero
 * coordinate positive; exact normals are kept unscaled, floating ones are
 * scaled to f(v) = 1.
 */
template <class Scalar>
struct BasicHyperplane {
    Vec<Scalar> normal;
    friend bool operator==(const BasicHyperplane&, const BasicHyperplane&) = default;
};

using Hyperplane = BasicHyperplane<double>;
using KHyperplane = BasicHyperplane<QuadFieldElement>;

inline KHyperplane make_hyperplane(const DiagonalForm& f, KVector v) {
    if (identity_sign(f.evaluate(v)) <= 0) throw std::domain_error("hyperplane normal must be space-like");
    for (const auto& x : v) {
        if (x.is_zero()) continue;
        if (identity_sign(x) < 0)
            for (auto& y : v) y = -y;
        break;
    }
    return {std::move(v)};
}

inline Hyperplane make_hyperplane(const RealForm& f, Vec<double> v) {
    const double q = f.evaluate(v);
    if (!(q > 0)) throw std::domain_error("hyperplane normal must be space-like");
    double s = 1.0 / std::sqrt(q);
    double scale = 0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    for (double x : v) {
        if (std::abs(x) <= 1e-12 * scale) continue;
        if (x < 0) s = -s;
        break;
    }
    for (double& x : v) x *= s;
    return {std::move(v)};
}

inline bool same_hyperplane(const Hyperplane& a, const Hyperplane& b, double tol = 1e-9) {
    for (std::size_t i = 0; i < a.normal.size(); ++i)
        if (std::abs(a.normal[i] - b.normal[i]) > tol * std::max(1.0, std::abs(a.normal[i]))) return false;
    return true;
}

/// Closed halfspace { x : side * b_f(x, normal) >= 0 }.
struct HalfSpace {
    Hyperplane plane;
    int side = 1;

    /// Signed value side * b_f(x, normal); nonnegative inside.
    double value(const RealForm& f, const Point& x) const { return side * f.bilinear(x, plane.normal); }

    bool contains(const RealForm& f, const Point& x, double tol = kEpsilon) const {
        return value(f, x) >= -tol * std::max(1.0, std::sqrt(f.magnitude(x)));
    }

    /// Normal oriented into the halfspace.
    Vec<double> inward_normal() const {
        Vec<double> n = plane.normal;
        for (double& c : n) c *= side;
        return n;
    }
};

/// Halfspace bounded by H_normal that contains `inside` in its interior.
inline HalfSpace halfspace_containing(const RealForm& f, const Vec<double>& normal, const Point& inside) {
    HalfSpace h{make_hyperplane(f, normal), 1};
    const double v = f.bilinear(inside, h.plane.normal);
    if (std::abs(v) <= kEpsilon * std::max(1.0, std::sqrt(f.magnitude(inside))))
        throw std::domain_error("halfspace_containing: point lies on the boundary");
    h.side = v > 0 ? 1 : -1;
    return h;
}

/// Perpendicular bisector of two distinct sheet points; its normal is x - y.
inline Hyperplane bisector(const RealForm& f, const Point& x, const Point& y) {
    require_on_sheet(f, x, "bisector");
    require_on_sheet(f, y, "bisector");
    Vec<double> n(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) n[i] = x[i] - y[i];
    if (!(f.evaluate(n) > kEpsilon * kEpsilon)) throw std::domain_error("bisector: points coincide");
    return make_hyperplane(f, std::move(n));
}

/// Halfspace of points at least as close to x as to y.
inline HalfSpace closer_halfspace(const RealForm& f, const Point& x, const Point& y) {
    const Hyperplane h = bisector(f, x, y);
    // b(z, x - y) >= 0  <=>  d(z,x) <= d(z,y)
    Vec<double> raw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) raw[i] = x[i] - y[i];
    double dot = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) dot += raw[i] * h.normal[i];
    return {h, dot > 0 ? 1 : -1};
}

/// Orthogonal hyperplanes: b_f(u,v) = 0 for distinct, intersecting H_u and H_v.
template <class Form>
bool are_orthogonal(const Form& f, const BasicHyperplane<scalar_of<Form>>& hu, const BasicHyperplane<scalar_of<Form>>& hv) {
    const auto buv = f.bilinear(hu.normal, hv.normal);
    const auto fu = f.evaluate(hu.normal);
    const auto fv = f.evaluate(hv.normal);
    // span{u, v} positive definite <=> the hyperplanes meet in H^n
    const auto det = fu * fv - buv * buv;
    if constexpr (std::is_floating_point_v<scalar_of<Form>>) {
        return std::abs(buv) <= kEpsilon * std::sqrt(fu * fv) && det > kEpsilon * fu * fv;
    } else {
        return buv.is_zero() && identity_sign(det) > 0;
    }
}

/// Cosine-like invariant b(u,u')/sqrt(f(u) f(u')) of two hyperplanes.
inline double normalized_product(const RealForm& f, const Vec<double>& u, const Vec<double>& w) {
    return f.bilinear(u, w) / std::sqrt(f.evaluate(u) * f.evaluate(w));
}

/// Hyperplanes meet in H^n iff |normalized product| < 1.
inline bool hyperplanes_intersect(const RealForm& f, const Hyperplane& a, const Hyperplane& b) {
    return std::abs(normalized_product(f, a.normal, b.normal)) < 1.0 - 1e-12;
}

/// Distance between disjoint hyperplanes (0 when they meet or are asymptotic).
inline double hyperplane_distance(const RealForm& f, const Hyperplane& a, const Hyperplane& b) {
    return std::acosh(std::max(1.0, std::abs(normalized_product(f, a.normal, b.normal))));
}

enum class Nesting { Nested, Crossing, DisjointNotNested, Equal };

inline const char* to_string(Nesting n) {
    switch (n) {
        case Nesting::Nested: return "nested";
        case Nesting::Crossing: return "crossing";
        case Nesting::DisjointNotNested: return "disjoint";
        case Nesting::Equal: return "equal";
    }
    return "?";
}

struct NestingResult {
    Nesting kind = Nesting::Crossing;
    /// For Nested: 0 if the first halfspace lies inside the second, 1 otherwise.
    int inner = -1;
};

/**
 * Nesting of two halfspaces that both contain x in their interior.
 *
 * Normals are scaled to f = 1 and oriented toward x. The hyperplanes cross
 * iff |b(u,u')| < 1. For disjoint boundaries B, B' let p be the point of B
 * closest to B' (and p' symmetric); B lies inside H' iff b(p, u') > 0. The
 * halfspaces are nested unless each boundary lies inside the other halfspace.
 */
inline NestingResult are_nested(const RealForm& f, const HalfSpace& h1, const HalfSpace& h2, const Point& x) {
    require_on_sheet(f, x, "are_nested");
    const double scale = std::max(1.0, std::sqrt(f.magnitude(x)));
    if (!(h1.value(f, x) > kEpsilon * scale) || !(h2.value(f, x) > kEpsilon * scale))
        throw std::domain_error("are_nested: basepoint is not interior to both halfspaces");

    auto oriented_unit = [&](const HalfSpace& h) {
        Vec<double> u = h.inward_normal();
        const double s = 1.0 / std::sqrt(f.evaluate(u));
        for (double& c : u) c *= s;
        return u;
    };
    const Vec<double> u = oriented_unit(h1);
    const Vec<double> w = oriented_unit(h2);
    const double beta = f.bilinear(u, w);

    double diff = 0;
    for (std::size_t i = 0; i < u.size(); ++i) diff = std::max(diff, std::abs(u[i] - w[i]));
    if (diff <= 1e-9 * std::max(1.0, std::sqrt(f.magnitude(u)))) return {Nesting::Equal, -1};
    if (std::abs(beta) < 1.0 - 1e-12) return {Nesting::Crossing, -1};

    if (std::abs(beta) <= 1.0 + 1e-12) {
        // asymptotic boundaries: limit of the disjoint case
        return beta > 0 ? NestingResult{Nesting::Nested, -1} : NestingResult{Nesting::DisjointNotNested, -1};
    }

    // closest point on H_a to H_b: p = -c*beta*a + c*b with c^2 = 1/(beta^2 - 1), p_0 > 0
    auto closest_inside_other = [&](const Vec<double>& a, const Vec<double>& b) {
        const double c0 = 1.0 / std::sqrt(beta * beta - 1.0);
        Point p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) p[i] = c0 * (-beta * a[i] + b[i]);
        if (p[0] < 0)
            for (double& c : p) c = -c;
        return f.bilinear(p, b) > 0;
    };
    const bool b1_in_h2 = closest_inside_other(u, w);
    const bool b2_in_h1 = closest_inside_other(w, u);
    if (b1_in_h2 && b2_in_h1) return {Nesting::DisjointNotNested, -1};
    return {Nesting::Nested, b1_in_h2 ? 0 : 1};
}

// ---------------------------------------------------------------------------
// Ball model.

/// Coordinates in which the form becomes J_n: z_i = sqrt|c_i| x_i.
inline Vec<double> to_standard(const RealForm& f, const Vec<double>& x) {
    Vec<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::sqrt(std::abs(f.coefficient(i))) * x[i];
    return z;
}

inline Vec<double> from_standard(const RealForm& f, const Vec<double>& z) {
    Vec<double> x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = z[i] / std::sqrt(std::abs(f.coefficient(i)));
    return x;
}

/**
 * Conformal (Poincare) ball coordinates. Sheet points map into the open
 * unit ball via z -> z_bar / (1 + z_0); light-cone vectors map to the unit
 * sphere via z -> z_bar / z_0.
 */
inline Vec<double> ball_coordinates(const RealForm& f, const Vec<double>& x) {
    if (x.size() != f.dimension()) throw std::invalid_argument("ball_coordinates: dimension mismatch");
    const Vec<double> z = to_standard(f, x);
    if (!(z[0] > 0)) throw std::domain_error("ball_coordinates: vector is not future-pointing");
    const double q = f.evaluate(x);
    const double m = f.magnitude(x);
    Vec<double> b(z.begin() + 1, z.end());
    if (std::abs(q + 1.0) <= kEpsilon * std::max(1.0, m)) {
        for (double& c : b) c /= 1.0 + z[0];
    } else if (std::abs(q) <= kEpsilon * m) {
        for (double& c : b) c /= z[0];
    } else {
        throw std::domain_error("ball_coordinates: neither a sheet point nor a light-cone vector");
    }
    return b;
}

/// Inverse of the Poincare map for points of the open ball.
inline Point from_ball(const RealForm& f, const Vec<double>& b) {
    double r2 = 0;
    for (double c : b) r2 += c * c;
    if (!(r2 < 1)) throw std::domain_error("from_ball: point outside the open unit ball");
    Vec<double> z(b.size() + 1);
    z[0] = (1 + r2) / (1 - r2);
    for (std::size_t i = 0; i < b.size(); ++i) z[i + 1] = 2 * b[i] / (1 - r2);
    return from_standard(f, z);
}

/// Klein (projective) coordinates z_bar / z_0 of a future-pointing vector.
inline Vec<double> klein_coordinates(const RealForm& f, const Vec<double>& x) {
    const Vec<double> z = to_standard(f, x);
    if (!(z[0] > 0)) throw std::domain_error("klein_coordinates: vector is not future-pointing");
    Vec<double> k(z.begin() + 1, z.end());
    for (double& c : k) c /= z[0];
    return k;
}

inline Point from_klein(const RealForm& f, const Vec<double>& k) {
    double r2 = 0;
    for (double c : k) r2 += c * c;
    if (!(r2 < 1)) throw std::domain_error("from_klein: point outside the open unit ball");
    const double z0 = 1.0 / std::sqrt(1.0 - r2);
    Vec<double> z(k.size() + 1);
    z[0] = z0;
    for (std::size_t i = 0; i < k.size(); ++i) z[i + 1] = z0 * k[i];
    return from_standard(f, z);
}

/// Ideal point of the boundary sphere for a unit direction, as a light-cone vector.
inline Vec<double> ideal_point(const RealForm& f, const Vec<double>& direction) {
    Vec<double> z(direction.size() + 1);
    z[0] = 1.0;
    for (std::size_t i = 0; i < direction.size(); ++i) z[i + 1] = direction[i];
    return from_standard(f, z);
}

/**
 * Boundary at infinity of a hyperplane in the ball model: the Euclidean
 * sphere orthogonal to the unit sphere, with center m_bar/m_0 and radius
 * 1/|m_0| for the unit standard normal m. When m_0 = 0 the hyperplane goes
 * through the ball center and the sphere degenerates to the flat plane
 * with unit normal m_bar.
 */
struct BoundarySphere {
    bool flat = false;
    Vec<double> center;
    double radius = std::numeric_limits<double>::infinity();
    Vec<double> normal;  ///< only for flat spheres
};

inline BoundarySphere boundary_sphere(const RealForm& f, const Hyperplane& h) {
    Vec<double> m(h.normal.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = h.normal[i] * std::sqrt(std::abs(f.coefficient(i)));
    // J-norm of m equals f(normal)
    const double s = 1.0 / std::sqrt(f.evaluate(h.normal));
    for (double& c : m) c *= s;
    Vec<double> bar(m.begin() + 1, m.end());
    double bar_norm = 0;
    for (double c : bar) bar_norm += c * c;
    bar_norm = std::sqrt(bar_norm);
    BoundarySphere sphere;
    if (std::abs(m[0]) <= 1e-12 * bar_norm) {
        sphere.flat = true;
        sphere.center.assign(bar.size(), 0.0);
        for (double& c : bar) c /= bar_norm;
        sphere.normal = std::move(bar);
        return sphere;
    }
    sphere.center = bar;
    for (double& c : sphere.center) c /= m[0];
    sphere.radius = 1.0 / std::abs(m[0]);
    return sphere;
}

}  // namespace hypgeo
