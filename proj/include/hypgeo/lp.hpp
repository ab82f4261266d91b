#pragma once

/**
 * @file lp.hpp
 * @brief Small dense linear programming for Klein-model polytopes.
 *
 * Two-phase tableau simplex with Bland's rule, plus a Frank-Wolfe
 * minimum-norm routine deciding whether a polytope meets a Euclidean ball.
 * Sized for cells with tens of facets in dimension <= 4.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hypgeo::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };

/// a . x (rel) b
struct LinearConstraint {
    std::vector<double> a;
    Relation rel = Relation::GreaterEqual;
    double b = 0;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double value = 0;
};

/// Minimizes c . x subject to the constraints and x >= 0.
inline Result minimize_nonnegative(const std::vector<double>& c, const std::vector<LinearConstraint>& constraints,
                                   double eps = 1e-10) {
    const std::size_t n = c.size();
    const std::size_t m = constraints.size();

    std::size_t n_slack = 0, n_art = 0;
    std::vector<LinearConstraint> rows = constraints;
    for (auto& r : rows) {
        if (r.a.size() != n) throw std::invalid_argument("lp: constraint dimension mismatch");
        if (r.b < 0) {
            for (double& v : r.a) v = -v;
            r.b = -r.b;
            if (r.rel == Relation::LessEqual) r.rel = Relation::GreaterEqual;
            else if (r.rel == Relation::GreaterEqual) r.rel = Relation::LessEqual;
        }
        if (r.rel != Relation::Equal) ++n_slack;
        if (r.rel != Relation::LessEqual) ++n_art;
    }
    const std::size_t art0 = n + n_slack;
    const std::size_t cols = art0 + n_art;
    const std::size_t rhs = cols;

    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(m);
    std::size_t next_slack = n, next_art = art0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = rows[i].a[j];
        t[i][rhs] = rows[i].b;
        switch (rows[i].rel) {
            case Relation::LessEqual:
                t[i][next_slack] = 1;
                basis[i] = next_slack++;
                break;
            case Relation::GreaterEqual:
                t[i][next_slack++] = -1;
                t[i][next_art] = 1;
                basis[i] = next_art++;
                break;
            case Relation::Equal:
                t[i][next_art] = 1;
                basis[i] = next_art++;
                break;
        }
    }

    std::vector<bool> allowed(cols, true);
    auto& obj = t[m];

    auto pivot = [&](std::size_t r, std::size_t col) {
        const double p = t[r][col];
        for (double& v : t[r]) v /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == r) continue;
            const double f = t[i][col];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = col;
    };

    // Returns false when unbounded.
    auto run = [&]() {
        for (std::size_t iter = 0; iter < 50000; ++iter) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (allowed[j] && obj[j] < -eps) {
                    enter = j;
                    break;
                }
            if (enter == cols) return true;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] <= eps) continue;
                const double ratio = t[i][rhs] / t[i][enter];
                if (ratio < best - eps || (ratio <= best + eps && leave < m && basis[i] < basis[leave])) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave == m) return false;
            pivot(leave, enter);
        }
        throw std::runtime_error("lp: iteration limit");
    };

    // phase 1: minimize the sum of artificials
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= art0)
            for (std::size_t j = 0; j <= cols; ++j) obj[j] -= t[i][j];
    for (std::size_t j = art0; j < cols; ++j) obj[j] += 1;
    run();
    double scale = 1;
    for (const auto& r : rows) scale = std::max(scale, std::abs(r.b));
    if (-obj[rhs] > 1e-8 * scale) return {Status::Infeasible, {}, 0};

    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < art0) continue;
        for (std::size_t j = 0; j < art0; ++j)
            if (std::abs(t[i][j]) > 1e-9) {
                pivot(i, j);
                break;
            }
    }
    for (std::size_t j = art0; j < cols; ++j) allowed[j] = false;

    // phase 2
    std::fill(obj.begin(), obj.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) obj[j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t b = basis[i];
        const double cb = b < n ? c[b] : 0.0;
        if (cb == 0) continue;
        for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * t[i][j];
    }
    if (!run()) return {Status::Unbounded, {}, 0};

    Result res{Status::Optimal, std::vector<double>(n, 0.0), 0};
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][rhs];
    for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

/// Minimizes c . x over free variables confined to the box |x_i| <= bound.
inline Result minimize_in_box(const std::vector<double>& c, const std::vector<LinearConstraint>& constraints, double bound) {
    const std::size_t n = c.size();
    // x = y - bound, y in [0, 2 bound]
    std::vector<LinearConstraint> shifted;
    shifted.reserve(constraints.size() + n);
    for (const auto& k : constraints) {
        LinearConstraint s = k;
        for (std::size_t j = 0; j < n; ++j) s.b += k.a[j] * bound;
        shifted.push_back(std::move(s));
    }
    for (std::size_t j = 0; j < n; ++j) {
        LinearConstraint s{std::vector<double>(n, 0.0), Relation::LessEqual, 2 * bound};
        s.a[j] = 1;
        shifted.push_back(std::move(s));
    }
    Result r = minimize_nonnegative(c, shifted);
    if (r.status == Status::Optimal) {
        for (double& v : r.x) v -= bound;
        r.value = 0;
        for (std::size_t j = 0; j < n; ++j) r.value += c[j] * r.x[j];
    }
    return r;
}

/// Bounds on min |x|^2 over a polytope inside the box |x_i| <= bound.
struct MinNorm {
    bool feasible = false;
    double upper = std::numeric_limits<double>::infinity();  ///< |x|^2 of the best point found
    double lower = std::numeric_limits<double>::infinity();  ///< certified lower bound
    std::vector<double> point;
};

/**
 * Frank-Wolfe on |x|^2 with exact line search. Stops as soon as the bounds
 * separate from `target` (upper < target or lower >= target) or after
 * `max_iter` linear oracle calls.
 */
inline MinNorm min_norm(std::size_t dim, const std::vector<LinearConstraint>& constraints, double bound, double target,
                        int max_iter = 200) {
    MinNorm out;
    Result start = minimize_in_box(std::vector<double>(dim, 0.0), constraints, bound);
    if (start.status != Status::Optimal) return out;
    out.feasible = true;
    std::vector<double> x = start.x;
    auto sq = [](const std::vector<double>& v) {
        double s = 0;
        for (double c : v) s += c * c;
        return s;
    };
    out.upper = sq(x);
    out.lower = 0;
    out.point = x;
    for (int it = 0; it < max_iter; ++it) {
        if (out.upper < target || out.lower >= target) break;
        std::vector<double> grad(dim);
        for (std::size_t j = 0; j < dim; ++j) grad[j] = 2 * x[j];
        const Result s = minimize_in_box(grad, constraints, bound);
        if (s.status != Status::Optimal) break;
        double gap = 0;
        for (std::size_t j = 0; j < dim; ++j) gap += grad[j] * (x[j] - s.x[j]);
        out.lower = std::max(out.lower, sq(x) - gap);
        if (gap <= 1e-14) {
            out.lower = std::max(out.lower, sq(x));
            break;
        }
        double dd = 0, xd = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = s.x[j] - x[j];
            dd += d * d;
            xd += x[j] * d;
        }
        const double gamma = std::clamp(-xd / dd, 0.0, 1.0);
        for (std::size_t j = 0; j < dim; ++j) x[j] += gamma * (s.x[j] - x[j]);
        if (sq(x) < out.upper) {
            out.upper = sq(x);
            out.point = x;
        }
    }
    return out;
}

}  // namespace hypgeo::lp
