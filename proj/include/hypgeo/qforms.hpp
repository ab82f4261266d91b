#pragma once

/**
 * @file qforms.hpp
 * @brief Diagonal quadratic forms over Q and Q(sqrt 2).
 *
 * Admissibility (signature (n,1) at the identity embedding, definite at
 * every other embedding), orthogonal sums, restriction to the orthogonal
 * complement of a vector, discriminant-based non-equivalence certificates
 * and the six-form family used by the piece-counting construction.
 *
 * Everything here is exact.
 */

#include "hypgeo/matrix.hpp"
#include "hypgeo/numfield.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypgeo {

using KVector = std::vector<QuadFieldElement>;
using GramMatrix = Matrix<QuadFieldElement>;

struct Signature {
    int positives = 0;
    int negatives = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

class DiagonalForm {
public:
    DiagonalForm(FieldTag field, std::vector<QuadFieldElement> coefficients)
        : field_(field), coefficients_(std::move(coefficients)) {
        if (coefficients_.empty()) throw std::invalid_argument("quadratic form needs at least one coefficient");
        for (auto& c : coefficients_) {
            if (c.field() != field_) c = c.in_field(field_);
            if (c.is_zero()) throw std::invalid_argument("degenerate form: zero coefficient");
        }
    }

    /// Parses a comma-separated coefficient list such as "-r2,1,1".
    static DiagonalForm parse(std::string_view list, FieldTag field) {
        std::vector<QuadFieldElement> cs;
        std::size_t start = 0;
        while (start <= list.size()) {
            const std::size_t comma = list.find(',', start);
            const auto piece = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            cs.push_back(QuadFieldElement::parse(piece, field));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return {field, std::move(cs)};
    }

    FieldTag field() const { return field_; }
    std::size_t dimension() const { return coefficients_.size(); }
    const std::vector<QuadFieldElement>& coefficients() const { return coefficients_; }
    const QuadFieldElement& coefficient(std::size_t i) const { return coefficients_.at(i); }

    QuadFieldElement bilinear(const KVector& u, const KVector& w) const {
        check_vector(u);
        check_vector(w);
        QuadFieldElement s = QuadFieldElement::zero(field_);
        for (std::size_t i = 0; i < coefficients_.size(); ++i) s += coefficients_[i] * u[i] * w[i];
        return s;
    }

    QuadFieldElement evaluate(const KVector& v) const { return bilinear(v, v); }

    QuadFieldElement discriminant() const {
        QuadFieldElement d = QuadFieldElement::one(field_);
        for (const auto& c : coefficients_) d *= c;
        return d;
    }

    /// The diagonal matrix of the form.
    GramMatrix matrix() const {
        GramMatrix m(dimension(), dimension(), QuadFieldElement::zero(field_));
        for (std::size_t i = 0; i < dimension(); ++i) m(i, i) = coefficients_[i];
        return m;
    }

    std::string to_string() const {
        std::string s = "<";
        for (std::size_t i = 0; i < coefficients_.size(); ++i) s += (i ? ", " : "") + coefficients_[i].to_string();
        return s + ">";
    }

    friend bool operator==(const DiagonalForm&, const DiagonalForm&) = default;

private:
    void check_vector(const KVector& v) const {
        if (v.size() != coefficients_.size()) throw std::invalid_argument("vector/form dimension mismatch");
        for (const auto& x : v)
            if (x.field() != field_) throw std::invalid_argument("vector entries live in a different field");
    }

    FieldTag field_;
    std::vector<QuadFieldElement> coefficients_;
};

/// J_n = <-1, 1, ..., 1> over the given field (n+1 coefficients).
inline DiagonalForm standard_lorentz_form(std::size_t n, FieldTag field = FieldTag::Rationals) {
    std::vector<QuadFieldElement> cs(n + 1, QuadFieldElement::one(field));
    cs[0] = -cs[0];
    return {field, std::move(cs)};
}

/// f_n: leading coefficient -2 over Q, -sqrt2 over Q(sqrt2), then n ones.
inline DiagonalForm counting_base_form(std::size_t n, FieldTag field) {
    std::vector<QuadFieldElement> cs(n + 1, QuadFieldElement::one(field));
    cs[0] = field == FieldTag::Rationals ? QuadFieldElement(-2) : -QuadFieldElement::sqrt2();
    return {field, std::move(cs)};
}

inline Signature signature_at(const DiagonalForm& f, Embedding e) {
    Signature s;
    for (const auto& c : f.coefficients()) (c.sign_at(e) > 0 ? s.positives : s.negatives) += 1;
    return s;
}

inline bool is_admissible(const DiagonalForm& f) {
    const int n = static_cast<int>(f.dimension()) - 1;
    for (Embedding e : embeddings(f.field())) {
        const Signature want = e == Embedding::Identity ? Signature{n, 1} : Signature{n + 1, 0};
        if (signature_at(f, e) != want) return false;
    }
    return true;
}

/// Orthogonal sum f + <c> for an arbitrary nonzero c of the form's field.
inline DiagonalForm append_coefficient(const DiagonalForm& f, const QuadFieldElement& c) {
    auto cs = f.coefficients();
    cs.push_back(c.in_field(f.field()));
    return {f.field(), std::move(cs)};
}

/// f + <q> for a positive rational q, the extension used to embed a
/// manifold as a hypersurface one dimension up.
inline DiagonalForm direct_sum(const DiagonalForm& f, const QuadFieldElement& q) {
    if (!q.is_rational()) throw std::invalid_argument("direct_sum: q must be rational");
    if (q.a() <= 0) throw std::invalid_argument("direct_sum: q must be positive");
    return append_coefficient(f, q);
}

inline GramMatrix gram_matrix(const DiagonalForm& f, const std::vector<KVector>& basis) {
    GramMatrix g(basis.size(), basis.size(), QuadFieldElement::zero(f.field()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) g(i, j) = g(j, i) = f.bilinear(basis[i], basis[j]);
    return g;
}

/// Result of a congruence diagonalization: diag = P G P^t with the rows
/// of P being the new basis (expressed in the old one).
struct Diagonalization {
    std::vector<QuadFieldElement> diagonal;
    std::vector<KVector> basis;
};

/**
 * Symmetric Gaussian elimination over k. Pivots on the first nonzero
 * diagonal entry, swapping when the current one vanishes; if every
 * remaining diagonal entry is zero an off-diagonal pair is folded in
 * (e_i <- e_i + e_j). Throws on a degenerate matrix.
 */
inline Diagonalization diagonalize(GramMatrix g, std::vector<KVector> basis) {
    const std::size_t m = g.rows();
    if (basis.size() != m) throw std::invalid_argument("diagonalize: basis size mismatch");
    auto swap_index = [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < m; ++k) std::swap(g(i, k), g(j, k));
        for (std::size_t k = 0; k < m; ++k) std::swap(g(k, i), g(k, j));
        std::swap(basis[i], basis[j]);
    };
    // row_i += t row_j, col_i += t col_j
    auto add_index = [&](std::size_t i, std::size_t j, const QuadFieldElement& t) {
        for (std::size_t k = 0; k < m; ++k) g(i, k) += t * g(j, k);
        for (std::size_t k = 0; k < m; ++k) g(k, i) += t * g(k, j);
        for (std::size_t k = 0; k < basis[i].size(); ++k) basis[i][k] += t * basis[j][k];
    };

    for (std::size_t i = 0; i < m; ++i) {
        if (g(i, i).is_zero()) {
            std::size_t j = i + 1;
            while (j < m && g(j, j).is_zero()) ++j;
            if (j < m) {
                swap_index(i, j);
            } else {
                j = i + 1;
                while (j < m && g(i, j).is_zero()) ++j;
                if (j == m) throw std::domain_error("diagonalize: degenerate Gram matrix");
                add_index(i, j, QuadFieldElement::one(g(i, j).field()));
            }
        }
        for (std::size_t j = i + 1; j < m; ++j) {
            if (g(j, i).is_zero()) continue;
            add_index(j, i, -(g(j, i) / g(i, i)));
        }
    }
    Diagonalization d;
    for (std::size_t i = 0; i < m; ++i) d.diagonal.push_back(g(i, i));
    d.basis = std::move(basis);
    return d;
}

struct OrthogonalRestriction {
    DiagonalForm form;
    std::vector<KVector> basis;  ///< orthogonal basis of v-perp realizing `form`
};

namespace detail {

inline mpz_class lcm_of_denominators(const KVector& v) {
    mpz_class l = 1;
    for (const auto& x : v) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.a().get_den_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.b().get_den_mpz_t());
    }
    return l;
}

}  // namespace detail

/**
 * Restriction of f to v-perp = { w : b_f(w, v) = 0 }.
 *
 * The basis of v-perp comes from the reduced row echelon form of the single
 * equation sum c_i v_i w_i = 0 (pivot = first nonzero coefficient), each
 * vector scaled by a positive integer to clear rational denominators.
 */
inline OrthogonalRestriction restrict_to_orthogonal_with_basis(const DiagonalForm& f, const KVector& v) {
    const FieldTag k = f.field();
    if (f.evaluate(v).is_zero()) throw std::domain_error("restrict_to_orthogonal: isotropic vector");
    if (f.dimension() < 2) throw std::invalid_argument("restrict_to_orthogonal: dimension too small");
    const std::size_t n = f.dimension();

    KVector eq(n, QuadFieldElement::zero(k));
    for (std::size_t i = 0; i < n; ++i) eq[i] = f.coefficient(i) * v[i];
    std::size_t pivot = 0;
    while (pivot < n && eq[pivot].is_zero()) ++pivot;

    std::vector<KVector> basis;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == pivot) continue;
        KVector w(n, QuadFieldElement::zero(k));
        w[j] = QuadFieldElement::one(k);
        w[pivot] = -(eq[j] / eq[pivot]);
        const QuadFieldElement scale = QuadFieldElement::rational(mpq_class(detail::lcm_of_denominators(w)), k);
        for (auto& x : w) x *= scale;
        basis.push_back(std::move(w));
    }
    GramMatrix g = gram_matrix(f, basis);
    auto d = diagonalize(std::move(g), std::move(basis));
    return {DiagonalForm(k, std::move(d.diagonal)), std::move(d.basis)};
}

inline DiagonalForm restrict_to_orthogonal(const DiagonalForm& f, const KVector& v) {
    return restrict_to_orthogonal_with_basis(f, v).form;
}

struct EquivalenceCertificate {
    enum class Verdict { NonEquivalent, Unknown };
    Verdict verdict = Verdict::Unknown;
    std::string reason;

    bool non_equivalent() const { return verdict == Verdict::NonEquivalent; }
};

/// Sound certificate only: forms whose discriminants differ by a non-square
/// are not equivalent over k. Equivalence itself is never claimed.
inline EquivalenceCertificate equivalence_certificate(const DiagonalForm& f, const DiagonalForm& g) {
    if (f.field() != g.field()) throw std::invalid_argument("equivalence_certificate: field mismatch");
    if (f.dimension() != g.dimension()) throw std::invalid_argument("equivalence_certificate: dimension mismatch");
    const QuadFieldElement ratio = f.discriminant() / g.discriminant();
    if (!ratio.is_square())
        return {EquivalenceCertificate::Verdict::NonEquivalent,
                "discriminant ratio " + ratio.to_string() + " is not a square in " + field_name(f.field())};
    return {EquivalenceCertificate::Verdict::Unknown, "discriminant ratio " + ratio.to_string() + " is a square"};
}

/// A prime element of the ring of integers with its ideal norm.
struct RingPrime {
    QuadFieldElement generator;  ///< totally positive generator
    mpz_class ideal_norm;
};

namespace detail {

inline std::vector<long> rational_primes_up_to(long bound) {
    std::vector<bool> sieve(static_cast<std::size_t>(bound + 1), true);
    std::vector<long> ps;
    for (long p = 2; p <= bound; ++p) {
        if (!sieve[static_cast<std::size_t>(p)]) continue;
        ps.push_back(p);
        for (long q = p * p; q <= bound; q += p) sieve[static_cast<std::size_t>(q)] = false;
    }
    return ps;
}

inline bool is_perfect_square(long x, long& root) {
    if (x < 0) return false;
    long r = static_cast<long>(std::sqrt(static_cast<double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    root = r;
    return r * r == x;
}

/// Smallest-b solution of a^2 - 2b^2 = target with a >= 0, if any.
inline bool solve_norm_equation(long target, long b_bound, long& a, long& b) {
    for (long y = 0; y <= b_bound; ++y) {
        long x;
        if (is_perfect_square(target + 2 * y * y, x)) {
            a = x;
            b = y;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/**
 * Primes of Z (field Q) or of Z[sqrt2] (field Q(sqrt2)) with norm at most
 * `max_norm`, ordered by ideal norm. Over Z[sqrt2] a rational prime p splits
 * iff a^2 - 2b^2 = +-p is solvable; the two conjugate factors are listed
 * (positive b first), inert primes contribute p itself with norm p^2, and
 * 2 ramifies as (2 + sqrt2).
 */
inline std::vector<RingPrime> ring_primes(FieldTag field, long max_norm) {
    std::vector<RingPrime> out;
    if (field == FieldTag::Rationals) {
        for (long p : detail::rational_primes_up_to(max_norm))
            out.push_back({QuadFieldElement(p), mpz_class(p)});
        return out;
    }
    const FieldTag k = FieldTag::RationalsSqrt2;
    for (long p : detail::rational_primes_up_to(max_norm)) {
        long a = 0, b = 0;
        const long bound_plus = static_cast<long>(std::sqrt(p / 2.0)) + 1;
        const long bound_minus = static_cast<long>(std::sqrt(static_cast<double>(p))) + 1;
        const bool plus = detail::solve_norm_equation(p, bound_plus, a, b);
        long a2 = 0, b2 = 0;
        const bool minus = !plus && detail::solve_norm_equation(-p, bound_minus, a2, b2);
        if (plus || minus) {
            QuadFieldElement pi = plus ? QuadFieldElement(a, b, k) : QuadFieldElement(a2, b2, k);
            if (!plus) pi *= QuadFieldElement(1, 1, k);  // norm -p -> +p
            if (pi.sign_at(Embedding::Identity) < 0) pi = -pi;
            if (p == 2 || pi == pi.conjugate()) {
                out.push_back({pi, mpz_class(p)});
            } else {
                const QuadFieldElement first = pi.b() > 0 ? pi : pi.conjugate();
                out.push_back({first, mpz_class(p)});
                out.push_back({first.conjugate(), mpz_class(p)});
            }
        } else if (p * p <= max_norm) {
            out.push_back({QuadFieldElement(p, 0, k), mpz_class(p) * p});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const RingPrime& x, const RingPrime& y) { return x.ideal_norm < y.ideal_norm; });
    return out;
}

inline constexpr std::array<const char*, 6> kCountingLabels = {"a+", "a-", "b+", "b-", "u", "v"};

struct LabelledForm {
    std::string label;
    QuadFieldElement prime;
    DiagonalForm form;
};

struct CountingFamily {
    DiagonalForm base;                  ///< f_{n-1}
    std::vector<LabelledForm> members;  ///< f^x = f_{n-1} + <p_x>, six of them
};

/**
 * Builds f_{n-1} and six forms f^x = f_{n-1} + <p_x> with p_x prime in the
 * ring of integers, searched in increasing norm, keeping a prime only if the
 * resulting form is certified non-equivalent to every form kept so far.
 */
inline CountingFamily build_counting_family(std::size_t n, FieldTag field) {
    if (n < 2) throw std::invalid_argument("build_counting_family: n must be at least 2");
    CountingFamily family{counting_base_form(n - 1, field), {}};
    for (long bound = 32;; bound *= 2) {
        family.members.clear();
        for (const RingPrime& p : ring_primes(field, bound)) {
            if (!p.generator.is_totally_positive()) continue;
            DiagonalForm candidate = append_coefficient(family.base, p.generator);
            if (!is_admissible(candidate)) continue;
            const bool separated = std::all_of(family.members.begin(), family.members.end(), [&](const LabelledForm& m) {
                return equivalence_certificate(candidate, m.form).non_equivalent();
            });
            if (!separated) continue;
            family.members.push_back({kCountingLabels[family.members.size()], p.generator, std::move(candidate)});
            if (family.members.size() == kCountingLabels.size()) return family;
        }
    }
}

}  // namespace hypgeo
