#pragma once

/**
 * @file numfield.hpp
 * @brief Exact arithmetic in Q and Q(sqrt 2).
 *
 * Elements are stored as a + b*sqrt(2) with a, b arbitrary precision
 * rationals (GMP). Every operation is exact; signs under both real
 * embeddings are decided algebraically, never in floating point.
 *
 * Textual form: "a/b + c/d*r2", e.g. "3 + 2*r2", "-1/2 - 3/4*r2", "r2".
 */

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hypgeo {

enum class FieldTag { Rationals, RationalsSqrt2 };

/// Real embeddings: identity sends sqrt2 to +sqrt2, sigma to -sqrt2.
enum class Embedding { Identity, Sigma };

inline std::vector<Embedding> embeddings(FieldTag field) {
    if (field == FieldTag::Rationals) return {Embedding::Identity};
    return {Embedding::Identity, Embedding::Sigma};
}

inline std::string field_name(FieldTag field) {
    return field == FieldTag::Rationals ? "Q" : "Q(sqrt2)";
}

inline FieldTag parse_field(std::string_view name) {
    if (name == "Q") return FieldTag::Rationals;
    if (name == "Q(sqrt2)" || name == "Q(r2)" || name == "Qsqrt2") return FieldTag::RationalsSqrt2;
    throw std::invalid_argument("unknown field '" + std::string(name) + "'");
}

namespace detail {

inline int sgn(const mpq_class& q) { return ::sgn(q); }

inline bool is_rational_square(const mpq_class& q) {
    if (q < 0) return false;
    if (q == 0) return true;
    return mpz_perfect_square_p(q.get_num_mpz_t()) != 0 &&
           mpz_perfect_square_p(q.get_den_mpz_t()) != 0;
}

inline mpq_class rational_sqrt(const mpq_class& q) {
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    mpq_class r(n, d);
    r.canonicalize();
    return r;
}

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

inline mpq_class parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw std::invalid_argument("bad rational literal '" + s + "'");
    if (s.front() == '+') s.erase(s.begin());
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

}  // namespace detail

class QuadFieldElement {
public:
    QuadFieldElement() = default;
    QuadFieldElement(long a, FieldTag field = FieldTag::Rationals) : a_(a), field_(field) {}
    QuadFieldElement(mpq_class a, mpq_class b, FieldTag field)
        : a_(std::move(a)), b_(std::move(b)), field_(field) {
        a_.canonicalize();
        b_.canonicalize();
        if (field_ == FieldTag::Rationals && b_ != 0)
            throw std::invalid_argument("irrational part in an element of Q");
    }

    static QuadFieldElement rational(mpq_class a, FieldTag field) { return {std::move(a), 0, field}; }
    static QuadFieldElement zero(FieldTag field) { return {0, 0, field}; }
    static QuadFieldElement one(FieldTag field) { return {1, 0, field}; }
    static QuadFieldElement sqrt2() { return {0, 1, FieldTag::RationalsSqrt2}; }

    const mpq_class& a() const { return a_; }
    const mpq_class& b() const { return b_; }
    FieldTag field() const { return field_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    /// Same value reinterpreted in a larger field. Narrowing requires b = 0.
    QuadFieldElement in_field(FieldTag field) const { return {a_, b_, field}; }

    QuadFieldElement operator-() const { return {-a_, -b_, field_}; }

    friend QuadFieldElement operator+(const QuadFieldElement& x, const QuadFieldElement& y) {
        check_same(x, y);
        return {x.a_ + y.a_, x.b_ + y.b_, x.field_};
    }
    friend QuadFieldElement operator-(const QuadFieldElement& x, const QuadFieldElement& y) {
        check_same(x, y);
        return {x.a_ - y.a_, x.b_ - y.b_, x.field_};
    }
    friend QuadFieldElement operator*(const QuadFieldElement& x, const QuadFieldElement& y) {
        check_same(x, y);
        return {x.a_ * y.a_ + 2 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, x.field_};
    }
    friend QuadFieldElement operator/(const QuadFieldElement& x, const QuadFieldElement& y) {
        check_same(x, y);
        return x * y.inverse();
    }
    QuadFieldElement& operator+=(const QuadFieldElement& y) { return *this = *this + y; }
    QuadFieldElement& operator-=(const QuadFieldElement& y) { return *this = *this - y; }
    QuadFieldElement& operator*=(const QuadFieldElement& y) { return *this = *this * y; }
    QuadFieldElement& operator/=(const QuadFieldElement& y) { return *this = *this / y; }

    /// Field norm a^2 - 2b^2 (equals a^2 over Q).
    mpq_class norm() const { return a_ * a_ - 2 * b_ * b_; }

    QuadFieldElement conjugate() const { return {a_, -b_, field_}; }

    QuadFieldElement inverse() const {
        if (is_zero()) throw std::domain_error("division by zero in field arithmetic");
        const mpq_class n = norm();
        return {a_ / n, -b_ / n, field_};
    }

    /// Exact sign of the real number a + b*e(sqrt2).
    int sign_at(Embedding e) const {
        const int sa = detail::sgn(a_);
        const int sb = e == Embedding::Identity ? detail::sgn(b_) : -detail::sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: compare a^2 with 2b^2
        const int c = ::cmp(a_ * a_, 2 * b_ * b_);
        return c > 0 ? sa : (c < 0 ? sb : 0);
    }

    bool is_totally_positive() const {
        for (Embedding e : embeddings(field_))
            if (sign_at(e) <= 0) return false;
        return true;
    }

    /// Exact decision whether x = y^2 for some y in the element's field.
    bool is_square() const {
        if (is_zero()) return true;
        if (field_ == FieldTag::Rationals) return detail::is_rational_square(a_);
        if (b_ == 0) {
            // y = c or y = d*sqrt2
            return detail::is_rational_square(a_) || detail::is_rational_square(a_ / 2);
        }
        // (c + d r2)^2 = c^2 + 2d^2 + 2cd r2; the norm must be a rational square n^2
        // and c^2 = (a +- n)/2.
        const mpq_class nrm = norm();
        if (!detail::is_rational_square(nrm)) return false;
        const mpq_class n = detail::rational_sqrt(nrm);
        for (int s : {1, -1}) {
            const mpq_class c2 = (a_ + s * n) / 2;
            if (c2 <= 0 || !detail::is_rational_square(c2)) continue;
            const mpq_class c = detail::rational_sqrt(c2);
            const mpq_class d = b_ / (2 * c);
            if (c * c + 2 * d * d == a_) return true;
        }
        return false;
    }

    /// Membership in the ring of integers (Z or Z[sqrt2]).
    bool is_integral() const { return a_.get_den() == 1 && b_.get_den() == 1; }

    double to_double(Embedding e = Embedding::Identity) const {
        const double r2 = std::sqrt(2.0);
        return a_.get_d() + (e == Embedding::Identity ? r2 : -r2) * b_.get_d();
    }

    std::string to_string() const {
        if (b_ == 0) return detail::rational_to_string(a_);
        std::string irr;
        const mpq_class mag = abs(b_);
        irr = mag == 1 ? "r2" : detail::rational_to_string(mag) + "*r2";
        if (a_ == 0) return b_ < 0 ? "-" + irr : irr;
        return detail::rational_to_string(a_) + (b_ < 0 ? " - " : " + ") + irr;
    }

    /// Parses "a/b + c/d*r2" (also accepts "sqrt2" for "r2"). Whitespace is ignored.
    static QuadFieldElement parse(std::string_view text, FieldTag field) {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
        for (std::string::size_type p; (p = s.find("sqrt2")) != std::string::npos;) s.replace(p, 5, "r2");
        if (s.empty()) throw std::invalid_argument("empty field element literal");

        mpq_class a = 0, b = 0;
        std::size_t i = 0;
        while (i < s.size()) {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
            std::string term = s.substr(i, j - i);
            int sign = 1;
            if (term.front() == '+' || term.front() == '-') {
                sign = term.front() == '-' ? -1 : 1;
                term.erase(term.begin());
            }
            if (term.empty()) throw std::invalid_argument("dangling sign in '" + std::string(text) + "'");
            bool irrational = false;
            if (term.size() >= 2 && term.compare(term.size() - 2, 2, "r2") == 0) {
                irrational = true;
                term.erase(term.size() - 2);
                if (!term.empty()) {
                    if (term.back() != '*') throw std::invalid_argument("expected '*r2' in '" + std::string(text) + "'");
                    term.pop_back();
                }
            }
            mpq_class v = term.empty() ? mpq_class(1) : detail::parse_rational(term);
            if (term.empty() && !irrational) throw std::invalid_argument("empty term");
            (irrational ? b : a) += sign * v;
            i = j;
        }
        if (field == FieldTag::Rationals && b != 0)
            throw std::invalid_argument("'" + std::string(text) + "' is not an element of Q");
        return {a, b, field};
    }

    friend bool operator==(const QuadFieldElement& x, const QuadFieldElement& y) {
        return x.field_ == y.field_ && x.a_ == y.a_ && x.b_ == y.b_;
    }

    friend std::ostream& operator<<(std::ostream& os, const QuadFieldElement& x) { return os << x.to_string(); }

private:
    static void check_same(const QuadFieldElement& x, const QuadFieldElement& y) {
        if (x.field_ != y.field_) throw std::invalid_argument("mixed-field arithmetic");
    }

    mpq_class a_ = 0;
    mpq_class b_ = 0;
    FieldTag field_ = FieldTag::Rationals;
};

}  // namespace hypgeo
