#include "hypgeo/numfield.hpp"

#include <gtest/gtest.h>

#include <random>

using hypgeo::Embedding;
using hypgeo::FieldTag;
using hypgeo::QuadFieldElement;

namespace {

QuadFieldElement random_element(std::mt19937_64& rng, FieldTag field) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 9);
    mpq_class a(num(rng), den(rng));
    mpq_class b = field == FieldTag::Rationals ? mpq_class(0) : mpq_class(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    return {a, b, field};
}

// 256-bit floating evaluation, independent of the algebraic sign rule.
int sign_by_mpf(const QuadFieldElement& x, Embedding e) {
    mpf_class r2(2, 256);
    r2 = sqrt(r2);
    if (e == Embedding::Sigma) r2 = -r2;
    mpf_class v(x.a(), 256);
    v += mpf_class(x.b(), 256) * r2;
    return sgn(v);
}

}  // namespace

TEST(Numfield, FieldAxiomsRandomized) {
    std::mt19937_64 rng(7);
    for (FieldTag field : {FieldTag::Rationals, FieldTag::RationalsSqrt2}) {
        const auto zero = QuadFieldElement::zero(field), one = QuadFieldElement::one(field);
        for (int i = 0; i < 500; ++i) {
            auto x = random_element(rng, field), y = random_element(rng, field), z = random_element(rng, field);
            EXPECT_EQ(x + y, y + x);
            EXPECT_EQ(x * y, y * x);
            EXPECT_EQ((x + y) + z, x + (y + z));
            EXPECT_EQ((x * y) * z, x * (y * z));
            EXPECT_EQ(x * (y + z), x * y + x * z);
            EXPECT_EQ(x + zero, x);
            EXPECT_EQ(x * one, x);
            EXPECT_EQ(x - x, zero);
            if (!x.is_zero()) {
                EXPECT_EQ(x * x.inverse(), one);
                EXPECT_EQ((y / x) * x, y);
            }
        }
    }
}

TEST(Numfield, DivisionExample) {
    const auto x = QuadFieldElement::parse("1 + r2", FieldTag::RationalsSqrt2);
    EXPECT_EQ(x.inverse(), QuadFieldElement::parse("-1 + r2", FieldTag::RationalsSqrt2));
    EXPECT_EQ(x * x, QuadFieldElement::parse("3 + 2*r2", FieldTag::RationalsSqrt2));
}

TEST(Numfield, DivisionByZeroThrows) {
    const auto one = QuadFieldElement::one(FieldTag::RationalsSqrt2);
    EXPECT_THROW(one / QuadFieldElement::zero(FieldTag::RationalsSqrt2), std::domain_error);
}

TEST(Numfield, MixedFieldsRejected) {
    EXPECT_THROW(QuadFieldElement::one(FieldTag::Rationals) + QuadFieldElement::sqrt2(), std::invalid_argument);
    EXPECT_THROW(QuadFieldElement(0, 1, FieldTag::Rationals), std::invalid_argument);
}

TEST(Numfield, ConjugateIsRingAutomorphism) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        auto x = random_element(rng, FieldTag::RationalsSqrt2), y = random_element(rng, FieldTag::RationalsSqrt2);
        EXPECT_EQ((x + y).conjugate(), x.conjugate() + y.conjugate());
        EXPECT_EQ((x * y).conjugate(), x.conjugate() * y.conjugate());
        EXPECT_EQ(x.conjugate().conjugate(), x);
        EXPECT_EQ(x * x.conjugate(), QuadFieldElement::rational(x.norm(), FieldTag::RationalsSqrt2));
    }
    EXPECT_EQ(QuadFieldElement::sqrt2().conjugate(), -QuadFieldElement::sqrt2());
}

TEST(Numfield, SignMatchesHighPrecisionOracle) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        auto x = random_element(rng, FieldTag::RationalsSqrt2);
        for (Embedding e : {Embedding::Identity, Embedding::Sigma}) EXPECT_EQ(x.sign_at(e), sign_by_mpf(x, e)) << x;
    }
    const auto r2 = QuadFieldElement::sqrt2();
    EXPECT_EQ(r2.sign_at(Embedding::Identity), 1);
    EXPECT_EQ(r2.sign_at(Embedding::Sigma), -1);
    EXPECT_EQ(QuadFieldElement::zero(FieldTag::RationalsSqrt2).sign_at(Embedding::Sigma), 0);
    // near-cancellation: 99 - 70 r2 is about 0.00505 but 99 + 70 r2 conjugate flips nothing
    const auto tight = QuadFieldElement::parse("99 - 70*r2", FieldTag::RationalsSqrt2);
    EXPECT_EQ(tight.sign_at(Embedding::Identity), 1);
    EXPECT_EQ(tight.sign_at(Embedding::Sigma), 1);
}

TEST(Numfield, TotalPositivity) {
    const auto f = FieldTag::RationalsSqrt2;
    EXPECT_TRUE(QuadFieldElement::parse("2 + r2", f).is_totally_positive());
    EXPECT_FALSE(QuadFieldElement::parse("1 + r2", f).is_totally_positive());
    EXPECT_FALSE(QuadFieldElement::sqrt2().is_totally_positive());
    EXPECT_FALSE(QuadFieldElement::zero(f).is_totally_positive());
    EXPECT_TRUE(QuadFieldElement(3).is_totally_positive());
}

TEST(Numfield, SquaresByConstruction) {
    std::mt19937_64 rng(17);
    for (FieldTag field : {FieldTag::Rationals, FieldTag::RationalsSqrt2}) {
        for (int i = 0; i < 300; ++i) {
            auto y = random_element(rng, field);
            EXPECT_TRUE((y * y).is_square()) << y;
        }
    }
}

TEST(Numfield, SquareExamples) {
    const auto k = FieldTag::RationalsSqrt2;
    EXPECT_FALSE(QuadFieldElement(2).is_square());
    EXPECT_TRUE(QuadFieldElement(2, k).is_square());
    EXPECT_FALSE(QuadFieldElement(3, k).is_square());
    EXPECT_FALSE(QuadFieldElement(-1, k).is_square());
    EXPECT_TRUE(QuadFieldElement::parse("3 + 2*r2", k).is_square());
    EXPECT_FALSE(QuadFieldElement::parse("1 + r2", k).is_square());
    EXPECT_FALSE(QuadFieldElement::parse("2 + r2", k).is_square());
    EXPECT_TRUE(QuadFieldElement::parse("9/4", FieldTag::Rationals).is_square());
}

TEST(Numfield, ParseAndPrintRoundTrip) {
    const auto k = FieldTag::RationalsSqrt2;
    for (const char* s : {"0", "3", "-1/2", "r2", "-r2", "1/3*r2", "3 + 2*r2", "-1/2 - 3/4*r2"}) {
        const auto x = QuadFieldElement::parse(s, k);
        EXPECT_EQ(x.to_string(), s);
        EXPECT_EQ(QuadFieldElement::parse(x.to_string(), k), x);
    }
    EXPECT_EQ(QuadFieldElement::parse("sqrt2", k), QuadFieldElement::sqrt2());
    EXPECT_THROW(QuadFieldElement::parse("r2", FieldTag::Rationals), std::invalid_argument);
    EXPECT_THROW(QuadFieldElement::parse("1 +", k), std::invalid_argument);
    EXPECT_THROW(QuadFieldElement::parse("x", k), std::invalid_argument);
    EXPECT_THROW(QuadFieldElement::parse("1/0", k), std::invalid_argument);
}

TEST(Numfield, Integrality) {
    EXPECT_TRUE(QuadFieldElement::parse("3 - 5*r2", FieldTag::RationalsSqrt2).is_integral());
    EXPECT_FALSE(QuadFieldElement::parse("1/2", FieldTag::RationalsSqrt2).is_integral());
}
