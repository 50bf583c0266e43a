#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "mpv/corpus.hpp"
#include "mpv/exactpoly.hpp"

using namespace mpv;

namespace {

Poly q(int dim, int axis) { return Poly::variable(dim, axis); }
Poly c(int dim, const Rational& v) { return Poly::constant(dim, v); }

}  // namespace

TEST(PolyAdd, AdditiveInverseCancels) {
    EXPECT_TRUE((q(1, 1) + (-q(1, 1))).is_zero());
}

TEST(PolyAdd, CollectsLikeTerms) {
    EXPECT_EQ((q(1, 1) + c(1, 1)) + q(1, 1), Rational(2) * q(1, 1) + c(1, 1));
    const Poly half = Rational(1, 2) * (q(2, 1) * q(2, 2));
    EXPECT_EQ(half + half, q(2, 1) * q(2, 2));
}

TEST(PolyAdd, DimensionMismatchThrows) {
    EXPECT_THROW(q(1, 1) + q(2, 1), std::invalid_argument);
    EXPECT_THROW(q(1, 1) * q(2, 1), std::invalid_argument);
}

TEST(PolyMul, ZeroAbsorbs) { EXPECT_TRUE((q(1, 1) * Poly(1)).is_zero()); }

TEST(PolyMul, BinomialSquare) {
    const Poly a = q(1, 1) + c(1, 1);
    EXPECT_EQ(a * a, q(1, 1) * q(1, 1) + Rational(2) * q(1, 1) + c(1, 1));
}

TEST(PolyMul, RationalCoefficientsReduce) {
    EXPECT_EQ((Rational(1, 3) * q(2, 1)) * (Rational(3) * q(2, 2)), q(2, 1) * q(2, 2));
}

TEST(PolyPartial, Examples) {
    EXPECT_EQ(partial(q(1, 1) * q(1, 1), 1), Rational(2) * q(1, 1));
    EXPECT_TRUE(partial(q(2, 1), 2).is_zero());
    EXPECT_EQ(partial(q(2, 1) * q(2, 2) + q(2, 1), 1), q(2, 2) + c(2, 1));
}

TEST(PolyPartial, AxisOutOfRangeThrows) {
    EXPECT_THROW(partial(q(2, 1), 3), std::out_of_range);
    EXPECT_THROW(partial(q(2, 1), 0), std::out_of_range);
}

TEST(PolyEval, Examples) {
    const std::vector<Rational> three{Rational(3)};
    EXPECT_EQ(evaluate(q(1, 1) * q(1, 1), three), Rational(9));
    const std::vector<double> any{2.5, -1.0};
    EXPECT_EQ(evaluate(Poly(2), std::span<const double>(any)), 0.0);
    const std::vector<Rational> halves{Rational(1, 2), Rational(1, 2)};
    EXPECT_EQ(evaluate(q(2, 1) + q(2, 2), halves), Rational(1));
}

TEST(PolyEval, LengthMismatchThrows) {
    const std::vector<Rational> pt{Rational(1)};
    EXPECT_THROW(evaluate(q(2, 1), pt), std::invalid_argument);
}

TEST(Rational, CanonicalForm) {
    const Poly p = Rational(2, 4) * q(1, 1);
    const Rational k = p.coeff(Exponent{1});
    EXPECT_EQ(k.get_num(), 1);
    EXPECT_EQ(k.get_den(), 2);
}

TEST(PolyText, GradedOrderAndFormat) {
    const Poly p = q(2, 1) * q(2, 2) + Rational(-1, 2) * q(2, 2) + c(2, 3);
    EXPECT_EQ(p.to_string(), "1 * q1 q2 + -1/2 * q2 + 3");
    EXPECT_EQ(Poly(1).to_string(), "0");
}

TEST(PolyProperty, RingAxiomsOnRandomInstances) {
    Lcg64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const int dim = 1 + i % 3;
        const Poly a = random_poly(rng, dim, 3);
        const Poly b = random_poly(rng, dim, 3);
        const Poly d = random_poly(rng, dim, 3);
        EXPECT_EQ((a * b) * d, a * (b * d));
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * (b + d), a * b + a * d);
    }
}

TEST(PolyProperty, MixedPartialsCommute) {
    Lcg64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const Poly a = random_poly(rng, 3, 4, 5);
        const int x = rng.uniform_int(1, 3);
        const int y = rng.uniform_int(1, 3);
        EXPECT_EQ(partial(partial(a, x), y), partial(partial(a, y), x));
    }
}

TEST(PolyProperty, EvaluationIsARingHomomorphism) {
    Lcg64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const Poly a = random_poly(rng, 2, 3);
        const Poly b = random_poly(rng, 2, 3);
        const std::vector<Rational> pt{Rational(rng.uniform_int(-5, 5), rng.uniform_int(1, 4)),
                                       Rational(rng.uniform_int(-5, 5), rng.uniform_int(1, 4))};
        EXPECT_EQ(evaluate(a * b, pt), evaluate(a, pt) * evaluate(b, pt));
        EXPECT_EQ(evaluate(a + b, pt), evaluate(a, pt) + evaluate(b, pt));
    }
}
