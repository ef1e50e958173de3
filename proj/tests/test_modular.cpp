#include <berezin/modular.hpp>

#include <gtest/gtest.h>

using namespace berezin;

TEST(Tau, TabulatedValues) {
    auto t = ramanujan_tau(12);
    std::vector<long long> want = {0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944};
    for (int n = 1; n <= 12; ++n) EXPECT_EQ(t[n], want[n]) << n;
}

TEST(Tau, HeckeRelations) {
    auto t = ramanujan_tau(40);
    EXPECT_EQ(t[6], t[2] * t[3]);
    EXPECT_EQ(t[35], t[5] * t[7]);
    EXPECT_EQ(t[4], t[2] * t[2] - (1LL << 11));
    EXPECT_EQ(t[9], t[3] * t[3] - 177147LL);
}

TEST(Delta, AgreesWithEtaToThe24th) {
    for (cplx z : {cplx(0.1, 0.9), cplx(-0.4, 1.3), cplx(0.0, 2.0)}) {
        Point p = Point::H(z);
        cplx e = std::pow(eta(p), 24);
        EXPECT_NEAR(std::abs(delta(p) - e) / std::abs(e), 0.0, 1e-12);
    }
}

TEST(Delta, WeightTwelveUnderS) {
    ModularForm D = delta_form();
    Point z = Point::H(0.3, 1.1);
    cplx lhs = D.evaluate(Point::H(-1.0 / z.value())), rhs = std::pow(z.value(), 12) * D(z);
    EXPECT_NEAR(std::abs(lhs - rhs) / std::abs(rhs), 0.0, 1e-11);
}

TEST(Delta, RefusesUncertifiedHeights) {
    ModularForm D = delta_form();
    EXPECT_THROW(D(Point::H(0.0, 0.3)), PrecisionError);
    EXPECT_NO_THROW(D.evaluate(Point::H(0.0, 0.3)));
}

TEST(Eisenstein, DeltaIdentity) {
    // E4^3 - E6^2 = 1728 Delta
    ModularForm E4 = eisenstein_form(4), E6 = eisenstein_form(6);
    for (cplx z : {cplx(0.2, 1.0), cplx(-0.5, 0.9)}) {
        Point p = Point::H(z);
        cplx lhs = std::pow(E4(p), 3) - std::pow(E6(p), 2);
        EXPECT_NEAR(std::abs(lhs - 1728.0 * delta(p)) / std::abs(lhs), 0.0, 1e-9);
    }
    EXPECT_THROW(eisenstein_form(8), PreconditionError);
}

TEST(Eisenstein, WeightFourUnderS) {
    ModularForm E4 = eisenstein_form(4);
    Point z = Point::H(0.3, 1.1);
    cplx lhs = E4.evaluate(Point::H(-1.0 / z.value())), rhs = std::pow(z.value(), 4) * E4(z);
    EXPECT_NEAR(std::abs(lhs - rhs) / std::abs(rhs), 0.0, 1e-10);
}

TEST(Dedekind, ReciprocityMatchesDirectSum) {
    for (long long c = 1; c < 30; ++c)
        for (long long d = -20; d <= 20; ++d)
            if (std::gcd(d, c) == 1) EXPECT_EQ(dedekind_sum(d, c), dedekind_sum_direct(d, c)) << d << "/" << c;
}

TEST(Dedekind, ClosedFormForOne) {
    // s(1, c) = (c - 1)(c - 2) / (12 c)
    for (long long c = 1; c < 40; ++c) EXPECT_EQ(dedekind_sum(1, c), rational((c - 1) * (c - 2), 12 * c));
    EXPECT_THROW(dedekind_sum(2, 4), PreconditionError);
}

TEST(Rademacher, ElementaryValues) {
    EXPECT_EQ(rademacher_psi(ModularElement::T()), 1);
    EXPECT_EQ(rademacher_psi(ModularElement::S()), -3);
    EXPECT_EQ(rademacher_phi(ModularElement::T()), rational(-1, 12));
}

TEST(Rademacher, LogDeltaTransformation) {
    for (const char* w : {"S", "ST", "TTS", "STtS", "STSTT", "tSTTTS"}) {
        ModularElement g = ModularElement::from_word(w);
        if (g.c == 0) continue;
        EXPECT_NEAR(rademacher_psi_numeric(g), double(rademacher_psi(g)), 1e-6) << w;
    }
}

TEST(Rademacher, CoboundaryOfTheArgumentCocycle) {
    std::vector<std::string> words = {"S", "T", "t", "ST", "TS", "STT", "tSt", "SSS", "TTSTt", "StStSTT"};
    for (auto& a : words)
        for (auto& b : words) {
            ModularElement g1 = ModularElement::from_word(a), g2 = ModularElement::from_word(b);
            rational N = n_cocycle(g1.element(), g2.element(), Lift::sl);
            EXPECT_EQ(rademacher_phi(g1 * g2) - rademacher_phi(g1) - rademacher_phi(g2), N) << a << " " << b;
        }
}

TEST(LogDelta, ExponentiatesToDelta) {
    for (cplx z : {cplx(0.1, 0.2), cplx(0.45, 0.05), cplx(-3.2, 0.7)}) {
        Point p = Point::H(z);
        cplx want = delta_form().evaluate(p);
        EXPECT_NEAR(std::abs(std::exp(ln_delta(p)) - want) / std::abs(want), 0.0, 1e-9);
    }
}

TEST(Petersson, NormOfDelta) {
    ModularForm D = delta_form();
    QuadResult a = petersson(D, D, 1e-11), b = petersson_split(D, D, 1e-11);
    // Published value of the Petersson norm of Delta.
    EXPECT_NEAR(a.value.real(), 1.03536205680432e-6, 1e-17);
    EXPECT_NEAR(std::abs(a.value - b.value) / std::abs(a.value), 0.0, 1e-9);
    EXPECT_THROW(petersson(D, eisenstein_form(4)), PreconditionError);
}

TEST(Petersson, TailPreconditions) {
    ModularForm D = delta_form();
    EXPECT_THROW(cusp_pair_tail(D, D, 10.0, 5.0), PreconditionError);
    EXPECT_THROW(cusp_pair_tail(eisenstein_form(4), D, 1.0, 5.0), PreconditionError);
}
