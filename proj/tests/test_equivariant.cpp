#include <berezin/equivariant.hpp>

#include <gtest/gtest.h>

using namespace berezin;

TEST(ModularBall, ElementsAreDistinctInPsl) {
    ModularBall b = enumerate_psl2z(5);
    ASSERT_FALSE(b.elements.empty());
    EXPECT_TRUE(b.elements[0].is_identity_in_psl());
    for (std::size_t i = 0; i < b.elements.size(); ++i)
        for (std::size_t j = i + 1; j < b.elements.size(); ++j) EXPECT_FALSE(b.elements[i].same_in_psl(b.elements[j]));
    EXPECT_GT(enumerate_psl2z(6).elements.size(), b.elements.size());
}

TEST(Covolume, AreaOfTheFundamentalDomain) {
    QuadResult q = covolume();
    EXPECT_NEAR(q.value.real(), pi / 3.0, 1e-9);
    EXPECT_NEAR(dimension_report(4.0), 1.0, 1e-15);
    EXPECT_THROW(dimension_report(1.0), PreconditionError);
}

TEST(AutomorphicKernel, InvariantUnderTheModularGroup) {
    ModularForm D = delta_form();
    GammaKernel k = GammaKernel::autoform(D, D, 4.0);
    std::vector<std::tuple<ModularElement, Point, Point>> s = {
        {ModularElement::from_word("ST"), Point::H(0.2, 0.9), Point::H(-0.1, 1.1)},
        {ModularElement::from_word("TTS"), Point::H(0.4, 1.3), Point::H(0.0, 1.0)},
        {ModularElement::from_word("StS"), Point::H(-0.3, 1.0), Point::H(0.2, 1.5)}};
    EXPECT_LT(gamma_invariance_check(k, s).max_defect, 1e-10);
    EXPECT_NEAR(k.params().r, 16.0, 0.0);
}

TEST(AutomorphicKernel, HermitianWhenTheFormsAgree) {
    ModularForm D = delta_form();
    GammaKernel k = GammaKernel::autoform(D, D, 4.0);
    Point z = Point::H(0.1, 1.2), w = Point::H(-0.3, 0.95);
    EXPECT_NEAR(std::abs(k(z, w) - std::conj(k(w, z))), 0.0, 1e-12 * std::abs(k(z, w)));
}

TEST(PoincareSum, DefectShrinksWithTheCutoff) {
    SpaceParams P = SpaceParams::make(6.0, Model::half_plane);
    FiniteRankOp seed = FiniteRankOp::normalized_projection(P, Point::H(0.1, 1.4));
    std::vector<std::tuple<ModularElement, Point, Point>> s = {
        {ModularElement::from_word("ST"), Point::H(0.2, 0.9), Point::H(-0.1, 1.1)}};
    double d4 = gamma_invariance_check(GammaKernel::poincare(seed, 4), s).max_defect;
    double d8 = gamma_invariance_check(GammaKernel::poincare(seed, 8), s).max_defect;
    EXPECT_LT(d8, d4);
}

TEST(GammaTrace, SameOverATranslatedFundamentalDomain) {
    ModularForm D = delta_form();
    GammaKernel k = GammaKernel::autoform(D, D, 4.0);
    QuadResult a = gamma_trace(k, 1e-10), b = gamma_trace(k, 1e-10, 12.0, 2.0);
    EXPECT_NEAR(std::abs(a.value - b.value) / std::abs(a.value), 0.0, 1e-8);
    // A non-integer translate is not a fundamental domain.
    EXPECT_THROW(gamma_trace(k, 1e-10, 12.0, 0.37), PreconditionError);
}

TEST(GammaTrace, ProportionalToThePeterssonProduct) {
    ModularForm D = delta_form();
    TracePetersson tp = trace_vs_petersson(D, D, 4.0, 1e-10);
    // c_4 / (c_16 area F) = (3 / 4 pi) / ((15 / 4 pi) (pi / 3)) = 3 / (5 pi)
    EXPECT_NEAR(tp.expected_constant, 3.0 / (5.0 * pi), 1e-14);
    EXPECT_NEAR(std::abs(tp.constant - tp.expected_constant) / tp.expected_constant, 0.0, 1e-7);
}

TEST(GammaTrace, NeedsCuspDecay) {
    ModularForm E = eisenstein_form(4);
    GammaKernel k = GammaKernel::autoform(E, E, 4.0);
    EXPECT_THROW(gamma_trace(k), PreconditionError);
    EXPECT_THROW(GammaKernel::autoform(E, delta_form(), 4.0), PreconditionError);
}
