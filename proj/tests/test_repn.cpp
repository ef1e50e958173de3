#include <berezin/repn.hpp>

#include <gtest/gtest.h>

using namespace berezin;

namespace {

GroupElement disk_element(double mod_a, double arg_a, double arg_b) {
    return GroupElement::su11(std::polar(mod_a, arg_a), std::polar(std::sqrt(mod_a * mod_a - 1.0), arg_b));
}

}  // namespace

TEST(Representation, RejectsMismatchedModels) {
    RepnContext ctx = RepnContext::make(3.0, Model::half_plane);
    Function one = [](const Point&) { return cplx(1.0); };
    EXPECT_THROW(pi_act(ctx, GroupElement::identity(Model::disk), one, Point::H(0, 1)), ModelMismatch);
    EXPECT_THROW(coefficient(ctx, GroupElement::identity(Model::half_plane)), ModelMismatch);
}

TEST(Representation, IsUnitary) {
    RepnContext ctx = RepnContext::make(3.0, Model::half_plane);
    const SpaceParams& P = ctx.params;
    GroupElement g = GroupElement::psl(2.0, 1.0, 3.0, 2.0);
    Point w = Point::H(0.0, 1.0);
    Function ew = [P, w](const Point& x) { return eval_vector(P, w, x); };
    Function gew = pi_act(ctx, g, ew);
    QuadResult n2 = inner_product(P, gew, gew, mobius_act(g, w), 1e-11);
    EXPECT_NEAR(n2.value.real() / eval_norm2(P, w), 1.0, 1e-7);
}

TEST(Representation, MovesEvaluationVectorsUpToAPhase) {
    RepnContext ctx = RepnContext::make(2.5, Model::half_plane);
    CovarianceReport rep = eval_covariance_check(ctx, GroupElement::psl(1.0, 2.0, 1.0, 3.0), Point::H(0.2, 0.7),
                                                 {Point::H(0.5, 0.5), Point::H(-1, 2), Point::H(3, 0.2)});
    EXPECT_LT(rep.max_rel_err_unitary, 1e-12);
    EXPECT_GT(rep.max_rel_err_inverse_reading, 1e-3);
}

TEST(Representation, ProjectiveLaw) {
    RepnContext ctx = RepnContext::make(2.5, Model::half_plane);
    GroupElement g1 = GroupElement::psl(0.0, -1.0, 1.0, 0.0), g2 = GroupElement::psl(1.0, 0.0, 1.0, 1.0);
    cplx m = projective_multiplier(2.5, g1, g2);
    Function f = [P = ctx.params](const Point& x) { return eval_vector(P, Point::H(0.1, 1.3), x); };
    for (Point x : {Point::H(0.5, 0.5), Point::H(-1, 2)}) {
        cplx lhs = pi_act(ctx, g1, pi_act(ctx, g2, f), x), rhs = m * pi_act(ctx, g1 * g2, f, x);
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12 * std::abs(lhs));
    }
}

TEST(Coefficient, QuadratureMatchesMeanValueFormula) {
    for (double r : {2.5, 4.0}) {
        RepnContext ctx = RepnContext::make(r, Model::disk);
        GroupElement g = disk_element(1.7, 0.4, -1.1);
        cplx q = coefficient(ctx, g, 1e-11).value, c = coefficient_closed_form(r, g);
        EXPECT_NEAR(std::abs(q - c) / std::abs(c), 0.0, 1e-8);
    }
    // At the identity the coefficient is ||1||^2 = pi / (r - 1).
    EXPECT_NEAR(std::abs(coefficient_closed_form(3.0, GroupElement::identity(Model::disk)) - pi / 2.0), 0.0, 1e-15);
}

TEST(FormalDimension, MatchesRMinusOneOverPi) {
    HaarChart chart;
    for (double r : {2.5, 3.0, 5.0}) {
        FormalDimension d = formal_dimension(r, chart, 1e-5);
        EXPECT_NEAR(d.value / ((r - 1.0) / pi), 1.0, 1e-3);
    }
}

TEST(FormalDimension, CalibrationReproducesTheFrozenConstant) {
    HaarChart c = calibrate_haar_kappa(1e-6);
    EXPECT_NEAR(c.kappa / HaarChart::frozen_kappa, 1.0, 1e-6);
}

TEST(FormalDimension, TruncationRadiusGrowsAsToleranceShrinks) {
    EXPECT_GT(haar_truncation_radius(3.0, 1e-8), haar_truncation_radius(3.0, 1e-4));
    EXPECT_GT(haar_truncation_radius(2.5, 1e-4), haar_truncation_radius(5.0, 1e-4));
}
