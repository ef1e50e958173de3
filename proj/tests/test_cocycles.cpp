#include <berezin/cocycles.hpp>

#include <random>

#include <gtest/gtest.h>

using namespace berezin;

namespace {

std::vector<Point> sample_points(int n, unsigned seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> x(-3, 3), ly(-4, 4);
    std::vector<Point> out;
    for (int i = 0; i < n; ++i) out.push_back(Point::H(x(g), std::exp(ly(g))));
    return out;
}

}  // namespace

TEST(PointwiseCocycles, PhiIsAntisymmetricAndBounded) {
    auto pts = sample_points(40, 1);
    for (auto& z : pts)
        for (auto& w : pts) {
            EXPECT_LT(std::abs(phi(z, w).imag()), pi / 2);
            EXPECT_NEAR(std::abs(phi(z, w) + phi(w, z)), 0.0, 1e-14);
        }
}

TEST(PointwiseCocycles, MIsASumOfL) {
    auto pts = sample_points(12, 2);
    for (auto& a : pts)
        for (auto& b : pts)
            for (auto& c : pts) {
                MLValues v = m_and_l(a, b, c);
                EXPECT_LT(v.identity_residual, 1e-12 * std::max(1.0, std::abs(v.m)));
                EXPECT_LE(v.m.real(), std::log(2.0) + 1e-12);
                EXPECT_NEAR(std::abs(theta(a, b, c) - I * v.m.imag()), 0.0, 1e-12);
            }
}

TEST(PointwiseCocycles, ThetaConventions) {
    Point a = Point::H(0, 1), b = Point::H(2, 0.1), c = Point::H(-3, 0.5);
    EXPECT_NEAR(std::abs(theta(a, b, c, ThetaConvention::halved) - 0.5 * theta(a, b, c)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(theta(a, b, c) - theta(b, c, a)), 0.0, 1e-14);
}

TEST(PointwiseCocycles, ThetaIsACoboundaryOfTildePhi) {
    auto pts = sample_points(9, 3);
    std::vector<std::array<Point, 3>> triples;
    for (int i = 0; i + 2 < 9; i += 3) triples.push_back({pts[i], pts[i + 1], pts[i + 2]});
    std::vector<std::tuple<ModularElement, Point, Point>> moves = {
        {ModularElement::from_word("ST"), Point::H(0.1, 1.0), Point::H(-0.4, 0.8)},
        {ModularElement::from_word("TTSt"), Point::H(0.3, 0.6), Point::H(0.2, 1.7)}};
    CoboundaryReport rep = coboundary_check(triples, moves);
    EXPECT_LT(rep.telescoping_residual, 1e-9);
    EXPECT_LT(rep.invariance_defect, 1e-9);
}

TEST(Normalization, LogDerivative) {
    for (double t : {2.5, 4.0, 7.0}) {
        LogDerivative d = log_derivative_c(t);
        EXPECT_NEAR(d.value, 1.0 / (t - 1.0), 1e-7);
    }
}

TEST(Functionals, TauIsTraceOverC) {
    CocycleContext ctx = CocycleContext::make(4.0);
    FiniteRankOp A = FiniteRankOp::normalized_projection(ctx.params, Point::H(0.2, 1.0));
    EXPECT_NEAR(std::abs(tau(A) - 1.0 / ctx.params.c), 0.0, 1e-12);
}

TEST(Functionals, PhiIsSymmetricAndMatchesTheDeformedTrace) {
    CocycleContext ctx = CocycleContext::make(4.0, {1e-8, 1e-3, 1e-5});
    FiniteRankOp A = FiniteRankOp::rank_one(ctx.params, Point::H(0.1, 1.0), Point::H(-0.2, 1.1), {1, 0.2});
    FiniteRankOp B = FiniteRankOp::rank_one(ctx.params, Point::H(0.3, 0.9), Point::H(0.0, 1.2), {0.5, -0.4});
    cplx ab = phi_t(A, B, ctx).value, ba = phi_t(B, A, ctx).value;
    EXPECT_NEAR(std::abs(ab - ba) / std::abs(ab), 0.0, 1e-5);
    QuadResult T = tau_deformed(A, B, 4.0, {1e-10, 1e-6, 1e-8});
    EXPECT_NEAR(std::abs(T.value - tau(A, B)) / std::abs(tau(A, B)), 0.0, 1e-8);
}

TEST(Functionals, ChiRefusesSymbolsWithoutDecay) {
    SpaceParams P = SpaceParams::make(4.0, Model::half_plane);
    SymbolFn a = FiniteRankOp::normalized_projection(P, Point::H(0, 1)).as_symbol();
    EXPECT_THROW(chi_t(identity_symbol(), a, P), PreconditionError);
}

TEST(Functionals, DiskOperatorsAreRejected) {
    CocycleContext ctx = CocycleContext::make(4.0);
    SpaceParams Pd = SpaceParams::make(4.0, Model::disk);
    FiniteRankOp A = FiniteRankOp::normalized_projection(Pd, Point::D(0.0));
    EXPECT_THROW(phi_t(A, A, ctx), ModelMismatch);
}
