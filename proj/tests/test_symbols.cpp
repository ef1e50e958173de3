#include <berezin/symbols.hpp>

#include <gtest/gtest.h>

using namespace berezin;

namespace {

SpaceParams H(double r) { return SpaceParams::make(r, Model::half_plane); }

}  // namespace

TEST(FiniteRank, TraceOfRankOneIsTheKernel) {
    SpaceParams P = H(3.0);
    Point o = Point::H(0.2, 1.0), i = Point::H(-0.5, 0.6);
    FiniteRankOp A = FiniteRankOp::rank_one(P, o, i, {0.5, 1.0});
    // tr |e_o><e_i| = <e_o, e_i> = e_o(i)
    cplx want = cplx(0.5, 1.0) * kernel_inner(P, o, i);
    EXPECT_NEAR(std::abs(A.trace() - want), 0.0, 1e-14 * std::abs(want));
}

TEST(FiniteRank, NormalizedProjection) {
    SpaceParams P = H(2.5);
    Point z = Point::H(0.4, 0.3);
    FiniteRankOp Q = FiniteRankOp::normalized_projection(P, z);
    EXPECT_NEAR(std::abs(Q.symbol(z, z) - 1.0), 0.0, 1e-13);
    EXPECT_NEAR(Q.norm_inf(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(Q.trace() - 1.0), 0.0, 1e-13);
    auto spec = Q.hermitian_spectrum();
    ASSERT_EQ(spec.size(), 1u);
    EXPECT_NEAR(spec[0], 1.0, 1e-12);
}

TEST(FiniteRank, AdjointConjugatesTheSymbol) {
    SpaceParams P = SpaceParams::make(4.0, Model::disk);
    FiniteRankOp A = FiniteRankOp::rank_one(P, Point::D({0.1, 0.2}), Point::D({-0.3, 0.1}), {1.0, -2.0});
    Point z = Point::D({0.5, 0.0}), w = Point::D({0.0, -0.4});
    EXPECT_NEAR(std::abs(A.adjoint().symbol(z, w) - std::conj(A.symbol(w, z))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(adjoint_symbol(A.as_symbol())(z, w) - A.adjoint().symbol(z, w)), 0.0, 1e-14);
}

TEST(FiniteRank, SumHasRankTwoAndNormBelowTriangleBound) {
    SpaceParams P = H(3.0);
    FiniteRankOp A = FiniteRankOp::normalized_projection(P, Point::H(0, 1)) +
                     FiniteRankOp::normalized_projection(P, Point::H(3, 1));
    EXPECT_EQ(A.compressed().rows(), 2);
    EXPECT_LE(A.norm_inf(), 2.0 + 1e-12);
    EXPECT_GT(A.norm_inf(), 1.0);
}

TEST(StarProduct, MatchesExactComposition) {
    SpaceParams P = H(3.0);
    FiniteRankOp A = FiniteRankOp::rank_one(P, Point::H(0.1, 1.0), Point::H(-0.4, 1.3), {1.0, 0.3});
    FiniteRankOp B = FiniteRankOp::rank_one(P, Point::H(0.5, 0.8), Point::H(0.0, 1.5), {0.6, -0.2});
    FiniteRankOp AB = compose_exact(A, B);
    Point z = Point::H(0.2, 0.9), w = Point::H(-0.5, 1.4);
    QuadResult q = star_product_at(A.as_symbol(), B.as_symbol(), P, z, w, 1e-10);
    EXPECT_NEAR(std::abs(q.value - AB.symbol(z, w)) / std::abs(AB.symbol(z, w)), 0.0, 1e-8);
}

TEST(StarProduct, IdentityIsAUnit) {
    SpaceParams P = SpaceParams::make(2.5, Model::disk);
    FiniteRankOp B = FiniteRankOp::normalized_projection(P, Point::D({0.2, -0.1}));
    Point z = Point::D({0.1, 0.1}), w = Point::D({-0.2, 0.3});
    QuadResult q = star_product_at(identity_symbol(), B.as_symbol(), P, z, w, 1e-10);
    EXPECT_NEAR(std::abs(q.value - B.symbol(z, w)) / std::abs(B.symbol(z, w)), 0.0, 1e-8);
}

TEST(BerezinTransform, FixesConstantsAndMatchesToeplitzDiagonal) {
    SpaceParams P = H(4.0);
    Function one = [](const Point&) { return cplx(1.0); };
    EXPECT_NEAR(std::abs(br_apply(one, P, Point::H(3.0, 0.2)).value - 1.0), 0.0, 1e-8);
    SymbolFn bump = rho_bump(Point::H(0.4, 0.8), 2);
    Function f = [bump](const Point& z) { return bump(z, z); };
    Point z = Point::H(0.1, 1.0);
    EXPECT_NEAR(std::abs(toeplitz_symbol(f, P, z, z).value - br_apply(f, P, z).value), 0.0, 1e-10);
}

TEST(BerezinTransform, EigenvalueOnPowersOfY) {
    // B_r y^s = lambda y^s with lambda = Gamma(s+r-1) Gamma(r-s) / (Gamma(r) Gamma(r-1)).
    double r = 3.0, s = 0.4;
    SpaceParams P = H(r);
    Function f = [s](const Point& a) { return cplx(std::pow(a.value().imag(), s)); };
    Point z = Point::H(1.0, 2.0);
    double lam = (br_apply(f, P, z, 1e-10).value / std::pow(2.0, s)).real();
    EXPECT_NEAR(lam, br_eigenvalue_closed_form(r, s), 1e-8);
    // Oracle for the closed form: at s = 0 it is 1.
    EXPECT_NEAR(br_eigenvalue_closed_form(r, 0.0), 1.0, 1e-14);
}

TEST(BerezinTransform, InfiniteProductConverges) {
    double r = 4.0, s = 0.3;
    ProductValue a = br_product(r, s * (1 - s), 0, 100000), b = br_product(r, s * (1 - s), 0, 200000);
    EXPECT_LE(std::abs(a.value - b.value), a.tail_bound);
    EXPECT_NEAR(b.value, br_eigenvalue_closed_form(r, s), 2 * b.tail_bound + 1e-12);
}

TEST(Bounds, ThreePointFunction) {
    Point i = Point::H(0, 1);
    EXPECT_NEAR(m_bound(i, i, i), 1.0, 1e-15);
    // Far apart points on the boundary push M towards 2.
    double v = m_bound(Point::H(-1e3, 1.0), Point::H(0, 1e3), Point::H(1e3, 1.0));
    EXPECT_LE(v, 2.0);
    EXPECT_GT(v, 1.9);
}

TEST(Bounds, LambdaNormOfRankOne) {
    EXPECT_TRUE(std::isinf(lambda_norm_rank_one(H(2.0), Point::H(0, 1), Point::H(0, 1))));
    EXPECT_TRUE(std::isfinite(lambda_norm_rank_one(H(3.0), Point::H(0, 1), Point::H(0, 1))));
}

TEST(Bounds, UniformNormChecksForAPositiveOperator) {
    SpaceParams P = H(3.0);
    FiniteRankOp A = FiniteRankOp::normalized_projection(P, Point::H(0, 1)).scaled(0.7);
    std::vector<Point> grid = {Point::H(0, 1), Point::H(0.5, 0.5), Point::H(-1, 2)};
    NormBoundReport rep = uniform_norm_bound_checks(A, grid);
    EXPECT_TRUE(rep.positive);
    EXPECT_TRUE(rep.cor23_ok);
    EXPECT_TRUE(rep.prop15d_ok);
    EXPECT_TRUE(rep.prop27_ok);
}

TEST(Bounds, PositivityCriterion) {
    SpaceParams P = H(2.5);
    FiniteRankOp A = FiniteRankOp::normalized_projection(P, Point::H(0, 1));
    std::vector<Point> pts = {Point::H(0, 1), Point::H(0.3, 0.4), Point::H(-2, 1.5), Point::H(1, 3)};
    EXPECT_TRUE(lemma21_check(A.as_symbol(), 2.5, 1.0, pts).ok);
    // With M below the norm the second matrix fails to be positive.
    EXPECT_FALSE(lemma21_check(A.as_symbol(), 2.5, 0.5, pts).ok);
}

TEST(Embedding, RequiresLargerWeight) {
    FiniteRankOp A = FiniteRankOp::normalized_projection(H(3.0), Point::H(0, 1));
    EXPECT_THROW(embed_j(A, 2.0), PreconditionError);
    EmbeddedOp E = embed_j(A, 5.0);
    std::vector<Point> pts = {Point::H(0, 1), Point::H(0.3, 0.8), Point::H(-0.5, 1.5), Point::H(0.2, 2.0)};
    EXPECT_LE(embedded_norm_sample(E, pts), A.norm_inf() + 1e-9);
}

TEST(Duality, TraceOfTfA) {
    SpaceParams P = H(3.0);
    FiniteRankOp A = FiniteRankOp::rank_one(P, Point::H(0, 1), Point::H(0.3, 1.2), {0.5, 0.5});
    SymbolFn bump = rho_bump(Point::H(0.2, 1.1), 2);
    DualityResult d = trace_duality(A, [bump](const Point& z) { return bump(z, z); });
    EXPECT_NEAR(std::abs(d.lhs - d.rhs) / std::abs(d.lhs), 0.0, 1e-7);
}

TEST(Semiclassical, WirtingerDerivativesOfAPolynomial) {
    // f = z^2 conj z: f_z = 2 z conj z, f_zbar = z^2
    auto f = [](cplx z) { return z * z * std::conj(z); };
    cplx z(0.3, 1.2);
    Wirtinger w = wirtinger_fd(f, z);
    EXPECT_NEAR(std::abs(w.dz - 2.0 * z * std::conj(z)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(w.dzbar - z * z), 0.0, 1e-9);
}

TEST(Semiclassical, ErrorsShrinkWithR) {
    SymbolFn f = rho_bump(Point::H(0, 1), 2), g = rho_bump(Point::H(0.4, 1.2), 3);
    auto rows = semiclassical_limit(f, g, {8.0, 16.0}, {Point::H(0, 1), Point::H(0.3, 1.1)});
    EXPECT_LT(rows[1].E0, rows[0].E0);
    EXPECT_LT(rows[1].E1, rows[0].E1);
    EXPECT_NEAR(rows[1].commutator_ratio, semiclassical_bracket_constant, 0.5);
    EXPECT_NEAR(std::abs(poisson_bracket(f, f, Point::H(0.2, 1.0))), 0.0, 1e-12);
}
