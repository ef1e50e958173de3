#include <berezin/quadrature.hpp>

#include <gtest/gtest.h>

using namespace berezin;

TEST(Integrate2d, MassOfNuROnTheDisk) {
    // int (1 - |z|^2)^{r-2} dx dy = pi / (r - 1)
    for (double r : {2.0, 2.5, 4.0}) {
        auto one = [](const Point&) { return cplx(1.0); };
        QuadResult q = integrate2d(one, Domain::whole(Model::disk), Measure{r}, {1e-11});
        EXPECT_NEAR(q.value.real(), pi / (r - 1.0), 1e-9);
    }
}

TEST(Integrate2d, PoissonTypeIntegralOnTheHalfPlane) {
    // int y^{r-2} |z + i|^{-2r} dx dy = 4 pi 2^{-r} / (r - 1) ... checked against the
    // reproducing formula c_r^-1 = int |pf(z, i)|^{-2r} y^{r-2}, c_r = (r - 1)/(4 pi).
    double r = 3.0;
    auto f = [r](const Point& p) { return std::pow(std::abs((p.value() + I) / (2.0 * I)), -2.0 * r); };
    QuadResult q = integrate2d(f, Domain::ball(Point::H(0, 1)), Measure{r}, {1e-11});
    EXPECT_NEAR(q.value.real(), 4.0 * pi / (r - 1.0), 1e-8);
    EXPECT_GT(q.evaluations, 0);
}

TEST(Integrate2d, RectangleMatchesCalculus) {
    auto f = [](const Point& p) { return cplx(p.value().real() * p.value().real(), 0.0); };
    // int_0^1 int_1^2 x^2 y^{-2} dy dx = 1/3 * 1/2
    QuadResult q = integrate2d(f, Domain::rect(0, 1, 1, 2), Measure{0.0}, {1e-12});
    EXPECT_NEAR(q.value.real(), 1.0 / 6.0, 1e-12);
}

TEST(Integrate2d, FundamentalDomainArea) {
    auto one = [](const Point&) { return cplx(1.0); };
    double Y = 50.0;
    QuadResult q = integrate2d(one, Domain::fundamental_domain(Y, TailClass::power_law(1.0, 2.0)), Measure{0.0},
                               {1e-11});
    EXPECT_NEAR(q.value.real(), pi / 3.0 - 1.0 / Y, 1e-9);
}

TEST(Integrate2d, BudgetExhaustionThrows) {
    auto rough = [](const Point& p) { return cplx(std::abs(std::sin(40.0 * p.value().real()))); };
    EXPECT_THROW(integrate2d(rough, Domain::rect(0, 10, 1, 2), Measure{0.0}, {1e-14, 1e-300, 2000}), Error);
}

TEST(TailBound, PowerAndExponential) {
    EXPECT_NEAR(cusp_tail_bound(TailClass::power_law(1.0, 2.0), 10.0), 0.1, 1e-15);
    EXPECT_GT(cusp_tail_bound(TailClass::exp_decay(1.0, 2.0), 1.0), cusp_tail_bound(TailClass::exp_decay(1.0, 2.0), 2.0));
}

TEST(IntegrateIterated, ProductOfGaussians) {
    // int int exp(-(x1^2 + x2^2)) over a rectangle in each variable.
    IteratedSpec spec{{Domain::rect(-4, 4, 1, 2), Domain::rect(-4, 4, 1, 2)},
                      {Measure{2.0}, Measure{2.0}},
                      {1e-9, 1e-11}};
    auto f = [](const std::vector<Point>& v) {
        return cplx(std::exp(-std::norm(v[0].value().real())) * std::exp(-std::norm(v[1].value().real())));
    };
    QuadResult q = integrate_iterated(f, spec);
    double one = std::sqrt(pi) * std::erf(4.0);
    EXPECT_NEAR(q.value.real(), one * one, 1e-8);
}
