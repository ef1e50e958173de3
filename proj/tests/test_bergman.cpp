#include <berezin/bergman.hpp>

#include <gtest/gtest.h>

using namespace berezin;

TEST(Normalization, ClosedFormsMatchQuadratureOracle) {
    for (Model m : {Model::half_plane, Model::disk})
        for (double r : {2.0, 3.5, 6.0}) {
            cplx q = c_from_reproducing_oracle(r, m);
            EXPECT_NEAR(std::abs(q - closed_form_c(r, m)) / closed_form_c(r, m), 0.0, 1e-8);
        }
    EXPECT_NEAR(closed_form_c(3.0, Model::disk), 2.0 / pi, 1e-15);
    EXPECT_NEAR(closed_form_c(3.0, Model::half_plane), 1.0 / (2.0 * pi), 1e-15);
}

TEST(Kernel, NormSquaredAndHermitianSymmetry) {
    SpaceParams P = SpaceParams::make(2.5, Model::half_plane);
    Point z = Point::H(0.3, 0.7), w = Point::H(-1.0, 2.0);
    EXPECT_NEAR(std::abs(kernel_inner(P, z, z) - eval_norm2(P, z)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(kernel_inner(P, z, w) - std::conj(kernel_inner(P, w, z))), 0.0, 1e-14);
}

TEST(Kernel, ReproducesByQuadrature) {
    SpaceParams P = SpaceParams::make(3.0, Model::half_plane);
    Point w = Point::H(0.5, 1.5), z = Point::H(-0.2, 0.8);
    Function ew = [&](const Point& p) { return eval_vector(P, w, p); };
    QuadResult q = project(P, ew, z, 1e-11);
    EXPECT_NEAR(std::abs(q.value - ew(z)) / std::abs(ew(z)), 0.0, 1e-8);
}

TEST(Kernel, InnerProductMatchesKernel) {
    SpaceParams P = SpaceParams::make(4.0, Model::disk);
    Point a = Point::D({0.2, 0.3}), b = Point::D({-0.4, 0.1});
    Function ea = [&](const Point& p) { return eval_vector(P, a, p); };
    Function eb = [&](const Point& p) { return eval_vector(P, b, p); };
    QuadResult q = inner_product(P, ea, eb, Point::D(0.0), 1e-11);
    EXPECT_NEAR(std::abs(q.value - kernel_inner(P, a, b)) / std::abs(kernel_inner(P, a, b)), 0.0, 1e-8);
}

TEST(Gram, PositiveSemidefinite) {
    SpaceParams P = SpaceParams::make(2.0, Model::half_plane);
    std::vector<Point> pts;
    for (int k = 0; k < 15; ++k) pts.push_back(Point::H(0.3 * k - 2.0, 0.2 + 0.1 * k));
    PsdReport rep = psd_report(kernel_gram(pts, P));
    EXPECT_TRUE(rep.psd);
}

TEST(Gram, IndefiniteMatrixIsRejected) {
    CMatrix M(2, 2);
    M << 1.0, 2.0, 2.0, 1.0;
    EXPECT_FALSE(psd_report(M).psd);
}

TEST(Schur, PowersArePositiveAndNegativeExponentThrows) {
    std::vector<Point> pts = {Point::D(0.0), Point::D({0.5, 0.2}), Point::D({-0.3, 0.7}), Point::D({0.1, -0.8})};
    for (double s : {0.5, 1.0, 2.7}) EXPECT_TRUE(schur_power_psd(pts, s));
    EXPECT_THROW(schur_power_matrix(pts, -1.0), PreconditionError);
}
