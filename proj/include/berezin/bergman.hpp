#ifndef BEREZIN_BERGMAN_HPP
#define BEREZIN_BERGMAN_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "quadrature.hpp"

namespace berezin {

using CMatrix = Eigen::MatrixXcd;

inline double closed_form_c(double r, Model model) {
    return model == Model::disk ? (r - 1.0) / pi : (r - 1.0) / (4.0 * pi);
}

// Recovers c_r from the reproducing property <e_w, e_z> = e_w(z): with
// I = int pf(., w)^-r conj(pf(., z)^-r) d nu_r we get c_r = pf(z, w)^-r / I.
inline cplx c_from_reproducing_oracle(double r, Model model, double tol = 1e-11) {
    Point z = model == Model::disk ? Point::D({0.2, -0.3}) : Point::H(0.4, 1.3);
    Point w = model == Model::disk ? Point::D({-0.5, 0.1}) : Point::H(-0.7, 0.6);
    auto f = [&](const Point& p) { return cpow(pair_factor(p, w), -r) * std::conj(cpow(pair_factor(p, z), -r)); };
    QuadResult q = integrate2d(f, Domain::ball(geodesic_midpoint(z, w)), Measure{r}, {tol});
    return cpow(pair_factor(z, w), -r) / q.value;
}

// c_r, confirmed once per (r, model) against the quadrature oracle.
inline double normalization_c(double r, Model model) {
    if (!(r > 1.0)) throw PreconditionError("H_r is nonzero only for r > 1");
    static std::mutex mu;
    static std::map<std::pair<double, int>, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(r, static_cast<int>(model));
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    double closed = closed_form_c(r, model);
    cplx oracle = c_from_reproducing_oracle(r, model);
    if (std::abs(oracle - closed) > 1e-6 * closed)
        throw ConventionError("normalization constant disagrees with the reproducing-property oracle");
    cache[key] = closed;
    return closed;
}

struct SpaceParams {
    double r;
    Model model;
    double c;

    static SpaceParams make(double r, Model model) { return {r, model, normalization_c(r, model)}; }
};

// e_z(zeta) = c_r pf(zeta, z)^-r.
inline cplx eval_vector(const SpaceParams& P, const Point& z, const Point& zeta) {
    return P.c * cpow(pair_factor(zeta, z), -P.r);
}

// <e_w, e_z> = e_w(z).
inline cplx kernel_inner(const SpaceParams& P, const Point& w, const Point& z) { return eval_vector(P, w, z); }

inline double eval_norm2(const SpaceParams& P, const Point& z) { return P.c * std::pow(z.height(), -P.r); }

// <f, g> in H_r by quadrature centred at `center`.
inline QuadResult inner_product(const SpaceParams& P, const Function& f, const Function& g, const Point& center,
                                double tol = 1e-10) {
    auto h = [&](const Point& p) { return f(p) * std::conj(g(p)); };
    return integrate2d(h, Domain::ball(center), Measure{P.r}, {tol});
}

// Gram matrix [<e_{z_j}, e_{z_i}>]_{ij}.
inline CMatrix kernel_gram(const std::vector<Point>& pts, const SpaceParams& P) {
    std::size_t n = pts.size();
    CMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = kernel_inner(P, pts[j], pts[i]);
    return M;
}

struct PsdReport {
    double min_eig;
    double norm;
    bool psd;
};

inline PsdReport psd_report(const CMatrix& M, double rel = 1e-10) {
    CMatrix H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues();
    double lo = ev.minCoeff();
    double nrm = std::max(std::abs(lo), std::abs(ev.maxCoeff()));
    return {lo, nrm, lo >= -rel * nrm};
}

// The matrix [pf(z_i, z_j)^-(exponent)].
inline CMatrix schur_power_matrix(const std::vector<Point>& pts, double exponent) {
    if (exponent < 0.0) throw PreconditionError("schur power needs s - r >= 0");
    std::size_t n = pts.size();
    CMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = cpow(pair_factor(pts[i], pts[j]), -exponent);
    return M;
}

inline bool schur_power_psd(const std::vector<Point>& pts, double exponent) {
    return psd_report(schur_power_matrix(pts, exponent)).psd;
}

// (P_r f)(z) = <f, e_z> by quadrature.
inline QuadResult project(const SpaceParams& P, const Function& f, const Point& z, double tol = 1e-10) {
    auto h = [&](const Point& p) { return f(p) * std::conj(eval_vector(P, z, p)); };
    return integrate2d(h, Domain::ball(z), Measure{P.r}, {tol});
}

}  // namespace berezin

#endif
