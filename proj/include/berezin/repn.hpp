#ifndef BEREZIN_REPN_HPP
#define BEREZIN_REPN_HPP

#include <cmath>
#include <map>

#include "bergman.hpp"
#include "groups.hpp"

namespace berezin {

struct RepnContext {
    SpaceParams params;

    static RepnContext make(double r, Model m) { return {SpaceParams::make(r, m)}; }
};

// (pi_r(g) f)(z) = j(g^-1, z)^-r f(g^-1 z); this is the unitary normalization.
// The power uses the branch of log j that is continuous in z.
inline cplx pi_act(const RepnContext& ctx, const GroupElement& g, const Function& f, const Point& z) {
    if (g.model != ctx.params.model) throw ModelMismatch("pi_act: group element and space use different models");
    GroupElement gi = g.inverse();
    return std::exp(-ctx.params.r * log_automorphy(gi, z)) * f(mobius_act(gi, z));
}

inline Function pi_act(const RepnContext& ctx, const GroupElement& g, Function f) {
    return [ctx, g, f](const Point& z) { return pi_act(ctx, g, f, z); };
}

// |<pi(g) e_z, e_w>| against the two candidate transport laws
// |j(g, z)|^-r |<e_{gz}, e_w>| (unitary) and |j(g^-1, z)|^r |<e_{g^-1 z}, e_w>|.
struct CovarianceReport {
    double max_rel_err_unitary;
    double max_rel_err_inverse_reading;
};

inline CovarianceReport eval_covariance_check(const RepnContext& ctx, const GroupElement& g, const Point& z,
                                              const std::vector<Point>& ws) {
    const SpaceParams& P = ctx.params;
    Function ez = [P, z](const Point& p) { return eval_vector(P, z, p); };
    GroupElement gi = g.inverse();
    CovarianceReport rep{0, 0};
    for (auto& w : ws) {
        double lhs = std::abs(pi_act(ctx, g, ez, w));
        double a = std::pow(std::abs(automorphy_j(g, z)), -P.r) * std::abs(kernel_inner(P, mobius_act(g, z), w));
        double b = std::pow(std::abs(automorphy_j(gi, z)), P.r) * std::abs(kernel_inner(P, mobius_act(gi, z), w));
        rep.max_rel_err_unitary = std::max(rep.max_rel_err_unitary, std::abs(lhs - a) / lhs);
        rep.max_rel_err_inverse_reading = std::max(rep.max_rel_err_inverse_reading, std::abs(lhs - b) / lhs);
    }
    return rep;
}

// <pi_r(g) 1, 1> on the disk by quadrature.
inline QuadResult coefficient(const RepnContext& ctx, const GroupElement& g, double tol = 1e-10) {
    if (ctx.params.model != Model::disk || g.model != Model::disk)
        throw ModelMismatch("coefficient is defined on the disk model");
    Function one = [](const Point&) { return cplx(1.0); };
    Function pg = pi_act(ctx, g, one);
    return integrate2d(pg, Domain::whole(Model::disk), Measure{ctx.params.r}, {tol});
}

// The same coefficient from the mean value property: a^-r pi / (r - 1).
inline cplx coefficient_closed_form(double r, const GroupElement& g) {
    return cpow(g.a, -r) * pi / (r - 1.0);
}

// Haar radius leaving a relative tail below tol / 10 in int |coef|^2 dg,
// whose integrand behaves like sech^{2(r-1)}(sigma/2).
inline double haar_truncation_radius(double r, double tol) {
    return 2.0 * std::acosh(std::pow(0.1 * tol, -1.0 / (2.0 * (r - 1.0))));
}

// ||v||^4 / int |<pi(g) v, v>|^2 dg for a vector given by its closed-form
// coefficient.
template <class Coef>
double formal_dimension_of(const HaarRule& rule, double norm2, Coef&& coef) {
    double acc = 0.0;
    rule.for_each([&](const GroupElement& g, double wt) { acc += wt * std::norm(coef(g)); });
    return norm2 * norm2 / acc;
}

struct FormalDimension {
    double value;
    double radius;
    std::size_t nodes;
};

inline FormalDimension formal_dimension(double r, const HaarChart& chart, double tol = 1e-4) {
    double R = haar_truncation_radius(r, tol);
    HaarRule rule = haar_quadrature(chart, R, 0.1 * tol);
    double n2 = pi / (r - 1.0);
    double d = formal_dimension_of(rule, n2, [r](const GroupElement& g) { return coefficient_closed_form(r, g); });
    return {d, R, rule.size()};
}

// Fix kappa so that the r = 4 formal dimension is 3 / pi.
inline HaarChart calibrate_haar_kappa(double tol = 1e-6, double r = 4.0) {
    HaarChart unit;
    unit.kappa = 1.0;
    double d1 = formal_dimension(r, unit, tol).value;
    HaarChart out;
    out.kappa = d1 / ((r - 1.0) / pi);
    return out;
}

// Formal dimension computed with v = e_z instead of the constant function.
inline double formal_dimension_eval_vector(double r, const HaarChart& chart, const Point& z, double tol = 1e-4) {
    RepnContext ctx = RepnContext::make(r, Model::disk);
    const SpaceParams& P = ctx.params;
    // The coefficient peaks where g moves z little, so widen by twice d(0, z).
    double R = haar_truncation_radius(r, tol) + 4.0 * std::atanh(std::abs(z.value()));
    HaarRule rule = haar_quadrature(chart, R, 0.1 * tol);
    double n2 = eval_norm2(P, z);
    auto coef = [&](const GroupElement& g) {
        GroupElement gi = g.inverse();
        return std::exp(-r * log_automorphy(gi, z)) * eval_vector(P, z, mobius_act(gi, z));
    };
    return formal_dimension_of(rule, n2, coef);
}

}  // namespace berezin

#endif
