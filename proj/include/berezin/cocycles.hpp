#ifndef BEREZIN_COCYCLES_HPP
#define BEREZIN_COCYCLES_HPP

#include <cmath>
#include <optional>

#include "modular.hpp"
#include "symbols.hpp"

namespace berezin {

// phi(z, conj zeta) = i arg pf(z, zeta); |arg| < pi/2 since Re pf > 0.
inline cplx phi(const Point& z, const Point& zeta) { return I * arg_branch(pair_factor(z, zeta)); }

enum class ThetaConvention { full, halved };

// theta = phi(z, conj zeta) + phi(zeta, conj eta) + phi(eta, conj z), optionally halved.
inline cplx theta(const Point& z, const Point& eta, const Point& zeta, ThetaConvention conv = ThetaConvention::full) {
    cplx v = phi(z, zeta) + phi(zeta, eta) + phi(eta, z);
    return conv == ThetaConvention::halved ? 0.5 * v : v;
}

// m = ln h(eta) + ln pf(z, zeta) - ln pf(z, eta) - ln pf(eta, zeta).
inline cplx m_weight(const Point& z, const Point& eta, const Point& zeta) {
    return std::log(eta.height()) + std::log(pair_factor(z, zeta)) - std::log(pair_factor(z, eta)) -
           std::log(pair_factor(eta, zeta));
}

// l(z, zeta) = ln d(z, conj zeta) = (ln h(z) + ln h(zeta)) / 2 - ln pf(z, zeta).
inline cplx ell(const Point& z, const Point& zeta) {
    return 0.5 * (std::log(z.height()) + std::log(zeta.height())) - std::log(pair_factor(z, zeta));
}

struct MLValues {
    cplx m;
    cplx l_z_eta, l_eta_zeta, l_z_zeta;
    double identity_residual;  // |m - (l(z,eta) + l(eta,zeta) - l(z,zeta))|
};

inline MLValues m_and_l(const Point& z, const Point& eta, const Point& zeta) {
    MLValues v{m_weight(z, eta, zeta), ell(z, eta), ell(eta, zeta), ell(z, zeta), 0.0};
    v.identity_residual = std::abs(v.m - (v.l_z_eta + v.l_eta_zeta - v.l_z_zeta));
    return v;
}

// Continuous arg Delta, the imaginary part of the continuous ln Delta.
inline double arg_delta(const Point& z) { return ln_delta(z).imag(); }

// tilde phi(z, zeta) = i [arg pf(z, zeta) + (arg Delta(z) - arg Delta(zeta)) / 12].
inline cplx phi_tilde(const Point& z, const Point& zeta) {
    return I * (arg_branch(pair_factor(z, zeta)) + (arg_delta(z) - arg_delta(zeta)) / 12.0);
}

struct CoboundaryReport {
    double telescoping_residual;  // max |theta - sum of tilde phi|
    double invariance_defect;     // max distance of tilde phi(gz, g zeta) - tilde phi(z, zeta) to 2 pi i Z
};

inline CoboundaryReport coboundary_check(const std::vector<std::array<Point, 3>>& triples,
                                         const std::vector<std::tuple<ModularElement, Point, Point>>& moves) {
    CoboundaryReport rep{0, 0};
    for (auto& t : triples) {
        cplx lhs = theta(t[0], t[1], t[2]);
        cplx rhs = phi_tilde(t[0], t[2]) + phi_tilde(t[2], t[1]) + phi_tilde(t[1], t[0]);
        rep.telescoping_residual = std::max(rep.telescoping_residual, std::abs(lhs - rhs));
    }
    for (auto& [g, z, zeta] : moves) {
        double d = (phi_tilde(mobius_act(g, z), mobius_act(g, zeta)) - phi_tilde(z, zeta)).imag();
        double k = std::round(d / (2.0 * pi));
        rep.invariance_defect = std::max(rep.invariance_defect, std::abs(d - 2.0 * pi * k));
    }
    return rep;
}

// c'_t / c_t from the normalization by a Richardson-corrected central difference.
struct LogDerivative {
    double value;
    double richardson_gap;
    double closed_form;  // 1 / (t - 1)
};

inline LogDerivative log_derivative_c(double t, Model m = Model::half_plane, double h = 1e-5) {
    auto lc = [m](double s) { return std::log(normalization_c(s, m)); };
    double d1 = (lc(t + h) - lc(t - h)) / (2.0 * h);
    double d2 = (lc(t + 0.5 * h) - lc(t - 0.5 * h)) / h;
    double d = (4.0 * d2 - d1) / 3.0;
    return {d, std::abs(d - d2), 1.0 / (t - 1.0)};
}

struct CocycleOptions {
    double tol2 = 1e-9;  // two-dimensional factor integrals
    double outer_tol = 1e-6;
    double inner_tol = 1e-8;
    // Factor integrands decay like exp(-t sigma / 2); beyond this radius they
    // are negligible and arg Delta would need huge reduction matrices.
    double sigma_max = 24.0;
};

struct CocycleContext {
    SpaceParams params;  // H_t
    double dlogc;        // c'_t / c_t
    CocycleOptions opt;

    static CocycleContext make(double t, CocycleOptions opt = {}) {
        LogDerivative ld = log_derivative_c(t);
        if (std::abs(ld.value - ld.closed_form) > 1e-6 * ld.closed_form)
            throw ConventionError("c'_t / c_t disagrees with 1 / (t - 1)");
        return {SpaceParams::make(t, Model::half_plane), ld.value, opt};
    }
};

namespace detail {

// G(x) = pf(alpha, x)^-t pf(x, beta)^-t, the one-variable factor of a
// product of rank-one kernels.
struct Factor {
    Point alpha, beta;

    cplx operator()(const Point& x, double t) const {
        return cpow(pair_factor(alpha, x), -t) * cpow(pair_factor(x, beta), -t);
    }
    Point center() const { return geodesic_midpoint(alpha, beta); }
};

// int G d nu_t = pf(alpha, beta)^-t / c_t.
inline cplx factor_total(const Factor& G, const SpaceParams& P) {
    return cpow(pair_factor(G.alpha, G.beta), -P.r) / P.c;
}

inline QuadResult factor_single(const Factor& G, const SpaceParams& P, const Function& S, const CocycleOptions& o) {
    auto f = [&](const Point& x) { return G(x, P.r) * S(x); };
    return integrate2d(f, Domain::coarse_ball(G.center(), o.sigma_max), Measure{P.r}, {o.tol2});
}

inline QuadResult factor_pair(const Factor& G1, const Factor& G2, const SpaceParams& P,
                              const std::function<cplx(const Point&, const Point&)>& K, const CocycleOptions& o) {
    auto f = [&](const std::vector<Point>& v) { return G1(v[0], P.r) * G2(v[1], P.r) * K(v[0], v[1]); };
    IteratedSpec spec{{Domain::coarse_ball(G1.center(), o.sigma_max), Domain::coarse_ball(G2.center(), o.sigma_max)},
                      {Measure{P.r}, Measure{P.r}},
                      {o.outer_tol, o.inner_tol}};
    return integrate_iterated(f, spec);
}

}  // namespace detail

// Accumulates sum over term pairs of c^3 coef int int A_t(z, eta) B_t(eta, z) W.
// W is given as single-variable and pair pieces.
struct PairWeight {
    std::function<cplx(const Point&)> single_z, single_eta;
    std::function<cplx(const Point&, const Point&)> pair;
};

struct TripleWeight {
    std::function<cplx(const Point&)> single_z, single_eta, single_zeta;
    std::function<cplx(const Point&, const Point&)> pair_z_eta, pair_eta_zeta, pair_z_zeta;
};

inline void require_same(const FiniteRankOp& A, const FiniteRankOp& B) {
    if (A.params.r != B.params.r || A.params.model != B.params.model)
        throw PreconditionError("cocycle functionals need operators on one space");
    if (A.params.model != Model::half_plane) throw ModelMismatch("cocycle functionals use the half-plane");
}

// c^3 sum coef_a coef_b int int G_z G_eta W d nu_t d nu_t, i.e.
// c int int A_t(z, eta) B_t(eta, z) W.
inline QuadResult pair_integral(const FiniteRankOp& A, const FiniteRankOp& B, const PairWeight& W,
                                const CocycleOptions& o) {
    require_same(A, B);
    const SpaceParams& P = A.params;
    cplx acc = 0;
    double err = 0;
    long long ev = 0;
    for (auto& a : A.terms)
        for (auto& b : B.terms) {
            detail::Factor Gz{b.in, a.out}, Ge{a.in, b.out};
            cplx pre = std::pow(P.c, 3) * a.coef * b.coef;
            cplx tz = detail::factor_total(Gz, P), te = detail::factor_total(Ge, P);
            cplx v = 0;
            double e = 0;
            if (W.single_z) {
                QuadResult q = detail::factor_single(Gz, P, W.single_z, o);
                v += q.value * te;
                e += q.error_estimate * std::abs(te);
                ev += q.evaluations;
            }
            if (W.single_eta) {
                QuadResult q = detail::factor_single(Ge, P, W.single_eta, o);
                v += tz * q.value;
                e += q.error_estimate * std::abs(tz);
                ev += q.evaluations;
            }
            if (W.pair) {
                QuadResult q = detail::factor_pair(Gz, Ge, P, W.pair, o);
                v += q.value;
                e += q.error_estimate;
                ev += q.evaluations;
            }
            acc += pre * v;
            err += std::abs(pre) * e;
        }
    return {acc, err, ev};
}

// c^2 int int int A_t(z, eta) B_t(eta, zeta) C_t(zeta, z) W.
inline QuadResult triple_integral(const FiniteRankOp& A, const FiniteRankOp& B, const FiniteRankOp& C,
                                  const TripleWeight& W, const CocycleOptions& o) {
    require_same(A, B);
    require_same(B, C);
    const SpaceParams& P = A.params;
    cplx acc = 0;
    double err = 0;
    long long ev = 0;
    for (auto& a : A.terms)
        for (auto& b : B.terms)
            for (auto& c : C.terms) {
                detail::Factor Gz{c.in, a.out}, Ge{a.in, b.out}, Gs{b.in, c.out};
                cplx pre = std::pow(P.c, 5) * a.coef * b.coef * c.coef;
                cplx tz = detail::factor_total(Gz, P), te = detail::factor_total(Ge, P), ts = detail::factor_total(Gs, P);
                cplx v = 0;
                double e = 0;
                auto single = [&](const detail::Factor& G, const Function& S, cplx rest) {
                    QuadResult q = detail::factor_single(G, P, S, o);
                    v += q.value * rest;
                    e += q.error_estimate * std::abs(rest);
                    ev += q.evaluations;
                };
                auto pair = [&](const detail::Factor& G1, const detail::Factor& G2,
                                const std::function<cplx(const Point&, const Point&)>& K, cplx rest) {
                    QuadResult q = detail::factor_pair(G1, G2, P, K, o);
                    v += q.value * rest;
                    e += q.error_estimate * std::abs(rest);
                    ev += q.evaluations;
                };
                if (W.single_z) single(Gz, W.single_z, te * ts);
                if (W.single_eta) single(Ge, W.single_eta, tz * ts);
                if (W.single_zeta) single(Gs, W.single_zeta, tz * te);
                if (W.pair_z_eta) pair(Gz, Ge, W.pair_z_eta, ts);
                if (W.pair_eta_zeta) pair(Ge, Gs, W.pair_eta_zeta, tz);
                if (W.pair_z_zeta) pair(Gz, Gs, W.pair_z_zeta, te);
                acc += pre * v;
                err += std::abs(pre) * e;
            }
    return {acc, err, ev};
}

// Normalized trace tau(A) = int A(z, conj z) d nu_0 = tr(A) / c_t.
inline cplx tau(const FiniteRankOp& A) { return A.trace() / A.params.c; }

inline cplx tau(const FiniteRankOp& A, const FiniteRankOp& B) { return tau(compose_exact(A, B)); }

inline cplx tau(const FiniteRankOp& A, const FiniteRankOp& B, const FiniteRankOp& C) {
    return tau(compose_exact(compose_exact(A, B), C));
}

namespace detail {
inline cplx log_height(const Point& x) { return std::log(x.height()); }
}  // namespace detail

// phi_t(A, B) = (c'/c) tau(A * B) + c int int A_t B_t ln |d(z, conj eta)|^2 d nu_t d nu_t.
inline QuadResult phi_t(const FiniteRankOp& A, const FiniteRankOp& B, const CocycleContext& ctx) {
    PairWeight W{detail::log_height, detail::log_height,
                 [](const Point& z, const Point& eta) { return cplx(-std::log(std::norm(pair_factor(z, eta)))); }};
    QuadResult q = pair_integral(A, B, W, ctx.opt);
    return {ctx.dlogc * tau(A, B) + q.value, q.error_estimate, q.evaluations};
}

// s -> tau(A *_s B) = c_s int int A B |d|^{2s} d nu_0 d nu_0 for symbols fixed on H_t.
inline QuadResult tau_deformed(const FiniteRankOp& A, const FiniteRankOp& B, double s, const CocycleOptions& o) {
    const SpaceParams& P = A.params;
    double eps = s - P.r;
    PairWeight W{nullptr, nullptr,
                 [eps](const Point& z, const Point& eta) { return cplx(std::pow(rho(z, eta), eps)); }};
    QuadResult q = pair_integral(A, B, W, o);
    // pair_integral returns c_t int int A_t B_t (...); rescale c_t to c_s.
    double ratio = normalization_c(s, P.model) / P.c;
    return {ratio * q.value, ratio * q.error_estimate, q.evaluations};
}

struct FiniteDifference {
    cplx value;
    cplx coarse;  // plain central difference at step h
    long long evaluations;
};

// Central difference of tau(A *_s B) at s = t with one Richardson step.
inline FiniteDifference phi_t_fd(const FiniteRankOp& A, const FiniteRankOp& B, double h = 1e-3,
                                 CocycleOptions o = {1e-10, 1e-6, 1e-8}) {
    double t = A.params.r;
    long long ev = 0;
    auto T = [&](double s) {
        QuadResult q = tau_deformed(A, B, s, o);
        ev += q.evaluations;
        return q.value;
    };
    cplx d1 = (T(t + h) - T(t - h)) / (2.0 * h);
    cplx d2 = (T(t + 0.5 * h) - T(t - 0.5 * h)) / h;
    return {(4.0 * d2 - d1) / 3.0, d1, ev};
}

inline TripleWeight m_triple() {
    TripleWeight W;
    W.single_eta = detail::log_height;
    W.pair_z_zeta = [](const Point& z, const Point& zeta) { return std::log(pair_factor(z, zeta)); };
    W.pair_z_eta = [](const Point& z, const Point& eta) { return -std::log(pair_factor(z, eta)); };
    W.pair_eta_zeta = [](const Point& eta, const Point& zeta) { return -std::log(pair_factor(eta, zeta)); };
    return W;
}

// mu_t(C, (A, B)) = (c'/c) tau(A * B * C) + c^2 int int int A_t B_t C_t m.
inline QuadResult mu_t(const FiniteRankOp& C, const FiniteRankOp& A, const FiniteRankOp& B, const CocycleContext& ctx) {
    QuadResult q = triple_integral(A, B, C, m_triple(), ctx.opt);
    return {ctx.dlogc * tau(A, B, C) + q.value, q.error_estimate, q.evaluations};
}

// theta_t(A, B, C) = d/ds tau(A *_s B *_s C) = 2 (c'/c) tau + c^2 int int int A_t B_t C_t L,
// L = sum ln h - ln pf(z, eta) - ln pf(eta, zeta) - ln pf(zeta, z).
inline QuadResult theta_t(const FiniteRankOp& A, const FiniteRankOp& B, const FiniteRankOp& C,
                          const CocycleContext& ctx) {
    TripleWeight W;
    W.single_z = W.single_eta = W.single_zeta = detail::log_height;
    W.pair_z_eta = [](const Point& z, const Point& eta) { return -std::log(pair_factor(z, eta)); };
    W.pair_eta_zeta = [](const Point& eta, const Point& zeta) { return -std::log(pair_factor(eta, zeta)); };
    W.pair_z_zeta = [](const Point& z, const Point& zeta) { return -std::log(pair_factor(zeta, z)); };
    QuadResult q = triple_integral(A, B, C, W, ctx.opt);
    return {2.0 * ctx.dlogc * tau(A, B, C) + q.value, q.error_estimate, q.evaluations};
}

struct Hochschild54 {
    QuadResult theta, mu, phi;
    double residual;  // |theta - mu - phi|
};

// theta_t(a, b, c) = mu_t(c, (a, b)) + phi_t(a * b, c), three separate pipelines.
inline Hochschild54 hochschild_check(const FiniteRankOp& A, const FiniteRankOp& B, const FiniteRankOp& C,
                                     const CocycleContext& ctx) {
    Hochschild54 h{theta_t(A, B, C, ctx), mu_t(C, A, B, ctx), phi_t(compose_exact(A, B), C, ctx), 0.0};
    h.residual = std::abs(h.theta.value - h.mu.value - h.phi.value);
    return h;
}

// psi_t = (1/2)(c'/c) tau(A * B * C) + c^2 int int int theta A_t B_t C_t,
// theta in the chosen convention.
inline QuadResult psi_t(const FiniteRankOp& A, const FiniteRankOp& B, const FiniteRankOp& C, const CocycleContext& ctx,
                        ThetaConvention conv = ThetaConvention::full) {
    double k = conv == ThetaConvention::halved ? 0.5 : 1.0;
    TripleWeight W;
    // theta(z, eta, zeta) = i [arg pf(z, zeta) + arg pf(zeta, eta) + arg pf(eta, z)]
    W.pair_z_zeta = [k](const Point& z, const Point& zeta) { return k * I * arg_branch(pair_factor(z, zeta)); };
    W.pair_eta_zeta = [k](const Point& eta, const Point& zeta) { return k * I * arg_branch(pair_factor(zeta, eta)); };
    W.pair_z_eta = [k](const Point& z, const Point& eta) { return k * I * arg_branch(pair_factor(eta, z)); };
    QuadResult q = triple_integral(A, B, C, W, ctx.opt);
    return {0.5 * ctx.dlogc * tau(A, B, C) + q.value, q.error_estimate, q.evaluations};
}

// chi_t(X, Y) = c int int X_t(z, eta) Y_t(eta, z) d(z, eta) d nu_t d nu_t with
// d(z, eta) = tilde phi(z, eta), over H x H (trivial group).
inline QuadResult chi_t(const FiniteRankOp& X, const FiniteRankOp& Y, const CocycleContext& ctx) {
    PairWeight W{[](const Point& z) { return I * arg_delta(z) / 12.0; },
                 [](const Point& eta) { return -I * arg_delta(eta) / 12.0; },
                 [](const Point& z, const Point& eta) { return I * arg_branch(pair_factor(z, eta)); }};
    return pair_integral(X, Y, W, ctx.opt);
}

// General symbols are accepted only when the diagonal decays toward the
// boundary; a non-decaying symbol (the identity) lies outside the form domain.
inline void require_form_domain(const SymbolFn& X) {
    double near = std::abs(X(Point::H(0.0, 1.0), Point::H(0.0, 1.0)));
    for (double y : {1e3, 1e-3}) {
        double far = std::abs(X(Point::H(0.0, y), Point::H(0.0, y)));
        if (!(far < 1e-3 * std::max(near, 1e-300)) && far > 1e-12)
            throw PreconditionError("chi_t: symbol does not decay at the boundary; the form diverges");
    }
}

inline QuadResult chi_t(const SymbolFn& X, const SymbolFn& Y, const SpaceParams& P, double tol = 1e-5) {
    require_form_domain(X);
    require_form_domain(Y);
    auto f = [&](const std::vector<Point>& v) {
        const Point& z = v[0];
        const Point& eta = v[1];
        return P.c * X(z, eta) * Y(eta, z) * std::pow(rho(z, eta), P.r) * phi_tilde(z, eta);
    };
    IteratedSpec spec{{Domain::whole(Model::half_plane), Domain::following(Model::half_plane, 20.0)},
                      {Measure{0.0}, Measure{0.0}},
                      {tol, tol * 1e-2}};
    return integrate_iterated(f, spec);
}

struct Identity66 {
    QuadResult psi;
    cplx lhs;  // psi - (1/2)(c'/c) tau(A * B * C)
    QuadResult chi_ab_c, chi_bc_a, chi_ca_b;
    cplx rhs;
    double rel_residual;
    // The same sum with the products taken in the order chi(B * A, C) +
    // chi(A * C, B) + chi(C * B, A), when requested.
    std::optional<cplx> rhs_listed_order;
    double listed_rel_residual = 0.0;
};

// psi_t - (1/2)(c'/c) tau(ABC) = chi(A * B, C) + chi(B * C, A) + chi(C * A, B).
inline Identity66 identity_66_check(const FiniteRankOp& A, const FiniteRankOp& B, const FiniteRankOp& C,
                                    const CocycleContext& ctx, bool with_listed_order = false) {
    Identity66 r{};
    r.psi = psi_t(A, B, C, ctx);
    r.lhs = r.psi.value - 0.5 * ctx.dlogc * tau(A, B, C);
    r.chi_ab_c = chi_t(compose_exact(A, B), C, ctx);
    r.chi_bc_a = chi_t(compose_exact(B, C), A, ctx);
    r.chi_ca_b = chi_t(compose_exact(C, A), B, ctx);
    r.rhs = r.chi_ab_c.value + r.chi_bc_a.value + r.chi_ca_b.value;
    r.rel_residual = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), 1e-300);
    if (with_listed_order) {
        cplx alt = chi_t(compose_exact(B, A), C, ctx).value + chi_t(compose_exact(A, C), B, ctx).value +
                   chi_t(compose_exact(C, B), A, ctx).value;
        r.rhs_listed_order = alt;
        r.listed_rel_residual = std::abs(r.lhs - alt) / std::max(std::abs(r.lhs), 1e-300);
    }
    return r;
}

}  // namespace berezin

#endif
