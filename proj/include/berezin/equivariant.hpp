#ifndef BEREZIN_EQUIVARIANT_HPP
#define BEREZIN_EQUIVARIANT_HPP

#include <cmath>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "modular.hpp"
#include "symbols.hpp"

namespace berezin {

// PSL(2, Z) elements of S/T word length <= L, deduplicated by the canonical
// matrix; shell[i] is the word length of elements[i].
struct ModularBall {
    std::vector<ModularElement> elements;
    std::vector<int> shell;
};

inline ModularBall enumerate_psl2z(int L) {
    ModularBall ball;
    std::map<std::tuple<long long, long long, long long, long long>, bool> seen;
    auto key = [](const ModularElement& g) {
        ModularElement c = g.canonical();
        return std::make_tuple(c.a, c.b, c.c, c.d);
    };
    std::vector<ModularElement> frontier = {ModularElement::identity()};
    seen[key(frontier[0])] = true;
    ball.elements.push_back(frontier[0]);
    ball.shell.push_back(0);
    for (int len = 1; len <= L; ++len) {
        std::vector<ModularElement> next;
        for (auto& g : frontier)
            for (auto gen : {ModularElement::S(), ModularElement::T(), ModularElement::Tinv()}) {
                ModularElement h = g * gen;
                if (seen.emplace(key(h), true).second) {
                    next.push_back(h);
                    ball.elements.push_back(h);
                    ball.shell.push_back(len);
                }
            }
        frontier = std::move(next);
    }
    return ball;
}

inline double covolume_closed_form() { return pi / 3.0; }

// A Gamma-invariant symbol on H_r.
class GammaKernel {
public:
    enum Kind { autoform_pair, poincare_sum };

    // (c_n / c_{n+2k}) conj(f(zeta)) g(z) pf(z, zeta)^{2k}, a symbol on H_{n+2k}.
    static GammaKernel autoform(const ModularForm& f, const ModularForm& g, double n) {
        if (f.weight != g.weight) throw PreconditionError("autoform pair needs equal weights");
        if (!(n > 1.0)) throw PreconditionError("autoform pair needs base weight n > 1");
        GammaKernel k;
        k.kind_ = autoform_pair;
        k.f_ = f;
        k.g_ = g;
        k.base_ = n;
        k.params_ = SpaceParams::make(n + f.weight, Model::half_plane);
        k.scale_ = closed_form_c(n, Model::half_plane) / k.params_.c;
        return k;
    }

    // sum over |word| <= L of the seed symbol moved by gamma.
    static GammaKernel poincare(const FiniteRankOp& seed, int L) {
        if (seed.params.model != Model::half_plane) throw ModelMismatch("Poincare sums use the half-plane");
        GammaKernel k;
        k.kind_ = poincare_sum;
        k.params_ = seed.params;
        k.seed_ = seed;
        k.ball_ = enumerate_psl2z(L);
        k.cutoff_ = L;
        return k;
    }

    Kind kind() const { return kind_; }
    const SpaceParams& params() const { return params_; }
    double base() const { return base_; }
    double scale() const { return scale_; }
    int cutoff() const { return cutoff_; }
    std::size_t terms() const { return ball_.elements.size(); }

    cplx operator()(const Point& z, const Point& zeta) const {
        if (kind_ == autoform_pair)
            return scale_ * std::conj(f_.evaluate(zeta)) * g_.evaluate(z) *
                   std::pow(pair_factor(z, zeta), f_.weight);
        cplx acc = 0;
        for (auto& g : ball_.elements) acc += seed_->symbol(mobius_act(g, z), mobius_act(g, zeta));
        return acc;
    }

    // Sum of |terms| over the outermost word-length shell at (z, zeta).
    double truncation_estimate(const Point& z, const Point& zeta) const {
        if (kind_ == autoform_pair) return 0.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < ball_.elements.size(); ++i)
            if (ball_.shell[i] == cutoff_)
                acc += std::abs(seed_->symbol(mobius_act(ball_.elements[i], z), mobius_act(ball_.elements[i], zeta)));
        return acc;
    }

    Function diagonal() const {
        auto self = *this;
        return [self](const Point& z) { return self(z, z); };
    }

    // Cusp decay of the diagonal against dx dy, when certified.
    std::optional<TailClass> diagonal_tail(double Y) const {
        if (kind_ != autoform_pair || !f_.cusp || !g_.cusp) return std::nullopt;
        TailClass t = cusp_pair_tail(f_, g_, f_.weight - 2.0, Y);
        t.constant *= scale_;
        return t;
    }

    // Cusp decay, in the F variable, of c/area |k|^2 |d|^{2r} after the
    // other variable is integrated out (or held fixed, with |d| <= 1). The F
    // variable carries f, the other carries g, bounded by sup |g|^2 y^{2k}.
    std::optional<TailClass> pair_tail(double Y) const {
        if (kind_ != autoform_pair || !f_.cusp || !g_.cusp) return std::nullopt;
        double w = f_.weight;
        double A = 0.0;
        for (std::size_t n = 1; n < g_.coeffs.size(); ++n) A += std::abs(g_.coeffs[n]) * std::exp(-2.0 * pi * (n - 1.0));
        A += g_.tail_bound(1.0) * std::exp(2.0 * pi);
        // sup over y >= sqrt(3)/2 of A e^{-2 pi y} y^{w/2}; the reduction puts every point there.
        double ys = std::max(w / (4.0 * pi), std::sqrt(3.0) / 2.0);
        double sup_g = std::pow(A * std::exp(-2.0 * pi * ys) * std::pow(ys, 0.5 * w), 2);
        double r = params_.r;
        double integral = r - w - 1.0 > 0.0 ? 4.0 * pi / (r - w - 1.0) : INFINITY;
        TailClass t = cusp_pair_tail(f_, f_, w - 2.0, Y);
        t.constant *= scale_ * scale_ * params_.c / covolume_closed_form() * sup_g * std::max(1.0, integral);
        return t;
    }

    const ModularForm& f() const { return f_; }
    const ModularForm& g() const { return g_; }

private:
    Kind kind_ = autoform_pair;
    SpaceParams params_{};
    ModularForm f_, g_;
    double base_ = 0.0;
    double scale_ = 1.0;
    std::optional<FiniteRankOp> seed_;
    ModularBall ball_;
    int cutoff_ = 0;
};

struct InvarianceReport {
    double max_defect;     // max |k(gz, g zeta) - k(z, zeta)| / |k(z, zeta)|
    double max_estimate;   // largest truncation estimate relative to |k|
    std::size_t samples;
};

inline InvarianceReport gamma_invariance_check(const GammaKernel& k,
                                               const std::vector<std::tuple<ModularElement, Point, Point>>& samples) {
    InvarianceReport rep{0, 0, samples.size()};
    for (auto& [g, z, zeta] : samples) {
        cplx a = k(z, zeta), b = k(mobius_act(g, z), mobius_act(g, zeta));
        double scale = std::max(std::abs(a), 1e-300);
        rep.max_defect = std::max(rep.max_defect, std::abs(a - b) / scale);
        double est = std::max(k.truncation_estimate(z, zeta), k.truncation_estimate(mobius_act(g, z), mobius_act(g, zeta)));
        rep.max_estimate = std::max(rep.max_estimate, est / scale);
    }
    return rep;
}

// nu_0-area of F; the part above Y is exactly int_Y^inf y^-2 dy = 1/Y.
inline QuadResult covolume(double Y = 1e4, double tol = 1e-12) {
    auto one = [](const Point&) { return cplx(1.0); };
    TailClass tail = TailClass::power_law(1.0, 2.0);
    QuadResult q = integrate2d(one, Domain::fundamental_domain(Y, tail), Measure{0.0}, {tol});
    double exact_tail = cusp_tail_bound(tail, Y);
    return {q.value + exact_tail, std::max(0.0, q.error_estimate - exact_tail), q.evaluations};
}

// (1 / area F) int_{F + shift} f d nu_0.
inline QuadResult gamma_trace(const Function& diag, const TailClass& tail, double tol = 1e-9, double Y = 12.0,
                              double shift = 0.0) {
    double area = covolume_closed_form();
    QuadResult q = integrate2d(diag, Domain::fundamental_domain(Y, tail, shift), Measure{0.0}, {tol});
    return {q.value / area, q.error_estimate / area, q.evaluations};
}

inline QuadResult gamma_trace(const GammaKernel& k, double tol = 1e-9, double Y = 12.0, double shift = 0.0) {
    auto tail = k.diagonal_tail(Y);
    if (!tail) throw PreconditionError("gamma_trace needs certified cusp decay of the diagonal");
    return gamma_trace(k.diagonal(), *tail, tol, Y, shift);
}

struct TracialityResult {
    QuadResult star_kk;  // tau(k* * k): z over F, eta over H
    QuadResult kk_star;  // tau(k * k*): z over H, eta over F
};

struct TracialityOptions {
    double outer_tol = 1e-3;
    double inner_tol = 1e-5;
    double Y = 12.0;
    double sigma_max = 12.0;
    long long budget = 400'000'000;
};

inline TracialityResult traciality_check(const GammaKernel& k, const TracialityOptions& opt = {}) {
    const SpaceParams& P = k.params();
    double area = covolume_closed_form();
    auto tail = k.pair_tail(opt.Y);
    if (!tail) throw PreconditionError("traciality_check needs certified cusp decay");
    double r = P.r;
    // tau(k* * k) = c/area int_F int_H |k(eta, conj z)|^2 |d|^{2r}
    auto w1 = [&](const std::vector<Point>& v) {
        const Point& z = v[0];
        const Point& eta = v[1];
        return cplx(P.c / area * std::norm(k(eta, z)) * std::pow(rho(z, eta), r));
    };
    IteratedSpec s1{{Domain::fundamental_domain(opt.Y, *tail), Domain::following(Model::half_plane, opt.sigma_max)},
                    {Measure{0.0}, Measure{0.0}},
                    {opt.outer_tol, opt.inner_tol},
                    opt.budget};
    // tau(k * k*) after unfolding = c/area int_H int_F |k(z, conj eta)|^2 |d|^{2r}
    auto w2 = [&](const std::vector<Point>& v) {
        const Point& z = v[0];
        const Point& eta = v[1];
        return cplx(P.c / area * std::norm(k(z, eta)) * std::pow(rho(z, eta), r));
    };
    IteratedSpec s2{{Domain::ball(Point::H(0.0, 1.2), opt.sigma_max), Domain::fundamental_domain(opt.Y, *tail)},
                    {Measure{0.0}, Measure{0.0}},
                    {opt.outer_tol, opt.inner_tol},
                    opt.budget};
    return {integrate_iterated(w1, s1), integrate_iterated(w2, s2)};
}

struct TracePetersson {
    cplx trace;
    cplx petersson_value;  // <g, f>
    cplx constant;         // trace / <g, f>
    double expected_constant;  // c_n / (c_{n+2k} area F)
};

inline TracePetersson trace_vs_petersson(const ModularForm& f, const ModularForm& g, double n, double tol = 1e-9) {
    GammaKernel k = GammaKernel::autoform(f, g, n);
    cplx tr = gamma_trace(k, tol).value;
    cplx pg = petersson(g, f, tol).value;
    cplx C = std::abs(pg) > 0 ? tr / pg : cplx(0.0);
    return {tr, pg, C, k.scale() / covolume_closed_form()};
}

// covol(Gamma) (r - 1) / pi.
inline double dimension_report(double r, double covol = covolume_closed_form()) {
    if (!(r > 1.0)) throw PreconditionError("dimension_report needs r > 1");
    return covol * (r - 1.0) / pi;
}

}  // namespace berezin

#endif
