#ifndef BEREZIN_QUADRATURE_HPP
#define BEREZIN_QUADRATURE_HPP

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <queue>
#include <type_traits>
#include <vector>

#include "groups.hpp"

namespace berezin {

struct QuadResult {
    cplx value{0.0};
    double error_estimate = 0.0;
    long long evaluations = 0;
};

// An integrand value together with the error already committed in producing
// it (non-zero when it is itself a quadrature result).
struct Sample {
    cplx value;
    double error = 0.0;
};

// Certified decay of an integrand density (with respect to dx dy) in the cusp:
// |f| <= C y^-p  or  |f| <= C exp(-alpha y) for y >= Y.
struct TailClass {
    enum Kind { power, exponential } kind = exponential;
    double constant = 1.0;
    double rate = 1.0;  // p or alpha

    static TailClass power_law(double C, double p) { return {power, C, p}; }
    static TailClass exp_decay(double C, double alpha) { return {exponential, C, alpha}; }
};

inline double cusp_tail_bound(const TailClass& tc, double Y) {
    if (!(Y > 0.0)) throw PreconditionError("cusp height must be positive");
    if (tc.kind == TailClass::power) {
        if (!(tc.rate > 1.0)) throw PreconditionError("power decay needs p > 1 for a finite tail");
        return tc.constant * std::pow(Y, 1.0 - tc.rate) / (tc.rate - 1.0);
    }
    if (!(tc.rate > 0.0)) throw PreconditionError("exponential decay needs a positive rate");
    return tc.constant * std::exp(-tc.rate * Y) / tc.rate;
}

struct Domain {
    enum Kind { disk, half_plane, fundamental, rectangle } kind = half_plane;
    // disk / half_plane: hyperbolic ball of radius sigma_max about center.
    std::optional<Point> center;
    double sigma_max = 40.0;
    // Fewer initial panels, for smooth integrands concentrated near the centre.
    bool coarse = false;
    // When set, an inner domain of an iterated integral is centred at the
    // variable of the enclosing level.
    bool follow_previous = false;
    // fundamental: {|Re z - shift| <= 1/2, |z - shift| >= 1, Im z <= Y}.
    double cusp_Y = 1e8;
    double shift = 0.0;
    std::optional<TailClass> tail;
    // rectangle (half-plane coordinates).
    double x0 = 0, x1 = 1, y0 = 1, y1 = 2;

    static Domain ball(const Point& c, double sigma_max = 40.0) {
        Domain d;
        d.kind = c.model() == Model::half_plane ? half_plane : disk;
        d.center = c;
        d.sigma_max = sigma_max;
        return d;
    }
    static Domain coarse_ball(const Point& c, double sigma_max = 40.0) {
        Domain d = ball(c, sigma_max);
        d.coarse = true;
        return d;
    }
    static Domain whole(Model m) { return ball(m == Model::half_plane ? Point::H(0.0, 1.0) : Point::D(0.0)); }
    static Domain following(Model m, double sigma_max = 40.0) {
        Domain d = whole(m);
        d.follow_previous = true;
        d.sigma_max = sigma_max;
        return d;
    }
    // shift must be an integer: F + shift = T^shift F is again a fundamental
    // domain, while other translates are not.
    static Domain fundamental_domain(double Y, std::optional<TailClass> tail, double shift = 0.0) {
        if (shift != std::round(shift)) throw PreconditionError("fundamental domain shift must be an integer");
        Domain d;
        d.kind = fundamental;
        d.cusp_Y = Y;
        d.tail = tail;
        d.shift = shift;
        return d;
    }
    static Domain rect(double x0, double x1, double y0, double y1) {
        Domain d;
        d.kind = rectangle;
        d.x0 = x0, d.x1 = x1, d.y0 = y0, d.y1 = y1;
        return d;
    }
    Model model() const { return kind == disk ? Model::disk : Model::half_plane; }
};

struct QuadOptions {
    double tol_rel = 1e-8;
    double tol_abs = 1e-300;
    long long max_evals = 20'000'000;
};

namespace detail {

// Gauss-Kronrod 7/15 on [-1, 1]; Gauss nodes are the odd-indexed ones.
inline constexpr std::array<double, 15> gk_x = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
inline constexpr std::array<double, 15> gk_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
inline constexpr std::array<double, 15> gk_wg = {
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0};

struct ChartNode {
    Point p;
    double jacobian;  // d(measure) = jacobian du dv
};

// Maps parameter boxes to points with the Jacobian of the requested measure.
class Chart {
public:
    Chart(const Domain& dom, const Measure& m, std::optional<Point> center) : dom_(dom), m_(m) {
        if (dom.kind == Domain::disk || dom.kind == Domain::half_plane) {
            c_ = center ? *center : (dom.center ? *dom.center : Domain::whole(dom.model()).center.value());
            if (c_->model() != dom.model()) throw ModelMismatch();
        }
    }

    // Initial partition of the parameter square.
    std::vector<std::array<double, 4>> initial_boxes() const {
        std::vector<std::array<double, 4>> out;
        if (dom_.kind == Domain::disk || dom_.kind == Domain::half_plane) {
            // Double precision cannot place disk points beyond sigma ~ 36.
            double smax = dom_.kind == Domain::disk ? std::min(dom_.sigma_max, 32.0) : dom_.sigma_max;
            std::vector<double> br = {0.0};
            std::vector<double> fine = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}, coarse = {2.0, 6.0};
            for (double s : dom_.coarse ? coarse : fine)
                if (s < smax) br.push_back(s);
            br.push_back(smax);
            int sectors = dom_.coarse ? 2 : 4;
            for (std::size_t i = 0; i + 1 < br.size(); ++i)
                for (int k = 0; k < sectors; ++k)
                    out.push_back({br[i], br[i + 1], k * 2 * pi / sectors, (k + 1) * 2 * pi / sectors});
        } else if (dom_.kind == Domain::fundamental) {
            const double sb[] = {0.0, 0.05, 0.2, 0.5, 1.0};
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 4; ++k) out.push_back({-0.5 + 0.5 * i, 0.5 * i, sb[k], sb[k + 1]});
        } else {
            out.push_back({dom_.x0, dom_.x1, dom_.y0, dom_.y1});
        }
        return out;
    }

    ChartNode node(double u, double v) const {
        switch (dom_.kind) {
            case Domain::disk:
            case Domain::half_plane: return polar(u, v);
            case Domain::fundamental: return cusp(u, v);
            default: {
                Point p = Point::H(u, v);
                return {p, std::pow(v, m_.weight - 2.0)};
            }
        }
    }

private:
    // u = hyperbolic radius sigma about the centre, v = angle.
    ChartNode polar(double sigma, double theta) const {
        double t = std::tanh(0.5 * sigma);
        double one_minus_t = 2.0 / (std::exp(sigma) + 1.0);
        double ch = std::cosh(0.5 * sigma);
        double sech2 = 1.0 / (ch * ch);
        cplx w = std::polar(t, theta);
        cplx cz = c_->value();
        double sh = std::sin(0.5 * theta);
        if (dom_.kind == Domain::half_plane) {
            cplx one_minus_w(one_minus_t + 2.0 * t * sh * sh, -t * std::sin(theta));
            double den = std::norm(one_minus_w);
            cplx z = (cz - std::conj(cz) * w) / one_minus_w;
            double y = cz.imag() * sech2 / den;
            Point p = Point::H(cplx(z.real(), y));
            return {p, std::pow(y, m_.weight) * std::sinh(sigma)};
        }
        cplx den = 1.0 + std::conj(cz) * w;
        cplx z = (w + cz) / den;
        double h = sech2 * (1.0 - std::norm(cz)) / std::norm(den);
        if (!(std::norm(z) < 1.0)) z *= std::nextafter(1.0, 0.0) / std::abs(z);
        return {Point::D(z), std::pow(h, m_.weight) * 0.25 * std::sinh(sigma)};
    }

    // u = x offset in [-1/2, 1/2], v in [0, 1] interpolating log y from the
    // arc |z| = 1 up to log Y.
    ChartNode cusp(double x, double s) const {
        double lo = 0.5 * std::log1p(-x * x);
        double hi = std::log(dom_.cusp_Y);
        double u = lo + s * (hi - lo);
        double y = std::exp(u);
        return {Point::H(cplx(x + dom_.shift, y)), std::pow(y, m_.weight - 1.0) * (hi - lo)};
    }

    Domain dom_;
    Measure m_;
    std::optional<Point> c_;
};

struct Panel {
    double u0, u1, v0, v1;
    cplx value;
    double err;
    int split;  // 0 splits u, 1 splits v
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
Sample call_integrand(F& f, const Point& p) {
    using R = std::invoke_result_t<F&, const Point&>;
    if constexpr (std::is_same_v<R, Sample>) return f(p);
    else return Sample{cplx(f(p)), 0.0};
}

template <class F>
Panel eval_panel(F& f, const Chart& chart, double u0, double u1, double v0, double v1) {
    double hu = 0.5 * (u1 - u0), hv = 0.5 * (v1 - v0);
    double cu = u0 + hu, cv = v0 + hv;
    std::array<Sample, 225> s;
    std::array<double, 225> jac;
    parallel_for(225, [&](std::size_t idx) {
        std::size_t i = idx / 15, j = idx % 15;
        ChartNode n = chart.node(cu + hu * gk_x[i], cv + hv * gk_x[j]);
        jac[idx] = n.jacobian;
        s[idx] = n.jacobian == 0.0 ? Sample{0.0, 0.0} : call_integrand(f, n.p);
    });
    cplx kk = 0, gg = 0, gk = 0, kg = 0;
    double inner_err = 0.0;
    for (std::size_t i = 0; i < 15; ++i)
        for (std::size_t j = 0; j < 15; ++j) {
            std::size_t idx = i * 15 + j;
            cplx v = s[idx].value * jac[idx];
            kk += gk_wk[i] * gk_wk[j] * v;
            gg += gk_wg[i] * gk_wg[j] * v;
            gk += gk_wg[i] * gk_wk[j] * v;
            kg += gk_wk[i] * gk_wg[j] * v;
            inner_err += gk_wk[i] * gk_wk[j] * s[idx].error * std::abs(jac[idx]);
        }
    double scale = hu * hv;
    double eu = std::abs(kk - gk) * scale, ev = std::abs(kk - kg) * scale;
    double e = std::abs(kk - gg) * scale + inner_err * scale;
    if (!std::isfinite(std::abs(kk)) || !std::isfinite(e)) throw DomainError("non-finite integrand value");
    return {u0, u1, v0, v1, kk * scale, e, eu >= ev ? 0 : 1};
}

}  // namespace detail

// Adaptive tensor Gauss-Kronrod integration of f over a domain against
// nu_r (r = measure.weight). Charts: hyperbolic polar coordinates about a
// centre for balls, (x, log y) for the fundamental domain.
template <class F>
QuadResult integrate2d(F&& f, const Domain& domain, const Measure& measure, const QuadOptions& opt = {},
                       std::optional<Point> center = std::nullopt) {
    if (!(opt.tol_rel > 0.0)) throw PreconditionError("tolerance must be positive");
    double tail = 0.0;
    if (domain.kind == Domain::fundamental) {
        if (!domain.tail) throw PreconditionError("fundamental-domain integrand needs a certified cusp decay");
        tail = cusp_tail_bound(*domain.tail, domain.cusp_Y);
    }
    detail::Chart chart(domain, measure, center);
    std::vector<detail::Panel> panels;
    std::vector<bool> live;
    auto cmp = [&](std::size_t a, std::size_t b) {
        if (panels[a].err != panels[b].err) return panels[a].err < panels[b].err;
        return a > b;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    long long evals = 0;
    auto add = [&](const detail::Panel& p) {
        panels.push_back(p);
        live.push_back(true);
        heap.push(panels.size() - 1);
    };
    cplx total = 0;
    double err = 0;
    auto resum = [&] {
        total = 0;
        err = 0;
        for (std::size_t i = 0; i < panels.size(); ++i)
            if (live[i]) {
                total += panels[i].value;
                err += panels[i].err;
            }
    };
    for (auto& b : chart.initial_boxes()) {
        add(detail::eval_panel(f, chart, b[0], b[1], b[2], b[3]));
        evals += 225;
    }
    resum();
    long long steps = 0;
    while (err > std::max(opt.tol_rel * std::abs(total), opt.tol_abs)) {
        if (evals + 450 > opt.max_evals)
            throw AccuracyError("integrate2d: evaluation budget exhausted", total, err + tail, evals);
        std::size_t k = heap.top();
        heap.pop();
        detail::Panel p = panels[k];
        live[k] = false;
        detail::Panel a, b;
        if (p.split == 0) {
            double m = 0.5 * (p.u0 + p.u1);
            a = detail::eval_panel(f, chart, p.u0, m, p.v0, p.v1);
            b = detail::eval_panel(f, chart, m, p.u1, p.v0, p.v1);
        } else {
            double m = 0.5 * (p.v0 + p.v1);
            a = detail::eval_panel(f, chart, p.u0, p.u1, p.v0, m);
            b = detail::eval_panel(f, chart, p.u0, p.u1, m, p.v1);
        }
        evals += 450;
        add(a);
        add(b);
        total += a.value + b.value - p.value;
        err += a.err + b.err - p.err;
        // Periodic exact re-summation keeps the running totals honest.
        if (++steps % 64 == 0) resum();
    }
    resum();
    return {total, err + tail, evals};
}

// Iterated integral over two or three domains (outer first). The integrand
// receives the points of all levels; inner tolerances must be tighter.
struct IteratedSpec {
    std::vector<Domain> domains;
    std::vector<Measure> measures;
    std::vector<double> tol_schedule;
    long long budget = 2'000'000'000;
};

namespace detail {

template <class F>
Sample iterated_level(F& f, const IteratedSpec& spec, std::size_t level, std::vector<Point>& pts,
                      std::atomic<long long>& counter) {
    QuadOptions opt;
    opt.tol_rel = spec.tol_schedule[level];
    opt.max_evals = spec.budget;
    std::optional<Point> center;
    if (spec.domains[level].follow_previous && level > 0) center = pts[level - 1];
    QuadResult r;
    if (level + 1 == spec.domains.size()) {
        auto g = [&](const Point& p) {
            std::vector<Point> all = pts;
            all.push_back(p);
            return cplx(f(all));
        };
        r = integrate2d(g, spec.domains[level], spec.measures[level], opt, center);
    } else {
        auto g = [&](const Point& p) {
            std::vector<Point> all = pts;
            all.push_back(p);
            return iterated_level(f, spec, level + 1, all, counter);
        };
        r = integrate2d(g, spec.domains[level], spec.measures[level], opt, center);
    }
    long long total = (counter += r.evaluations);
    if (total > spec.budget) throw BudgetError("integrate_iterated: evaluation budget exceeded", total);
    return {r.value, r.error_estimate};
}

}  // namespace detail

template <class F>
QuadResult integrate_iterated(F&& f, const IteratedSpec& spec) {
    std::size_t n = spec.domains.size();
    if (n < 2 || n > 3) throw PreconditionError("iterated integrals are 4- or 6-dimensional");
    if (spec.measures.size() != n || spec.tol_schedule.size() != n)
        throw PreconditionError("one measure and one tolerance per level");
    for (std::size_t k = 1; k < n; ++k)
        if (!(spec.tol_schedule[k] < spec.tol_schedule[k - 1]))
            throw PreconditionError("inner tolerances must be strictly tighter than outer ones");
    std::atomic<long long> counter{0};
    std::vector<Point> pts;
    Sample s = detail::iterated_level(f, spec, 0, pts, counter);
    return {s.value, s.error, counter.load()};
}

// Sum over the nodes of a Haar rule.
template <class F>
QuadResult integrate_group(F&& f, const HaarRule& rule) {
    cplx total = 0;
    long long n = 0;
    rule.for_each([&](const GroupElement& g, double w) {
        total += w * cplx(f(g));
        ++n;
    });
    return {total, 0.0, n};
}

}  // namespace berezin

#endif
