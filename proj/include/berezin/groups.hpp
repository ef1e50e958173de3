#ifndef BEREZIN_GROUPS_HPP
#define BEREZIN_GROUPS_HPP

#include <algorithm>
#include <array>
#include <boost/rational.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace berezin {

using rational = boost::rational<long long>;

// Principal argument in (-pi, pi].
inline double arg_branch(cplx w) {
    if (w == cplx(0.0)) throw DomainError("argument of zero");
    double a = std::arg(w);
    if (a == -pi) a = pi;
    return a;
}

// How matrices are read before arguments of j are taken. Under psl every
// factor and the product are replaced by their canonical representative;
// under sl the matrices are multiplied as they are.
enum class Lift { psl, sl };

namespace detail {

inline std::array<Point, 8> cocycle_probe_points(Model m) {
    if (m == Model::half_plane)
        return {Point::H(0.0, 1.0),  Point::H(0.3, 0.2),   Point::H(-2.5, 0.7), Point::H(7.0, 3.0),
                Point::H(-0.1, 0.05), Point::H(1.3, 12.0), Point::H(-40.0, 1.5), Point::H(0.6, 0.9)};
    return {Point::D(0.0),          Point::D({0.5, 0.1}),  Point::D({-0.7, 0.2}), Point::D({0.0, -0.9}),
            Point::D({0.95, 0.0}),  Point::D({-0.3, 0.6}), Point::D({0.1, 0.1}),  Point::D({-0.5, -0.5})};
}

inline double cocycle_at(const GroupElement& g1, const GroupElement& g2, const GroupElement& g12,
                         const Point& z) {
    double lhs = log_automorphy(g12, z).imag();
    double r1 = log_automorphy(g1, mobius_act(g2, z)).imag();
    double r2 = log_automorphy(g2, z).imag();
    return (lhs - r1 - r2) / (2.0 * pi);
}

}  // namespace detail

// N(g1, g2) with 2 pi N = arg j(g1 g2, z) - arg j(g1, g2 z) - arg j(g2, z).
// The value is checked to be the same at eight probe points.
inline rational n_cocycle(const GroupElement& g1, const GroupElement& g2, Lift lift = Lift::sl) {
    GroupElement h1 = g1, h2 = g2, h12 = g1 * g2;
    if (lift == Lift::psl) {
        h1 = g1.canonical();
        h2 = g2.canonical();
        h12 = (h1 * h2).canonical();
    }
    double first = 0.0;
    bool have = false;
    for (const Point& z : detail::cocycle_probe_points(g1.model)) {
        double v = detail::cocycle_at(h1, h2, h12, z);
        if (!have) {
            first = v;
            have = true;
        } else if (std::abs(v - first) > 1e-10) {
            throw ConventionError("n_cocycle depends on the base point");
        }
    }
    long long twice = std::llround(2.0 * first);
    if (std::abs(2.0 * first - static_cast<double>(twice)) > 1e-10)
        throw ConventionError("n_cocycle is not a half-integer");
    return rational(twice, 2);
}

inline double to_double(const rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

// c_r(g1, g2) with pi_r(g1 g2) = c_r(g1, g2) pi_r(g1) pi_r(g2).
inline cplx projective_multiplier(double r, const GroupElement& g1, const GroupElement& g2,
                                  Lift lift = Lift::sl) {
    if (!(r > 1.0)) throw PreconditionError("projective_multiplier needs r > 1");
    return std::exp(2.0 * pi * I * r * to_double(n_cocycle(g1, g2, lift)));
}

// An element of SL(2,Z) together with a word in S, T and T^-1 ('S', 'T', 't')
// that multiplies out to it.
struct ModularElement {
    long long a = 1, b = 0, c = 0, d = 1;
    std::string word;

    static ModularElement identity() { return {}; }
    static ModularElement S() { return {0, -1, 1, 0, "S"}; }
    static ModularElement T() { return {1, 1, 0, 1, "T"}; }
    static ModularElement Tinv() { return {1, -1, 0, 1, "t"}; }

    static ModularElement from_word(const std::string& w) {
        ModularElement g;
        for (char ch : w) {
            switch (ch) {
                case 'S': g = g * S(); break;
                case 'T': g = g * T(); break;
                case 't': g = g * Tinv(); break;
                default: throw DomainError(std::string("bad generator '") + ch + "'");
            }
        }
        return g;
    }

    ModularElement operator*(const ModularElement& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d, word + o.word};
    }

    ModularElement inverse() const {
        std::string w;
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
            if (*it == 'S') w += "SSS";  // S^-1 = S^3 as matrices
            else w += (*it == 'T' ? 't' : 'T');
        }
        return {d, -b, -c, a, w};
    }

    ModularElement negated() const { return {-a, -b, -c, -d, word + "SS"}; }

    bool is_canonical() const { return c > 0 || (c == 0 && a > 0); }
    ModularElement canonical() const { return is_canonical() ? *this : negated(); }

    bool same_matrix(const ModularElement& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool same_in_psl(const ModularElement& o) const {
        return same_matrix(o) || (a == -o.a && b == -o.b && c == -o.c && d == -o.d);
    }
    bool is_identity_in_psl() const { return same_in_psl(identity()); }

    GroupElement element() const {
        return {Model::half_plane, static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
                static_cast<double>(d)};
    }
};

inline Point mobius_act(const ModularElement& g, const Point& z) { return mobius_act(g.element(), z); }
inline cplx automorphy_j(const ModularElement& g, const Point& z) { return automorphy_j(g.element(), z); }

struct Reduction {
    ModularElement gamma;  // z0 = gamma z
    Point z0;
};

// Moves z into {|Re z| <= 1/2, |z| >= 1}. Ties go to Re z0 in [-1/2, 1/2) and,
// on the unit circle, to Re z0 <= 0.
inline Reduction reduce_to_fundamental(const Point& z) {
    if (z.model() != Model::half_plane) throw ModelMismatch();
    ModularElement g;
    cplx w = z.value();
    for (int iter = 0; iter < 100000; ++iter) {
        double n = std::floor(w.real() + 0.5);
        if (n != 0.0) {
            w -= n;
            long long k = static_cast<long long>(n);
            ModularElement tr{1, -k, 0, 1, std::string(static_cast<std::size_t>(std::llabs(k)), k > 0 ? 't' : 'T')};
            g = tr * g;
        }
        if (std::max({std::llabs(g.a), std::llabs(g.b), std::llabs(g.c), std::llabs(g.d)}) > (1LL << 31))
            throw DomainError("reduce_to_fundamental: point too close to the boundary for exact matrices");
        double nrm = std::norm(w);
        if (nrm < 1.0 || (nrm == 1.0 && w.real() > 0.0)) {
            w = cplx(-w.real(), w.imag()) / nrm;
            g = ModularElement::S() * g;
            continue;
        }
        return {g.canonical(), Point::H(w)};
    }
    throw Error("reduce_to_fundamental did not terminate");
}

// Haar measure on SU(1,1) in the chart g <-> (w, phi) with w = g.0 and
// phi = arg a, so that dg = kappa dnu_0(w) dphi.
struct HaarChart {
    // Frozen value; calibrate_haar_kappa in repn reproduces it at r = 4.
    static constexpr double frozen_kappa = 1.0 / (2.0 * pi);
    double kappa = frozen_kappa;

    static GroupElement element(cplx w, double phi) {
        double abs_a = 1.0 / std::sqrt((1.0 - std::abs(w)) * (1.0 + std::abs(w)));
        cplx a = std::polar(abs_a, phi);
        return GroupElement{Model::disk, a, w * std::conj(a), std::conj(w * std::conj(a)), std::conj(a)};
    }
};

namespace detail {

// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = t;
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace detail

// Tensor rule over {g : dist(g.0, 0) <= R}: composite Gauss-Legendre in the
// hyperbolic radius, trapezoid rules in the two angles.
class HaarRule {
public:
    HaarRule(HaarChart chart, double radius, int radial_panels, int radial_order, int angular, int rotations)
        : chart_(chart), radius_(radius), angular_(angular), rotations_(rotations) {
        std::vector<double> x, w;
        detail::gauss_legendre(radial_order, x, w);
        double h = radius / radial_panels;
        for (int p = 0; p < radial_panels; ++p)
            for (int k = 0; k < radial_order; ++k) {
                sigma_.push_back(h * (p + 0.5 * (x[k] + 1.0)));
                sigma_w_.push_back(0.5 * h * w[k]);
            }
    }

    double radius() const { return radius_; }
    std::size_t size() const { return sigma_.size() * angular_ * rotations_; }
    const HaarChart& chart() const { return chart_; }

    // fn(g, weight) for every node. Disk nu_0 in hyperbolic polar
    // coordinates is (1/4) sinh(sigma) dsigma dtheta.
    template <class Fn>
    void for_each(Fn&& fn) const {
        double dth = 2.0 * pi / angular_, dph = 2.0 * pi / rotations_;
        for (std::size_t i = 0; i < sigma_.size(); ++i) {
            double rr = std::tanh(0.5 * sigma_[i]);
            double wr = chart_.kappa * sigma_w_[i] * 0.25 * std::sinh(sigma_[i]) * dth * dph;
            for (int j = 0; j < angular_; ++j) {
                cplx w = std::polar(rr, dth * j);
                for (int k = 0; k < rotations_; ++k) fn(HaarChart::element(w, dph * k), wr);
            }
        }
    }

private:
    HaarChart chart_;
    double radius_;
    int angular_, rotations_;
    std::vector<double> sigma_, sigma_w_;
};

// Integrates the chart measure of the truncated group and a radial closed
// form, doubling the radial resolution until both agree within tol.
inline HaarRule haar_quadrature(const HaarChart& chart, double radius, double tol, int angular = 32,
                                int rotations = 8) {
    if (!(radius > 0.0) || !(tol > 0.0)) throw PreconditionError("haar_quadrature needs R > 0, tol > 0");
    const double s = 3.0;
    double area = chart.kappa * 2.0 * pi * pi * std::pow(std::sinh(0.5 * radius), 2);
    double rho2 = std::pow(std::tanh(0.5 * radius), 2);
    double radial = chart.kappa * 2.0 * pi * pi * (1.0 - std::pow(1.0 - rho2, s - 1.0)) / (s - 1.0);
    double err = 0.0;
    for (int panels = 2; panels <= 512; panels *= 2) {
        HaarRule rule(chart, radius, panels, 10, angular, rotations);
        double a = 0.0, b = 0.0;
        rule.for_each([&](const GroupElement& g, double wt) {
            double h = 1.0 / std::norm(g.a);  // 1 - |g.0|^2
            a += wt;
            b += wt * std::pow(h, s);
        });
        err = std::max(std::abs(a - area) / area, std::abs(b - radial) / radial);
        if (err <= tol) return rule;
    }
    throw AccuracyError("haar_quadrature: tolerance not reached", 0.0, err, 0);
}

}  // namespace berezin

#endif
