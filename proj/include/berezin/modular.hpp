#ifndef BEREZIN_MODULAR_HPP
#define BEREZIN_MODULAR_HPP

#include <cmath>
#include <numeric>
#include <vector>

#include "groups.hpp"
#include "quadrature.hpp"

namespace berezin {

// A holomorphic form for PSL(2, Z) of weight 2k given by q-coefficients
// a_0..a_N, with |a_n| <= bound_constant n^bound_power.
struct ModularForm {
    int weight = 0;
    std::vector<cplx> coeffs;
    double bound_constant = 0.0;
    double bound_power = 0.0;
    double y_min = 0.5;
    bool cusp = false;

    int half_weight() const { return weight / 2; }

    // Bound on sum_{n > N} |a_n| |q|^n at Im z = y.
    double tail_bound(double y) const {
        double aq = std::exp(-2.0 * pi * y), acc = 0.0;
        for (std::size_t n = coeffs.size(); n < coeffs.size() + 4000; ++n) {
            double t = bound_constant * std::pow(double(n), bound_power) * std::pow(aq, double(n));
            acc += t;
            if (t < 1e-30 * acc) break;
        }
        return acc;
    }

    // Direct q-series; refuses points below y_min.
    cplx operator()(const Point& z) const {
        if (z.model() != Model::half_plane) throw ModelMismatch();
        if (z.value().imag() < y_min) throw PrecisionError("q-series evaluated below its certified height");
        return series(z.value());
    }

    cplx series(cplx z) const {
        cplx q = std::exp(2.0 * pi * I * z), acc = 0.0;
        for (std::size_t n = coeffs.size(); n-- > 0;) acc = acc * q + coeffs[n];
        return acc;
    }

    // Anywhere in H through reduction: f(z) = j(gamma, z)^-2k f(gamma z).
    cplx evaluate(const Point& z) const {
        if (z.value().imag() >= y_min) return series(z.value());
        Reduction red = reduce_to_fundamental(z);
        return std::pow(automorphy_j(red.gamma, z), -weight) * series(red.z0.value());
    }

    ModularForm scaled(cplx s) const {
        ModularForm f = *this;
        for (auto& a : f.coeffs) a *= s;
        f.bound_constant *= std::abs(s);
        return f;
    }

    Function as_function() const {
        auto self = *this;
        return [self](const Point& z) { return self.evaluate(z); };
    }
};

namespace detail {

// Coefficients of prod_{n >= 1} (1 - q^n)^24 up to q^N.
inline std::vector<__int128> eta24_product(int N) {
    std::vector<__int128> p(N + 1, 0);
    p[0] = 1;
    for (int n = 1; n <= N; ++n)
        for (int rep = 0; rep < 24; ++rep)
            for (int k = N; k >= n; --k) p[k] -= p[k - n];
    return p;
}

inline long long divisor_power_sum(long long n, int k) {
    long long s = 0;
    for (long long d = 1; d <= n; ++d)
        if (n % d == 0) {
            long long t = 1;
            for (int i = 0; i < k; ++i) t *= d;
            s += t;
        }
    return s;
}

}  // namespace detail

// Ramanujan tau(n) for 1 <= n <= N.
inline std::vector<long long> ramanujan_tau(int N) {
    auto p = detail::eta24_product(N);
    std::vector<long long> tau(N + 1, 0);
    for (int n = 1; n <= N; ++n) tau[n] = static_cast<long long>(p[n - 1]);
    return tau;
}

inline constexpr int delta_terms = 40;

// Delta = q prod (1 - q^n)^24, with |tau(n)| <= d(n) n^{11/2} <= 2 n^6.
inline ModularForm delta_form(int N = delta_terms) {
    ModularForm f;
    f.weight = 12;
    f.cusp = true;
    auto tau = ramanujan_tau(N);
    f.coeffs.assign(N + 1, 0.0);
    for (int n = 1; n <= N; ++n) f.coeffs[n] = static_cast<double>(tau[n]);
    f.bound_constant = 2.0;
    f.bound_power = 6.0;
    return f;
}

inline ModularForm eisenstein_form(int weight, int N = 60) {
    if (weight != 4 && weight != 6) throw PreconditionError("eisenstein_form supports weights 4 and 6");
    ModularForm f;
    f.weight = weight;
    int k = weight - 1;
    double mult = weight == 4 ? 240.0 : -504.0;
    f.coeffs.assign(N + 1, 0.0);
    f.coeffs[0] = 1.0;
    for (int n = 1; n <= N; ++n) f.coeffs[n] = mult * static_cast<double>(detail::divisor_power_sum(n, k));
    // sigma_k(n) <= zeta(k) n^k
    f.bound_constant = std::abs(mult) * (weight == 4 ? 1.2021 : 1.0370);
    f.bound_power = k;
    return f;
}

inline ModularForm zero_form(int weight) {
    ModularForm f;
    f.weight = weight;
    f.cusp = true;
    f.coeffs.assign(2, 0.0);
    return f;
}

// eta(z) = q^{1/24} sum_k (-1)^k q^{k(3k-1)/2} over all integers k.
inline cplx eta(const Point& z) {
    if (z.value().imag() < 0.5) throw PrecisionError("eta evaluated below its certified height");
    cplx tau = z.value();
    cplx acc = 1.0;
    for (int k = 1; k < 40; ++k) {
        double sgn = (k % 2) ? -1.0 : 1.0;
        acc += sgn * (std::exp(2.0 * pi * I * tau * double(k * (3 * k - 1) / 2)) +
                      std::exp(2.0 * pi * I * tau * double(k * (3 * k + 1) / 2)));
    }
    return std::exp(2.0 * pi * I * tau / 24.0) * acc;
}

inline cplx delta(const Point& z) {
    static const ModularForm D = delta_form();
    return D(z);
}

// ((x)): x - floor(x) - 1/2 off the integers, 0 on them.
inline rational sawtooth(const rational& x) {
    long long fl = x.numerator() / x.denominator();
    if (x.numerator() < 0 && x.numerator() % x.denominator() != 0) --fl;
    if (x.denominator() == 1) return 0;
    return x - rational(fl) - rational(1, 2);
}

inline rational dedekind_sum_direct(long long d, long long c) {
    if (c <= 0 || std::gcd(d, c) != 1) throw PreconditionError("dedekind_sum needs c > 0 and gcd(d, c) = 1");
    rational s = 0;
    for (long long k = 1; k < c; ++k) s += sawtooth(rational(k, c)) * sawtooth(rational(k * d, c));
    return s;
}

// s(d, c) by reciprocity: s(d, c) + s(c, d) = -1/4 + (c/d + d/c + 1/(cd)) / 12.
inline rational dedekind_sum(long long d, long long c) {
    if (c <= 0 || std::gcd(d, c) != 1) throw PreconditionError("dedekind_sum needs c > 0 and gcd(d, c) = 1");
    rational acc = 0;
    int sign = 1;
    while (c > 1) {
        d = ((d % c) + c) % c;
        if (d == 0) break;
        rational rec = rational(-1, 4) + (rational(c, d) + rational(d, c) + rational(1, c * d)) / 12;
        acc += sign * rec;
        sign = -sign;
        long long nc = d, nd = c;
        c = nc;
        d = nd;
    }
    return acc;
}

// Psi(gamma) with ln Delta(gamma z) = ln Delta(z) + 12 Log j(gamma, z) + 2 pi i Psi(gamma),
// for the continuous logarithm of Delta and the actual matrix of gamma.
inline long long rademacher_psi(const ModularElement& g) {
    if (g.c > 0) {
        rational v = rational(g.a + g.d, g.c) - 12 * dedekind_sum(g.d, g.c) - 3;
        if (v.denominator() != 1) throw ConventionError("Rademacher function is not an integer");
        return v.numerator();
    }
    if (g.c == 0) return g.a > 0 ? g.b : -g.b - 6;
    return rademacher_psi(g.negated()) + 6;
}

// Cochain with N(g1, g2) = c(g1 g2) - c(g1) - c(g2) on matrices.
inline rational rademacher_phi(const ModularElement& g) { return rational(-rademacher_psi(g), 12); }

// ln Delta(z) = 2 pi i z + 24 sum Log(1 - q^n), convergent on all of H.
inline cplx ln_delta_series(cplx z) {
    cplx q = std::exp(2.0 * pi * I * z), qn = q, acc = 0.0;
    double aq = std::abs(q);
    if (!(aq < 1.0)) throw DomainError("ln_delta_series needs Im z > 0");
    for (int n = 1; n < 10'000'000; ++n) {
        acc += std::log(1.0 - qn);
        if (std::abs(qn) < 1e-18 * (1.0 - aq)) break;
        qn *= q;
    }
    return 2.0 * pi * I * z + 24.0 * acc;
}

// The same branch through reduction into F.
inline cplx ln_delta(const Point& z) {
    if (z.value().imag() >= 0.5) return ln_delta_series(z.value());
    Reduction red = reduce_to_fundamental(z);
    const ModularElement& g = red.gamma;
    return ln_delta_series(red.z0.value()) - 12.0 * std::log(automorphy_j(g, z)) -
           2.0 * pi * I * double(rademacher_psi(g));
}

// Psi(gamma) read off numerically from the series at a point where both
// z and gamma z have height 1/c.
inline double rademacher_psi_numeric(const ModularElement& g) {
    Point z = g.c != 0 ? Point::H(cplx(-double(g.d) / g.c, 1.0 / std::abs(double(g.c)))) : Point::H(0.0, 1.0);
    Point gz = mobius_act(g, z);
    cplx v = (ln_delta_series(gz.value()) - ln_delta_series(z.value()) - 12.0 * std::log(automorphy_j(g, z))) /
             (2.0 * pi * I);
    return v.real();
}

// Cusp decay of |f g| y^p for y >= Y >= max(p, 1): |f| <= A e^{-2 pi y} with
// A = sum |a_n| e^{-2 pi (n - 1)}, and y^p e^{-y} decreases past p, so the
// density is at most A B Y^p e^{-Y} e^{-(4 pi - 1) y}.
inline TailClass cusp_pair_tail(const ModularForm& f, const ModularForm& g, double p, double Y) {
    if (!f.cusp || !g.cusp) throw PreconditionError("cusp decay needs cusp forms");
    if (Y < std::max(p, 1.0)) throw PreconditionError("cusp tail needs Y >= max(p, 1)");
    auto lead = [](const ModularForm& h) {
        double A = 0.0;
        for (std::size_t n = 1; n < h.coeffs.size(); ++n) A += std::abs(h.coeffs[n]) * std::exp(-2.0 * pi * (n - 1.0));
        return A + h.tail_bound(1.0) * std::exp(2.0 * pi);
    };
    return TailClass::exp_decay(lead(f) * lead(g) * std::pow(Y, p) * std::exp(-Y), 4.0 * pi - 1.0);
}

// <f, g> = int_F f conj(g) y^{2k} d nu_0.
inline QuadResult petersson(const ModularForm& f, const ModularForm& g, double tol = 1e-10, double Y = 12.0) {
    if (f.weight != g.weight) throw PreconditionError("petersson needs equal weights");
    if (!f.cusp || !g.cusp) throw PreconditionError("petersson needs cusp forms");
    Y = std::max(Y, f.weight - 2.0);
    TailClass tc = cusp_pair_tail(f, g, f.weight - 2.0, Y);
    auto h = [&](const Point& z) { return f.series(z.value()) * std::conj(g.series(z.value())); };
    return integrate2d(h, Domain::fundamental_domain(Y, tc), Measure{double(f.weight)}, {tol});
}

// Upper incomplete gamma for a positive integer s.
inline double upper_gamma_int(int s, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < s; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::tgamma(double(s)) * std::exp(-x) * sum;
}

// Second pipeline: the region y >= 1 in closed form term by term, the
// rest of F by quadrature.
inline QuadResult petersson_split(const ModularForm& f, const ModularForm& g, double tol = 1e-10) {
    if (f.weight != g.weight) throw PreconditionError("petersson needs equal weights");
    if (!f.cusp || !g.cusp) throw PreconditionError("petersson needs cusp forms");
    int s = f.weight - 1;
    cplx upper = 0.0;
    std::size_t N = std::min(f.coeffs.size(), g.coeffs.size());
    for (std::size_t n = 1; n < N; ++n) {
        double x = 4.0 * pi * n;
        upper += f.coeffs[n] * std::conj(g.coeffs[n]) * upper_gamma_int(s, x) / std::pow(x, s);
    }
    auto h = [&](const Point& z) { return f.series(z.value()) * std::conj(g.series(z.value())); };
    // Y = 1 with a zero tail: the part above is the closed-form sum.
    QuadResult low = integrate2d(h, Domain::fundamental_domain(1.0, TailClass::exp_decay(0.0, 1.0)),
                                 Measure{double(f.weight)}, {tol});
    return {low.value + upper, low.error_estimate, low.evaluations};
}

}  // namespace berezin

#endif
