#ifndef BEREZIN_GEOMETRY_HPP
#define BEREZIN_GEOMETRY_HPP

#include <cmath>
#include <functional>

#include "core.hpp"

namespace berezin {

// A point of the upper half-plane or of the unit disk.
class Point {
public:
    Point(cplx value, Model model) : value_(value), model_(model) {
        if (!(std::isfinite(value.real()) && std::isfinite(value.imag())))
            throw DomainError("non-finite point");
        if (model == Model::half_plane && !(value.imag() > 0.0))
            throw DomainError("half-plane point must have Im > 0");
        if (model == Model::disk && !(std::norm(value) < 1.0))
            throw DomainError("disk point must have |z| < 1");
    }

    static Point H(double x, double y) { return {cplx(x, y), Model::half_plane}; }
    static Point H(cplx z) { return {z, Model::half_plane}; }
    static Point D(cplx w) { return {w, Model::disk}; }

    cplx value() const { return value_; }
    Model model() const { return model_; }

    // Im z on the half-plane, 1 - |z|^2 on the disk.
    double height() const {
        if (model_ == Model::half_plane) return value_.imag();
        return (1.0 - std::abs(value_)) * (1.0 + std::abs(value_));
    }

private:
    cplx value_;
    Model model_;
};

inline void require_same_model(const Point& a, const Point& b) {
    if (a.model() != b.model()) throw ModelMismatch();
}

using Function = std::function<cplx(const Point&)>;

struct Measure {
    double weight = 0.0;  // 0 is the invariant measure, r > 1 gives nu_r
};

// (z - conj(zeta)) / 2i on the half-plane, 1 - z conj(zeta) on the disk.
inline cplx pair_factor(const Point& z, const Point& zeta) {
    require_same_model(z, zeta);
    if (z.model() == Model::half_plane) return (z.value() - std::conj(zeta.value())) / (2.0 * I);
    return 1.0 - z.value() * std::conj(zeta.value());
}

inline cplx d_invariant(const Point& z, const Point& zeta) {
    return std::sqrt(z.height() * zeta.height()) / pair_factor(z, zeta);
}

// rho = |d|^2, a decreasing function of the hyperbolic distance.
inline double rho(const Point& z, const Point& zeta) {
    cplx p = pair_factor(z, zeta);
    return z.height() * zeta.height() / std::norm(p);
}

// Hyperbolic distance for the curvature -1 metric; rho = sech^2(dist/2).
inline double hyperbolic_distance(const Point& z, const Point& zeta) {
    double r = rho(z, zeta);
    return 2.0 * std::acosh(1.0 / std::sqrt(std::min(1.0, r)));
}

// Point at hyperbolic distance t * dist(z, zeta) from z on the geodesic to zeta.
inline Point geodesic_point(const Point& z, const Point& zeta, double t) {
    require_same_model(z, zeta);
    cplx a = z.value(), b = zeta.value();
    if (a == b) return z;
    double s = t * hyperbolic_distance(z, zeta);
    if (z.model() == Model::half_plane) {
        cplx w = (b - a) / (b - std::conj(a));
        cplx m = std::polar(std::tanh(0.5 * s), std::arg(w));
        cplx p = (a - std::conj(a) * m) / (1.0 - m);
        return Point::H(cplx(p.real(), std::max(p.imag(), 1e-300)));
    }
    cplx w = (b - a) / (1.0 - std::conj(a) * b);
    cplx m = std::polar(std::tanh(0.5 * s), std::arg(w));
    return Point::D((m + a) / (1.0 + std::conj(a) * m));
}

inline Point geodesic_midpoint(const Point& z, const Point& zeta) { return geodesic_point(z, zeta, 0.5); }

inline double measure_density(const Measure& m, const Point& z) {
    return std::pow(z.height(), m.weight - 2.0);
}

inline Point cayley(const Point& z) {
    if (z.model() != Model::half_plane) throw ModelMismatch();
    cplx w = (z.value() - I) / (z.value() + I);
    if (!(std::norm(w) < 1.0)) w *= std::nextafter(1.0, 0.0) / std::abs(w);
    return Point::D(w);
}

inline Point cayley_inverse(const Point& w) {
    if (w.model() != Model::disk) throw ModelMismatch();
    cplx z = I * (1.0 + w.value()) / (1.0 - w.value());
    return Point::H(cplx(z.real(), std::max(z.imag(), w.height() / std::norm(1.0 - w.value()))));
}

// A real Moebius transformation. On the half-plane the matrix is real with
// determinant one; on the disk it has the SU(1,1) form (a, b; conj b, conj a).
struct GroupElement {
    Model model = Model::half_plane;
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static GroupElement identity(Model m) { return {m, 1.0, 0.0, 0.0, 1.0}; }

    static GroupElement psl(double a, double b, double c, double d) {
        if (std::abs(a * d - b * c - 1.0) > 1e-9)
            throw DomainError("PSL(2,R) element needs determinant 1");
        return {Model::half_plane, a, b, c, d};
    }

    static GroupElement su11(cplx a, cplx b) {
        if (std::abs(std::norm(a) - std::norm(b) - 1.0) > 1e-9)
            throw DomainError("SU(1,1) element needs |a|^2 - |b|^2 = 1");
        return {Model::disk, a, b, std::conj(b), std::conj(a)};
    }

    GroupElement operator*(const GroupElement& o) const {
        if (model != o.model) throw ModelMismatch();
        return {model, a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    GroupElement inverse() const { return {model, d, -b, -c, a}; }

    // Representative with c > 0, or c = 0 and a > 0 (half-plane only).
    GroupElement canonical() const {
        if (model != Model::half_plane) return *this;
        double cr = c.real(), ar = a.real();
        if (cr > 0.0 || (cr == 0.0 && ar > 0.0)) return *this;
        return {model, -a, -b, -c, -d};
    }
};

// The automorphy factor j(g, z) = cz + d.
inline cplx automorphy_j(const GroupElement& g, const Point& z) {
    if (g.model != z.model()) throw ModelMismatch();
    return g.c * z.value() + g.d;
}

// A branch of log j(g, z) continuous in z. On the half-plane cz + d stays in
// one open half-plane (or is a constant), so the principal log is continuous.
// On the disk j = d (1 + (c/d) z) with |c/d| < 1.
inline cplx log_automorphy(const GroupElement& g, const Point& z) {
    if (g.model != z.model()) throw ModelMismatch();
    if (z.model() == Model::half_plane) return std::log(g.c * z.value() + g.d);
    return std::log(g.d) + std::log(1.0 + g.c / g.d * z.value());
}

inline Point mobius_act(const GroupElement& g, const Point& z) {
    if (g.model != z.model()) throw ModelMismatch();
    cplx den = g.c * z.value() + g.d;
    cplx w = (g.a * z.value() + g.b) / den;
    if (z.model() == Model::half_plane) {
        // Im(gz) = Im z / |cz + d|^2 keeps the result strictly inside.
        return Point::H(cplx(w.real(), z.value().imag() / std::norm(den)));
    }
    double h = z.height() / std::norm(den);
    if (!(std::norm(w) < 1.0)) w *= std::sqrt(std::max(0.0, 1.0 - h)) / std::abs(w);
    return Point::D(w);
}

}  // namespace berezin

#endif
