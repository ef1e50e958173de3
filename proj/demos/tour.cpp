// A short tour: reproduce a function from the kernel, evaluate a Berezin
// transform eigenvalue, and compute a few modular quantities.

#include <berezin.hpp>

#include <cstdio>

using namespace berezin;

int main() {
    SpaceParams P = SpaceParams::make(4.0, Model::half_plane);
    Point z = Point::H(0.3, 0.8);
    Function f = [](const Point& w) { return cpow(w.value() + I, -5.0); };
    QuadResult q = project(P, f, z);
    std::printf("<f, e_z> = %.12f%+.12fi   f(z) = %.12f%+.12fi\n", q.value.real(), q.value.imag(), f(z).real(),
                f(z).imag());

    std::printf("B_4 eigenvalue on y^0.3: %.12f\n", br_eigenvalue_closed_form(4.0, 0.3));

    QuadResult area = covolume();
    std::printf("area of the fundamental domain: %.12f (pi/3 = %.12f)\n", area.value.real(), pi / 3.0);

    ModularForm D = delta_form();
    std::printf("<Delta, Delta> = %.12e\n", petersson(D, D).value.real());

    rational s = dedekind_sum(1, 5);
    std::printf("s(1, 5) = %lld/%lld\n", s.numerator(), s.denominator());
}
