// Potential of the density f(x, y) = 1 + x*y/3 on [-1,1]^2 along the
// diagonal, with a centred-difference check of the Poisson equation.

#include <cstdio>

#include <potrec/square2d.hpp>

int main() {
    // f = P_0 P_0 + (1/3) P_1(x) P_1(y)
    potrec::CoeffMatrix<double> f(1, 1);
    f(0, 0) = 1.0;
    f(1, 1) = 1.0 / 3.0;

    std::printf("x,y,potential,grad_x,grad_y\n");
    for (int i = 0; i <= 8; ++i) {
        const double t = -2.0 + 0.5 * i;
        if (t == 1.0 || t == -1.0) continue; // corners
        const auto r = potrec::potential_eval(f, potrec::BranchComplex<double>(t, t));
        std::printf("%g,%g,%.15g,%.15g,%.15g\n", t, t, r.potential, r.grad_x, r.grad_y);
    }

    // Laplacian u should equal 2 pi f inside the square.
    const double x = 0.3, y = -0.2, h = 1e-3;
    auto u = [&](double a, double b) { return potrec::potential_eval(f, potrec::BranchComplex<double>(a, b)).potential; };
    const double lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4 * u(x, y)) / (h * h);
    const double want = 2 * 3.141592653589793 * (1.0 + x * y / 3.0);
    std::printf("# laplacian at (%g,%g): %.8f, 2*pi*f = %.8f\n", x, y, lap, want);
    return 0;
}
