#pragma once

// Test-only reference implementations, deliberately independent of the
// library code paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace poly_oracle {

using cd = std::complex<double>;

/// Weierstrass / Durand-Kerner simultaneous iteration on a polynomial given
/// highest degree first.
inline std::vector<cd> durand_kerner(const std::vector<double>& c, int iterations = 2000) {
    const std::size_t deg = c.size() - 1;
    auto eval = [&](cd z) {
        cd p = c[0];
        for (std::size_t k = 1; k < c.size(); ++k) p = p * z + c[k];
        return p / c[0];
    };
    double radius = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) radius = std::max(radius, std::abs(c[k] / c[0]));
    radius = 1.0 + radius;
    std::vector<cd> z(deg);
    for (std::size_t k = 0; k < deg; ++k) z[k] = std::polar(radius, 0.4 + 2.0 * M_PI * k / deg);
    for (int it = 0; it < iterations; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            cd den = 1.0;
            for (std::size_t j = 0; j < deg; ++j) {
                if (j != i) den *= z[i] - z[j];
            }
            const cd step = eval(z[i]) / den;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15) break;
    }
    return z;
}

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

/// Composite Gauss-Legendre (5 points per panel) of a complex integrand.
inline cd gauss_legendre(const std::function<cd(double)>& f, double a, double b, int panels) {
    static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                0.9061798459386640};
    static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                0.4786286704993665, 0.2369268850561891};
    const double h = (b - a) / panels;
    cd s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int k = 0; k < 5; ++k) s += w[k] * f(mid + 0.5 * h * x[k]);
    }
    return 0.5 * h * s;
}

}  // namespace poly_oracle
