#include "memwave/quadrature.hpp"

#include "memwave/types.hpp"

namespace memwave {

double trapezoid(std::span<const double> f, double dt) {
    if (f.size() < 2) throw InvalidArgument("trapezoid needs at least two samples");
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t k = 1; k + 1 < f.size(); ++k) s += f[k];
    return s * dt;
}

std::vector<double> simpson_weights(std::size_t n_samples, double dt) {
    if (n_samples < 2) throw InvalidArgument("simpson needs at least two samples");
    std::vector<double> w(n_samples, 0.0);
    if (n_samples == 2) {
        w[0] = w[1] = 0.5 * dt;
        return w;
    }
    const std::size_t intervals = n_samples - 1;
    // Simpson over [0, m], 3/8 rule over the trailing three intervals if odd.
    const std::size_t m = (intervals % 2 == 0) ? intervals : intervals - 3;
    for (std::size_t k = 0; k + 2 <= m; k += 2) {
        w[k] += dt / 3.0;
        w[k + 1] += 4.0 * dt / 3.0;
        w[k + 2] += dt / 3.0;
    }
    if (m != intervals) {
        w[m] += 3.0 * dt / 8.0;
        w[m + 1] += 9.0 * dt / 8.0;
        w[m + 2] += 9.0 * dt / 8.0;
        w[m + 3] += 3.0 * dt / 8.0;
    }
    return w;
}

double simpson(std::span<const double> f, double dt) {
    const auto w = simpson_weights(f.size(), dt);
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * f[k];
    return s;
}

}  // namespace memwave
