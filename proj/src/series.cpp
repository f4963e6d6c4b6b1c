#include "memwave/series.hpp"

#include <cmath>

#include "memwave/parallel.hpp"

namespace memwave {

ModeSet assemble_mode_set(const Parameters& params, std::span<const ModeData> data,
                          std::span<const ModeSpectrum> spectra) {
    if (data.empty()) throw InvalidArgument("assemble_mode_set: need at least one mode");
    if (!spectra.empty() && spectra.size() < data.size()) {
        throw InvalidArgument("assemble_mode_set: fewer spectra than data modes");
    }
    params.require_coupling("assemble_mode_set");
    for (const auto& d : data) {
        if (!std::isfinite(d.alpha1) || !std::isfinite(d.rho1) || !std::isfinite(d.alpha2) ||
            !std::isfinite(d.rho2)) {
            throw InvalidArgument("assemble_mode_set: mode data must be finite");
        }
    }

    ModeSet ms{params, std::vector<ModeEntry>(data.size())};
    parallel_for(data.size(), [&](std::size_t k) {
        auto& e = ms.modes[k];
        if (spectra.empty()) {
            const double n = static_cast<double>(k + 1);
            e.spectrum = solve_quintic(params, n * n, static_cast<int>(k) + 1);
        } else {
            e.spectrum = spectra[k];
        }
        e.data = data[k];
        e.coeffs = mode_coefficients(params, e.spectrum, e.data);
    });
    return ms;
}

Snapshot eval_solution(const ModeSet& ms, double t, std::span<const double> x, SeriesForm form) {
    if (t < 0.0) throw InvalidArgument("eval_solution: t must be nonnegative");
    Snapshot out{std::vector<double>(x.size(), 0.0), std::vector<double>(x.size(), 0.0)};
    for (const auto& e : ms.modes) {
        if (e.data.is_zero()) continue;
        const auto v = mode_series_eval(ms.params, e.spectrum, e.coeffs, t, form);
        const double n = e.spectrum.n;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double s = std::sin(n * x[j]);
            out.u1[j] += v.f1 * s;
            out.u2[j] += v.f2 * s;
        }
    }
    return out;
}

TracePair boundary_trace(const ModeSet& ms, const TimeGrid& grid, SeriesForm form) {
    std::vector<double> z1(grid.size(), 0.0);
    std::vector<double> z2(grid.size(), 0.0);
    for (const auto& e : ms.modes) {
        if (e.data.is_zero()) continue;
        const int n = e.spectrum.n;
        const double factor = (n % 2 == 0 ? 1.0 : -1.0) * n;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto v = mode_series_eval(ms.params, e.spectrum, e.coeffs, grid.time(k), form);
            z1[k] += factor * v.f1;
            z2[k] += factor * v.f2;
        }
    }
    return {TraceSignal(grid, std::move(z1)), TraceSignal(grid, std::move(z2))};
}

std::array<double, 4> energy_norms(const ModeSet& ms) {
    std::array<double, 4> e{};
    for (const auto& m : ms.modes) {
        const double lambda = m.spectrum.lambda;
        e[0] += m.data.alpha1 * m.data.alpha1 * lambda;
        e[1] += m.data.rho1 * m.data.rho1;
        e[2] += m.data.alpha2 * m.data.alpha2 * lambda;
        e[3] += m.data.rho2 * m.data.rho2;
    }
    return e;
}

}  // namespace memwave
