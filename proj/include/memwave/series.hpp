#pragma once

// Truncated sine series u_i(t, x) = sum_n f_in(t) sin(n x) and their
// x-derivatives at x = pi.

#include <array>
#include <span>
#include <vector>

#include "memwave/modes.hpp"

namespace memwave {

struct ModeEntry {
    ModeSpectrum spectrum;
    ModeData data;
    ModeCoefficients coeffs;
};

struct ModeSet {
    Parameters params;
    std::vector<ModeEntry> modes;  // modes[k] carries n = k + 1

    int N() const { return static_cast<int>(modes.size()); }
};

struct Snapshot {
    std::vector<double> u1;
    std::vector<double> u2;
};

/// Builds the mode set for data on modes n = 1..data.size(). Eigenvalues
/// default to n^2; when `spectra` is non-empty it must match data in length and
/// is reused instead of recomputing roots.
ModeSet assemble_mode_set(const Parameters& params, std::span<const ModeData> data,
                          std::span<const ModeSpectrum> spectra = {});

Snapshot eval_solution(const ModeSet& ms, double t, std::span<const double> x,
                       SeriesForm form = SeriesForm::Exact);

/// u_x(t, pi) = sum_n (-1)^n n f_n(t) sampled on the grid.
TracePair boundary_trace(const ModeSet& ms, const TimeGrid& grid, SeriesForm form = SeriesForm::Exact);

/// (sum alpha1^2 lambda, sum rho1^2, sum alpha2^2 lambda, sum rho2^2).
std::array<double, 4> energy_norms(const ModeSet& ms);

}  // namespace memwave
