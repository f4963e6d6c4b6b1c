#pragma once

// Leapfrog finite-difference solver for the coupled system on (0, pi) with
// Dirichlet data u1(t, pi) = g1(t), u2(t, pi) = g2(t) and zero at x = 0. The
// memory term is carried by w(t, x) = int_0^t e^{-eta (t-s)} u1_xx(s, x) ds.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "memwave/modes.hpp"
#include "memwave/types.hpp"

namespace memwave {

struct FDGrid {
    std::size_t nx = 0;  // interior points, x_j = j dx, j = 1..nx
    double dx = 0.0;
    double dt = 0.0;
    std::size_t nt = 0;
    double T = 0.0;

    /// dx = pi / (nx + 1), dt = T / ceil(T / (cfl dx)).
    static FDGrid make(std::size_t nx, double T, double cfl = 0.5);
    /// Same spacing in x with an explicit number of time steps.
    static FDGrid with_steps(std::size_t nx, double T, std::size_t nt);

    std::vector<double> x() const;
    TimeGrid time_grid() const { return TimeGrid(0.0, T, nt); }
    void validate() const;
};

/// Interior values of (u1, u1_t, u2, u2_t) at t = 0.
struct InitialState {
    std::vector<double> u1;
    std::vector<double> v1;
    std::vector<double> u2;
    std::vector<double> v2;

    static InitialState zeros(const FDGrid& grid);
    /// u_i = sum_n alpha_in sin(n x), u_it = sum_n rho_in sin(n x), n = 1..data.size().
    static InitialState from_modes(const FDGrid& grid, std::span<const ModeData> data);
};

struct StateHistory {
    FDGrid grid;
    std::size_t stride = 0;              // snapshot spacing in steps
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> u1;  // interior values per snapshot
    std::vector<std::vector<double>> u2;
    std::vector<std::vector<double>> w;
    std::vector<double> z1x;  // one-sided x-derivative at pi, every step
    std::vector<double> z2x;
    std::vector<double> final_u1;
    std::vector<double> final_u2;
    std::vector<double> final_v1;  // second-order backward differences
    std::vector<double> final_v2;
};

struct SimulationOptions {
    std::size_t snapshot_stride = 0;  // 0: store only the first and last states
};

StateHistory simulate(const Parameters& params, const FDGrid& grid, const InitialState& initial,
                      const std::optional<TraceSignal>& g1 = std::nullopt,
                      const std::optional<TraceSignal>& g2 = std::nullopt,
                      const SimulationOptions& options = {});

/// Zero initial data driven by the boundary controls (linear interpolation in t).
StateHistory simulate_controlled(const Parameters& params, const TraceSignal& g1,
                                 const TraceSignal& g2, const FDGrid& grid, double T,
                                 const SimulationOptions& options = {});

/// Boundary derivative traces of a run, on the grid's time levels.
TracePair boundary_trace_fd(const StateHistory& history);

/// Fourth-order one-sided difference at x = pi from the boundary value and the
/// last four interior values (ordered toward the boundary).
double one_sided_derivative(double u_nm4, double u_nm3, double u_nm2, double u_nm1, double u_n,
                            double dx);

/// Sine coefficients c_m = 2/(nx+1) sum_j u_j sin(m x_j), m = 1..count.
std::vector<double> sine_coefficients(std::span<const double> u, const FDGrid& grid,
                                      std::size_t count);

/// Discrete L2(0, pi) norm sqrt(dx sum u_j^2).
double discrete_l2(std::span<const double> u, const FDGrid& grid);

/// Spectral H^-1 norm sqrt(pi/2 sum_m (c_m / m)^2) over all nx sine modes.
double discrete_hminus1(std::span<const double> u, const FDGrid& grid);

}  // namespace memwave
