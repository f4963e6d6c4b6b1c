#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "memwave/modes.hpp"
#include "memwave/pde_oracle.hpp"
#include "memwave/series.hpp"

using namespace memwave;

namespace {

const Parameters P(0.3, 1.0, 0.1, 0.1);
constexpr double pi = std::numbers::pi;

// Leapfrog energy between levels k and k+1 for a pure wave, boundary zero.
double staggered_energy(const std::vector<double>& a, const std::vector<double>& b, double dx, double dt) {
    double kin = 0.0, pot = 0.0;
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double v = (b[j] - a[j]) / dt;
        kin += v * v;
        const double ra = j + 1 < n ? a[j + 1] : 0.0;
        const double rb = j + 1 < n ? b[j + 1] : 0.0;
        pot += (ra - a[j]) * (rb - b[j]) / (dx * dx);
    }
    pot += a[0] * b[0] / (dx * dx);
    return 0.5 * dx * (kin + pot);
}

double error_vs_series(std::size_t nx, double T) {
    std::vector<ModeData> data(2);
    data[1] = {1.0, 0.5, -0.4, 0.2};
    const auto grid = FDGrid::make(nx, T);
    const auto h = simulate(P, grid, InitialState::from_modes(grid, data));
    const auto ref = eval_solution(assemble_mode_set(P, data), T, grid.x());
    double e = 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
        e += std::pow(h.final_u1[j] - ref.u1[j], 2) + std::pow(h.final_u2[j] - ref.u2[j], 2);
    }
    return std::sqrt(grid.dx * e);
}

}  // namespace

TEST(FDGrid, Construction) {
    const auto g = FDGrid::make(800, 8.0);
    EXPECT_DOUBLE_EQ(g.dx, pi / 801);
    EXPECT_LE(g.dt, 0.5 * g.dx);
    EXPECT_NEAR(g.dt * g.nt, 8.0, 1e-12);
    EXPECT_THROW(FDGrid::make(8, 1.0), InvalidArgument);
    EXPECT_THROW(FDGrid::with_steps(100, 1.0, 10), InvalidArgument);
    EXPECT_THROW(FDGrid::make(100, -1.0), InvalidArgument);
}

TEST(Simulate, ZeroDataZeroControls) {
    const auto g = FDGrid::make(64, 2.0);
    const auto h = simulate_controlled(P, TraceSignal::zeros(g.time_grid()), TraceSignal::zeros(g.time_grid()), g, 2.0);
    for (const auto& row : h.u1) for (double v : row) EXPECT_EQ(v, 0.0);
    for (double v : h.final_v2) EXPECT_EQ(v, 0.0);
    const auto tr = boundary_trace_fd(h);
    EXPECT_EQ(tr.first.sup_norm(), 0.0);
    EXPECT_EQ(tr.second.sup_norm(), 0.0);
    EXPECT_THROW(simulate_controlled(P, TraceSignal::zeros(g.time_grid()), TraceSignal::zeros(g.time_grid()), g, 3.0),
                 InvalidArgument);
}

TEST(Simulate, RejectsBadInput) {
    const auto g = FDGrid::make(64, 2.0);
    auto init = InitialState::zeros(g);
    init.u1.pop_back();
    EXPECT_THROW(simulate(P, g, init), InvalidArgument);
    auto bad = InitialState::zeros(g);
    bad.u1[10] = NAN;
    EXPECT_THROW(simulate(P, g, bad), NumericalFailure);
    const auto short_control = TraceSignal::zeros(TimeGrid(0.0, 1.0, 10));
    EXPECT_THROW(simulate(P, g, InitialState::zeros(g), short_control), InvalidArgument);
}

TEST(Simulate, DecoupledWaveConservesEnergy) {
    const Parameters p(1e-3, 1.0, 0.0, 0.0);
    const double T = 4.0;
    const auto g = FDGrid::make(200, T);
    std::vector<ModeData> data(3);
    data[0].alpha2 = 1.0;
    data[2].rho2 = 0.5;
    SimulationOptions opt;
    opt.snapshot_stride = 1;
    const auto h = simulate(p, g, InitialState::from_modes(g, data), std::nullopt, std::nullopt, opt);
    const double e0 = staggered_energy(h.u2[0], h.u2[1], g.dx, g.dt);
    double drift = 0.0;
    for (std::size_t k = 1; k + 1 < h.u2.size(); ++k) {
        drift = std::max(drift, std::abs(staggered_energy(h.u2[k], h.u2[k + 1], g.dx, g.dt) - e0));
    }
    EXPECT_LT(drift / e0, 1e-3);
}

TEST(Simulate, MemoryDoesNotInjectEnergy) {
    const Parameters p(0.05, 1.0, 0.0, 0.0);
    const double T = 4.0;
    const auto g = FDGrid::make(200, T);
    std::vector<ModeData> data(2);
    data[1].alpha1 = 1.0;
    SimulationOptions opt;
    opt.snapshot_stride = 1;
    const auto h = simulate(p, g, InitialState::from_modes(g, data), std::nullopt, std::nullopt, opt);
    const double e0 = staggered_energy(h.u1[0], h.u1[1], g.dx, g.dt);
    const double eT = staggered_energy(h.u1[h.u1.size() - 2], h.u1.back(), g.dx, g.dt);
    EXPECT_LT(eT, e0 * (1.0 + 1e-3));
}

TEST(Simulate, SingleModeMatchesOdeOracle) {
    const double T = 4.0;
    const auto g = FDGrid::make(800, T);
    std::vector<ModeData> data(2);
    data[1] = {1.0, 0.0, 0.0, 0.0};
    SimulationOptions opt;
    opt.snapshot_stride = g.nt / 8;
    const auto h = simulate(P, g, InitialState::from_modes(g, data), std::nullopt, std::nullopt, opt);
    const auto [f1, f2] = mode_ode_oracle(P, 4.0, data[1], g.time_grid());
    const auto x = g.x();
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < h.snapshot_times.size(); ++s) {
        const auto k = static_cast<std::size_t>(std::llround(h.snapshot_times[s] / g.dt));
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double s2 = std::sin(2.0 * x[j]);
            num += std::pow(h.u1[s][j] - f1[k] * s2, 2) + std::pow(h.u2[s][j] - f2[k] * s2, 2);
            den += std::pow(f1[k] * s2, 2) + std::pow(f2[k] * s2, 2);
        }
    }
    EXPECT_LT(std::sqrt(num / den), 1e-2);
}

TEST(Simulate, BoundaryRowsCarryControl) {
    const double T = 1.0;
    const auto g = FDGrid::make(64, T);
    const auto g1 = TraceSignal::sample(g.time_grid(), [](double t) { return std::sin(t); });
    const auto h = simulate_controlled(P, g1, TraceSignal::zeros(g.time_grid()), g, T);
    EXPECT_GT(std::abs(h.final_u1.back()), 0.0);
    EXPECT_EQ(h.z1x.size(), g.nt + 1);
}

TEST(BoundaryTraceFd, PureWaveMode) {
    const Parameters p(1e-4, 1.0, 0.0, 0.0);
    const double T = 1.0;
    const auto g = FDGrid::make(800, T);
    for (int n : {1, 2, 3}) {
        std::vector<ModeData> data(n);
        data[n - 1].alpha1 = 1.0;
        const auto tr = boundary_trace_fd(simulate(p, g, InitialState::from_modes(g, data)));
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < tr.first.size(); ++k) {
            const double ref = (n % 2 ? -1.0 : 1.0) * n * std::cos(n * tr.first.time(k));
            num += std::pow(tr.first[k] - ref, 2);
            den += ref * ref;
        }
        EXPECT_LT(std::sqrt(num / den), 0.02) << n;
    }
}

TEST(BoundaryTraceFd, OneSidedStencilExactOnQuartics) {
    const double dx = 0.1;
    auto f = [](double x) { return x * x * x * x - 2 * x * x + x; };
    const double xn = 1.0;
    const double d = one_sided_derivative(f(xn - 4 * dx), f(xn - 3 * dx), f(xn - 2 * dx), f(xn - dx), f(xn), dx);
    EXPECT_NEAR(d, 4.0 - 4.0 + 1.0, 1e-10);
}

TEST(Simulate, SecondOrderConvergence) {
    const double T = 2.0;
    const double e1 = error_vs_series(199, T);
    const double e2 = error_vs_series(399, T);
    const double e3 = error_vs_series(799, T);
    const double p1 = std::log2(e1 / e2);
    const double p2 = std::log2(e2 / e3);
    EXPECT_GT(p1, 1.7);
    EXPECT_LT(p1, 2.3);
    EXPECT_GT(p2, 1.7);
    EXPECT_LT(p2, 2.3);
}

TEST(DiscreteNorms, SineModes) {
    const auto g = FDGrid::make(200, 1.0);
    const auto x = g.x();
    std::vector<double> u(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) u[j] = 3.0 * std::sin(2.0 * x[j]) - std::sin(5.0 * x[j]);
    const auto c = sine_coefficients(u, g, 6);
    EXPECT_NEAR(c[1], 3.0, 1e-12);
    EXPECT_NEAR(c[4], -1.0, 1e-12);
    EXPECT_NEAR(c[0], 0.0, 1e-12);
    EXPECT_NEAR(discrete_l2(u, g), std::sqrt(pi / 2 * 10.0), 1e-12);
    EXPECT_NEAR(discrete_hminus1(u, g), std::sqrt(pi / 2 * (9.0 / 4.0 + 1.0 / 25.0)), 1e-12);
}
