#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "memwave/pde_oracle.hpp"
#include "memwave/quadrature.hpp"
#include "memwave/series.hpp"

using namespace memwave;

namespace {

const Parameters P(0.3, 1.0, 0.1, 0.1);
constexpr double pi = std::numbers::pi;

std::vector<ModeData> draw(std::mt19937_64& rng, int N) {
    std::normal_distribution<double> g;
    std::vector<ModeData> d(N);
    for (int n = 1; n <= N; ++n) d[n - 1] = {g(rng) / n, g(rng) / n, g(rng) / n, g(rng) / n};
    return d;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST(EvalSolution, VanishesAtEndpoints) {
    std::mt19937_64 rng(1);
    const auto ms = assemble_mode_set(P, draw(rng, 6));
    const std::vector<double> x{0.0, pi};
    for (double t : {0.0, 0.7, 3.1}) {
        const auto s = eval_solution(ms, t, x);
        for (double v : s.u1) EXPECT_NEAR(v, 0.0, 1e-12);
        for (double v : s.u2) EXPECT_NEAR(v, 0.0, 1e-12);
    }
    EXPECT_THROW(eval_solution(ms, -1.0, x), InvalidArgument);
}

TEST(EvalSolution, ReproducesInitialData) {
    std::mt19937_64 rng(2);
    const auto data = draw(rng, 8);
    const auto ms = assemble_mode_set(P, data);
    std::vector<double> x;
    for (int j = 1; j < 40; ++j) x.push_back(j * pi / 40);
    const auto s = eval_solution(ms, 0.0, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
        double u1 = 0.0, u2 = 0.0;
        for (int n = 1; n <= 8; ++n) {
            u1 += data[n - 1].alpha1 * std::sin(n * x[j]);
            u2 += data[n - 1].alpha2 * std::sin(n * x[j]);
        }
        EXPECT_NEAR(s.u1[j], u1, 1e-9);
        EXPECT_NEAR(s.u2[j], u2, 1e-9);
    }
}

TEST(EvalSolution, Linearity) {
    std::mt19937_64 rng(3);
    const auto a = draw(rng, 6);
    const auto b = draw(rng, 6);
    std::vector<ModeData> sum(6);
    for (int n = 0; n < 6; ++n) {
        sum[n] = {a[n].alpha1 + b[n].alpha1, a[n].rho1 + b[n].rho1, a[n].alpha2 + b[n].alpha2,
                  a[n].rho2 + b[n].rho2};
    }
    const std::vector<double> x{0.3, 1.1, 2.0, 2.9};
    const auto sa = eval_solution(assemble_mode_set(P, a), 1.7, x);
    const auto sb = eval_solution(assemble_mode_set(P, b), 1.7, x);
    const auto ss = eval_solution(assemble_mode_set(P, sum), 1.7, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
        EXPECT_NEAR(ss.u1[j], sa.u1[j] + sb.u1[j], 1e-12);
        EXPECT_NEAR(ss.u2[j], sa.u2[j] + sb.u2[j], 1e-12);
    }
}

TEST(EvalSolution, SingleModeAgainstFiniteDifferences) {
    std::vector<ModeData> data(2);
    data[1] = {1.0, 0.0, 0.0, 0.0};
    const auto ms = assemble_mode_set(P, data);
    const double T = 4.0;
    const auto grid = FDGrid::make(800, T);
    SimulationOptions opt;
    opt.snapshot_stride = grid.nt / 4;
    const auto h = simulate(P, grid, InitialState::from_modes(grid, data), std::nullopt, std::nullopt, opt);
    const auto x = grid.x();
    // 20 space-time points: 5 positions at 4 snapshot times.
    std::vector<double> fd, sp;
    for (std::size_t s = 1; s < h.snapshot_times.size(); ++s) {
        for (std::size_t j : {100u, 250u, 400u, 550u, 700u}) {
            const std::vector<double> xj{x[j]};
            const auto v = eval_solution(ms, h.snapshot_times[s], xj);
            sp.push_back(v.u1[0]);
            sp.push_back(v.u2[0]);
            fd.push_back(h.u1[s][j]);
            fd.push_back(h.u2[s][j]);
        }
    }
    ASSERT_EQ(sp.size(), 40u);
    EXPECT_LT(rel_l2(fd, sp), 1e-2);
}

TEST(BoundaryTrace, ZeroAndSingleMode) {
    const TimeGrid g(0.0, 2.0, 200);
    const auto zero = boundary_trace(assemble_mode_set(P, std::vector<ModeData>(3)), g);
    EXPECT_EQ(zero.first.sup_norm(), 0.0);
    EXPECT_EQ(zero.second.sup_norm(), 0.0);
    const std::vector<ModeData> one{{1.0, 0.0, 0.0, 0.0}};
    const auto tr = boundary_trace(assemble_mode_set(P, one), g);
    EXPECT_NEAR(tr.first[0], -1.0, 1e-12);
    EXPECT_NEAR(tr.second[0], 0.0, 1e-12);
}

TEST(BoundaryTrace, MatchesFiniteDifferenceTrace) {
    std::mt19937_64 rng(4);
    const auto data = draw(rng, 8);
    const double T = 4.0;
    const auto grid = FDGrid::make(800, T);
    const auto h = simulate(P, grid, InitialState::from_modes(grid, data));
    const auto fd = boundary_trace_fd(h);
    const auto sp = boundary_trace(assemble_mode_set(P, data), grid.time_grid());
    EXPECT_LT(rel_l2(fd.first.values(), sp.first.values()), 0.02);
    EXPECT_LT(rel_l2(fd.second.values(), sp.second.values()), 0.02);
}

TEST(EnergyNorms, Values) {
    const auto z = energy_norms(assemble_mode_set(P, std::vector<ModeData>(4)));
    for (double v : z) EXPECT_EQ(v, 0.0);
    std::vector<ModeData> d(3);
    d[2].alpha1 = 2.0;
    EXPECT_DOUBLE_EQ(energy_norms(assemble_mode_set(P, d))[0], 36.0);
}

TEST(EnergyNorms, ParsevalAgainstQuadrature) {
    std::mt19937_64 rng(5);
    const auto data = draw(rng, 10);
    const auto e = energy_norms(assemble_mode_set(P, data));
    // int_0^pi (d/dx u1^0)^2 dx = pi/2 sum n^2 alpha1^2
    const int M = 2048;
    std::vector<double> f(M + 1);
    for (int j = 0; j <= M; ++j) {
        const double x = j * pi / M;
        double du = 0.0;
        for (int n = 1; n <= 10; ++n) du += data[n - 1].alpha1 * n * std::cos(n * x);
        f[j] = du * du;
    }
    const double q = simpson(f, pi / M) * 2.0 / pi;
    EXPECT_NEAR(q, e[0], 1e-3 * e[0]);
}

TEST(ModeSet, EnergyEquivalence) {
    std::mt19937_64 rng(6);
    double lo = INFINITY, hi = 0.0;
    for (int draw_i = 0; draw_i < 30; ++draw_i) {
        const auto ms = assemble_mode_set(P, draw(rng, 16));
        const auto e = energy_norms(ms);
        double s = 0.0;
        for (const auto& m : ms.modes) {
            s += m.spectrum.lambda * (std::norm(m.coeffs.C) + std::norm(m.coeffs.d * m.coeffs.D));
        }
        const double r = s / (e[0] + e[1] + e[2] + e[3]);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.05);
    EXPECT_LT(hi, 1.0);
}

TEST(ModeSet, ReusesSpectraAndValidates) {
    std::vector<ModeData> d(3);
    EXPECT_THROW(assemble_mode_set(P, std::vector<ModeData>{}), InvalidArgument);
    d[0].alpha1 = NAN;
    EXPECT_THROW(assemble_mode_set(P, d), InvalidArgument);
    EXPECT_THROW(assemble_mode_set(Parameters(0.3, 1.0, 0.0, 0.1), std::vector<ModeData>(2)),
                 InvalidArgument);
}
