#include "memwave/hum.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "memwave/core_kernel.hpp"
#include "memwave/parallel.hpp"
#include "memwave/quadrature.hpp"
#include "memwave/series.hpp"
#include "memwave/spectrum.hpp"

namespace memwave {
namespace {

void require_horizon(const TimeGrid& grid, double T, const char* what) {
    const double tol = 1e-12 * std::max(1.0, T);
    if (std::abs(grid.t0) > tol || std::abs(grid.t1 - T) > tol) {
        throw InvalidArgument(std::string(what) + ": time grid must cover [0, T]");
    }
}

TracePair adjoint_traces_with(const Parameters& params, std::span<const ModeData> final_data,
                              double T, const TimeGrid& grid, std::span<const ModeSpectrum> spectra) {
    require_horizon(grid, T, "adjoint_traces");
    if (params.b() == 0.0) {
        throw InvalidArgument("adjoint_traces: coupling b must be nonzero for the adjoint reduction");
    }
    if (final_data.empty()) throw InvalidArgument("adjoint_traces: no modes");
    const Parameters forward = params.swapped_coupling();

    std::vector<ModeData> data(final_data.begin(), final_data.end());
    for (auto& d : data) {
        d.rho1 = -d.rho1;
        d.rho2 = -d.rho2;
    }
    const ModeSet ms = assemble_mode_set(forward, data, spectra);
    auto tr = boundary_trace(ms, grid);
    std::vector<double> z1(tr.first.values().rbegin(), tr.first.values().rend());
    std::vector<double> z2(tr.second.values().rbegin(), tr.second.values().rend());
    return {TraceSignal(grid, std::move(z1)), TraceSignal(grid, std::move(z2))};
}

}  // namespace

double VerificationReport::max_error() const { return std::max({u1_l2, u2_l2, v1_hm1, v2_hm1}); }

FinalData unit_final_data(int N, int index) {
    if (N < 1 || index < 0 || index >= 4 * N) throw InvalidArgument("unit_final_data: index out of range");
    FinalData z(static_cast<std::size_t>(N));
    auto& d = z[static_cast<std::size_t>(index / 4)];
    switch (index % 4) {
        case 0: d.alpha1 = 1.0; break;
        case 1: d.rho1 = 1.0; break;
        case 2: d.alpha2 = 1.0; break;
        default: d.rho2 = 1.0; break;
    }
    return z;
}

FinalData final_data_from_vector(const Eigen::VectorXd& c) {
    if (c.size() % 4 != 0) throw InvalidArgument("final data vector length must be a multiple of 4");
    FinalData z(static_cast<std::size_t>(c.size() / 4));
    for (std::size_t n = 0; n < z.size(); ++n) {
        const auto i = static_cast<Eigen::Index>(4 * n);
        z[n] = {c(i), c(i + 1), c(i + 2), c(i + 3)};
    }
    return z;
}

TracePair adjoint_traces(const Parameters& params, std::span<const ModeData> final_data, double T,
                         const TimeGrid& grid) {
    return adjoint_traces_with(params, final_data, T, grid, {});
}

AdjointBasis adjoint_basis(const Parameters& params, int N, double T, std::size_t intervals) {
    if (N < 1) throw InvalidArgument("adjoint_basis: N must be positive");
    if (params.b() == 0.0) {
        throw InvalidArgument("adjoint_basis: coupling b must be nonzero for the adjoint reduction");
    }
    const TimeGrid grid(0.0, T, intervals);
    const auto spectra = string_spectra(params.swapped_coupling(), N);
    const std::size_t count = 4 * static_cast<std::size_t>(N);

    AdjointBasis basis{grid, std::vector<TraceSignal>(count, TraceSignal::zeros(grid)),
                       std::vector<TraceSignal>(count, TraceSignal::zeros(grid))};
    parallel_for(count, [&](std::size_t j) {
        const auto z = unit_final_data(N, static_cast<int>(j));
        auto tr = adjoint_traces_with(params, z, T, grid, spectra);
        basis.control1[j] = tail_transform(tr.first, params, T);
        basis.z2x[j] = std::move(tr.second);
    });
    return basis;
}

GramSystem gram_matrix(const AdjointBasis& basis) {
    const auto m = static_cast<Eigen::Index>(basis.control1.size());
    if (m == 0) throw InvalidArgument("gram_matrix: empty basis");
    const auto w = simpson_weights(basis.grid.size(), basis.grid.dt());
    const auto K = static_cast<Eigen::Index>(w.size());

    Eigen::MatrixXd A(m, K);
    Eigen::MatrixXd B(m, K);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index k = 0; k < K; ++k) {
            const double sw = std::sqrt(w[static_cast<std::size_t>(k)]);
            A(i, k) = sw * basis.control1[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            B(i, k) = sw * basis.z2x[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        }
    }
    GramSystem g;
    g.G = A * A.transpose() + B * B.transpose();
    const double norm = g.G.norm();
    g.symmetry_error = norm > 0.0 ? (g.G - g.G.transpose()).norm() / norm : 0.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.G, Eigen::EigenvaluesOnly);
    g.min_eigenvalue = eig.eigenvalues()(0);
    g.max_eigenvalue = eig.eigenvalues()(m - 1);
    g.condition_estimate = g.min_eigenvalue > 0.0 ? g.max_eigenvalue / g.min_eigenvalue : INFINITY;
    return g;
}

Eigen::VectorXd rhs_vector(const TargetState& target, int N) {
    if (target.N() != N) {
        std::ostringstream msg;
        msg << "rhs_vector: target has " << target.N() << " modes, expected " << N;
        throw InvalidArgument(msg.str());
    }
    Eigen::VectorXd b(4 * N);
    const double half_pi = 0.5 * std::numbers::pi;
    for (int n = 0; n < N; ++n) {
        const auto& t = target.modes[static_cast<std::size_t>(n)];
        // Pairing with a unit datum in slot (z1^0, z1^1, z2^0, z2^1).
        b(4 * n + 0) = -half_pi * t.rho1;
        b(4 * n + 1) = half_pi * t.alpha1;
        b(4 * n + 2) = -half_pi * t.rho2;
        b(4 * n + 3) = half_pi * t.alpha2;
    }
    return b;
}

ControlPair assemble_controls(const AdjointBasis& basis, const Eigen::VectorXd& coeffs) {
    if (static_cast<std::size_t>(coeffs.size()) != basis.control1.size()) {
        throw InvalidArgument("assemble_controls: coefficient count does not match the basis");
    }
    std::vector<double> g1(basis.grid.size(), 0.0);
    std::vector<double> g2(basis.grid.size(), 0.0);
    for (std::size_t j = 0; j < basis.control1.size(); ++j) {
        const double c = coeffs(static_cast<Eigen::Index>(j));
        if (c == 0.0) continue;
        for (std::size_t k = 0; k < g1.size(); ++k) {
            g1[k] += c * basis.control1[j][k];
            g2[k] += c * basis.z2x[j][k];
        }
    }
    return {TraceSignal(basis.grid, std::move(g1)), TraceSignal(basis.grid, std::move(g2))};
}

HumResult solve_controls(const Parameters& params, const TargetState& target, double T,
                         const HumOptions& options) {
    const int N = target.N();
    if (N < 1) throw InvalidArgument("solve_controls: target has no modes");
    if (!(T > 0.0)) throw InvalidArgument("solve_controls: T must be positive");
    const auto basis = adjoint_basis(params, N, T, options.intervals);

    GramSystem g = gram_matrix(basis);
    g.rhs = rhs_vector(target, N);
    g.regularization = options.regularization;
    if (!(g.condition_estimate <= options.max_condition) && options.regularization <= 0.0) {
        std::ostringstream msg;
        msg << "solve_controls: Gram condition estimate " << g.condition_estimate << " exceeds "
            << options.max_condition << " (T=" << T << ", N=" << N
            << "); T may be below the observability threshold or N too large for the trace grid";
        throw NumericalFailure(msg.str());
    }

    Eigen::MatrixXd A = g.G;
    if (options.regularization > 0.0) A.diagonal().array() += options.regularization;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        g.solution = ldlt.solve(g.rhs);
        g.solver = "ldlt";
    } else {
        Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg;
        cg.setTolerance(1e-14);
        cg.setMaxIterations(static_cast<Eigen::Index>(20 * A.rows()));
        cg.compute(A);
        g.solution = cg.solve(g.rhs);
        if (cg.info() != Eigen::Success) {
            throw NumericalFailure("solve_controls: conjugate gradients did not converge");
        }
        g.solver = "cg";
    }

    HumResult out{assemble_controls(basis, g.solution), std::move(g), {}};
    out.final_data = final_data_from_vector(out.gram.solution);
    return out;
}

std::array<std::vector<double>, 4> target_profiles(const TargetState& target, const FDGrid& grid) {
    const auto x = grid.x();
    std::array<std::vector<double>, 4> p;
    for (auto& v : p) v.assign(grid.nx, 0.0);
    for (std::size_t k = 0; k < target.modes.size(); ++k) {
        const auto& m = target.modes[k];
        if (m.is_zero()) continue;
        const double n = static_cast<double>(k + 1);
        for (std::size_t j = 0; j < grid.nx; ++j) {
            const double s = std::sin(n * x[j]);
            p[0][j] += m.alpha1 * s;
            p[1][j] += m.rho1 * s;
            p[2][j] += m.alpha2 * s;
            p[3][j] += m.rho2 * s;
        }
    }
    return p;
}

VerificationReport verify_control(const Parameters& params, const ControlPair& controls,
                                  const TargetState& target, double T, const FDGrid& grid,
                                  StateHistory* history) {
    const auto h = simulate_controlled(params, controls.g1, controls.g2, grid, T);
    if (history) *history = h;
    const auto [t10, t11, t20, t21] = target_profiles(target, grid);
    std::vector<double> e10(grid.nx), e11(grid.nx), e20(grid.nx), e21(grid.nx);
    for (std::size_t j = 0; j < grid.nx; ++j) {
        e10[j] = h.final_u1[j] - t10[j];
        e11[j] = h.final_v1[j] - t11[j];
        e20[j] = h.final_u2[j] - t20[j];
        e21[j] = h.final_v2[j] - t21[j];
    }

    VerificationReport r;
    r.nx = grid.nx;
    r.nt = grid.nt;
    r.target_norm = std::sqrt(std::pow(discrete_l2(t10, grid), 2) + std::pow(discrete_l2(t20, grid), 2) +
                              std::pow(discrete_hminus1(t11, grid), 2) +
                              std::pow(discrete_hminus1(t21, grid), 2));
    const double scale = r.target_norm > 0.0 ? 1.0 / r.target_norm : 1.0;
    r.u1_l2 = discrete_l2(e10, grid) * scale;
    r.u2_l2 = discrete_l2(e20, grid) * scale;
    r.v1_hm1 = discrete_hminus1(e11, grid) * scale;
    r.v2_hm1 = discrete_hminus1(e21, grid) * scale;

    const std::size_t N = std::min(target.modes.size(), grid.nx);
    const auto c10 = sine_coefficients(e10, grid, N);
    const auto c11 = sine_coefficients(e11, grid, N);
    const auto c20 = sine_coefficients(e20, grid, N);
    const auto c21 = sine_coefficients(e21, grid, N);
    double s = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
        const double inv = 1.0 / static_cast<double>(m + 1);
        s += c10[m] * c10[m] + c20[m] * c20[m] + std::pow(c11[m] * inv, 2) + std::pow(c21[m] * inv, 2);
    }
    r.projected = std::sqrt(0.5 * std::numbers::pi * s) * scale;
    return r;
}

}  // namespace memwave
