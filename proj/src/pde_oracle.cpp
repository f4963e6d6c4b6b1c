#include "memwave/pde_oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace memwave {
namespace {

void apply_laplacian(const std::vector<double>& u, double boundary, double dx, std::vector<double>& out) {
    const std::size_t n = u.size();
    const double inv = 1.0 / (dx * dx);
    for (std::size_t j = 0; j < n; ++j) {
        const double left = j > 0 ? u[j - 1] : 0.0;
        const double right = j + 1 < n ? u[j + 1] : boundary;
        out[j] = (left - 2.0 * u[j] + right) * inv;
    }
}

double trace_of(const std::vector<double>& u, double boundary, double dx) {
    const std::size_t n = u.size();
    return one_sided_derivative(u[n - 4], u[n - 3], u[n - 2], u[n - 1], boundary, dx);
}

void require_finite(const std::vector<double>& u, std::size_t step, const char* field) {
    for (double v : u) {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "finite-difference solver produced a non-finite " << field << " at step " << step;
            throw NumericalFailure(msg.str());
        }
    }
}

}  // namespace

FDGrid FDGrid::make(std::size_t nx, double T, double cfl) {
    if (!(T > 0.0) || !(cfl > 0.0)) throw InvalidArgument("FDGrid: T and cfl must be positive");
    const double dx = std::numbers::pi / static_cast<double>(nx + 1);
    const auto nt = static_cast<std::size_t>(std::ceil(T / (cfl * dx)));
    return with_steps(nx, T, nt);
}

FDGrid FDGrid::with_steps(std::size_t nx, double T, std::size_t nt) {
    FDGrid g;
    g.nx = nx;
    g.dx = std::numbers::pi / static_cast<double>(nx + 1);
    g.nt = nt;
    g.T = T;
    g.dt = nt > 0 ? T / static_cast<double>(nt) : 0.0;
    g.validate();
    return g;
}

std::vector<double> FDGrid::x() const {
    std::vector<double> out(nx);
    for (std::size_t j = 0; j < nx; ++j) out[j] = static_cast<double>(j + 1) * dx;
    return out;
}

void FDGrid::validate() const {
    std::ostringstream msg;
    if (nx < 16) msg << "nx must be at least 16 (got " << nx << "); ";
    if (!(T > 0.0)) msg << "T must be positive; ";
    if (nt < 2) msg << "need at least two time steps; ";
    if (nt >= 2 && !(dt <= 0.9 * dx)) msg << "CFL violated: dt=" << dt << " > 0.9 dx=" << 0.9 * dx << "; ";
    if (!msg.str().empty()) throw InvalidArgument("FDGrid: " + msg.str());
}

InitialState InitialState::zeros(const FDGrid& grid) {
    const std::vector<double> z(grid.nx, 0.0);
    return {z, z, z, z};
}

InitialState InitialState::from_modes(const FDGrid& grid, std::span<const ModeData> data) {
    InitialState s = zeros(grid);
    const auto x = grid.x();
    for (std::size_t k = 0; k < data.size(); ++k) {
        const auto& d = data[k];
        if (d.is_zero()) continue;
        const double n = static_cast<double>(k + 1);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double sn = std::sin(n * x[j]);
            s.u1[j] += d.alpha1 * sn;
            s.v1[j] += d.rho1 * sn;
            s.u2[j] += d.alpha2 * sn;
            s.v2[j] += d.rho2 * sn;
        }
    }
    return s;
}

StateHistory simulate(const Parameters& params, const FDGrid& grid, const InitialState& initial,
                      const std::optional<TraceSignal>& g1, const std::optional<TraceSignal>& g2,
                      const SimulationOptions& options) {
    grid.validate();
    const std::size_t nx = grid.nx;
    for (const auto* v : {&initial.u1, &initial.v1, &initial.u2, &initial.v2}) {
        if (v->size() != nx) throw InvalidArgument("simulate: initial state does not match the grid");
    }
    for (const auto* g : {&g1, &g2}) {
        if (*g && ((*g)->t0() > 1e-12 || (*g)->t1() < grid.T - 1e-12 * std::max(1.0, grid.T))) {
            throw InvalidArgument("simulate: boundary data must cover [0, T]");
        }
    }
    auto bc1 = [&](double t) { return g1 ? g1->interpolate(t) : 0.0; };
    auto bc2 = [&](double t) { return g2 ? g2->interpolate(t) : 0.0; };

    const double beta = params.beta();
    const double a = params.a();
    const double b = params.b();
    const double dt = grid.dt;
    const double dx = grid.dx;
    const double decay = std::exp(-params.eta() * dt);

    StateHistory h;
    h.grid = grid;
    h.stride = options.snapshot_stride;
    h.z1x.reserve(grid.nt + 1);
    h.z2x.reserve(grid.nt + 1);

    std::vector<double> u1 = initial.u1, u2 = initial.u2;
    std::vector<double> u1_prev(nx), u2_prev(nx), u1_next(nx), u2_next(nx);
    std::vector<double> w(nx, 0.0), lap1(nx), lap1_next(nx), lap2(nx);

    auto record = [&](std::size_t step, const std::vector<double>& a1, const std::vector<double>& a2) {
        const bool last = step == grid.nt;
        const bool take = step == 0 || last || (h.stride > 0 && step % h.stride == 0);
        if (!take) return;
        h.snapshot_times.push_back(grid.T * static_cast<double>(step) / static_cast<double>(grid.nt));
        h.u1.push_back(a1);
        h.u2.push_back(a2);
        h.w.push_back(w);
    };
    auto push_trace = [&](double t, const std::vector<double>& a1, const std::vector<double>& a2) {
        h.z1x.push_back(trace_of(a1, bc1(t), dx));
        h.z2x.push_back(trace_of(a2, bc2(t), dx));
    };

    record(0, u1, u2);
    push_trace(0.0, u1, u2);

    // Taylor start: u^1 = u^0 + dt v^0 + dt^2/2 u_tt^0.
    apply_laplacian(u1, bc1(0.0), dx, lap1);
    apply_laplacian(u2, bc2(0.0), dx, lap2);
    for (std::size_t j = 0; j < nx; ++j) {
        const double acc1 = lap1[j] - a * u2[j];
        const double acc2 = lap2[j] - b * u1[j];
        u1_next[j] = u1[j] + dt * initial.v1[j] + 0.5 * dt * dt * acc1;
        u2_next[j] = u2[j] + dt * initial.v2[j] + 0.5 * dt * dt * acc2;
    }

    for (std::size_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * dt;
        apply_laplacian(u1_next, bc1(t), dx, lap1_next);
        for (std::size_t j = 0; j < nx; ++j) {
            w[j] = decay * w[j] + 0.5 * dt * (decay * lap1[j] + lap1_next[j]);
        }
        std::swap(u1_prev, u1);
        std::swap(u2_prev, u2);
        std::swap(u1, u1_next);
        std::swap(u2, u2_next);
        std::swap(lap1, lap1_next);

        require_finite(u1, k, "u1");
        require_finite(u2, k, "u2");
        record(k, u1, u2);
        push_trace(t, u1, u2);
        if (k == grid.nt) break;

        apply_laplacian(u2, bc2(t), dx, lap2);
        for (std::size_t j = 0; j < nx; ++j) {
            const double acc1 = lap1[j] - beta * w[j] - a * u2[j];
            const double acc2 = lap2[j] - b * u1[j];
            u1_next[j] = 2.0 * u1[j] - u1_prev[j] + dt * dt * acc1;
            u2_next[j] = 2.0 * u2[j] - u2_prev[j] + dt * dt * acc2;
        }
        if (k + 1 == grid.nt) {
            // Keep u^{n-2} for the backward-difference velocity.
            h.final_v1 = u1_prev;
            h.final_v2 = u2_prev;
        }
    }

    // (3 u^n - 4 u^{n-1} + u^{n-2}) / (2 dt); final_v* currently hold u^{n-2}.
    for (std::size_t j = 0; j < nx; ++j) {
        h.final_v1[j] = (3.0 * u1[j] - 4.0 * u1_prev[j] + h.final_v1[j]) / (2.0 * dt);
        h.final_v2[j] = (3.0 * u2[j] - 4.0 * u2_prev[j] + h.final_v2[j]) / (2.0 * dt);
    }
    h.final_u1 = u1;
    h.final_u2 = u2;
    return h;
}

StateHistory simulate_controlled(const Parameters& params, const TraceSignal& g1,
                                 const TraceSignal& g2, const FDGrid& grid, double T,
                                 const SimulationOptions& options) {
    if (std::abs(T - grid.T) > 1e-12 * std::max(1.0, T)) {
        throw InvalidArgument("simulate_controlled: grid horizon differs from T");
    }
    return simulate(params, grid, InitialState::zeros(grid), g1, g2, options);
}

TracePair boundary_trace_fd(const StateHistory& history) {
    if (history.grid.nx < 5) throw InvalidArgument("boundary_trace_fd: need nx >= 5");
    const TimeGrid tg = history.grid.time_grid();
    return {TraceSignal(tg, history.z1x), TraceSignal(tg, history.z2x)};
}

double one_sided_derivative(double u_nm4, double u_nm3, double u_nm2, double u_nm1, double u_n,
                            double dx) {
    return (25.0 * u_n - 48.0 * u_nm1 + 36.0 * u_nm2 - 16.0 * u_nm3 + 3.0 * u_nm4) / (12.0 * dx);
}

std::vector<double> sine_coefficients(std::span<const double> u, const FDGrid& grid, std::size_t count) {
    if (u.size() != grid.nx) throw InvalidArgument("sine_coefficients: size does not match the grid");
    std::vector<double> c(count, 0.0);
    const double scale = 2.0 / static_cast<double>(grid.nx + 1);
    for (std::size_t m = 1; m <= count; ++m) {
        double s = 0.0;
        const double km = static_cast<double>(m) * grid.dx;
        for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * std::sin(km * static_cast<double>(j + 1));
        c[m - 1] = scale * s;
    }
    return c;
}

double discrete_l2(std::span<const double> u, const FDGrid& grid) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(grid.dx * s);
}

double discrete_hminus1(std::span<const double> u, const FDGrid& grid) {
    const auto c = sine_coefficients(u, grid, grid.nx);
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double q = c[m] / static_cast<double>(m + 1);
        s += q * q;
    }
    return std::sqrt(0.5 * std::numbers::pi * s);
}

}  // namespace memwave
