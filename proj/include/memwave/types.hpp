#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace memwave {

using Complex = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an input was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A computation could not produce a trustworthy result (root classification,
/// singular systems, CFL violations, non-finite states).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Physical constants of the coupled system
///
///   u1_tt - u1_xx + beta * int_0^t exp(-eta (t-s)) u1_xx(s) ds + a u2 = 0
///   u2_tt - u2_xx + b u1 = 0
///
/// Construction enforces 0 < beta < eta. The coupling a may be zero here so the
/// time-domain oracles can run decoupled problems; every operation that divides
/// by a checks it through require_coupling().
class Parameters {
public:
    Parameters(double beta, double eta, double a, double b);

    double beta() const { return beta_; }
    double eta() const { return eta_; }
    double a() const { return a_; }
    double b() const { return b_; }

    /// beta - eta, the limit of the real characteristic root.
    double chi() const { return beta_ - eta_; }

    /// Same memory, couplings exchanged (a <-> b). This is the forward form of
    /// the adjoint system.
    Parameters swapped_coupling() const { return Parameters(beta_, eta_, b_, a_); }

    /// Throws InvalidArgument when a == 0.
    void require_coupling(const char* context) const;

    bool operator==(const Parameters&) const = default;

private:
    double beta_;
    double eta_;
    double a_;
    double b_;
};

/// Uniform time grid t_k = t0 + k * (t1 - t0) / intervals, k = 0..intervals.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t intervals = 1;

    TimeGrid() = default;
    TimeGrid(double start, double stop, std::size_t n_intervals);

    double dt() const { return (t1 - t0) / static_cast<double>(intervals); }
    std::size_t size() const { return intervals + 1; }
    double time(std::size_t k) const;
};

/// Real samples of a function on a uniform TimeGrid.
class TraceSignal {
public:
    TraceSignal(const TimeGrid& grid, std::vector<double> values);

    static TraceSignal zeros(const TimeGrid& grid);
    static TraceSignal sample(const TimeGrid& grid, const std::function<double(double)>& fn);

    const TimeGrid& grid() const { return grid_; }
    double t0() const { return grid_.t0; }
    double t1() const { return grid_.t1; }
    double dt() const { return grid_.dt(); }
    std::size_t size() const { return values_.size(); }
    double time(std::size_t k) const { return grid_.time(k); }

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }

    /// Piecewise-linear interpolation, clamped to [t0, t1].
    double interpolate(double t) const;

    double sup_norm() const;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Samples of u1 and u2 boundary derivatives (or any paired signals) on one grid.
struct TracePair {
    TraceSignal first;
    TraceSignal second;
};

}  // namespace memwave
