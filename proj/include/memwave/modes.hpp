#pragma once

// Per-mode solution of the coupled integro-differential ODE pair
//
//   f1'' + lambda f1 - beta lambda int_0^t exp(-eta (t-s)) f1(s) ds + a f2 = 0
//   f2'' + lambda f2 + b f1 = 0
//
// as a sum of exponentials, plus an independent Runge-Kutta integrator.

#include <array>
#include <utility>

#include "memwave/spectrum.hpp"
#include "memwave/types.hpp"

namespace memwave {

/// Sine coefficients of the initial data (u1^0, u1^1, u2^0, u2^1) for one mode.
struct ModeData {
    double alpha1 = 0.0;
    double rho1 = 0.0;
    double alpha2 = 0.0;
    double rho2 = 0.0;

    bool is_zero() const { return alpha1 == 0.0 && rho1 == 0.0 && alpha2 == 0.0 && rho2 == 0.0; }
    bool operator==(const ModeData&) const = default;
};

/// f1 and its first four derivatives at t = 0.
using InitialDerivatives = std::array<double, 5>;

struct VandermondeSolution {
    double R = 0.0;
    Complex C;
    Complex D;
    double condition = 0.0;  // 2-norm condition of the equilibrated real system
};

struct Multipliers {
    Complex c;
    Complex d;
};

/// Upsilon(exp(z t)) = same * exp(z t) + decay * exp(-eta t).
struct UpsilonCoefficients {
    Complex same;
    Complex decay;
};

/// Series coefficients of one mode:
///
///   f1 = R e^{rt} + 2 Re(C e^{i omega t}) + 2 Re(D e^{i zeta t})
///
/// `c`, `d`, `E` are the multipliers of the asymptotic form of f2. The exact
/// form of f2 uses `d`, `c_exact`, `r_factor` and `E_exact`:
///
///   f2 = r_factor R e^{rt} + 2 Re(c_exact C e^{i omega t})
///        + 2 Re(d D e^{i zeta t}) + E_exact e^{-eta t}
struct ModeCoefficients {
    double R = 0.0;
    Complex C;
    Complex D;
    Complex c;
    Complex d;
    double E = 0.0;
    Complex c_exact;
    double r_factor = 0.0;
    double E_exact = 0.0;
    double condition = 0.0;
};

enum class SeriesForm { Exact, Asymptotic };

struct ModeValue {
    double f1 = 0.0;
    double f2 = 0.0;
};

InitialDerivatives initial_derivatives(const Parameters& params, double lambda, const ModeData& data);

/// f''''(0) rebuilt from f(0), f'(0), f''(0) through the fifth-order equation.
double fourth_derivative_from_lower(const Parameters& params, double lambda, double f0, double f1,
                                    double f2);

/// Solves for (R, C, D) from the first five derivatives of f1 at t = 0.
/// Throws NumericalFailure if the condition estimate exceeds 1e12.
VandermondeSolution solve_vandermonde(const ModeSpectrum& spectrum, const InitialDerivatives& init);

/// c = b / (beta (eta + i omega)), d = (zeta^2 - lambda + beta lambda / (eta + i zeta)) / a.
Multipliers multipliers(const Parameters& params, const ModeSpectrum& spectrum);

/// E = alpha2 - 2 Re(c C) - (2 beta lambda / a) Re(D / (eta + i zeta)).
double residual_coefficient(const Parameters& params, const ModeData& data, Complex C, Complex D,
                            const ModeSpectrum& spectrum, Complex c);

/// Action of Upsilon(f) = -(f'' + lambda f - beta lambda int_0^t e^{-eta(t-s)} f ds) / a
/// on exp(z t). Rejects z = -eta.
UpsilonCoefficients upsilon_apply_exponential(const Parameters& params, double lambda, Complex z);

ModeCoefficients mode_coefficients(const Parameters& params, const ModeSpectrum& spectrum,
                                   const ModeData& data);

ModeValue mode_series_eval(const Parameters& params, const ModeSpectrum& spectrum,
                           const ModeCoefficients& coeffs, double t,
                           SeriesForm form = SeriesForm::Exact);

/// Classical RK4 on the state (f1, f1', f2, f2', w), w = int_0^t e^{-eta(t-s)} f1 ds.
/// The grid must start at t = 0. Each grid interval is split into equal substeps
/// no longer than max_step (default min(1e-3, 0.1 / sqrt(lambda))); throws if
/// 5 h sqrt(lambda) > 0.5 for the resulting step h.
std::pair<TraceSignal, TraceSignal> mode_ode_oracle(const Parameters& params, double lambda,
                                                    const ModeData& data, const TimeGrid& grid,
                                                    double max_step = 0.0);

}  // namespace memwave
