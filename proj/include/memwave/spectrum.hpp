#pragma once

// Roots of the per-mode quintic characteristic polynomial
//
//   Z^5 + eta Z^4 + 2 lambda Z^3 + lambda (2 eta - beta) Z^2
//       + (lambda^2 - a b) Z + lambda^2 (eta - beta) - eta a b
//
// and the sequence constants derived from them.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "memwave/types.hpp"

namespace memwave {

/// One mode's eigenvalue and characteristic roots. The five roots are
/// r, i omega, -i conj(omega), i zeta, -i conj(zeta), with Re omega > 0 and
/// Re zeta > 0.
struct ModeSpectrum {
    int n = 0;
    double lambda = 0.0;
    double r = 0.0;
    Complex omega;
    Complex zeta;

    /// Roots in the order r, i omega, -i conj(omega), i zeta, -i conj(zeta).
    std::array<Complex, 5> roots() const;
};

struct RootSeeds {
    double r = 0.0;
    Complex omega;
    Complex zeta;
};

/// Roots of Z^3 + eta Z^2 + lambda Z + lambda (eta - beta): one real root and
/// the member z of the conjugate pair with Im z > 0.
struct CubicRoots {
    double r = 0.0;
    Complex z;
};

struct SequenceConstants {
    double gamma = 0.0;  // asymptotic gap of Re omega_n and Re zeta_n
    double alpha = 0.0;  // limit of Im omega_n
    double chi = 0.0;    // limit of r_n
};

/// Residuals of the invariants a ModeSpectrum must satisfy.
struct SpectrumResiduals {
    double max_poly_residual = 0.0;  // max |P(root)| over the five roots
    double poly_tolerance = 0.0;     // 1e-10 (1 + lambda^3)
    double trace_error = 0.0;        // |r - 2 Im omega - 2 Im zeta + eta|
    double product_error = 0.0;      // relative error of the product of roots
    double min_separation = 0.0;     // smallest pairwise distance between roots
};

/// Coefficients highest degree first.
std::array<double, 6> characteristic_coefficients(const Parameters& params, double lambda);

Complex characteristic_polynomial(const Parameters& params, double lambda, Complex z);

/// Large-lambda expansions of r, omega and zeta truncated after the leading
/// correction terms.
RootSeeds asymptotic_seeds(const Parameters& params, double lambda);

/// Companion-matrix roots, Newton-polished, classified against the asymptotic
/// seeds. Throws NumericalFailure if the root configuration is not one real
/// root plus two conjugate pairs or any invariant fails.
ModeSpectrum solve_quintic(const Parameters& params, double lambda, int n = 0);

/// Same, classified against caller-provided seeds.
ModeSpectrum solve_quintic(const Parameters& params, double lambda, int n, const RootSeeds& seeds);

CubicRoots solve_cubic(const Parameters& params, double lambda);

SpectrumResiduals spectrum_residuals(const Parameters& params, const ModeSpectrum& spectrum);

/// Spectra for lambda_n = n^2, n = 1..count, computed in parallel.
std::vector<ModeSpectrum> string_spectra(const Parameters& params, int count);

/// Spectra for caller-provided eigenvalues lambdas[k], labelled n = k + 1.
std::vector<ModeSpectrum> mode_spectra(const Parameters& params, std::span<const double> lambdas);

/// Estimates gamma from the gaps over the last half of the list and alpha, chi
/// from the last entry. Requires at least 8 spectra sorted by n and strictly
/// increasing Re omega.
SequenceConstants sequence_constants(std::span<const ModeSpectrum> spectra);

/// Throws NumericalFailure if omega_n = zeta_m for some n, m, if r_n = -eta or
/// zeta_n = 0, or if the roots of any mode coincide.
void check_distinctness(const Parameters& params, std::span<const ModeSpectrum> spectra);

std::string describe(const ModeSpectrum& spectrum);

}  // namespace memwave
