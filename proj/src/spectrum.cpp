#include "memwave/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "memwave/parallel.hpp"

namespace memwave {
namespace {

constexpr Complex I{0.0, 1.0};

bool is_real(Complex z) { return std::abs(z.imag()) < 1e-8 * (1.0 + std::abs(z)); }

template <std::size_t K>
std::vector<Complex> companion_roots(const std::array<double, K>& c) {
    constexpr int deg = static_cast<int>(K) - 1;
    Eigen::Matrix<double, deg, deg> M = Eigen::Matrix<double, deg, deg>::Zero();
    for (int j = 0; j < deg; ++j) M(0, j) = -c[j + 1] / c[0];
    for (int i = 1; i < deg; ++i) M(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix<double, deg, deg>> solver(M, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("companion eigenvalue iteration did not converge");
    }
    std::vector<Complex> out;
    for (int i = 0; i < deg; ++i) out.push_back(solver.eigenvalues()[i]);
    return out;
}

template <std::size_t K>
std::pair<Complex, Complex> horner(const std::array<double, K>& c, Complex z) {
    Complex p = c[0];
    Complex dp = 0.0;
    for (std::size_t k = 1; k < K; ++k) {
        dp = dp * z + p;
        p = p * z + c[k];
    }
    return {p, dp};
}

template <std::size_t K>
Complex polish(const std::array<double, K>& c, Complex z, bool real_root) {
    for (int it = 0; it < 4; ++it) {
        auto [p, dp] = horner(c, z);
        if (p == 0.0 || dp == 0.0) break;
        Complex next = z - p / dp;
        if (real_root) next = {next.real(), 0.0};
        if (std::abs(horner(c, next).first) >= std::abs(p)) break;
        z = next;
    }
    return z;
}

std::string mode_label(int n, double lambda) {
    std::ostringstream s;
    s << "mode n=" << n << " (lambda=" << lambda << ")";
    return s.str();
}

// Splits roots into one real root and the upper-half-plane members of the
// conjugate pairs.
template <std::size_t K>
std::pair<double, std::vector<Complex>> split_roots(const std::array<double, K>& c,
                                                    std::vector<Complex> roots,
                                                    const std::string& label) {
    std::vector<Complex> reals;
    std::vector<Complex> upper;
    std::vector<Complex> lower;
    for (Complex z : roots) {
        if (is_real(z)) {
            reals.push_back(z);
        } else if (z.imag() > 0.0) {
            upper.push_back(z);
        } else {
            lower.push_back(z);
        }
    }
    if (reals.size() != 1) {
        std::ostringstream msg;
        msg << label << ": expected exactly one real characteristic root, found " << reals.size();
        throw NumericalFailure(msg.str());
    }
    if (upper.size() != lower.size()) {
        throw NumericalFailure(label + ": complex roots do not form conjugate pairs");
    }
    for (Complex z : upper) {
        const auto partner = std::min_element(lower.begin(), lower.end(), [&](Complex p, Complex q) {
            return std::abs(p - std::conj(z)) < std::abs(q - std::conj(z));
        });
        if (std::abs(*partner - std::conj(z)) > 1e-8 * (1.0 + std::abs(z))) {
            throw NumericalFailure(label + ": complex roots do not form conjugate pairs");
        }
        lower.erase(partner);
    }
    const double r = polish(c, reals.front(), true).real();
    for (Complex& z : upper) z = polish(c, z, false);
    return {r, upper};
}

}  // namespace

std::array<Complex, 5> ModeSpectrum::roots() const {
    return {Complex(r, 0.0), I * omega, -I * std::conj(omega), I * zeta, -I * std::conj(zeta)};
}

std::array<double, 6> characteristic_coefficients(const Parameters& params, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("characteristic_coefficients: lambda must be positive");
    const double beta = params.beta();
    const double eta = params.eta();
    const double ab = params.a() * params.b();
    return {1.0,
            eta,
            2.0 * lambda,
            lambda * (2.0 * eta - beta),
            lambda * lambda - ab,
            lambda * lambda * (eta - beta) - eta * ab};
}

Complex characteristic_polynomial(const Parameters& params, double lambda, Complex z) {
    return horner(characteristic_coefficients(params, lambda), z).first;
}

RootSeeds asymptotic_seeds(const Parameters& params, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("asymptotic_seeds: lambda must be positive");
    const double beta = params.beta();
    const double eta = params.eta();
    const double ab = params.a() * params.b();
    const double chi = params.chi();
    const double s = std::sqrt(lambda);

    RootSeeds seeds;
    seeds.r = chi - beta * chi * chi / lambda;
    seeds.omega = {s + 0.5 * beta * (0.75 * beta - eta) / s,
                   0.5 * beta - (0.5 * beta * chi * chi + ab / (2.0 * beta)) / lambda};
    seeds.zeta = {s + eta * ab / (2.0 * beta * lambda * s),
                  ab / (2.0 * beta * lambda) + ab * ab / (2.0 * beta * beta * beta * lambda * lambda)};
    return seeds;
}

ModeSpectrum solve_quintic(const Parameters& params, double lambda, int n) {
    return solve_quintic(params, lambda, n, asymptotic_seeds(params, lambda));
}

ModeSpectrum solve_quintic(const Parameters& params, double lambda, int n, const RootSeeds& seeds) {
    const auto c = characteristic_coefficients(params, lambda);
    const std::string label = mode_label(n, lambda);
    auto [r, upper] = split_roots(c, companion_roots(c), label);
    if (upper.size() != 2) throw NumericalFailure(label + ": expected two conjugate pairs");

    // upper holds i omega and i zeta; pick the labelling closest to the seeds.
    const Complex w0 = I * seeds.omega;
    const Complex z0 = I * seeds.zeta;
    const double keep = std::abs(upper[0] - w0) + std::abs(upper[1] - z0);
    const double swap = std::abs(upper[1] - w0) + std::abs(upper[0] - z0);
    if (swap < keep) std::swap(upper[0], upper[1]);

    ModeSpectrum spec;
    spec.n = n;
    spec.lambda = lambda;
    spec.r = r;
    spec.omega = -I * upper[0];
    spec.zeta = -I * upper[1];

    const auto res = spectrum_residuals(params, spec);
    if (!(res.max_poly_residual < res.poly_tolerance)) {
        std::ostringstream msg;
        msg << label << ": polynomial residual " << res.max_poly_residual << " exceeds "
            << res.poly_tolerance;
        throw NumericalFailure(msg.str());
    }
    if (!(res.trace_error < 1e-9 * (1.0 + params.eta()))) {
        std::ostringstream msg;
        msg << label << ": sum of roots misses -eta by " << res.trace_error;
        throw NumericalFailure(msg.str());
    }
    if (!(res.min_separation > 1e-10 * (1.0 + std::sqrt(lambda)))) {
        throw NumericalFailure(label + ": characteristic roots are not distinct");
    }
    return spec;
}

CubicRoots solve_cubic(const Parameters& params, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("solve_cubic: lambda must be positive");
    const std::array<double, 4> c{1.0, params.eta(), lambda, lambda * (params.eta() - params.beta())};
    auto [r, upper] = split_roots(c, companion_roots(c), mode_label(0, lambda));
    if (upper.size() != 1) throw NumericalFailure("solve_cubic: expected one conjugate pair");
    return {r, upper.front()};
}

SpectrumResiduals spectrum_residuals(const Parameters& params, const ModeSpectrum& spectrum) {
    const double lambda = spectrum.lambda;
    const auto c = characteristic_coefficients(params, lambda);
    const auto roots = spectrum.roots();

    SpectrumResiduals res;
    res.poly_tolerance = 1e-10 * (1.0 + lambda * lambda * lambda);
    Complex product = 1.0;
    for (Complex z : roots) {
        res.max_poly_residual = std::max(res.max_poly_residual, std::abs(horner(c, z).first));
        product *= z;
    }
    res.trace_error =
        std::abs(spectrum.r - 2.0 * spectrum.omega.imag() - 2.0 * spectrum.zeta.imag() + params.eta());
    // Product of the roots is -c[5] for a monic quintic.
    res.product_error = std::abs(product + c[5]) / std::max(1.0, std::abs(c[5]));
    res.min_separation = INFINITY;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            res.min_separation = std::min(res.min_separation, std::abs(roots[i] - roots[j]));
        }
    }
    return res;
}

std::vector<ModeSpectrum> mode_spectra(const Parameters& params, std::span<const double> lambdas) {
    std::vector<ModeSpectrum> out(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t k) {
        out[k] = solve_quintic(params, lambdas[k], static_cast<int>(k) + 1);
    });
    return out;
}

std::vector<ModeSpectrum> string_spectra(const Parameters& params, int count) {
    if (count < 1) throw InvalidArgument("string_spectra: need at least one mode");
    std::vector<double> lambdas(static_cast<std::size_t>(count));
    for (int n = 1; n <= count; ++n) lambdas[n - 1] = static_cast<double>(n) * n;
    return mode_spectra(params, lambdas);
}

SequenceConstants sequence_constants(std::span<const ModeSpectrum> spectra) {
    if (spectra.size() < 8) throw InvalidArgument("sequence_constants: need at least 8 modes");
    for (std::size_t k = 1; k < spectra.size(); ++k) {
        if (spectra[k].n <= spectra[k - 1].n) {
            throw InvalidArgument("sequence_constants: spectra must be sorted by n");
        }
        if (!(spectra[k].omega.real() > spectra[k - 1].omega.real())) {
            std::ostringstream msg;
            msg << "sequence_constants: Re omega is not increasing at n=" << spectra[k].n;
            throw NumericalFailure(msg.str());
        }
    }
    SequenceConstants out;
    out.gamma = INFINITY;
    for (std::size_t k = spectra.size() / 2; k + 1 < spectra.size(); ++k) {
        out.gamma = std::min(out.gamma, spectra[k + 1].omega.real() - spectra[k].omega.real());
        out.gamma = std::min(out.gamma, spectra[k + 1].zeta.real() - spectra[k].zeta.real());
    }
    out.alpha = spectra.back().omega.imag();
    out.chi = spectra.back().r;
    return out;
}

void check_distinctness(const Parameters& params, std::span<const ModeSpectrum> spectra) {
    for (const auto& s : spectra) {
        const double tol = 1e-10 * (1.0 + std::sqrt(s.lambda));
        if (std::abs(s.r + params.eta()) < tol) {
            throw NumericalFailure(describe(s) + ": real root coincides with -eta");
        }
        if (std::abs(s.zeta) < tol) throw NumericalFailure(describe(s) + ": zeta vanishes");
        if (spectrum_residuals(params, s).min_separation < tol) {
            throw NumericalFailure(describe(s) + ": characteristic roots are not distinct");
        }
    }
    for (const auto& s : spectra) {
        for (const auto& q : spectra) {
            if (std::abs(s.omega - q.zeta) < 1e-10 * (1.0 + std::abs(s.omega))) {
                std::ostringstream msg;
                msg << "omega_" << s.n << " coincides with zeta_" << q.n;
                throw NumericalFailure(msg.str());
            }
        }
    }
}

std::string describe(const ModeSpectrum& spectrum) { return mode_label(spectrum.n, spectrum.lambda); }

}  // namespace memwave
