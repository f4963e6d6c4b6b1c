#pragma once

// Window functions, their Fourier-Laplace transforms and empirical frame
// bounds for the boundary-trace exponential sums
//
//   u1(t) = sum_n (-1)^n n f1n(t),   u2(t) = sum_n (-1)^n n f2n(t).

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "memwave/modes.hpp"
#include "memwave/spectrum.hpp"

namespace memwave {

/// sin(pi t / T) on [0, T], zero elsewhere.
double k_window(double T, double t);
/// cos(pi t / (2T)) on [-T, T], zero elsewhere.
double kstar_window(double T, double t);

/// K(w) = T pi / (pi^2 - T^2 w^2). Throws near the poles w = +-pi/T.
Complex K_transform(double T, Complex w);
/// K*(u) = 4 T pi / (pi^2 - 4 T^2 u^2). Throws near the poles u = +-pi/(2T).
Complex Kstar_transform(double T, Complex u);

/// int_0^inf k(t) |sum_n F_n e^{i s_n t} + conj(F_n) e^{-i conj(s_n) t}|^2 dt
/// through the double sum over K(s_n + s_m) and K(s_n - conj(s_m)).
double windowed_norm_closed_form(std::span<const Complex> sigmas, std::span<const Complex> F, double T);

/// Same integral against k*(t) over the real line, using cos(w T) K*(w).
double windowed_norm_closed_form_star(std::span<const Complex> sigmas, std::span<const Complex> F,
                                      double T);

/// Random data for modes 1..N drawn from a seeded generator.
using DataGenerator = std::function<std::vector<ModeData>(std::mt19937_64&, int N)>;

/// Independent standard normals on all four coefficients, divided by n.
DataGenerator standard_data_law();
/// alpha1 = rho1 = 0; alpha2, rho2 standard normals divided by n.
DataGenerator second_component_law();

/// Generator for trial `trial` of an experiment with seed `seed`.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);

struct FrameExperiment {
    int N = 24;
    double T = 8.0;
    int trials = 50;
    std::uint64_t seed = 20240601;
    std::size_t intervals = 4096;
    DataGenerator generator = standard_data_law();
};

struct InghamReport {
    double T = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;
    double threshold_gamma4alpha = 0.0;  // 2 pi / sqrt(gamma^2 - 16 alpha^2); inf if not real
    double threshold_gammaonly = 0.0;    // 2 pi / gamma
    double lower_ratio = 0.0;
    double upper_ratio = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    int skipped = 0;
    std::vector<double> ratios;  // per trial, NaN when skipped
    // Direct experiment only: sup of the ratio over the span of the retained
    // modes (largest generalized eigenvalue). NaN otherwise.
    double section_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Which non-oscillatory terms enter the trace signals. The e^{r_n t} terms
/// of u1 (and their image in u2) and the e^{-eta t} term of u2.
struct SignalTerms {
    bool real_root = true;
    bool decay = true;
};

/// Precomputed exponentials of every retained mode on a time grid.
class TraceTable {
public:
    TraceTable(const Parameters& params, std::vector<ModeSpectrum> spectra, const TimeGrid& grid);

    const Parameters& params() const { return params_; }
    const TimeGrid& grid() const { return grid_; }
    const std::vector<ModeSpectrum>& spectra() const { return spectra_; }
    int N() const { return static_cast<int>(spectra_.size()); }

    /// Trace signals of the data (modes 1..data.size()).
    std::pair<std::vector<double>, std::vector<double>> signals(std::span<const ModeData> data,
                                                                SignalTerms terms = {}) const;

    /// sum_n n^2 (|C_n|^2 + |d_n D_n|^2).
    double coefficient_energy(std::span<const ModeData> data) const;

    /// int (u1^2 + u2^2) dt / coefficient_energy (Simpson). NaN for zero data.
    double ratio(std::span<const ModeData> data, SignalTerms terms = {}) const;

private:
    Parameters params_;
    std::vector<ModeSpectrum> spectra_;
    TimeGrid grid_;
    std::vector<std::vector<double>> er_;
    std::vector<std::vector<Complex>> ew_;
    std::vector<std::vector<Complex>> ez_;
    std::vector<double> ee_;
    std::vector<double> weights_;
};

/// Sequence constants from the string spectrum (at least 64 modes).
SequenceConstants string_sequence_constants(const Parameters& params, int N);

InghamReport frame_ratio_experiment(const Parameters& params, const FrameExperiment& experiment);

/// Trace energy on [-T, T] (without the e^{-eta t} term) over coefficient
/// energy: upper_ratio is the maximum over random trials and section_bound
/// the supremum over all data on modes 1..N, which is the reported c(T).
InghamReport direct_inequality_experiment(const Parameters& params, const FrameExperiment& experiment);

/// Largest generalized eigenvalue of (trace energy on [-T, T], coefficient
/// energy) over data on modes 1..N.
double direct_section_constant(const Parameters& params, int N, double T, std::size_t intervals = 4096);

struct AdversarialReport {
    double T_low = 0.0;
    double T_high = 0.0;
    double ratio_low = 0.0;       // frame ratio of the minimizer at T_low
    double ratio_high = 0.0;      // same data at T_high
    double relative = 0.0;        // ratio_low / ratio_high
    double two_mode_relative = 0.0;  // same construction restricted to modes 1 and 2
    std::vector<ModeData> data;
};

/// Minimizes the frame ratio at T_low over data on modes `modes` (1-based) by a
/// generalized symmetric eigenproblem and evaluates the minimizer at T_low and T_high.
std::vector<ModeData> adversarial_data(const Parameters& params, int N, std::span<const int> modes,
                                       double T, std::size_t intervals);

AdversarialReport adversarial_ratio(const Parameters& params, int N, double T_low, double T_high,
                                    std::size_t intervals = 4096);

/// True iff |C_n| <= M |d_n D_n| for every mode.
bool coefficient_condition_check(std::span<const ModeCoefficients> coeffs, double M);

/// pi T (1 - eps) [1 / (pi^2 + 4 T^2 alpha^2 (1 + eps)) - 4 / (T^2 gamma^2 (1 - eps))].
/// Requires 0 < eps < (gamma^2 - 16 alpha^2) / (gamma^2 + 16 alpha^2).
double lower_bound_constant(double T, double eps, double gamma, double alpha);

/// Smallest 1-based n0 from which Re s_{n+1} - Re s_n >= gamma sqrt(1 - eps)
/// and Re s_n >= gamma sqrt(1 - eps) n hold to the end of the sequence.
int gap_start_index(std::span<const double> real_parts, double gamma, double eps);

/// sum over m = n0..m_max, m != n, of 1 / (4 (m - n)^2 - 1).
double telescoping_sum(int n0, int n, int m_max);

/// Smallest n0 with a / (4 n0^2 - 1) + b sum_{m >= n0} 1 / (4 m^2 - 1) <= eps.
int tail_index_reciprocal(double a, double b, double eps);

/// Smallest n0 with a sum_{n >= n0} n^{-2 nu} <= eps (nu > 1/2), using an
/// integral upper bound for the tail.
int tail_index_power(double a, double nu, double eps);

}  // namespace memwave
