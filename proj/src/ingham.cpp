#include "memwave/ingham.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "memwave/parallel.hpp"
#include "memwave/quadrature.hpp"

namespace memwave {
namespace {

constexpr double pi = std::numbers::pi;
constexpr Complex I{0.0, 1.0};

double sign_factor(int n) { return (n % 2 == 0 ? 1.0 : -1.0) * n; }

void require_same_length(std::span<const Complex> sigmas, std::span<const Complex> F) {
    if (sigmas.size() != F.size()) throw InvalidArgument("windowed norm: sigma and F lengths differ");
}

// 2 sum_n sum_m Re[F_n F_m h(s_n + s_m) + F_n conj(F_m) h(s_n - conj(s_m))]
template <class H>
double bilinear_expansion(std::span<const Complex> s, std::span<const Complex> F, H&& h) {
    double total = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        for (std::size_t m = 0; m < s.size(); ++m) {
            try {
                total += 2.0 * (F[n] * F[m] * h(s[n] + s[m])).real();
                total += 2.0 * (F[n] * std::conj(F[m]) * h(s[n] - std::conj(s[m]))).real();
            } catch (const InvalidArgument& e) {
                std::ostringstream msg;
                msg << "windowed norm: pair (" << n << ", " << m << ") hits a pole: " << e.what();
                throw InvalidArgument(msg.str());
            }
        }
    }
    return total;
}

std::vector<ModeData> draw(std::mt19937_64& rng, int N, bool first_component) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<ModeData> data(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        auto& d = data[static_cast<std::size_t>(n - 1)];
        if (first_component) {
            d.alpha1 = normal(rng) / n;
            d.rho1 = normal(rng) / n;
        }
        d.alpha2 = normal(rng) / n;
        d.rho2 = normal(rng) / n;
    }
    return data;
}

InghamReport run_trials(const Parameters& params, const FrameExperiment& ex, const TraceTable& table,
                        SignalTerms terms) {
    if (ex.trials < 1) throw InvalidArgument("frame experiment: trials must be at least 1");
    if (!ex.generator) throw InvalidArgument("frame experiment: no data generator");
    InghamReport rep;
    rep.T = ex.T;
    rep.trials = ex.trials;
    rep.seed = ex.seed;
    const auto sc = string_sequence_constants(params, ex.N);
    rep.gamma = sc.gamma;
    rep.alpha = sc.alpha;
    const double radicand = sc.gamma * sc.gamma - 16.0 * sc.alpha * sc.alpha;
    rep.threshold_gamma4alpha = radicand > 0.0 ? 2.0 * pi / std::sqrt(radicand) : INFINITY;
    rep.threshold_gammaonly = 2.0 * pi / sc.gamma;

    rep.ratios.assign(static_cast<std::size_t>(ex.trials), std::numeric_limits<double>::quiet_NaN());
    parallel_for(rep.ratios.size(), [&](std::size_t t) {
        auto rng = trial_engine(ex.seed, t);
        const auto data = ex.generator(rng, ex.N);
        rep.ratios[t] = table.ratio(data, terms);
    });

    rep.lower_ratio = INFINITY;
    rep.upper_ratio = -INFINITY;
    for (double r : rep.ratios) {
        if (std::isnan(r)) {
            ++rep.skipped;
            continue;
        }
        rep.lower_ratio = std::min(rep.lower_ratio, r);
        rep.upper_ratio = std::max(rep.upper_ratio, r);
    }
    if (rep.skipped == rep.trials) {
        throw NumericalFailure("frame experiment: every trial had zero coefficient energy");
    }
    return rep;
}

}  // namespace

double k_window(double T, double t) {
    if (!(T > 0.0)) throw InvalidArgument("k_window: T must be positive");
    return (t >= 0.0 && t <= T) ? std::sin(pi * t / T) : 0.0;
}

double kstar_window(double T, double t) {
    if (!(T > 0.0)) throw InvalidArgument("kstar_window: T must be positive");
    return (t >= -T && t <= T) ? std::cos(pi * t / (2.0 * T)) : 0.0;
}

Complex K_transform(double T, Complex w) {
    if (!(T > 0.0)) throw InvalidArgument("K_transform: T must be positive");
    const Complex den = pi * pi - T * T * w * w;
    if (std::abs(den) <= 1e-12) throw InvalidArgument("K_transform: argument at a pole");
    return T * pi / den;
}

Complex Kstar_transform(double T, Complex u) {
    if (!(T > 0.0)) throw InvalidArgument("Kstar_transform: T must be positive");
    const Complex den = pi * pi - 4.0 * T * T * u * u;
    if (std::abs(den) <= 1e-12) throw InvalidArgument("Kstar_transform: argument at a pole");
    return 4.0 * T * pi / den;
}

double windowed_norm_closed_form(std::span<const Complex> sigmas, std::span<const Complex> F, double T) {
    require_same_length(sigmas, F);
    return bilinear_expansion(sigmas, F, [T](Complex w) {
        return (1.0 + std::exp(I * w * T)) * K_transform(T, w);
    });
}

double windowed_norm_closed_form_star(std::span<const Complex> sigmas, std::span<const Complex> F,
                                      double T) {
    require_same_length(sigmas, F);
    return bilinear_expansion(sigmas, F, [T](Complex w) {
        return std::cos(w * T) * Kstar_transform(T, w);
    });
}

DataGenerator standard_data_law() {
    return [](std::mt19937_64& rng, int N) { return draw(rng, N, true); };
}

DataGenerator second_component_law() {
    return [](std::mt19937_64& rng, int N) { return draw(rng, N, false); };
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

TraceTable::TraceTable(const Parameters& params, std::vector<ModeSpectrum> spectra, const TimeGrid& grid)
    : params_(params), spectra_(std::move(spectra)), grid_(grid) {
    params_.require_coupling("TraceTable");
    const std::size_t K = grid_.size();
    er_.resize(spectra_.size());
    ew_.resize(spectra_.size());
    ez_.resize(spectra_.size());
    for (std::size_t n = 0; n < spectra_.size(); ++n) {
        const auto& s = spectra_[n];
        er_[n].resize(K);
        ew_[n].resize(K);
        ez_[n].resize(K);
        for (std::size_t k = 0; k < K; ++k) {
            const double t = grid_.time(k);
            er_[n][k] = std::exp(s.r * t);
            ew_[n][k] = std::exp(I * s.omega * t);
            ez_[n][k] = std::exp(I * s.zeta * t);
        }
    }
    ee_.resize(K);
    for (std::size_t k = 0; k < K; ++k) ee_[k] = std::exp(-params_.eta() * grid_.time(k));
    weights_ = simpson_weights(K, grid_.dt());
}

std::pair<std::vector<double>, std::vector<double>> TraceTable::signals(std::span<const ModeData> data,
                                                                        SignalTerms terms) const {
    if (data.size() > spectra_.size()) throw InvalidArgument("TraceTable: more data modes than spectra");
    const std::size_t K = grid_.size();
    std::vector<double> u1(K, 0.0);
    std::vector<double> u2(K, 0.0);
    for (std::size_t n = 0; n < data.size(); ++n) {
        if (data[n].is_zero()) continue;
        const auto c = mode_coefficients(params_, spectra_[n], data[n]);
        const double s = sign_factor(spectra_[n].n);
        const double R1 = terms.real_root ? s * c.R : 0.0;
        const double R2 = terms.real_root ? s * c.r_factor * c.R : 0.0;
        const Complex C1 = s * c.C;
        const Complex C2 = s * c.c_exact * c.C;
        const Complex D1 = s * c.D;
        const Complex D2 = s * c.d * c.D;
        const double E2 = terms.decay ? s * c.E_exact : 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double cw = 2.0 * ew_[n][k].real();
            const double sw = -2.0 * ew_[n][k].imag();
            const double cz = 2.0 * ez_[n][k].real();
            const double sz = -2.0 * ez_[n][k].imag();
            // 2 Re(X e) = 2 Re X Re e - 2 Im X Im e
            u1[k] += R1 * er_[n][k] + C1.real() * cw + C1.imag() * sw + D1.real() * cz + D1.imag() * sz;
            u2[k] += R2 * er_[n][k] + C2.real() * cw + C2.imag() * sw + D2.real() * cz + D2.imag() * sz +
                     E2 * ee_[k];
        }
    }
    return {std::move(u1), std::move(u2)};
}

double TraceTable::coefficient_energy(std::span<const ModeData> data) const {
    if (data.size() > spectra_.size()) throw InvalidArgument("TraceTable: more data modes than spectra");
    double e = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
        if (data[n].is_zero()) continue;
        const auto c = mode_coefficients(params_, spectra_[n], data[n]);
        const double nn = static_cast<double>(spectra_[n].n);
        e += nn * nn * (std::norm(c.C) + std::norm(c.d * c.D));
    }
    return e;
}

double TraceTable::ratio(std::span<const ModeData> data, SignalTerms terms) const {
    const double den = coefficient_energy(data);
    if (!(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const auto [u1, u2] = signals(data, terms);
    double num = 0.0;
    for (std::size_t k = 0; k < u1.size(); ++k) num += weights_[k] * (u1[k] * u1[k] + u2[k] * u2[k]);
    return num / den;
}

SequenceConstants string_sequence_constants(const Parameters& params, int N) {
    const auto spectra = string_spectra(params, std::max(N, 64));
    return sequence_constants(spectra);
}

InghamReport frame_ratio_experiment(const Parameters& params, const FrameExperiment& ex) {
    if (!(ex.T > 0.0)) throw InvalidArgument("frame_ratio_experiment: T must be positive");
    if (ex.N < 1) throw InvalidArgument("frame_ratio_experiment: N must be positive");
    const TraceTable table(params, string_spectra(params, ex.N), TimeGrid(0.0, ex.T, ex.intervals));
    return run_trials(params, ex, table, SignalTerms{});
}

InghamReport direct_inequality_experiment(const Parameters& params, const FrameExperiment& ex) {
    if (!(ex.T > 0.0)) throw InvalidArgument("direct_inequality_experiment: T must be positive");
    if (ex.N < 1) throw InvalidArgument("direct_inequality_experiment: N must be positive");
    const double gamma = string_sequence_constants(params, ex.N).gamma;
    if (!(ex.T > pi / gamma)) {
        std::ostringstream msg;
        msg << "direct_inequality_experiment: T=" << ex.T << " must exceed pi/gamma=" << pi / gamma;
        throw InvalidArgument(msg.str());
    }
    const TraceTable table(params, string_spectra(params, ex.N),
                           TimeGrid(-ex.T, ex.T, 2 * ex.intervals));
    auto rep = run_trials(params, ex, table, SignalTerms{true, false});
    rep.section_bound = direct_section_constant(params, ex.N, ex.T, ex.intervals);
    return rep;
}

namespace {

// Quadratic forms of the selected modes in the basis (alpha1, rho1, alpha2, rho2)
// per mode: Q is the windowed trace energy, Den the coefficient energy.
struct SectionForms {
    Eigen::MatrixXd Q;
    Eigen::MatrixXd Den;
};

SectionForms section_forms(const TraceTable& table, std::span<const int> modes, SignalTerms terms) {
    if (modes.empty()) throw InvalidArgument("section_forms: no modes selected");
    for (int m : modes) {
        if (m < 1 || m > table.N()) throw InvalidArgument("section_forms: mode index out of range");
    }
    const auto dim = static_cast<Eigen::Index>(4 * modes.size());
    const std::size_t K = table.grid().size();
    const auto w = simpson_weights(K, table.grid().dt());

    Eigen::MatrixXd U(static_cast<Eigen::Index>(2 * K), dim);
    Eigen::MatrixXd Den = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const int n = modes[i];
        std::array<Complex, 4> C{};
        std::array<Complex, 4> dD{};
        for (int slot = 0; slot < 4; ++slot) {
            const auto col = static_cast<Eigen::Index>(4 * i + slot);
            std::vector<ModeData> data(static_cast<std::size_t>(n));
            auto& d = data.back();
            (slot == 0 ? d.alpha1 : slot == 1 ? d.rho1 : slot == 2 ? d.alpha2 : d.rho2) = 1.0;
            const auto [u1, u2] = table.signals(data, terms);
            for (std::size_t k = 0; k < K; ++k) {
                const double sw = std::sqrt(w[k]);
                U(static_cast<Eigen::Index>(k), col) = sw * u1[k];
                U(static_cast<Eigen::Index>(K + k), col) = sw * u2[k];
            }
            const auto c = mode_coefficients(table.params(), table.spectra()[static_cast<std::size_t>(n - 1)], d);
            C[static_cast<std::size_t>(slot)] = static_cast<double>(n) * c.C;
            dD[static_cast<std::size_t>(slot)] = static_cast<double>(n) * c.d * c.D;
        }
        for (std::size_t p = 0; p < 4; ++p) {
            for (std::size_t q = 0; q < 4; ++q) {
                Den(static_cast<Eigen::Index>(4 * i + p), static_cast<Eigen::Index>(4 * i + q)) =
                    (std::conj(C[p]) * C[q] + std::conj(dD[p]) * dD[q]).real();
            }
        }
    }
    return {U.transpose() * U, Den};
}

Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solve_section(const SectionForms& f,
                                                                         const char* context) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(f.Q, f.Den);
    if (ges.info() != Eigen::Success) {
        throw NumericalFailure(std::string(context) + ": generalized eigenproblem failed");
    }
    return ges;
}

std::vector<int> first_modes(int N) {
    std::vector<int> all(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) all[static_cast<std::size_t>(n - 1)] = n;
    return all;
}

}  // namespace

double direct_section_constant(const Parameters& params, int N, double T, std::size_t intervals) {
    if (!(T > 0.0)) throw InvalidArgument("direct_section_constant: T must be positive");
    if (N < 1) throw InvalidArgument("direct_section_constant: N must be positive");
    const TraceTable table(params, string_spectra(params, N), TimeGrid(-T, T, 2 * intervals));
    const auto ges = solve_section(section_forms(table, first_modes(N), SignalTerms{true, false}),
                                   "direct_section_constant");
    return ges.eigenvalues().maxCoeff();
}

std::vector<ModeData> adversarial_data(const Parameters& params, int N, std::span<const int> modes,
                                       double T, std::size_t intervals) {
    const TraceTable table(params, string_spectra(params, N), TimeGrid(0.0, T, intervals));
    const auto ges = solve_section(section_forms(table, modes, SignalTerms{}), "adversarial_data");
    const Eigen::VectorXd v = ges.eigenvectors().col(0);

    std::vector<ModeData> out(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < modes.size(); ++i) {
        auto& d = out[static_cast<std::size_t>(modes[i] - 1)];
        d.alpha1 = v(static_cast<Eigen::Index>(4 * i));
        d.rho1 = v(static_cast<Eigen::Index>(4 * i + 1));
        d.alpha2 = v(static_cast<Eigen::Index>(4 * i + 2));
        d.rho2 = v(static_cast<Eigen::Index>(4 * i + 3));
    }
    return out;
}

AdversarialReport adversarial_ratio(const Parameters& params, int N, double T_low, double T_high,
                                    std::size_t intervals) {
    if (N < 2) throw InvalidArgument("adversarial_ratio: need at least two modes");
    const auto spectra = string_spectra(params, N);
    const TraceTable low(params, spectra, TimeGrid(0.0, T_low, intervals));
    const TraceTable high(params, spectra, TimeGrid(0.0, T_high, intervals));

    const auto all = first_modes(N);

    AdversarialReport rep;
    rep.T_low = T_low;
    rep.T_high = T_high;
    rep.data = adversarial_data(params, N, all, T_low, intervals);
    rep.ratio_low = low.ratio(rep.data);
    rep.ratio_high = high.ratio(rep.data);
    rep.relative = rep.ratio_low / rep.ratio_high;

    const std::array<int, 2> pair{1, 2};
    const auto two = adversarial_data(params, N, pair, T_low, intervals);
    rep.two_mode_relative = low.ratio(two) / high.ratio(two);
    return rep;
}

bool coefficient_condition_check(std::span<const ModeCoefficients> coeffs, double M) {
    return std::all_of(coeffs.begin(), coeffs.end(), [M](const ModeCoefficients& c) {
        return std::abs(c.C) <= M * std::abs(c.d * c.D);
    });
}

double lower_bound_constant(double T, double eps, double gamma, double alpha) {
    const double g2 = gamma * gamma;
    const double a2 = 16.0 * alpha * alpha;
    const double upper = (g2 - a2) / (g2 + a2);
    if (!(eps > 0.0 && eps < upper)) {
        std::ostringstream msg;
        msg << "lower_bound_constant: eps must lie in (0, " << upper << ")";
        throw InvalidArgument(msg.str());
    }
    if (!(T > 0.0)) throw InvalidArgument("lower_bound_constant: T must be positive");
    return pi * T * (1.0 - eps) *
           (1.0 / (pi * pi + 4.0 * T * T * alpha * alpha * (1.0 + eps)) -
            4.0 / (T * T * g2 * (1.0 - eps)));
}

int gap_start_index(std::span<const double> re, double gamma, double eps) {
    if (re.size() < 2) throw InvalidArgument("gap_start_index: sequence too short");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("gap_start_index: eps must lie in (0, 1)");
    const double g = gamma * std::sqrt(1.0 - eps);
    // Scan backwards for the last index violating either condition.
    std::size_t start = re.size();
    for (std::size_t k = re.size(); k-- > 0;) {
        const bool growth = re[k] >= g * static_cast<double>(k + 1);
        const bool gap = k + 1 == re.size() || re[k + 1] - re[k] >= g;
        if (!(growth && gap)) break;
        start = k;
    }
    if (start + 1 >= re.size()) {
        throw InvalidArgument("gap_start_index: gap condition never holds on the sequence");
    }
    return static_cast<int>(start) + 1;
}

double telescoping_sum(int n0, int n, int m_max) {
    double s = 0.0;
    for (int m = n0; m <= m_max; ++m) {
        if (m == n) continue;
        const double d = static_cast<double>(m - n);
        s += 1.0 / (4.0 * d * d - 1.0);
    }
    return s;
}

int tail_index_reciprocal(double a, double b, double eps) {
    if (a < 0.0 || b < 0.0 || !(eps > 0.0)) throw InvalidArgument("tail_index_reciprocal: bad arguments");
    for (int n0 = 1; n0 < 1'000'000'000; ++n0) {
        const double n = n0;
        // sum_{m >= n0} 1/(4m^2-1) telescopes to 1/(2(2 n0 - 1)).
        if (a / (4.0 * n * n - 1.0) + b / (2.0 * (2.0 * n - 1.0)) <= eps) return n0;
    }
    throw NumericalFailure("tail_index_reciprocal: no index found");
}

int tail_index_power(double a, double nu, double eps) {
    if (a < 0.0 || !(nu > 0.5) || !(eps > 0.0)) throw InvalidArgument("tail_index_power: bad arguments");
    const double p = 2.0 * nu;
    for (int n0 = 1; n0 < 1'000'000'000; ++n0) {
        const double n = n0;
        const double tail = std::pow(n, -p) + std::pow(n, 1.0 - p) / (p - 1.0);
        if (a * tail <= eps) return n0;
    }
    throw NumericalFailure("tail_index_power: no index found");
}

}  // namespace memwave
