#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "memwave/modes.hpp"

using namespace memwave;

namespace {

const Parameters P(0.3, 1.0, 0.1, 0.1);
constexpr Complex I{0.0, 1.0};

ModeData draw_data(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng), g(rng), g(rng)};
}

struct Mode {
    ModeSpectrum s;
    ModeCoefficients c;
};

Mode build(int n, const ModeData& d, const Parameters& p = P) {
    const auto s = solve_quintic(p, n * n, n);
    return {s, mode_coefficients(p, s, d)};
}

double sup_error_vs_rk4(int n, const ModeData& d, double T) {
    const auto m = build(n, d);
    const TimeGrid g(0.0, T, 400);
    const auto [f1, f2] = mode_ode_oracle(P, n * n, d, g);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto v = mode_series_eval(P, m.s, m.c, g.time(k));
        err = std::max({err, std::abs(v.f1 - f1[k]), std::abs(v.f2 - f2[k])});
    }
    return err;
}

}  // namespace

TEST(InitialDerivatives, ZeroData) {
    for (double v : initial_derivatives(P, 4.0, {})) EXPECT_EQ(v, 0.0);
}

TEST(InitialDerivatives, WorkedExample) {
    const auto f = initial_derivatives(P, 4.0, {1.0, 0.0, 0.0, 0.0});
    const std::array<double, 5> expected{1.0, 0.0, -4.0, 1.2, 14.81};
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(f[i], expected[i], 1e-13) << i;
}

TEST(InitialDerivatives, FourthDerivativeIdentity) {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 20; ++n) {
        const double lambda = n * n;
        const auto f = initial_derivatives(P, lambda, draw_data(rng));
        const double rebuilt = fourth_derivative_from_lower(P, lambda, f[0], f[1], f[2]);
        EXPECT_NEAR(rebuilt, f[4], 1e-12 * (1.0 + std::abs(f[4])));
    }
}

TEST(Vandermonde, ZeroData) {
    const auto s = solve_quintic(P, 9.0, 3);
    const auto v = solve_vandermonde(s, {});
    EXPECT_EQ(v.R, 0.0);
    EXPECT_EQ(v.C, Complex(0.0));
    EXPECT_EQ(v.D, Complex(0.0));
}

TEST(Vandermonde, ReconstructsDerivatives) {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 5, 16, 64}) {
        const auto s = solve_quintic(P, n * n, n);
        const auto init = initial_derivatives(P, s.lambda, draw_data(rng));
        const auto v = solve_vandermonde(s, init);
        EXPECT_LT(v.condition, 1e12);
        Complex pw = 1.0, pz = 1.0;
        double pr = 1.0;
        for (int k = 0; k < 5; ++k) {
            const double f = v.R * pr + 2.0 * (v.C * pw).real() + 2.0 * (v.D * pz).real();
            EXPECT_NEAR(f, init[k], 1e-9 * (1.0 + std::abs(init[k]))) << "n=" << n << " k=" << k;
            pr *= s.r;
            pw *= I * s.omega;
            pz *= I * s.zeta;
        }
    }
}

TEST(Vandermonde, LeadingCoefficientAtLargeN) {
    const auto m = build(50, {1.0, 0.0, 0.0, 0.0});
    EXPECT_NEAR(m.c.C.real(), 0.5, 0.01);
}

TEST(Vandermonde, SingularSystemRejected) {
    auto s = solve_quintic(P, 4.0, 2);
    s.zeta = s.omega;
    EXPECT_THROW(solve_vandermonde(s, initial_derivatives(P, 4.0, {1, 0, 0, 0})), NumericalFailure);
}

TEST(Multipliers, DecoupledSecondEquation) {
    const Parameters p(0.3, 1.0, 0.1, 0.0);
    const auto s = solve_quintic(p, 4.0, 2);
    EXPECT_EQ(multipliers(p, s).c, Complex(0.0));
}

TEST(Multipliers, GrowthRates) {
    for (int n = 5; n <= 50; n += 5) {
        const auto s = solve_quintic(P, n * n, n);
        const auto m = multipliers(P, s);
        const double root = std::sqrt(s.lambda);
        // |c| sqrt(lambda) -> b / beta, |d| / sqrt(lambda) -> beta / a
        EXPECT_NEAR(std::abs(m.c) * root, P.b() / P.beta(), 0.1 * P.b() / P.beta()) << n;
        EXPECT_NEAR(std::abs(m.d) / root, P.beta() / P.a(), 0.1 * P.beta() / P.a()) << n;
    }
}

TEST(Multipliers, AlternateEvaluationOrder) {
    const auto s = solve_quintic(P, 100.0, 10);
    const auto m = multipliers(P, s);
    const Complex ew = P.eta() + I * s.omega;
    const Complex c_alt = P.b() * std::conj(ew) / (P.beta() * std::norm(ew));
    const Complex ez = P.eta() + I * s.zeta;
    const Complex d_alt = ((s.zeta * s.zeta - s.lambda) * ez + P.beta() * s.lambda) / (P.a() * ez);
    EXPECT_LT(std::abs(m.c - c_alt), 1e-14);
    EXPECT_LT(std::abs(m.d - d_alt), 1e-12 * std::abs(m.d));
}

TEST(Multipliers, RequireCoupling) {
    const Parameters p(0.3, 1.0, 0.0, 0.1);
    const auto s = solve_quintic(p, 4.0, 2);
    EXPECT_THROW(multipliers(p, s), InvalidArgument);
}

TEST(ResidualCoefficient, ZeroData) {
    const auto m = build(3, {});
    EXPECT_EQ(m.c.E, 0.0);
    EXPECT_EQ(m.c.E_exact, 0.0);
}

TEST(ResidualCoefficient, ExactFormReproducesSecondComponentAtZero) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 12; ++n) {
        const auto d = draw_data(rng);
        const auto m = build(n, d);
        const auto v = mode_series_eval(P, m.s, m.c, 0.0);
        EXPECT_NEAR(v.f2, d.alpha2, 1e-9 * (1.0 + std::abs(d.alpha2))) << n;
        EXPECT_NEAR(v.f1, d.alpha1, 1e-9 * (1.0 + std::abs(d.alpha1))) << n;
    }
}

TEST(ResidualCoefficient, ExactDecayTermVanishes) {
    // -eta is not a characteristic root, so the exact f2 carries no e^{-eta t} term.
    std::mt19937_64 rng(6);
    for (int n = 1; n <= 20; ++n) {
        const auto d = draw_data(rng);
        const auto m = build(n, d);
        const double scale = std::abs(m.c.R) + std::abs(m.c.C) + std::abs(m.c.D);
        EXPECT_LT(std::abs(m.c.E_exact), 1e-11 * n * n * scale) << n;
    }
}

TEST(ResidualCoefficient, AsymptoticFormConvergesAtZero) {
    // The asymptotic multipliers reproduce alpha2 only up to O(1/lambda).
    const ModeData d{0.3, -0.5, 0.7, 0.2};
    for (int n : {3, 10, 30}) {
        const auto m = build(n, d);
        const double f2 = 2.0 * (m.c.d * m.c.D).real() + 2.0 * (m.c.c * m.c.C).real() + m.c.E;
        EXPECT_LT(std::abs(f2 - d.alpha2) * n * n, 1.0) << n;
    }
}

TEST(ResidualCoefficient, SumBoundedByCoefficientEnergy) {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        double sum_e = 0.0, energy = 0.0;
        for (int n = 1; n <= 24; ++n) {
            std::normal_distribution<double> g;
            const ModeData d{g(rng) / n, g(rng) / n, g(rng) / n, g(rng) / n};
            const auto m = build(n, d);
            sum_e += m.c.E;
            energy += std::norm(m.c.C) + std::norm(m.c.d * m.c.D);
        }
        worst = std::max(worst, sum_e * sum_e / energy);
    }
    // Calibrated once: the worst draw sits near 0.8.
    EXPECT_LT(worst, 2.0);
}

TEST(Upsilon, ZeroOfSameCoefficient) {
    // beta lambda / (eta + z) = z^2 + lambda at a root of the cubic factor.
    const double lambda = 9.0;
    const auto c = solve_cubic(P, lambda);
    EXPECT_LT(std::abs(upsilon_apply_exponential(P, lambda, c.z).same), 1e-12);
    EXPECT_LT(std::abs(upsilon_apply_exponential(P, lambda, c.r).same), 1e-12);
    EXPECT_THROW(upsilon_apply_exponential(P, lambda, Complex(-P.eta(), 0.0)), InvalidArgument);
}

TEST(Upsilon, OmegaCoefficientApproachesAsymptoticMultiplier) {
    for (int n = 20; n <= 60; n += 10) {
        const auto s = solve_quintic(P, n * n, n);
        const auto u = upsilon_apply_exponential(P, s.lambda, I * s.omega);
        const auto m = multipliers(P, s);
        EXPECT_LT(std::abs(u.same - m.c) / std::abs(m.c) * std::sqrt(s.lambda), 2.0) << n;
        const auto uz = upsilon_apply_exponential(P, s.lambda, I * s.zeta);
        EXPECT_LT(std::abs(uz.same - m.d), 1e-12 * std::abs(m.d));
    }
}

TEST(Upsilon, AppliedToFirstComponentGivesSecond) {
    // Upsilon(f1) evaluated by quadrature of the memory integral.
    const int n = 4;
    const ModeData d{0.4, 0.1, -0.3, 0.8};
    const auto m = build(n, d);
    const double lambda = m.s.lambda;
    const double h = 1e-4;
    const int steps = 30000;
    double memory = 0.0;
    double prev = mode_series_eval(P, m.s, m.c, 0.0).f1;
    double worst = 0.0;
    for (int k = 1; k <= steps; ++k) {
        const double t = k * h;
        const double f = mode_series_eval(P, m.s, m.c, t).f1;
        memory = std::exp(-P.eta() * h) * memory + 0.5 * h * (std::exp(-P.eta() * h) * prev + f);
        prev = f;
        if (k % 1000 != 0) continue;
        const double fpp = (mode_series_eval(P, m.s, m.c, t + h).f1 - 2.0 * f +
                            mode_series_eval(P, m.s, m.c, t - h).f1) / (h * h);
        const double f2 = -(fpp + lambda * f - P.beta() * lambda * memory) / P.a();
        worst = std::max(worst, std::abs(f2 - mode_series_eval(P, m.s, m.c, t).f2));
    }
    EXPECT_LT(worst, 1e-4);
}

TEST(OdeOracle, ZeroAndDecoupled) {
    const TimeGrid g(0.0, 2.0, 100);
    const auto [f1, f2] = mode_ode_oracle(P, 4.0, {}, g);
    EXPECT_EQ(f1.sup_norm(), 0.0);
    EXPECT_EQ(f2.sup_norm(), 0.0);
    const Parameters p(0.3, 1.0, 0.1, 0.0);
    const auto [g1, g2] = mode_ode_oracle(p, 4.0, {1.0, 0.5, 0.0, 0.0}, g);
    EXPECT_GT(g1.sup_norm(), 0.1);
    EXPECT_EQ(g2.sup_norm(), 0.0);
}

TEST(OdeOracle, StepGuard) {
    const TimeGrid g(0.0, 1.0, 10);
    EXPECT_THROW(mode_ode_oracle(P, 100.0, {1, 0, 0, 0}, g, 0.02), InvalidArgument);
    EXPECT_THROW(mode_ode_oracle(P, 4.0, {1, 0, 0, 0}, TimeGrid(0.5, 1.0, 10)), InvalidArgument);
}

TEST(SeriesEval, MatchesOdeOracleAtModeThree) {
    EXPECT_LT(sup_error_vs_rk4(3, {1.0, 0.0, 0.0, 0.0}, 5.0), 1e-6);
    EXPECT_LT(sup_error_vs_rk4(3, {0.2, -0.7, 0.4, 1.1}, 5.0), 1e-6);
}

TEST(SeriesEval, MatchesOdeOracleModesOneToEight) {
    std::mt19937_64 rng(23);
    for (int n = 1; n <= 8; ++n) {
        EXPECT_LT(sup_error_vs_rk4(n, draw_data(rng), 2.0 * M_PI), 1e-6) << n;
    }
}

TEST(SeriesEval, AsymptoticFormDeviatesAtLowModes) {
    const ModeData d{0.3, -0.5, 0.7, 0.2};
    const auto m = build(1, d);
    const auto exact = mode_series_eval(P, m.s, m.c, 0.0, SeriesForm::Exact);
    const auto asym = mode_series_eval(P, m.s, m.c, 0.0, SeriesForm::Asymptotic);
    EXPECT_EQ(exact.f1, asym.f1);
    EXPECT_GT(std::abs(exact.f2 - asym.f2), 1e-2);
}

TEST(CoefficientBounds, EnergyBracketForLargeModes) {
    // The ratio tends to 1/4 for data on the first component and to
    // (a / beta)^2 / 4 for data on the second; the bracket covers both.
    const double lo = P.a() * P.a() / (8.0 * P.beta() * P.beta());
    std::mt19937_64 rng(29);
    for (int draw = 0; draw < 50; ++draw) {
        for (int n = 16; n <= 64; n += 8) {
            const auto d = draw_data(rng);
            const auto m = build(n, d);
            const double lambda = m.s.lambda;
            const double ratio = (std::norm(m.c.C) + lambda * std::norm(m.c.D)) * lambda /
                                 (d.alpha1 * d.alpha1 * lambda + d.rho1 * d.rho1 +
                                  d.alpha2 * d.alpha2 * lambda + d.rho2 * d.rho2);
            EXPECT_GT(ratio, lo) << n;
            EXPECT_LT(ratio, 0.5) << n;
        }
    }
}

TEST(CoefficientBounds, RealRootCoefficientIsSmall) {
    std::mt19937_64 rng(31);
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        for (int n = 1; n <= 64; ++n) {
            const auto m = build(n, draw_data(rng));
            const double lambda = m.s.lambda;
            worst = std::max(worst, std::abs(m.c.R) * std::sqrt(lambda) /
                                        std::sqrt(std::norm(m.c.C) + lambda * std::norm(m.c.D)));
        }
    }
    EXPECT_LT(worst, 1.0);
}
