#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "memwave/spectrum.hpp"
#include "poly_oracle.hpp"

using namespace memwave;

namespace {

const Parameters P(0.3, 1.0, 0.1, 0.1);

}  // namespace

TEST(CharacteristicCoefficients, KnownValues) {
    const auto c = characteristic_coefficients(P, 1.0);
    const std::array<double, 6> expected{1.0, 1.0, 2.0, 1.7, 0.99, 0.69};
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(c[i], expected[i], 1e-15) << i;
    EXPECT_THROW(characteristic_coefficients(P, 0.0), InvalidArgument);
}

TEST(CharacteristicCoefficients, ConstantTermSign) {
    for (double lambda : {0.5, 1.0, 4.0, 100.0}) {
        const double ab = P.a() * P.b();
        const bool small_coupling = ab < lambda * lambda * (P.eta() - P.beta()) / P.eta();
        EXPECT_EQ(characteristic_coefficients(P, lambda)[5] > 0.0, small_coupling);
    }
    const Parameters strong(0.3, 1.0, 2.0, 2.0);
    EXPECT_LT(characteristic_coefficients(strong, 1.0)[5], 0.0);
}

TEST(CharacteristicCoefficients, SeedsNearlyAnnihilatePolynomialAtLargeLambda) {
    const double lambda = 1e4;
    const auto s = asymptotic_seeds(P, lambda);
    const double scale = lambda * lambda * std::sqrt(lambda);  // size of the dominant terms
    EXPECT_LT(std::abs(characteristic_polynomial(P, lambda, s.r)) / scale, 1e-6);
    EXPECT_LT(std::abs(characteristic_polynomial(P, lambda, Complex(0, 1) * s.omega)) / scale, 1e-6);
    EXPECT_LT(std::abs(characteristic_polynomial(P, lambda, Complex(0, 1) * s.zeta)) / scale, 1e-6);
}

TEST(AsymptoticSeeds, Arithmetic) {
    const auto s = asymptotic_seeds(P, 100.0);
    EXPECT_NEAR(s.r, -0.70147, 1e-12);
    const auto far = asymptotic_seeds(P, 1e12);
    EXPECT_NEAR(far.r, -0.7, 1e-9);
    EXPECT_NEAR(far.omega.imag(), 0.15, 1e-9);
    EXPECT_NEAR(far.zeta.imag(), 0.0, 1e-9);
}

TEST(AsymptoticSeeds, OmegaSeedErrorDecaysLikeLambdaToMinusThreeHalves) {
    std::vector<double> x, y;
    for (int n = 10; n <= 100; n += 10) {
        const double lambda = n * n;
        const auto s = solve_quintic(P, lambda, n);
        x.push_back(std::log(lambda));
        y.push_back(std::log(std::abs(s.omega - asymptotic_seeds(P, lambda).omega)));
    }
    const double slope = poly_oracle::least_squares_slope(x, y);
    EXPECT_NEAR(slope, -1.5, 0.1);
}

TEST(SolveQuintic, VietaAtUnitLambda) {
    const auto s = solve_quintic(P, 1.0, 1);
    Complex sum = 0.0;
    for (Complex z : s.roots()) sum += z;
    EXPECT_NEAR(sum.real(), -1.0, 1e-12);
    EXPECT_NEAR(sum.imag(), 0.0, 1e-12);
    EXPECT_GT(s.omega.real(), 0.0);
    EXPECT_GT(s.zeta.real(), 0.0);
    // Reference values from an independent run.
    EXPECT_NEAR(s.r, -0.81997, 1e-5);
    EXPECT_NEAR(s.omega.real(), 0.89738, 1e-5);
    EXPECT_NEAR(s.omega.imag(), 0.07757, 1e-5);
    EXPECT_NEAR(s.zeta.real(), 1.01836, 1e-5);
    EXPECT_NEAR(s.zeta.imag(), 0.01244, 1e-5);
}

TEST(SolveQuintic, LargeLambdaRealRoot) {
    const auto s = solve_quintic(P, 1e4, 100);
    EXPECT_LT(std::abs(s.r + 0.7), 1e-3);
}

TEST(SolveQuintic, MatchesIndependentRootFinder) {
    const double lambda = 4.0;
    const auto s = solve_quintic(P, lambda, 2);
    const auto c = characteristic_coefficients(P, lambda);
    auto ref = poly_oracle::durand_kerner(std::vector<double>(c.begin(), c.end()));
    auto mine = s.roots();
    for (Complex z : mine) {
        const auto best = std::min_element(ref.begin(), ref.end(), [&](Complex p, Complex q) {
            return std::abs(p - z) < std::abs(q - z);
        });
        EXPECT_LT(std::abs(*best - z), 1e-10);
        ref.erase(best);
    }
}

TEST(SolveQuintic, InvariantsOverStringModes) {
    const auto spectra = string_spectra(P, 64);
    ASSERT_EQ(spectra.size(), 64u);
    for (const auto& s : spectra) {
        const auto res = spectrum_residuals(P, s);
        EXPECT_LT(res.max_poly_residual, res.poly_tolerance) << s.n;
        EXPECT_LT(res.trace_error, 1e-9 * (1.0 + P.eta())) << s.n;
        EXPECT_LT(res.product_error, 1e-8) << s.n;
        EXPECT_GT(res.min_separation, 0.0);
    }
    EXPECT_NO_THROW(check_distinctness(P, spectra));
    for (std::size_t k = 2; k < spectra.size(); ++k) {
        EXPECT_GT(spectra[k].omega.real(), spectra[k - 1].omega.real());
        EXPECT_GT(spectra[k].zeta.real(), spectra[k - 1].zeta.real());
    }
}

TEST(SolveQuintic, ClassificationStableUnderSeedPerturbation) {
    for (int n = 1; n <= 64; ++n) {
        const double lambda = n * n;
        const auto base = solve_quintic(P, lambda, n);
        for (double f : {0.99, 1.01}) {
            auto seeds = asymptotic_seeds(P, lambda);
            seeds.r *= f;
            seeds.omega *= f;
            seeds.zeta *= f;
            const auto s = solve_quintic(P, lambda, n, seeds);
            EXPECT_EQ(s.omega, base.omega) << n;
            EXPECT_EQ(s.zeta, base.zeta) << n;
        }
    }
}

TEST(SolveQuintic, OmegaFamilyHasLargerDamping) {
    for (int n = 1; n <= 64; ++n) {
        const auto s = solve_quintic(P, n * n, n);
        EXPECT_LT(std::abs(s.omega.imag() - P.beta() / 2), std::abs(s.zeta.imag() - P.beta() / 2)) << n;
    }
}

TEST(SolveQuintic, RejectsBadLambda) {
    EXPECT_THROW(solve_quintic(P, -1.0), InvalidArgument);
}

TEST(SolveCubic, VietaAndAsymptotics) {
    for (double lambda : {1.0, 4.0, 100.0}) {
        const auto c = solve_cubic(P, lambda);
        EXPECT_NEAR(c.r + 2.0 * c.z.real(), -P.eta(), 1e-12);
        EXPECT_GT(c.z.imag(), 0.0);
    }
    const double lambda = 100.0;
    const auto c = solve_cubic(P, lambda);
    const double chi = P.chi();
    EXPECT_LT(std::abs(c.r - (chi - P.beta() * chi * chi / lambda)) * lambda * lambda, 0.05);
}

TEST(SolveCubic, QuinticShiftRelation) {
    // i omega - z - ab / (2 beta lambda) = O(lambda^{-3/2})
    const double ab = P.a() * P.b();
    for (int n = 5; n <= 50; n += 5) {
        const double lambda = n * n;
        const auto q = solve_quintic(P, lambda, n);
        const auto c = solve_cubic(P, lambda);
        const double gap = std::abs(Complex(0, 1) * q.omega - c.z - ab / (2 * P.beta() * lambda));
        EXPECT_LT(gap * std::pow(lambda, 1.5), 0.03) << n;
    }
}

TEST(SequenceConstants, StringLimits) {
    const auto s64 = string_spectra(P, 64);
    const auto k64 = sequence_constants(s64);
    EXPECT_NEAR(k64.gamma, 1.0, 1e-2);
    EXPECT_NEAR(k64.alpha, 0.15, 1e-2);
    EXPECT_NEAR(k64.chi, -0.7, 1e-2);
    const std::vector<ModeSpectrum> s32(s64.begin(), s64.begin() + 32);
    const auto k32 = sequence_constants(s32);
    EXPECT_LT(std::abs(k32.gamma - k64.gamma), 1e-2);
    EXPECT_LT(std::abs(k32.alpha - k64.alpha), 1e-2);
    EXPECT_LT(std::abs(k32.chi - k64.chi), 1e-2);
}

TEST(SequenceConstants, GapVersusDampingMatchesBetaHalf) {
    for (double beta : {0.1, 0.3, 0.45, 0.55, 0.7}) {
        const Parameters p(beta, 1.0, 0.1, 0.1);
        const auto k = sequence_constants(string_spectra(p, 64));
        EXPECT_EQ(k.gamma > 4.0 * k.alpha, beta < 0.5) << beta;
    }
}

TEST(SequenceConstants, Preconditions) {
    const auto s = string_spectra(P, 7);
    EXPECT_THROW(sequence_constants(s), InvalidArgument);
    auto bad = string_spectra(P, 10);
    std::swap(bad[4].omega, bad[5].omega);
    std::swap(bad[4].n, bad[5].n);
    EXPECT_THROW(sequence_constants(bad), InvalidArgument);
    bad = string_spectra(P, 10);
    bad[5].omega = bad[4].omega;
    EXPECT_THROW(sequence_constants(bad), NumericalFailure);
}

TEST(CheckDistinctness, DetectsCollision) {
    auto s = string_spectra(P, 8);
    s[3].zeta = s[2].omega;
    EXPECT_THROW(check_distinctness(P, s), NumericalFailure);
}
