#pragma once

// The eight acceptance checks of the toolkit, runnable from the test binary
// and from `memwave verify-all`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "memwave/hum.hpp"

namespace memwave {

struct AcceptanceSettings {
    Parameters params{0.3, 1.0, 0.1, 0.1};
    std::uint64_t seed = 20240601;

    int spectrum_modes = 64;

    int coefficient_modes = 8;
    int coefficient_draws = 50;

    int window_arguments = 100;

    int frame_N = 24;
    double frame_T = 8.0;
    int trials = 50;
    double adversarial_T = 2.0;
    std::size_t trace_intervals = 4096;

    int direct_N = 16;
    double direct_T = 8.0;

    int hum_N = 12;
    double hum_T = 8.0;
    double hum_T_below = 4.0;
    std::size_t nx = 800;
    TargetState target = first_mode_target(12);
    double tolerance = 0.05;

    static TargetState first_mode_target(int N);
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

CriterionResult check_spectral_fidelity(const AcceptanceSettings& s);
CriterionResult check_coefficient_fidelity(const AcceptanceSettings& s);
CriterionResult check_window_identities(const AcceptanceSettings& s);
CriterionResult check_observability(const AcceptanceSettings& s);
CriterionResult check_alternative_regime(const AcceptanceSettings& s);
CriterionResult check_direct_inequality(const AcceptanceSettings& s);
CriterionResult check_hum_end_to_end(const AcceptanceSettings& s);
CriterionResult check_oracle_cross_validation(const AcceptanceSettings& s);

/// Runs criteria 1..8 in order. An exception inside a check marks that
/// criterion failed with the message as detail. on_result is called as each
/// one finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceSettings& s,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace memwave
