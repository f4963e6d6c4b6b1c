#pragma once

// HUM control synthesis on the span of the first N sine modes. Final data of
// the adjoint system are expanded in canonical unit vectors ordered per mode as
// (z1^0, z1^1, z2^0, z2^1); index 4 (n - 1) + slot.

#include <Eigen/Dense>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "memwave/modes.hpp"
#include "memwave/pde_oracle.hpp"
#include "memwave/types.hpp"

namespace memwave {

/// Per-mode sine coefficients of (u1^0, u1^1, u2^0, u2^1) to be reached at t = T.
/// The ModeData fields are read as alpha1 = u1^0, rho1 = u1^1, alpha2 = u2^0,
/// rho2 = u2^1.
struct TargetState {
    std::vector<ModeData> modes;

    int N() const { return static_cast<int>(modes.size()); }
    static TargetState zeros(int N) { return {std::vector<ModeData>(static_cast<std::size_t>(N))}; }
};

/// Adjoint final data (z^0, z^1) per mode, same field layout as TargetState.
using FinalData = std::vector<ModeData>;

FinalData unit_final_data(int N, int index);
FinalData final_data_from_vector(const Eigen::VectorXd& coeffs);

struct AdjointBasis {
    TimeGrid grid;
    std::vector<TraceSignal> control1;  // tail_transform(z1x) per basis element
    std::vector<TraceSignal> z2x;
};

struct GramSystem {
    Eigen::MatrixXd G;
    Eigen::VectorXd rhs;
    Eigen::VectorXd solution;
    double condition_estimate = 0.0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double symmetry_error = 0.0;  // ||G - G^T|| / ||G||
    double regularization = 0.0;  // diagnostic Tikhonov shift, 0 unless requested
    std::string solver;           // "ldlt" or "cg"
};

struct ControlPair {
    TraceSignal g1;
    TraceSignal g2;
};

struct HumOptions {
    std::size_t intervals = 4096;  // trace samples on [0, T]
    double regularization = 0.0;
    double max_condition = 1e12;
};

struct HumResult {
    ControlPair controls;
    GramSystem gram;
    FinalData final_data;
};

struct VerificationReport {
    double u1_l2 = 0.0;     // ||u1(T) - u1^0|| / ||target||
    double u2_l2 = 0.0;
    double v1_hm1 = 0.0;    // ||u1_t(T) - u1^1||_{H^-1} / ||target||
    double v2_hm1 = 0.0;
    double projected = 0.0; // combined error restricted to sine modes <= N
    double target_norm = 0.0;
    std::size_t nx = 0;
    std::size_t nt = 0;

    double max_error() const;
};

/// x-derivatives at pi of the adjoint solution with final data z on [0, T]:
/// the forward system with couplings (b, a) started from (z^0, -z^1) and
/// evaluated at T - t. Requires b != 0.
TracePair adjoint_traces(const Parameters& params, std::span<const ModeData> final_data, double T,
                         const TimeGrid& grid);

/// Traces of the 4N unit final data, computed in parallel.
AdjointBasis adjoint_basis(const Parameters& params, int N, double T, std::size_t intervals);

/// G_ij = int_0^T control1_i control1_j + z2x_i z2x_j dt (Simpson), with
/// eigenvalue-based conditioning report.
GramSystem gram_matrix(const AdjointBasis& basis);

/// b_j = pi/2 sum_n (-u1^1_n z1^0_n + u1^0_n z1^1_n - u2^1_n z2^0_n + u2^0_n z2^1_n)
/// for the j-th unit final datum.
Eigen::VectorXd rhs_vector(const TargetState& target, int N);

HumResult solve_controls(const Parameters& params, const TargetState& target, double T,
                         const HumOptions& options = {});

/// Controls as the coefficient-weighted sum of basis traces.
ControlPair assemble_controls(const AdjointBasis& basis, const Eigen::VectorXd& coeffs);

/// Runs the finite-difference solver from rest with the given controls and
/// compares the state at T with the target.
/// Target profiles (u1^0, u1^1, u2^0, u2^1) sampled on the interior nodes.
std::array<std::vector<double>, 4> target_profiles(const TargetState& target, const FDGrid& grid);

/// Runs the controlled FD solver and compares the state at T with the target.
/// The run is copied to *history when given.
VerificationReport verify_control(const Parameters& params, const ControlPair& controls,
                                  const TargetState& target, double T, const FDGrid& grid,
                                  StateHistory* history = nullptr);

}  // namespace memwave
