#pragma once

// Exponential memory kernel k(t) = beta * exp(-eta t), its resolvent and the
// backward tail transforms that turn adjoint boundary traces into controls.

#include "memwave/types.hpp"

namespace memwave {

/// k(t) = beta * exp(-eta t).
double memory_kernel(const Parameters& params, double t);

/// Resolvent of the exponential kernel: the solution of rho - k * rho = k,
/// which is beta * exp((beta - eta) t). Requires t >= 0.
double resolvent_kernel(const Parameters& params, double t);

/// psi(t) = phi(t) - beta * int_t^T exp(-eta (s - t)) phi(s) ds.
///
/// phi must be sampled on [0, T]. The tail integral is accumulated right to
/// left, I_k = exp(-eta dt) I_{k+1} + dt/2 (phi_k + exp(-eta dt) phi_{k+1}),
/// so the cost is linear in the number of samples.
TraceSignal tail_transform(const TraceSignal& phi, const Parameters& params, double T);

/// Inverse of tail_transform through the resolvent:
/// phi(t) = psi(t) + beta * int_t^T exp((beta - eta)(s - t)) psi(s) ds.
TraceSignal invert_tail_transform(const TraceSignal& psi, const Parameters& params, double T);

}  // namespace memwave
