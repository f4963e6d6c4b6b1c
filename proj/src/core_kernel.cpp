#include "memwave/core_kernel.hpp"

#include <cmath>
#include <sstream>

namespace memwave {
namespace {

void require_grid(const TraceSignal& s, double T, const char* what) {
    const double tol = 1e-12 * std::max(1.0, std::abs(T));
    if (std::abs(s.t0()) > tol || std::abs(s.t1() - T) > tol) {
        std::ostringstream msg;
        msg << what << ": signal sampled on [" << s.t0() << ", " << s.t1()
            << "] but the horizon is [0, " << T << "]";
        throw InvalidArgument(msg.str());
    }
}

// I_k = int_{t_k}^{T} exp(-rate (s - t_k)) f(s) ds by the trapezoid recursion.
std::vector<double> backward_exponential_integral(const std::vector<double>& f, double dt,
                                                  double rate) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    const double decay = std::exp(-rate * dt);
    for (std::size_t k = n - 1; k-- > 0;) {
        out[k] = decay * out[k + 1] + 0.5 * dt * (f[k] + decay * f[k + 1]);
    }
    return out;
}

}  // namespace

double memory_kernel(const Parameters& params, double t) {
    return params.beta() * std::exp(-params.eta() * t);
}

double resolvent_kernel(const Parameters& params, double t) {
    if (t < 0.0) throw InvalidArgument("resolvent_kernel: t must be nonnegative");
    return params.beta() * std::exp(params.chi() * t);
}

TraceSignal tail_transform(const TraceSignal& phi, const Parameters& params, double T) {
    require_grid(phi, T, "tail_transform");
    const auto tail = backward_exponential_integral(phi.values(), phi.dt(), params.eta());
    std::vector<double> psi(phi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = phi[k] - params.beta() * tail[k];
    return TraceSignal(phi.grid(), std::move(psi));
}

TraceSignal invert_tail_transform(const TraceSignal& psi, const Parameters& params, double T) {
    require_grid(psi, T, "invert_tail_transform");
    // The resolvent weight exp((beta - eta)(s - t)) decays at rate eta - beta.
    const auto tail = backward_exponential_integral(psi.values(), psi.dt(), -params.chi());
    std::vector<double> phi(psi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = psi[k] + params.beta() * tail[k];
    return TraceSignal(psi.grid(), std::move(phi));
}

}  // namespace memwave
