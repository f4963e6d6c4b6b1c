#pragma once

#include <span>
#include <vector>

namespace memwave {

/// Composite trapezoid rule on uniformly spaced samples.
double trapezoid(std::span<const double> f, double dt);

/// Composite Simpson rule on uniformly spaced samples. An even number of
/// intervals uses Simpson throughout; an odd number closes the last three
/// intervals with the 3/8 rule. Needs at least three samples (two samples fall
/// back to the trapezoid).
double simpson(std::span<const double> f, double dt);

/// Weights w such that simpson(f, dt) == sum_k w[k] f[k].
std::vector<double> simpson_weights(std::size_t n_samples, double dt);

}  // namespace memwave
