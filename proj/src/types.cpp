#include "memwave/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace memwave {

Parameters::Parameters(double beta, double eta, double a, double b)
    : beta_(beta), eta_(eta), a_(a), b_(b) {
    if (!std::isfinite(beta) || !std::isfinite(eta) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("parameters must be finite");
    }
    if (!(beta > 0.0 && beta < eta)) {
        std::ostringstream msg;
        msg << "memory constants must satisfy 0 < beta < eta (got beta=" << beta
            << ", eta=" << eta << ")";
        throw InvalidArgument(msg.str());
    }
}

void Parameters::require_coupling(const char* context) const {
    if (a_ == 0.0) {
        throw InvalidArgument(std::string(context) +
                              ": coupling a must be nonzero to recover u2 from u1");
    }
}

TimeGrid::TimeGrid(double start, double stop, std::size_t n_intervals)
    : t0(start), t1(stop), intervals(n_intervals) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !(stop > start)) {
        throw InvalidArgument("time grid needs t1 > t0");
    }
    if (n_intervals < 1) {
        throw InvalidArgument("time grid needs at least one interval");
    }
}

double TimeGrid::time(std::size_t k) const {
    if (k == intervals) return t1;
    return t0 + static_cast<double>(k) * dt();
}

TraceSignal::TraceSignal(const TimeGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        std::ostringstream msg;
        msg << "trace has " << values_.size() << " samples but the grid has " << grid_.size();
        throw InvalidArgument(msg.str());
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("trace samples must be finite");
    }
}

TraceSignal TraceSignal::zeros(const TimeGrid& grid) {
    return TraceSignal(grid, std::vector<double>(grid.size(), 0.0));
}

TraceSignal TraceSignal::sample(const TimeGrid& grid, const std::function<double(double)>& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.time(k));
    return TraceSignal(grid, std::move(v));
}

double TraceSignal::interpolate(double t) const {
    if (t <= grid_.t0) return values_.front();
    if (t >= grid_.t1) return values_.back();
    const double s = (t - grid_.t0) / grid_.dt();
    auto k = static_cast<std::size_t>(s);
    if (k >= grid_.intervals) return values_.back();
    const double frac = s - static_cast<double>(k);
    return (1.0 - frac) * values_[k] + frac * values_[k + 1];
}

double TraceSignal::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace memwave
