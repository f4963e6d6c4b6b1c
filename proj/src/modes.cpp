#include "memwave/modes.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace memwave {
namespace {

constexpr Complex I{0.0, 1.0};

std::string mode_tag(const ModeSpectrum& s) { return describe(s); }

}  // namespace

InitialDerivatives initial_derivatives(const Parameters& params, double lambda, const ModeData& d) {
    const double beta = params.beta();
    const double eta = params.eta();
    const double a = params.a();
    const double ab = a * params.b();
    return {d.alpha1,
            d.rho1,
            -lambda * d.alpha1 - a * d.alpha2,
            -lambda * d.rho1 + beta * lambda * d.alpha1 - a * d.rho2,
            (lambda * lambda - eta * beta * lambda + ab) * d.alpha1 + 2.0 * a * lambda * d.alpha2 +
                beta * lambda * d.rho1};
}

double fourth_derivative_from_lower(const Parameters& params, double lambda, double f0, double f1,
                                    double f2) {
    const double beta = params.beta();
    const double ab = params.a() * params.b();
    return -2.0 * lambda * f2 + lambda * beta * f1 +
           (ab - params.eta() * lambda * beta - lambda * lambda) * f0;
}

VandermondeSolution solve_vandermonde(const ModeSpectrum& spectrum, const InitialDerivatives& init) {
    const Complex zw = I * spectrum.omega;
    const Complex zz = I * spectrum.zeta;

    Eigen::Matrix<double, 5, 5> M;
    Eigen::Matrix<double, 5, 1> rhs;
    Complex pw = 1.0;
    Complex pz = 1.0;
    double pr = 1.0;
    for (int k = 0; k < 5; ++k) {
        M.row(k) << pr, 2.0 * pw.real(), -2.0 * pw.imag(), 2.0 * pz.real(), -2.0 * pz.imag();
        rhs(k) = init[static_cast<std::size_t>(k)];
        pr *= spectrum.r;
        pw *= zw;
        pz *= zz;
    }

    // Row and column equilibration; powers of |z| ~ sqrt(lambda) otherwise
    // dominate the condition number.
    Eigen::Matrix<double, 5, 1> row_scale = M.rowwise().lpNorm<Eigen::Infinity>().cwiseInverse();
    Eigen::Matrix<double, 5, 5> S = row_scale.asDiagonal() * M;
    Eigen::Matrix<double, 5, 1> col_scale = S.colwise().lpNorm<Eigen::Infinity>().transpose().cwiseInverse();
    S = S * col_scale.asDiagonal();
    const Eigen::Matrix<double, 5, 1> b = row_scale.cwiseProduct(rhs);

    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(S);
    const Eigen::Matrix<double, 5, 1> sv = svd.singularValues();
    const double smallest = sv.minCoeff();
    const double cond = smallest > 0.0 ? sv.maxCoeff() / smallest : INFINITY;
    if (!(cond <= 1e12)) {
        std::ostringstream msg;
        msg << mode_tag(spectrum) << ": Vandermonde system is singular (condition " << cond << ")";
        throw NumericalFailure(msg.str());
    }

    Eigen::PartialPivLU<Eigen::Matrix<double, 5, 5>> lu(S);
    Eigen::Matrix<double, 5, 1> y = lu.solve(b);
    y += lu.solve(b - S * y);
    const Eigen::Matrix<double, 5, 1> x = col_scale.cwiseProduct(y);

    VandermondeSolution out;
    out.R = x(0);
    out.C = {x(1), x(2)};
    out.D = {x(3), x(4)};
    out.condition = cond;
    return out;
}

Multipliers multipliers(const Parameters& params, const ModeSpectrum& spectrum) {
    params.require_coupling("multipliers");
    const double beta = params.beta();
    const double eta = params.eta();
    const double lambda = spectrum.lambda;
    const Complex den_w = eta + I * spectrum.omega;
    const Complex den_z = eta + I * spectrum.zeta;
    if (std::abs(den_w) == 0.0 || std::abs(den_z) == 0.0) {
        throw NumericalFailure(mode_tag(spectrum) + ": multiplier denominator vanishes");
    }
    Multipliers m;
    m.c = params.b() / (beta * den_w);
    m.d = (spectrum.zeta * spectrum.zeta - lambda + beta * lambda / den_z) / params.a();
    return m;
}

double residual_coefficient(const Parameters& params, const ModeData& data, Complex C, Complex D,
                            const ModeSpectrum& spectrum, Complex c) {
    params.require_coupling("residual_coefficient");
    const double lambda = spectrum.lambda;
    const Complex den_z = params.eta() + I * spectrum.zeta;
    return data.alpha2 - 2.0 * (c * C).real() -
           (2.0 * params.beta() * lambda / params.a()) * (D / den_z).real();
}

UpsilonCoefficients upsilon_apply_exponential(const Parameters& params, double lambda, Complex z) {
    params.require_coupling("upsilon_apply_exponential");
    const Complex den = params.eta() + z;
    if (std::abs(den) < 1e-14 * (1.0 + params.eta())) {
        throw InvalidArgument("upsilon_apply_exponential: z = -eta is excluded");
    }
    const double bl = params.beta() * lambda;
    const double inv_a = 1.0 / params.a();
    return {-inv_a * (z * z + lambda - bl / den), -inv_a * bl / den};
}

ModeCoefficients mode_coefficients(const Parameters& params, const ModeSpectrum& spectrum,
                                   const ModeData& data) {
    params.require_coupling("mode_coefficients");
    const double lambda = spectrum.lambda;
    const auto v = solve_vandermonde(spectrum, initial_derivatives(params, lambda, data));
    const auto m = multipliers(params, spectrum);

    ModeCoefficients out;
    out.R = v.R;
    out.C = v.C;
    out.D = v.D;
    out.c = m.c;
    out.d = m.d;
    out.E = residual_coefficient(params, data, v.C, v.D, spectrum, m.c);
    out.condition = v.condition;

    const auto ur = upsilon_apply_exponential(params, lambda, Complex(spectrum.r, 0.0));
    const auto uw = upsilon_apply_exponential(params, lambda, I * spectrum.omega);
    const auto uz = upsilon_apply_exponential(params, lambda, I * spectrum.zeta);
    out.c_exact = uw.same;
    out.r_factor = ur.same.real();
    out.E_exact = ur.decay.real() * v.R + 2.0 * (uw.decay * v.C).real() + 2.0 * (uz.decay * v.D).real();
    return out;
}

ModeValue mode_series_eval(const Parameters& params, const ModeSpectrum& spectrum,
                           const ModeCoefficients& k, double t, SeriesForm form) {
    const Complex ew = std::exp(I * spectrum.omega * t);
    const Complex ez = std::exp(I * spectrum.zeta * t);
    const double er = std::exp(spectrum.r * t);
    const double ee = std::exp(-params.eta() * t);

    ModeValue v;
    v.f1 = k.R * er + 2.0 * (k.C * ew).real() + 2.0 * (k.D * ez).real();
    if (form == SeriesForm::Exact) {
        v.f2 = k.r_factor * k.R * er + 2.0 * (k.c_exact * k.C * ew).real() +
               2.0 * (k.d * k.D * ez).real() + k.E_exact * ee;
    } else {
        v.f2 = 2.0 * (k.d * k.D * ez).real() + 2.0 * (k.c * k.C * ew).real() + k.E * ee;
    }
    return v;
}

std::pair<TraceSignal, TraceSignal> mode_ode_oracle(const Parameters& params, double lambda,
                                                    const ModeData& data, const TimeGrid& grid,
                                                    double max_step) {
    if (!(lambda > 0.0)) throw InvalidArgument("mode_ode_oracle: lambda must be positive");
    if (grid.t0 != 0.0) throw InvalidArgument("mode_ode_oracle: grid must start at t = 0");
    const double root = std::sqrt(lambda);
    if (max_step <= 0.0) max_step = std::min(1e-3, 0.1 / root);
    const auto sub = static_cast<std::size_t>(std::ceil(grid.dt() / max_step - 1e-12));
    const double h = grid.dt() / static_cast<double>(std::max<std::size_t>(sub, 1));
    if (5.0 * h * root > 0.5) {
        std::ostringstream msg;
        msg << "mode_ode_oracle: step " << h << " too large for lambda=" << lambda;
        throw InvalidArgument(msg.str());
    }

    const double beta = params.beta();
    const double eta = params.eta();
    const double a = params.a();
    const double b = params.b();
    using State = Eigen::Matrix<double, 5, 1>;
    auto deriv = [&](const State& y) {
        State d;
        d << y(1), -lambda * y(0) + beta * lambda * y(4) - a * y(2), y(3), -lambda * y(2) - b * y(0),
            -eta * y(4) + y(0);
        return d;
    };

    State y;
    y << data.alpha1, data.rho1, data.alpha2, data.rho2, 0.0;
    std::vector<double> f1(grid.size());
    std::vector<double> f2(grid.size());
    f1[0] = y(0);
    f2[0] = y(2);
    const std::size_t steps = std::max<std::size_t>(sub, 1);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        for (std::size_t s = 0; s < steps; ++s) {
            const State k1 = deriv(y);
            const State k2 = deriv(y + 0.5 * h * k1);
            const State k3 = deriv(y + 0.5 * h * k2);
            const State k4 = deriv(y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        f1[k] = y(0);
        f2[k] = y(2);
    }
    return {TraceSignal(grid, std::move(f1)), TraceSignal(grid, std::move(f2))};
}

}  // namespace memwave
