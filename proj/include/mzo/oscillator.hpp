#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "mzo/kernels.hpp"
#include "mzo/model.hpp"
#include "mzo/quadrature.hpp"

namespace mzo {

// Large-time first and second moments of the mirror position and momentum.
// Equipartition q_var = p_var holds by construction of the bath coupling.
struct EquilibriumMoments {
    double q_mean = 0.0;  // q_inf = v eta |lambda|^2 / Omega_m
    double p_mean = 0.0;  // always zero
    double q_var = 0.0;
    double p_var = 0.0;
    double qp_anticomm = 0.0;  // <{q, p}> at equilibrium
};

inline EquilibriumMoments equilibrium_moments(const ModelConfig& cfg, double n_eff) {
    const auto dm = derive_mechanical(cfg.mechanical);
    const auto& m = cfg.mechanical;
    const double eta_lam = cfg.optical.eta * cfg.optical.lambda_sq;
    EquilibriumMoments out;
    out.q_mean = m.v * eta_lam / m.omega_bare;
    out.p_mean = 0.0;
    const double fluct = m.omega_bare / dm.omega_damped * (n_eff + 0.5) +
                         eta_lam * m.v * m.v / (2.0 * m.gamma);
    out.q_var = fluct;
    out.p_var = fluct;
    out.qp_anticomm = -m.gamma / dm.omega_damped * (n_eff + 0.5);
    return out;
}

// Coefficients of the bath coupling operator R = alpha_R q + beta_R p. The
// damping constraint alpha_R * Im(beta_R) = gamma_m / 2 must hold; the
// residual freedom is what equipartition pins down.
struct CouplingCoefficients {
    double alpha_r = 0.0;
    cplx beta_r{0.0, 0.0};

    void validate(const MechanicalParams& m) const {
        const double prod = alpha_r * beta_r.imag();
        if (!(prod > 0.0) || std::abs(prod - 0.5 * m.gamma) > 1e-10 * m.gamma ||
            !(prod < m.omega_bare))
            throw ConfigError("CouplingCoefficients: need alpha_R*Im(beta_R) = gamma_m/2 in (0, Omega_m)");
    }
};

// The equipartition-selecting choice: R = sqrt(gamma_m) a_m.
inline CouplingCoefficients rfinal_coefficients(const MechanicalParams& m) {
    const auto dm = derive_mechanical(m);
    const double a = std::sqrt(m.gamma * m.omega_bare / (2.0 * dm.omega_damped));
    CouplingCoefficients c;
    c.alpha_r = a;
    c.beta_r = cplx{0.0, 1.0} * dm.tau * a;
    return c;
}

// Rotates beta_R by the given angle, rescaling so the damping constraint
// still holds. Generic rotations break equipartition for asymmetric baths.
inline CouplingCoefficients perturb_coefficients(const CouplingCoefficients& c, double angle) {
    const double target = c.alpha_r * c.beta_r.imag();
    cplx dir = std::exp(cplx{0.0, angle}) * c.beta_r / std::abs(c.beta_r);
    if (dir.imag() <= 0.0) throw ConfigError("perturb_coefficients: rotation flips damping sign");
    CouplingCoefficients out;
    out.alpha_r = c.alpha_r;
    out.beta_r = dir * (target / (c.alpha_r * dir.imag()));
    return out;
}

// General-coupling equilibrium second moments, for arbitrary coefficients
// satisfying the damping constraint and an arbitrary bath spectrum. With the
// equipartition choice the two results coincide for every N(nu).
inline std::pair<double, double> general_second_moments(const CouplingCoefficients& coef,
                                                        const NoiseSpectrum& noise,
                                                        const ModelConfig& cfg,
                                                        const QuadConfig& quad = {}) {
    coef.validate(cfg.mechanical);
    const auto& m = cfg.mechanical;
    const auto dm = derive_mechanical(m);
    const double gm = m.gamma, om = dm.omega_damped, big_om = m.omega_bare;
    const cplx tau_c = std::conj(dm.tau);
    const cplx x = dm.tau * coef.alpha_r + cplx{0.0, 1.0} * coef.beta_r;
    const cplx y = dm.tau * coef.alpha_r + cplx{0.0, 1.0} * std::conj(coef.beta_r);
    const double x2 = std::norm(x), y2 = std::norm(y);
    const cplx xy = x * y;

    const double drive = cfg.optical.eta * cfg.optical.lambda_sq * m.v * m.v / (2.0 * gm);
    const double geom = big_om * big_om / (4.0 * om * om);

    const double q_static =
        drive + geom * ((x2 + y2) / gm +
                        (cplx{0.0, 1.0} * tau_c * tau_c * tau_c * xy / (2.0 * big_om)).real());
    const double p_static =
        drive + geom * ((x2 + y2) / gm -
                        (cplx{0.0, 1.0} * tau_c * xy / (2.0 * big_om)).real());

    double q_noise = 0.0, p_noise = 0.0;
    if (!noise.is_vacuum()) {
        auto common = [&](double nu) {
            const double dp = 0.25 * gm * gm + (om + nu) * (om + nu);
            const double dn = 0.25 * gm * gm + (om - nu) * (om - nu);
            return x2 / dp + y2 / dn;
        };
        auto cross = [&](double nu) -> cplx {
            const cplx den =
                (cplx{0.5 * gm, om + nu}) * (cplx{0.5 * gm, om - nu});
            return xy / den;
        };
        const double pref = geom / detail::pi;
        auto fq = [&](double nu) {
            return pref * noise.value(nu) *
                   (common(nu) - 2.0 * (tau_c * tau_c * cross(nu)).real());
        };
        auto fp = [&](double nu) {
            return pref * noise.value(nu) * (common(nu) + 2.0 * cross(nu).real());
        };
        q_noise = integrate_line<double>(fq, om, 0.5 * gm, quad, noise.breakpoints()).value;
        p_noise = integrate_line<double>(fp, om, 0.5 * gm, quad, noise.breakpoints()).value;
    }
    return {q_static + q_noise, p_static + p_noise};
}

// Classical mean trajectory: dq/dt = Om p, dp/dt = -Om q - gm p + v eta |l|^2.
// Fixed-step RK4 sampled on t_grid; the drift fixed point is (q_inf, 0).
inline std::vector<std::pair<double, double>> mean_trajectory(const ModelConfig& cfg, double q0,
                                                              double p0,
                                                              const std::vector<double>& t_grid,
                                                              double dt) {
    const auto& m = cfg.mechanical;
    m.validate();
    if (!(dt > 0.0) || dt > 0.1 / m.omega_bare)
        throw StepSizeError("mean_trajectory: require 0 < dt <= 0.1/Omega_m");
    const double drive = m.v * cfg.optical.eta * cfg.optical.lambda_sq;
    auto deriv = [&](double q, double p, double& dq, double& dp) {
        dq = m.omega_bare * p;
        dp = -m.omega_bare * q - m.gamma * p + drive;
    };

    std::vector<std::pair<double, double>> out;
    out.reserve(t_grid.size());
    double t = 0.0, q = q0, p = p0;
    for (double target : t_grid) {
        if (target < t) throw ConfigError("mean_trajectory: t_grid must be increasing from 0");
        while (t < target) {
            const double step = std::min(dt, target - t);
            double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
            deriv(q, p, k1q, k1p);
            deriv(q + 0.5 * step * k1q, p + 0.5 * step * k1p, k2q, k2p);
            deriv(q + 0.5 * step * k2q, p + 0.5 * step * k2p, k3q, k3p);
            deriv(q + step * k3q, p + step * k3p, k4q, k4p);
            q += step / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            p += step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            t += step;
        }
        out.emplace_back(q, p);
    }
    return out;
}

}  // namespace mzo
