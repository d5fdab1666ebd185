#pragma once

#include <cmath>
#include <complex>

#include "mzo/model.hpp"
#include "mzo/quadrature.hpp"

namespace mzo {

// Time-domain kernels of the scattering decomposition, with the mechanical
// constants and the bath spectrum bound at construction:
//   h(t) = (v^2 Om/2 om) e^{-gm|t|/2} sin(om t)
//   l(t) = -i v tau sqrt(Om gm/2 om) e^{-gm|t|/2} e^{i om t}
//   g(t) = (v^2 Om/2 om) [e^{-gm|t|/2} cos(om t) + Lorentzian-filtered N part]
// In flat mode g + ih uses the flat-noise-spectrum closed form instead of the
// full frequency integral.
class KernelSet {
  public:
    KernelSet(const MechanicalParams& mech, NoiseSpectrum noise, QuadConfig quad = {},
              bool flat_mode = false)
        : mech_(mech),
          dm_(derive_mechanical(mech)),
          noise_(std::move(noise)),
          quad_(quad),
          flat_(flat_mode) {
        pref_ = mech_.v * mech_.v * mech_.omega_bare / (2.0 * dm_.omega_damped);
        l_amp_ = -cplx{0.0, 1.0} * mech_.v * dm_.tau *
                 std::sqrt(mech_.omega_bare * mech_.gamma / (2.0 * dm_.omega_damped));
        n_eff_ = compute_n_eff();
        n_at_om_ = noise_.value(dm_.omega_damped);
    }

    const MechanicalParams& mechanical() const { return mech_; }
    const DerivedMechanical& derived() const { return dm_; }
    const NoiseSpectrum& noise() const { return noise_; }
    const QuadConfig& quad() const { return quad_; }
    bool flat_mode() const { return flat_; }
    double prefactor() const { return pref_; }

    double h(double t) const {
        return pref_ * std::exp(-0.5 * mech_.gamma * std::abs(t)) *
               std::sin(dm_.omega_damped * t);
    }

    cplx l(double t) const {
        return l_amp_ * std::exp(-0.5 * mech_.gamma * std::abs(t)) *
               std::exp(cplx{0.0, dm_.omega_damped * t});
    }

    double g(double t) const {
        if (flat_) return g_plus_ih_flat(t).real();
        double val = std::exp(-0.5 * mech_.gamma * std::abs(t)) *
                     std::cos(dm_.omega_damped * t);
        if (!noise_.is_vacuum()) val += noise_filter_integral(t);
        return pref_ * val;
    }

    // Flat-spectrum closed form for g(t) + i h(t), using N(omega_m).
    cplx g_plus_ih_flat(double t) const {
        const double om = dm_.omega_damped;
        const double env = std::exp(-0.5 * mech_.gamma * std::abs(t));
        const cplx e_plus = std::exp(cplx{0.0, om * t});
        return pref_ * env * ((n_at_om_ + 1.0) * e_plus + n_at_om_ * std::conj(e_plus));
    }

    // N_eff: bath occupation filtered through the oscillator Lorentzian.
    double n_eff() const { return n_eff_; }

    // F(t) = (1/2pi) Int e^{i nu t} N(nu) dnu, the bath autocovariance.
    cplx autocov_F(double t) const {
        if (noise_.is_vacuum()) return {0.0, 0.0};
        auto f = [&](double nu) -> cplx {
            return std::exp(cplx{0.0, nu * t}) * noise_.value(nu);
        };
        auto r = integrate_line<cplx>(f, dm_.omega_damped, 0.5 * mech_.gamma, quad_,
                                      noise_.breakpoints());
        return r.value / (2.0 * detail::pi);
    }

    // Im<l_s|l_t> with l_t(u) = l(t-u) 1_(0,t)(u); for s,t >> 1/gamma this
    // tends to h(t - s).
    double im_inner_ell(double s, double t) const {
        const double upper = std::min(s, t);
        if (!(upper > 0.0) || mech_.v == 0.0) return 0.0;
        auto f = [&](double u) -> cplx { return std::conj(l(s - u)) * l(t - u); };
        auto r = integrate_interval<cplx>(f, 0.0, upper, dm_.omega_damped, quad_);
        return r.value.imag();
    }

  private:
    double compute_n_eff() const {
        if (noise_.is_vacuum()) return 0.0;
        const double gm = mech_.gamma, om = dm_.omega_damped;
        auto f = [&](double nu) {
            const double d = om - nu;
            return noise_.value(nu) / (0.25 * gm * gm + d * d);
        };
        auto r = integrate_line<double>(f, om, 0.5 * gm, quad_, noise_.breakpoints());
        return gm / (2.0 * detail::pi) * r.value;
    }

    double noise_filter_integral(double t) const {
        const double gm = mech_.gamma, om = dm_.omega_damped;
        auto f = [&](double nu) {
            const double d = nu - om;
            return gm * noise_.value(nu) * std::cos(nu * t) /
                   (detail::pi * (d * d + 0.25 * gm * gm));
        };
        auto r = integrate_line<double>(f, om, 0.5 * gm, quad_, noise_.breakpoints());
        return r.value;
    }

    MechanicalParams mech_;
    DerivedMechanical dm_;
    NoiseSpectrum noise_;
    QuadConfig quad_;
    bool flat_ = false;
    double pref_ = 0.0;   // v^2 Omega_m / (2 omega_m)
    cplx l_amp_{};        // -i v tau sqrt(Omega_m gamma_m / 2 omega_m)
    double n_eff_ = 0.0;
    double n_at_om_ = 0.0;
};

}  // namespace mzo
