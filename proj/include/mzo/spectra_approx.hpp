#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mzo/model.hpp"
#include "mzo/spectra_exact.hpp"

namespace mzo {

// Diagnostics for the weak-interaction / strong-laser regime. Ratios are the
// left/right sides of the regime inequalities; a "much less" flag fires below
// ll_threshold and a "much greater" flag above gg_threshold.
struct RegimeReport {
    double weak_cond1 = 0.0;    // (N_eff + 1/2) v^2 Om / (2 om), want << 1
    double weak_cond2 = 0.0;    // (eta |l|^2 v^4 Om / 4 gm om)^2 / (v^2 Om / 2 om), want << 1
    double strong_cond1 = 0.0;  // (eta |l|^2 v^2/Om) / ((gm/om)(N(om)+1/2)), want >> 1
    double strong_cond2 = 0.0;  // E(0)^2, want >> 1
    bool weak1_ok = false;
    bool weak2_ok = false;
    bool strong1_ok = false;
    bool strong2_ok = false;
    double ll_threshold = 0.05;
    double gg_threshold = 20.0;
};

// First-order (weak interaction, strong laser) closed forms for the reduced
// spectra and the quadrature-variance bounds. Valid when RegimeReport's weak
// conditions hold; regime validity is reported, never enforced.
class ApproxSpectra {
  public:
    explicit ApproxSpectra(ModelConfig cfg) : cfg_(std::move(cfg)), dm_(derive_mechanical(cfg_.mechanical)) {
        const auto& m = cfg_.mechanical;
        const auto& o = cfg_.optical;
        om_ = dm_.omega_damped;
        big_om_ = m.omega_bare;
        gm_ = m.gamma;
        v2_ = m.v * m.v;
        eta_lam_ = o.eta * o.lambda_sq;
        n_om_ = cfg_.noise.value(om_);
        // first-order scattering phase: theta ~ eta |l|^2 v^2 / Omega_m
        theta_w_ = eta_lam_ * v2_ / big_om_;
    }

    const ModelConfig& config() const { return cfg_; }
    double theta_weak() const { return theta_w_; }
    double alpha_of_psi(double psi) const { return psi - cfg_.optical.phi - theta_w_; }

    double e_factor(double mu) const {
        const double m2 = (mu / big_om_) * (mu / big_om_);
        return eta_lam_ * v2_ / big_om_ +
               (gm_ / (2.0 * om_)) * (2.0 * n_om_ + 1.0) * (1.0 + m2);
    }

    SpectralCurve sigma_minus(const std::vector<double>& mu, double psi) const {
        const double alpha = alpha_of_psi(psi);
        const double s2a = std::sin(2.0 * alpha), c2a = std::cos(2.0 * alpha);
        SpectralCurve out = make_curve(mu, "Sigma_minus_approx");
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double m2 = (mu[i] / big_om_) * (mu[i] / big_om_);
            out.values[i] = peak_factor(mu[i]) *
                            ((1.0 - m2) * s2a + e_factor(mu[i]) * (1.0 - c2a));
        }
        return out;
    }

    SpectralCurve sigma_zero(const std::vector<double>& mu) const {
        const double alpha = alpha_of_psi(cfg_.optical.psi);
        const double pref = 4.0 * std::pow(cfg_.optical.eta, 1.5) * cfg_.optical.lambda_sq *
                            v2_ * big_om_ * std::sin(alpha);
        SpectralCurve out = make_curve(mu, "Sigma_0_approx");
        for (std::size_t i = 0; i < mu.size(); ++i) {
            out.values[i] = pref * (big_om_ * big_om_ - mu[i] * mu[i]) / denom(mu[i]);
        }
        return out;
    }

    // Extremal phase of Sigma_-(0) and the minimum it attains.
    struct Psi0Result {
        double psi0 = 0.0;
        double sigma_min0 = 0.0;
    };

    Psi0Result psi0() const {
        const double e0 = e_factor(0.0);
        const double two_alpha0 = std::atan2(-1.0, e0);
        Psi0Result r;
        r.psi0 = detail::wrap_2pi(0.5 * two_alpha0 + cfg_.optical.phi + theta_w_);
        r.sigma_min0 = 2.0 * eta_lam_ * v2_ / big_om_ * (e0 - std::sqrt(e0 * e0 + 1.0));
        return r;
    }

    // Quadrature-variance envelope: for each mu the variance of the two-mode
    // quadrature sweeps [lower(mu), upper(mu)] as psi is tuned.
    std::pair<SpectralCurve, SpectralCurve> delta2_bounds(const std::vector<double>& mu) const {
        SpectralCurve lo = make_curve(mu, "Delta2_minus");
        SpectralCurve hi = make_curve(mu, "Delta2_plus");
        const double om_ratio2 = (om_ / big_om_) * (om_ / big_om_);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double m2 = (mu[i] / big_om_) * (mu[i] / big_om_);
            const double a = 1.0 - m2;
            const double e = e_factor(mu[i]);
            const double den = a * a + 4.0 * (1.0 - om_ratio2) * m2;
            const double pref = 2.0 * eta_lam_ * v2_ / (big_om_ * den);
            const double root = std::sqrt(a * a + e * e);
            lo.values[i] = 1.0 + pref * (e - root);
            hi.values[i] = 1.0 + pref * (e + root);
        }
        return {lo, hi};
    }

    RegimeReport regime_check(double ll_threshold = 0.05, double gg_threshold = 20.0) const {
        RegimeReport r;
        r.ll_threshold = ll_threshold;
        r.gg_threshold = gg_threshold;
        r.weak_cond1 = (n_om_ + 0.5) * v2_ * big_om_ / (2.0 * om_);
        const double lhs = eta_lam_ * v2_ * v2_ * big_om_ / (4.0 * gm_ * om_);
        const double small = v2_ * big_om_ / (2.0 * om_);
        r.weak_cond2 = small > 0.0 ? lhs * lhs / small : 0.0;
        const double rhs = (gm_ / om_) * (n_om_ + 0.5);
        r.strong_cond1 = eta_lam_ * v2_ / big_om_ / rhs;
        r.strong_cond2 = e_factor(0.0) * e_factor(0.0);
        r.weak1_ok = r.weak_cond1 < ll_threshold;
        r.weak2_ok = r.weak_cond2 < ll_threshold;
        r.strong1_ok = r.strong_cond1 > gg_threshold;
        r.strong2_ok = r.strong_cond2 > gg_threshold;
        return r;
    }

  private:
    static SpectralCurve make_curve(const std::vector<double>& mu, std::string label) {
        SpectralCurve c;
        c.mu = mu;
        c.values.assign(mu.size(), 0.0);
        c.errs.assign(mu.size(), 0.0);
        c.label = std::move(label);
        return c;
    }

    double denom(double mu) const {
        const double dp = 0.25 * gm_ * gm_ + (mu + om_) * (mu + om_);
        const double dm = 0.25 * gm_ * gm_ + (mu - om_) * (mu - om_);
        return dp * dm;
    }

    double peak_factor(double mu) const {
        return 2.0 * eta_lam_ * v2_ * big_om_ * big_om_ * big_om_ / denom(mu);
    }

    ModelConfig cfg_;
    DerivedMechanical dm_;
    double om_ = 0.0, big_om_ = 0.0, gm_ = 0.0;
    double v2_ = 0.0, eta_lam_ = 0.0, n_om_ = 0.0, theta_w_ = 0.0;
};

}  // namespace mzo
