#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>
#include <vector>

#include "mzo/detail/parallel.hpp"
#include "mzo/kernels.hpp"
#include "mzo/model.hpp"
#include "mzo/quadrature.hpp"

namespace mzo {

// Dynamics-dependent scalars entering the closed-form results:
//   k_exp   K = (Om v^2 / 2 om)(N_eff + 1/2), thermal Weyl decay exponent
//   m_exp   M = eta |l|^2 Int_0^inf [1 - cos 2h(s)] ds
//   theta   eta |l|^2 Int_0^inf sin 2h(s) ds, the scattering phase
//   z       squeezing discriminant of the difference-current spectrum
struct DynamicConstants {
    double k_exp = 0.0;
    double m_exp = 0.0;
    double theta = 0.0;
    double alpha_phase = 0.0;  // psi - phi - theta at the configured psi
    cplx z{0.0, 0.0};
    double n_eff = 0.0;
};

struct SpectralCurve {
    std::vector<double> mu;
    std::vector<double> values;
    std::vector<double> errs;
    std::string label;
};

// A photocurrent intensity spectrum: coefficient of 2 pi c^2 delta(mu) plus
// the smooth Lorentzian-filtered part, kept separate by construction.
struct IntensitySpectrum {
    double delta_weight = 0.0;
    SpectralCurve smooth;
};

struct MeanRates {
    double n1 = 0.0;
    double n2 = 0.0;
};

struct ZExtremes {
    cplx z{0.0, 0.0};
    double psi0 = 0.0;       // phase minimizing Sigma_-(0)
    double sigma_min = 0.0;  // Sigma_-^0(0) - |Z|
    double sigma_max = 0.0;  // Sigma_-^0(0) + |Z|
    bool degenerate = false; // |Z| below resolution; psi0 arbitrary
};

enum class IntensityKind { port1, port2, sum, diff };

namespace detail {

// Uniformly sampled function with local cubic interpolation; ghost points at
// the ends come from cubic extrapolation.
template <class T>
struct SampledFn {
    double ds = 0.0;
    std::vector<T> y;

    bool empty() const { return y.empty(); }

    T at(std::ptrdiff_t i) const {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
        if (i < 0) return 4.0 * y[0] - 6.0 * y[1] + 4.0 * y[2] - y[3];
        if (i >= n) return 4.0 * y[n - 1] - 6.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4];
        return y[i];
    }

    T eval(double s) const {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
        double x = s / ds;
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(std::floor(x));
        i = std::clamp<std::ptrdiff_t>(i, 0, n - 2);
        const double t = x - static_cast<double>(i);
        const T f0 = at(i - 1), f1 = at(i), f2 = at(i + 1), f3 = at(i + 2);
        const T a = 2.0 * f1;
        const T b = f2 - f0;
        const T c = 2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3;
        const T d = -f0 + 3.0 * f1 - 3.0 * f2 + f3;
        return 0.5 * (a + t * (b + t * (c + t * d)));
    }
};

}  // namespace detail

// Exact detection statistics of the oscillating-mirror interferometer.
// Construction computes the cheap scalar constants (N_eff, K, M, theta); the
// first use of a spectrum triggers a one-time dense tabulation of the inner
// correlators
//   C_pm(s) = Int_0^inf du (e^{pm 2 i h(u)} - 1)(e^{2 i h(s+u)} - 1)
// which every mu-dependent outer integral then interpolates. The object is
// logically immutable; per-mu evaluation is pure and thread-safe.
class ExactSpectra {
  public:
    explicit ExactSpectra(ModelConfig cfg, QuadConfig quad = {}, double table_refine = 2.0)
        : cfg_(std::move(cfg)),
          quad_(quad),
          table_refine_(table_refine),
          kernels_(cfg_.mechanical, cfg_.noise, quad) {
        cfg_.validate();
        const double gm = cfg_.mechanical.gamma;
        const double om = kernels_.derived().omega_damped;
        const double eta_lam = cfg_.optical.eta * cfg_.optical.lambda_sq;

        dc_.n_eff = kernels_.n_eff();
        dc_.k_exp = kernels_.prefactor() * (dc_.n_eff + 0.5);

        // M and theta; 1 - cos 2h = 2 sin^2 h avoids cancellation.
        auto m_int = integrate_semi_infinite<double>(
            [&](double s) {
                const double sh = std::sin(kernels_.h(s));
                return 2.0 * sh * sh;
            },
            gm, 2.0 * om, quad_);
        dc_.m_exp = eta_lam * m_int.value;
        auto th_int = integrate_semi_infinite<double>(
            [&](double s) { return std::sin(2.0 * kernels_.h(s)); }, 0.5 * gm, om, quad_);
        dc_.theta = eta_lam * th_int.value;
        dc_.alpha_phase = cfg_.optical.psi - cfg_.optical.phi - dc_.theta;
    }

    ExactSpectra(const ExactSpectra&) = delete;
    ExactSpectra& operator=(const ExactSpectra&) = delete;

    const ModelConfig& config() const { return cfg_; }
    const KernelSet& kernels() const { return kernels_; }
    double alpha_of_psi(double psi) const { return psi - cfg_.optical.phi - dc_.theta; }

    // Scalar constants without the squeezing discriminant; available at
    // construction cost. constants() fills z as well.
    const DynamicConstants& constants_basic() const { return dc_; }

    const DynamicConstants& constants() const {
        ensure_table();
        return dc_;
    }

    MeanRates mean_rates() const { return mean_rates(cfg_.optical.psi); }

    MeanRates mean_rates(double psi) const {
        const double lam = cfg_.optical.lambda_sq;
        const double x = chi(cfg_.optical) * std::exp(-(dc_.k_exp + dc_.m_exp)) *
                         std::cos(alpha_of_psi(psi));
        MeanRates r;
        r.n1 = 0.5 * lam * (1.0 - x);
        // n1 + n2 = |lambda|^2 is an identity of the model; the double
        // subtraction pins it in floating point (one side of the pair is
        // always a Sterbenz-exact difference).
        r.n2 = lam - r.n1;
        r.n1 = lam - r.n2;
        return r;
    }

    // Interpolated inner correlator C_pm(s).
    cplx inner_correlator(int sign, double s) const {
        ensure_table();
        return c_interp(sign, s);
    }

    // Exponents of the asymptotic two-time scattering moments:
    //   <e^{-ivq(t-s)} e^{ivq(t)}> - <.><.>      = e^{-2(K+M)} (e^{Wm(s)} - 1)
    //   <e^{+ivq(t-s)} e^{ivq(t)}>               = e^{-2(K+M)+2i theta} e^{Wp(s) - 2i h(s)}
    // with Wm = eta|l|^2 C_-(s) + g + ih and Wp = eta|l|^2 C_+(s) - g + ih.
    cplx corr_exponent_minus(double s) const {
        ensure_table();
        return w_minus(s);
    }

    cplx corr_exponent_plus(double s) const {
        ensure_table();
        return w_plus(s);
    }

    // Fresh quadrature of C_pm(s); used as the tabulation oracle.
    cplx inner_correlator_direct(int sign, double s) const {
        const double gm = cfg_.mechanical.gamma;
        const double om = kernels_.derived().omega_damped;
        auto f = [&](double u) -> cplx {
            return detail::expi_m1(2.0 * sign * kernels_.h(u)) *
                   detail::expi_m1(2.0 * kernels_.h(s + u));
        };
        return integrate_semi_infinite<cplx>(f, gm, 2.0 * om, quad_).value;
    }

    SpectralCurve sigma_minus0(const std::vector<double>& mu) const {
        ensure_table();
        return outer_curve(mu, "Sigma_minus^0", [this](double s) {
            return detail::cexpm1(w_minus(s)).real();
        });
    }

    SpectralCurve sigma_minus_psi(const std::vector<double>& mu, double psi) const {
        ensure_table();
        const cplx rot = std::exp(cplx{0.0, -2.0 * alpha_of_psi(psi)});
        return outer_curve(mu, "Sigma_minus^psi", [this, rot](double s) {
            return (rot * detail::cexpm1(w_plus(s))).real();
        });
    }

    SpectralCurve sigma_minus(const std::vector<double>& mu, double psi) const {
        SpectralCurve a = sigma_minus0(mu);
        SpectralCurve b = sigma_minus_psi(mu, psi);
        SpectralCurve out = a;
        out.label = "Sigma_minus";
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            out.values[i] += b.values[i];
            out.errs[i] += b.errs[i];
        }
        return out;
    }

    SpectralCurve sigma_zero(const std::vector<double>& mu) const {
        return sigma_zero(mu, cfg_.optical.psi);
    }

    SpectralCurve sigma_zero(const std::vector<double>& mu, double psi) const {
        const double gm = cfg_.mechanical.gamma;
        const double om = kernels_.derived().omega_damped;
        const double pref = 4.0 * std::exp(-(dc_.k_exp + dc_.m_exp)) *
                            std::pow(cfg_.optical.eta, 1.5) * cfg_.optical.lambda_sq;
        const cplx rot = std::exp(cplx{0.0, -alpha_of_psi(psi)});
        SpectralCurve out;
        out.mu = mu;
        out.values.resize(mu.size());
        out.errs.resize(mu.size());
        out.label = "Sigma_0";
        detail::parallel_for(mu.size(), [&](std::size_t i) {
            auto r = integrate_semi_infinite<double>(
                [&](double t) {
                    return std::cos(mu[i] * t) *
                           (rot * detail::expi_m1(2.0 * kernels_.h(t))).real();
                },
                0.5 * gm, std::max(std::abs(mu[i]), om), quad_);
            out.values[i] = pref * r.value;
            out.errs[i] = pref * r.err_estimate;
        });
        return out;
    }

    // Sigma_+ vanishes identically: the scattering interaction leaves the
    // photon number process unchanged.
    static constexpr double sigma_plus = 0.0;

    ZExtremes z_and_extremes() const {
        ensure_table();
        ZExtremes out;
        out.z = dc_.z;
        const double s0 = sigma_minus0_at0_;
        if (std::abs(dc_.z) < 1e-14) {
            out.degenerate = true;
            out.psi0 = cfg_.optical.psi;
            out.sigma_min = s0;
            out.sigma_max = s0;
            return out;
        }
        const double alpha0 = 0.5 * std::arg(dc_.z);
        out.psi0 = detail::wrap_2pi(alpha0 + cfg_.optical.phi + dc_.theta);
        out.sigma_min = s0 - std::abs(dc_.z);
        out.sigma_max = s0 + std::abs(dc_.z);
        return out;
    }

    double z_err_estimate() const {
        ensure_table();
        return z_err_;
    }

    IntensitySpectrum intensity(IntensityKind kind, const std::vector<double>& mu,
                                double psi) const {
        const auto& det = cfg_.detector;
        const double lam = cfg_.optical.lambda_sq;
        const double eta = cfg_.optical.eta;
        const double c2 = det.c_gain * det.c_gain;
        const double kap2 = det.kappa * det.kappa;
        const double alpha = alpha_of_psi(psi);
        const double ekm = std::exp(-(dc_.k_exp + dc_.m_exp));
        auto lorentz = [&](double m) { return c2 * kap2 * lam / (m * m + kap2); };

        IntensitySpectrum out;
        out.smooth.mu = mu;
        out.smooth.values.resize(mu.size());
        out.smooth.errs.assign(mu.size(), 0.0);

        if (kind == IntensityKind::sum) {
            out.delta_weight = lam * lam;
            out.smooth.label = "S_I_sum";
            for (std::size_t i = 0; i < mu.size(); ++i) out.smooth.values[i] = lorentz(mu[i]);
            return out;
        }
        SpectralCurve sm = sigma_minus(mu, psi);
        if (kind == IntensityKind::diff) {
            out.delta_weight = lam * lam * chi(cfg_.optical) * chi(cfg_.optical) * ekm * ekm *
                               std::cos(alpha) * std::cos(alpha);
            out.smooth.label = "S_I_diff";
            for (std::size_t i = 0; i < mu.size(); ++i) {
                out.smooth.values[i] = lorentz(mu[i]) * (1.0 + (1.0 - eta) * sm.values[i]);
                out.smooth.errs[i] = lorentz(mu[i]) * (1.0 - eta) * sm.errs[i];
            }
            return out;
        }
        const int j = (kind == IntensityKind::port1) ? 1 : 2;
        const double sgn = (j == 1) ? -1.0 : 1.0;
        MeanRates r = mean_rates(psi);
        const double nj = (j == 1) ? r.n1 : r.n2;
        SpectralCurve s0c = sigma_zero(mu, psi);
        out.delta_weight = nj * nj;
        out.smooth.label = (j == 1) ? "S_I_1" : "S_I_2";
        const double root1me = std::sqrt(1.0 - eta);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double bracket = 2.0 +
                                   sgn * root1me *
                                       (4.0 * std::sqrt(eta) * ekm * std::cos(alpha) +
                                        s0c.values[i]) +
                                   (1.0 - eta) * sm.values[i];
            out.smooth.values[i] = 0.25 * lorentz(mu[i]) * bracket;
            out.smooth.errs[i] =
                0.25 * lorentz(mu[i]) * (root1me * s0c.errs[i] + (1.0 - eta) * sm.errs[i]);
        }
        return out;
    }

    double table_spacing() const {
        ensure_table();
        return cplus_.ds;
    }
    double table_smax() const {
        ensure_table();
        return table_smax_;
    }
    double table_probe_err() const {
        ensure_table();
        return c_probe_err_;
    }

  private:
    double outer_prefactor() const {
        return 4.0 * cfg_.optical.lambda_sq * cfg_.optical.eta *
               std::exp(-2.0 * (dc_.k_exp + dc_.m_exp));
    }

    cplx c_interp(int sign, double s) const {
        if (s >= table_smax_) return {0.0, 0.0};
        return (sign >= 0 ? cplus_ : cminus_).eval(s);
    }

    // exponent of the "minus" route: eta|l|^2 C_-(s) + g(s) + i h(s)
    cplx w_minus(double s) const {
        const double eta_lam = cfg_.optical.eta * cfg_.optical.lambda_sq;
        return eta_lam * c_interp(-1, s) + cplx{g_of(s), kernels_.h(s)};
    }

    // exponent of the "psi" route: eta|l|^2 C_+(s) - g(s) + i h(s)
    cplx w_plus(double s) const {
        const double eta_lam = cfg_.optical.eta * cfg_.optical.lambda_sq;
        return eta_lam * c_interp(+1, s) + cplx{-g_of(s), kernels_.h(s)};
    }

    double g_of(double s) const {
        if (!g_table_.empty()) return s >= table_smax_ ? 0.0 : g_table_.eval(s);
        return kernels_.g(s);
    }

    double interp_err_budget() const {
        const double eta_lam = cfg_.optical.eta * cfg_.optical.lambda_sq;
        const double s_eff = 4.0 / cfg_.mechanical.gamma;
        return outer_prefactor() * exp_bound_ * (eta_lam * c_probe_err_ + g_probe_err_) * s_eff;
    }

    template <class Fn>
    SpectralCurve outer_curve(const std::vector<double>& mu, std::string label, Fn&& core) const {
        const double gm = cfg_.mechanical.gamma;
        const double om = kernels_.derived().omega_damped;
        const double pref = outer_prefactor();
        const double interp_err = interp_err_budget();
        SpectralCurve out;
        out.mu = mu;
        out.values.resize(mu.size());
        out.errs.resize(mu.size());
        out.label = std::move(label);
        detail::parallel_for(mu.size(), [&](std::size_t i) {
            auto r = integrate_semi_infinite<double>(
                [&](double s) { return std::cos(mu[i] * s) * core(s); }, 0.5 * gm,
                std::max(std::abs(mu[i]), om), quad_);
            out.values[i] = pref * r.value;
            out.errs[i] = pref * r.err_estimate + interp_err;
        });
        return out;
    }

    void ensure_table() const {
        std::call_once(table_once_, [this] {
            build_table(table_refine_);
            const double gm = cfg_.mechanical.gamma;
            const double om = kernels_.derived().omega_damped;
            auto z_int = integrate_semi_infinite<cplx>(
                [&](double s) { return detail::cexpm1(w_plus(s)); }, 0.5 * gm, om, quad_);
            dc_.z = -outer_prefactor() * z_int.value;
            z_err_ = outer_prefactor() * z_int.err_estimate + interp_err_budget();
            auto s0 = outer_curve({0.0}, "Sigma_minus^0(0)", [this](double s) {
                return detail::cexpm1(w_minus(s)).real();
            });
            sigma_minus0_at0_ = s0.values[0];
        });
    }

    void build_table(double refine) const {
        const double gm = cfg_.mechanical.gamma;
        const double om = kernels_.derived().omega_damped;
        table_smax_ = 2.0 * std::log(1.0 / quad_.tail_eps) / gm;
        const double ds = std::min(1.0 / (8.0 * om), 1.0 / (4.0 * gm)) / std::max(1.0, refine);
        const std::size_t n = std::max<std::size_t>(
            static_cast<std::size_t>(std::ceil(table_smax_ / ds)) + 1, 8);
        cplus_.ds = cminus_.ds = ds;
        cplus_.y.resize(n);
        cminus_.y.resize(n);
        detail::parallel_for(n, [&](std::size_t i) {
            const double s = ds * static_cast<double>(i);
            cplus_.y[i] = inner_correlator_direct(+1, s);
            cminus_.y[i] = inner_correlator_direct(-1, s);
        });

        const bool need_g_table = !cfg_.noise.is_vacuum() && !kernels_.flat_mode();
        if (need_g_table) {
            g_table_.ds = ds;
            g_table_.y.resize(n);
            detail::parallel_for(n, [&](std::size_t i) {
                g_table_.y[i] = kernels_.g(ds * static_cast<double>(i));
            });
        }

        // Probe the interpolation against fresh quadrature; the deviations
        // feed the per-point error budget of the outer integrals.
        c_probe_err_ = 0.0;
        g_probe_err_ = 0.0;
        const int n_probe = 8;
        for (int k = 0; k < n_probe; ++k) {
            const double s = table_smax_ * (k + 0.618034) / (n_probe + 1.0);
            c_probe_err_ = std::max(
                c_probe_err_, std::abs(c_interp(+1, s) - inner_correlator_direct(+1, s)));
            c_probe_err_ = std::max(
                c_probe_err_, std::abs(c_interp(-1, s) - inner_correlator_direct(-1, s)));
            if (need_g_table)
                g_probe_err_ = std::max(g_probe_err_, std::abs(g_table_.eval(s) - kernels_.g(s)));
        }

        exp_bound_ = 0.0;
        const double eta_lam = cfg_.optical.eta * cfg_.optical.lambda_sq;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = ds * static_cast<double>(i);
            const double g = need_g_table ? g_table_.y[i] : kernels_.g(s);
            exp_bound_ = std::max(exp_bound_, (eta_lam * cminus_.y[i] + cplx{g, 0.0}).real());
            exp_bound_ = std::max(exp_bound_, (eta_lam * cplus_.y[i] - cplx{g, 0.0}).real());
        }
        exp_bound_ = std::exp(std::min(exp_bound_, 50.0));
    }

    ModelConfig cfg_;
    QuadConfig quad_;
    double table_refine_;
    KernelSet kernels_;
    mutable DynamicConstants dc_;
    mutable std::once_flag table_once_;
    mutable detail::SampledFn<cplx> cplus_, cminus_;
    mutable detail::SampledFn<double> g_table_;
    mutable double table_smax_ = 0.0;
    mutable double c_probe_err_ = 0.0;
    mutable double g_probe_err_ = 0.0;
    mutable double exp_bound_ = 1.0;
    mutable double z_err_ = 0.0;
    mutable double sigma_minus0_at0_ = 0.0;
};

}  // namespace mzo
