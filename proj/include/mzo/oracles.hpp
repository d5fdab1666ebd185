#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mzo/detail/cmatrix.hpp"
#include "mzo/detail/math.hpp"
#include "mzo/kernels.hpp"
#include "mzo/model.hpp"

namespace mzo {

namespace detail {

inline double uniform01_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline double gauss(std::mt19937_64& rng) {
    const double u1 = uniform01_open(rng);
    const double u2 = uniform01_open(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

// Frequency modes discretizing N(nu): midpoint grid over the support, one
// complex Gaussian weight per mode with E|w_k|^2 = N(nu_k) dnu / 2pi.
struct GpModeSet {
    std::vector<double> nu;
    std::vector<double> sigma;

    GpModeSet(const NoiseSpectrum& noise, std::size_t n_modes) {
        if (noise.is_vacuum() || n_modes == 0) return;
        const double lo = noise.support_lo(), hi = noise.support_hi();
        const double dnu = (hi - lo) / static_cast<double>(n_modes);
        nu.resize(n_modes);
        sigma.resize(n_modes);
        for (std::size_t k = 0; k < n_modes; ++k) {
            nu[k] = lo + (static_cast<double>(k) + 0.5) * dnu;
            sigma[k] = std::sqrt(noise.value(nu[k]) * dnu / (2.0 * pi));
        }
    }

    void draw(std::mt19937_64& rng, std::vector<cplx>& w) const {
        w.resize(nu.size());
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (std::size_t k = 0; k < nu.size(); ++k) {
            const double re = gauss(rng), im = gauss(rng);
            w[k] = sigma[k] * inv_sqrt2 * cplx{re, im};
        }
    }
};

}  // namespace detail

// One realization of the stationary Gaussian bath process
// u(t) = sum_k w_k exp(-i nu_k t), E[u]=0, E[u u]=0,
// E[conj(u(t)) u(s)] = F(t-s).
struct GPTrajectory {
    std::vector<double> grid;
    std::vector<cplx> u;
    std::uint64_t seed = 0;
    std::string spectrum;
};

inline GPTrajectory sample_gp(const NoiseSpectrum& noise, const std::vector<double>& t_grid,
                              std::uint64_t seed, std::size_t n_modes = 2048) {
    GPTrajectory out;
    out.grid = t_grid;
    out.u.assign(t_grid.size(), cplx{});
    out.seed = seed;
    out.spectrum = noise.describe();
    if (noise.is_vacuum()) return out;

    detail::GpModeSet modes(noise, n_modes);
    std::mt19937_64 rng(seed);
    std::vector<cplx> w;
    modes.draw(rng, w);
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        cplx acc{};
        for (std::size_t k = 0; k < modes.nu.size(); ++k)
            acc += w[k] * std::exp(cplx{0.0, -modes.nu[k] * t_grid[j]});
        out.u[j] = acc;
    }
    return out;
}

struct WeylMcResult {
    cplx estimate{0.0, 0.0};
    double stderr_est = 0.0;  // standard error of the complex mean
    double norm_l2 = 0.0;     // |l_t|^2 on the quadrature grid
    int n_samples = 0;
};

// Monte Carlo estimate of the thermal Weyl moment
//   <W_3(l_t)> = E[ exp{ <u|l_t> - <l_t|u> - |l_t|^2/2 } ],
// averaging over realizations of the Gaussian bath process. Inner products
// are trapezoid sums on a uniform grid over [0, t]; the per-sample sum is
// factored through the mode basis, which is algebraically the same number as
// synthesizing u on the grid first. Asymptotically the moment tends to
// exp(-K).
inline WeylMcResult thermal_weyl_mc(const KernelSet& kernels, double t, int n_samples,
                                    std::uint64_t seed, std::size_t n_modes = 1024,
                                    double points_per_wave = 12.0) {
    const auto& noise = kernels.noise();
    const double om = kernels.derived().omega_damped;
    double nu_abs = om;
    if (!noise.is_vacuum())
        nu_abs = std::max({nu_abs, std::abs(noise.support_lo()), std::abs(noise.support_hi())});
    const double dt = 2.0 * detail::pi / (points_per_wave * nu_abs);
    const std::size_t n_grid = static_cast<std::size_t>(std::ceil(t / dt)) + 1;
    std::vector<double> grid = detail::linspace(0.0, t, n_grid);

    // l_t(u) = l(t - u) on (0, t), with trapezoid weights folded in.
    std::vector<cplx> ell(n_grid);
    const double h = grid[1] - grid[0];
    double norm2 = 0.0;
    for (std::size_t j = 0; j < n_grid; ++j) {
        ell[j] = kernels.l(t - grid[j]);
        const double wj = (j == 0 || j + 1 == n_grid) ? 0.5 * h : h;
        norm2 += wj * std::norm(ell[j]);
        ell[j] *= wj;
    }

    WeylMcResult out;
    out.norm_l2 = norm2;
    out.n_samples = n_samples;
    const double damp = std::exp(-0.5 * norm2);

    if (noise.is_vacuum()) {
        out.estimate = cplx{damp, 0.0};
        out.stderr_est = 0.0;
        return out;
    }

    detail::GpModeSet modes(noise, n_modes);
    // L_k = trapezoid sum of exp(i nu_k s) l_t(s)
    std::vector<cplx> lk(modes.nu.size());
    for (std::size_t k = 0; k < modes.nu.size(); ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < n_grid; ++j)
            acc += std::exp(cplx{0.0, modes.nu[k] * grid[j]}) * ell[j];
        lk[k] = acc;
    }

    cplx sum{};
    double sum_re2 = 0.0, sum_im2 = 0.0;
    std::vector<cplx> w;
    for (int i = 0; i < n_samples; ++i) {
        std::mt19937_64 rng(detail::stream_seed(seed, static_cast<std::uint64_t>(i)));
        modes.draw(rng, w);
        cplx inner{};
        for (std::size_t k = 0; k < w.size(); ++k) inner += std::conj(w[k]) * lk[k];
        // <u|l> - <l|u> = 2i Im<u|l>
        const cplx est = damp * std::exp(cplx{0.0, 2.0 * inner.imag()});
        sum += est;
        sum_re2 += est.real() * est.real();
        sum_im2 += est.imag() * est.imag();
    }
    const double n = static_cast<double>(n_samples);
    out.estimate = sum / n;
    const double var_re = (sum_re2 - n * out.estimate.real() * out.estimate.real()) / (n - 1.0);
    const double var_im = (sum_im2 - n * out.estimate.imag() * out.estimate.imag()) / (n - 1.0);
    out.stderr_est = std::sqrt(std::max(0.0, var_re + var_im) / n);
    return out;
}

// ---------------------------------------------------------------------------
// Collision-model integration of the Hudson-Parthasarathy dynamics on a
// truncated Fock space. Vacuum thermal bath only.
// ---------------------------------------------------------------------------

struct CollisionConfig {
    double dt = 0.01;
    double t_end = 50.0;
    int dim_sys = 25;
    int dim_field = 0;  // 0: smallest truncation leaving < 1e-8 coherent mass
    int dim_th = 2;
    int trotter_order = 2;
    double q0 = 0.0;
    double p0 = 0.0;
    int record_every = 5;
    int positivity_every = 100;  // 0 disables the density eigenvalue scan
    double tail_tol = 1e-6;

    void validate(const MechanicalParams& m) const {
        if (!(dt > 0.0) || dt * m.omega_bare > 0.05)
            throw ConfigError("collision: require dt * Omega_m <= 0.05");
        if (dim_sys < 8) throw ConfigError("collision: dim_sys >= 8");
        if (dim_field != 0 && dim_field < 3) throw ConfigError("collision: dim_field >= 3");
        if (dim_th < 2) throw ConfigError("collision: dim_th >= 2");
        if (trotter_order != 1 && trotter_order != 2)
            throw ConfigError("collision: trotter_order is 1 or 2");
    }
};

struct CollisionResult {
    std::vector<double> t;
    std::vector<double> q_mean, p_mean, q2_mean, p2_mean;
    std::vector<cplx> weyl_mean;  // <e^{i v q}>
    double max_trace_dev = 0.0;
    double min_density_eig = 0.0;
    double max_tail_pop = 0.0;
    int dim_field_used = 0;
};

namespace detail {

inline CMat annihilation(int n) {
    CMat a(n, n);
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
    return a;
}

inline std::vector<cplx> coherent_vector(cplx alpha, int dim) {
    std::vector<cplx> v(dim);
    v[0] = 1.0;
    for (int nn = 1; nn < dim; ++nn) v[nn] = v[nn - 1] * alpha / std::sqrt(static_cast<double>(nn));
    double norm = 0.0;
    for (const auto& x : v) norm += std::norm(x);
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;  // renormalize the truncated state
    return v;
}

inline int auto_field_dim(double mean_photons) {
    double term = std::exp(-mean_photons);
    double cum = term;
    int k = 1;
    while (1.0 - cum > 1e-8 && k < 64) {
        term *= mean_photons / static_cast<double>(k);
        cum += term;
        ++k;
    }
    return std::max(k, 3);
}

// Embeds an operator acting on (sys, th) into sys (x) ph (x) th.
inline CMat lift_sys_th(const CMat& m, int ns, int np, int nt) {
    CMat out(static_cast<std::size_t>(ns) * np * nt, static_cast<std::size_t>(ns) * np * nt);
    for (int s = 0; s < ns; ++s)
        for (int t = 0; t < nt; ++t)
            for (int s2 = 0; s2 < ns; ++s2)
                for (int t2 = 0; t2 < nt; ++t2) {
                    const cplx val = m(s * nt + t, s2 * nt + t2);
                    if (val == cplx{}) continue;
                    for (int p = 0; p < np; ++p)
                        out((static_cast<std::size_t>(s) * np + p) * nt + t,
                            (static_cast<std::size_t>(s2) * np + p) * nt + t2) = val;
                }
    return out;
}

inline cplx expect(const CMat& rho, const CMat& op) {
    cplx acc{};
    const std::size_t n = rho.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc += rho(i, j) * op(j, i);
    return acc;
}

}  // namespace detail

// One collision step as a Kraus map on the reduced mirror state. Per step:
// fresh photon ancilla in a coherent state of amplitude sqrt(eta |l|^2 dt),
// fresh thermal ancilla in vacuum; the step unitary composes exp(-i H_m dt),
// the radiation-pressure kick exp(i(vq+phi) n_ph), and the phonon exchange
// exp(sqrt(gamma dt)(a_m a_th^dag - h.c.)), in a first-order or Strang
// arrangement. Ancillas are traced out after each step. The map applies to
// arbitrary (not necessarily Hermitian) system matrices, so two-time
// correlation functions follow by quantum regression.
class CollisionEngine {
  public:
    CollisionEngine(const ModelConfig& cfg, const CollisionConfig& ccfg)
        : dt_(ccfg.dt), ns_(ccfg.dim_sys) {
        using detail::CMat;
        if (!cfg.noise.is_vacuum())
            throw ConfigError("collision: only the vacuum thermal bath is supported");
        ccfg.validate(cfg.mechanical);
        const auto& m = cfg.mechanical;
        const auto dm = derive_mechanical(m);

        const int ns = ns_;
        const double amp2 = cfg.optical.eta * cfg.optical.lambda_sq * ccfg.dt;
        np_ = ccfg.dim_field ? ccfg.dim_field : detail::auto_field_dim(amp2);
        const int np = np_, nt = ccfg.dim_th;
        const std::size_t nfull = static_cast<std::size_t>(ns) * np * nt;

        CMat a_s = detail::annihilation(ns);
        CMat ad_s = a_s.adjoint();
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        q_ = CMat(ns, ns);
        p_ = CMat(ns, ns);
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < ns; ++j) {
                q_(i, j) = inv_sqrt2 * (a_s(i, j) + ad_s(i, j));
                p_(i, j) = cplx{0.0, 1.0} * inv_sqrt2 * (ad_s(i, j) - a_s(i, j));
            }
        q2_ = q_ * q_;
        p2_ = p_ * p_;
        CMat h_m(ns, ns);
        {
            CMat qp = q_ * p_, pq = p_ * q_;
            for (int i = 0; i < ns; ++i)
                for (int j = 0; j < ns; ++j)
                    h_m(i, j) = 0.5 * m.omega_bare * (q2_(i, j) + p2_(i, j)) +
                                0.25 * m.gamma * (qp(i, j) + pq(i, j));
        }
        // twisted mechanical mode a_m = sqrt(Om/2om) (q + i tau p)
        CMat a_m(ns, ns);
        {
            const double f = std::sqrt(m.omega_bare / (2.0 * dm.omega_damped));
            const cplx itau = cplx{0.0, 1.0} * dm.tau;
            for (int i = 0; i < ns; ++i)
                for (int j = 0; j < ns; ++j) a_m(i, j) = f * (q_(i, j) + itau * p_(i, j));
        }

        detail::HermEig qeig = detail::hermitian_eig(q_);
        auto kick_on_sys_ph = [&](double frac) {
            CMat d(static_cast<std::size_t>(ns) * np, static_cast<std::size_t>(ns) * np);
            for (int s = 0; s < ns; ++s)
                for (int ph = 0; ph < np; ++ph) {
                    const double angle =
                        frac * (m.v * qeig.values[s] + cfg.optical.phi) * static_cast<double>(ph);
                    d(static_cast<std::size_t>(s) * np + ph,
                      static_cast<std::size_t>(s) * np + ph) = std::exp(cplx{0.0, angle});
                }
            CMat vq_full = kron(qeig.vectors, CMat::identity(np));
            return vq_full * d * vq_full.adjoint();
        };
        auto free_step = [&](double frac) {
            return detail::herm_expm(h_m, cplx{0.0, -frac * ccfg.dt});
        };
        auto thermal_step = [&]() {
            CMat a_th = detail::annihilation(nt);
            CMat g = kron(a_m, a_th.adjoint());
            CMat g2 = kron(a_m.adjoint(), a_th);
            const double amp = std::sqrt(m.gamma * ccfg.dt);
            CMat herm(static_cast<std::size_t>(ns) * nt, static_cast<std::size_t>(ns) * nt);
            for (std::size_t i = 0; i < herm.rows(); ++i)
                for (std::size_t j = 0; j < herm.cols(); ++j)
                    herm(i, j) = cplx{0.0, 1.0} * amp * (g(i, j) - g2(i, j));
            // exp(amp (a_m a_th^dag - h.c.)) = exp(-i herm)
            return detail::herm_expm(herm, cplx{0.0, -1.0});
        };

        CMat u_step(nfull, nfull);
        {
            CMat uh_full = kron(free_step(ccfg.trotter_order == 2 ? 0.5 : 1.0),
                                CMat::identity(static_cast<std::size_t>(np) * nt));
            CMat uk_full =
                kron(kick_on_sys_ph(ccfg.trotter_order == 2 ? 0.5 : 1.0), CMat::identity(nt));
            CMat ut_full = detail::lift_sys_th(thermal_step(), ns, np, nt);
            if (ccfg.trotter_order == 1) {
                u_step = uh_full * uk_full * ut_full;
            } else {
                u_step = uh_full * uk_full * ut_full * uk_full * uh_full;
            }
        }

        std::vector<cplx> chi_ph = detail::coherent_vector(std::sqrt(amp2), np);
        kraus_.reserve(static_cast<std::size_t>(np) * nt);
        for (int mph = 0; mph < np; ++mph) {
            for (int mth = 0; mth < nt; ++mth) {
                CMat k(ns, ns);
                for (int s = 0; s < ns; ++s)
                    for (int s2 = 0; s2 < ns; ++s2) {
                        cplx acc{};
                        for (int p2 = 0; p2 < np; ++p2)
                            acc += u_step((static_cast<std::size_t>(s) * np + mph) * nt + mth,
                                          (static_cast<std::size_t>(s2) * np + p2) * nt + 0) *
                                   chi_ph[p2];
                        k(s, s2) = acc;
                    }
                kraus_.push_back(std::move(k));
            }
        }

        weyl_ = CMat(ns, ns);
        {
            CMat d(ns, ns);
            for (int s = 0; s < ns; ++s) d(s, s) = std::exp(cplx{0.0, m.v * qeig.values[s]});
            weyl_ = qeig.vectors * d * qeig.vectors.adjoint();
        }
        psi0_ = detail::coherent_vector(cplx{ccfg.q0, ccfg.p0} * inv_sqrt2, ns);
    }

    int sys_dim() const { return ns_; }
    int field_dim() const { return np_; }
    double dt() const { return dt_; }
    const detail::CMat& op_q() const { return q_; }
    const detail::CMat& op_p() const { return p_; }
    const detail::CMat& op_q2() const { return q2_; }
    const detail::CMat& op_p2() const { return p2_; }
    const detail::CMat& op_weyl() const { return weyl_; }  // e^{i v q}

    detail::CMat initial_density() const {
        detail::CMat rho(ns_, ns_);
        for (int i = 0; i < ns_; ++i)
            for (int j = 0; j < ns_; ++j) rho(i, j) = psi0_[i] * std::conj(psi0_[j]);
        return rho;
    }

    // One collision: x -> sum_k K_k x K_k^dag.
    void apply(detail::CMat& x) const {
        detail::CMat next(ns_, ns_);
        for (const auto& k : kraus_) next += k * x * k.adjoint();
        x = std::move(next);
    }

    cplx expect(const detail::CMat& x, const detail::CMat& op) const {
        return detail::expect(x, op);
    }

  private:
    double dt_;
    int ns_, np_ = 0;
    detail::CMat q_, p_, q2_, p2_, weyl_;
    std::vector<detail::CMat> kraus_;
    std::vector<cplx> psi0_;
};

inline CollisionResult collision_run(const ModelConfig& cfg, const CollisionConfig& ccfg) {
    CollisionEngine eng(cfg, ccfg);
    detail::CMat rho = eng.initial_density();
    const int ns = eng.sys_dim();

    CollisionResult out;
    out.dim_field_used = eng.field_dim();
    out.min_density_eig = 1.0;
    const int n_steps = static_cast<int>(std::llround(ccfg.t_end / ccfg.dt));
    auto record = [&](int step) {
        out.t.push_back(step * ccfg.dt);
        out.q_mean.push_back(eng.expect(rho, eng.op_q()).real());
        out.p_mean.push_back(eng.expect(rho, eng.op_p()).real());
        out.q2_mean.push_back(eng.expect(rho, eng.op_q2()).real());
        out.p2_mean.push_back(eng.expect(rho, eng.op_p2()).real());
        out.weyl_mean.push_back(eng.expect(rho, eng.op_weyl()));
    };
    record(0);
    for (int step = 1; step <= n_steps; ++step) {
        eng.apply(rho);
        const double trace_dev = std::abs(rho.trace() - cplx{1.0, 0.0});
        out.max_trace_dev = std::max(out.max_trace_dev, trace_dev);
        const double tail = rho(ns - 1, ns - 1).real();
        out.max_tail_pop = std::max(out.max_tail_pop, tail);
        if (tail > ccfg.tail_tol)
            throw TruncationError("collision_run: Fock tail population " + std::to_string(tail));
        if (ccfg.positivity_every > 0 && step % ccfg.positivity_every == 0) {
            auto eig = detail::hermitian_eig(rho);
            for (double ev : eig.values) out.min_density_eig = std::min(out.min_density_eig, ev);
        }
        if (step % ccfg.record_every == 0 || step == n_steps) record(step);
    }
    return out;
}

}  // namespace mzo
