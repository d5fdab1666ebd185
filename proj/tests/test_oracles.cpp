#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mzo/kernels.hpp"
#include "mzo/oracles.hpp"
#include "mzo/oscillator.hpp"
#include "mzo/spectra_exact.hpp"

using namespace mzo;

TEST_CASE("gp sampling: vacuum is silent") {
    auto tr = sample_gp(NoiseSpectrum::vacuum(), detail::linspace(0.0, 5.0, 16), 3);
    for (const auto& u : tr.u) CHECK(u == cplx{0.0, 0.0});
}

TEST_CASE("gp sampling: moments of the constant preset") {
    const double n0 = 1.2, cutoff = 2.0;
    NoiseSpectrum noise = NoiseSpectrum::constant(n0, cutoff);
    KernelSet ker({1.0, 0.2, 0.1}, noise);
    const auto grid = detail::linspace(0.0, 6.0, 25);
    const int n_samples = 500;

    const double f0 = ker.autocov_F(0.0).real();
    std::vector<cplx> at0(n_samples), at_l(n_samples), at0b(n_samples), at_lb(n_samples);
    const std::size_t i0 = 3, lag = 8, i0b = 12;
    for (int s = 0; s < n_samples; ++s) {
        auto tr = sample_gp(noise, grid, detail::stream_seed(424242, s), 512);
        at0[s] = tr.u[i0];
        at_l[s] = tr.u[i0 + lag];
        at0b[s] = tr.u[i0b];
        at_lb[s] = tr.u[i0b + lag];
    }

    auto mean_of = [&](auto&& f) {
        cplx acc{};
        for (int s = 0; s < n_samples; ++s) acc += f(s);
        return acc / static_cast<double>(n_samples);
    };
    auto stderr_of = [&](auto&& f, cplx mean) {
        double acc = 0.0;
        for (int s = 0; s < n_samples; ++s) acc += std::norm(f(s) - mean);
        return std::sqrt(acc / (n_samples - 1.0) / n_samples);
    };

    // lag-0 autocovariance = F(0)
    auto cov0 = [&](int s) { return std::conj(at0[s]) * at0[s]; };
    cplx m0 = mean_of(cov0);
    double se0 = stderr_of(cov0, m0);
    CHECK(std::abs(m0.real() - f0) <= 3.0 * se0);

    // pseudo-covariance E[u u] = 0
    auto pcov = [&](int s) { return at0[s] * at_l[s]; };
    cplx mp = mean_of(pcov);
    double sep = stderr_of(pcov, mp);
    CHECK(std::abs(mp) <= 3.0 * sep + 1e-12);

    // lagged autocovariance matches F(t - s) and is window independent
    const double lag_t = grid[i0 + lag] - grid[i0];
    const cplx f_lag = ker.autocov_F(-lag_t);  // E[conj(u(t)) u(t + L)] = F(-L)
    auto covl = [&](int s) { return std::conj(at0[s]) * at_l[s]; };
    cplx ml = mean_of(covl);
    double sel = stderr_of(covl, ml);
    CHECK(std::abs(ml - f_lag) <= 3.0 * sel);

    auto covlb = [&](int s) { return std::conj(at0b[s]) * at_lb[s]; };
    cplx mlb = mean_of(covlb);
    double selb = stderr_of(covlb, mlb);
    CHECK(std::abs(mlb - ml) <= 3.0 * (sel + selb));  // stationarity
}

TEST_CASE("thermal Weyl Monte Carlo") {
    const MechanicalParams mech{1.0, 0.199007, 0.1};

    SUBCASE("v = 0 is exactly one") {
        KernelSet ker({1.0, 0.199007, 0.0}, NoiseSpectrum::constant(1.0, 3.0));
        auto r = thermal_weyl_mc(ker, 10.0 / mech.gamma, 100, 5);
        CHECK(r.estimate == cplx{1.0, 0.0});
    }

    SUBCASE("vacuum bath: deterministic norm factor") {
        KernelSet ker(mech, NoiseSpectrum::vacuum());
        const double t = 10.0 / mech.gamma;
        auto r = thermal_weyl_mc(ker, t, 10, 7);
        CHECK(r.stderr_est == 0.0);
        const double om = ker.derived().omega_damped;
        const double k_vac = mech.v * mech.v * mech.omega_bare / (4.0 * om);
        CHECK(std::abs(r.estimate.real() - std::exp(-k_vac)) < 1e-3);
        // finite-time closed form |l_t|^2 = pref (1 - e^{-gm t})
        const double norm_expected = ker.prefactor() * (1.0 - std::exp(-mech.gamma * t));
        CHECK(r.norm_l2 == doctest::Approx(norm_expected).epsilon(1e-4));
    }

    SUBCASE("constant bath vs exp(-K)") {
        MechanicalParams m2{1.0, 0.199007, 0.5};
        KernelSet ker(m2, NoiseSpectrum::constant(1.0, 3.0));
        const double k_exp = ker.prefactor() * (ker.n_eff() + 0.5);
        auto r = thermal_weyl_mc(ker, 10.0 / m2.gamma, 3000, 11);
        CHECK(std::abs(r.estimate - cplx{std::exp(-k_exp), 0.0}) <= 3.0 * r.stderr_est);
    }

    SUBCASE("stderr scales like 1/sqrt(n)") {
        MechanicalParams m2{1.0, 0.199007, 0.5};
        KernelSet ker(m2, NoiseSpectrum::constant(1.0, 3.0));
        auto r1 = thermal_weyl_mc(ker, 10.0 / m2.gamma, 1000, 13);
        auto r4 = thermal_weyl_mc(ker, 10.0 / m2.gamma, 4000, 13);
        const double ratio = r4.stderr_est / r1.stderr_est;
        CHECK(ratio > 0.4);
        CHECK(ratio < 0.6);
    }
}

TEST_CASE("collision model: free damped decay matches the mean ODE") {
    ModelConfig cfg;
    cfg.mechanical = {1.0, 0.35, 0.0};
    cfg.optical = {0.0, 0.1, 0.0, 0.0};

    CollisionConfig cc;
    cc.dim_sys = 20;
    cc.t_end = 6.0;
    cc.q0 = 1.2;
    cc.p0 = 0.0;
    cc.record_every = 25;
    cc.positivity_every = 0;

    auto run_err = [&](double dt, int order) {
        CollisionConfig c = cc;
        c.dt = dt;
        c.trotter_order = order;
        auto res = collision_run(cfg, c);
        std::vector<double> grid(res.t.begin() + 1, res.t.end());
        auto ode = mean_trajectory(cfg, c.q0, c.p0, grid, 1e-3);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::abs(res.q_mean[i + 1] - ode[i].first));
        return err;
    };

    // The single-ancilla dissipator reproduces the damping with per-step
    // O(dt^2) error, so the mean trajectory converges at global O(dt) for
    // either splitting order.
    const double e2_coarse = run_err(0.04, 2);
    const double e2_fine = run_err(0.02, 2);
    CHECK(e2_coarse < 5e-3);
    CHECK(e2_fine < e2_coarse);
    CHECK(e2_coarse / e2_fine > 1.6);
    CHECK(e2_coarse / e2_fine < 2.8);

    const double e1_coarse = run_err(0.04, 1);
    const double e1_fine = run_err(0.02, 1);
    CHECK(e1_coarse / e1_fine > 1.6);
    CHECK(e1_coarse / e1_fine < 2.8);
    CHECK(e2_fine <= 1.05 * e1_fine);
}

TEST_CASE("collision model: driven steady state against the closed forms") {
    ModelConfig cfg;
    cfg.mechanical = {1.0, 0.35, 0.3};
    cfg.optical = {40.0, 0.1, 0.0, 0.0};
    ExactSpectra ex(cfg);
    const auto& dc = ex.constants_basic();
    auto eq = equilibrium_moments(cfg, 0.0);

    CollisionConfig cc;
    cc.dt = 0.01;
    cc.dim_sys = 25;
    cc.t_end = 10.0 / cfg.mechanical.gamma;
    cc.q0 = eq.q_mean;
    cc.record_every = 100;
    cc.positivity_every = 400;
    auto res = collision_run(cfg, cc);

    CHECK(std::abs(res.q_mean.back() - eq.q_mean) < 0.02 * eq.q_mean);
    const double p2 = res.p2_mean.back();
    CHECK(std::abs(p2 - eq.p_var) < 0.05 * eq.p_var);
    const double w_ref = std::exp(-(dc.k_exp + dc.m_exp));
    CHECK(std::abs(std::abs(res.weyl_mean.back()) - w_ref) < 0.05 * w_ref);

    CHECK(res.max_trace_dev < 1e-10);
    CHECK(res.min_density_eig > -1e-10);
    CHECK(res.max_tail_pop < 1e-6);
}

TEST_CASE("collision model: truncation convergence") {
    ModelConfig cfg;
    cfg.mechanical = {1.0, 0.35, 0.3};
    cfg.optical = {40.0, 0.1, 0.0, 0.0};
    auto eq = equilibrium_moments(cfg, 0.0);

    CollisionConfig cc;
    cc.dt = 0.02;
    cc.t_end = 15.0;
    cc.q0 = eq.q_mean;
    cc.record_every = 200;
    cc.positivity_every = 0;

    // the steady tail decays by about x0.5 per Fock level here; 24 levels
    // keep the top population two decades under the 1e-6 guard
    CollisionConfig small = cc;
    small.dim_sys = 24;
    CollisionConfig big = cc;
    big.dim_sys = 48;
    auto rs = collision_run(cfg, small);
    auto rb = collision_run(cfg, big);
    CHECK(std::abs(rs.q_mean.back() - rb.q_mean.back()) < 5e-3 * std::abs(rb.q_mean.back()));
    CHECK(std::abs(rs.p2_mean.back() - rb.p2_mean.back()) < 5e-3 * std::abs(rb.p2_mean.back()));
}

TEST_CASE("collision model: guards") {
    ModelConfig cfg;
    cfg.mechanical = {1.0, 0.35, 0.1};
    cfg.optical = {40.0, 0.1, 0.0, 0.0};

    CollisionConfig cc;
    cc.dt = 0.2;  // dt * Omega too big
    CHECK_THROWS_AS(collision_run(cfg, cc), ConfigError);

    CollisionConfig cc2;
    cc2.dim_sys = 8;
    cc2.q0 = 3.5;  // coherent state too large for the truncation
    cc2.t_end = 1.0;
    CHECK_THROWS_AS(collision_run(cfg, cc2), TruncationError);

    ModelConfig thermal = cfg;
    thermal.noise = NoiseSpectrum::constant(1.0, 10.0);
    CollisionConfig cc3;
    CHECK_THROWS_AS(collision_run(thermal, cc3), ConfigError);
}
