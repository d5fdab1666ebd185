#include <doctest.h>

#include <cmath>
#include <random>

#include "mzo/kernels.hpp"
#include "mzo/quadrature.hpp"

using namespace mzo;

namespace {
const MechanicalParams ref_mech{1.0, 0.199007, 0.1};
}

TEST_CASE("h kernel") {
    KernelSet k(ref_mech, NoiseSpectrum::vacuum());
    CHECK(k.h(0.0) == 0.0);

    KernelSet k0({1.0, 0.199007, 0.0}, NoiseSpectrum::vacuum());
    CHECK(k0.h(1.3) == 0.0);
    CHECK(std::abs(k0.l(1.3)) == 0.0);

    // closed-form value at t = pi/(2 omega_m): pref * exp(-gm pi / 4 om)
    const double om = k.derived().omega_damped;
    const double t = detail::pi / (2.0 * om);
    CHECK(k.h(t) == doctest::Approx(0.0042944950).epsilon(2e-7));

    // oddness
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(0.0, 30.0);
    for (int i = 0; i < 50; ++i) {
        const double s = ut(rng);
        CHECK(k.h(-s) == doctest::Approx(-k.h(s)).epsilon(1e-14));
        CHECK(k.g(-s) == doctest::Approx(k.g(s)).epsilon(1e-14));
    }
}

TEST_CASE("l kernel modulus and norm") {
    KernelSet k(ref_mech, NoiseSpectrum::vacuum());
    const auto& m = k.mechanical();
    const double om = k.derived().omega_damped;
    const double amp = std::abs(m.v) * std::sqrt(m.omega_bare * m.gamma / (2.0 * om));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ut(-20.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        const double t = ut(rng);
        CHECK(std::abs(k.l(t)) ==
              doctest::Approx(amp * std::exp(-0.5 * m.gamma * std::abs(t))).epsilon(1e-13));
    }

    // integral of |l|^2 equals v^2 Om / (2 om) = 2K at N_eff = 0
    auto r = integrate_semi_infinite<double>([&](double t) { return std::norm(k.l(t)); },
                                             m.gamma, 0.0);
    CHECK(r.value == doctest::Approx(k.prefactor()).epsilon(1e-8));
    const double k_vacuum = k.prefactor() * 0.5;
    CHECK(r.value == doctest::Approx(2.0 * k_vacuum).epsilon(1e-8));
}

TEST_CASE("g kernel: vacuum closed form and flat mode") {
    KernelSet k(ref_mech, NoiseSpectrum::vacuum());
    const double om = k.derived().omega_damped;
    const double gm = k.mechanical().gamma;
    CHECK(k.g(0.0) == doctest::Approx(k.prefactor()).epsilon(1e-14));
    for (double t : {0.3, 2.1, 7.7}) {
        const double expected =
            k.prefactor() * std::exp(-0.5 * gm * t) * std::cos(om * t);
        CHECK(k.g(t) == doctest::Approx(expected).epsilon(1e-13));
    }

    // flat mode with N(omega_m) = 0 reproduces the vacuum closed form
    KernelSet kf(ref_mech, NoiseSpectrum::constant(0.0, 50.0), {}, true);
    for (double t : {0.0, 0.5, 1.7, 4.2, 11.0}) {
        CHECK(std::abs(kf.g(t) - k.g(t)) < 1e-12);
        CHECK(std::abs(kf.g_plus_ih_flat(t).imag() - k.h(t)) < 1e-12);
    }
}

TEST_CASE("g kernel: flat approximation vs full quadrature for flat noise") {
    const double n0 = 0.7;
    NoiseSpectrum wide = NoiseSpectrum::constant(n0, 60.0);
    KernelSet full(ref_mech, wide);
    KernelSet flat(ref_mech, wide, {}, true);
    const double gm = ref_mech.gamma;
    const double scale = full.prefactor() * (2.0 * n0 + 1.0);
    double max_diff = 0.0;
    for (double t = 0.0; t <= 10.0 / gm; t += 5.0 / gm / 4.0) {
        max_diff = std::max(max_diff, std::abs(full.g(t) - flat.g(t)));
    }
    CHECK(max_diff < 0.01 * scale);
}

TEST_CASE("n_eff") {
    KernelSet kv(ref_mech, NoiseSpectrum::vacuum());
    CHECK(kv.n_eff() == 0.0);

    const double n0 = 1.4;
    KernelSet kc(ref_mech, NoiseSpectrum::constant(n0, 50.0));
    CHECK(kc.n_eff() == doctest::Approx(n0).epsilon(0.01));

    // flat regime: N_eff ~ N(omega_m)
    CHECK(kc.n_eff() == doctest::Approx(kc.noise().value(kc.derived().omega_damped)).epsilon(0.01));
}

TEST_CASE("autocovariance F") {
    KernelSet kv(ref_mech, NoiseSpectrum::vacuum());
    CHECK(std::abs(kv.autocov_F(0.7)) == 0.0);

    const double n0 = 1.5, cutoff = 2.0;
    KernelSet kc(ref_mech, NoiseSpectrum::constant(n0, cutoff));
    // F(0) = (1/2pi) Int N = n0 * 2 cutoff / 2pi, real and positive
    cplx f0 = kc.autocov_F(0.0);
    CHECK(f0.real() == doctest::Approx(n0 * cutoff / detail::pi).epsilon(1e-7));
    CHECK(std::abs(f0.imag()) < 1e-9);

    // Hermitian symmetry and the band sinc closed form
    for (double t : {0.4, 1.3, 5.9}) {
        cplx fp = kc.autocov_F(t), fm = kc.autocov_F(-t);
        CHECK(std::abs(fm - std::conj(fp)) < 1e-9);
        const double expected = n0 * std::sin(cutoff * t) / (detail::pi * t);
        CHECK(fp.real() == doctest::Approx(expected).epsilon(1e-6));
        CHECK(std::abs(fp.imag()) < 1e-9);
    }
}

TEST_CASE("(F, N) Fourier pair recovers the constant preset") {
    // N(nu) = Int e^{-i nu t} F(t) dt with F(t) = n0 sin(c t)/(pi t); the
    // band interior values are recovered within 1e-4 relative.
    const double n0 = 1.5, cutoff = 2.0;
    auto f_closed = [&](double t) {
        return t == 0.0 ? n0 * cutoff / detail::pi : n0 * std::sin(cutoff * t) / (detail::pi * t);
    };
    QuadConfig cfg;
    cfg.rel_tol = 1e-7;
    cfg.max_panels = 200000;
    for (double nu : {0.0, 0.5, 1.0}) {
        const double horizon = 4000.0;
        auto r = integrate_interval<double>(
            [&](double t) { return 2.0 * f_closed(t) * std::cos(nu * t); }, 0.0, horizon,
            cutoff + nu, cfg);
        CHECK(r.value == doctest::Approx(n0).epsilon(1e-4));
    }
}

TEST_CASE("im_inner_ell") {
    KernelSet k(ref_mech, NoiseSpectrum::vacuum());
    const double gm = ref_mech.gamma;
    const double scale = k.prefactor();

    CHECK(std::abs(k.im_inner_ell(7.0, 7.0)) < 1e-12 * scale);

    KernelSet k0({1.0, 0.199007, 0.0}, NoiseSpectrum::vacuum());
    CHECK(k0.im_inner_ell(3.0, 5.0) == 0.0);

    // asymptotic identity Im<l_s|l_t> -> h(t-s); the leftover transient is
    // pref * e^{-gm(s+t)/2}, so the 1e-6 window needs s + t >= 28/gm.
    for (double dt : {0.3, 1.1, 2.5}) {
        const double s = 14.0 / gm, t = s + dt;
        CHECK(std::abs(k.im_inner_ell(s, t) - k.h(dt)) < 1e-6 * scale);
    }
}

TEST_CASE("Bose-Einstein preset") {
    const double om = derive_mechanical(ref_mech).omega_damped;
    NoiseSpectrum be = NoiseSpectrum::bose_einstein(2.0, 40.0, 1e-3 * om);
    CHECK(be.value(-1.0) == 0.0);
    CHECK(be.value(1e-4 * om) == 0.0);
    CHECK(be.value(2.0) == doctest::Approx(1.0 / std::expm1(1.0)).epsilon(1e-12));
    KernelSet k(ref_mech, be);
    CHECK(k.n_eff() > 0.0);
}
