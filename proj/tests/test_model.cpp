#include <doctest.h>

#include <cmath>
#include <random>

#include "mzo/model.hpp"

using namespace mzo;

TEST_CASE("derive_mechanical closed forms") {
    DerivedMechanical d = derive_mechanical({5.0, 8.0, 0.1});
    CHECK(d.omega_damped == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(d.tau.real() == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(d.tau.imag() == doctest::Approx(-0.8).epsilon(1e-14));

    CHECK_THROWS_AS(derive_mechanical({1.0, 3.0, 0.0}), RegimeError);

    DerivedMechanical p = derive_mechanical({1.0, 0.199007, 0.1});
    CHECK(p.omega_damped == doctest::Approx(0.995037).epsilon(1e-6));
}

TEST_CASE("tau is unit modulus over random underdamped samples") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uom(0.1, 10.0), ufrac(0.0, 1.99);
    for (int i = 0; i < 200; ++i) {
        MechanicalParams m;
        m.omega_bare = uom(rng);
        m.gamma = ufrac(rng) * m.omega_bare;  // gamma < 2 Omega keeps it underdamped
        m.v = 0.0;
        DerivedMechanical d = derive_mechanical(m);
        CHECK(std::abs(std::norm(d.tau) - 1.0) < 1e-14);
        CHECK(d.omega_damped > 0.0);
        CHECK(d.omega_damped < m.omega_bare);
    }
}

TEST_CASE("derive_mechanical is pure") {
    MechanicalParams m{2.0, 0.5, -0.3};
    DerivedMechanical a = derive_mechanical(m);
    DerivedMechanical b = derive_mechanical(m);
    CHECK(a.omega_damped == b.omega_damped);
    CHECK(a.tau == b.tau);
}

TEST_CASE("chi values and symmetry") {
    OpticalParams o;
    o.eta = 0.5;
    CHECK(chi(o) == doctest::Approx(1.0).epsilon(1e-15));
    o.eta = 0.1;
    CHECK(chi(o) == doctest::Approx(0.6).epsilon(1e-14));
    o.eta = 1e-8;
    CHECK(chi(o) < 3e-4);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ue(1e-6, 1.0 - 1e-6);
    for (int i = 0; i < 100; ++i) {
        const double eta = ue(rng);
        OpticalParams a, b;
        a.eta = eta;
        b.eta = 1.0 - eta;
        CHECK(chi(a) == doctest::Approx(chi(b)).epsilon(1e-14));
        CHECK(chi(a) >= 0.0);
        CHECK(chi(a) <= 1.0);
    }
}

TEST_CASE("parameter validation") {
    OpticalParams o;
    o.eta = 0.0;
    CHECK_THROWS_AS(o.validate(), ConfigError);
    o.eta = 1.0;
    CHECK_THROWS_AS(o.validate(), ConfigError);
    o.eta = 0.3;
    o.lambda_sq = -1.0;
    CHECK_THROWS_AS(o.validate(), ConfigError);

    DetectorParams det;
    det.kappa = 0.0;
    CHECK_THROWS_AS(det.validate(), ConfigError);

    MechanicalParams m{0.0, 0.1, 0.0};
    CHECK_THROWS_AS(m.validate(), ConfigError);
}
