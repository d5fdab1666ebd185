#include <doctest.h>

#include <cmath>
#include <random>

#include "mzo/counting.hpp"
#include "mzo/weyl.hpp"

using namespace mzo;

namespace {

std::vector<double> grid64() { return detail::linspace(0.0, 1.0, 64); }

WeylElement random_element(std::mt19937_64& rng, const std::vector<double>& grid) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    WeylElement w = weyl_identity(grid, 2);
    // random displacement
    for (auto& ch : w.displacement.channels)
        for (auto& x : ch) x = cplx{u(rng), u(rng)};
    // random unitary: compose a beam splitter and two phase shifters
    std::uniform_real_distribution<double> ue(0.05, 0.95), uph(0.0, 2.0 * detail::pi);
    w.mixing = beam_splitter(ue(rng), grid).mixing;
    w.mixing = w.mixing * phase_shifter(uph(rng), 0, grid).mixing;
    w.mixing = phase_shifter(uph(rng), 1, grid).mixing * w.mixing;
    w.phase = std::exp(cplx{0.0, uph(rng)});
    return w;
}

CoherentAmplitude random_amplitude(std::mt19937_64& rng, const std::vector<double>& grid) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CoherentAmplitude f = CoherentAmplitude::zero(grid, 2);
    for (auto& ch : f.channels)
        for (auto& x : ch) x = cplx{u(rng), u(rng)};
    return f;
}

}  // namespace

TEST_CASE("composition basics") {
    auto grid = grid64();
    std::mt19937_64 rng(17);

    SUBCASE("pure mixings compose to the matrix product with unit phase") {
        WeylElement a = beam_splitter(0.3, grid);
        WeylElement b = phase_shifter(1.1, 1, grid);
        WeylElement c = compose(a, b);
        CHECK(std::abs(c.phase - cplx{1.0, 0.0}) < 1e-15);
        CHECK(c.mixing_unitarity_defect() < 1e-15);
    }

    SUBCASE("displacement and its negation cancel") {
        WeylElement g = weyl_identity(grid, 2);
        for (auto& ch : g.displacement.channels)
            for (std::size_t k = 0; k < grid.size(); ++k) ch[k] = cplx{0.3, -0.2};
        WeylElement gm = g;
        for (auto& ch : gm.displacement.channels)
            for (auto& x : ch) x = -x;
        WeylElement c = compose(g, gm);
        CHECK(std::abs(c.phase - cplx{1.0, 0.0}) < 1e-14);
        for (const auto& ch : c.displacement.channels)
            for (const auto& x : ch) CHECK(std::abs(x) < 1e-14);
    }

    SUBCASE("associativity") {
        for (int i = 0; i < 10; ++i) {
            WeylElement a = random_element(rng, grid);
            WeylElement b = random_element(rng, grid);
            WeylElement c = random_element(rng, grid);
            WeylElement lhs = compose(compose(a, b), c);
            WeylElement rhs = compose(a, compose(b, c));
            CHECK(std::abs(lhs.phase - rhs.phase) < 1e-10);
            for (std::size_t ch = 0; ch < 2; ++ch)
                for (std::size_t k = 0; k < grid.size(); ++k)
                    CHECK(std::abs(lhs.displacement.channels[ch][k] -
                                   rhs.displacement.channels[ch][k]) < 1e-10);
        }
    }

    SUBCASE("inverse gives the identity") {
        for (int i = 0; i < 10; ++i) {
            WeylElement a = random_element(rng, grid);
            WeylElement c = compose(a, inverse(a));
            CHECK(std::abs(c.phase - cplx{1.0, 0.0}) < 1e-10);
            CHECK(c.mixing.max_abs_diff_identity() < 1e-12);
            for (const auto& ch : c.displacement.channels)
                for (const auto& x : ch) CHECK(std::abs(x) < 1e-10);
        }
    }
}

TEST_CASE("action on coherent amplitudes") {
    auto grid = grid64();
    std::mt19937_64 rng(29);
    CoherentAmplitude f = random_amplitude(rng, grid);

    SUBCASE("identity element") {
        auto [ph, out] = apply_to_coherent(weyl_identity(grid, 2), f);
        CHECK(std::abs(ph - cplx{1.0, 0.0}) < 1e-15);
        for (std::size_t k = 0; k < grid.size(); ++k)
            CHECK(out.channels[0][k] == f.channels[0][k]);
    }

    SUBCASE("phase shifter multiplies channel 2") {
        const double psi = 0.77;
        auto [ph, out] = apply_to_coherent(phase_shifter(psi, 1, grid), f);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(out.channels[1][k] -
                           f.channels[1][k] * std::exp(cplx{0.0, psi})) < 1e-14);
            CHECK(out.channels[0][k] == f.channels[0][k]);
        }
    }

    SUBCASE("beam splitter splits (f1, 0)") {
        const double eta = 0.37;
        CoherentAmplitude g = CoherentAmplitude::zero(grid, 2);
        g.channels[0] = f.channels[0];
        auto [ph, out] = apply_to_coherent(beam_splitter(eta, grid), g);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(out.channels[0][k] - std::sqrt(eta) * g.channels[0][k]) < 1e-14);
            CHECK(std::abs(out.channels[1][k] -
                           cplx{0.0, std::sqrt(1.0 - eta)} * g.channels[0][k]) < 1e-14);
        }
    }

    SUBCASE("homomorphism: composed action equals sequential action") {
        for (int i = 0; i < 8; ++i) {
            WeylElement a = random_element(rng, grid);
            WeylElement b = random_element(rng, grid);
            auto [ph1, mid] = apply_to_coherent(b, f);
            auto [ph2, seq] = apply_to_coherent(a, mid);
            auto [phc, direct] = apply_to_coherent(compose(a, b), f);
            CHECK(std::abs(ph1 * ph2 - phc) < 1e-10);
            for (std::size_t ch = 0; ch < 2; ++ch)
                for (std::size_t k = 0; k < grid.size(); ++k)
                    CHECK(std::abs(seq.channels[ch][k] - direct.channels[ch][k]) < 1e-10);
        }
    }

    SUBCASE("lossless mixing preserves the power") {
        for (int i = 0; i < 8; ++i) {
            WeylElement a = random_element(rng, grid);
            for (auto& ch : a.displacement.channels)
                for (auto& x : ch) x = cplx{};  // mixing only
            auto [ph, out] = apply_to_coherent(a, f);
            CHECK(out.total_power() == doctest::Approx(f.total_power()).epsilon(1e-12));
        }
    }
}

TEST_CASE("beam splitter matrices") {
    auto grid = grid64();
    WeylElement id = beam_splitter(1.0, grid);
    CHECK(id.mixing.max_abs_diff_identity() < 1e-15);

    WeylElement bal = beam_splitter(0.5, grid);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(std::abs(bal.mixing(i, j)) - 1.0 / std::sqrt(2.0)) < 1e-15);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ue(0.0, 1.0);
    for (int i = 0; i < 40; ++i)
        CHECK(beam_splitter(ue(rng), grid).mixing_unitarity_defect() < 1e-15);
}

TEST_CASE("fixed-mirror interferometer chain") {
    ModelConfig cfg;
    cfg.mechanical = {1.0, 0.2, 0.0};
    cfg.optical = {25.0, 0.5, 0.4, 0.4};
    auto grid = grid64();
    CoherentAmplitude f_in = CoherentAmplitude::zero(grid, 2);
    const double lam = std::sqrt(cfg.optical.lambda_sq);
    const double omega0 = 7.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        f_in.channels[0][k] = lam * std::exp(cplx{0.0, -omega0 * grid[k]});

    SUBCASE("balanced dark port at phi = psi") {
        auto amps = evaluate_mzi_fixed(cfg, f_in);
        auto i1 = port_intensity(amps.d, 0);
        auto i2 = port_intensity(amps.d, 1);
        auto base = baseline_fixed_mirror(cfg);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(i1[k]) < 1e-12);
            CHECK(i1[k] + i2[k] == doctest::Approx(cfg.optical.lambda_sq).epsilon(1e-12));
            CHECK(i2[k] == doctest::Approx(base.n2).epsilon(1e-12));
        }
    }

    SUBCASE("quadrature phase splits evenly") {
        ModelConfig c2 = cfg;
        c2.optical.phi = cfg.optical.psi + 0.5 * detail::pi;
        auto amps = evaluate_mzi_fixed(c2, f_in);
        auto i1 = port_intensity(amps.d, 0);
        auto i2 = port_intensity(amps.d, 1);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(i1[k] == doctest::Approx(0.5 * c2.optical.lambda_sq).epsilon(1e-12));
            CHECK(i2[k] == doctest::Approx(0.5 * c2.optical.lambda_sq).epsilon(1e-12));
        }
    }

    SUBCASE("generic transmittance reproduces the baseline rates pointwise") {
        ModelConfig c3 = cfg;
        c3.optical.eta = 0.23;
        c3.optical.psi = 1.9;
        c3.optical.phi = 0.6;
        auto amps = evaluate_mzi_fixed(c3, f_in);
        auto i1 = port_intensity(amps.d, 0);
        auto i2 = port_intensity(amps.d, 1);
        auto base = baseline_fixed_mirror(c3);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(i1[k] == doctest::Approx(base.n1).epsilon(1e-12));
            CHECK(i2[k] == doctest::Approx(base.n2).epsilon(1e-12));
        }
    }
}

TEST_CASE("default grid spans one detector time constant") {
    DetectorParams det;
    det.kappa = 4.0;
    auto g = default_grid(det);
    CHECK(g.size() == 2048);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("grid mismatch is rejected") {
    auto g1 = detail::linspace(0.0, 1.0, 64);
    auto g2 = detail::linspace(0.0, 1.0, 65);
    WeylElement a = beam_splitter(0.5, g1);
    WeylElement b = beam_splitter(0.5, g2);
    CHECK_THROWS_AS(compose(a, b), GridMismatchError);
    CoherentAmplitude f = CoherentAmplitude::zero(g2, 2);
    CHECK_THROWS_AS(apply_to_coherent(a, f), GridMismatchError);
}
