#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mzo/detail/math.hpp"
#include "mzo/model.hpp"
#include "mzo/spectra_exact.hpp"

namespace mzo {

// Asymptotic direct-detection statistics. Q parameters at a dark port are
// undefined and reported as empty optionals rather than infinities.
struct CountingStats {
    double n1 = 0.0;
    double n2 = 0.0;
    std::optional<double> q1;
    std::optional<double> q2;
    double q_plus = 0.0;   // identically zero: pure scattering preserves photon number
    double q_minus = 0.0;  // (1 - eta) Sigma_-(0)
    double cov_rate = 0.0;
    double var_plus_rate = 0.0;
    double var_minus_rate = 0.0;
};

// Mandel parameters and count variance rates from the zero-frequency reduced
// spectra. sigma_minus_0 / sigma_zero_0 may come from the exact or the
// approximate path; the caller chooses.
inline CountingStats counting_stats(const ModelConfig& cfg, const DynamicConstants& dc,
                                    double sigma_minus_0, double sigma_zero_0) {
    const double lam = cfg.optical.lambda_sq;
    const double eta = cfg.optical.eta;
    const double alpha = cfg.optical.psi - cfg.optical.phi - dc.theta;
    const double x = 2.0 * std::sqrt(eta * (1.0 - eta)) *
                     std::exp(-(dc.k_exp + dc.m_exp)) * std::cos(alpha);
    CountingStats out;
    out.n1 = 0.5 * lam * (1.0 - x);
    out.n2 = lam - out.n1;  // double subtraction keeps n1 + n2 = lam exact
    out.n1 = lam - out.n2;

    const double root1me = std::sqrt(1.0 - eta);
    auto q_at = [&](int j, double nj) -> std::optional<double> {
        if (nj <= 0.0) return std::nullopt;
        const double sgn = (j == 1) ? -1.0 : 1.0;
        return lam / (4.0 * nj) *
               (sgn * root1me * sigma_zero_0 + (1.0 - eta) * sigma_minus_0);
    };
    out.q1 = q_at(1, out.n1);
    out.q2 = q_at(2, out.n2);
    out.q_plus = 0.0;
    out.q_minus = (1.0 - eta) * sigma_minus_0;
    out.cov_rate = -0.25 * lam * (1.0 - eta) * sigma_minus_0;
    out.var_plus_rate = lam;
    out.var_minus_rate = lam * (1.0 + (1.0 - eta) * sigma_minus_0);
    return out;
}

// Fixed-mirror interferometer: all reduced spectra vanish, counts at both
// ports are Poisson.
inline CountingStats baseline_fixed_mirror(const ModelConfig& cfg) {
    const double lam = cfg.optical.lambda_sq;
    const double x = chi(cfg.optical) * std::cos(cfg.optical.phi - cfg.optical.psi);
    CountingStats out;
    out.n1 = 0.5 * lam * (1.0 - x);
    out.n2 = lam - out.n1;
    out.n1 = lam - out.n2;
    out.q1 = 0.0;
    out.q2 = 0.0;
    out.q_plus = 0.0;
    out.q_minus = 0.0;
    out.cov_rate = 0.0;
    out.var_plus_rate = lam;
    out.var_minus_rate = lam;
    return out;
}

// Baseline intensity spectra with the delta weight kept separate.
inline IntensitySpectrum baseline_intensity(const ModelConfig& cfg, IntensityKind kind,
                                            const std::vector<double>& mu) {
    const double lam = cfg.optical.lambda_sq;
    const double c2 = cfg.detector.c_gain * cfg.detector.c_gain;
    const double kap2 = cfg.detector.kappa * cfg.detector.kappa;
    const CountingStats base = baseline_fixed_mirror(cfg);
    IntensitySpectrum out;
    out.smooth.mu = mu;
    out.smooth.values.resize(mu.size());
    out.smooth.errs.assign(mu.size(), 0.0);
    double level = 0.0;
    switch (kind) {
        case IntensityKind::port1:
            out.delta_weight = base.n1 * base.n1;
            level = base.n1;
            out.smooth.label = "S_I_1_baseline";
            break;
        case IntensityKind::port2:
            out.delta_weight = base.n2 * base.n2;
            level = base.n2;
            out.smooth.label = "S_I_2_baseline";
            break;
        case IntensityKind::sum:
            out.delta_weight = lam * lam;
            level = lam;
            out.smooth.label = "S_I_sum_baseline";
            break;
        case IntensityKind::diff: {
            const double c = chi(cfg.optical) * std::cos(cfg.optical.psi - cfg.optical.phi);
            out.delta_weight = lam * lam * c * c;
            level = lam;
            out.smooth.label = "S_I_diff_baseline";
            break;
        }
    }
    for (std::size_t i = 0; i < mu.size(); ++i)
        out.smooth.values[i] = c2 * kap2 * level / (mu[i] * mu[i] + kap2);
    return out;
}

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Knuth's product-of-uniforms sampler; fine for the O(1) bin means used here.
inline long poisson_knuth(double mean, std::mt19937_64& rng) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    long k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

}  // namespace detail

// Empirical counting statistics from simulated Poisson arrivals.
struct EmpiricalCounts {
    struct Port {
        double total = 0.0;
        double mean_rate = 0.0;
        double mean_rate_stderr = 0.0;
        std::optional<double> q_hat;
        double q_stderr = 0.0;
        long n_bins = 0;
    };
    Port port1, port2;
    double horizon = 0.0;
    std::uint64_t seed = 0;
};

// Simulates the two independent Poisson counting processes of the fixed
// mirror baseline over [0, horizon). Counts are accumulated in bins of about
// one expected count each; the Mandel estimate is s^2/mean - 1 over bins,
// with a batch-means standard error.
inline EmpiricalCounts simulate_baseline_counts(const ModelConfig& cfg, double horizon,
                                                std::uint64_t seed) {
    const CountingStats base = baseline_fixed_mirror(cfg);
    EmpiricalCounts out;
    out.horizon = horizon;
    out.seed = seed;
    const double rates[2] = {base.n1, base.n2};
    EmpiricalCounts::Port* ports[2] = {&out.port1, &out.port2};

    for (int p = 0; p < 2; ++p) {
        auto& port = *ports[p];
        const double rate = rates[p];
        if (rate <= 0.0) {
            port.q_hat = std::nullopt;
            continue;
        }
        const double bin_dt = 1.0 / rate;  // one expected count per bin
        const long n_bins = static_cast<long>(std::floor(horizon / bin_dt));
        const double mean_per_bin = rate * bin_dt;
        std::mt19937_64 rng(detail::stream_seed(seed, static_cast<std::uint64_t>(p)));

        std::vector<long> counts(n_bins);
        double total = 0.0;
        for (long i = 0; i < n_bins; ++i) {
            counts[i] = detail::poisson_knuth(mean_per_bin, rng);
            total += static_cast<double>(counts[i]);
        }
        // leftover fraction of the horizon, so the total covers [0, horizon)
        const double leftover = horizon - n_bins * bin_dt;
        total += static_cast<double>(detail::poisson_knuth(rate * leftover, rng));

        port.total = total;
        port.n_bins = n_bins;
        port.mean_rate = total / horizon;
        port.mean_rate_stderr = std::sqrt(std::max(total, 1.0)) / horizon;

        double mean = 0.0;
        for (long c : counts) mean += static_cast<double>(c);
        mean /= static_cast<double>(n_bins);
        double var = 0.0;
        for (long c : counts) {
            const double d = static_cast<double>(c) - mean;
            var += d * d;
        }
        var /= static_cast<double>(n_bins - 1);
        if (mean > 0.0) {
            port.q_hat = var / mean - 1.0;
            // batch means over 50 groups
            const int n_groups = 50;
            const long per = n_bins / n_groups;
            std::vector<double> qg;
            for (int gidx = 0; gidx < n_groups && per > 1; ++gidx) {
                double gm = 0.0, gv = 0.0;
                for (long i = gidx * per; i < (gidx + 1) * per; ++i)
                    gm += static_cast<double>(counts[i]);
                gm /= static_cast<double>(per);
                for (long i = gidx * per; i < (gidx + 1) * per; ++i) {
                    const double d = static_cast<double>(counts[i]) - gm;
                    gv += d * d;
                }
                gv /= static_cast<double>(per - 1);
                if (gm > 0.0) qg.push_back(gv / gm - 1.0);
            }
            if (qg.size() > 1) {
                double qm = 0.0;
                for (double q : qg) qm += q;
                qm /= static_cast<double>(qg.size());
                double qv = 0.0;
                for (double q : qg) qv += (q - qm) * (q - qm);
                qv /= static_cast<double>(qg.size() - 1);
                port.q_stderr = std::sqrt(qv / static_cast<double>(qg.size()));
            }
        }
    }
    return out;
}

}  // namespace mzo
