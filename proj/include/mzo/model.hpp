#pragma once

#include <cmath>
#include <complex>

#include "mzo/detail/math.hpp"
#include "mzo/errors.hpp"
#include "mzo/noise.hpp"

namespace mzo {

// Mechanical oscillator inputs, in units with hbar = 1 and frequencies
// measured against the bare frequency (Omega_m = 1 is the recommended unit).
struct MechanicalParams {
    double omega_bare = 1.0;  // bare angular frequency Omega_m > 0
    double gamma = 0.2;       // damping rate gamma_m > 0
    double v = 0.1;           // dimensionless radiation-pressure kick per photon

    void validate() const {
        if (!(omega_bare > 0.0)) throw ConfigError("mechanical: Omega_m must be > 0");
        if (!(gamma > 0.0)) throw ConfigError("mechanical: gamma_m must be > 0");
        if (!(omega_bare * omega_bare > 0.25 * gamma * gamma))
            throw RegimeError("mechanical: underdamped regime requires Omega_m^2 > gamma_m^2/4");
    }
};

struct OpticalParams {
    double lambda_sq = 1000.0;  // |lambda|^2, mean photon flux of the laser
    double eta = 0.1;           // BS1 transmittance, 0 < eta < 1
    double psi = 0.0;           // tunable phase shifter, [0, 2pi)
    double phi = 0.0;           // reflection phase of the moving mirror, [0, 2pi)

    void validate() const {
        if (!(lambda_sq >= 0.0)) throw ConfigError("optical: |lambda|^2 must be >= 0");
        if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("optical: eta must lie in (0,1)");
    }
};

struct DetectorParams {
    double c_gain = 1.0;  // current per count, c > 0
    double kappa = 1.0;   // detector bandwidth, kappa > 0

    void validate() const {
        if (!(c_gain > 0.0) || !(kappa > 0.0))
            throw ConfigError("detector: c and kappa must be > 0");
    }
};

// Damped frequency and the unit-modulus phase factor of the mechanical mode.
struct DerivedMechanical {
    double omega_damped = 0.0;   // omega_m = sqrt(Omega_m^2 - gamma_m^2/4)
    cplx tau{1.0, 0.0};          // (omega_m - i gamma_m/2)/Omega_m, |tau| = 1
};

inline DerivedMechanical derive_mechanical(const MechanicalParams& p) {
    p.validate();
    DerivedMechanical d;
    d.omega_damped = std::sqrt(p.omega_bare * p.omega_bare - 0.25 * p.gamma * p.gamma);
    d.tau = cplx{d.omega_damped, -0.5 * p.gamma} / p.omega_bare;
    return d;
}

// chi = 2 sqrt(eta (1-eta)), the interference contrast of the two ports.
inline double chi(const OpticalParams& opt) {
    return 2.0 * std::sqrt(opt.eta * (1.0 - opt.eta));
}

// Full physical input set. Immutable after construction by convention; all
// downstream machinery copies what it needs.
struct ModelConfig {
    MechanicalParams mechanical;
    OpticalParams optical;
    DetectorParams detector;
    NoiseSpectrum noise = NoiseSpectrum::vacuum();

    void validate() const {
        mechanical.validate();
        optical.validate();
        detector.validate();
    }
};

}  // namespace mzo
