#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "mzo/detail/cmatrix.hpp"
#include "mzo/detail/math.hpp"
#include "mzo/model.hpp"

namespace mzo {

// Multichannel coherent amplitude sampled on a shared time grid.
struct CoherentAmplitude {
    std::vector<double> grid;
    std::vector<std::vector<cplx>> channels;

    std::size_t n_channels() const { return channels.size(); }

    static CoherentAmplitude zero(std::vector<double> grid, std::size_t n_ch) {
        CoherentAmplitude f;
        f.channels.assign(n_ch, std::vector<cplx>(grid.size(), cplx{}));
        f.grid = std::move(grid);
        return f;
    }

    double total_power() const {
        double e = 0.0;
        for (const auto& ch : channels)
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                const double dt = grid[i + 1] - grid[i];
                e += 0.5 * dt * (std::norm(ch[i]) + std::norm(ch[i + 1]));
            }
        return e;
    }
};

namespace detail {

inline void check_same_grid(const std::vector<double>& a, const std::vector<double>& b) {
    if (a != b) throw GridMismatchError("weyl: operands sampled on different time grids");
}

inline cplx grid_inner(const CoherentAmplitude& a, const CoherentAmplitude& b) {
    check_same_grid(a.grid, b.grid);
    if (a.n_channels() != b.n_channels())
        throw GridMismatchError("weyl: channel count mismatch");
    cplx acc{};
    for (std::size_t c = 0; c < a.n_channels(); ++c)
        for (std::size_t i = 0; i + 1 < a.grid.size(); ++i) {
            const double dt = a.grid[i + 1] - a.grid[i];
            acc += 0.5 * dt *
                   (std::conj(a.channels[c][i]) * b.channels[c][i] +
                    std::conj(a.channels[c][i + 1]) * b.channels[c][i + 1]);
        }
    return acc;
}

}  // namespace detail

// Generalized Weyl operator, restricted to time-constant channel mixing:
// a global phase z, a displacement g, and a d x d unitary V, acting on
// coherent amplitudes as  z W(g; V) e(f) = z e^{i Im<Vf|g>} e(Vf + g).
struct WeylElement {
    cplx phase{1.0, 0.0};
    CoherentAmplitude displacement;
    detail::CMat mixing;

    std::size_t dim() const { return mixing.rows(); }

    double mixing_unitarity_defect() const {
        return (mixing.adjoint() * mixing).max_abs_diff_identity();
    }
};

inline WeylElement weyl_identity(std::vector<double> grid, std::size_t dim) {
    WeylElement w;
    w.displacement = CoherentAmplitude::zero(std::move(grid), dim);
    w.mixing = detail::CMat::identity(dim);
    return w;
}

inline CoherentAmplitude apply_mixing(const detail::CMat& v, const CoherentAmplitude& f) {
    CoherentAmplitude out = CoherentAmplitude::zero(f.grid, f.n_channels());
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) {
            const cplx vij = v(i, j);
            if (vij == cplx{}) continue;
            for (std::size_t k = 0; k < f.grid.size(); ++k)
                out.channels[i][k] += vij * f.channels[j][k];
        }
    return out;
}

// Composition  W(h;U) W(g;V) = e^{-i Im<h|Ug>} W(h + Ug; UV); the first
// argument acts after the second.
inline WeylElement compose(const WeylElement& w1, const WeylElement& w2) {
    detail::check_same_grid(w1.displacement.grid, w2.displacement.grid);
    if (w1.dim() != w2.dim()) throw GridMismatchError("weyl: channel count mismatch");
    CoherentAmplitude ug = apply_mixing(w1.mixing, w2.displacement);
    WeylElement out;
    const cplx im = detail::grid_inner(w1.displacement, ug);
    out.phase = w1.phase * w2.phase * std::exp(cplx{0.0, -im.imag()});
    out.displacement = w1.displacement;
    for (std::size_t c = 0; c < ug.n_channels(); ++c)
        for (std::size_t k = 0; k < ug.grid.size(); ++k)
            out.displacement.channels[c][k] += ug.channels[c][k];
    out.mixing = w1.mixing * w2.mixing;
    return out;
}

inline WeylElement inverse(const WeylElement& w) {
    WeylElement out;
    out.mixing = w.mixing.adjoint();
    CoherentAmplitude vg = apply_mixing(out.mixing, w.displacement);
    out.displacement = CoherentAmplitude::zero(w.displacement.grid, w.dim());
    for (std::size_t c = 0; c < vg.n_channels(); ++c)
        for (std::size_t k = 0; k < vg.grid.size(); ++k)
            out.displacement.channels[c][k] = -vg.channels[c][k];
    out.phase = std::conj(w.phase);
    return out;
}

// Action on a coherent amplitude: returns the scalar phase picked up and the
// transformed amplitude Vf + g.
inline std::pair<cplx, CoherentAmplitude> apply_to_coherent(const WeylElement& w,
                                                            const CoherentAmplitude& f) {
    detail::check_same_grid(w.displacement.grid, f.grid);
    if (w.dim() != f.n_channels()) throw GridMismatchError("weyl: channel count mismatch");
    CoherentAmplitude vf = apply_mixing(w.mixing, f);
    const cplx im = detail::grid_inner(vf, w.displacement);
    const cplx phase = w.phase * std::exp(cplx{0.0, im.imag()});
    for (std::size_t c = 0; c < vf.n_channels(); ++c)
        for (std::size_t k = 0; k < vf.grid.size(); ++k)
            vf.channels[c][k] += w.displacement.channels[c][k];
    return {phase, vf};
}

// Beam splitter of transmittance eta on channels (a, b) of a dim-channel
// circuit; V = [[sqrt(eta), i sqrt(1-eta)], [i sqrt(1-eta), sqrt(eta)]].
inline WeylElement beam_splitter(double eta, std::vector<double> grid, std::size_t dim = 2,
                                 std::size_t a = 0, std::size_t b = 1) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("beam_splitter: eta must be in [0,1]");
    WeylElement w = weyl_identity(std::move(grid), dim);
    const double r = std::sqrt(eta), s = std::sqrt(1.0 - eta);
    w.mixing(a, a) = r;
    w.mixing(b, b) = r;
    w.mixing(a, b) = cplx{0.0, s};
    w.mixing(b, a) = cplx{0.0, s};
    return w;
}

inline WeylElement phase_shifter(double psi, std::size_t channel, std::vector<double> grid,
                                 std::size_t dim = 2) {
    WeylElement w = weyl_identity(std::move(grid), dim);
    w.mixing(channel, channel) = std::exp(cplx{0.0, psi});
    return w;
}

// Coherent amplitudes along the fixed-mirror interferometer.
struct MziFixedAmplitudes {
    CoherentAmplitude b;  // after BS1
    CoherentAmplitude c;  // after phase shifter / fixed mirror
    CoherentAmplitude d;  // after BS2, the detected wires
};

// Propagates the input through BS1 -> (fixed mirror phi on wire 1, phase
// shifter psi on wire 2) -> balanced BS2. Port intensities |d_j(t)|^2
// reproduce the fixed-mirror baseline rates pointwise.
inline MziFixedAmplitudes evaluate_mzi_fixed(const ModelConfig& cfg, const CoherentAmplitude& f_in) {
    if (f_in.n_channels() != 2) throw GridMismatchError("evaluate_mzi_fixed: need 2 channels");
    const auto& grid = f_in.grid;
    WeylElement bs1 = beam_splitter(cfg.optical.eta, grid);
    WeylElement mirror = phase_shifter(cfg.optical.phi, 0, grid);
    WeylElement ps = phase_shifter(cfg.optical.psi, 1, grid);
    WeylElement bs2 = beam_splitter(0.5, grid);

    MziFixedAmplitudes out;
    out.b = apply_to_coherent(bs1, f_in).second;
    out.c = apply_to_coherent(ps, apply_to_coherent(mirror, out.b).second).second;
    out.d = apply_to_coherent(bs2, out.c).second;
    return out;
}

inline std::vector<double> port_intensity(const CoherentAmplitude& f, std::size_t channel) {
    std::vector<double> out(f.grid.size());
    for (std::size_t k = 0; k < f.grid.size(); ++k) out[k] = std::norm(f.channels[channel][k]);
    return out;
}

// Default sampling grid: 2048 samples across one detector time constant.
inline std::vector<double> default_grid(const DetectorParams& det, std::size_t n = 2048) {
    return detail::linspace(0.0, 1.0 / det.kappa, n);
}

}  // namespace mzo
