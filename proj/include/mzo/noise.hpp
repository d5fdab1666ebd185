#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mzo/errors.hpp"

namespace mzo {

// Noise spectral density N(nu) of the thermal bath. All presets are
// nonnegative and absolutely integrable (compact support enforced by
// cutoffs); tabulated spectra interpolate linearly and vanish off the table.
class NoiseSpectrum {
  public:
    enum class Kind { vacuum, constant, bose_einstein, tabulated };

    static NoiseSpectrum vacuum() { return NoiseSpectrum(); }

    static NoiseSpectrum constant(double n0, double cutoff) {
        if (n0 < 0.0) throw ConfigError("NoiseSpectrum: N0 must be >= 0");
        if (!(cutoff > 0.0)) throw ConfigError("NoiseSpectrum: cutoff must be > 0");
        NoiseSpectrum n;
        n.kind_ = Kind::constant;
        n.n0_ = n0;
        n.lo_ = -cutoff;
        n.hi_ = cutoff;
        return n;
    }

    // Bose-Einstein occupation on (nu_min, cutoff], zero elsewhere. The
    // infrared cut nu_min keeps N integrable; pick nu_min = 1e-3 * omega_m.
    static NoiseSpectrum bose_einstein(double t_b, double cutoff, double nu_min) {
        if (!(t_b > 0.0)) throw ConfigError("NoiseSpectrum: bath temperature must be > 0");
        if (!(nu_min > 0.0) || !(cutoff > nu_min))
            throw ConfigError("NoiseSpectrum: need 0 < nu_min < cutoff");
        NoiseSpectrum n;
        n.kind_ = Kind::bose_einstein;
        n.t_b_ = t_b;
        n.lo_ = nu_min;
        n.hi_ = cutoff;
        return n;
    }

    static NoiseSpectrum tabulated(std::vector<std::pair<double, double>> samples,
                                   std::string source_path = {}) {
        if (samples.size() < 2) throw ConfigError("NoiseSpectrum: table needs >= 2 samples");
        std::sort(samples.begin(), samples.end());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (samples[i].second < 0.0) throw ConfigError("NoiseSpectrum: N(nu) must be >= 0");
            if (i > 0 && !(samples[i].first > samples[i - 1].first))
                throw ConfigError("NoiseSpectrum: table frequencies must be distinct");
        }
        NoiseSpectrum n;
        n.kind_ = Kind::tabulated;
        n.table_ = std::move(samples);
        n.lo_ = n.table_.front().first;
        n.hi_ = n.table_.back().first;
        n.source_path_ = std::move(source_path);
        return n;
    }

    Kind kind() const { return kind_; }
    bool is_vacuum() const { return kind_ == Kind::vacuum; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    double n0() const { return n0_; }
    double t_b() const { return t_b_; }
    const std::vector<std::pair<double, double>>& table() const { return table_; }
    const std::string& source_path() const { return source_path_; }

    double value(double nu) const {
        switch (kind_) {
            case Kind::vacuum:
                return 0.0;
            case Kind::constant:
                return (nu >= lo_ && nu <= hi_) ? n0_ : 0.0;
            case Kind::bose_einstein:
                if (nu <= lo_ || nu > hi_) return 0.0;
                return 1.0 / std::expm1(nu / t_b_);
            case Kind::tabulated: {
                if (nu < lo_ || nu > hi_) return 0.0;
                auto it = std::upper_bound(table_.begin(), table_.end(),
                                           std::make_pair(nu, 0.0),
                                           [](const auto& a, const auto& b) { return a.first < b.first; });
                if (it == table_.begin()) return it->second;
                if (it == table_.end()) return table_.back().second;
                const auto& [x1, y1] = *(it - 1);
                const auto& [x2, y2] = *it;
                return y1 + (y2 - y1) * (nu - x1) / (x2 - x1);
            }
        }
        return 0.0;
    }

    // Integration breakpoints: support edges plus table knots.
    std::vector<double> breakpoints() const {
        std::vector<double> b;
        if (kind_ == Kind::vacuum) return b;
        if (kind_ == Kind::tabulated) {
            for (const auto& [x, y] : table_) b.push_back(x);
        } else {
            b = {lo_, hi_};
        }
        return b;
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::vacuum: return "vacuum";
            case Kind::constant: return "constant(N0=" + std::to_string(n0_) + ")";
            case Kind::bose_einstein: return "bose_einstein(T=" + std::to_string(t_b_) + ")";
            case Kind::tabulated: return "tabulated(" + std::to_string(table_.size()) + " rows)";
        }
        return "?";
    }

  private:
    NoiseSpectrum() = default;
    Kind kind_ = Kind::vacuum;
    double n0_ = 0.0;
    double t_b_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::vector<std::pair<double, double>> table_;
    std::string source_path_;
};

}  // namespace mzo
