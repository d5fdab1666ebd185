#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mzo/detail/math.hpp"
#include "mzo/errors.hpp"
#include "mzo/model.hpp"
#include "mzo/oracles.hpp"
#include "mzo/quadrature.hpp"

namespace mzo {

struct GridSpec {
    double mu_min = -3.0;
    double mu_max = 3.0;
    int n_points = 121;

    void validate() const {
        if (n_points < 2) throw ConfigError("grid: n_points >= 2");
        if (!(mu_min < mu_max)) throw ConfigError("grid: mu_min < mu_max");
    }

    std::vector<double> make() const {
        validate();
        return detail::linspace(mu_min, mu_max, static_cast<std::size_t>(n_points));
    }
};

struct McSpec {
    std::uint64_t seed = 20240915;
    int n_samples = 10000;
    double horizon = 0.0;  // 0: commands pick a default

    void validate() const {
        if (n_samples < 1) throw ConfigError("mc: n_samples >= 1");
    }
};

struct OutputSpec {
    std::string format = "csv";  // csv | json
    std::string path = "-";

    void validate() const {
        if (format != "csv" && format != "json")
            throw ConfigError("output: format must be csv or json");
    }
};

// Full run configuration: physical model + numerics + grids + output.
struct RunConfig {
    int schema_version = 1;
    ModelConfig model;
    QuadConfig quad;
    GridSpec grid;
    McSpec mc;
    CollisionConfig collision;
    OutputSpec output;

    void validate() const {
        model.validate();
        quad.validate();
        grid.validate();
        mc.validate();
        output.validate();
    }
};

namespace detail {

using njson = nlohmann::json;

inline void reject_unknown(const njson& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
void get_if(const njson& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline NoiseSpectrum parse_noise(const njson& j, const MechanicalParams& mech) {
    std::string kind = j.value("kind", std::string("vacuum"));
    if (kind == "vacuum") {
        reject_unknown(j, {"kind"}, "model.noise");
        return NoiseSpectrum::vacuum();
    }
    if (kind == "constant") {
        reject_unknown(j, {"kind", "n0", "cutoff"}, "model.noise");
        return NoiseSpectrum::constant(j.value("n0", 1.0), j.value("cutoff", 50.0));
    }
    if (kind == "bose_einstein") {
        reject_unknown(j, {"kind", "t_b", "cutoff", "nu_min"}, "model.noise");
        const double om = derive_mechanical(mech).omega_damped;
        const double nu_min = j.value("nu_min", 1e-3 * om);
        return NoiseSpectrum::bose_einstein(j.value("t_b", 1.0), j.value("cutoff", 50.0), nu_min);
    }
    if (kind == "tabulated") {
        reject_unknown(j, {"kind", "path"}, "model.noise");
        const std::string path = j.at("path").get<std::string>();
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open noise table " + path);
        std::vector<std::pair<double, double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            for (auto& c : line)
                if (c == ',') c = ' ';
            std::istringstream ss(line);
            double nu, n;
            if (ss >> nu >> n) rows.emplace_back(nu, n);
        }
        return NoiseSpectrum::tabulated(std::move(rows), path);
    }
    throw ConfigError("config: unknown noise kind '" + kind + "'");
}

inline njson noise_to_json(const NoiseSpectrum& n) {
    njson j;
    switch (n.kind()) {
        case NoiseSpectrum::Kind::vacuum:
            j["kind"] = "vacuum";
            break;
        case NoiseSpectrum::Kind::constant:
            j["kind"] = "constant";
            j["n0"] = n.n0();
            j["cutoff"] = n.support_hi();
            break;
        case NoiseSpectrum::Kind::bose_einstein:
            j["kind"] = "bose_einstein";
            j["t_b"] = n.t_b();
            j["cutoff"] = n.support_hi();
            j["nu_min"] = n.support_lo();
            break;
        case NoiseSpectrum::Kind::tabulated:
            j["kind"] = "tabulated";
            j["path"] = n.source_path();
            break;
    }
    return j;
}

}  // namespace detail

// Parses (and validates) a full run configuration; unknown keys anywhere are
// errors, so published configs stay reproducible.
class ConfigIO {
  public:
    static RunConfig parse(const nlohmann::json& j) {
        using detail::get_if;
        using detail::reject_unknown;
        if (!j.is_object()) throw ConfigError("config: top level must be an object");
        reject_unknown(j, {"schema_version", "model", "quad", "grid", "mc", "collision", "output"},
                       "top level");
        RunConfig c;
        if (!j.contains("schema_version")) throw ConfigError("config: schema_version is required");
        c.schema_version = j.at("schema_version").get<int>();
        if (c.schema_version != 1) throw ConfigError("config: unsupported schema_version");

        if (j.contains("model")) {
            const auto& jm = j.at("model");
            reject_unknown(jm, {"mechanical", "optical", "detector", "noise"}, "model");
            if (jm.contains("mechanical")) {
                const auto& q = jm.at("mechanical");
                reject_unknown(q, {"omega_bare", "gamma", "v"}, "model.mechanical");
                get_if(q, "omega_bare", c.model.mechanical.omega_bare);
                get_if(q, "gamma", c.model.mechanical.gamma);
                get_if(q, "v", c.model.mechanical.v);
            }
            if (jm.contains("optical")) {
                const auto& q = jm.at("optical");
                reject_unknown(q, {"lambda_sq", "eta", "psi", "phi"}, "model.optical");
                get_if(q, "lambda_sq", c.model.optical.lambda_sq);
                get_if(q, "eta", c.model.optical.eta);
                get_if(q, "psi", c.model.optical.psi);
                get_if(q, "phi", c.model.optical.phi);
            }
            if (jm.contains("detector")) {
                const auto& q = jm.at("detector");
                reject_unknown(q, {"c_gain", "kappa"}, "model.detector");
                get_if(q, "c_gain", c.model.detector.c_gain);
                get_if(q, "kappa", c.model.detector.kappa);
            }
            if (jm.contains("noise"))
                c.model.noise = detail::parse_noise(jm.at("noise"), c.model.mechanical);
        }
        if (j.contains("quad")) {
            const auto& q = j.at("quad");
            reject_unknown(q, {"rel_tol", "abs_tol", "tail_eps", "max_panels"}, "quad");
            get_if(q, "rel_tol", c.quad.rel_tol);
            get_if(q, "abs_tol", c.quad.abs_tol);
            get_if(q, "tail_eps", c.quad.tail_eps);
            get_if(q, "max_panels", c.quad.max_panels);
        }
        if (j.contains("grid")) {
            const auto& q = j.at("grid");
            reject_unknown(q, {"mu_min", "mu_max", "n_points"}, "grid");
            get_if(q, "mu_min", c.grid.mu_min);
            get_if(q, "mu_max", c.grid.mu_max);
            get_if(q, "n_points", c.grid.n_points);
        }
        if (j.contains("mc")) {
            const auto& q = j.at("mc");
            reject_unknown(q, {"seed", "n_samples", "horizon"}, "mc");
            get_if(q, "seed", c.mc.seed);
            get_if(q, "n_samples", c.mc.n_samples);
            get_if(q, "horizon", c.mc.horizon);
        }
        if (j.contains("collision")) {
            const auto& q = j.at("collision");
            reject_unknown(q,
                           {"dt", "t_end", "dim_sys", "dim_field", "dim_th", "trotter_order",
                            "q0", "p0", "record_every", "positivity_every", "tail_tol"},
                           "collision");
            get_if(q, "dt", c.collision.dt);
            get_if(q, "t_end", c.collision.t_end);
            get_if(q, "dim_sys", c.collision.dim_sys);
            get_if(q, "dim_field", c.collision.dim_field);
            get_if(q, "dim_th", c.collision.dim_th);
            get_if(q, "trotter_order", c.collision.trotter_order);
            get_if(q, "q0", c.collision.q0);
            get_if(q, "p0", c.collision.p0);
            get_if(q, "record_every", c.collision.record_every);
            get_if(q, "positivity_every", c.collision.positivity_every);
            get_if(q, "tail_tol", c.collision.tail_tol);
        }
        if (j.contains("output")) {
            const auto& q = j.at("output");
            reject_unknown(q, {"format", "path"}, "output");
            get_if(q, "format", c.output.format);
            get_if(q, "path", c.output.path);
        }
        c.validate();
        return c;
    }

    static nlohmann::json serialize(const RunConfig& c) {
        nlohmann::json j;
        j["schema_version"] = c.schema_version;
        j["model"]["mechanical"] = {{"omega_bare", c.model.mechanical.omega_bare},
                                    {"gamma", c.model.mechanical.gamma},
                                    {"v", c.model.mechanical.v}};
        j["model"]["optical"] = {{"lambda_sq", c.model.optical.lambda_sq},
                                 {"eta", c.model.optical.eta},
                                 {"psi", c.model.optical.psi},
                                 {"phi", c.model.optical.phi}};
        j["model"]["detector"] = {{"c_gain", c.model.detector.c_gain},
                                  {"kappa", c.model.detector.kappa}};
        j["model"]["noise"] = detail::noise_to_json(c.model.noise);
        j["quad"] = {{"rel_tol", c.quad.rel_tol},
                     {"abs_tol", c.quad.abs_tol},
                     {"tail_eps", c.quad.tail_eps},
                     {"max_panels", c.quad.max_panels}};
        j["grid"] = {{"mu_min", c.grid.mu_min},
                     {"mu_max", c.grid.mu_max},
                     {"n_points", c.grid.n_points}};
        j["mc"] = {{"seed", c.mc.seed}, {"n_samples", c.mc.n_samples}, {"horizon", c.mc.horizon}};
        j["collision"] = {{"dt", c.collision.dt},
                          {"t_end", c.collision.t_end},
                          {"dim_sys", c.collision.dim_sys},
                          {"dim_field", c.collision.dim_field},
                          {"dim_th", c.collision.dim_th},
                          {"trotter_order", c.collision.trotter_order},
                          {"q0", c.collision.q0},
                          {"p0", c.collision.p0},
                          {"record_every", c.collision.record_every},
                          {"positivity_every", c.collision.positivity_every},
                          {"tail_tol", c.collision.tail_tol}};
        j["output"] = {{"format", c.output.format}, {"path", c.output.path}};
        return j;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
        }
        return parse(j);
    }

    // Dotted-path override, e.g. "model.optical.psi=1.25". The value is
    // parsed as JSON when possible, else taken as a string.
    static void apply_override(nlohmann::json& j, const std::string& kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key.path=value");
        std::string path = kv.substr(0, eq);
        std::string value = kv.substr(eq + 1);
        nlohmann::json* node = &j;
        std::size_t pos = 0;
        while (true) {
            const auto dot = path.find('.', pos);
            const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
            if (key.empty()) throw ConfigError("--set: empty key component");
            if (dot == std::string::npos) {
                nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
                (*node)[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
                break;
            }
            node = &(*node)[key];
            pos = dot + 1;
        }
    }

    // Identifies the computation: everything except the output destination.
    static std::uint64_t hash(const RunConfig& c) {
        nlohmann::json j = serialize(c);
        j.erase("output");
        return detail::fnv1a64(j.dump());
    }

};

}  // namespace mzo
