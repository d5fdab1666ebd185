// Command-line front end: loads a JSON run configuration, dispatches one of
// the analysis commands, and emits CSV/JSON (optionally SVG) results.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mzo/config.hpp"
#include "mzo/counting.hpp"
#include "mzo/oracles.hpp"
#include "mzo/oscillator.hpp"
#include "mzo/report.hpp"
#include "mzo/spectra_approx.hpp"
#include "mzo/spectra_exact.hpp"

using namespace mzo;

namespace {

struct CliOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string format;
    bool svg = false;
    std::optional<std::uint64_t> seed;
    bool exact_ref = true;
};

RunConfig load_with_overrides(const CliOptions& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("config: cannot open " + opt.config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    for (const auto& kv : opt.overrides) ConfigIO::apply_override(j, kv);
    RunConfig rc = ConfigIO::parse(j);
    if (!opt.out_path.empty()) rc.output.path = opt.out_path;
    if (!opt.format.empty()) rc.output.format = opt.format;
    if (opt.seed) rc.mc.seed = *opt.seed;
    return rc;
}

void stamp(Table& t, const RunConfig& rc, const std::string& quantity) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(ConfigIO::hash(rc)));
    t.add_meta("quantity", quantity);
    t.add_meta("units", "frequencies and rates in units of Omega_m (hbar = 1)");
    t.add_meta("config_hash", std::string(buf));
}

void emit(const Table& t, const RunConfig& rc, const CliOptions& opt,
          const std::vector<std::size_t>& svg_cols = {}) {
    auto write_all = [&](std::ostream& os) {
        if (rc.output.format == "json")
            t.write_json(os);
        else
            t.write_csv(os);
    };
    if (rc.output.path == "-") {
        write_all(std::cout);
    } else {
        std::ofstream os(rc.output.path);
        if (!os) throw ConfigError("output: cannot open " + rc.output.path);
        write_all(os);
    }
    if (opt.svg && !svg_cols.empty()) {
        if (rc.output.path == "-")
            throw ConfigError("output: --svg needs --out <file>");
        std::ofstream os(rc.output.path + ".svg");
        t.write_svg(os, 0, svg_cols);
    }
}

void add_regime_meta(Table& t, const RegimeReport& r) {
    t.add_meta("regime_weak_cond1", r.weak_cond1);
    t.add_meta("regime_weak_cond2", r.weak_cond2);
    t.add_meta("regime_strong_cond1", r.strong_cond1);
    t.add_meta("regime_strong_cond2", r.strong_cond2);
    t.add_meta("regime_flags", std::string(r.weak1_ok ? "weak1" : "!weak1") + " " +
                                   (r.weak2_ok ? "weak2" : "!weak2") + " " +
                                   (r.strong1_ok ? "strong1" : "!strong1") + " " +
                                   (r.strong2_ok ? "strong2" : "!strong2"));
}

int cmd_derive(const RunConfig& rc, const CliOptions& opt) {
    ExactSpectra ex(rc.model, rc.quad);
    const auto& dc = ex.constants();
    const auto dm = ex.kernels().derived();
    const auto rates = ex.mean_rates();
    const auto zx = ex.z_and_extremes();
    const auto eq = equilibrium_moments(rc.model, dc.n_eff);
    Table t;
    stamp(t, rc, "derived constants");
    add_regime_meta(t, ApproxSpectra(rc.model).regime_check());
    t.columns = {"name_id", "value"};
    std::vector<std::pair<std::string, double>> kv = {
        {"omega_damped", dm.omega_damped},
        {"tau_re", dm.tau.real()},
        {"tau_im", dm.tau.imag()},
        {"chi", chi(rc.model.optical)},
        {"n_eff", dc.n_eff},
        {"K", dc.k_exp},
        {"M", dc.m_exp},
        {"theta", dc.theta},
        {"alpha_phase", dc.alpha_phase},
        {"Z_re", dc.z.real()},
        {"Z_im", dc.z.imag()},
        {"Z_abs", std::abs(dc.z)},
        {"psi0", zx.psi0},
        {"sigma_minus0_min", zx.sigma_min},
        {"sigma_minus0_max", zx.sigma_max},
        {"degenerate_psi0", zx.degenerate ? 1.0 : 0.0},
        {"n1", rates.n1},
        {"n2", rates.n2},
        {"q_inf", eq.q_mean},
        {"q_var", eq.q_var},
        {"p_var", eq.p_var},
        {"qp_anticomm", eq.qp_anticomm},
    };
    int id = 0;
    for (const auto& [name, value] : kv) {
        t.add_meta("row_" + std::to_string(id) + "_name", name);
        t.rows.push_back({static_cast<double>(id), value});
        ++id;
    }
    emit(t, rc, opt);
    return 0;
}

int cmd_spectra_exact(const RunConfig& rc, const CliOptions& opt) {
    ExactSpectra ex(rc.model, rc.quad);
    const auto mu = rc.grid.make();
    const double psi = rc.model.optical.psi;
    auto s_m0 = ex.sigma_minus0(mu);
    auto s_mp = ex.sigma_minus_psi(mu, psi);
    auto s_0 = ex.sigma_zero(mu);
    auto zx = ex.z_and_extremes();
    Table t;
    stamp(t, rc, "exact reduced spectra");
    add_regime_meta(t, ApproxSpectra(rc.model).regime_check());
    t.add_meta("psi", psi);
    t.add_meta("K", ex.constants().k_exp);
    t.add_meta("M", ex.constants().m_exp);
    t.add_meta("theta", ex.constants().theta);
    t.add_meta("Z_abs", std::abs(zx.z));
    t.add_meta("Z_err_estimate", ex.z_err_estimate());
    t.add_meta("psi0", zx.psi0);
    t.add_meta("sigma_minus0_min", zx.sigma_min);
    t.add_meta("sigma_minus0_max", zx.sigma_max);
    t.add_meta("sigma_plus", 0.0);
    t.columns = {"mu",      "sigma_minus0", "sigma_minus_psi", "sigma_minus",
                 "sigma_0", "err_minus",    "err_0"};
    for (std::size_t i = 0; i < mu.size(); ++i)
        t.rows.push_back({mu[i], s_m0.values[i], s_mp.values[i],
                          s_m0.values[i] + s_mp.values[i], s_0.values[i],
                          s_m0.errs[i] + s_mp.errs[i], s_0.errs[i]});
    emit(t, rc, opt, {1, 2, 3, 4});
    return 0;
}

int cmd_spectra_approx(const RunConfig& rc, const CliOptions& opt) {
    ApproxSpectra ap(rc.model);
    const auto mu = rc.grid.make();
    auto sm = ap.sigma_minus(mu, rc.model.optical.psi);
    auto s0 = ap.sigma_zero(mu);
    auto [lo, hi] = ap.delta2_bounds(mu);
    auto p0 = ap.psi0();
    Table t;
    stamp(t, rc, "weak-interaction approximate spectra");
    add_regime_meta(t, ap.regime_check());
    t.add_meta("psi", rc.model.optical.psi);
    t.add_meta("psi0", p0.psi0);
    t.add_meta("sigma_minus0_psi0", p0.sigma_min0);
    t.columns = {"mu", "sigma_minus", "sigma_0", "delta2_minus", "delta2_plus", "E"};
    for (std::size_t i = 0; i < mu.size(); ++i)
        t.rows.push_back(
            {mu[i], sm.values[i], s0.values[i], lo.values[i], hi.values[i], ap.e_factor(mu[i])});
    emit(t, rc, opt, {1, 2, 3, 4});
    return 0;
}

int cmd_intensity(const RunConfig& rc, const CliOptions& opt) {
    ExactSpectra ex(rc.model, rc.quad);
    const auto mu = rc.grid.make();
    const double psi = rc.model.optical.psi;
    auto s1 = ex.intensity(IntensityKind::port1, mu, psi);
    auto s2 = ex.intensity(IntensityKind::port2, mu, psi);
    auto sp = ex.intensity(IntensityKind::sum, mu, psi);
    auto sm = ex.intensity(IntensityKind::diff, mu, psi);
    Table t;
    stamp(t, rc, "intensity spectra of the output currents");
    add_regime_meta(t, ApproxSpectra(rc.model).regime_check());
    t.add_meta("psi", psi);
    t.columns = {"mu",
                 "S_port1_smooth",
                 "S_port2_smooth",
                 "S_sum_smooth",
                 "S_diff_smooth",
                 "S_port1_delta_weight",
                 "S_port2_delta_weight",
                 "S_sum_delta_weight",
                 "S_diff_delta_weight",
                 "err_port1",
                 "err_port2",
                 "err_diff"};
    for (std::size_t i = 0; i < mu.size(); ++i)
        t.rows.push_back({mu[i], s1.smooth.values[i], s2.smooth.values[i], sp.smooth.values[i],
                          sm.smooth.values[i], s1.delta_weight, s2.delta_weight, sp.delta_weight,
                          sm.delta_weight, s1.smooth.errs[i], s2.smooth.errs[i],
                          sm.smooth.errs[i]});
    emit(t, rc, opt, {1, 2, 3, 4});
    return 0;
}

int cmd_counting(const RunConfig& rc, const CliOptions& opt) {
    ExactSpectra ex(rc.model, rc.quad);
    const double psi = rc.model.optical.psi;
    auto sm = ex.sigma_minus({0.0}, psi);
    auto s0 = ex.sigma_zero({0.0});
    auto st = counting_stats(rc.model, ex.constants(), sm.values[0], s0.values[0]);
    Table t;
    stamp(t, rc, "asymptotic counting statistics (exact spectra path)");
    add_regime_meta(t, ApproxSpectra(rc.model).regime_check());
    t.add_meta("sigma_minus_0", sm.values[0]);
    t.add_meta("sigma_minus_0_err", sm.errs[0]);
    t.add_meta("sigma_zero_0", s0.values[0]);
    t.add_meta("sigma_zero_0_err", s0.errs[0]);
    t.columns = {"n1",      "n2",       "q1",           "q2",            "q_plus",
                 "q_minus", "cov_rate", "var_plus_rate", "var_minus_rate"};
    t.rows.push_back({st.n1, st.n2, st.q1.value_or(std::nan("")), st.q2.value_or(std::nan("")),
                      st.q_plus, st.q_minus, st.cov_rate, st.var_plus_rate, st.var_minus_rate});
    emit(t, rc, opt);
    return 0;
}

int cmd_baseline(const RunConfig& rc, const CliOptions& opt) {
    auto base = baseline_fixed_mirror(rc.model);
    const double horizon =
        rc.mc.horizon > 0.0
            ? rc.mc.horizon
            : 2.0e5 / std::max(rc.model.optical.lambda_sq, 1e-12);
    auto emp = simulate_baseline_counts(rc.model, horizon, rc.mc.seed);
    Table t;
    stamp(t, rc, "fixed-mirror baseline: analytic vs simulated Poisson counts");
    add_regime_meta(t, ApproxSpectra(rc.model).regime_check());
    t.add_meta("horizon", horizon);
    t.add_meta("seed", static_cast<double>(rc.mc.seed));
    t.columns = {"port", "n_analytic", "rate_empirical", "rate_stderr", "q_analytic",
                 "q_empirical", "q_stderr"};
    t.rows.push_back({1.0, base.n1, emp.port1.mean_rate, emp.port1.mean_rate_stderr, 0.0,
                      emp.port1.q_hat.value_or(std::nan("")), emp.port1.q_stderr});
    t.rows.push_back({2.0, base.n2, emp.port2.mean_rate, emp.port2.mean_rate_stderr, 0.0,
                      emp.port2.q_hat.value_or(std::nan("")), emp.port2.q_stderr});
    emit(t, rc, opt);
    return 0;
}

int cmd_oracle_thermal(const RunConfig& rc, const CliOptions& opt) {
    KernelSet ker(rc.model.mechanical, rc.model.noise, rc.quad);
    const double t_probe = 10.0 / rc.model.mechanical.gamma;
    auto mc = thermal_weyl_mc(ker, t_probe, rc.mc.n_samples, rc.mc.seed);
    const double k_exp = ker.prefactor() * (ker.n_eff() + 0.5);
    Table t;
    stamp(t, rc, "thermal Weyl moment: Monte Carlo vs exp(-K)");
    add_regime_meta(t, ApproxSpectra(rc.model).regime_check());
    t.add_meta("t_probe", t_probe);
    t.add_meta("n_samples", static_cast<double>(mc.n_samples));
    t.add_meta("seed", static_cast<double>(rc.mc.seed));
    t.columns = {"estimate_re", "estimate_im", "stderr", "exp_minus_K", "abs_dev", "dev_in_stderr"};
    const double ref = std::exp(-k_exp);
    const double dev = std::abs(mc.estimate - cplx{ref, 0.0});
    t.rows.push_back({mc.estimate.real(), mc.estimate.imag(), mc.stderr_est, ref, dev,
                      mc.stderr_est > 0.0 ? dev / mc.stderr_est : 0.0});
    emit(t, rc, opt);
    return 0;
}

int cmd_oracle_collision(const RunConfig& rc, const CliOptions& opt) {
    auto res = collision_run(rc.model, rc.collision);
    ExactSpectra ex(rc.model, rc.quad);
    const auto& dc = ex.constants();
    const auto eq = equilibrium_moments(rc.model, dc.n_eff);
    Table t;
    stamp(t, rc, "collision-model oracle time series (vacuum bath)");
    add_regime_meta(t, ApproxSpectra(rc.model).regime_check());
    t.add_meta("q_inf_ref", eq.q_mean);
    t.add_meta("p_var_ref", eq.p_var);
    t.add_meta("weyl_abs_ref", std::exp(-(dc.k_exp + dc.m_exp)));
    t.add_meta("max_trace_dev", res.max_trace_dev);
    t.add_meta("min_density_eig", res.min_density_eig);
    t.add_meta("dim_field_used", static_cast<double>(res.dim_field_used));
    t.columns = {"t", "q_mean", "p_mean", "q2_mean", "p2_mean", "weyl_abs", "weyl_arg"};
    for (std::size_t i = 0; i < res.t.size(); ++i)
        t.rows.push_back({res.t[i], res.q_mean[i], res.p_mean[i], res.q2_mean[i], res.p2_mean[i],
                          std::abs(res.weyl_mean[i]), std::arg(res.weyl_mean[i])});
    emit(t, rc, opt, {1, 2, 4});
    return 0;
}

int cmd_figures(const RunConfig& rc, const CliOptions& opt) {
    ApproxSpectra ap(rc.model);
    const auto mu = rc.grid.make();
    auto p0 = ap.psi0();
    const double psi1 = p0.psi0 + 0.5 * detail::pi;
    auto fig2_min = ap.sigma_minus(mu, p0.psi0);
    auto fig2_max = ap.sigma_minus(mu, psi1);
    auto [fig3, fig4] = ap.delta2_bounds(mu);

    Table t;
    stamp(t, rc, "figure data: Sigma_-(mu) at extremal phases, Delta2_pm(mu)");
    add_regime_meta(t, ap.regime_check());
    t.add_meta("psi0_approx", p0.psi0);
    t.add_meta("psi1_approx", psi1);
    t.add_meta("sigma_minus0_psi0_approx", p0.sigma_min0);
    t.add_meta("sigma_minus0_psi1_approx",
               2.0 * rc.model.optical.eta * rc.model.optical.lambda_sq * rc.model.mechanical.v *
                   rc.model.mechanical.v / rc.model.mechanical.omega_bare *
                   (ap.e_factor(0.0) + std::sqrt(ap.e_factor(0.0) * ap.e_factor(0.0) + 1.0)));
    if (opt.exact_ref) {
        ExactSpectra ex(rc.model, rc.quad);
        auto zx = ex.z_and_extremes();
        t.add_meta("sigma_minus0_psi0_exact", zx.sigma_min);
        t.add_meta("sigma_minus0_psi1_exact", zx.sigma_max);
        t.add_meta("psi0_exact", zx.psi0);
        t.add_meta("Z_abs_exact", std::abs(zx.z));
    }
    t.columns = {"mu", "sigma_minus_psi0", "sigma_minus_psi1", "delta2_minus", "delta2_plus"};
    for (std::size_t i = 0; i < mu.size(); ++i)
        t.rows.push_back(
            {mu[i], fig2_min.values[i], fig2_max.values[i], fig3.values[i], fig4.values[i]});
    emit(t, rc, opt, {1, 2, 3, 4});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detection statistics of a Mach-Zehnder interferometer with an oscillating quantum micromirror"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON run configuration")->required();
    app.add_option("--set", opt.overrides, "dotted-path override key=value (repeatable)");
    app.add_option("--out", opt.out_path, "output path ('-' for stdout)");
    app.add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json", ""}));
    app.add_flag("--svg", opt.svg, "also write <out>.svg for curve outputs");
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "Monte Carlo master seed");
    app.add_flag("!--no-exact-ref", opt.exact_ref,
                 "skip the exact-spectra reference values in 'figures'");

    int (*handler)(const RunConfig&, const CliOptions&) = nullptr;
    app.add_subcommand("derive", "derived constants report")
        ->callback([&] { handler = cmd_derive; });
    app.add_subcommand("spectra-exact", "exact reduced spectra on the mu grid")
        ->callback([&] { handler = cmd_spectra_exact; });
    app.add_subcommand("spectra-approx", "weak-interaction closed-form spectra")
        ->callback([&] { handler = cmd_spectra_approx; });
    app.add_subcommand("intensity", "intensity spectra of the output currents")
        ->callback([&] { handler = cmd_intensity; });
    app.add_subcommand("counting", "Mandel Q parameters and count variance rates")
        ->callback([&] { handler = cmd_counting; });
    app.add_subcommand("baseline", "fixed-mirror baseline, analytic and simulated")
        ->callback([&] { handler = cmd_baseline; });
    app.add_subcommand("oracle-thermal", "thermal Weyl moment Monte Carlo oracle")
        ->callback([&] { handler = cmd_oracle_thermal; });
    app.add_subcommand("oracle-collision", "collision-model oracle time series")
        ->callback([&] { handler = cmd_oracle_collision; });
    app.add_subcommand("figures", "regenerate the squeezing-spectrum figure data")
        ->callback([&] { handler = cmd_figures; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (seed_opt->count() > 0) opt.seed = seed_val;

    try {
        RunConfig rc = load_with_overrides(opt);
        return handler(rc, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
