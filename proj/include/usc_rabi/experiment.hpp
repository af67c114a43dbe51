// experiment.hpp: experiment presets behind the usc-rabi command line:
// key-value config parsing, convergence guards and CSV emission.

#pragma once

#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/effective_models.hpp"
#include "usc_rabi/hilbert.hpp"
#include "usc_rabi/polaron.hpp"
#include "usc_rabi/rabi_core.hpp"
#include "usc_rabi/resonance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <locale>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace usc_rabi {

enum class Preset { fig2_sweep, fig3_evolve, resonance_scan, convergence_report, two_state_compare };

inline const char* preset_name(Preset p) {
    switch (p) {
    case Preset::fig2_sweep: return "fig2-sweep";
    case Preset::fig3_evolve: return "fig3-evolve";
    case Preset::resonance_scan: return "resonance-scan";
    case Preset::convergence_report: return "convergence-report";
    case Preset::two_state_compare: return "two-state-compare";
    }
    return "?";
}

inline Preset parse_preset(std::string_view s) {
    for (Preset p : {Preset::fig2_sweep, Preset::fig3_evolve, Preset::resonance_scan,
                     Preset::convergence_report, Preset::two_state_compare})
        if (s == preset_name(p))
            return p;
    throw ConfigError("unknown preset '" + std::string(s) + "'");
}

struct Sweep {
    std::string variable;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;  // number of grid points, endpoints included

    std::vector<double> grid() const {
        std::vector<double> g;
        g.reserve(std::size_t(steps));
        for (int i = 0; i < steps; ++i)
            g.push_back(steps == 1 ? start : start + (stop - start) * double(i) / double(steps - 1));
        return g;
    }
};

struct ExperimentConfig {
    Preset preset = Preset::fig2_sweep;
    ModelParams params;
    bool omega_p_auto = true;  // tune to the exact single-photon resonance
    std::optional<Sweep> sweep;
    std::vector<double> drive_list{0.2, 0.4, 0.8};
    int n_max = 40;
    double t_end = 150.0;
    std::optional<double> dt;           // empty: 2π/(200 ω_p)
    std::optional<int> sample_every;    // empty: at least 2000 samples
    double norm_tol = 1e-9;
    Integrator method = Integrator::magnus4;
    bool convergence_guard = true;
    std::string output_path;

    void validate() const {
        params.validate();
        if (n_max < 1)
            throw ConfigError("n_max must be >= 1");
        if (!(t_end > 0.0))
            throw ConfigError("t_end must be > 0");
        if (dt && !(*dt > 0.0))
            throw ConfigError("dt must be > 0");
        if (sample_every && *sample_every < 1)
            throw ConfigError("sample_every must be >= 1");
        if (!(norm_tol > 0.0))
            throw ConfigError("norm_tol must be > 0");
        const bool needs_sweep =
            preset == Preset::fig2_sweep || preset == Preset::resonance_scan;
        if (needs_sweep && !sweep)
            throw ConfigError(std::string(preset_name(preset)) + " requires a sweep block");
        if (!needs_sweep && sweep)
            throw ConfigError(std::string(preset_name(preset)) + " does not accept a sweep block");
        if (sweep) {
            const char* expected = preset == Preset::fig2_sweep ? "lambda" : "omega_p";
            if (sweep->variable != expected)
                throw ConfigError(std::string(preset_name(preset)) + " sweeps '" + expected +
                                  "', got '" + sweep->variable + "'");
            if (sweep->steps < 1)
                throw ConfigError("sweep.steps must be >= 1");
        }
        if (preset == Preset::fig3_evolve || preset == Preset::two_state_compare) {
            if (drive_list.empty())
                throw ConfigError("drive_list must not be empty");
            for (double om : drive_list)
                if (!(om >= 0.0))
                    throw ConfigError("drive_list entries must be >= 0");
        }
    }
};

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << x;
    return os.str();
}

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    return out;
}

} // namespace detail

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
/// keys are errors. `default_preset` is used when the text has no preset key.
inline ExperimentConfig parse_config(std::istream& in, std::optional<Preset> default_preset = {}) {
    ExperimentConfig cfg;
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }

    if (default_preset)
        cfg.preset = *default_preset;
    Sweep sweep;
    std::set<std::string> sweep_keys;
    for (const auto& [key, value] : kv) {
        if (key == "preset") {
            const Preset p = parse_preset(value);
            if (default_preset && p != *default_preset)
                throw ConfigError(std::string("config preset '") + preset_name(p) +
                                  "' does not match requested '" + preset_name(*default_preset) +
                                  "'");
            cfg.preset = p;
        } else if (key == "omega0") {
            cfg.params.omega0 = detail::parse_double(key, value);
        } else if (key == "omega_c") {
            if (detail::parse_double(key, value) != ModelParams::omega_c)
                throw ConfigError("omega_c is the unit of frequency and must be 1");
        } else if (key == "omega_f") {
            cfg.params.omega_f = detail::parse_double(key, value);
        } else if (key == "lambda") {
            cfg.params.lambda = detail::parse_double(key, value);
        } else if (key == "Omega") {
            cfg.params.Omega = detail::parse_double(key, value);
        } else if (key == "omega_p") {
            cfg.omega_p_auto = value == "auto";
            if (!cfg.omega_p_auto)
                cfg.params.omega_p = detail::parse_double(key, value);
        } else if (key == "sweep.variable") {
            sweep.variable = value;
            sweep_keys.insert(key);
        } else if (key == "sweep.start") {
            sweep.start = detail::parse_double(key, value);
            sweep_keys.insert(key);
        } else if (key == "sweep.stop") {
            sweep.stop = detail::parse_double(key, value);
            sweep_keys.insert(key);
        } else if (key == "sweep.steps") {
            sweep.steps = detail::parse_int(key, value);
            sweep_keys.insert(key);
        } else if (key == "drive_list") {
            cfg.drive_list = detail::parse_list(key, value);
        } else if (key == "n_max") {
            cfg.n_max = detail::parse_int(key, value);
        } else if (key == "t_end") {
            cfg.t_end = detail::parse_double(key, value);
        } else if (key == "dt") {
            cfg.dt = value == "auto" ? std::nullopt : std::optional(detail::parse_double(key, value));
        } else if (key == "sample_every") {
            cfg.sample_every =
                value == "auto" ? std::nullopt : std::optional(detail::parse_int(key, value));
        } else if (key == "norm_tol") {
            cfg.norm_tol = detail::parse_double(key, value);
        } else if (key == "method") {
            cfg.method = parse_integrator(value);
        } else if (key == "convergence_guard") {
            cfg.convergence_guard = detail::parse_bool(key, value);
        } else if (key == "output_path") {
            cfg.output_path = value;
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    if (!sweep_keys.empty()) {
        if (sweep_keys.size() != 4)
            throw ConfigError("sweep needs all of sweep.variable, sweep.start, sweep.stop, sweep.steps");
        cfg.sweep = sweep;
    }
    if (!default_preset && !kv.contains("preset"))
        throw ConfigError("no preset given");
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path, std::optional<Preset> preset = {}) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, preset);
}

/// Table with `#` provenance comments; numbers use '.' and 12 significant
/// digits regardless of the global locale.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> provenance;
    std::vector<std::string> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> guard_failures;  // non-empty: exit code 2 after writing

    void add(std::string key, double value) {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << std::setprecision(12) << value;
        provenance.emplace_back(std::move(key), os.str());
    }
    void add(std::string key, std::string value) {
        provenance.emplace_back(std::move(key), std::move(value));
    }

    std::size_t column(std::string_view name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end())
            throw Error("CsvTable: no column '" + std::string(name) + "'");
        return std::size_t(it - columns.begin());
    }

    void write(std::ostream& out) const {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << std::setprecision(12);
        for (const auto& [k, v] : provenance)
            os << "# " << k << " = " << v << '\n';
        for (const auto& n : notes)
            os << "# " << n << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i)
                os << (i ? "," : "") << r[i];
            os << '\n';
        }
        out << os.str();
    }
};

namespace detail {

inline void add_model_provenance(CsvTable& t, const ExperimentConfig& c) {
    t.add("preset", preset_name(c.preset));
    t.add("omega_c", ModelParams::omega_c);
    t.add("omega0", c.params.omega0);
    t.add("omega_f", c.params.omega_f);
    t.add("lambda", c.params.lambda);
    t.add("Omega", c.params.Omega);
    t.add("omega_p", c.omega_p_auto ? std::string("auto") : fmt(c.params.omega_p));
    t.add("n_max", double(c.n_max));
    t.add("convergence_guard", c.convergence_guard ? "true" : "false");
}

inline void add_propagation_provenance(CsvTable& t, const PropagationConfig& pc) {
    t.add("t_end", pc.t_end);
    t.add("dt", pc.dt);
    t.add("sample_every", double(pc.sample_every));
    t.add("norm_tol", pc.norm_tol);
    t.add("method", integrator_name(pc.method));
}

inline PropagationConfig resolve_propagation(const ExperimentConfig& c, const ModelParams& p) {
    PropagationConfig pc = default_propagation(p, c.t_end);
    if (c.dt) {
        pc.dt = *c.dt;
        const auto steps = static_cast<long>(std::ceil(c.t_end / pc.dt - 1e-9));
        pc.sample_every = static_cast<int>(std::max(1L, steps / kDefaultMinSamples));
    }
    if (c.sample_every)
        pc.sample_every = *c.sample_every;
    pc.norm_tol = c.norm_tol;
    pc.method = c.method;
    return pc;
}

// Drive frequency for a run: explicit, or the exact n = 1 resonance.
inline ModelParams resolve_drive(const ExperimentConfig& c, double lambda0) {
    ModelParams p = c.params;
    if (c.omega_p_auto)
        p.omega_p = exact_resonance(p, lambda0, 1);
    return p;
}

inline TimeSeries run_from_ground(const ModelParams& p, int n_max, const PropagationConfig& pc) {
    const RabiSpectrum spec = diagonalize_rabi(p, Space(n_max, 2));
    const Space space3(n_max, 3);
    return propagate(p, space3, pc, embed_ground_state(ground_state(spec).state, space3));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b,
                           std::size_t stride_b = 1) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size() && i * stride_b < b.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i * stride_b]));
    return worst;
}

} // namespace detail

inline constexpr double kEnergyGuardTol = 1e-8;
inline constexpr double kDynamicsGuardTol = 1e-6;

/// c₁₀ exact vs. −η^{1/4}ξλ/ω_c over a λ grid.
inline CsvTable run_fig2_sweep(const ExperimentConfig& c) {
    c.validate();
    CsvTable t;
    detail::add_model_provenance(t, c);
    t.add("sweep", c.sweep->variable + " " + detail::fmt(c.sweep->start) + ":" +
                       detail::fmt(c.sweep->stop) + " (" + std::to_string(c.sweep->steps) + " points)");
    t.columns = {"lambda", "c10_exact", "c10_approx", "xi", "eta", "lambda0_exact", "e_approx"};
    for (double lambda : c.sweep->grid()) {
        ModelParams p = c.params;
        p.lambda = lambda;
        const RabiSpectrum spec = diagonalize_rabi(p, Space(c.n_max, 2));
        const double lambda0 = ground_state(spec).energy;
        const double c10 = dressed_amplitude(spec, 1, 0).real();
        if (c.convergence_guard) {
            const RabiSpectrum fine = diagonalize_rabi(p, Space(2 * c.n_max, 2));
            const double d_energy = std::abs(fine.energies(0) - lambda0);
            const double d_c10 = std::abs(dressed_amplitude(fine, 1, 0).real() - c10);
            if (d_energy > kEnergyGuardTol || d_c10 > kEnergyGuardTol)
                throw ConvergenceError("convergence guard failed at lambda=" + detail::fmt(lambda) +
                                       ": n_max doubling changes lambda0 by " +
                                       detail::fmt(d_energy) + ", c10 by " + detail::fmt(d_c10));
        }
        const PolaronParams pol = solve_xi_eta(p);
        t.rows.push_back({lambda, c10, c10_approx(p, pol), pol.xi, pol.eta, lambda0, pol.e_approx});
    }
    return t;
}

/// P_f1(t) from full propagation for each drive strength, alongside the
/// eigenbasis two-state prediction.
inline CsvTable run_fig3_evolve(const ExperimentConfig& c) {
    c.validate();
    CsvTable t;
    detail::add_model_provenance(t, c);
    const RabiSpectrum spec = diagonalize_rabi(c.params, Space(c.n_max, 2));
    const double lambda0 = ground_state(spec).energy;
    const PolaronParams pol0 = solve_xi_eta(c.params);
    const ModelParams base = detail::resolve_drive(c, lambda0);
    const PropagationConfig pc = detail::resolve_propagation(c, base);
    t.add("lambda0", lambda0);
    t.add("xi", pol0.xi);
    t.add("eta", pol0.eta);
    t.add("c10", dressed_amplitude(spec, 1, 0).real());
    t.add("omega_p_resolved", base.omega_p);
    t.add("drive_list", [&] {
        std::string s;
        for (double om : c.drive_list)
            s += (s.empty() ? "" : ",") + detail::fmt(om);
        return s;
    }());
    detail::add_propagation_provenance(t, pc);

    t.columns = {"t"};
    std::vector<TimeSeries> runs;
    std::vector<TwoStateModel> models;
    for (double om : c.drive_list) {
        ModelParams p = base;
        p.Omega = om;
        runs.push_back(detail::run_from_ground(p, c.n_max, pc));
        models.push_back(model_from_eigenbasis(p, spec));
        if (c.convergence_guard) {
            const TimeSeries fine = detail::run_from_ground(p, 2 * c.n_max, pc);
            const double d = detail::max_abs_diff(runs.back().p_f1, fine.p_f1);
            if (d > kDynamicsGuardTol)
                throw ConvergenceError("convergence guard failed at Omega=" + detail::fmt(om) +
                                       ": n_max doubling changes P_f1 by " + detail::fmt(d));
        }
        const RabiFit fit = rabi_extract(runs.back());
        const std::string tag = "Omega_" + detail::fmt(om);
        t.columns.push_back("p_f1_" + tag);
        t.columns.push_back("p_analytic_" + tag);
        t.columns.push_back("norm_" + tag);
        const PolaronParams pol = solve_xi_eta(p);
        t.notes.push_back(tag + ": g_eigenbasis=" + detail::fmt(models.back().coupling) +
                          " g_polaron=" + detail::fmt(model_from_polaron(p, pol).coupling) +
                          " max_p_f1=" + detail::fmt(fit.max_p) +
                          " t_half=" + detail::fmt(fit.t_half));
    }
    const std::size_t n = runs.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row{runs.front().times[i]};
        for (std::size_t r = 0; r < runs.size(); ++r) {
            row.push_back(runs[r].p_f1[i]);
            row.push_back(analytic_transfer(models[r], runs[r].times[i]));
            row.push_back(runs[r].norm[i]);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// Peak populations of |f,1⟩ and |f,3⟩ against the drive frequency.
inline CsvTable run_resonance_scan(const ExperimentConfig& c) {
    c.validate();
    CsvTable t;
    detail::add_model_provenance(t, c);
    const RabiSpectrum spec = diagonalize_rabi(c.params, Space(c.n_max, 2));
    const double lambda0 = ground_state(spec).energy;
    t.add("lambda0", lambda0);
    t.add("resonance_n1", exact_resonance(c.params, lambda0, 1));
    t.add("resonance_n3", exact_resonance(c.params, lambda0, 3));
    t.add("parity_forbidden_n2", c.params.omega_f + 2.0 * ModelParams::omega_c - lambda0);
    t.add("sweep", c.sweep->variable + " " + detail::fmt(c.sweep->start) + ":" +
                       detail::fmt(c.sweep->stop) + " (" + std::to_string(c.sweep->steps) + " points)");
    t.columns = {"omega_p", "max_p_f1", "max_p_f3"};

    const Space space3(c.n_max, 3);
    const StateVector psi0 = embed_ground_state(ground_state(spec).state, space3);
    std::vector<PropagationConfig> configs;
    for (double wp : c.sweep->grid()) {
        ModelParams p = c.params;
        p.omega_p = wp;
        const PropagationConfig pc = detail::resolve_propagation(c, p);
        configs.push_back(pc);
        const TimeSeries ts = propagate(p, space3, pc, psi0);
        t.rows.push_back({wp, ts.f_population_max[1],
                          c.n_max >= 3 ? ts.f_population_max[3] : 0.0});
    }
    detail::add_propagation_provenance(t, configs.front());
    if (c.convergence_guard) {
        // Re-run the peak rows at doubled truncation.
        std::set<std::size_t> peaks;
        for (std::size_t col : {std::size_t(1), std::size_t(2)})
            peaks.insert(std::size_t(std::max_element(t.rows.begin(), t.rows.end(),
                                                       [col](const auto& a, const auto& b) {
                                                           return a[col] < b[col];
                                                       }) - t.rows.begin()));
        for (std::size_t i : peaks) {
            ModelParams p = c.params;
            p.omega_p = t.rows[i][0];
            const TimeSeries fine = detail::run_from_ground(p, 2 * c.n_max, configs[i]);
            const double d1 = std::abs(fine.f_population_max[1] - t.rows[i][1]);
            const double d3 = std::abs(fine.f_population_max[3] - t.rows[i][2]);
            if (std::max(d1, d3) > kDynamicsGuardTol)
                throw ConvergenceError("convergence guard failed at omega_p=" +
                                       detail::fmt(p.omega_p) + ": n_max doubling changes peak "
                                       "populations by " + detail::fmt(std::max(d1, d3)));
        }
    }
    return t;
}

/// Refinement study: (n_max, dt), (2 n_max, dt), (n_max, dt/2).
inline CsvTable run_convergence_report(const ExperimentConfig& c) {
    c.validate();
    CsvTable t;
    detail::add_model_provenance(t, c);
    t.columns = {"n_max", "dt", "lambda0", "max_p_f1"};

    const RabiSpectrum coarse_spec = diagonalize_rabi(c.params, Space(c.n_max, 2));
    const double lambda0 = ground_state(coarse_spec).energy;
    const ModelParams p = detail::resolve_drive(c, lambda0);
    const PropagationConfig pc = detail::resolve_propagation(c, p);
    PropagationConfig half = pc;
    half.dt = 0.5 * pc.dt;
    half.sample_every = 2 * pc.sample_every;
    detail::add_propagation_provenance(t, pc);

    const double lambda0_fine = ground_state(diagonalize_rabi(p, Space(2 * c.n_max, 2))).energy;
    const TimeSeries base = detail::run_from_ground(p, c.n_max, pc);
    const TimeSeries big = detail::run_from_ground(p, 2 * c.n_max, pc);
    const TimeSeries fine = detail::run_from_ground(p, c.n_max, half);
    auto peak = [](const TimeSeries& ts) { return *std::max_element(ts.p_f1.begin(), ts.p_f1.end()); };
    t.rows.push_back({double(c.n_max), pc.dt, lambda0, peak(base)});
    t.rows.push_back({double(2 * c.n_max), pc.dt, lambda0_fine, peak(big)});
    t.rows.push_back({double(c.n_max), half.dt, lambda0, peak(fine)});

    const double d_lambda0 = std::abs(lambda0_fine - lambda0);
    const double d_nmax = detail::max_abs_diff(base.p_f1, big.p_f1);
    const double d_dt = detail::max_abs_diff(base.p_f1, fine.p_f1);
    t.notes.push_back("delta lambda0 (n_max doubling) = " + detail::fmt(d_lambda0) +
                      " (limit " + detail::fmt(kEnergyGuardTol) + ")");
    t.notes.push_back("delta P_f1 sup (n_max doubling) = " + detail::fmt(d_nmax) + " (limit " +
                      detail::fmt(kDynamicsGuardTol) + ")");
    t.notes.push_back("delta P_f1 sup (dt halving) = " + detail::fmt(d_dt) + " (limit " +
                      detail::fmt(kDynamicsGuardTol) + ")");
    if (d_lambda0 > kEnergyGuardTol)
        t.guard_failures.push_back("lambda0 not converged under n_max doubling");
    if (d_nmax > kDynamicsGuardTol)
        t.guard_failures.push_back("P_f1 not converged under n_max doubling");
    if (d_dt > kDynamicsGuardTol)
        t.guard_failures.push_back("P_f1 not converged under dt halving");
    return t;
}

/// Polaron vs. eigenbasis couplings and full vs. analytic transfer per drive.
inline CsvTable run_two_state_compare(const ExperimentConfig& c) {
    c.validate();
    CsvTable t;
    detail::add_model_provenance(t, c);
    const RabiSpectrum spec = diagonalize_rabi(c.params, Space(c.n_max, 2));
    const double lambda0 = ground_state(spec).energy;
    const ModelParams base = detail::resolve_drive(c, lambda0);
    const PropagationConfig pc = detail::resolve_propagation(c, base);
    t.add("lambda0", lambda0);
    t.add("omega_p_resolved", base.omega_p);
    detail::add_propagation_provenance(t, pc);
    t.columns = {"Omega",       "g_polaron",  "g_eigenbasis",    "rel_diff",
                 "max_p_f1",    "t_half_full", "t_half_analytic", "sup_gap"};
    for (double om : c.drive_list) {
        ModelParams p = base;
        p.Omega = om;
        const PolaronParams pol = solve_xi_eta(p);
        const TwoStateModel polaron = model_from_polaron(p, pol);
        const TwoStateModel eigen = model_from_eigenbasis(p, spec);
        const TimeSeries ts = detail::run_from_ground(p, c.n_max, pc);
        const RabiFit fit = rabi_extract(ts);
        double gap = 0.0;
        for (std::size_t i = 0; i < ts.size() && ts.times[i] <= eigen.period(); ++i)
            gap = std::max(gap, std::abs(ts.p_f1[i] - analytic_transfer(eigen, ts.times[i])));
        const double rel = eigen.coupling > 0.0
                               ? std::abs(polaron.coupling - eigen.coupling) / eigen.coupling
                               : 0.0;
        t.rows.push_back({om, polaron.coupling, eigen.coupling, rel, fit.max_p, fit.t_half,
                          eigen.half_period(), gap});
    }
    return t;
}

inline CsvTable run_preset(const ExperimentConfig& c) {
    switch (c.preset) {
    case Preset::fig2_sweep: return run_fig2_sweep(c);
    case Preset::fig3_evolve: return run_fig3_evolve(c);
    case Preset::resonance_scan: return run_resonance_scan(c);
    case Preset::convergence_report: return run_convergence_report(c);
    case Preset::two_state_compare: return run_two_state_compare(c);
    }
    throw ConfigError("unhandled preset");
}

} // namespace usc_rabi
