// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "usc_rabi/usc_rabi.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace usc_rabi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [x]");
    }
};

std::string num(double x, int precision = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

ModelParams base_params() {
    ModelParams p;
    p.omega0 = 1.0;
    p.omega_f = 3.0;
    p.lambda = 0.5;
    return p;
}

ExperimentConfig base_config(Preset preset) {
    ExperimentConfig c;
    c.preset = preset;
    c.params = base_params();
    return c;
}

std::vector<double> column(const CsvTable& t, const std::string& name) {
    std::vector<double> out;
    const std::size_t col = t.column(name);
    for (const auto& r : t.rows)
        out.push_back(r[col]);
    return out;
}

// Largest deviation from the running mean over one drive period.
double fast_ripple(const std::vector<double>& v, double dt_sample, double omega_p) {
    const auto w = std::size_t(std::lround(2.0 * std::numbers::pi / omega_p / dt_sample));
    double worst = 0.0;
    for (std::size_t i = w; i + w < v.size(); ++i) {
        double mean = 0.0;
        for (std::size_t j = i - w / 2; j < i - w / 2 + w; ++j)
            mean += v[j];
        worst = std::max(worst, std::abs(v[i] - mean / double(w)));
    }
    return worst;
}

Outcome ground_energy() {
    Outcome o;
    const auto t0 = Clock::now();
    const double e = ground_state(diagonalize_rabi(base_params(), Space(40, 2))).energy;
    const double secs = seconds_since(t0);
    o.require(std::abs(e - (-0.633)) <= 0.001, "lambda0=" + num(e, 7));
    o.require(secs < 1.0, "runtime " + num(secs, 3) + " s");
    return o;
}

Outcome approximation_error() {
    Outcome o;
    const auto t0 = Clock::now();
    const ModelParams p = base_params();
    const double exact = ground_state(diagonalize_rabi(p, Space(40, 2))).energy;
    const double approx = solve_xi_eta(p).e_approx;
    const double rel = std::abs(approx - exact) / std::abs(exact);
    const double secs = seconds_since(t0);
    o.require(std::abs(rel - 0.0065) <= 0.0015, "error=" + num(100.0 * rel, 3) + "%");
    o.require(secs < 1.0, "runtime " + num(secs, 3) + " s");
    return o;
}

Outcome fig2_sweep() {
    Outcome o;
    ExperimentConfig c = base_config(Preset::fig2_sweep);
    c.sweep = Sweep{"lambda", 0.0, 0.8, 41};
    const auto t0 = Clock::now();
    const CsvTable t = run_fig2_sweep(c);
    const double secs = seconds_since(t0);
    const auto lambda = column(t, "lambda");
    const auto exact = column(t, "c10_exact");
    const auto approx = column(t, "c10_approx");
    double worst_low = 0.0, worst_high = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (exact[i] == 0.0)
            continue;
        const double rel = std::abs(approx[i] - exact[i]) / std::abs(exact[i]);
        if (lambda[i] <= 0.5 + 1e-12)
            worst_low = std::max(worst_low, rel);
        else if (lambda[i] > 0.6 + 1e-12)
            worst_high = std::max(worst_high, rel);
    }
    o.require(worst_low <= 0.05, "max rel gap on [0,0.5] " + num(100.0 * worst_low, 3) + "%");
    o.require(worst_high > 0.05, "max rel gap on (0.6,0.8] " + num(100.0 * worst_high, 3) + "%");
    o.require(secs < 10.0, "runtime " + num(secs, 3) + " s");
    return o;
}

Outcome fig3_evolve() {
    Outcome o;
    for (double om : {0.2, 0.4, 0.8}) {
        ExperimentConfig c = base_config(Preset::fig3_evolve);
        c.drive_list = {om};
        const auto t0 = Clock::now();
        const CsvTable t = run_fig3_evolve(c);
        const double secs = seconds_since(t0);
        const auto times = column(t, "t");
        const auto p = column(t, t.columns[1]);
        const double peak = *std::max_element(p.begin(), p.end());
        const double omega_p = exact_resonance(c.params, ground_state(diagonalize_rabi(
                                                                c.params, Space(c.n_max, 2))).energy, 1);
        const double ripple = fast_ripple(p, times[1] - times[0], omega_p);
        const std::string tag = "Omega=" + num(om, 2) + ": ";
        if (om < 0.5) {
            o.require(peak > 0.95, tag + "max P=" + num(peak));
            o.require(ripple < 0.01, tag + "ripple " + num(ripple, 2));
        } else {
            o.require(peak >= 0.85 && peak <= 0.95, tag + "max P=" + num(peak));
            o.require(ripple > 0.01, tag + "ripple " + num(ripple, 2));
        }
        o.require(secs < 60.0, tag + "runtime " + num(secs, 3) + " s");
    }
    return o;
}

Outcome two_state_equivalence() {
    Outcome o;
    ExperimentConfig c = base_config(Preset::two_state_compare);
    c.drive_list = {0.2, 0.4};
    const CsvTable t = run_two_state_compare(c);
    for (const auto& r : t.rows) {
        const std::string tag = "Omega=" + num(r[t.column("Omega")], 2) + ": ";
        o.require(r[t.column("sup_gap")] < 0.05, tag + "sup gap " + num(r[t.column("sup_gap")], 3));
        o.require(r[t.column("rel_diff")] <= 0.05,
                  tag + "coupling diff " + num(100.0 * r[t.column("rel_diff")], 3) + "%");
    }
    return o;
}

Outcome half_period() {
    Outcome o;
    ModelParams p = base_params();
    const RabiSpectrum spec = diagonalize_rabi(p, Space(40, 2));
    p.omega_p = exact_resonance(p, ground_state(spec).energy, 1);
    const Space space3(40, 3);
    const StateVector psi0 = embed_ground_state(ground_state(spec).state, space3);
    for (double om : {0.2, 0.4, 0.8}) {
        p.Omega = om;
        const PolaronParams pol = solve_xi_eta(p);
        const double predicted = std::numbers::pi / (p.lambda * pol.xi * pol.Omega_prime);
        const RabiFit fit = rabi_extract(propagate(p, space3, default_propagation(p, 1.5 * predicted), psi0));
        const double rel = std::abs(fit.t_half - predicted) / predicted;
        o.require(rel <= 0.10, "Omega=" + num(om, 2) + ": t_half=" + num(fit.t_half) + " vs " +
                                   num(predicted) + " (" + num(100.0 * rel, 2) + "%)");
    }
    return o;
}

Outcome parity_selection() {
    Outcome o;
    double worst_even = 0.0;
    for (int i = 1; i <= 16; ++i) {
        ModelParams p = base_params();
        p.lambda = 0.05 * i;
        const OperatorMatrix c = dressed_amplitudes(diagonalize_rabi(p, Space(40, 2)));
        for (Eigen::Index n = 0; n < c.rows(); n += 2)
            worst_even = std::max(worst_even, std::abs(c(n, 0)));
    }
    o.require(worst_even < 1e-9, "max |c_n0| even n " + num(worst_even, 2));

    // Around ω_f + 2ω_c − λ₀ nothing is excited: |f,2⟩ is parity forbidden
    // and |f,1⟩ stays off resonance.
    ModelParams p = base_params();
    p.Omega = 0.2;
    const RabiSpectrum spec = diagonalize_rabi(p, Space(40, 2));
    const double lambda0 = ground_state(spec).energy;
    const Space space3(40, 3);
    const StateVector psi0 = embed_ground_state(ground_state(spec).state, space3);
    const double n2 = p.omega_f + 2.0 - lambda0;
    double worst_f_even = 0.0, worst_f1 = 0.0;
    for (int k = -3; k <= 3; ++k) {
        ModelParams q = p;
        q.omega_p = n2 + 0.01 * k;
        const TimeSeries ts = propagate(q, space3, default_propagation(q, 130.0), psi0);
        for (std::size_t n = 0; n < ts.f_population_max.size(); n += 2)
            worst_f_even = std::max(worst_f_even, ts.f_population_max[n]);
        worst_f1 = std::max(worst_f1, ts.f_population_max[1]);
    }
    o.require(worst_f_even < 1e-12 && worst_f1 < 0.01,
              "n=2 window: max P(f,even) " + num(worst_f_even, 2) + ", max P(f,1) " + num(worst_f1, 2));

    ExperimentConfig c = base_config(Preset::resonance_scan);
    c.params.Omega = 0.2;
    const double n3 = exact_resonance(c.params, lambda0, 3);
    const double step = 0.004;
    c.sweep = Sweep{"omega_p", n3 - 5 * step, n3 + 5 * step, 11};
    c.t_end = 800.0;
    c.sample_every = kDefaultStepsPerDrivePeriod;
    const CsvTable t = run_resonance_scan(c);
    const auto wp = column(t, "omega_p");
    const auto f3 = column(t, "max_p_f3");
    const std::size_t best = std::size_t(std::max_element(f3.begin(), f3.end()) - f3.begin());
    o.require(std::abs(wp[best] - n3) <= step + 1e-12 && f3[best] > 0.5,
              "n=3 peak P=" + num(f3[best], 3) + " at " + num(wp[best], 6) + " (predicted " +
                  num(n3, 6) + ", grid step " + num(step, 2) + ")");
    return o;
}

Outcome property_suite() {
    Outcome o;
    const Space s2(40, 2), s3(40, 3), s2_big(80, 2);
    double herm = 0.0, unitarity = 0.0, truncation = 0.0;
    for (int i = 0; i <= 8; ++i) {
        ModelParams p = base_params();
        p.lambda = 0.1 * i;
        p.Omega = 0.8;
        p.omega_p = 4.633;
        const PolaronParams pol = solve_xi_eta(p);
        herm = std::max({herm, hermiticity_defect(build_h_rabi(p, s2)),
                         hermiticity_defect(build_h_jc(p, pol, s2)),
                         hermiticity_defect(build_h_full(p, s3, 0.37))});
        const OperatorMatrix gen = build_s(p, pol, s2);
        for (double sign : {1.0, -1.0}) {
            const OperatorMatrix u = matrix_exponential(gen, sign);
            unitarity = std::max(unitarity, max_abs(u.adjoint() * u - identity(s2)));
        }
        truncation = std::max(truncation, std::abs(diagonalize_rabi(p, s2).energies(0) -
                                                   diagonalize_rabi(p, s2_big).energies(0)));
    }
    o.require(herm < 1e-12, "Hermiticity defect " + num(herm, 2));
    o.require(unitarity < 1e-10, "e^{+-S} unitarity " + num(unitarity, 2));
    o.require(truncation < 1e-8, "lambda0 under N doubling " + num(truncation, 2));

    ModelParams p = base_params();
    p.Omega = 0.8;
    const RabiSpectrum spec = diagonalize_rabi(p, s2);
    p.omega_p = exact_resonance(p, ground_state(spec).energy, 1);
    const StateVector psi0 = embed_ground_state(ground_state(spec).state, s3);
    const PropagationConfig pc = default_propagation(p, 60.0);
    PropagationConfig half = pc;
    half.dt *= 0.5;
    half.sample_every *= 2;
    const TimeSeries a = propagate(p, s3, pc, psi0);
    const TimeSeries b = propagate(p, s3, half, psi0);
    double drift = 0.0, d_dt = 0.0;
    for (double n : a.norm)
        drift = std::max(drift, std::abs(n - 1.0));
    for (std::size_t i = 0; i + 1 < a.size() && i + 1 < b.size(); ++i)
        d_dt = std::max(d_dt, std::abs(a.p_f1[i] - b.p_f1[i]));
    o.require(drift < 1e-9, "norm drift " + num(drift, 2));
    o.require(d_dt < 1e-6, "P_f1 under dt halving " + num(d_dt, 2));
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"ground-state energy", ground_energy},
        {"approximation benchmark", approximation_error},
        {"c10 sweep, exact vs polaron", fig2_sweep},
        {"vacuum Rabi oscillations", fig3_evolve},
        {"effective-model equivalence", two_state_equivalence},
        {"half-period transfer", half_period},
        {"parity selection", parity_selection},
        {"property suite", property_suite},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %zu. %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
