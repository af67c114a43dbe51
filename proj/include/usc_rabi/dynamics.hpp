// dynamics.hpp: time-dependent Schrödinger propagation of the driven
// three-level atom ⊗ cavity system
//
//   H(t) = H_R + ω_f |f⟩⟨f| + Ω cos(ω_p t)(|f⟩⟨e| + |e⟩⟨f|)
//
// with no rotating-wave approximation on the drive.

#pragma once

#include "usc_rabi/hilbert.hpp"
#include "usc_rabi/rabi_core.hpp"
#include "usc_rabi/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace usc_rabi {

enum class Integrator {
    magnus4,   // two-point Gauss fourth-order Magnus step
    midpoint,  // exp(−i H(t + dt/2) dt)
    rk4,       // classical Runge-Kutta, not norm preserving
};

inline const char* integrator_name(Integrator m) {
    switch (m) {
    case Integrator::magnus4: return "magnus4";
    case Integrator::midpoint: return "midpoint";
    case Integrator::rk4: return "rk4";
    }
    return "?";
}

inline Integrator parse_integrator(std::string_view s) {
    if (s == "magnus4") return Integrator::magnus4;
    if (s == "midpoint" || s == "midpoint-exponential") return Integrator::midpoint;
    if (s == "rk4") return Integrator::rk4;
    throw ConfigError("unknown integrator '" + std::string(s) + "'");
}

inline constexpr int kDefaultStepsPerDrivePeriod = 200;
inline constexpr int kMinStepsPerDrivePeriod = 50;
inline constexpr int kDefaultMinSamples = 2000;

struct PropagationConfig {
    double t_end = 0.0;
    double dt = 0.0;
    int sample_every = 1;
    double norm_tol = 1e-9;
    Integrator method = Integrator::magnus4;
};

/// dt = 2π/(steps_per_period · ω_p), sample_every chosen for at least
/// `min_samples` samples.
inline PropagationConfig default_propagation(const ModelParams& p, double t_end,
                                             int steps_per_period = kDefaultStepsPerDrivePeriod,
                                             int min_samples = kDefaultMinSamples) {
    const double drive = p.omega_p > 0.0 ? p.omega_p : ModelParams::omega_c;
    PropagationConfig cfg;
    cfg.t_end = t_end;
    cfg.dt = 2.0 * std::numbers::pi / (steps_per_period * drive);
    const auto steps = static_cast<long>(std::ceil(t_end / cfg.dt - 1e-9));
    cfg.sample_every = static_cast<int>(std::max(1L, steps / std::max(1, min_samples)));
    return cfg;
}

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> p_f1;
    std::vector<double> p_f3;
    std::vector<double> p_ground;  // |⟨ψ(0)|ψ(t)⟩|²
    std::vector<double> norm;
    std::vector<double> f_population_max;  // max over samples of |⟨f,n|ψ⟩|², n = 0..n_max
    double parity_leak = 0.0;  // max amplitude on the parity sector opposite to ψ(0)

    std::size_t size() const { return times.size(); }
};

/// H(t) split into its static part and the drive coupling.
struct DrivenHamiltonian {
    OperatorMatrix h_static;
    OperatorMatrix drive;  // |f⟩⟨e| + |e⟩⟨f|
    double Omega = 0.0;
    double omega_p = 0.0;

    double drive_amplitude(double t) const { return Omega * std::cos(omega_p * t); }
    OperatorMatrix at(double t) const { return h_static + drive_amplitude(t) * drive; }
};

inline DrivenHamiltonian driven_hamiltonian(const ModelParams& p, const Space& space3) {
    if (space3.atom_levels() != 3)
        throw ConfigError("driven_hamiltonian: requires a 3-level space");
    const Space space2(space3.n_max(), 2);
    // g and e occupy the leading 2(n_max+1) indices in both spaces.
    const Eigen::Index ge = space2.dim();
    DrivenHamiltonian h;
    h.h_static = OperatorMatrix::Zero(space3.dim(), space3.dim());
    h.h_static.topLeftCorner(ge, ge) = build_h_rabi(p, space2);
    const OperatorMatrix on_f = atomic_op(space3, Level::f, Level::f);
    h.h_static += on_f * (p.omega_f * identity(space3) + ModelParams::omega_c * number_op(space3));
    h.drive = atomic_op(space3, Level::f, Level::e) + atomic_op(space3, Level::e, Level::f);
    h.Omega = p.Omega;
    h.omega_p = p.omega_p;
    return h;
}

inline OperatorMatrix build_h_full(const ModelParams& p, const Space& space3, double t) {
    return driven_hamiltonian(p, space3).at(t);
}

/// Places a two-level-space state into the three-level space with zero
/// amplitude on every |f,n⟩.
inline StateVector embed_ground_state(const StateVector& psi2, const Space& space3) {
    if (space3.atom_levels() != 3)
        throw ConfigError("embed_ground_state: target must be a 3-level space");
    const Eigen::Index ge = 2 * Eigen::Index(space3.fock_dim());
    if (psi2.size() != ge)
        throw ConfigError("embed_ground_state: state does not match the 2-level space");
    StateVector out = StateVector::Zero(space3.dim());
    out.head(ge) = psi2;
    return out;
}

namespace detail {

// Step maps for one integrator. Unitary methods expose step matrices so
// they can be cached when the drive period is a whole number of steps.
class Stepper {
public:
    Stepper(const DrivenHamiltonian& h, double dt, Integrator method)
        : h_(h), dt_(dt), method_(method) {
        if (method_ == Integrator::magnus4)
            commutator_ = h_.drive * h_.h_static - h_.h_static * h_.drive;
    }

    bool unitary() const { return method_ != Integrator::rk4; }

    /// exp(−i G_k) for the step starting at t0.
    OperatorMatrix step_matrix(double t0) const {
        if (method_ == Integrator::midpoint)
            return unitary_from_generator(dt_ * h_.at(t0 + 0.5 * dt_));
        constexpr double offset = std::numbers::sqrt3 / 6.0;
        const double c1 = h_.drive_amplitude(t0 + dt_ * (0.5 - offset));
        const double c2 = h_.drive_amplitude(t0 + dt_ * (0.5 + offset));
        // [H2, H1] = (c2 − c1)[V, H0]
        OperatorMatrix g = dt_ * h_.h_static + (0.5 * dt_ * (c1 + c2)) * h_.drive;
        g -= cplx(0.0, std::numbers::sqrt3 / 12.0 * dt_ * dt_ * (c2 - c1)) * commutator_;
        return unitary_from_generator(0.5 * (g + g.adjoint()));
    }

    StateVector rk4_step(double t0, const StateVector& psi) const {
        const cplx mi(0.0, -1.0);
        const OperatorMatrix h0 = h_.at(t0);
        const OperatorMatrix hm = h_.at(t0 + 0.5 * dt_);
        const OperatorMatrix h1 = h_.at(t0 + dt_);
        const StateVector k1 = mi * (h0 * psi);
        const StateVector k2 = mi * (hm * (psi + 0.5 * dt_ * k1));
        const StateVector k3 = mi * (hm * (psi + 0.5 * dt_ * k2));
        const StateVector k4 = mi * (h1 * (psi + dt_ * k3));
        return psi + (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

private:
    const DrivenHamiltonian& h_;
    double dt_;
    Integrator method_;
    OperatorMatrix commutator_;
};

// Number of steps per drive period when dt tiles it exactly; 1 when the
// Hamiltonian is static.
inline std::optional<long> steps_per_period(const DrivenHamiltonian& h, double dt) {
    if (h.Omega == 0.0 || h.omega_p == 0.0)
        return 1;
    const double k_real = 2.0 * std::numbers::pi / (std::abs(h.omega_p) * dt);
    const long k = std::lround(k_real);
    if (k >= 1 && std::abs(k_real - double(k)) < 1e-9 * k_real)
        return k;
    return std::nullopt;
}

} // namespace detail

/// Integrates i dψ/dt = H(t) ψ from ψ(0) = `initial` to cfg.t_end.
///
/// Samples are taken at t = 0 and every cfg.sample_every steps (plus the
/// final step). Throws ConvergenceError when the norm drifts by more than
/// cfg.norm_tol.
inline TimeSeries propagate(const ModelParams& p, const Space& space3, const PropagationConfig& cfg,
                            const StateVector& initial) {
    p.validate();
    if (space3.atom_levels() != 3)
        throw ConfigError("propagate: requires a 3-level space");
    if (initial.size() != space3.dim())
        throw ConfigError("propagate: initial state has the wrong dimension");
    if (std::abs(initial.norm() - 1.0) > 1e-9)
        throw ConfigError("propagate: initial state is not normalized");
    if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0) || cfg.sample_every < 1 || !(cfg.norm_tol > 0.0))
        throw ConfigError("propagate: invalid propagation config");
    if (p.Omega > 0.0 && p.omega_p > 0.0 &&
        cfg.dt > 2.0 * std::numbers::pi / (kMinStepsPerDrivePeriod * p.omega_p) * (1.0 + 1e-12))
        throw ConfigError("propagate: dt does not resolve the drive (need dt <= 2pi/(50 omega_p))");

    const DrivenHamiltonian h = driven_hamiltonian(p, space3);
    const detail::Stepper stepper(h, cfg.dt, cfg.method);
    const auto period = detail::steps_per_period(h, cfg.dt);
    const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    const long every = cfg.sample_every;
    const Eigen::Index dim = space3.dim();

    // Per-phase step cache, and per-sample block products when those are
    // cheaper than stepping (a block costs ~every matrix products).
    std::vector<OperatorMatrix> steps;
    std::vector<OperatorMatrix> blocks;
    long block_stride = 1;
    if (stepper.unitary() && period) {
        steps.reserve(std::size_t(*period));
        for (long k = 0; k < *period; ++k)
            steps.push_back(stepper.step_matrix(double(k) * cfg.dt));
        block_stride = std::gcd(*period, every);
        const long distinct = *period / block_stride;
        if (every > 1 && distinct * (every - 1) * dim < n_steps)
            blocks.resize(std::size_t(distinct));
    }
    auto step_phase = [&](long k) { return period ? k % *period : k; };
    auto block_for = [&](long k) -> const OperatorMatrix& {
        const long phase = step_phase(k);
        OperatorMatrix& b = blocks[std::size_t(phase / block_stride)];
        if (b.size() == 0) {
            b = steps[std::size_t(phase)];
            for (long j = 1; j < every; ++j)
                b = steps[std::size_t(step_phase(phase + j))] * b;
            // Polar factor: the nearest unitary to the rounded product.
            const Eigen::BDCSVD<OperatorMatrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
            b = svd.matrixU() * svd.matrixV().adjoint();
        }
        return b;
    };
    auto advance = [&](long k, const StateVector& psi) -> StateVector {
        if (!stepper.unitary())
            return stepper.rk4_step(double(k) * cfg.dt, psi);
        if (!steps.empty())
            return steps[std::size_t(step_phase(k))] * psi;
        return stepper.step_matrix(double(k) * cfg.dt) * psi;
    };

    const OperatorMatrix pi = parity_operator(space3);
    const double initial_parity = initial.dot(pi * initial).real();
    const int parity_label = initial_parity >= 0.0 ? 1 : -1;

    TimeSeries ts;
    const auto n_samples = std::size_t(n_steps / every + 2);
    for (auto* v : {&ts.times, &ts.p_f1, &ts.p_f3, &ts.p_ground, &ts.norm})
        v->reserve(n_samples);
    ts.f_population_max.assign(std::size_t(space3.fock_dim()), 0.0);
    const Eigen::Index f1 = space3.index(Level::f, 1);
    const std::optional<Eigen::Index> f3 =
        space3.n_max() >= 3 ? std::optional(space3.index(Level::f, 3)) : std::nullopt;
    const Eigen::Index f0 = space3.index(Level::f, 0);

    auto record = [&](long k, const StateVector& psi) {
        const double t = double(k) * cfg.dt;
        const double nrm = psi.norm();
        if (std::abs(nrm - 1.0) > cfg.norm_tol) {
            std::ostringstream msg;
            msg << "propagate: norm drift " << std::abs(nrm - 1.0) << " exceeds tolerance "
                << cfg.norm_tol << " at t=" << t << " (method " << integrator_name(cfg.method)
                << ", dt=" << cfg.dt << ")";
            throw ConvergenceError(msg.str());
        }
        ts.times.push_back(t);
        ts.norm.push_back(nrm);
        ts.p_f1.push_back(std::norm(psi(f1)));
        ts.p_f3.push_back(f3 ? std::norm(psi(*f3)) : 0.0);
        ts.p_ground.push_back(std::norm(initial.dot(psi)));
        for (int n = 0; n < space3.fock_dim(); ++n)
            ts.f_population_max[std::size_t(n)] =
                std::max(ts.f_population_max[std::size_t(n)], std::norm(psi(f0 + n)));
        ts.parity_leak = std::max(ts.parity_leak, parity_violation(pi, psi, parity_label));
    };

    StateVector psi = initial;
    record(0, psi);
    long k = 0;
    while (k < n_steps) {
        const long chunk = std::min(every, n_steps - k);
        if (chunk == every && !blocks.empty()) {
            psi = block_for(k) * psi;
        } else {
            for (long j = 0; j < chunk; ++j)
                psi = advance(k + j, psi);
        }
        k += chunk;
        record(k, psi);
    }
    return ts;
}

struct RabiFit {
    double max_p = 0.0;
    double t_half = std::numeric_limits<double>::quiet_NaN();  // time of first maximum
    double freq = std::numeric_limits<double>::quiet_NaN();    // angular frequency of P(t)
    bool flagged = false;                                      // no oscillation (max < 0.01)
};

/// Locates the slow Rabi lobes of a transfer curve. A lobe opens when the
/// value rises above half the global maximum and closes when it falls below
/// a quarter of it, so fast ripple on top of the envelope is ignored.
inline RabiFit rabi_extract(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size())
        throw Error("rabi_extract: size mismatch");
    RabiFit fit;
    if (values.empty()) {
        fit.flagged = true;
        return fit;
    }
    fit.max_p = *std::max_element(values.begin(), values.end());
    if (fit.max_p < 0.01) {
        fit.flagged = true;
        return fit;
    }
    const double open = 0.5 * fit.max_p;
    const double close = 0.25 * fit.max_p;
    std::vector<double> peaks;
    bool in_lobe = false;
    double best = -1.0;
    double best_t = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!in_lobe && values[i] >= open) {
            in_lobe = true;
            best = -1.0;
        }
        if (in_lobe) {
            if (values[i] > best) {
                best = values[i];
                best_t = times[i];
            }
            if (values[i] < close) {
                peaks.push_back(best_t);
                in_lobe = false;
            }
        }
    }
    if (in_lobe)
        peaks.push_back(best_t);
    fit.t_half = peaks.front() - times.front();
    const double period = peaks.size() >= 2 ? peaks[1] - peaks[0] : 2.0 * fit.t_half;
    fit.freq = 2.0 * std::numbers::pi / period;
    return fit;
}

inline RabiFit rabi_extract(const TimeSeries& ts) { return rabi_extract(ts.times, ts.p_f1); }

} // namespace usc_rabi
