// effective_models.hpp: two-state reductions of the driven dynamics and
// their analytic Rabi solutions.

#pragma once

#include "usc_rabi/polaron.hpp"
#include "usc_rabi/rabi_core.hpp"
#include "usc_rabi/resonance.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace usc_rabi {

enum class SourceState {
    polaron_ground,  // e^{−S}|g,0⟩
    exact_ground,    // |ψ₀⟩
};

/// Resonant two-state model H = g(|target⟩⟨source| + h.c.) with detuning Δ.
///
/// The phase of the coupling is absorbed into |target⟩, so g ≥ 0.
struct TwoStateModel {
    double coupling = 0.0;
    SourceState source = SourceState::exact_ground;
    BasisIndex target{Level::f, 1};
    double detuning = 0.0;

    /// √(g² + Δ²/4); the transfer probability oscillates at twice this.
    double generalized_coupling() const {
        return std::sqrt(coupling * coupling + 0.25 * detuning * detuning);
    }
    /// Time of the first transfer maximum, π/(2√(g² + Δ²/4)).
    double half_period() const { return std::numbers::pi / (2.0 * generalized_coupling()); }
    double period() const { return 2.0 * half_period(); }
};

/// Coupling λξΩ′/(2ω_c) between e^{−S}|g,0⟩ and |f,1⟩; detuning relative to
/// the polaron resonance condition.
inline TwoStateModel model_from_polaron(const ModelParams& p, const PolaronParams& pol) {
    TwoStateModel m;
    m.coupling = p.lambda * pol.xi * pol.Omega_prime / (2.0 * ModelParams::omega_c);
    m.source = SourceState::polaron_ground;
    m.target = {Level::f, 1};
    m.detuning = p.omega_p - approx_resonance(p, pol, 1);
    return m;
}

/// Coupling Ω|c_n0|/2 between |ψ₀⟩ and |f,n⟩ for odd n.
inline TwoStateModel multiphoton_model(const ModelParams& p, const RabiSpectrum& spec, int n) {
    require_odd_photon_number(n, "multiphoton_model");
    if (n > spec.space.n_max())
        throw ConfigError("multiphoton_model: n exceeds the Fock truncation");
    TwoStateModel m;
    m.coupling = 0.5 * p.Omega * std::abs(dressed_amplitude(spec, n, 0));
    m.source = SourceState::exact_ground;
    m.target = {Level::f, n};
    m.detuning = p.omega_p - exact_resonance(p, spec.energies(0), n);
    return m;
}

inline TwoStateModel model_from_eigenbasis(const ModelParams& p, const RabiSpectrum& spec) {
    return multiphoton_model(p, spec, 1);
}

/// P(t) = g²/(g² + Δ²/4) sin²(√(g² + Δ²/4) t).
inline double analytic_transfer(const TwoStateModel& m, double t) {
    const double w = m.generalized_coupling();
    if (m.coupling == 0.0 || w == 0.0)
        return 0.0;
    const double s = std::sin(w * t);
    return (m.coupling * m.coupling) / (w * w) * s * s;
}

} // namespace usc_rabi
