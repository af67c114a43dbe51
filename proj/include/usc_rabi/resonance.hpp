// resonance.hpp: drive frequencies that bring |ψ₀⟩ into resonance with |f,n⟩.

#pragma once

#include "usc_rabi/polaron.hpp"
#include "usc_rabi/rabi_core.hpp"

#include <string>

namespace usc_rabi {

enum class ResonanceMode { exact, approx };

inline void require_odd_photon_number(int n, const char* who) {
    if (n < 1 || n % 2 == 0)
        throw ConfigError(std::string(who) + ": photon number must be a positive odd integer, got " +
                          std::to_string(n));
}

/// ω_p = ω_f + n ω_c − λ₀, with λ₀ the exact ground energy of H_R.
inline double exact_resonance(const ModelParams& p, double lambda0, int n) {
    require_odd_photon_number(n, "exact_resonance");
    return p.omega_f + n * ModelParams::omega_c - lambda0;
}

/// Single-photon resonance with λ₀ replaced by the polaron ground energy.
inline double approx_resonance(const ModelParams& p, const PolaronParams& pol, int n = 1) {
    if (n != 1)
        throw ConfigError("approx_resonance: only defined for n = 1");
    return p.omega_f + ModelParams::omega_c - pol.e_approx;
}

inline double resonance_frequency(const ModelParams& p, double lambda0, const PolaronParams& pol,
                                  int n, ResonanceMode mode) {
    return mode == ResonanceMode::exact ? exact_resonance(p, lambda0, n)
                                        : approx_resonance(p, pol, n);
}

} // namespace usc_rabi
