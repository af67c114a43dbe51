// polaron.hpp: the unitary e^{-S} that maps the Rabi model onto a
// renormalized Jaynes-Cummings model for low-energy states.
//
//   S = (λξ/ω_c)(|g⟩⟨e| + |e⟩⟨g|)(a† − a)
//   ξ = ω_c / (ω_c + η ω₀),   η = exp(−2λ²ξ²/ω_c²)

#pragma once

#include "usc_rabi/hilbert.hpp"
#include "usc_rabi/rabi_core.hpp"

#include <cmath>
#include <string>

namespace usc_rabi {

struct PolaronParams {
    double xi = 0.0;
    double eta = 0.0;
    double omega0_prime = 0.0;  // η ω₀
    double lambda_prime = 0.0;  // 2 η ω₀ ξ λ / ω_c
    double Omega_prime = 0.0;   // η^{1/4} Ω
    double e_approx = 0.0;      // λ² ξ (ξ − 2)/ω_c − ω₀′/2
    int iterations = 0;
};

inline constexpr int kPolaronMaxIterations = 200;
inline constexpr double kPolaronResidualTol = 1e-12;

inline double xi_of_eta(const ModelParams& p, double eta) {
    return ModelParams::omega_c / (ModelParams::omega_c + eta * p.omega0);
}

inline double eta_of_xi(const ModelParams& p, double xi) {
    const double r = p.lambda * xi / ModelParams::omega_c;
    return std::exp(-2.0 * r * r);
}

/// Plain fixed-point iteration η ← η(ξ(η)) starting from η = 1.
inline PolaronParams solve_xi_eta(const ModelParams& p) {
    p.validate();
    double eta = 1.0;
    for (int it = 1; it <= kPolaronMaxIterations; ++it) {
        const double next = eta_of_xi(p, xi_of_eta(p, eta));
        const bool settled = std::abs(next - eta) < 1e-14;
        eta = next;
        if (!settled)
            continue;

        PolaronParams out;
        out.eta = eta;
        out.xi = xi_of_eta(p, eta);
        if (std::abs(out.eta - eta_of_xi(p, out.xi)) >= kPolaronResidualTol)
            continue;
        const double wc = ModelParams::omega_c;
        out.omega0_prime = out.eta * p.omega0;
        out.lambda_prime = 2.0 * out.eta * p.omega0 * out.xi * p.lambda / wc;
        out.Omega_prime = std::pow(out.eta, 0.25) * p.Omega;
        out.e_approx = p.lambda * p.lambda * out.xi * (out.xi - 2.0) / wc - 0.5 * out.omega0_prime;
        out.iterations = it;
        return out;
    }
    throw ConvergenceError("solve_xi_eta: no fixed point after " +
                           std::to_string(kPolaronMaxIterations) +
                           " iterations (lambda=" + std::to_string(p.lambda) +
                           ", omega0=" + std::to_string(p.omega0) + ")");
}

/// Anti-Hermitian generator S. In a three-level space it vanishes on f.
inline OperatorMatrix build_s(const ModelParams& p, const PolaronParams& pol, const Space& space) {
    const OperatorMatrix a = annihilation(space);
    const OperatorMatrix sigma_x = atomic_op(space, Level::g, Level::e) +
                                   atomic_op(space, Level::e, Level::g);
    return (p.lambda * pol.xi / ModelParams::omega_c) * sigma_x * (a.adjoint() - a);
}

/// Renormalized Jaynes-Cummings Hamiltonian on a two-level space.
inline OperatorMatrix build_h_jc(const ModelParams& p, const PolaronParams& pol,
                                 const Space& space2) {
    if (space2.atom_levels() != 2)
        throw ConfigError("build_h_jc: requires a 2-level space");
    const double wc = ModelParams::omega_c;
    const OperatorMatrix a = annihilation(space2);
    const OperatorMatrix ee = atomic_op(space2, Level::e, Level::e);
    const OperatorMatrix gg = atomic_op(space2, Level::g, Level::g);
    const OperatorMatrix raise = atomic_op(space2, Level::e, Level::g);  // |e⟩⟨g|
    const OperatorMatrix shift = (p.lambda * p.lambda * pol.xi / wc) * (pol.xi - 2.0) * (ee + gg);
    OperatorMatrix h = 0.5 * pol.omega0_prime * (ee - gg) + wc * number_op(space2) +
                       pol.lambda_prime * (a * raise + a.adjoint() * raise.adjoint()) + shift;
    return 0.5 * (h + h.adjoint());
}

/// e^{S} H_R e^{−S} as explicit matrices on the truncated space.
inline OperatorMatrix transformed_h_rabi(const ModelParams& p, const PolaronParams& pol,
                                         const Space& space2) {
    const OperatorMatrix s = build_s(p, pol, space2);
    const OperatorMatrix h = matrix_exponential(s, 1.0) * build_h_rabi(p, space2) *
                             matrix_exponential(s, -1.0);
    return 0.5 * (h + h.adjoint());
}

/// e^{−S}|g,0⟩, normalized.
inline StateVector approx_ground_state(const ModelParams& p, const PolaronParams& pol,
                                       const Space& space2) {
    const OperatorMatrix s = build_s(p, pol, space2);
    StateVector v = matrix_exponential(s, -1.0) * space2.ket(Level::g, 0);
    return v / v.norm();
}

/// Closed-form first-order amplitude of |e,1⟩ in e^{−S}|g,0⟩.
inline double c10_approx(const ModelParams& p, const PolaronParams& pol) {
    return -std::pow(pol.eta, 0.25) * pol.xi * p.lambda / ModelParams::omega_c;
}

} // namespace usc_rabi
