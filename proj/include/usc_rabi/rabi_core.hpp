// rabi_core.hpp: quantum Rabi Hamiltonian, its exact spectrum, parity
// structure and the virtual-photon amplitudes c_nm = ⟨ψ_m|e,n⟩.

#pragma once

#include "usc_rabi/hilbert.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace usc_rabi {

/// Physical parameters, all in units of the cavity frequency.
struct ModelParams {
    static constexpr double omega_c = 1.0;

    double omega0 = 1.0;   // bare g-e splitting
    double omega_f = 3.0;  // energy of level f
    double lambda = 0.0;   // atom-cavity coupling
    double Omega = 0.0;    // drive strength on e-f
    double omega_p = 0.0;  // drive frequency

    void validate() const {
        if (!(omega0 > 0.0) || !std::isfinite(omega0))
            throw ConfigError("ModelParams: omega0 must be > 0");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw ConfigError("ModelParams: lambda must be >= 0");
        if (!(Omega >= 0.0) || !std::isfinite(Omega))
            throw ConfigError("ModelParams: Omega must be >= 0");
        if (!std::isfinite(omega_f) || !std::isfinite(omega_p))
            throw ConfigError("ModelParams: omega_f and omega_p must be finite");
    }
};

/// H_R = (ω₀/2)(|e⟩⟨e| − |g⟩⟨g|) + ω_c a†a + λ(a + a†)(|g⟩⟨e| + |e⟩⟨g|).
///
/// Accepts only a two-level space; level f does not couple to the cavity.
inline OperatorMatrix build_h_rabi(const ModelParams& p, const Space& space2) {
    if (space2.atom_levels() != 2)
        throw ConfigError("build_h_rabi: requires a 2-level space");
    p.validate();
    const OperatorMatrix a = annihilation(space2);
    const OperatorMatrix sigma_z = atomic_op(space2, Level::e, Level::e) -
                                   atomic_op(space2, Level::g, Level::g);
    const OperatorMatrix sigma_x = atomic_op(space2, Level::g, Level::e) +
                                   atomic_op(space2, Level::e, Level::g);
    OperatorMatrix h = 0.5 * p.omega0 * sigma_z + ModelParams::omega_c * number_op(space2) +
                       p.lambda * (a + a.adjoint()) * sigma_x;
    // Products of exactly representable real matrices; symmetrize the rounding.
    return 0.5 * (h + h.adjoint());
}

/// Parity Π = (|g⟩⟨g| − |e⟩⟨e| − |f⟩⟨f|)(−1)^{a†a}.
///
/// |g,0⟩ has eigenvalue +1 ("even"). Level f carries the sign of e so the
/// e-f drive also commutes with Π in the three-level space.
inline OperatorMatrix parity_operator(const Space& s) {
    OperatorMatrix pi = OperatorMatrix::Zero(s.dim(), s.dim());
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
        const BasisIndex b = s.basis(i);
        const double atom_sign = b.atom == Level::g ? 1.0 : -1.0;
        pi(i, i) = atom_sign * (b.photons % 2 == 0 ? 1.0 : -1.0);
    }
    return pi;
}

struct RabiSpectrum {
    Space space;
    Eigen::VectorXd energies;   // ascending; energies[0] = λ₀
    OperatorMatrix states;      // column m is |ψ_m⟩
    std::vector<int> parities;  // ±1 per eigenvector
};

namespace detail {

// Rotates every near-degenerate cluster of eigenvectors onto parity
// eigenvectors. Level crossings between parity sectors are exact in the
// Rabi model, and a generic eigensolver may return mixtures there.
inline void resolve_parity_in_clusters(const Eigen::VectorXd& energies, OperatorMatrix& states,
                                       const OperatorMatrix& pi) {
    const Eigen::Index n = energies.size();
    const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && energies(stop) - energies(stop - 1) < 1e-9 * scale)
            ++stop;
        if (stop - start > 1) {
            const auto block = states.middleCols(start, stop - start);
            OperatorMatrix local = block.adjoint() * pi * block;
            local = 0.5 * (local + local.adjoint());
            Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(local);
            const OperatorMatrix rotated = block * solver.eigenvectors();
            states.middleCols(start, stop - start) = rotated;
        }
        start = stop;
    }
}

// Ground state: ⟨g,0|ψ₀⟩ real positive. Other states: largest component
// real positive (lowest index wins ties) so output is reproducible.
inline void fix_phases(const Space& s, OperatorMatrix& states) {
    for (Eigen::Index m = 0; m < states.cols(); ++m) {
        auto col = states.col(m);
        Eigen::Index pivot = 0;
        if (m == 0 && std::abs(col(s.index(Level::g, 0))) > 1e-8) {
            pivot = s.index(Level::g, 0);
        } else {
            double best = -1.0;
            for (Eigen::Index i = 0; i < col.size(); ++i) {
                if (std::abs(col(i)) > best + 1e-12) {
                    best = std::abs(col(i));
                    pivot = i;
                }
            }
        }
        const cplx z = col(pivot);
        if (std::abs(z) > 0.0)
            col *= std::conj(z) / std::abs(z);
    }
}

} // namespace detail

/// Largest amplitude of `v` on the basis states whose parity differs from
/// `label`.
inline double parity_violation(const OperatorMatrix& pi, const Eigen::Ref<const StateVector>& v,
                               int label) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(pi(i, i).real() - label) > 0.5)
            worst = std::max(worst, std::abs(v(i)));
    return worst;
}

/// Parity label of every eigenvector, checked against the explicit Π.
/// Throws if any eigenvector carries more than 1e-9 on the opposite sector.
inline std::vector<int> parity_labels(const Space& s, const OperatorMatrix& states) {
    const OperatorMatrix pi = parity_operator(s);
    std::vector<int> labels;
    labels.reserve(std::size_t(states.cols()));
    for (Eigen::Index m = 0; m < states.cols(); ++m) {
        const StateVector v = states.col(m);
        const double expectation = v.dot(pi * v).real();
        const int label = expectation >= 0.0 ? 1 : -1;
        const double violation = parity_violation(pi, v, label);
        if (violation > 1e-9)
            throw Error("parity_labels: eigenvector " + std::to_string(m) +
                        " has mixed parity (violation " + std::to_string(violation) + ")");
        labels.push_back(label);
    }
    return labels;
}

inline std::vector<int> parity_labels(const RabiSpectrum& spec) {
    return parity_labels(spec.space, spec.states);
}

/// Exact diagonalization of H_R with parity-resolved eigenvectors and the
/// phase convention ⟨g,0|ψ₀⟩ > 0.
inline RabiSpectrum diagonalize_rabi(const ModelParams& p, const Space& space2) {
    const OperatorMatrix h = build_h_rabi(p, space2);
    Spectrum sp = eigh(h);
    detail::resolve_parity_in_clusters(sp.eigenvalues, sp.eigenvectors, parity_operator(space2));
    detail::fix_phases(space2, sp.eigenvectors);
    RabiSpectrum out{space2, std::move(sp.eigenvalues), std::move(sp.eigenvectors), {}};
    out.parities = parity_labels(out);
    return out;
}

struct GroundState {
    StateVector state;
    double energy;
};

inline GroundState ground_state(const RabiSpectrum& spec) {
    if (spec.energies.size() < 2)
        throw Error("ground_state: spectrum too small");
    const double gap = spec.energies(1) - spec.energies(0);
    if (gap < 1e-10)
        throw Error("ground_state: degenerate ground level (gap " + std::to_string(gap) + ")");
    return GroundState{spec.states.col(0), spec.energies(0)};
}

/// c_nm = ⟨ψ_m|e,n⟩.
inline cplx dressed_amplitude(const RabiSpectrum& spec, int n, Eigen::Index m) {
    if (m < 0 || m >= spec.states.cols())
        throw std::out_of_range("dressed_amplitude: eigen index out of range");
    return std::conj(spec.states(spec.space.index(Level::e, n), m));
}

/// Full table c(n, m) for n = 0..n_max over all eigenvectors m.
inline OperatorMatrix dressed_amplitudes(const RabiSpectrum& spec) {
    const Space& s = spec.space;
    return spec.states.middleRows(s.index(Level::e, 0), s.fock_dim()).conjugate();
}

} // namespace usc_rabi
