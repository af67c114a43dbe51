// hilbert.hpp: truncated atom ⊗ Fock space and the dense operator algebra
// used by every other part of usc_rabi.
//
// Basis ordering: index = atom_ordinal * (n_max + 1) + photons, with the
// atomic ordinals g = 0, e = 1, f = 2. Energies are in units of omega_c.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace usc_rabi {

using cplx = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iteration caps, truncation guards and norm-drift aborts.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent user input.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Level : int { g = 0, e = 1, f = 2 };

inline const char* level_name(Level l) {
    switch (l) {
    case Level::g: return "g";
    case Level::e: return "e";
    case Level::f: return "f";
    }
    return "?";
}

struct BasisIndex {
    Level atom{Level::g};
    int photons{0};

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Descriptor of the truncated space: atom_levels atomic states times
/// photon numbers 0..n_max.
class Space {
public:
    Space(int n_max, int atom_levels) : n_max_(n_max), levels_(atom_levels) {
        if (n_max < 1)
            throw ConfigError("Space: n_max must be >= 1, got " + std::to_string(n_max));
        if (atom_levels != 2 && atom_levels != 3)
            throw ConfigError("Space: atom_levels must be 2 or 3, got " +
                              std::to_string(atom_levels));
    }

    int n_max() const { return n_max_; }
    int atom_levels() const { return levels_; }
    int fock_dim() const { return n_max_ + 1; }
    Eigen::Index dim() const { return Eigen::Index(levels_) * fock_dim(); }

    bool has(Level l) const { return static_cast<int>(l) < levels_; }

    Eigen::Index index(BasisIndex b) const {
        if (!has(b.atom))
            throw std::out_of_range(std::string("Space: level ") + level_name(b.atom) +
                                    " not present in a " + std::to_string(levels_) +
                                    "-level space");
        if (b.photons < 0 || b.photons > n_max_)
            throw std::out_of_range("Space: photon number " + std::to_string(b.photons) +
                                    " outside [0, " + std::to_string(n_max_) + "]");
        return Eigen::Index(static_cast<int>(b.atom)) * fock_dim() + b.photons;
    }
    Eigen::Index index(Level l, int photons) const { return index(BasisIndex{l, photons}); }

    BasisIndex basis(Eigen::Index i) const {
        if (i < 0 || i >= dim())
            throw std::out_of_range("Space: flat index out of range");
        return BasisIndex{static_cast<Level>(i / fock_dim()), static_cast<int>(i % fock_dim())};
    }

    StateVector ket(Level l, int photons) const {
        StateVector v = StateVector::Zero(dim());
        v(index(l, photons)) = 1.0;
        return v;
    }

    friend bool operator==(const Space&, const Space&) = default;

private:
    int n_max_;
    int levels_;
};

inline Space make_space(int n_max, int atom_levels) { return Space(n_max, atom_levels); }

inline OperatorMatrix identity(const Space& s) { return OperatorMatrix::Identity(s.dim(), s.dim()); }

/// Cavity annihilation operator a, identity on the atomic factor.
inline OperatorMatrix annihilation(const Space& s) {
    OperatorMatrix a = OperatorMatrix::Zero(s.dim(), s.dim());
    for (int l = 0; l < s.atom_levels(); ++l) {
        const auto lvl = static_cast<Level>(l);
        for (int n = 1; n <= s.n_max(); ++n)
            a(s.index(lvl, n - 1), s.index(lvl, n)) = std::sqrt(double(n));
    }
    return a;
}

inline OperatorMatrix creation(const Space& s) { return annihilation(s).adjoint(); }

/// a†a, built directly as a diagonal so the truncation edge stays exact.
inline OperatorMatrix number_op(const Space& s) {
    OperatorMatrix m = OperatorMatrix::Zero(s.dim(), s.dim());
    for (Eigen::Index i = 0; i < s.dim(); ++i)
        m(i, i) = double(s.basis(i).photons);
    return m;
}

/// |to⟩⟨from| on the atom, identity on the Fock factor.
inline OperatorMatrix atomic_op(const Space& s, Level to, Level from) {
    if (!s.has(to) || !s.has(from))
        throw ConfigError("atomic_op: level f requested in a 2-level space");
    OperatorMatrix m = OperatorMatrix::Zero(s.dim(), s.dim());
    for (int n = 0; n <= s.n_max(); ++n)
        m(s.index(to, n), s.index(from, n)) = 1.0;
    return m;
}

/// Largest elementwise |M - M†|.
inline double hermiticity_defect(const OperatorMatrix& m) {
    if (m.rows() != m.cols())
        return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double max_abs(const OperatorMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// exp(scale * M) via scaling-and-squaring Padé; valid for any square M.
inline OperatorMatrix matrix_exponential(const OperatorMatrix& m, cplx scale = 1.0) {
    if (!m.allFinite())
        throw Error("matrix_exponential: non-finite input");
    const OperatorMatrix scaled = scale * m;
    return scaled.exp();
}

struct Spectrum {
    Eigen::VectorXd eigenvalues;   // ascending
    OperatorMatrix eigenvectors;   // columns, orthonormal
};

/// Dense Hermitian eigensolver; rejects input that is not Hermitian to
/// within 1e-12 (relative to the largest entry when that exceeds 1).
inline Spectrum eigh(const OperatorMatrix& m) {
    if (m.rows() != m.cols())
        throw Error("eigh: matrix is not square");
    const double tol = 1e-12 * std::max(1.0, max_abs(m));
    if (hermiticity_defect(m) > tol)
        throw Error("eigh: matrix is not Hermitian (defect " +
                    std::to_string(hermiticity_defect(m)) + ")");
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigh: eigensolver did not converge");
    return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(-i G) for Hermitian G, assembled from its eigendecomposition so the
/// result is unitary to the orthonormality of the eigenvectors.
inline OperatorMatrix unitary_from_generator(const OperatorMatrix& generator) {
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(generator);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("unitary_from_generator: eigensolver did not converge");
    const auto& v = solver.eigenvectors();
    const Eigen::VectorXcd phases =
        solver.eigenvalues().unaryExpr([](double x) { return std::exp(cplx(0.0, -x)); });
    return v * phases.asDiagonal() * v.adjoint();
}

} // namespace usc_rabi
