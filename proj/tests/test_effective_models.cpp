#include "usc_rabi/effective_models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace usc_rabi;

namespace {

constexpr double kC10At05 = -0.2564044613481168;
constexpr double kC30At05 = -0.020870162751447596;
constexpr double kLambda0At05 = -0.6332942354616302;
// λξΩ′/(2ω_c) with the fixed-point ξ, η at λ = 0.5 and Ω = 0.2.
constexpr double kPolaronCouplingAt02 = 0.025846905455183873;

ModelParams fig3_params(double Omega, double lambda = 0.5) {
    ModelParams p;
    p.omega0 = 1.0;
    p.omega_f = 3.0;
    p.lambda = lambda;
    p.Omega = Omega;
    p.omega_p = p.omega_f + 1.0 - kLambda0At05;
    return p;
}

} // namespace

TEST(ModelFromPolaron, NoCouplingNoOscillation) {
    ModelParams p = fig3_params(0.2, 0.0);
    const TwoStateModel m = model_from_polaron(p, solve_xi_eta(p));
    EXPECT_EQ(m.coupling, 0.0);
    EXPECT_EQ(analytic_transfer(m, 10.0), 0.0);
}

TEST(ModelFromPolaron, UltrastrongCoupling) {
    ModelParams p = fig3_params(0.2);
    const PolaronParams pol = solve_xi_eta(p);
    p.omega_p = approx_resonance(p, pol);
    const TwoStateModel m = model_from_polaron(p, pol);
    EXPECT_NEAR(m.coupling, kPolaronCouplingAt02, 1e-12);
    EXPECT_NEAR(m.coupling, 0.0259, 0.0259 * 5e-3);
    EXPECT_EQ(m.source, SourceState::polaron_ground);
    EXPECT_EQ(m.target, (BasisIndex{Level::f, 1}));
    EXPECT_NEAR(m.detuning, 0.0, 1e-14);
    // Full vacuum Rabi frequency λξΩ′/ω_c and period 2πω_c/(λξΩ′).
    EXPECT_NEAR(2.0 * m.coupling, p.lambda * pol.xi * pol.Omega_prime, 1e-12);
    EXPECT_NEAR(m.period(), 2.0 * std::numbers::pi / (p.lambda * pol.xi * pol.Omega_prime), 1e-12);
}

TEST(ModelFromEigenbasis, CouplingIsDrivenVirtualPhotonAmplitude) {
    const Space s(40, 2);
    const ModelParams free = fig3_params(0.2, 0.0);
    EXPECT_EQ(model_from_eigenbasis(free, diagonalize_rabi(free, s)).coupling, 0.0);

    const ModelParams p = fig3_params(0.2);
    const TwoStateModel m = model_from_eigenbasis(p, diagonalize_rabi(p, s));
    EXPECT_NEAR(m.coupling, 0.2 * std::abs(kC10At05) / 2.0, 1e-10);
    EXPECT_NEAR(m.coupling, 0.026, 1e-3);
    EXPECT_EQ(m.source, SourceState::exact_ground);
    EXPECT_NEAR(m.detuning, 0.0, 1e-12);
}

TEST(ModelFromEigenbasis, AgreesWithPolaronModelUpToHalfCoupling) {
    const Space s(40, 2);
    for (int i = 1; i <= 10; ++i) {
        const ModelParams p = fig3_params(0.2, 0.05 * i);
        const double g_exact = model_from_eigenbasis(p, diagonalize_rabi(p, s)).coupling;
        const double g_pol = model_from_polaron(p, solve_xi_eta(p)).coupling;
        EXPECT_LT(std::abs(g_exact - g_pol) / g_exact, 0.05) << "lambda=" << p.lambda;
    }
}

TEST(MultiphotonModel, OddPhotonNumbersOnly) {
    const Space s(40, 2);
    const ModelParams p = fig3_params(0.2);
    const RabiSpectrum spec = diagonalize_rabi(p, s);
    const TwoStateModel one = multiphoton_model(p, spec, 1);
    const TwoStateModel eig = model_from_eigenbasis(p, spec);
    EXPECT_EQ(one.coupling, eig.coupling);
    EXPECT_EQ(one.target, eig.target);
    EXPECT_THROW(multiphoton_model(p, spec, 2), ConfigError);
    EXPECT_THROW(multiphoton_model(p, spec, 0), ConfigError);
    EXPECT_THROW(multiphoton_model(p, spec, 41), ConfigError);

    ModelParams p3 = p;
    p3.omega_p = p.omega_f + 3.0 - kLambda0At05;
    const TwoStateModel three = multiphoton_model(p3, spec, 3);
    EXPECT_NEAR(three.coupling, 0.2 * std::abs(kC30At05) / 2.0, 1e-10);
    EXPECT_EQ(three.target, (BasisIndex{Level::f, 3}));
    EXPECT_NEAR(three.detuning, 0.0, 1e-12);
}

TEST(AnalyticTransfer, ResonantRabiCycle) {
    TwoStateModel m;
    m.coupling = kPolaronCouplingAt02;
    EXPECT_EQ(analytic_transfer(m, 0.0), 0.0);
    const double t_half = std::numbers::pi / (2.0 * m.coupling);
    EXPECT_DOUBLE_EQ(m.half_period(), t_half);
    EXPECT_NEAR(analytic_transfer(m, t_half), 1.0, 1e-15);
    EXPECT_NEAR(t_half, 61.0, 0.5);
    EXPECT_NEAR(analytic_transfer(m, 2.0 * t_half), 0.0, 1e-15);
}

TEST(AnalyticTransfer, DetuningCapsTransfer) {
    TwoStateModel m;
    m.coupling = 0.05;
    for (double sign : {-1.0, 1.0}) {
        m.detuning = sign * 10.0 * m.coupling;
        double peak = 0.0;
        for (int i = 0; i <= 20000; ++i)
            peak = std::max(peak, analytic_transfer(m, 0.01 * i));
        EXPECT_NEAR(peak, 1.0 / 26.0, 1e-6);
        EXPECT_LT(peak, 0.5);
    }
}

TEST(AnalyticTransfer, ZeroCouplingIsConstantZero) {
    TwoStateModel m;
    m.detuning = 0.3;
    for (double t : {0.0, 1.0, 100.0})
        EXPECT_EQ(analytic_transfer(m, t), 0.0);
}
