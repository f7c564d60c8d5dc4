#include <cmath>

#include <gtest/gtest.h>

#include "qwerner/oracle/fock.hpp"
#include "qwerner/teleport.hpp"

using namespace qwerner;
using namespace qwerner::oracle;

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

QubitDensity4 bell_density() {
    Eigen::Vector4cd v(1.0, 0.0, 0.0, 1.0);
    v /= std::sqrt(2.0);
    return {v * v.adjoint()};
}

}  // namespace

TEST(BuildPacs, Examples) {
    const auto vac = build_pacs(0.0, 0, 12);
    EXPECT_EQ(vac.coeffs[0], Complex{1.0});
    EXPECT_EQ(vac.coeffs.tail(12).norm(), 0.0);
    const auto two = build_pacs(0.0, 2, 14);
    EXPECT_NEAR(std::abs(two.coeffs[2]), 1.0, 1e-15);
    const Complex al{0.5, -0.3};
    const auto coh = build_pacs(al, 0);
    for (int n = 0; n < 6; ++n) {
        const Complex ref = std::exp(-0.5 * std::norm(al)) * std::pow(al, n) / std::sqrt(std::tgamma(n + 1.0));
        EXPECT_LT(std::abs(coh.coeffs[n] - ref), 1e-15);
    }
    const auto pacs = build_pacs(1.2, 3);
    EXPECT_NEAR(pacs.coeffs.norm(), 1.0, 1e-14);
    EXPECT_LT(pacs.tail_mass, kTailMassLimit);
    for (int n = 0; n < 3; ++n) EXPECT_EQ(pacs.coeffs[n], Complex{0.0});
}

TEST(BuildPacs, Errors) {
    EXPECT_THROW(build_pacs(1.0, -1, 40), DomainError);
    EXPECT_THROW(build_pacs(2.0, 1, minimum_cutoff(2.0, 1) - 1), TailMassError);
    // the automatic cutoff starts at or above the minimum and passes the certificate
    EXPECT_GE(build_pacs(2.0, 1).cutoff, minimum_cutoff(2.0, 1));
}

TEST(DisplacementMatrix, Examples) {
    EXPECT_TRUE(displacement_matrix(0.0, 10).isIdentity(0.0));
    const Complex z{0.6, -0.4};
    const CMatrix d = displacement_matrix(z, 30);
    const double g = std::exp(-0.5 * std::norm(z));
    EXPECT_NEAR(d(0, 0).real(), g, 1e-15);
    EXPECT_LT(std::abs(d(1, 0) - z * g), 1e-15);
    EXPECT_LT(std::abs(d(0, 1) + std::conj(z) * g), 1e-15);
    EXPECT_NEAR(d(1, 1).real(), g * (1.0 - std::norm(z)), 1e-15);
}

TEST(DisplacementMatrix, UnitaryOnSafeBlock) {
    for (Complex z : {Complex{0.5, 0.2}, Complex{-1.5, 2.0}}) {
        const int cutoff = 80;
        const int b = safe_block(z, cutoff);
        ASSERT_GT(b, 0);
        const CMatrix prod = displacement_matrix(z, cutoff) * displacement_matrix(-z, cutoff);
        EXPECT_LT((prod.topLeftCorner(b, b) - CMatrix::Identity(b, b)).cwiseAbs().maxCoeff(), 1e-8) << z;
    }
    EXPECT_EQ(safe_block(10.0, 20), 0);
}

TEST(DisplacementMatrix, GuardEnforced) {
    EXPECT_THROW(displacement_matrix(5.1, 20), AccuracyGuardError);
    EXPECT_NO_THROW(displacement_matrix(5.0, 20));
}

TEST(WignerFock, Examples) {
    const auto vac = build_pacs(0.0, 0, 20);
    const auto one = build_pacs(0.0, 1, 20);
    for (Complex z : {Complex{0.0}, Complex{0.3, -0.5}, Complex{1.1, 0.2}}) {
        const double x = std::norm(z);
        EXPECT_NEAR(wigner_fock(vac, z), kTwoOverPi * std::exp(-2.0 * x), 1e-14);
        EXPECT_NEAR(wigner_fock(one, z), kTwoOverPi * (4.0 * x - 1.0) * std::exp(-2.0 * x), 1e-14);
        EXPECT_LT(std::abs(wigner_fock_operator(one.coeffs, one.coeffs, z) - wigner_fock(one, z)), 1e-15);
    }
    // coherent state: Gaussian centred at alpha
    const Complex al{0.7, 0.4};
    EXPECT_NEAR(wigner_fock(build_pacs(al, 0), al), kTwoOverPi, 1e-12);
}

TEST(WignerFock, TwoModeProductFactorizes) {
    const QuasiWernerParams p{0.0, 0.0, 0, 1.0, Sign::Plus};
    const auto rho = quasi_werner_density(p, 20);
    const PhasePoint2 z{{0.2, 0.1}, {-0.4, 0.3}};
    EXPECT_NEAR(wigner_fock(rho, z), kTwoOverPi * kTwoOverPi * std::exp(-2.0 * (std::norm(z.z1) + std::norm(z.z2))), 1e-14);
}

TEST(CharFnFock, Examples) {
    const auto vac = build_pacs(0.0, 0, 20);
    const auto one = build_pacs(0.0, 1, 20);
    const Complex z{0.5, 0.8};
    const double x = std::norm(z);
    EXPECT_LT(std::abs(char_fn_fock(CMatrix(vac.coeffs * vac.coeffs.adjoint()), z) - std::exp(-0.5 * x)), 1e-15);
    EXPECT_LT(std::abs(char_fn_fock(CMatrix(one.coeffs * one.coeffs.adjoint()), z) - (1.0 - x) * std::exp(-0.5 * x)),
              1e-15);
    for (double a : {0.0, 0.5, 1.0}) {
        const QuasiWernerParams p{0.67, 1.1, 2, a, Sign::Minus};
        const auto rho = quasi_werner_density(p, certified_cutoff(p));
        EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
        EXPECT_LT(std::abs(char_fn_fock(rho, 0.0, 0.0) - 1.0), 1e-12);
        for (int mode : {1, 2}) EXPECT_NEAR(reduced_density(rho, mode).trace().real(), 1.0, 1e-12);
    }
}

TEST(QuasiWernerDensity, ProjectionApproachesBellState) {
    const QuasiWernerParams p{8.0, 8.0, 0, 1.0, Sign::Plus};
    const auto rho = quasi_werner_density(p, certified_cutoff(p));
    const auto d = project_quasi_bell(rho, p.alpha, p.beta, p.m);
    // psi+ at large amplitude is (|++> + |-->)/sqrt2 in the cat basis
    EXPECT_LT((d.rho - bell_density().rho).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_THROW(reduced_density(rho, 3), DomainError);
}

TEST(CertifiedCutoff, AtLeastDefault) {
    const QuasiWernerParams p{1.2, 0.3, 2, 0.5, Sign::Plus};
    EXPECT_GE(certified_cutoff(p), default_cutoff(p));
    EXPECT_EQ(certified_cutoff(p, 200), 200);
}

TEST(Wootters, Examples) {
    const QubitDensity4 mixed{Eigen::Matrix4cd::Identity() / 4.0};
    EXPECT_NEAR(wootters_concurrence(mixed), 0.0, 1e-14);
    EXPECT_NEAR(wootters_concurrence(bell_density()), 1.0, 1e-12);
    Eigen::Vector4cd prod(1.0, 0.0, 0.0, 0.0);
    EXPECT_NEAR(wootters_concurrence({prod * prod.adjoint()}), 0.0, 1e-12);
    // Werner state: max(0, (3a - 1)/2)
    for (double a : {0.2, 0.6, 0.9}) {
        const QubitDensity4 w{a * bell_density().rho + (1.0 - a) / 4.0 * Eigen::Matrix4cd::Identity()};
        EXPECT_NEAR(wootters_concurrence(w), std::max(0.0, 1.5 * a - 0.5), 1e-12);
    }
}

TEST(DiscordBruteforce, Examples) {
    EXPECT_NEAR(discord_bruteforce({Eigen::Matrix4cd::Identity() / 4.0}).discord, 0.0, 1e-12);
    EXPECT_NEAR(discord_bruteforce(bell_density()).discord, 1.0, 1e-10);
    EXPECT_NEAR(discord_bruteforce(bell_density(), 90, 8, 1).discord, 1.0, 1e-10);
    Eigen::Vector4cd prod(0.6, 0.8, 0.0, 0.0);
    EXPECT_NEAR(discord_bruteforce({prod * prod.adjoint()}).discord, 0.0, 1e-9);
}

TEST(DiscordBruteforce, Errors) {
    EXPECT_THROW(discord_bruteforce(bell_density(), 89, 8), DomainError);
    EXPECT_THROW(discord_bruteforce(bell_density(), 90, 7), DomainError);
    EXPECT_THROW(discord_bruteforce(bell_density(), 90, 8, 3), DomainError);
    QubitDensity4 bad = bell_density();
    bad.rho(0, 0) += 0.1;
    EXPECT_THROW(discord_bruteforce(bad), InvalidDensityError);
}

TEST(FidelityOracle, VacuumResourceGivesClassicalValue) {
    const QuasiWernerParams p{0.0, 0.0, 0, 1.0, Sign::Plus};
    const InputState in = CoherentInput{{0.4, 0.1}};
    const auto rho = quasi_werner_density(p, fidelity_cutoff(p, in));
    const double f = fidelity_quadrature_oracle(in, rho);
    EXPECT_NEAR(f, 0.5, 1e-6);
    EXPECT_NEAR(teleport::fidelity(in, p, MixedPartConvention::SubspaceIdentity, QuadratureConfig{}).value, f, 1e-6);
}

TEST(FidelityOracle, StableUnderCutoffDoubling) {
    const QuasiWernerParams p{0.67, 0.67, 1, 0.7, Sign::Minus};
    const InputState in = CoherentInput{0.0};
    const int n = fidelity_cutoff(p, in);
    const double f1 = fidelity_quadrature_oracle(in, quasi_werner_density(p, n));
    const double f2 = fidelity_quadrature_oracle(in, quasi_werner_density(p, 2 * n));
    EXPECT_NEAR(f1, f2, 1e-9);
}
