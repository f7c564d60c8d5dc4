#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qwerner/oracle/fock.hpp"
#include "qwerner/states.hpp"

using namespace qwerner;

namespace {

constexpr int kCutoff = 48;

// <u|v> over the two-mode coefficient matrices
Complex inner(const oracle::TwoModeVector& u, const oracle::TwoModeVector& v) { return (u.conjugate().cwiseProduct(v)).sum(); }

oracle::CVector pacs(Complex xi, int m) { return oracle::build_pacs(xi, m, kCutoff).coeffs; }

std::vector<QuasiWernerParams> sample_params(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> r(0.0, 1.5), ph(0.0, 2.0 * std::numbers::pi), a(0.0, 1.0);
    std::vector<QuasiWernerParams> out;
    for (int i = 0; i < n; ++i)
        out.push_back({std::polar(r(rng), ph(rng)), std::polar(r(rng), ph(rng)), static_cast<int>(rng() % 4), a(rng),
                       rng() % 2 ? Sign::Plus : Sign::Minus});
    return out;
}

}  // namespace

TEST(SuperpositionNorm, Examples) {
    EXPECT_DOUBLE_EQ(superposition_norm(Sign::Plus, 0.0, 0.0, 0), 0.5);
    for (int m = 0; m <= 4; ++m) EXPECT_THROW(superposition_norm(Sign::Minus, 0.0, 0.0, m), DegenerateStateError);
    // 1 / || |1,2>|1,2> + |-1,2>|-1,2> || with normalized oracle vectors
    const auto raw = oracle::product_vector(pacs(1.0, 2), pacs(1.0, 2)) + oracle::product_vector(pacs(-1.0, 2), pacs(-1.0, 2));
    EXPECT_NEAR(superposition_norm(Sign::Plus, 1.0, 1.0, 2), 1.0 / raw.norm(), 1e-12);
}

TEST(CatNorm, Examples) {
    EXPECT_DOUBLE_EQ(cat_norm(Sign::Plus, 0.0, 0), 0.5);
    // overlap <xi|-xi> = e^{-2|xi|^2}
    EXPECT_NEAR(cat_norm(Sign::Plus, 0.2, 0), 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-0.08))), 1e-15);
    const oracle::CVector odd = pacs(0.2, 1) - pacs(-0.2, 1);
    EXPECT_NEAR(cat_norm(Sign::Minus, 0.2, 1), 1.0 / odd.norm(), 1e-12);
    EXPECT_THROW(cat_norm(Sign::Minus, 0.0, 2), DegenerateStateError);
}

TEST(SchmidtAmplitudes, Examples) {
    const auto s = schmidt_amplitudes({0.0, 1.0, 0, 1.0, Sign::Plus});
    EXPECT_EQ(s.chi1, 0.0);
    EXPECT_NEAR(s.chi0, 2.0, 1e-12);

    // moduli of the quasi-Bell coefficients of the oracle state
    const QuasiWernerParams p{1.2, 1.2, 1, 1.0, Sign::Plus};
    const auto psi = oracle::superposition_state(p.sign, p.alpha, p.beta, p.m, kCutoff);
    const auto basis = oracle::quasi_bell_basis(p.alpha, p.beta, p.m, kCutoff);
    const auto chi = schmidt_amplitudes(p);
    EXPECT_NEAR(std::abs(inner(basis[0], psi)), chi.chi0 / 2.0, 1e-10);
    EXPECT_NEAR(std::abs(inner(basis[3], psi)), chi.chi1 / 2.0, 1e-10);
    EXPECT_LT(std::abs(inner(basis[1], psi)), 1e-10);
    EXPECT_LT(std::abs(inner(basis[2], psi)), 1e-10);
}

TEST(SchmidtAmplitudes, NormalizedEverywhere) {
    for (const auto& p : sample_params(3, 400)) {
        const auto s = schmidt_amplitudes(p);
        EXPECT_GE(s.chi0, 0.0);
        EXPECT_GE(s.chi1, 0.0);
        EXPECT_NEAR(s.chi0 * s.chi0 + s.chi1 * s.chi1, 4.0, 1e-12);
    }
    // large amplitudes, high m
    for (double r : {5.0, 20.0, 49.0})
        for (int m : {0, 5, 10}) {
            const auto s = schmidt_amplitudes({r, 0.7 * r, m, 1.0, Sign::Minus});
            EXPECT_NEAR(s.chi0 * s.chi0 + s.chi1 * s.chi1, 4.0, 1e-12);
        }
}

TEST(PhotonAddedOverlap, Examples) {
    for (int m = 0; m <= 10; ++m) EXPECT_DOUBLE_EQ(photon_added_overlap(0.0, m), 1.0);
    EXPECT_NEAR(photon_added_overlap(1.0, 0), std::exp(-2.0), 1e-16);
    EXPECT_NEAR(photon_added_overlap(1.0, 2), pacs(-1.0, 2).dot(pacs(1.0, 2)).real(), 1e-10);
}

TEST(PhotonAddedOverlap, MatchesOracleForComplexAmplitudes) {
    for (Complex xi : {Complex{0.3, 0.4}, Complex{-1.1, 0.2}, Complex{0.0, 1.5}})
        for (int m = 0; m <= 3; ++m) {
            const Complex ov = pacs(-xi, m).dot(pacs(xi, m));
            EXPECT_NEAR(photon_added_overlap(xi, m), ov.real(), 1e-10);
            EXPECT_LT(std::abs(ov.imag()), 1e-12);
        }
}

TEST(QuasiBellBasis, Orthonormal) {
    for (Complex al : {Complex{0.3}, Complex{0.9, -0.4}, Complex{1.5}})
        for (int m = 0; m <= 3; ++m) {
            const auto b = oracle::quasi_bell_basis(al, 0.6 * al + 0.2, m, kCutoff);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    EXPECT_LT(std::abs(inner(b[i], b[j]) - (i == j ? 1.0 : 0.0)), 1e-10) << i << j;
        }
}

TEST(QuasiBellBasis, ReconstructsSuperposition) {
    for (const auto& p : sample_params(5, 24)) {
        if (p.sign == Sign::Minus && std::abs(p.alpha) < 1e-3 && std::abs(p.beta) < 1e-3) continue;
        const int n = oracle::certified_cutoff(p);
        const auto b = oracle::quasi_bell_basis(p.alpha, p.beta, p.m, n);
        const auto c = pure_coefficients(p);
        oracle::TwoModeVector built = oracle::TwoModeVector::Zero(n + 1, n + 1);
        for (int k = 0; k < 4; ++k) built += c[k] * b[k];
        const auto psi = oracle::superposition_state(p.sign, p.alpha, p.beta, p.m, n);
        // basis vectors carry no phase freedom beyond the cat definitions, so compare directly
        EXPECT_LT((built - psi).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(States, InvariantUnderAmplitudeFlip) {
    for (const auto& p : sample_params(9, 100)) {
        EXPECT_DOUBLE_EQ(superposition_norm(p.sign, p.alpha, p.beta, p.m),
                         superposition_norm(p.sign, -p.alpha, p.beta, p.m));
        EXPECT_DOUBLE_EQ(superposition_norm(p.sign, p.alpha, p.beta, p.m),
                         superposition_norm(p.sign, p.alpha, -p.beta, p.m));
        for (Sign s : {Sign::Plus, Sign::Minus})
            if (std::abs(p.alpha) > 0.0) {
                EXPECT_DOUBLE_EQ(cat_norm(s, p.alpha, p.m), cat_norm(s, -p.alpha, p.m));
            }
    }
}

TEST(States, StableForLargeAmplitudes) {
    // e^{|alpha|^2} alone would overflow at |alpha| = 30
    EXPECT_NEAR(superposition_norm(Sign::Plus, 30.0, 40.0, 3), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(cat_norm(Sign::Minus, 30.0, 10), std::sqrt(0.5), 1e-15);
}

TEST(QuasiWernerParams, Validation) {
    EXPECT_NO_THROW((QuasiWernerParams{0.2, 0.1, 0, 0.4, Sign::Plus}.validate()));
    EXPECT_THROW((QuasiWernerParams{0.2, 0.1, 0, 1.2, Sign::Plus}.validate()), DomainError);
    EXPECT_THROW((QuasiWernerParams{0.2, 0.1, 0, -0.1, Sign::Plus}.validate()), DomainError);
    EXPECT_THROW((QuasiWernerParams{0.2, 0.1, -1, 0.5, Sign::Plus}.validate()), DomainError);
    EXPECT_THROW((QuasiWernerParams{51.0, 0.1, 0, 0.5, Sign::Plus}.validate()), DomainError);
    EXPECT_THROW((QuasiWernerParams{Complex{std::nan(""), 0.0}, 0.1, 0, 0.5, Sign::Plus}.validate()), DomainError);
    EXPECT_THROW((QuasiWernerParams{0.0, 0.0, 2, 0.5, Sign::Minus}.validate()), DegenerateStateError);
    EXPECT_NO_THROW((QuasiWernerParams{0.0, 0.0, 2, 0.5, Sign::Plus}.validate()));
}

TEST(PureCoefficients, OddStateAtZeroAmplitude) {
    // psi- at alpha = 0 is |m> (x) odd(beta), i.e. |+_alpha -_beta>
    const auto c = pure_coefficients({0.0, 0.8, 1, 1.0, Sign::Minus});
    EXPECT_NEAR(c[1], 1.0, 1e-12);
    EXPECT_EQ(c[2], 0.0);
}
