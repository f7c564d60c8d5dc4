#pragma once

// Photon-added coherent states, their bipartite superpositions and the
// even/odd quasi-Bell basis in which the quasi-Werner family is a two-qubit
// density matrix.
//
// Every normalization is written in terms of the overlap
//   r(xi) = <-xi,m|xi,m> = e^{-2|xi|^2} L_m(|xi|^2) / L_m(-|xi|^2),
// which is algebraically identical to the exponential forms but cannot
// overflow for large amplitudes.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "qwerner/errors.hpp"
#include "qwerner/specfun.hpp"

namespace qwerner {

/// Coherent amplitudes above this modulus are rejected.
inline constexpr double kMaxAmplitude = 50.0;
/// Normalization denominators below this are treated as a vanishing state.
inline constexpr double kDegenerateThreshold = 1e-300;

/// Channel description: rho(psi^sign, a) = (1-a) I/4 + a |psi^sign><psi^sign|.
struct QuasiWernerParams {
    Complex alpha{0.0};
    Complex beta{0.0};
    int m = 0;
    double a = 1.0;
    Sign sign = Sign::Plus;

    void validate() const {
        auto check_amp = [](Complex v, const char* name) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > kMaxAmplitude)
                throw DomainError(std::string("QuasiWernerParams: ") + name + " must be finite with modulus <= 50");
        };
        check_amp(alpha, "alpha");
        check_amp(beta, "beta");
        if (m < 0) throw DomainError("QuasiWernerParams: m must be non-negative");
        if (!(a >= 0.0 && a <= 1.0)) throw DomainError("QuasiWernerParams: mixing parameter outside [0,1]");
        if (sign == Sign::Minus && alpha == Complex{0.0} && beta == Complex{0.0})
            throw DegenerateStateError("QuasiWernerParams: odd superposition vanishes at alpha = beta = 0");
    }
};

/// Moduli of the two quasi-Bell coefficients (times 2) of the pure state.
///
/// chi0 always multiplies the basis vector whose second-mode label is '+',
/// so the measurement probabilities take the same form for both signs.
struct SchmidtAmplitudes {
    double chi0 = 0.0;
    double chi1 = 0.0;
};

/// <-alpha,m|alpha,m>; real because it depends on |alpha|^2 only.
inline double photon_added_overlap(Complex alpha, int m) {
    const double x = std::norm(alpha);
    if (2.0 * x > specfun::kMaxExponent) return 0.0;
    return std::exp(-2.0 * x) * specfun::laguerre(m, x) / specfun::laguerre(m, -x);
}

/// 1 / n_sign^xi = sqrt(2 (1 +/- r(xi))); zero for the odd state at xi = 0.
inline double inverse_cat_norm(Sign sign, Complex xi, int m) {
    const double d = 1.0 + sign_value(sign) * photon_added_overlap(xi, m);
    return d < kDegenerateThreshold ? 0.0 : std::sqrt(2.0 * d);
}

/// n_sign^xi of the single-mode even/odd photon-added superposition.
inline double cat_norm(Sign sign, Complex xi, int m) {
    const double inv = inverse_cat_norm(sign, xi, m);
    if (inv == 0.0) throw DegenerateStateError("cat_norm: odd superposition vanishes at zero amplitude");
    return 1.0 / inv;
}

/// N_sign of N [ |alpha,beta,m> +/- |-alpha,-beta,m> ].
inline double superposition_norm(Sign sign, Complex alpha, Complex beta, int m) {
    const double d = 1.0 + sign_value(sign) * photon_added_overlap(alpha, m) * photon_added_overlap(beta, m);
    if (d < kDegenerateThreshold) throw DegenerateStateError("superposition_norm: state vanishes identically");
    return std::sqrt(1.0 / (2.0 * d));
}

/// Coefficients of |psi> in the ordered basis {|++>, |+->, |-+>, |-->}.
inline std::array<double, 4> pure_coefficients(const QuasiWernerParams& p) {
    p.validate();
    const double big_n = superposition_norm(p.sign, p.alpha, p.beta, p.m);
    const double ia_p = inverse_cat_norm(Sign::Plus, p.alpha, p.m);
    const double ia_m = inverse_cat_norm(Sign::Minus, p.alpha, p.m);
    const double ib_p = inverse_cat_norm(Sign::Plus, p.beta, p.m);
    const double ib_m = inverse_cat_norm(Sign::Minus, p.beta, p.m);
    if (p.sign == Sign::Plus) return {0.5 * big_n * ia_p * ib_p, 0.0, 0.0, 0.5 * big_n * ia_m * ib_m};
    return {0.0, 0.5 * big_n * ia_p * ib_m, 0.5 * big_n * ia_m * ib_p, 0.0};
}

inline SchmidtAmplitudes schmidt_amplitudes(const QuasiWernerParams& p) {
    const auto c = pure_coefficients(p);
    if (p.sign == Sign::Plus) return {2.0 * c[0], 2.0 * c[3]};
    return {2.0 * c[2], 2.0 * c[1]};
}

}  // namespace qwerner
