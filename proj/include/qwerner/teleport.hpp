#pragma once

// Characteristic functions and Braunstein-Kimble teleportation fidelity
//   F = (1/pi) \int d^2mu chi_in(mu) chi_in(-mu) chi_ch(-mu*, -mu)
// for coherent and squeezed-vacuum inputs sent through rho(psi^sign, a).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "qwerner/errors.hpp"
#include "qwerner/phasespace.hpp"
#include "qwerner/quadrature.hpp"
#include "qwerner/specfun.hpp"
#include "qwerner/states.hpp"

namespace qwerner {

struct CoherentInput {
    Complex gamma{0.0};
};

/// Squeezed vacuum S(zeta)|0> with zeta = s e^{i phi}.
struct SqueezedInput {
    double s = 0.0;
    double phi = 0.0;

    void validate() const {
        if (!(s >= 0.0 && s <= 3.0)) throw DomainError("SqueezedInput: s must lie in [0, 3]");
        if (!std::isfinite(phi)) throw DomainError("SqueezedInput: phi not finite");
    }
};

using InputState = std::variant<CoherentInput, SqueezedInput>;

/// Closed form used for the pure-channel characteristic function.
///  Derived:   built from <x,m|D(z)|y,m> matrix elements; agrees with the
///             truncated Fock contraction.
///  Published: the printed L_m^{+/-}(alpha* z + |alpha|^2, ...) expression,
///             exact for m = 0 only; kept to reproduce published curves.
enum class ChannelFormula { Derived, Published };

struct FidelityResult {
    double value = 0.0;
    double quadrature_error_estimate = 0.0;
    std::size_t evals = 0;
};

namespace teleport {

inline Complex chi_coherent(const CoherentInput& in, Complex mu) {
    return std::exp(-0.5 * std::norm(mu) + std::conj(in.gamma) * mu - in.gamma * std::conj(mu));
}

inline Complex chi_squeezed(const SqueezedInput& in, Complex mu) {
    const Complex mu_s = mu * std::cosh(in.s) + std::conj(mu) * std::polar(1.0, -in.phi) * std::sinh(in.s);
    return std::exp(-0.5 * std::norm(mu_s));
}

inline Complex chi_input(const InputState& in, Complex mu) {
    return std::visit(
        [&](const auto& v) -> Complex {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, CoherentInput>)
                return chi_coherent(v, mu);
            else
                return chi_squeezed(v, mu);
        },
        in);
}

/// <bra| a^m D(z) a^{dagger m} |ket> for coherent bra/ket.
///
/// D(z) a^{dagger m} = (a^dagger - z*)^m D(z), and normal ordering
/// a^m (a^dagger - z*)^m between coherent states gives
///   m! e^{(z ket* - z* ket)/2} <bra|ket + z> 1F1(-m; 1; -(bra* - z*)(ket + z)).
inline Complex displaced_matrix_element(Complex bra, Complex ket, int m, Complex z) {
    const Complex w = ket + z;
    const Complex log_overlap = -0.5 * std::norm(bra) - 0.5 * std::norm(w) + std::conj(bra) * w;
    const Complex log_phase = 0.5 * (z * std::conj(ket) - std::conj(z) * ket);
    const Complex lead = log_overlap + log_phase;
    if (lead.real() > specfun::kMaxExponent) throw RescaleError("displaced_matrix_element: exponent overflow");
    double factorial = 1.0;
    for (int k = 2; k <= m; ++k) factorial *= k;
    return factorial * std::exp(lead) * specfun::kummer_1f1(-m, 1, -(std::conj(bra) - std::conj(z)) * w);
}

/// <alpha| a^m D(z) a^{dagger m} |alpha>.
inline Complex displaced_matrix_element(Complex alpha, int m, Complex z) {
    return displaced_matrix_element(alpha, alpha, m, z);
}

/// <bra,m| D(z) |ket,m> between normalized photon-added states with |bra| = |ket|.
inline Complex pacs_displacement(Complex bra, Complex ket, int m, Complex z) {
    double factorial = 1.0;
    for (int k = 2; k <= m; ++k) factorial *= k;
    return displaced_matrix_element(bra, ket, m, z) / (factorial * specfun::laguerre(m, -std::norm(ket)));
}

namespace detail {
inline Complex chi_pure_derived(const QuasiWernerParams& p, Complex z1, Complex z2) {
    const double n = superposition_norm(p.sign, p.alpha, p.beta, p.m);
    const Complex a = p.alpha, b = p.beta;
    const int m = p.m;
    const Complex direct = pacs_displacement(a, a, m, z1) * pacs_displacement(b, b, m, z2) +
                           pacs_displacement(-a, -a, m, z1) * pacs_displacement(-b, -b, m, z2);
    const Complex cross = pacs_displacement(a, -a, m, z1) * pacs_displacement(b, -b, m, z2) +
                          pacs_displacement(-a, a, m, z1) * pacs_displacement(-b, b, m, z2);
    return n * n * (direct + sign_value(p.sign) * cross);
}

inline Complex chi_pure_published(const QuasiWernerParams& p, Complex z1, Complex z2) {
    using specfun::lm_pm;
    const double A = std::norm(p.alpha), B = std::norm(p.beta);
    const Complex a = p.alpha, b = p.beta;
    const Complex ca = std::conj(a), cb = std::conj(b);
    const Complex cz1 = std::conj(z1), cz2 = std::conj(z2);
    const Complex pre = std::exp(-0.5 * std::norm(z1) - 0.5 * std::norm(z2)) / (2.0 * lm_pm(p.sign, p.m, A, B));
    const Complex t1 = std::exp(-a * cz1 - b * cz2) * lm_pm(p.sign, p.m, ca * z1 + A, cb * z2 + B);
    const Complex t2 = std::exp(a * cz1 + b * cz2) * lm_pm(p.sign, p.m, ca * z1 - A, cb * z2 - B);
    return pre * (t1 + sign_value(p.sign) * t2);
}
}  // namespace detail

/// tr[|psi><psi| D(z1) D(z2)] for the pure channel (the mixing parameter is ignored).
inline Complex chi_channel_pure(const QuasiWernerParams& p, Complex z1, Complex z2,
                                ChannelFormula formula = ChannelFormula::Derived) {
    p.validate();
    return formula == ChannelFormula::Derived ? detail::chi_pure_derived(p, z1, z2)
                                              : detail::chi_pure_published(p, z1, z2);
}

/// tr[(I_2/2) D(z)] on the even/odd span of one mode.
inline Complex chi_half_identity(Complex xi, int m, Complex z) {
    if (inverse_cat_norm(Sign::Minus, xi, m) == 0.0) {
        // Zero amplitude: the span is {|m>, |m+1>}.
        const double x = std::norm(z);
        return 0.5 * std::exp(-0.5 * x) * (specfun::laguerre(m, x) + specfun::laguerre(m + 1, x));
    }
    const double np = cat_norm(Sign::Plus, xi, m), nm = cat_norm(Sign::Minus, xi, m);
    const Complex direct = pacs_displacement(xi, xi, m, z) + pacs_displacement(-xi, -xi, m, z);
    const Complex cross = pacs_displacement(xi, -xi, m, z) + pacs_displacement(-xi, xi, m, z);
    return 0.5 * ((np * np + nm * nm) * direct + (np * np - nm * nm) * cross);
}

/// tr[rho(psi^sign, a) D(z1) D(z2)].
inline Complex chi_channel(const QuasiWernerParams& p, Complex z1, Complex z2, MixedPartConvention conv,
                           ChannelFormula formula = ChannelFormula::Derived) {
    p.validate();
    if (p.a < 1.0 && conv == MixedPartConvention::PaperFlat)
        throw UnsupportedConventionError("chi_channel: the flat mixed part has no characteristic function");
    Complex value = p.a * chi_channel_pure(p, z1, z2, formula);
    if (p.a < 1.0) value += (1.0 - p.a) * chi_half_identity(p.alpha, p.m, z1) * chi_half_identity(p.beta, p.m, z2);
    return value;
}

/// Half width of the truncated mu-plane.
inline double fidelity_half_width(const QuasiWernerParams& p, const InputState& in) {
    double s = 0.0;
    if (const auto* sq = std::get_if<SqueezedInput>(&in)) s = sq->s;
    return 6.0 + 2.0 * std::max(std::abs(p.alpha), std::abs(p.beta)) + s * std::exp(s);
}

inline constexpr double kFidelityStep = 0.25;

/// Teleportation fidelity of `in` through the channel.
inline FidelityResult fidelity(const InputState& in, const QuasiWernerParams& p, MixedPartConvention conv,
                               const QuadratureConfig& cfg, ChannelFormula formula = ChannelFormula::Derived) {
    p.validate();
    if (const auto* sq = std::get_if<SqueezedInput>(&in)) sq->validate();
    if (p.a < 1.0 && conv == MixedPartConvention::PaperFlat)
        throw UnsupportedConventionError("fidelity: the flat mixed part is not supported (delta-function term)");
    auto integrand = [&](double q, double pp) {
        const Complex mu{q, pp};
        return chi_input(in, mu) * chi_input(in, -mu) * chi_channel(p, -std::conj(mu), -mu, conv, formula);
    };
    const auto r = quad::uniform_plane_converged<Complex>(integrand, fidelity_half_width(p, in), kFidelityStep, cfg);
    const Complex value = r.value / std::numbers::pi;
    if (std::abs(value.imag()) > 1e-8)
        throw ConvergenceError("fidelity: imaginary residue " + std::to_string(value.imag()) + " exceeds 1e-8");
    FidelityResult out{value.real(), r.error_estimate / std::numbers::pi, r.evals};
    if (out.value < -1e-8 || out.value > 1.0 + 1e-8)
        throw DomainError("fidelity: value " + std::to_string(out.value) + " outside [0, 1]");
    return out;
}

/// Phase-averaged squeezed-vacuum fidelity at fixed s (trapezoid on the periodic grid).
inline double average_fidelity_squeezed(const QuasiWernerParams& p, double s, int resolution,
                                        MixedPartConvention conv, const QuadratureConfig& cfg,
                                        ChannelFormula formula = ChannelFormula::Derived) {
    if (resolution < 8) throw DomainError("average_fidelity_squeezed: need at least 8 phase samples");
    double sum = 0.0;
    for (int k = 0; k < resolution; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / resolution;
        sum += fidelity(SqueezedInput{s, phi}, p, conv, cfg, formula).value;
    }
    return sum / resolution;
}

// ---------------------------------------------------------------------------
// Sweeps

/// One curve of a fidelity sweep: every parameter except the mixing parameter.
struct FidelityCurveKey {
    InputState input;
    Complex alpha;
    Complex beta;
    int m;
    Sign sign;
};

struct FidelityRow {
    FidelityCurveKey key;
    double a;
    FidelityResult result;
};

struct FidelityCurveSummary {
    FidelityCurveKey key;
    double max_fidelity;
    double argmax_a;
};

struct FidelitySweep {
    std::vector<FidelityRow> rows;
    std::vector<FidelityCurveSummary> curves;
};

/// Evaluates every curve on the grid of mixing parameters `a_values`.
///
/// The characteristic function is affine in a, so each curve is integrated
/// once at a = 1 and once at a = 0 and interpolated exactly; with
/// PaperFlat only a = 1 is accepted.
inline FidelitySweep fidelity_sweep(const std::vector<FidelityCurveKey>& curves, const std::vector<double>& a_values,
                                    MixedPartConvention conv, const QuadratureConfig& cfg,
                                    ChannelFormula formula = ChannelFormula::Derived) {
    if (a_values.empty()) throw DomainError("fidelity_sweep: empty mixing-parameter axis");
    for (double a : a_values)
        if (!(a >= 0.0 && a <= 1.0)) throw DomainError("fidelity_sweep: mixing parameter outside [0,1]");
    const bool need_mixed = std::any_of(a_values.begin(), a_values.end(), [](double a) { return a < 1.0; });
    const bool need_pure = std::any_of(a_values.begin(), a_values.end(), [](double a) { return a > 0.0; });
    struct Ends {
        FidelityResult pure, mixed;
    };
    std::vector<Ends> ends(curves.size());
    QuadratureConfig inner = cfg;
    inner.jobs = 1;
    parallel_for(curves.size(), cfg.jobs, [&](std::size_t i) {
        const auto& k = curves[i];
        QuasiWernerParams p{k.alpha, k.beta, k.m, 1.0, k.sign};
        if (need_pure) ends[i].pure = fidelity(k.input, p, conv, inner, formula);
        if (need_mixed) {
            p.a = 0.0;
            ends[i].mixed = fidelity(k.input, p, conv, inner, formula);
        }
    });
    FidelitySweep out;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        FidelityCurveSummary summary{curves[i], -1.0, 0.0};
        for (double a : a_values) {
            FidelityResult r;
            if (a == 1.0) {
                r = ends[i].pure;
            } else if (a == 0.0) {
                r = ends[i].mixed;
            } else {
                r.value = a * ends[i].pure.value + (1.0 - a) * ends[i].mixed.value;
                r.quadrature_error_estimate = a * ends[i].pure.quadrature_error_estimate +
                                              (1.0 - a) * ends[i].mixed.quadrature_error_estimate;
                r.evals = ends[i].pure.evals + ends[i].mixed.evals;
            }
            out.rows.push_back({curves[i], a, r});
            if (r.value > summary.max_fidelity) {
                summary.max_fidelity = r.value;
                summary.argmax_a = a;
            }
        }
        out.curves.push_back(summary);
    }
    return out;
}

}  // namespace teleport
}  // namespace qwerner
