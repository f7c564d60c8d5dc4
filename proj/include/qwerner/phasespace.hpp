#pragma once

// Wigner functions of photon-added coherent states, their superpositions and
// the quasi-Werner mixtures; Wigner logarithmic negativity; the interference
// minima locus. Phase-space points use z = q + i p.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qwerner/errors.hpp"
#include "qwerner/quadrature.hpp"
#include "qwerner/specfun.hpp"
#include "qwerner/states.hpp"

namespace qwerner {

/// How the (1-a) I/4 part of the quasi-Werner state is represented.
///  SubspaceIdentity: I is the identity on the four-dimensional quasi-Bell span,
///                    so the Wigner function stays normalized.
///  PaperFlat:        the constant (1-a)/(4 pi^2); only integrable at a = 1.
enum class MixedPartConvention { SubspaceIdentity, PaperFlat };

enum class LogBase { Natural, Two };

struct PhasePoint2 {
    Complex z1;
    Complex z2;
};

namespace phasespace {

inline constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

/// Wigner function of |alpha,m><alpha,m|.
inline double wigner_direct(Complex alpha, int m, Complex z) {
    const double lag = specfun::laguerre(m, std::norm(2.0 * z - alpha));
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    return kTwoOverPi * parity * lag * std::exp(-2.0 * std::norm(z - alpha)) / specfun::laguerre(m, -std::norm(alpha));
}

/// Wigner function of the operator |alpha,m><-alpha,m|; the reverse operator
/// has the complex-conjugate Wigner function.
inline Complex wigner_interference(Complex alpha, int m, Complex z) {
    const Complex lag = specfun::laguerre(m, (2.0 * z - alpha) * (2.0 * std::conj(z) + std::conj(alpha)));
    const double parity = (m % 2 == 0) ? 1.0 : -1.0;
    const Complex phase = std::exp(-2.0 * std::norm(z) - 2.0 * z * std::conj(alpha) + 2.0 * std::conj(z) * alpha);
    return kTwoOverPi * parity * lag * phase / specfun::laguerre(m, -std::norm(alpha));
}

/// The three single-mode pieces at one point.
struct ModePieces {
    double direct_plus;   // W of |xi,m><xi,m|
    double direct_minus;  // W of |-xi,m><-xi,m|
    Complex cross;        // W of |xi,m><-xi,m|
};

inline ModePieces mode_pieces(Complex xi, int m, Complex z) {
    return {wigner_direct(xi, m, z), wigner_direct(-xi, m, z), wigner_interference(xi, m, z)};
}

inline double cat_from_pieces(Sign sign, Complex xi, int m, const ModePieces& w) {
    const double n = cat_norm(sign, xi, m);
    return n * n * (w.direct_plus + w.direct_minus + 2.0 * sign_value(sign) * w.cross.real());
}

/// Normalized Wigner function of the even (+) or odd (-) superposition.
inline double wigner_cat(Sign sign, Complex alpha, int m, Complex z) {
    return cat_from_pieces(sign, alpha, m, mode_pieces(alpha, m, z));
}

/// Wigner function of the quasi-Bell basis state; at zero amplitude the odd
/// state is taken as its limit |m+1>.
inline double wigner_basis_state(Sign sign, Complex xi, int m, const ModePieces& w, Complex z) {
    if (inverse_cat_norm(sign, xi, m) == 0.0) return wigner_direct(Complex{0.0}, m + 1, z);
    return cat_from_pieces(sign, xi, m, w);
}

/// W of I_2/2 on the even/odd span of one mode.
inline double wigner_half_identity(Complex xi, int m, const ModePieces& w, Complex z) {
    return 0.5 * (wigner_basis_state(Sign::Plus, xi, m, w, z) + wigner_basis_state(Sign::Minus, xi, m, w, z));
}

/// Weights that assemble the two-mode Wigner function from per-mode pieces.
struct TwoModeWeights {
    double pure = 0.0;   // a N^2
    double sign = 1.0;   // +/-1 in front of the interference products
    double mixed = 0.0;  // (1-a) for SubspaceIdentity
    double flat = 0.0;   // (1-a)/(4 pi^2) for PaperFlat
};

inline TwoModeWeights two_mode_weights(const QuasiWernerParams& p, MixedPartConvention conv) {
    p.validate();
    const double n = superposition_norm(p.sign, p.alpha, p.beta, p.m);
    TwoModeWeights w;
    w.pure = p.a * n * n;
    w.sign = sign_value(p.sign);
    if (conv == MixedPartConvention::SubspaceIdentity)
        w.mixed = 1.0 - p.a;
    else
        w.flat = (1.0 - p.a) / (4.0 * std::numbers::pi * std::numbers::pi);
    return w;
}

/// Two-mode Wigner function of rho(psi^sign, a).
inline double wigner_quasi_werner(const QuasiWernerParams& p, const PhasePoint2& z, MixedPartConvention conv) {
    const auto w = two_mode_weights(p, conv);
    const auto f = mode_pieces(p.alpha, p.m, z.z1);
    const auto g = mode_pieces(p.beta, p.m, z.z2);
    double value = w.pure * (f.direct_plus * g.direct_plus + f.direct_minus * g.direct_minus +
                             2.0 * w.sign * (f.cross * g.cross).real());
    if (w.mixed != 0.0)
        value += w.mixed * wigner_half_identity(p.alpha, p.m, f, z.z1) * wigner_half_identity(p.beta, p.m, g, z.z2);
    return value + w.flat;
}

/// Single-mode Wigner function of the reduced state of mode 1 (alpha) or 2 (beta).
///
/// The pure part is diagonal in the even/odd basis of the kept mode because
/// the traced-out basis states are orthogonal.
inline double reduced_wigner(const QuasiWernerParams& p, int mode_index, Complex z, MixedPartConvention conv) {
    if (mode_index != 1 && mode_index != 2) throw DomainError("reduced_wigner: mode index must be 1 or 2");
    const auto c = pure_coefficients(p);
    if (conv == MixedPartConvention::PaperFlat && p.a < 1.0)
        throw NonIntegrableConventionError("reduced_wigner: flat mixed part has no finite marginal for a < 1");
    const Complex xi = mode_index == 1 ? p.alpha : p.beta;
    // c indices: 0 = ++, 1 = +-, 2 = -+, 3 = --
    const double w_plus = mode_index == 1 ? c[0] * c[0] + c[1] * c[1] : c[0] * c[0] + c[2] * c[2];
    const double w_minus = mode_index == 1 ? c[2] * c[2] + c[3] * c[3] : c[1] * c[1] + c[3] * c[3];
    const auto pieces = mode_pieces(xi, p.m, z);
    double value = 0.0;
    if (w_plus > 0.0) value += w_plus * wigner_basis_state(Sign::Plus, xi, p.m, pieces, z);
    if (w_minus > 0.0) value += w_minus * wigner_basis_state(Sign::Minus, xi, p.m, pieces, z);
    value *= p.a;
    if (conv == MixedPartConvention::SubspaceIdentity && p.a < 1.0)
        value += (1.0 - p.a) * wigner_half_identity(xi, p.m, pieces, z);
    return value;
}

// ---------------------------------------------------------------------------
// Wigner logarithmic negativity

inline double apply_log(double integral, LogBase base) {
    return base == LogBase::Natural ? std::log(integral) : std::log2(integral);
}

struct WlnResult {
    double value = 0.0;          // log of the integral
    double abs_integral = 0.0;   // integral of |W|
    double error_estimate = 0.0; // on abs_integral
};

/// Default truncation half width for the state family.
inline double default_half_width(const QuasiWernerParams& p) {
    return 2.0 * std::max(std::abs(p.alpha), std::abs(p.beta)) + 4.0 + std::sqrt(2.0 * p.m + 1.0);
}

/// WLN of an arbitrary single-mode Wigner function w(z).
template <typename W>
WlnResult wln_single(W&& w, double default_width, const QuadratureConfig& cfg, LogBase base = LogBase::Natural) {
    auto r = quad::adaptive_plane_converged([&](double q, double p) { return std::abs(w(Complex{q, p})); },
                                            default_width, cfg);
    const double floor_value = -10.0 * cfg.abs_tol;
    WlnResult out{apply_log(r.value, base), r.value, r.error_estimate};
    if (out.value < floor_value) throw ConvergenceError("wln_single: integral of |W| below one beyond tolerance");
    return out;
}

/// WLN of the reduced single-mode state.
inline WlnResult wln_reduced(const QuasiWernerParams& p, int mode_index, MixedPartConvention conv,
                             const QuadratureConfig& cfg, LogBase base = LogBase::Natural) {
    if (conv == MixedPartConvention::PaperFlat && p.a < 1.0)
        throw NonIntegrableConventionError("wln: flat mixed part is not integrable for a < 1");
    return wln_single([&](Complex z) { return reduced_wigner(p, mode_index, z, conv); }, default_half_width(p), cfg,
                      base);
}

/// Real rank-5 factorization of the two-mode Wigner function:
/// W(z1, z2) = sum_k F_k(z1) G_k(z2).
inline std::array<double, 5> first_mode_factors(const QuasiWernerParams& p, const TwoModeWeights& w, Complex z) {
    const auto f = mode_pieces(p.alpha, p.m, z);
    const double mix = w.mixed != 0.0 ? w.mixed * wigner_half_identity(p.alpha, p.m, f, z) : 0.0;
    const double s = 2.0 * w.sign * w.pure;
    return {w.pure * f.direct_plus, w.pure * f.direct_minus, s * f.cross.real(), -s * f.cross.imag(), mix};
}

inline std::array<double, 5> second_mode_factors(const QuasiWernerParams& p, const TwoModeWeights& w, Complex z) {
    const auto g = mode_pieces(p.beta, p.m, z);
    const double mix = w.mixed != 0.0 ? wigner_half_identity(p.beta, p.m, g, z) : 0.0;
    return {g.direct_plus, g.direct_minus, g.cross.real(), g.cross.imag(), mix};
}

/// Integral of W (absolute = false) or |W| over both planes on one lattice.
inline double two_mode_lattice_integral(const QuasiWernerParams& p, MixedPartConvention conv, double half_width,
                                        double step, bool absolute, int jobs) {
    if (conv == MixedPartConvention::PaperFlat && p.a < 1.0)
        throw NonIntegrableConventionError("two-mode integral: flat mixed part is not integrable for a < 1");
    const auto w = two_mode_weights(p, conv);
    auto f = [&](double q, double pp) { return first_mode_factors(p, w, Complex{q, pp}); };
    auto g = [&](double q, double pp) { return second_mode_factors(p, w, Complex{q, pp}); };
    // rho commutes with the joint parity, so W(-z1, -z2) = W(z1, z2).
    const auto t1 = quad::tabulate<5>(f, half_width, step, true);
    const auto t2 = quad::tabulate<5>(g, half_width, step);
    return quad::tensor_sum(t1, t2, absolute, jobs);
}

/// Converged two-mode integral: lattice step and domain are refined until
/// both changes fall below `tol`.
inline QuadratureResult<double> two_mode_integral(const QuasiWernerParams& p, MixedPartConvention conv,
                                                  const QuadratureConfig& cfg, bool absolute, double tol,
                                                  double initial_step = 0.125) {
    cfg.validate();
    double R = cfg.initial_half_width > 0.0 ? cfg.initial_half_width : default_half_width(p);
    double h = initial_step;
    double base = two_mode_lattice_integral(p, conv, R, h, absolute, cfg.jobs);
    for (int level = 0; level < cfg.max_levels; ++level) {
        const double wider = R * cfg.refinement_factor;
        const double finer = h / cfg.refinement_factor;
        const double dom = two_mode_lattice_integral(p, conv, wider, h, absolute, cfg.jobs);
        const double dc = std::abs(dom - base);
        if (dc >= tol) {
            R = wider;
            base = dom;
            continue;
        }
        const double mesh = two_mode_lattice_integral(p, conv, R, finer, absolute, cfg.jobs);
        const double mc = std::abs(mesh - base);
        if (mc < tol) return {mesh, std::max(dc, mc), 0, R};
        h = finer;
        base = mesh;
    }
    throw ConvergenceError("two_mode_integral: no convergence after " + std::to_string(cfg.max_levels) + " levels");
}

/// Two-mode WLN of rho(psi^sign, a).
inline WlnResult wln(const QuasiWernerParams& p, MixedPartConvention conv, const QuadratureConfig& cfg,
                     LogBase base = LogBase::Natural) {
    if (conv == MixedPartConvention::PaperFlat && p.a < 1.0)
        throw NonIntegrableConventionError("wln: flat mixed part is not integrable for a < 1");
    const auto r = two_mode_integral(p, conv, cfg, true, cfg.two_mode_abs_tol);
    WlnResult out{apply_log(r.value, base), r.value, r.error_estimate};
    if (out.value < -10.0 * cfg.abs_tol) throw ConvergenceError("wln: integral of |W| below one beyond tolerance");
    return out;
}

// ---------------------------------------------------------------------------
// Interference minima

/// The phase condition 4(p1 alpha + p2 beta) = phase on which the interference
/// term of the two-mode Wigner function is most negative (q1 = q2 = 0, real
/// amplitudes): phase = (2j+1) pi for psi+ and 2 j pi for psi-.
struct MinimaLocus {
    Sign sign = Sign::Plus;
    int j = 0;
    double phase = std::numbers::pi;

    double beta_for(double p1, double p2, double alpha) const {
        if (p2 == 0.0) throw DomainError("MinimaLocus: p2 must be non-zero to solve for beta");
        return (phase - 4.0 * p1 * alpha) / (4.0 * p2);
    }
    double p2_for(double p1, double alpha, double beta) const {
        if (beta == 0.0) throw DomainError("MinimaLocus: beta must be non-zero to solve for p2");
        return (phase - 4.0 * p1 * alpha) / (4.0 * beta);
    }
};

inline MinimaLocus wigner_minima_locus(Sign sign, int j) {
    if (j < 0) throw DomainError("wigner_minima_locus: j must be non-negative");
    const double phase = sign == Sign::Plus ? (2.0 * j + 1.0) * std::numbers::pi : 2.0 * j * std::numbers::pi;
    return {sign, j, phase};
}

/// Same, checking that the parameters carry real amplitudes.
inline MinimaLocus wigner_minima_locus(const QuasiWernerParams& p, int j) {
    if (p.alpha.imag() != 0.0 || p.beta.imag() != 0.0)
        throw DomainError("wigner_minima_locus: amplitudes must be real");
    return wigner_minima_locus(p.sign, j);
}

// ---------------------------------------------------------------------------
// Grids

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int n = 1;

    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
    void validate(const char* name) const {
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError(std::string("grid axis ") + name + " not finite");
        if (n < 1 || (n == 1 && lo != hi) || (n >= 2 && !(hi > lo)))
            throw DomainError(std::string("grid axis ") + name + ": need n >= 2 and hi > lo, or a single fixed value");
    }
};

struct GridSpec {
    Axis q1, p1, q2, p2;
};

struct GridRow {
    double q1, p1, q2, p2, w;
};

/// Row-major (q1 slowest, p2 fastest) table of the two-mode Wigner function.
inline std::vector<GridRow> wigner_grid(const QuasiWernerParams& p, const GridSpec& g, MixedPartConvention conv,
                                        int jobs = 1) {
    g.q1.validate("q1");
    g.p1.validate("p1");
    g.q2.validate("q2");
    g.p2.validate("p2");
    p.validate();
    const std::size_t total = static_cast<std::size_t>(g.q1.n) * g.p1.n * g.q2.n * g.p2.n;
    std::vector<GridRow> rows(total);
    parallel_for(total, jobs, [&](std::size_t idx) {
        std::size_t r = idx;
        const int l = static_cast<int>(r % g.p2.n);
        r /= g.p2.n;
        const int k = static_cast<int>(r % g.q2.n);
        r /= g.q2.n;
        const int j = static_cast<int>(r % g.p1.n);
        const int i = static_cast<int>(r / g.p1.n);
        GridRow row{g.q1.at(i), g.p1.at(j), g.q2.at(k), g.p2.at(l), 0.0};
        row.w = wigner_quasi_werner(p, {Complex{row.q1, row.p1}, Complex{row.q2, row.p2}}, conv);
        rows[idx] = row;
    });
    return rows;
}

}  // namespace phasespace
}  // namespace qwerner
