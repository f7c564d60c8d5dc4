#pragma once

// Two-qubit correlation measures of the quasi-Werner family in the
// quasi-Bell basis: concurrence, entanglement of formation, entropies and
// quantum discord with a von Neumann measurement on the second mode.
// Entropies are in bits.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>

#include "qwerner/errors.hpp"
#include "qwerner/specfun.hpp"
#include "qwerner/states.hpp"

namespace qwerner {

/// Projector angles: |pi0> = cos(theta)|0> + e^{i phi} sin(theta)|1>.
struct MeasurementAngles {
    double theta = 0.0;
    double phi = 0.0;
};

/// 4x4 density matrix in the ordered basis {|+a+b>, |+a-b>, |-a+b>, |-a-b>}.
struct QubitDensity4 {
    Eigen::Matrix4cd rho;

    void validate(double tol = 1e-12, double psd_tol = 1e-10) const {
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw InvalidDensityError("density not Hermitian");
        if (std::abs(rho.trace() - Complex{1.0}) > tol) throw InvalidDensityError("density trace differs from 1");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -psd_tol) throw InvalidDensityError("density has a negative eigenvalue");
    }
};

struct CorrelationReport {
    double concurrence = 0.0;
    double eof = 0.0;
    double discord = 0.0;
    double mutual_information = 0.0;
    MeasurementAngles optimal_angles;
    int optimizer_evals = 0;
};

struct WernerEntropies {
    double joint = 0.0;
    double marginal = 0.0;
};

struct ConditionalState {
    Eigen::Matrix2cd state;
    double probability = 0.0;
};

namespace correlations {

inline QubitDensity4 density_matrix(const QuasiWernerParams& p) {
    const auto c = pure_coefficients(p);
    Eigen::Vector4cd v(c[0], c[1], c[2], c[3]);
    QubitDensity4 out;
    out.rho = (1.0 - p.a) / 4.0 * Eigen::Matrix4cd::Identity() + p.a * v * v.adjoint();
    return out;
}

/// Concurrence of the pure state |psi^sign><psi^sign|; the mixing parameter is ignored.
inline double concurrence_pure(const QuasiWernerParams& p) {
    const auto s = schmidt_amplitudes(p);
    return std::clamp(0.5 * s.chi0 * s.chi1, 0.0, 1.0);
}

inline double concurrence_werner(const QuasiWernerParams& p) {
    const auto s = schmidt_amplitudes(p);
    return std::clamp(p.a * 0.5 * s.chi0 * s.chi1 - 0.5 * (1.0 - p.a), 0.0, 1.0);
}

/// Entanglement of formation from the concurrence.
inline double eof(double concurrence) {
    if (!(concurrence >= 0.0 && concurrence <= 1.0)) throw DomainError("eof: concurrence outside [0,1]");
    return specfun::binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - concurrence * concurrence)));
}

namespace detail {
inline double plog(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }
}  // namespace detail

/// von Neumann entropies of the joint state and of either single-mode marginal.
inline WernerEntropies werner_entropies(const QuasiWernerParams& p) {
    const auto s = schmidt_amplitudes(p);
    const double a = p.a;
    WernerEntropies e;
    e.joint = 3.0 * detail::plog((1.0 - a) / 4.0) + detail::plog((1.0 + 3.0 * a) / 4.0);
    e.marginal = detail::plog((1.0 - a) / 2.0 + a * s.chi0 * s.chi0 / 4.0) +
                 detail::plog((1.0 - a) / 2.0 + a * s.chi1 * s.chi1 / 4.0);
    return e;
}

/// Outcome probability of projector k on the second mode.
inline double outcome_probability(const QuasiWernerParams& p, int k, double theta) {
    const auto s = schmidt_amplitudes(p);
    const double c = std::cos(theta), sn = std::sin(theta);
    const double x0 = k == 0 ? s.chi0 : s.chi1;
    const double x1 = k == 0 ? s.chi1 : s.chi0;
    return 0.5 * (1.0 - p.a) + 0.25 * p.a * (x0 * x0 * c * c + x1 * x1 * sn * sn);
}

/// First-mode state conditioned on outcome k of {|pi0><pi0|, |pi1><pi1|} on
/// the second mode, with |pi1> = -e^{-i phi} sin(theta)|0> + cos(theta)|1>.
inline ConditionalState conditional_state(const QuasiWernerParams& p, int k, const MeasurementAngles& ang) {
    if (k != 0 && k != 1) throw DomainError("conditional_state: outcome must be 0 or 1");
    const auto c = pure_coefficients(p);
    const double ct = std::cos(ang.theta), st = std::sin(ang.theta);
    const Complex e = std::polar(1.0, ang.phi);
    // <pi_k|0>, <pi_k|1>
    const Complex b0 = k == 0 ? Complex{ct} : -e * st;
    const Complex b1 = k == 0 ? std::conj(e) * st : Complex{ct};
    // First-mode vector left by the pure part: sum_y c_{x y} <pi_k|y>.
    Eigen::Vector2cd v(c[0] * b0 + c[1] * b1, c[2] * b0 + c[3] * b1);
    ConditionalState out;
    out.probability = 0.5 * (1.0 - p.a) + p.a * v.squaredNorm();
    if (out.probability <= 0.0) throw DegenerateStateError("conditional_state: outcome has zero probability");
    out.state = ((1.0 - p.a) / 4.0 * Eigen::Matrix2cd::Identity() + p.a * v * v.adjoint()) / out.probability;
    return out;
}

/// Measured conditional entropy sum_k p_k S(rho_k); conditional states have
/// eigenvalues (1-a)/(4 p_k) and 1 - (1-a)/(4 p_k).
inline double measured_conditional_entropy(const QuasiWernerParams& p, double theta) {
    double total = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double pk = outcome_probability(p, k, theta);
        if (pk <= 1e-300) continue;
        total += pk * specfun::binary_entropy(std::clamp((1.0 - p.a) / (4.0 * pk), 0.0, 1.0));
    }
    return total;
}

/// Closed-form discord for one measurement angle; its minimum over theta is the discord.
inline double discord_closed_form(const QuasiWernerParams& p, double theta) {
    const auto s = schmidt_amplitudes(p);
    const double a = p.a;
    const double l = (1.0 - a) / 4.0;
    double qd = detail::plog((1.0 - a) / 2.0 + a * s.chi0 * s.chi0 / 4.0) +
                detail::plog((1.0 - a) / 2.0 + a * s.chi1 * s.chi1 / 4.0);
    qd -= 3.0 * detail::plog(l) + detail::plog((1.0 + 3.0 * a) / 4.0);
    for (int j = 0; j < 2; ++j) {
        const double pj = outcome_probability(p, j, theta);
        if (pj <= 1e-300) continue;
        const double lam = l / pj;
        if (lam > 0.0) qd -= l * std::log2(lam);
        if (lam < 1.0) qd -= pj * (1.0 - lam) * std::log2(1.0 - lam);
    }
    return qd;
}

struct DiscordOptions {
    int grid_points = 181;
    double theta_tol = 1e-10;
};

/// Discord by coarse grid plus golden-section refinement over theta in [0, pi/2].
/// phi does not change the conditional spectra and is reported as 0.
inline CorrelationReport discord(const QuasiWernerParams& p, const DiscordOptions& opt = {}) {
    if (opt.grid_points < 3) throw DomainError("discord: need at least 3 grid points");
    const double half_pi = 0.5 * std::numbers::pi;
    int evals = 0;
    auto f = [&](double t) {
        ++evals;
        return measured_conditional_entropy(p, t);
    };
    const int n = opt.grid_points;
    std::vector<double> vals(n);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        vals[i] = f(half_pi * i / (n - 1));
        if (vals[i] < vals[best] - 1e-12) best = i;
    }
    double lo = half_pi * std::max(best - 1, 0) / (n - 1);
    double hi = half_pi * std::min(best + 1, n - 1) / (n - 1);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    int iter = 0;
    while (hi - lo > opt.theta_tol) {
        if (++iter > 200) throw ConvergenceError("discord: golden-section search did not converge");
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    double theta = 0.5 * (lo + hi);
    double fmin = f(theta);
    // Keep the grid point when refinement did not improve on it (tie goes to the smaller theta).
    if (vals[best] <= fmin + 1e-12) {
        theta = half_pi * best / (n - 1);
        fmin = vals[best];
    }

    const auto ent = werner_entropies(p);
    CorrelationReport r;
    r.concurrence = concurrence_werner(p);
    r.eof = eof(r.concurrence);
    r.mutual_information = std::max(0.0, 2.0 * ent.marginal - ent.joint);
    double qd = ent.marginal - ent.joint + fmin;
    if (qd < -1e-9) throw Error("discord: negative value " + std::to_string(qd) + " beyond rounding");
    r.discord = std::max(qd, 0.0);
    r.optimal_angles = {theta, 0.0};
    r.optimizer_evals = evals;
    return r;
}

}  // namespace correlations
}  // namespace qwerner
