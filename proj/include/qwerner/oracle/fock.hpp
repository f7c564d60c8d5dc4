#pragma once

// Brute-force truncated Fock-space versions of the states and measures.
// Used by the tests and the verify command to certify the closed forms. The
// only special function shared with the analytic path is specfun::laguerre;
// everything else (normalizations, Wigner and characteristic functions,
// concurrence, discord) is computed by explicit vectors and matrices.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qwerner/correlations.hpp"
#include "qwerner/errors.hpp"
#include "qwerner/phasespace.hpp"
#include "qwerner/specfun.hpp"
#include "qwerner/states.hpp"
#include "qwerner/teleport.hpp"

namespace qwerner::oracle {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kTailMassLimit = 1e-12;

struct FockVector {
    int cutoff = 0;
    CVector coeffs;
    double tail_mass = 0.0;
};

/// Smallest cutoff build_pacs accepts.
inline int minimum_cutoff(Complex alpha, int m) {
    const double r = std::abs(alpha);
    return m + static_cast<int>(std::ceil(r * r + 6.0 * r + 10.0));
}

inline int default_cutoff(Complex alpha, int m) {
    const double r = std::abs(alpha);
    return m + static_cast<int>(std::ceil(r * r)) + static_cast<int>(std::ceil(6.0 * r)) + 10;
}

/// Probability in the top 10% of the number range.
inline double tail_mass(const CVector& v) {
    const int n = static_cast<int>(v.size()) - 1;
    double t = 0.0;
    for (int k = static_cast<int>(std::floor(0.9 * n)) + 1; k <= n; ++k) t += std::norm(v[k]);
    return t;
}

namespace detail {
/// a^{dagger m}|alpha> truncated at `cutoff`, unnormalized.
inline CVector raw_pacs(Complex alpha, int m, int cutoff) {
    CVector c = CVector::Zero(cutoff + 1);
    const double r = std::abs(alpha);
    const double ph = std::arg(alpha);
    for (int n = 0; n + m <= cutoff; ++n) {
        if (r == 0.0 && n > 0) break;
        double logmag = -0.5 * r * r + 0.5 * std::lgamma(n + m + 1.0) - std::lgamma(n + 1.0);
        if (n > 0) logmag += n * std::log(r);
        c[n + m] = std::polar(std::exp(logmag), n * ph);
    }
    return c;
}

inline FockVector certify(CVector v, int cutoff, const char* what) {
    const double nrm = v.norm();
    if (!(nrm > 0.0)) throw DegenerateStateError(std::string(what) + ": zero vector");
    v /= nrm;
    FockVector out{cutoff, std::move(v), 0.0};
    out.tail_mass = tail_mass(out.coeffs);
    if (out.tail_mass >= kTailMassLimit)
        throw TailMassError(std::string(what) + ": tail mass " + std::to_string(out.tail_mass) + " at cutoff " +
                            std::to_string(cutoff));
    return out;
}

// Generalized Laguerre L_k^{(d)}(x) for k = 0..kmax, as sign and log modulus.
inline void gen_laguerre_row(int kmax, int d, double x, std::vector<double>& value) {
    value.assign(static_cast<std::size_t>(kmax + 1), 1.0);
    if (kmax >= 1) value[1] = 1.0 + d - x;
    for (int k = 1; k < kmax; ++k)
        value[k + 1] = ((2.0 * k + 1.0 + d - x) * value[k] - (k + d) * value[k - 1]) / (k + 1.0);
}
}  // namespace detail

/// Norm of a^{dagger m}|alpha> summed in the truncated space.
inline double pacs_raw_norm(Complex alpha, int m, int cutoff) { return detail::raw_pacs(alpha, m, cutoff).norm(); }

/// Normalized |alpha, m> with a tail-mass certificate.
inline FockVector build_pacs(Complex alpha, int m, int cutoff) {
    if (m < 0) throw DomainError("build_pacs: negative m");
    if (cutoff < minimum_cutoff(alpha, m))
        throw TailMassError("build_pacs: cutoff " + std::to_string(cutoff) + " below " +
                            std::to_string(minimum_cutoff(alpha, m)));
    return detail::certify(detail::raw_pacs(alpha, m, cutoff), cutoff, "build_pacs");
}

/// build_pacs with the default cutoff, doubled until the tail certificate passes.
inline FockVector build_pacs(Complex alpha, int m) {
    int n = default_cutoff(alpha, m);
    for (;; n *= 2) {
        try {
            return build_pacs(alpha, m, n);
        } catch (const TailMassError&) {
            if (n > 4096) throw;
        }
    }
}

/// <j|D(z)|k> for j, k <= cutoff.
inline CMatrix displacement_matrix(Complex z, int cutoff) {
    if (std::abs(z) > cutoff / 4.0)
        throw AccuracyGuardError("displacement_matrix: |z| = " + std::to_string(std::abs(z)) + " exceeds cutoff/4");
    const int n = cutoff + 1;
    CMatrix d = CMatrix::Zero(n, n);
    if (z == Complex{0.0}) return CMatrix::Identity(n, n);
    const double x = std::norm(z);
    const double logr = std::log(std::abs(z));
    const double ph = std::arg(z);
    std::vector<double> lag;
    for (int off = 0; off < n; ++off) {
        detail::gen_laguerre_row(n - 1 - off, off, x, lag);
        for (int k = 0; k + off < n; ++k) {
            const double l = lag[k];
            if (l == 0.0) continue;
            const double logmag =
                0.5 * (std::lgamma(k + 1.0) - std::lgamma(k + off + 1.0)) + off * logr - 0.5 * x + std::log(std::abs(l));
            const double mag = std::copysign(std::exp(logmag), l);
            // below the diagonal: z^off; above: (-z*)^off
            d(k + off, k) = std::polar(mag, off * ph);
            if (off > 0) d(k, k + off) = std::polar(mag, off * (std::numbers::pi - ph));
        }
    }
    return d;
}

/// Size of the leading block on which the truncated D(z) is unitary to
/// better than 1e-8: D(z)|j> stays inside the cutoff while
/// sqrt(j) + |z| + 3 <= sqrt(cutoff).
inline int safe_block(Complex z, int cutoff) {
    const double s = std::sqrt(static_cast<double>(cutoff)) - std::abs(z) - 3.0;
    return s < 0.0 ? 0 : static_cast<int>(std::floor(s * s)) + 1;
}

/// <alpha| a^m D(z) a^{dagger m} |alpha> by vector contraction.
inline Complex displaced_element_fock(Complex alpha, int m, Complex z, int cutoff) {
    const CVector u = detail::raw_pacs(alpha, m, cutoff);
    return u.dot(displacement_matrix(z, cutoff) * u);
}

/// Even (+) or odd (-) superposition of |xi,m> and |-xi,m>, normalized
/// numerically; the odd state at xi = 0 is its limit |m+1>.
inline FockVector cat_vector(Sign sign, Complex xi, int m, int cutoff) {
    if (sign == Sign::Minus && xi == Complex{0.0}) {
        CVector v = CVector::Zero(cutoff + 1);
        v[m + 1] = 1.0;
        return detail::certify(v, cutoff, "cat_vector");
    }
    const CVector v = build_pacs(xi, m, cutoff).coeffs + sign_value(sign) * build_pacs(-xi, m, cutoff).coeffs;
    return detail::certify(v, cutoff, "cat_vector");
}

/// Coefficient matrix C of a two-mode vector: |psi> = sum_ij C_ij |i>|j>.
using TwoModeVector = CMatrix;

inline TwoModeVector product_vector(const CVector& u, const CVector& v) { return u * v.transpose(); }

/// N [ |alpha,m>|beta,m> +/- |-alpha,m>|-beta,m> ], normalized numerically.
inline TwoModeVector superposition_state(Sign sign, Complex alpha, Complex beta, int m, int cutoff) {
    TwoModeVector c = product_vector(build_pacs(alpha, m, cutoff).coeffs, build_pacs(beta, m, cutoff).coeffs) +
                      sign_value(sign) *
                          product_vector(build_pacs(-alpha, m, cutoff).coeffs, build_pacs(-beta, m, cutoff).coeffs);
    const double nrm = c.norm();
    if (nrm < 1e-150) throw DegenerateStateError("superposition_state: state vanishes");
    return c / nrm;
}

/// The four products |+a+b>, |+a-b>, |-a+b>, |-a-b>.
inline std::array<TwoModeVector, 4> quasi_bell_basis(Complex alpha, Complex beta, int m, int cutoff) {
    const auto ap = cat_vector(Sign::Plus, alpha, m, cutoff).coeffs;
    const auto am = cat_vector(Sign::Minus, alpha, m, cutoff).coeffs;
    const auto bp = cat_vector(Sign::Plus, beta, m, cutoff).coeffs;
    const auto bm = cat_vector(Sign::Minus, beta, m, cutoff).coeffs;
    return {product_vector(ap, bp), product_vector(ap, bm), product_vector(am, bp), product_vector(am, bm)};
}

/// Two-mode density stored as an ensemble sum_i w_i |psi_i><psi_i|.
struct TwoModeDensity {
    int cutoff = 0;
    std::vector<double> weights;
    std::vector<TwoModeVector> members;

    /// Full (N+1)^2 x (N+1)^2 matrix, index i (N+1) + j for |i>|j>.
    CMatrix dense() const {
        const int n = cutoff + 1;
        CMatrix rho = CMatrix::Zero(n * n, n * n);
        for (std::size_t s = 0; s < members.size(); ++s) {
            CVector v(n * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) v[i * n + j] = members[s](i, j);
            rho += weights[s] * v * v.adjoint();
        }
        return rho;
    }
    double trace() const {
        double t = 0.0;
        for (std::size_t s = 0; s < members.size(); ++s) t += weights[s] * members[s].squaredNorm();
        return t;
    }
};

/// (1-a)/4 times the identity on the quasi-Bell span plus a |psi><psi|.
inline TwoModeDensity quasi_werner_density(const QuasiWernerParams& p, int cutoff) {
    p.validate();
    TwoModeDensity rho;
    rho.cutoff = cutoff;
    if (p.a > 0.0) {
        rho.weights.push_back(p.a);
        rho.members.push_back(superposition_state(p.sign, p.alpha, p.beta, p.m, cutoff));
    }
    if (p.a < 1.0) {
        for (auto& b : quasi_bell_basis(p.alpha, p.beta, p.m, cutoff)) {
            rho.weights.push_back((1.0 - p.a) / 4.0);
            rho.members.push_back(std::move(b));
        }
    }
    return rho;
}

inline int default_cutoff(const QuasiWernerParams& p) {
    return std::max(default_cutoff(p.alpha, p.m), default_cutoff(p.beta, p.m)) + 1;
}

/// Smallest cutoff >= max(default, at_least), doubled until every state the
/// oracle builds for `p` passes the tail certificate.
inline int certified_cutoff(const QuasiWernerParams& p, int at_least = 0) {
    int n = std::max(default_cutoff(p), at_least);
    for (;; n *= 2) {
        try {
            for (Complex xi : {p.alpha, p.beta}) {
                build_pacs(xi, p.m, n);
                cat_vector(Sign::Plus, xi, p.m, n);
                cat_vector(Sign::Minus, xi, p.m, n);
            }
            return n;
        } catch (const TailMassError&) {
            if (n > 4096) throw;
        }
    }
}

/// Reduced single-mode density of mode 1 or 2.
inline CMatrix reduced_density(const TwoModeDensity& rho, int mode_index) {
    if (mode_index != 1 && mode_index != 2) throw DomainError("reduced_density: mode index must be 1 or 2");
    const int n = rho.cutoff + 1;
    CMatrix out = CMatrix::Zero(n, n);
    for (std::size_t s = 0; s < rho.members.size(); ++s) {
        const auto& c = rho.members[s];
        if (mode_index == 1)
            out += rho.weights[s] * c * c.adjoint();
        else
            out += rho.weights[s] * c.transpose() * c.conjugate();
    }
    return out;
}

namespace detail {
inline double real_checked(Complex v, const char* what) {
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw ConvergenceError(std::string(what) + ": imaginary residue " + std::to_string(v.imag()));
    return v.real();
}

/// D(2z) P: W(z) = (2/pi) tr[rho D(2z) P] is the displaced-parity form
/// (2/pi) tr[rho D(z) P D(-z)].
inline CMatrix displaced_parity(Complex z, int cutoff) {
    CMatrix d = displacement_matrix(2.0 * z, cutoff);
    for (int k = 1; k <= cutoff; k += 2) d.col(k) *= -1.0;
    return d;
}

/// sum_s w_s tr(C_s^dagger A C_s B^T) = tr[rho (A (x) B)].
inline Complex two_mode_expectation(const TwoModeDensity& rho, const CMatrix& a, const CMatrix& b) {
    Complex total{0.0};
    for (std::size_t s = 0; s < rho.members.size(); ++s) {
        const auto& c = rho.members[s];
        const CMatrix x = a * c * b.transpose();
        total += rho.weights[s] * (c.conjugate().cwiseProduct(x)).sum();
    }
    return total;
}
}  // namespace detail

/// Single-mode Wigner function of a density matrix.
inline double wigner_fock(const CMatrix& rho, Complex z) {
    const int cutoff = static_cast<int>(rho.rows()) - 1;
    const CMatrix a = detail::displaced_parity(z, cutoff);
    return detail::real_checked(phasespace::kTwoOverPi * (rho.transpose().cwiseProduct(a)).sum(), "wigner_fock");
}

inline double wigner_fock(const FockVector& v, Complex z) {
    return wigner_fock(CMatrix(v.coeffs * v.coeffs.adjoint()), z);
}

/// Wigner function of the operator |u><v| (complex in general).
inline Complex wigner_fock_operator(const CVector& u, const CVector& v, Complex z) {
    const int cutoff = static_cast<int>(u.size()) - 1;
    return phasespace::kTwoOverPi * v.dot(detail::displaced_parity(z, cutoff) * u);
}

inline double wigner_fock(const TwoModeDensity& rho, const PhasePoint2& z) {
    const CMatrix a = detail::displaced_parity(z.z1, rho.cutoff);
    const CMatrix b = detail::displaced_parity(z.z2, rho.cutoff);
    return detail::real_checked(
        phasespace::kTwoOverPi * phasespace::kTwoOverPi * detail::two_mode_expectation(rho, a, b), "wigner_fock");
}

/// tr[rho D(z1) D(z2)].
inline Complex char_fn_fock(const TwoModeDensity& rho, Complex z1, Complex z2) {
    return detail::two_mode_expectation(rho, displacement_matrix(z1, rho.cutoff), displacement_matrix(z2, rho.cutoff));
}

/// tr[rho D(z)] for one mode.
inline Complex char_fn_fock(const CMatrix& rho, Complex z) {
    const int cutoff = static_cast<int>(rho.rows()) - 1;
    return (rho.transpose().cwiseProduct(displacement_matrix(z, cutoff))).sum();
}

/// <b_i|rho|b_j> in the quasi-Bell basis built by cat_vector.
inline QubitDensity4 project_quasi_bell(const TwoModeDensity& rho, Complex alpha, Complex beta, int m) {
    const auto basis = quasi_bell_basis(alpha, beta, m, rho.cutoff);
    QubitDensity4 out;
    out.rho.setZero();
    for (std::size_t s = 0; s < rho.members.size(); ++s) {
        Eigen::Vector4cd amp;
        for (int i = 0; i < 4; ++i) amp[i] = (basis[i].conjugate().cwiseProduct(rho.members[s])).sum();
        out.rho += rho.weights[s] * amp * amp.adjoint();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Two-qubit measures on a 4x4 density

namespace detail {
inline Eigen::Vector4d spectrum(const Eigen::Matrix4cd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

template <typename M>
double entropy_bits(const M& rho) {
    Eigen::SelfAdjointEigenSolver<M> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()[i];
        if (l > 0.0) s -= l * std::log2(l);
    }
    return s;
}

inline Eigen::Matrix2cd partial_trace(const Eigen::Matrix4cd& rho, int keep) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int t = 0; t < 2; ++t)
                out(a, b) += keep == 1 ? rho(2 * a + t, 2 * b + t) : rho(2 * t + a, 2 * t + b);
    return out;
}
}  // namespace detail

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), where l_i^2 are the
/// eigenvalues of rho (sy x sy) rho* (sy x sy). The l_i are taken as the
/// singular values of V^T (sy x sy) V with rho = V V^dagger, which avoids
/// square roots of rounding-level eigenvalues for rank-deficient rho.
inline double wootters_concurrence(const QubitDensity4& d) {
    d.validate(1e-10, 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(d.rho);
    const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd v = es.eigenvectors() * ev.asDiagonal();
    Eigen::Matrix2cd sy;
    sy << 0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0;
    Eigen::Matrix4cd yy;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) yy(2 * i + k, 2 * j + l) = sy(i, j) * sy(k, l);
    const Eigen::Matrix4cd tau = v.transpose() * yy * v;
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
    const Eigen::Vector4d lam = svd.singularValues();  // descending
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

struct BruteForceDiscord {
    double discord = 0.0;
    double conditional_entropy = 0.0;
    MeasurementAngles angles;
};

/// Discord with projective measurements on `measured_mode` (default: the
/// second), minimized over a (theta, phi) grid and refined by pattern search.
inline BruteForceDiscord discord_bruteforce(const QubitDensity4& d, int n_theta = 90, int n_phi = 8,
                                            int measured_mode = 2) {
    if (n_theta < 90 || n_phi < 8) throw DomainError("discord_bruteforce: need >= 90 theta and >= 8 phi points");
    if (measured_mode != 1 && measured_mode != 2) throw DomainError("discord_bruteforce: mode must be 1 or 2");
    d.validate(1e-10, 1e-10);

    auto conditional = [&](double theta, double phi) {
        const Complex e = std::polar(1.0, phi);
        const std::array<Eigen::Vector2cd, 2> proj{Eigen::Vector2cd(std::cos(theta), e * std::sin(theta)),
                                                   Eigen::Vector2cd(-std::conj(e) * std::sin(theta), std::cos(theta))};
        double total = 0.0;
        for (const auto& pi : proj) {
            Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int s = 0; s < 2; ++s)
                        for (int t = 0; t < 2; ++t) {
                            const Complex r = measured_mode == 2 ? d.rho(2 * a + s, 2 * b + t) : d.rho(2 * s + a, 2 * t + b);
                            block(a, b) += std::conj(pi[s]) * r * pi[t];
                        }
            const double pk = block.trace().real();
            if (pk <= 1e-300) continue;
            total += pk * detail::entropy_bits(Eigen::Matrix2cd(block / pk));
        }
        return total;
    };

    const double half_pi = 0.5 * std::numbers::pi;
    double best = 1e300, bt = 0.0, bp = 0.0;
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j) {
            const double t = half_pi * i / (n_theta - 1);
            const double ph = 2.0 * std::numbers::pi * j / n_phi;
            const double v = conditional(t, ph);
            if (v < best) {
                best = v;
                bt = t;
                bp = ph;
            }
        }
    double dt = half_pi / (n_theta - 1), dp = 2.0 * std::numbers::pi / n_phi;
    while (dt > 1e-10 || dp > 1e-10) {
        bool moved = false;
        for (auto [st, sp] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
            const double t = bt + st * dt, ph = bp + sp * dp;
            const double v = conditional(t, ph);
            if (v < best) {
                best = v;
                bt = t;
                bp = ph;
                moved = true;
            }
        }
        if (!moved) {
            dt *= 0.5;
            dp *= 0.5;
        }
    }
    const double s_measured = detail::entropy_bits(detail::partial_trace(d.rho, measured_mode));
    const double s_joint = detail::entropy_bits(d.rho);
    double qd = s_measured - s_joint + best;
    if (qd < 0.0 && qd > -1e-9) qd = 0.0;
    return {qd, best, {bt, bp}};
}

// ---------------------------------------------------------------------------
// Teleportation fidelity

struct OracleQuadrature {
    double radius = 0.0;  // 0: 6 e^{s}
    double step = 0.0;    // 0: 0.2 e^{-s}
};

/// Cutoff that keeps every displacement inside the accuracy guard on the
/// integration disk.
inline int fidelity_cutoff(const QuasiWernerParams& p, const InputState& in) {
    double s = 0.0;
    if (const auto* sq = std::get_if<SqueezedInput>(&in)) s = sq->s;
    const int guard = static_cast<int>(std::ceil(4.0 * 6.0 * std::exp(s))) + 1;
    return std::max(default_cutoff(p), guard);
}

/// F = (1/pi) int chi_in(mu) chi_in(-mu) tr[rho D(-mu*) D(-mu)] d^2mu on a
/// disk lattice, with the channel term from the Fock contraction.
inline double fidelity_quadrature_oracle(const InputState& in, const TwoModeDensity& rho, OracleQuadrature q = {}) {
    double s = 0.0, phi = 0.0;
    Complex gamma{0.0};
    if (const auto* sq = std::get_if<SqueezedInput>(&in)) {
        sq->validate();
        s = sq->s;
        phi = sq->phi;
    } else {
        gamma = std::get<CoherentInput>(in).gamma;
    }
    const double radius = q.radius > 0.0 ? q.radius : 6.0 * std::exp(s);
    const double step = q.step > 0.0 ? q.step : 0.2 * std::exp(-s);
    auto input_pair = [&](Complex mu) {
        // chi_in(mu) chi_in(-mu)
        if (s == 0.0 && gamma == Complex{0.0}) return Complex{std::exp(-std::norm(mu))};
        auto chi = [&](Complex x) {
            const Complex xs = x * std::cosh(s) + std::conj(x) * std::exp(Complex{0.0, -phi}) * std::sinh(s);
            return std::exp(-0.5 * std::norm(xs) + std::conj(gamma) * x - gamma * std::conj(x));
        };
        return chi(mu) * chi(-mu);
    };
    const int n = static_cast<int>(std::ceil(radius / step));
    Complex total{0.0};
    for (int i = -n; i <= n; ++i) {
        Complex row{0.0};
        for (int j = -n; j <= n; ++j) {
            const Complex mu{i * step, j * step};
            if (std::abs(mu) > radius) continue;
            row += input_pair(mu) * char_fn_fock(rho, -std::conj(mu), -mu);
        }
        total += row;
    }
    const Complex f = total * step * step / std::numbers::pi;
    return detail::real_checked(f, "fidelity_quadrature_oracle");
}

}  // namespace qwerner::oracle
