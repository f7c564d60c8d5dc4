#pragma once

// Phase-space quadrature. Three rules are provided:
//  * adaptive Gauss-Kronrod (G7/K15), used iterated over the plane for
//    integrands with kinks such as |W(z)|;
//  * a uniform tensor rule on [-R, R]^2 for smooth Gaussian-decaying
//    integrands, where it converges spectrally;
//  * the same uniform rule on a product of two planes for integrands that
//    are a short sum of products f_k(z1) g_k(z2).
// The converged drivers repeat the evaluation with an enlarged domain and a
// refined mesh and accept once both changes are below abs_tol.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "qwerner/errors.hpp"
#include "qwerner/parallel.hpp"

namespace qwerner {

struct QuadratureConfig {
    double initial_half_width = 0.0;  // 0 selects the caller's default
    double refinement_factor = 2.0;
    double abs_tol = 1e-8;
    // Integrals of |W| over both modes converge only algebraically in the
    // lattice step (kinks on three-dimensional surfaces), so they carry their own tolerance.
    double two_mode_abs_tol = 2e-3;
    int max_levels = 8;
    int jobs = 1;

    void validate() const {
        if (!(abs_tol > 0.0) || !(two_mode_abs_tol > 0.0)) throw DomainError("QuadratureConfig: tolerances must be positive");
        if (max_levels < 1) throw DomainError("QuadratureConfig: max_levels must be >= 1");
        if (!(refinement_factor > 1.0)) throw DomainError("QuadratureConfig: refinement_factor must exceed 1");
        if (initial_half_width < 0.0) throw DomainError("QuadratureConfig: negative half width");
    }
};

template <typename T>
struct QuadratureResult {
    T value{};
    double error_estimate = 0.0;
    std::size_t evals = 0;
    double half_width = 0.0;
};

namespace quad {

namespace detail {
inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double lo, hi, value, error;
};

/// One G7/K15 panel. The error estimate uses the QUADPACK scaling
/// resasc * min(1, (200 |K - G| / resasc)^1.5).
template <typename F>
Interval gk15(F& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    std::array<double, 15> fv;
    fv[7] = f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[i];
        fv[i] = f(c - dx);
        fv[14 - i] = f(c + dx);
    }
    double kron = fv[7] * kKronrodWeights[7];
    double gauss = fv[7] * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double s = fv[i] + fv[14 - i];
        kron += kKronrodWeights[i] * s;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
    }
    const double mean = 0.5 * kron;
    double asc = kKronrodWeights[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i) asc += kKronrodWeights[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    asc *= std::abs(h);
    double err = std::abs((kron - gauss) * h);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    return {lo, hi, kron * h, err};
}
}  // namespace detail

/// Globally adaptive G7/K15 on [lo, hi], starting from `pieces` equal panels.
template <typename F>
QuadratureResult<double> adaptive_1d(F&& f, double lo, double hi, double abs_tol, int pieces = 8,
                                     int max_intervals = 4000) {
    std::size_t evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };
    auto cmp = [](const detail::Interval& a, const detail::Interval& b) { return a.error < b.error; };
    std::priority_queue<detail::Interval, std::vector<detail::Interval>, decltype(cmp)> heap(cmp);
    double total_err = 0.0;
    const double w = (hi - lo) / pieces;
    for (int i = 0; i < pieces; ++i) {
        auto iv = detail::gk15(counted, lo + i * w, i + 1 == pieces ? hi : lo + (i + 1) * w);
        total_err += iv.error;
        heap.push(iv);
    }
    int count = pieces;
    while (total_err > abs_tol && count < max_intervals) {
        const auto worst = heap.top();
        if (worst.hi - worst.lo < 1e-13 * (hi - lo)) break;
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const auto left = detail::gk15(counted, worst.lo, mid);
        const auto right = detail::gk15(counted, mid, worst.hi);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Sum in position order so the result does not depend on heap internals.
    std::vector<detail::Interval> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    double value = 0.0;
    double err = 0.0;
    for (const auto& iv : all) {
        value += iv.value;
        err += iv.error;
    }
    return {value, err, evals, 0.5 * (hi - lo)};
}

/// Iterated adaptive integral of f(q, p) over [-R, R]^2.
template <typename F>
QuadratureResult<double> adaptive_plane(F&& f, double half_width, double abs_tol) {
    std::size_t evals = 0;
    double inner_err = 0.0;
    const double inner_tol = 0.05 * abs_tol / (2.0 * half_width);
    auto outer = [&](double q) {
        auto r = adaptive_1d([&](double p) { return f(q, p); }, -half_width, half_width, inner_tol);
        evals += r.evals;
        inner_err = std::max(inner_err, r.error_estimate);
        return r.value;
    };
    auto r = adaptive_1d(outer, -half_width, half_width, 0.5 * abs_tol);
    return {r.value, r.error_estimate + 2.0 * half_width * inner_err, evals, half_width};
}

/// adaptive_plane repeated on growing squares until the domain change is below abs_tol.
template <typename F>
QuadratureResult<double> adaptive_plane_converged(F&& f, double default_half_width, const QuadratureConfig& cfg) {
    cfg.validate();
    double R = cfg.initial_half_width > 0.0 ? cfg.initial_half_width : default_half_width;
    auto cur = adaptive_plane(f, R, cfg.abs_tol);
    std::size_t evals = cur.evals;
    for (int level = 0; level < cfg.max_levels; ++level) {
        R *= cfg.refinement_factor;
        auto big = adaptive_plane(f, R, cfg.abs_tol);
        evals += big.evals;
        const double change = std::abs(big.value - cur.value);
        if (change < cfg.abs_tol && big.error_estimate < cfg.abs_tol)
            return {big.value, std::max(change, big.error_estimate), evals, R};
        cur = big;
    }
    throw ConvergenceError("adaptive_plane_converged: no convergence after " + std::to_string(cfg.max_levels) +
                           " levels (half width " + std::to_string(R) + ", last error " +
                           std::to_string(cur.error_estimate) + ")");
}

/// Uniform-weight sum over the square lattice {-R + i h}^2, i = 0..n.
template <typename T, typename F>
T uniform_plane(F& f, double half_width, double step, int jobs) {
    const int n = static_cast<int>(std::lround(2.0 * half_width / step));
    const double h = 2.0 * half_width / n;
    std::vector<T> rows(static_cast<std::size_t>(n + 1));
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        const double q = -half_width + static_cast<double>(i) * h;
        T acc{};
        for (int j = 0; j <= n; ++j) acc += f(q, -half_width + j * h);
        rows[i] = acc;
    });
    T total{};
    for (const auto& r : rows) total += r;
    return total * (h * h);
}

/// Smooth-integrand driver: accepts when both the enlarged square and the
/// refined lattice change the value by less than abs_tol.
template <typename T, typename F>
QuadratureResult<T> uniform_plane_converged(F&& f, double default_half_width, double initial_step,
                                            const QuadratureConfig& cfg) {
    cfg.validate();
    double R = cfg.initial_half_width > 0.0 ? cfg.initial_half_width : default_half_width;
    double h = initial_step;
    std::size_t evals = 0;
    auto count = [&](double r, double step) {
        const auto n = static_cast<std::size_t>(std::lround(2.0 * r / step)) + 1;
        evals += n * n;
    };
    T base = uniform_plane<T>(f, R, h, cfg.jobs);
    count(R, h);
    for (int level = 0; level < cfg.max_levels; ++level) {
        const double wider = R * cfg.refinement_factor;
        const double finer = h / cfg.refinement_factor;
        T dom = uniform_plane<T>(f, wider, h, cfg.jobs);
        T mesh = uniform_plane<T>(f, R, finer, cfg.jobs);
        count(wider, h);
        count(R, finer);
        const double dom_change = std::abs(dom - base);
        const double mesh_change = std::abs(mesh - base);
        if (dom_change < cfg.abs_tol && mesh_change < cfg.abs_tol)
            return {mesh, std::max(dom_change, mesh_change), evals, R};
        if (dom_change >= cfg.abs_tol) R = wider;
        if (mesh_change >= cfg.abs_tol) h = finer;
        base = uniform_plane<T>(f, R, h, cfg.jobs);
        count(R, h);
    }
    throw ConvergenceError("uniform_plane_converged: no convergence after " + std::to_string(cfg.max_levels) +
                           " levels");
}

/// Values of K real factor functions on the lattice of one mode, with a
/// quadrature weight per kept node.
template <std::size_t K>
struct FactorTable {
    std::vector<std::array<double, K>> rows;
    std::vector<double> weight;
    double cell_area = 0.0;
};

/// Tabulates f(q, p) -> array<double, K> and drops nodes whose factors are
/// all below 1e-13 of the largest node (Gaussian tails).
///
/// With half = true only one node of each pair (z, -z) is kept, with weight
/// 2; valid when the full integrand is invariant under (z1, z2) -> (-z1, -z2).
template <std::size_t K, typename F>
FactorTable<K> tabulate(F& f, double half_width, double step, bool half = false) {
    const int n = static_cast<int>(std::lround(2.0 * half_width / step));
    const double h = 2.0 * half_width / n;
    FactorTable<K> table;
    table.cell_area = h * h;
    std::vector<std::array<double, K>> all;
    std::vector<double> weight;
    all.reserve(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1));
    double peak = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            double w = 1.0;
            if (half) {
                const int mi = n - i, mj = n - j;
                if (i < mi || (i == mi && j < mj)) continue;
                if (i != mi || j != mj) w = 2.0;
            }
            all.push_back(f(-half_width + i * h, -half_width + j * h));
            weight.push_back(w);
            double s = 0.0;
            for (double v : all.back()) s += std::abs(v);
            peak = std::max(peak, s);
        }
    for (std::size_t r = 0; r < all.size(); ++r) {
        double s = 0.0;
        for (double v : all[r]) s += std::abs(v);
        if (s > 1e-13 * peak) {
            table.rows.push_back(all[r]);
            table.weight.push_back(weight[r]);
        }
    }
    return table;
}

/// sum_{i,j} |sum_k F_ik G_jk| dA1 dA2  (or the signed sum when absolute = false).
template <std::size_t K>
double tensor_sum(const FactorTable<K>& first, const FactorTable<K>& second, bool absolute, int jobs) {
    if (!absolute) {
        std::array<double, K> s1{}, s2{};
        for (std::size_t i = 0; i < first.rows.size(); ++i)
            for (std::size_t k = 0; k < K; ++k) s1[k] += first.weight[i] * first.rows[i][k];
        for (std::size_t j = 0; j < second.rows.size(); ++j)
            for (std::size_t k = 0; k < K; ++k) s2[k] += second.weight[j] * second.rows[j][k];
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) total += s1[k] * s2[k];
        return total * first.cell_area * second.cell_area;
    }
    // Column-major copy of the second table for a vectorizable inner loop.
    const std::size_t n2 = second.rows.size();
    std::array<std::vector<double>, K> cols;
    for (std::size_t k = 0; k < K; ++k) {
        cols[k].resize(n2);
        for (std::size_t j = 0; j < n2; ++j) cols[k][j] = second.weight[j] * second.rows[j][k];
    }
    std::vector<double> partial(first.rows.size());
    parallel_for(first.rows.size(), jobs, [&](std::size_t i) {
        const auto& f = first.rows[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < n2; ++j) {
            double v = 0.0;
            for (std::size_t k = 0; k < K; ++k) v += f[k] * cols[k][j];
            acc += std::abs(v);
        }
        partial[i] = first.weight[i] * acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total * first.cell_area * second.cell_area;
}

}  // namespace quad
}  // namespace qwerner
