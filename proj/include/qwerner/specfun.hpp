#pragma once

// Special functions behind the closed forms: Laguerre polynomials, confluent
// hypergeometric 1F1 with integer parameters, binary entropy and the
// e^{x+y} L_m(-x) L_m(-y) +/- e^{-x-y} L_m(x) L_m(y) combination.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qwerner/errors.hpp"

namespace qwerner {

using Complex = std::complex<double>;

enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }
inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

namespace specfun {

/// Largest exponent accepted before an exponential is considered overflowing.
inline constexpr double kMaxExponent = 700.0;

namespace detail {
inline void require_order(int m, const char* what) {
    if (m < 0) throw DomainError(std::string(what) + ": negative polynomial order");
}
}  // namespace detail

/// L_m(x) by the three-term recurrence (k+1)L_{k+1} = (2k+1-x)L_k - k L_{k-1}.
template <typename T>
T laguerre(int m, T x) {
    detail::require_order(m, "laguerre");
    T prev{1.0};
    if (m == 0) return prev;
    T cur = T{1.0} - x;
    for (int k = 1; k < m; ++k) {
        T next = ((2.0 * k + 1.0 - x) * cur - static_cast<double>(k) * prev) / static_cast<double>(k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Associated Laguerre L_n^{(k)}(x), recurrence in n.
template <typename T>
T assoc_laguerre(int n, int k, T x) {
    detail::require_order(n, "assoc_laguerre");
    if (k < 0) throw DomainError("assoc_laguerre: negative order k");
    T prev{1.0};
    if (n == 0) return prev;
    T cur = T{1.0 + k} - x;
    for (int j = 1; j < n; ++j) {
        T next = ((2.0 * j + 1.0 + k - x) * cur - static_cast<double>(j + k) * prev) / static_cast<double>(j + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Kummer's 1F1(a; b; x) for integer a and positive integer b.
///
/// For a <= 0 the series terminates and the polynomial is summed exactly.
/// For a > 0 the series is summed until the relative tail is below 1e-14;
/// arguments with negative real part are mapped through
/// 1F1(a; b; x) = e^x 1F1(b - a; b; -x) so the summed series never alternates.
/// Throws RescaleError when |x| > 700 in the non-terminating case.
inline Complex kummer_1f1(int a, int b, Complex x) {
    if (b < 1) throw DomainError("kummer_1f1: b must be a positive integer");
    if (a <= 0) {
        Complex sum{1.0};
        Complex term{1.0};
        for (int n = 0; n < -a; ++n) {
            term *= static_cast<double>(a + n) / static_cast<double>(b + n) * x / static_cast<double>(n + 1);
            sum += term;
        }
        return sum;
    }
    if (std::abs(x) > kMaxExponent) throw RescaleError("kummer_1f1: |x| > 700 in non-terminating series");
    if (x.real() < 0.0) return std::exp(x) * kummer_1f1(b - a, b, -x);
    Complex sum{1.0};
    Complex term{1.0};
    for (int n = 0; n < 100000; ++n) {
        term *= static_cast<double>(a + n) / static_cast<double>(b + n) * x / static_cast<double>(n + 1);
        sum += term;
        if (static_cast<double>(n) > std::abs(x) && std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    }
    throw ConvergenceError("kummer_1f1: series did not converge");
}

/// H(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0.
inline double binary_entropy(double x) {
    constexpr double slack = 1e-12;
    if (!(x >= -slack && x <= 1.0 + slack)) throw DomainError("binary_entropy: argument outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    return term(x) + term(1.0 - x);
}

/// e^{x+y} L_m(-x) L_m(-y) +/- e^{-x-y} L_m(x) L_m(y).
inline Complex lm_pm(Sign sign, int m, Complex x, Complex y) {
    const Complex s = x + y;
    if (std::abs(s.real()) > kMaxExponent) throw RescaleError("lm_pm: |Re(x+y)| > 700");
    return std::exp(s) * laguerre(m, -x) * laguerre(m, -y) +
           sign_value(sign) * std::exp(-s) * laguerre(m, x) * laguerre(m, y);
}

}  // namespace specfun
}  // namespace qwerner
