#pragma once

// Closed form against truncated-Fock oracle on pseudo-random samples.
// Shared by `qwerner verify` and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qwerner/correlations.hpp"
#include "qwerner/oracle/fock.hpp"
#include "qwerner/phasespace.hpp"
#include "qwerner/states.hpp"
#include "qwerner/teleport.hpp"

namespace qwerner::verify {

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    int points = 100;
    int discord_cases = 20;
    int fidelity_cases = 3;
    int cutoff = 0;  // > 0 forces this cutoff on every oracle state
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    int samples = 0;
    std::string error;
};

/// Parameter and phase-point sampler on |alpha|, |beta| <= 1.5, m <= 3,
/// a in {0, 0.25, 0.5, 0.75, 1}, both signs.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Complex amplitude(double max_modulus = 1.5) {
        return std::polar(uniform(0.0, max_modulus), uniform(0.0, 2.0 * std::numbers::pi));
    }
    Complex box_point(double half) { return {uniform(-half, half), uniform(-half, half)}; }

    QuasiWernerParams params() {
        static constexpr double kA[] = {0.0, 0.25, 0.5, 0.75, 1.0};
        QuasiWernerParams p;
        p.alpha = amplitude();
        p.beta = amplitude();
        p.m = integer(0, 3);
        p.a = kA[integer(0, 4)];
        p.sign = integer(0, 1) == 0 ? Sign::Plus : Sign::Minus;
        return p;
    }

private:
    std::mt19937_64 rng_;
};

namespace detail {
inline CheckResult run_check(const std::string& name, double tol, int samples,
                             const std::function<double(int)>& deviation) {
    CheckResult r{name, false, 0.0, tol, samples, {}};
    try {
        for (int i = 0; i < samples; ++i) r.max_deviation = std::max(r.max_deviation, deviation(i));
        r.passed = r.max_deviation < tol;
    } catch (const std::exception& e) {
        r.error = e.what();
        r.passed = false;
    }
    return r;
}

inline int oracle_cutoff(const VerifyOptions& opt, const QuasiWernerParams& p, int at_least) {
    return opt.cutoff > 0 ? opt.cutoff : oracle::certified_cutoff(p, at_least);
}
}  // namespace detail

inline CheckResult check_wigner(const VerifyOptions& opt) {
    Sampler s(opt.seed);
    return detail::run_check("wigner_two_mode", 1e-8, opt.points, [&](int) {
        const auto p = s.params();
        const PhasePoint2 z{s.box_point(2.0), s.box_point(2.0)};
        const int need = static_cast<int>(std::ceil(8.0 * std::max(std::abs(z.z1), std::abs(z.z2)))) + 1;
        const auto rho = oracle::quasi_werner_density(p, detail::oracle_cutoff(opt, p, need));
        return std::abs(phasespace::wigner_quasi_werner(p, z, MixedPartConvention::SubspaceIdentity) -
                        oracle::wigner_fock(rho, z));
    });
}

inline CheckResult check_characteristic(const VerifyOptions& opt) {
    Sampler s(opt.seed + 1);
    return detail::run_check("characteristic_function", 1e-8, opt.points, [&](int) {
        const auto p = s.params();
        const Complex z1 = s.box_point(2.0), z2 = s.box_point(2.0);
        const int need = static_cast<int>(std::ceil(4.0 * std::max(std::abs(z1), std::abs(z2)))) + 1;
        const auto rho = oracle::quasi_werner_density(p, detail::oracle_cutoff(opt, p, need));
        return std::abs(teleport::chi_channel(p, z1, z2, MixedPartConvention::SubspaceIdentity) -
                        oracle::char_fn_fock(rho, z1, z2));
    });
}

/// Relative deviation of <alpha|a^m D(z) a^{dagger m}|alpha> on |z| <= 4.
inline CheckResult check_displaced_element(const VerifyOptions& opt) {
    Sampler s(opt.seed + 2);
    return detail::run_check("displaced_matrix_element", 1e-10, opt.points, [&](int) {
        const Complex alpha = s.amplitude();
        const int m = s.integer(0, 3);
        const Complex z = std::polar(s.uniform(0.0, 4.0), s.uniform(0.0, 2.0 * std::numbers::pi));
        QuasiWernerParams p{alpha, alpha, m, 1.0, Sign::Plus};
        // relative accuracy at |z| = 4 needs a tail far below the certificate
        const int n = detail::oracle_cutoff(opt, p, 60);
        const Complex ref = oracle::displaced_element_fock(alpha, m, z, n);
        return std::abs(teleport::displaced_matrix_element(alpha, m, z) - ref) / std::abs(ref);
    });
}

inline CheckResult check_density(const VerifyOptions& opt) {
    Sampler s(opt.seed + 3);
    return detail::run_check("quasi_bell_density", 1e-10, opt.points, [&](int) {
        const auto p = s.params();
        const auto rho = oracle::quasi_werner_density(p, detail::oracle_cutoff(opt, p, 0));
        const auto proj = oracle::project_quasi_bell(rho, p.alpha, p.beta, p.m);
        return (proj.rho - correlations::density_matrix(p).rho).cwiseAbs().maxCoeff();
    });
}

inline CheckResult check_concurrence(const VerifyOptions& opt) {
    Sampler s(opt.seed + 4);
    return detail::run_check("concurrence", 1e-10, opt.points, [&](int) {
        const auto p = s.params();
        const auto rho = oracle::quasi_werner_density(p, detail::oracle_cutoff(opt, p, 0));
        const auto proj = oracle::project_quasi_bell(rho, p.alpha, p.beta, p.m);
        return std::abs(correlations::concurrence_werner(p) - oracle::wootters_concurrence(proj));
    });
}

inline CheckResult check_discord(const VerifyOptions& opt) {
    Sampler s(opt.seed + 5);
    return detail::run_check("discord", 1e-6, opt.discord_cases, [&](int) {
        const auto p = s.params();
        const auto rho = oracle::quasi_werner_density(p, detail::oracle_cutoff(opt, p, 0));
        const auto proj = oracle::project_quasi_bell(rho, p.alpha, p.beta, p.m);
        return std::abs(correlations::discord(p).discord - oracle::discord_bruteforce(proj).discord);
    });
}

/// End-to-end coherent-input fidelity at a = 1.
inline CheckResult check_fidelity(const VerifyOptions& opt) {
    Sampler s(opt.seed + 6);
    return detail::run_check("fidelity", 1e-6, opt.fidelity_cases, [&](int) {
        auto p = s.params();
        p.a = 1.0;
        const InputState in = CoherentInput{s.amplitude(1.0)};
        const auto rho = oracle::quasi_werner_density(p, detail::oracle_cutoff(opt, p, oracle::fidelity_cutoff(p, in)));
        QuadratureConfig cfg;
        const double f = teleport::fidelity(in, p, MixedPartConvention::SubspaceIdentity, cfg).value;
        return std::abs(f - oracle::fidelity_quadrature_oracle(in, rho));
    });
}

inline std::vector<CheckResult> run_all(const VerifyOptions& opt) {
    return {check_wigner(opt),  check_characteristic(opt), check_displaced_element(opt), check_density(opt),
            check_concurrence(opt), check_discord(opt),     check_fidelity(opt)};
}

}  // namespace qwerner::verify
