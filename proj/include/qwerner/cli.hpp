#pragma once

// Front end for the qwerner tool: JSON run configs with flag overrides,
// sweeps over parameter axes, CSV/JSON tables and the verify report.
// Floats are written with 17 significant digits in scientific notation.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qwerner/correlations.hpp"
#include "qwerner/errors.hpp"
#include "qwerner/parallel.hpp"
#include "qwerner/phasespace.hpp"
#include "qwerner/states.hpp"
#include "qwerner/teleport.hpp"
#include "qwerner/verify.hpp"

namespace qwerner::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Invalid or unreadable configuration (exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericError = 3 };

// ---------------------------------------------------------------------------
// Rendering

inline std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

/// Real amplitudes print as a single float, complex ones as "re+imi".
inline std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string im = format_double(z.imag());
    if (im[0] != '-') im.insert(0, "+");
    return format_double(z.real()) + im + "i";
}

namespace detail {
inline void dump(const ordered_json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + ordered_json(it.key()).dump() + ": ";
                dump(it.value(), out, indent, depth + 1);
            }
            out += "\n" + close_pad + "}";
            break;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                dump(j[i], out, indent, depth + 1);
            }
            out += "\n" + close_pad + "]";
            break;
        }
        case ordered_json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            break;
        }
        default:
            out += j.dump();
    }
}
}  // namespace detail

/// JSON text with every float in the 17-digit scientific form.
inline std::string dump_json(const ordered_json& j) {
    std::string out;
    detail::dump(j, out, 2, 0);
    out += "\n";
    return out;
}

/// A row-major table rendered as CSV or as {"columns": [...], "rows": [...]}.
struct Table {
    using Cell = std::variant<double, int, std::string, Complex>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    static std::string csv_cell(const Cell& c) {
        if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
        if (const auto* i = std::get_if<int>(&c)) return std::to_string(*i);
        if (const auto* z = std::get_if<Complex>(&c)) return format_complex(*z);
        return std::get<std::string>(c);
    }
    std::string csv() const {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_cell(r[i]);
            out += "\n";
        }
        return out;
    }
    std::string json_text() const {
        ordered_json rows_j = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json o = ordered_json::object();
            for (std::size_t i = 0; i < r.size(); ++i) {
                const auto& c = r[i];
                if (const auto* d = std::get_if<double>(&c))
                    o[columns[i]] = *d;
                else if (const auto* n = std::get_if<int>(&c))
                    o[columns[i]] = *n;
                else if (const auto* z = std::get_if<Complex>(&c))
                    o[columns[i]] = z->imag() == 0.0 ? ordered_json(z->real()) : ordered_json::array({z->real(), z->imag()});
                else
                    o[columns[i]] = std::get<std::string>(c);
            }
            rows_j.push_back(std::move(o));
        }
        ordered_json doc = ordered_json::object();
        doc["columns"] = columns;
        doc["rows"] = std::move(rows_j);
        return dump_json(doc);
    }
    std::string render(const std::string& format) const { return format == "json" ? json_text() : csv(); }
};

/// Writes `text` to `path` through a temporary file and a rename, so a
/// failed run never leaves a partial file; "-" or "" writes to stdout.
inline void write_atomic(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write output file " + tmp.string());
        f << text;
        f.flush();
        if (!f) throw ConfigError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ConfigError("cannot move output into place at " + path);
    }
}

// ---------------------------------------------------------------------------
// Config parsing

namespace parse {

inline void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline double real(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + ": not finite");
    return d;
}

inline int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return v.get<int>();
}

inline Complex complex(const json& v, const std::string& where) {
    if (v.is_number()) return {real(v, where), 0.0};
    if (v.is_object()) {
        require_keys(v, {"re", "im"}, where);
        return {v.contains("re") ? real(v["re"], where + ".re") : 0.0, v.contains("im") ? real(v["im"], where + ".im") : 0.0};
    }
    throw ConfigError(where + ": expected a number or {\"re\": .., \"im\": ..}");
}

/// {"from": x, "to": y, "n": k} or {"from": x, "to": y, "step": h}.
inline std::vector<double> range(const json& v, const std::string& where) {
    require_keys(v, {"from", "to", "n", "step"}, where);
    if (!v.contains("from") || !v.contains("to")) throw ConfigError(where + ": range needs 'from' and 'to'");
    const double lo = real(v["from"], where + ".from"), hi = real(v["to"], where + ".to");
    int n = 0;
    if (v.contains("n") == v.contains("step")) throw ConfigError(where + ": range needs exactly one of 'n' and 'step'");
    if (v.contains("n")) {
        n = integer(v["n"], where + ".n");
    } else {
        const double h = real(v["step"], where + ".step");
        if (!(h > 0.0)) throw ConfigError(where + ": step must be positive");
        n = static_cast<int>(std::lround((hi - lo) / h)) + 1;
    }
    if (n < 1 || (n == 1 && lo != hi) || (n >= 2 && !(hi > lo))) throw ConfigError(where + ": empty or inverted range");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return out;
}

inline std::vector<double> real_axis(const json& v, const std::string& where) {
    if (v.is_number()) return {real(v, where)};
    if (v.is_array()) {
        if (v.empty()) throw ConfigError(where + ": empty list");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real(v[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (v.is_object()) return range(v, where);
    throw ConfigError(where + ": expected a number, a list or a range");
}

inline std::vector<Complex> complex_axis(const json& v, const std::string& where) {
    if (v.is_array()) {
        if (v.empty()) throw ConfigError(where + ": empty list");
        std::vector<Complex> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(complex(v[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (v.is_object() && (v.contains("from") || v.contains("to"))) {
        std::vector<Complex> out;
        for (double d : range(v, where)) out.emplace_back(d, 0.0);
        return out;
    }
    return {complex(v, where)};
}

inline std::vector<int> int_axis(const json& v, const std::string& where) {
    if (v.is_number_integer()) return {integer(v, where)};
    if (v.is_array()) {
        if (v.empty()) throw ConfigError(where + ": empty list");
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (v.is_object()) {
        require_keys(v, {"from", "to"}, where);
        const int lo = integer(v.at("from"), where + ".from"), hi = integer(v.at("to"), where + ".to");
        if (hi < lo) throw ConfigError(where + ": empty range");
        std::vector<int> out;
        for (int k = lo; k <= hi; ++k) out.push_back(k);
        return out;
    }
    throw ConfigError(where + ": expected an integer, a list or {\"from\", \"to\"}");
}

inline Sign sign(const json& v, const std::string& where) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "+" || s == "plus") return Sign::Plus;
        if (s == "-" || s == "minus") return Sign::Minus;
    }
    throw ConfigError(where + ": sign must be \"+\" or \"-\"");
}

inline std::vector<Sign> sign_axis(const json& v, const std::string& where) {
    if (v.is_string() && v.get<std::string>() == "both") return {Sign::Plus, Sign::Minus};
    if (v.is_array()) {
        if (v.empty()) throw ConfigError(where + ": empty list");
        std::vector<Sign> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(sign(v[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }
    return {sign(v, where)};
}

inline phasespace::Axis grid_axis(const json& v, const std::string& where) {
    phasespace::Axis a;
    if (v.is_number()) {
        a.lo = a.hi = real(v, where);
        a.n = 1;
    } else if (v.is_array() && v.size() == 3) {
        a.lo = real(v[0], where + "[0]");
        a.hi = real(v[1], where + "[1]");
        a.n = integer(v[2], where + "[2]");
    } else {
        throw ConfigError(where + ": expected a fixed number or [lo, hi, n]");
    }
    try {
        a.validate(where.c_str());
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return a;
}

}  // namespace parse

/// Settings shared by every subcommand.
struct Common {
    MixedPartConvention convention = MixedPartConvention::SubspaceIdentity;
    QuadratureConfig quad;
    std::string format = "csv";
    std::string out;
    ChannelFormula channel = ChannelFormula::Derived;
    LogBase log_base = LogBase::Natural;
};

inline const std::set<std::string>& common_keys() {
    static const std::set<std::string> keys{"convention", "tol",        "two_mode_tol", "jobs", "format",
                                            "out",        "half_width", "refinement_factor", "max_levels"};
    return keys;
}

inline Common parse_common(const json& cfg) {
    Common c;
    if (cfg.contains("convention")) {
        const auto v = cfg["convention"];
        if (v == "subspace")
            c.convention = MixedPartConvention::SubspaceIdentity;
        else if (v == "paper-flat")
            c.convention = MixedPartConvention::PaperFlat;
        else
            throw ConfigError("convention must be 'subspace' or 'paper-flat'");
    }
    if (cfg.contains("tol")) c.quad.abs_tol = parse::real(cfg["tol"], "tol");
    if (cfg.contains("two_mode_tol")) c.quad.two_mode_abs_tol = parse::real(cfg["two_mode_tol"], "two_mode_tol");
    if (cfg.contains("jobs")) c.quad.jobs = parse::integer(cfg["jobs"], "jobs");
    if (cfg.contains("half_width")) c.quad.initial_half_width = parse::real(cfg["half_width"], "half_width");
    if (cfg.contains("refinement_factor"))
        c.quad.refinement_factor = parse::real(cfg["refinement_factor"], "refinement_factor");
    if (cfg.contains("max_levels")) c.quad.max_levels = parse::integer(cfg["max_levels"], "max_levels");
    if (c.quad.jobs < 1) throw ConfigError("jobs must be >= 1");
    try {
        c.quad.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (cfg.contains("format")) {
        c.format = cfg["format"].is_string() ? cfg["format"].get<std::string>() : "";
        if (c.format != "csv" && c.format != "json") throw ConfigError("format must be 'csv' or 'json'");
    }
    if (cfg.contains("out")) {
        if (!cfg["out"].is_string()) throw ConfigError("out must be a path string");
        c.out = cfg["out"].get<std::string>();
    }
    return c;
}

/// Parameter sweep: the Cartesian product of the listed axes.
struct ParamSweep {
    std::vector<Complex> alpha{Complex{0.2}};
    std::optional<std::vector<Complex>> beta;  // empty: rule supplied by the subcommand
    std::vector<int> m{0};
    std::vector<double> a{1.0};
    std::vector<Sign> sign{Sign::Plus};
};

inline ParamSweep parse_sweep(const json& cfg, const ParamSweep& defaults) {
    ParamSweep s = defaults;
    if (cfg.contains("alpha")) s.alpha = parse::complex_axis(cfg["alpha"], "alpha");
    if (cfg.contains("beta")) {
        if (cfg["beta"].is_null())
            s.beta.reset();
        else
            s.beta = parse::complex_axis(cfg["beta"], "beta");
    }
    if (cfg.contains("m")) s.m = parse::int_axis(cfg["m"], "m");
    if (cfg.contains("a")) s.a = parse::real_axis(cfg["a"], "a");
    if (cfg.contains("sign")) s.sign = parse::sign_axis(cfg["sign"], "sign");
    for (int m : s.m)
        if (m < 0) throw ConfigError("m must be non-negative");
    for (double a : s.a)
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("a must lie in [0, 1]");
    return s;
}

inline QuasiWernerParams validated(QuasiWernerParams p) {
    try {
        p.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return p;
}

/// Result of one subcommand.
struct Output {
    std::string main;
    std::optional<std::string> sidecar;  // written next to the main output
    int exit_code = kOk;
};

// ---------------------------------------------------------------------------
// wigner

inline Output cmd_wigner(const json& cfg) {
    parse::require_keys(cfg, [] {
        auto k = common_keys();
        k.insert({"alpha", "beta", "m", "a", "sign", "grid"});
        return k;
    }(), "wigner config");
    const Common c = parse_common(cfg);
    QuasiWernerParams p{Complex{0.2}, Complex{0.1}, 0, 0.4, Sign::Plus};
    if (cfg.contains("alpha")) p.alpha = parse::complex(cfg["alpha"], "alpha");
    if (cfg.contains("beta")) p.beta = parse::complex(cfg["beta"], "beta");
    if (cfg.contains("m")) p.m = parse::integer(cfg["m"], "m");
    if (cfg.contains("a")) p.a = parse::real(cfg["a"], "a");
    if (cfg.contains("sign")) p.sign = parse::sign(cfg["sign"], "sign");
    p = validated(p);
    phasespace::GridSpec g{{-2.0, 2.0, 41}, {0.0, 0.0, 1}, {-2.0, 2.0, 41}, {0.0, 0.0, 1}};
    if (cfg.contains("grid")) {
        const auto& gj = cfg["grid"];
        parse::require_keys(gj, {"q1", "p1", "q2", "p2"}, "grid");
        if (gj.contains("q1")) g.q1 = parse::grid_axis(gj["q1"], "grid.q1");
        if (gj.contains("p1")) g.p1 = parse::grid_axis(gj["p1"], "grid.p1");
        if (gj.contains("q2")) g.q2 = parse::grid_axis(gj["q2"], "grid.q2");
        if (gj.contains("p2")) g.p2 = parse::grid_axis(gj["p2"], "grid.p2");
    }
    const auto rows = phasespace::wigner_grid(p, g, c.convention, c.quad.jobs);
    Table t{{"q1", "p1", "q2", "p2", "W"}, {}};
    for (const auto& r : rows) t.rows.push_back({r.q1, r.p1, r.q2, r.p2, r.w});
    return {t.render(c.format), std::nullopt, kOk};
}

// ---------------------------------------------------------------------------
// wln

inline Output cmd_wln(const json& cfg) {
    parse::require_keys(cfg, [] {
        auto k = common_keys();
        k.insert({"alpha", "beta", "m", "a", "sign", "log_base"});
        return k;
    }(), "wln config");
    const Common c = parse_common(cfg);
    ParamSweep d;
    d.alpha = {Complex{0.2}};
    d.beta = std::vector<Complex>{Complex{0.1}};
    d.m = {0, 1, 2, 3};
    d.a = parse::range(json{{"from", 0.0}, {"to", 1.0}, {"n", 11}}, "a");
    const ParamSweep s = parse_sweep(cfg, d);
    if (!s.beta) throw ConfigError("wln: beta must be given");
    LogBase base = LogBase::Natural;
    if (cfg.contains("log_base")) {
        const auto& v = cfg["log_base"];
        if (v == "e" || v == "natural")
            base = LogBase::Natural;
        else if (v == 2 || v == "2")
            base = LogBase::Two;
        else
            throw ConfigError("log_base must be 'e' or 2");
    }
    std::vector<QuasiWernerParams> points;
    for (Complex al : s.alpha)
        for (Complex be : *s.beta)
            for (int m : s.m)
                for (double a : s.a)
                    for (Sign sg : s.sign) points.push_back(validated({al, be, m, a, sg}));
    struct Row {
        double two, one, second;
    };
    std::vector<Row> rows(points.size());
    QuadratureConfig inner = c.quad;
    inner.jobs = 1;
    parallel_for(points.size(), c.quad.jobs, [&](std::size_t i) {
        const auto& p = points[i];
        rows[i] = {phasespace::wln(p, c.convention, inner, base).value,
                   phasespace::wln_reduced(p, 1, c.convention, inner, base).value,
                   phasespace::wln_reduced(p, 2, c.convention, inner, base).value};
    });
    Table t{{"alpha", "beta", "m", "a", "sign", "wln_two_mode", "wln_mode1", "wln_mode2"}, {}};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        t.rows.push_back({p.alpha, p.beta, p.m, p.a, std::string(1, sign_char(p.sign)), rows[i].two, rows[i].one,
                          rows[i].second});
    }
    return {t.render(c.format), std::nullopt, kOk};
}

// ---------------------------------------------------------------------------
// correlations

/// beta on the interference-minimum locus at q1 = p1 = q2 = 0: pi/(4 p2) for
/// psi+ (j = 0) and pi/(2 p2) for psi- (j = 1).
inline double locus_beta(Sign sign, double p2) {
    return phasespace::wigner_minima_locus(sign, sign == Sign::Plus ? 0 : 1).beta_for(0.0, p2, 0.0);
}

inline Output cmd_correlations(const json& cfg) {
    parse::require_keys(cfg, [] {
        auto k = common_keys();
        k.insert({"alpha", "beta", "m", "a", "sign", "p2", "grid_points"});
        return k;
    }(), "correlations config");
    const Common c = parse_common(cfg);
    ParamSweep d;
    d.alpha = parse::complex_axis(json{{"from", 0.0}, {"to", 2.0}, {"n", 21}}, "alpha");
    d.m = {0, 1};
    d.a = {0.6};
    d.sign = {Sign::Plus, Sign::Minus};
    const ParamSweep s = parse_sweep(cfg, d);
    const double p2 = cfg.contains("p2") ? parse::real(cfg["p2"], "p2") : 0.5;
    if (!s.beta && p2 == 0.0) throw ConfigError("p2 must be non-zero when beta follows the locus rule");
    correlations::DiscordOptions opt;
    if (cfg.contains("grid_points")) opt.grid_points = parse::integer(cfg["grid_points"], "grid_points");
    if (opt.grid_points < 3) throw ConfigError("grid_points must be >= 3");

    std::vector<QuasiWernerParams> points;
    for (Complex al : s.alpha)
        for (int m : s.m)
            for (double a : s.a)
                for (Sign sg : s.sign) {
                    if (s.beta)
                        for (Complex be : *s.beta) points.push_back(validated({al, be, m, a, sg}));
                    else
                        points.push_back(validated({al, Complex{locus_beta(sg, p2)}, m, a, sg}));
                }
    std::vector<CorrelationReport> reps(points.size());
    std::vector<double> wig(points.size());
    parallel_for(points.size(), c.quad.jobs, [&](std::size_t i) {
        reps[i] = correlations::discord(points[i], opt);
        wig[i] = phasespace::wigner_quasi_werner(points[i], {Complex{0.0}, Complex{0.0, p2}}, c.convention);
    });
    Table t{{"alpha", "beta", "m", "a", "sign", "concurrence", "eof", "discord", "mutual_information", "theta_star",
             "wigner"},
            {}};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        const auto& r = reps[i];
        t.rows.push_back({p.alpha, p.beta, p.m, p.a, std::string(1, sign_char(p.sign)), r.concurrence, r.eof, r.discord,
                          r.mutual_information, r.optimal_angles.theta, wig[i]});
    }
    return {t.render(c.format), std::nullopt, kOk};
}

// ---------------------------------------------------------------------------
// fidelity

inline Output cmd_fidelity(const json& cfg) {
    parse::require_keys(cfg, [] {
        auto k = common_keys();
        k.insert({"alpha", "beta", "m", "a", "sign", "input", "channel"});
        return k;
    }(), "fidelity config");
    const Common c = parse_common(cfg);
    ChannelFormula formula = ChannelFormula::Derived;
    if (cfg.contains("channel")) {
        const auto& v = cfg["channel"];
        if (v == "derived")
            formula = ChannelFormula::Derived;
        else if (v == "published")
            formula = ChannelFormula::Published;
        else
            throw ConfigError("channel must be 'derived' or 'published'");
    }
    ParamSweep d;
    d.alpha = {Complex{0.67}};
    d.m = {0, 1, 2, 3};
    d.a = parse::range(json{{"from", 0.0}, {"to", 1.0}, {"step", 0.01}}, "a");
    d.sign = {Sign::Plus, Sign::Minus};
    const ParamSweep s = parse_sweep(cfg, d);

    std::vector<InputState> inputs{CoherentInput{}};
    if (cfg.contains("input")) {
        const auto& in = cfg["input"];
        parse::require_keys(in, {"kind", "gamma", "s", "phi"}, "input");
        const std::string kind = in.contains("kind") && in["kind"].is_string() ? in["kind"].get<std::string>() : "coherent";
        inputs.clear();
        if (kind == "coherent") {
            if (in.contains("s") || in.contains("phi")) throw ConfigError("input: s/phi apply to squeezed inputs only");
            for (Complex g : in.contains("gamma") ? parse::complex_axis(in["gamma"], "input.gamma") : std::vector<Complex>{0.0})
                inputs.push_back(CoherentInput{g});
        } else if (kind == "squeezed") {
            if (in.contains("gamma")) throw ConfigError("input: gamma applies to coherent inputs only");
            for (double sv : in.contains("s") ? parse::real_axis(in["s"], "input.s") : std::vector<double>{0.2})
                for (double ph : in.contains("phi") ? parse::real_axis(in["phi"], "input.phi") : std::vector<double>{0.0}) {
                    SqueezedInput sq{sv, ph};
                    try {
                        sq.validate();
                    } catch (const Error& e) {
                        throw ConfigError(e.what());
                    }
                    inputs.push_back(sq);
                }
        } else {
            throw ConfigError("input.kind must be 'coherent' or 'squeezed'");
        }
    }

    std::vector<teleport::FidelityCurveKey> curves;
    for (const auto& in : inputs)
        for (Complex al : s.alpha)
            for (int m : s.m)
                for (Sign sg : s.sign) {
                    const std::vector<Complex> betas = s.beta ? *s.beta : std::vector<Complex>{al};
                    for (Complex be : betas) {
                        validated({al, be, m, 1.0, sg});
                        curves.push_back({in, al, be, m, sg});
                    }
                }
    const auto sweep = teleport::fidelity_sweep(curves, s.a, c.convention, c.quad, formula);

    auto input_cells = [](const InputState& in) -> std::vector<Table::Cell> {
        if (const auto* co = std::get_if<CoherentInput>(&in))
            return {std::string("coherent"), co->gamma.real(), co->gamma.imag(), 0.0, 0.0};
        const auto& sq = std::get<SqueezedInput>(in);
        return {std::string("squeezed"), 0.0, 0.0, sq.s, sq.phi};
    };
    Table t{{"input_kind", "gamma_re", "gamma_im", "s", "phi", "alpha", "beta", "m", "a", "sign", "fidelity",
             "err_estimate"},
            {}};
    for (const auto& r : sweep.rows) {
        auto row = input_cells(r.key.input);
        row.insert(row.end(), {r.key.alpha, r.key.beta, r.key.m, r.a, std::string(1, sign_char(r.key.sign)),
                               r.result.value, r.result.quadrature_error_estimate});
        t.rows.push_back(std::move(row));
    }

    ordered_json side = ordered_json::object();
    side["curves"] = ordered_json::array();
    for (const auto& cv : sweep.curves) {
        ordered_json params = ordered_json::object();
        const auto cells = input_cells(cv.key.input);
        params["input_kind"] = std::get<std::string>(cells[0]);
        params["gamma_re"] = std::get<double>(cells[1]);
        params["gamma_im"] = std::get<double>(cells[2]);
        params["s"] = std::get<double>(cells[3]);
        params["phi"] = std::get<double>(cells[4]);
        params["alpha"] = format_complex(cv.key.alpha);
        params["beta"] = format_complex(cv.key.beta);
        params["m"] = cv.key.m;
        params["sign"] = std::string(1, sign_char(cv.key.sign));
        ordered_json e = ordered_json::object();
        e["params"] = std::move(params);
        e["max_fidelity"] = cv.max_fidelity;
        e["argmax_a"] = cv.argmax_a;
        e["exceeds_classical_bound"] = cv.max_fidelity > 0.5;
        side["curves"].push_back(std::move(e));
    }
    return {t.render(c.format), dump_json(side), kOk};
}

// ---------------------------------------------------------------------------
// verify

inline Output cmd_verify(const json& cfg) {
    parse::require_keys(cfg, {"out", "format", "jobs", "seed", "points", "discord_cases", "fidelity_cases", "cutoff"},
                        "verify config");
    verify::VerifyOptions opt;
    std::string out;
    if (cfg.contains("out")) out = cfg["out"].get<std::string>();
    if (cfg.contains("format") && cfg["format"] != "json") throw ConfigError("verify writes JSON only");
    if (cfg.contains("seed")) opt.seed = static_cast<std::uint64_t>(parse::integer(cfg["seed"], "seed"));
    if (cfg.contains("points")) opt.points = parse::integer(cfg["points"], "points");
    if (cfg.contains("discord_cases")) opt.discord_cases = parse::integer(cfg["discord_cases"], "discord_cases");
    if (cfg.contains("fidelity_cases")) opt.fidelity_cases = parse::integer(cfg["fidelity_cases"], "fidelity_cases");
    if (cfg.contains("cutoff")) opt.cutoff = parse::integer(cfg["cutoff"], "cutoff");
    if (opt.points < 1 || opt.discord_cases < 1 || opt.fidelity_cases < 1)
        throw ConfigError("verify: sample counts must be positive");
    const auto results = verify::run_all(opt);
    ordered_json doc = ordered_json::object();
    doc["schema"] = "qwerner-verify/1";
    doc["seed"] = opt.seed;
    doc["cutoff"] = opt.cutoff;
    bool all = true;
    doc["checks"] = ordered_json::array();
    for (const auto& r : results) {
        ordered_json e = ordered_json::object();
        e["name"] = r.name;
        e["passed"] = r.passed;
        e["max_deviation"] = r.max_deviation;
        e["tolerance"] = r.tolerance;
        e["samples"] = r.samples;
        e["error"] = r.error.empty() ? ordered_json(nullptr) : ordered_json(r.error);
        doc["checks"].push_back(std::move(e));
        all = all && r.passed;
    }
    doc["passed"] = all;
    return {dump_json(doc), std::nullopt, all ? kOk : kVerifyFailed};
}

// ---------------------------------------------------------------------------
// Driver

inline json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    try {
        json j = json::parse(f);
        if (!j.is_object()) throw ConfigError("config root must be an object");
        return j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

inline std::string sidecar_path(const std::string& out) { return out + ".curves.json"; }

/// Runs `command` with the config file merged under `overrides` (flags win).
/// Returns the process exit code; diagnostics go to `err`.
inline int run(const std::string& command, const std::string& config_path, const json& overrides,
               std::ostream& err = std::cerr) {
    static const std::map<std::string, std::function<Output(const json&)>> table{
        {"wigner", cmd_wigner},
        {"wln", cmd_wln},
        {"correlations", cmd_correlations},
        {"fidelity", cmd_fidelity},
        {"verify", cmd_verify}};
    const auto it = table.find(command);
    if (it == table.end()) {
        err << "qwerner: unknown command '" << command << "'\n";
        return kConfigError;
    }
    json cfg;
    try {
        cfg = load_config(config_path);
        for (auto o = overrides.begin(); o != overrides.end(); ++o) cfg[o.key()] = o.value();
    } catch (const ConfigError& e) {
        err << "qwerner: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        const Output out = it->second(cfg);
        const std::string path = cfg.contains("out") && cfg["out"].is_string() ? cfg["out"].get<std::string>() : "";
        if (out.sidecar && !path.empty() && path != "-") write_atomic(sidecar_path(path), *out.sidecar);
        write_atomic(path, out.main);
        if (out.sidecar && (path.empty() || path == "-")) std::cout << *out.sidecar;
        if (out.exit_code == kVerifyFailed) err << "qwerner: verification failed\n";
        return out.exit_code;
    } catch (const ConfigError& e) {
        err << "qwerner: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const json::exception& e) {
        err << "qwerner: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "qwerner: numeric error: " << e.what() << "\n";
        return kNumericError;
    }
}

}  // namespace qwerner::cli
