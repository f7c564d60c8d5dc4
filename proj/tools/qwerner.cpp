// qwerner: command-line front end. Every flag overrides the matching key of
// the --config file.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qwerner/cli.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out, format, convention, channel, log_base;
    std::optional<double> tol;
    std::optional<int> jobs, cutoff;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output path ('-' for stdout)");
    sub->add_option("--format", f.format, "csv or json");
    sub->add_option("--convention", f.convention, "subspace or paper-flat");
    sub->add_option("--tol", f.tol, "absolute quadrature tolerance");
    sub->add_option("--jobs", f.jobs, "worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-Werner states of photon-added coherent states"};
    app.require_subcommand(1, 1);
    Flags f;
    for (const char* name : {"wigner", "wln", "correlations", "fidelity"}) add_common(app.add_subcommand(name), f);
    app.get_subcommand("wln")->add_option("--log-base", f.log_base, "e or 2");
    app.get_subcommand("fidelity")->add_option("--channel", f.channel, "derived or published");
    auto* verify = app.add_subcommand("verify", "closed forms against the truncated-Fock oracle");
    verify->add_option("--config", f.config, "JSON options")->check(CLI::ExistingFile);
    verify->add_option("--out", f.out, "report path ('-' for stdout)");
    verify->add_option("--cutoff", f.cutoff, "force this Fock cutoff");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : qwerner::cli::kConfigError;
    }

    nlohmann::json over = nlohmann::json::object();
    if (f.out) over["out"] = *f.out;
    if (f.format) over["format"] = *f.format;
    if (f.convention) over["convention"] = *f.convention;
    if (f.channel) over["channel"] = *f.channel;
    if (f.log_base) over["log_base"] = *f.log_base;
    if (f.tol) over["tol"] = *f.tol;
    if (f.jobs) over["jobs"] = *f.jobs;
    if (f.cutoff) over["cutoff"] = *f.cutoff;

    const std::string cmd = app.get_subcommands().front()->get_name();
    return qwerner::cli::run(cmd, f.config, over);
}
