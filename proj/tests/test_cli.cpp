#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("qwerner_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << j.dump();
    return p;
}

// exit status of `qwerner <args>`, stdout/stderr discarded
int run_cli(const std::string& args) {
    const std::string cmd = std::string(QWERNER_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
    return out;
}

json small_wln() {
    return {{"alpha", {0.2, 1.2}}, {"beta", {0.1, 1.1}}, {"m", {0, 1}}, {"a", {0.5, 1.0}}, {"sign", "+"}, {"tol", 1e-6}};
}

}  // namespace

TEST(Cli, WlnGridProducesOneRowPerPoint) {
    const auto cfg = write_config("wln.json", small_wln());
    const fs::path out = scratch_dir() / "wln.csv";
    ASSERT_EQ(run_cli("wln --config " + cfg.string() + " --out " + out.string()), 0);
    const auto l = lines(slurp(out));
    ASSERT_EQ(l.size(), 17u);
    EXPECT_EQ(l[0], "alpha,beta,m,a,sign,wln_two_mode,wln_mode1,wln_mode2");
    for (std::size_t i = 1; i < l.size(); ++i) EXPECT_EQ(split(l[i]).size(), 8u) << l[i];
    EXPECT_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST(Cli, OutputIsByteDeterministic) {
    json j = small_wln();
    j["alpha"] = {0.2};
    j["beta"] = {0.1};
    const auto cfg = write_config("det.json", j);
    const fs::path a = scratch_dir() / "det_a.csv", b = scratch_dir() / "det_b.csv", c = scratch_dir() / "det_c.csv";
    ASSERT_EQ(run_cli("wln --config " + cfg.string() + " --out " + a.string()), 0);
    ASSERT_EQ(run_cli("wln --config " + cfg.string() + " --out " + b.string()), 0);
    ASSERT_EQ(run_cli("wln --config " + cfg.string() + " --jobs 3 --out " + c.string()), 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a), slurp(c));
}

TEST(Cli, FloatsCarrySeventeenSignificantDigits) {
    const auto cfg = write_config("fmt.json", {{"grid", {{"q1", {-1.0, 1.0, 3}}, {"p1", 0.0}, {"q2", 0.5}, {"p2", 0.0}}}});
    const fs::path out = scratch_dir() / "fmt.csv";
    ASSERT_EQ(run_cli("wigner --config " + cfg.string() + " --out " + out.string()), 0);
    const auto l = lines(slurp(out));
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "q1,p1,q2,p2,W");
    const std::regex sci(R"(-?\d\.\d{16}e[+-]\d{2,3})");
    for (std::size_t i = 1; i < l.size(); ++i)
        for (const auto& cell : split(l[i])) EXPECT_TRUE(std::regex_match(cell, sci)) << cell;
}

TEST(Cli, JsonOutput) {
    const auto cfg = write_config("json.json", {{"grid", {{"q1", 0.0}, {"p1", 0.0}, {"q2", 0.0}, {"p2", 0.0}}}});
    const fs::path out = scratch_dir() / "w.json";
    ASSERT_EQ(run_cli("wigner --config " + cfg.string() + " --format json --out " + out.string()), 0);
    const json j = json::parse(slurp(out));
    EXPECT_EQ(j["columns"].size(), 5u);
    EXPECT_EQ(j["rows"].size(), 1u);
}

TEST(Cli, ConfigErrorsExitTwo) {
    EXPECT_EQ(run_cli("wln --config " + write_config("bad1.json", {{"bogus", 1}}).string()), 2);
    EXPECT_EQ(run_cli("wln --config " + write_config("bad2.json", {{"alpha", json::array()}}).string()), 2);
    EXPECT_EQ(run_cli("wln --format xml"), 2);
    EXPECT_EQ(run_cli("wln --config " + write_config("bad3.json", {{"a", 1.5}}).string()), 2);
    EXPECT_EQ(run_cli("nosuch"), 2);
    EXPECT_EQ(run_cli("wln --config /nonexistent/cfg.json"), 2);
    const fs::path bad = scratch_dir() / "broken.json";
    std::ofstream(bad) << "{not json";
    EXPECT_EQ(run_cli("wln --config " + bad.string()), 2);
}

TEST(Cli, NumericFailureExitsThree) {
    json j = small_wln();
    j["alpha"] = {0.2};
    j["beta"] = {0.1};
    j["m"] = {1};
    j["a"] = {1.0};
    // one doubling from a clipped square cannot settle
    j["tol"] = 1e-9;
    j["half_width"] = 0.25;
    j["max_levels"] = 1;
    const fs::path out = scratch_dir() / "num.csv";
    EXPECT_EQ(run_cli("wln --config " + write_config("num.json", j).string() + " --out " + out.string()), 3);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, CorrelationsDefaults) {
    const auto cfg = write_config("corr.json", {{"alpha", {0.0, 1.0}}, {"m", {0}}, {"a", {0.0, 0.6}}});
    const fs::path out = scratch_dir() / "corr.csv";
    ASSERT_EQ(run_cli("correlations --config " + cfg.string() + " --out " + out.string()), 0);
    const auto l = lines(slurp(out));
    ASSERT_EQ(l.size(), 9u);
    EXPECT_EQ(l[0], "alpha,beta,m,a,sign,concurrence,eof,discord,mutual_information,theta_star,wigner");
    std::vector<std::string> plus_beta, minus_beta;
    for (std::size_t i = 1; i < l.size(); ++i) {
        const auto c = split(l[i]);
        ASSERT_EQ(c.size(), 11u);
        if (std::stod(c[3]) == 0.0) {
            EXPECT_EQ(std::stod(c[7]), 0.0) << l[i];
        }
        (c[4] == "+" ? plus_beta : minus_beta).push_back(c[1]);
    }
    ASSERT_FALSE(plus_beta.empty());
    ASSERT_FALSE(minus_beta.empty());
    EXPECT_NE(plus_beta.front(), minus_beta.front());
}

TEST(Cli, FidelityWritesSidecar) {
    const auto cfg = write_config(
        "fid.json", {{"m", {0}}, {"a", {{"from", 0.0}, {"to", 1.0}, {"n", 3}}}, {"sign", "+"}, {"tol", 1e-6}});
    const fs::path out = scratch_dir() / "fid.csv";
    ASSERT_EQ(run_cli("fidelity --config " + cfg.string() + " --out " + out.string()), 0);
    const auto l = lines(slurp(out));
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "input_kind,gamma_re,gamma_im,s,phi,alpha,beta,m,a,sign,fidelity,err_estimate");
    const json side = json::parse(slurp(out.string() + ".curves.json"));
    ASSERT_EQ(side["curves"].size(), 1u);
    const auto& c = side["curves"][0];
    EXPECT_EQ(c["argmax_a"].get<double>(), 1.0);
    EXPECT_NEAR(c["max_fidelity"].get<double>(), std::stod(split(l[3])[10]), 1e-15);
    // about 0.60 at a = 1, above 1/2
    EXPECT_TRUE(c["exceeds_classical_bound"].get<bool>());
}

TEST(Cli, VerifyReport) {
    const fs::path out = scratch_dir() / "verify.json";
    ASSERT_EQ(run_cli("verify --out " + out.string()), 0);
    const json r = json::parse(slurp(out));
    EXPECT_EQ(r["schema"], "qwerner-verify/1");
    EXPECT_TRUE(r["passed"].get<bool>());
    ASSERT_FALSE(r["checks"].empty());
    for (const auto& c : r["checks"]) {
        for (const char* k : {"name", "passed", "max_deviation", "tolerance", "samples", "error"})
            EXPECT_TRUE(c.contains(k)) << k;
        EXPECT_LE(c["max_deviation"].get<double>(), c["tolerance"].get<double>());
    }
    const fs::path bad = scratch_dir() / "verify_bad.json";
    EXPECT_EQ(run_cli("verify --cutoff 8 --out " + bad.string()), 1);
    EXPECT_FALSE(json::parse(slurp(bad))["passed"].get<bool>());
}
