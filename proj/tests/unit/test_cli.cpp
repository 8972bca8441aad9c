#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "cli.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using nmcorr::cli::run_cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    const int code = run_cli(args, o, e);
    return {code, o.str(), e.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("nmcorr_test_cli_" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<std::string> body(const std::string& csv) {
    std::vector<std::string> out;
    for (auto& l : lines_of(csv))
        if (l.empty() || l[0] != '#') out.push_back(l);
    return out;
}

std::vector<double> split_numbers(const std::string& row) {
    std::vector<double> v;
    std::istringstream is(row);
    for (std::string cell; std::getline(is, cell, ',');) v.push_back(std::stod(cell));
    return v;
}

std::size_t count_files(const fs::path& dir, const std::string& prefix, const std::string& ext) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && e.path().extension() == ext && name.find("index") == std::string::npos) ++n;
    }
    return n;
}

int exit_status(const std::string& cmd) {
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("curve: header, row count, finite values") {
    const Run r = run({"curve", "--s", "1", "--eta-rel", "1.5", "--temp-k", "0.5", "--n0", "1", "--tau-max", "200",
                       "--points", "2000", "-o", "-"});
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    std::size_t header_at = 0;
    while (header_at < ls.size() && ls[header_at] != "# tau*omega0,re_gE,im_gE,re_gM,im_gM,N") ++header_at;
    REQUIRE(header_at < ls.size());
    for (std::size_t i = 0; i < header_at; ++i) CHECK(ls[i].rfind("# ", 0) == 0);
    const auto rows = body(r.out);
    CHECK(rows.size() == 2001);
    CHECK(rows.front() == "0,1,0,1,0,0");
    for (const auto& row : rows) {
        const auto v = split_numbers(row);
        REQUIRE(v.size() == 6);
        for (double x : v) REQUIRE(std::isfinite(x));
    }
    CHECK(split_numbers(rows.back())[0] == 200.0);
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("curve: zero coupling and the N' column") {
    const Run r = run({"curve", "--eta-rel", "0", "--tau-max", "20", "--points", "200", "--nprime", "-o", "-"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# tau*omega0,re_gE,im_gE,re_gM,im_gM,N,Nprime\n") != std::string::npos);
    const auto rows = body(r.out);
    REQUIRE(rows.size() == 201);
    for (const auto& row : rows) {
        const auto v = split_numbers(row);
        REQUIRE(v.size() == 7);
        CHECK(v[5] < 1e-12);
        CHECK(v[6] < 1e-12);
    }
}

TEST_CASE("curve: deterministic bodies and record replay") {
    const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv", c = scratch() / "c.csv";
    const std::vector<std::string> args{"curve", "--s",   "2",   "--eta-rel", "1.2",    "--theta",
                                        "3.3",   "--n0",  "10",  "--t",       "1.5",    "--tau-max",
                                        "15",    "--points", "150", "-o",     a.string()};
    REQUIRE(run(args).code == 0);
    auto again = args;
    again.back() = b.string();
    REQUIRE(run(again).code == 0);
    CHECK(body(slurp(a)) == body(slurp(b)));

    REQUIRE(run({"curve", "--record", a.string(), "-o", c.string()}).code == 0);
    CHECK(body(slurp(a)) == body(slurp(c)));
    const auto rec_a = nmcorr::cli::read_record_flags(a.string());
    CHECK(rec_a == nmcorr::cli::read_record_flags(c.string()));
    // The echoed record carries the temperature the way it was given.
    bool has_theta = false;
    for (const auto& f : rec_a) has_theta = has_theta || f == "--theta";
    CHECK(has_theta);

    // Later flags override the replayed ones.
    REQUIRE(run({"curve", "--record", a.string(), "--n0", "1", "-o", c.string()}).code == 0);
    CHECK(body(slurp(a)) != body(slurp(c)));

    // Headers differ only in the command and timestamp lines.
    const auto ha = lines_of(slurp(a)), hb = lines_of(slurp(b));
    for (std::size_t i = 0; i < ha.size() && ha[i][0] == '#'; ++i)
        if (ha[i].rfind("# timestamp:", 0) != 0 && ha[i].rfind("# command:", 0) != 0) CHECK(ha[i] == hb[i]);
}

TEST_CASE("curve: kelvin round trip and svg") {
    const fs::path a = scratch() / "k.csv", c = scratch() / "k2.csv", s = scratch() / "k.svg";
    REQUIRE(run({"curve", "--temp-k", "0.05", "--eta-rel", "0.5", "--tau-max", "5", "--points", "50", "--omega0-ghz",
                 "7.5", "-o", a.string(), "--svg", s.string()})
                .code == 0);
    REQUIRE(run({"curve", "--record", a.string(), "-o", c.string()}).code == 0);
    CHECK(body(slurp(a)) == body(slurp(c)));
    const std::string svg = slurp(s);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"curve", "--bogus"}).code == 2);
    CHECK(run({"curve", "--s", "-1"}).code == 2);
    CHECK(run({"curve", "--points", "0"}).code == 2);
    CHECK(run({"curve", "--n0", "-2"}).code == 2);
    CHECK(run({"curve", "--t", "0.033"}).code == 2);
    CHECK(run({"fig", "4"}).code == 2);
    CHECK(run({"curve", "--record", (scratch() / "missing.csv").string()}).code == 2);
    const Run deg = run({"curve", "--theta", "0", "--n0", "0", "--tau-max", "2", "--points", "20", "-o", "-"});
    CHECK(deg.code == 3);
    CHECK(deg.err.find("DegenerateState") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("localized report") {
    const Run none = run({"localized", "--s", "1", "--eta-rel", "0.5"});
    CHECK(none.code == 0);
    CHECK(none.out.find("no localized mode (\xCE\xB7 \xE2\x89\xA4 \xCE\xB7_c)") != std::string::npos);
    CHECK(run({"localized", "--s", "3"}).out.find("eta_c = 0.1000") != std::string::npos);

    const Run bound = run({"localized", "--s", "1", "--eta-rel", "1.5"});
    REQUIRE(bound.code == 0);
    double wb = 0, z = 0, res = 1;
    for (const auto& l : lines_of(bound.out)) {
        if (l.rfind("omega_b/omega0 = ", 0) == 0) wb = std::stod(l.substr(17));
        if (l.rfind("Z = ", 0) == 0) z = std::stod(l.substr(4));
        if (l.rfind("pole residual = ", 0) == 0) res = std::stod(l.substr(16));
    }
    CHECK(wb < 0.0);
    CHECK(z > 0.0);
    CHECK(z < 1.0);
    CHECK(res < 1e-10);
}

TEST_CASE("fig: file counts and index") {
    const std::map<int, std::pair<std::size_t, std::size_t>> want{{1, {20, 4}}, {2, {24, 8}}, {3, {24, 8}}};
    for (const auto& [id, n] : want) {
        const fs::path dir = scratch() / ("fig" + std::to_string(id));
        const Run r = run({"fig", std::to_string(id), "--outdir", dir.string(), "--tau-max", "2", "--points", "20",
                           "--svg", "--jobs", "2"});
        REQUIRE(r.code == 0);
        const std::string prefix = "fig" + std::to_string(id) + "_";
        CHECK(count_files(dir, prefix, ".csv") == n.first);
        CHECK(count_files(dir, prefix, ".svg") == n.second);
        const auto idx = lines_of(slurp(dir / (prefix + "index.csv")));
        std::size_t rows = 0;
        for (const auto& l : idx)
            if (l.rfind(prefix, 0) == 0) {
                ++rows;
                CHECK(fs::exists(dir / l.substr(0, l.find(','))));
            }
        CHECK(rows == n.first);
    }
    CHECK(fs::exists(scratch() / "fig2" / "fig2_d_T0.05K.csv"));
    CHECK(fs::exists(scratch() / "fig1" / "fig1_a_eta1.5.csv"));
    CHECK(fs::exists(scratch() / "fig3" / "fig3_h_n0_50.csv"));
}

TEST_CASE("validate: quick suite passes, sign mutation fails") {
    const Run ok = run({"validate", "--quick"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    const Run bad = run({"validate", "--quick", "--inject-lamb-sign-error"});
    CHECK(bad.code == 1);
    bool sum_rule_failed = false;
    for (const auto& l : lines_of(bad.out)) sum_rule_failed = sum_rule_failed || l.rfind("FAIL spectral sum rule", 0) == 0;
    CHECK(sum_rule_failed);
}

TEST_CASE("installed binary returns the same exit codes") {
    const std::string exe = NMCORR_CLI_PATH;
    CHECK(exit_status(exe + " localized --s 2 > /dev/null") == 0);
    CHECK(exit_status(exe + " curve --nope > /dev/null 2>&1") == 2);
    CHECK(exit_status(exe + " curve --theta 0 --n0 0 --tau-max 1 --points 10 -o - > /dev/null 2>&1") == 3);
    fs::remove_all(scratch());
}
