#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "leraykit/cli.hpp"

using leraykit::cli::run;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::vector<double> column(const std::vector<std::vector<std::string>>& rows, std::size_t c)
{
    std::vector<double> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        out.push_back(std::stod(rows[i][c]));
    }
    return out;
}

std::filesystem::path temp_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("leraykit_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("cli symbol: Heisenberg rows")
{
    const auto r = call({"symbol", "--gamma", "2", "--d", "1", "--k", "0..5"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"k", "J", "sqrtJ", "bounded", "error_radius"});
    for (double j : column(rows, 1)) {
        CHECK(j == 1.0);
    }
}

TEST_CASE("cli symbol: preferred measure column increases")
{
    const auto r = call({"symbol", "--gamma", "5", "--measure", "preferred", "--k", "0..60"});
    REQUIRE(r.code == 0);
    const auto j = column(parse_csv(r.out), 1);
    REQUIRE(j.size() == 61);
    for (std::size_t i = 1; i < j.size(); ++i) {
        CHECK(j[i] > j[i - 1]);
    }
}

TEST_CASE("cli symbol: unbounded mode exits 2 naming the interval")
{
    const auto r = call({"symbol", "--gamma", "1.5", "--d", "10", "--k", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("∉ I_0(1.5) = (-1, 2)") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("cli norm examples")
{
    auto value = [](const Result& r) { return std::stod(parse_csv(r.out)[1][3]); };
    auto method = [](const Result& r) { return parse_csv(r.out)[1][5]; };
    const auto a = call({"norm", "--gamma", "2", "--d", "0"});
    REQUIRE(a.code == 0);
    CHECK(value(a) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-14));
    CHECK(method(a) == "closed-form-gamma2");
    const auto b = call({"norm", "--gamma", "3", "--measure", "pairing"});
    CHECK(value(b) == doctest::Approx(3 / (2 * std::sqrt(2.0))).epsilon(1e-14));
    const auto c = call({"norm", "--gamma", "4", "--measure", "preferred"});
    CHECK(value(c) == doctest::Approx(std::sqrt(4 / (2 * std::sqrt(3.0)))).epsilon(1e-14));
    CHECK(value(c) == doctest::Approx(1.07457).epsilon(1e-5));
}

TEST_CASE("cli usage errors exit 2")
{
    CHECK(call({}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"norm", "--gamma", "3"}).code == 2);                                // neither d nor measure
    CHECK(call({"norm", "--gamma", "3", "--d", "1", "--measure", "pairing"}).code == 2);
    CHECK(call({"norm", "--gamma", "abc", "--d", "1"}).code == 2);
    CHECK(call({"--tol", "-1", "version"}).code == 2);
    CHECK(call({"--grid-count", "1", "version"}).code == 2);
    CHECK(call({"phi", "--r", "1", "--q", "1"}).code == 2);
    CHECK(call({"symbol", "--gamma", "2", "--d", "0", "--k", "5..2"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("cli version")
{
    const auto r = call({"version"});
    CHECK(r.code == 0);
    CHECK(r.out == std::string("leraykit ") + LERAYKIT_VERSION + "\n");
    const auto j = json::parse(call({"version", "--format", "json"}).out);
    CHECK(j["version"] == LERAYKIT_VERSION);
    CHECK(j.contains("config"));
    CHECK(j["certificates"].empty());
    CHECK(j["tables"].empty());
}

TEST_CASE("cli phi with sandwich")
{
    const auto r = call({"phi", "--r", "3", "--q", "0"});
    REQUIRE(r.code == 0);
    const auto row = parse_csv(r.out)[1];
    const double phi = std::stod(row[2]);
    CHECK(phi < 1);
    CHECK(std::stod(row[4]) < phi);
    CHECK(phi < std::stod(row[5]));
}

TEST_CASE("cli certify bw and em")
{
    const auto bw = call({"certify", "bw", "--format", "json"});
    CHECK(bw.code == 0);
    const auto jb = json::parse(bw.out);
    bool refuted = false;
    for (const auto& c : jb["certificates"]) {
        CHECK_FALSE(c["paper_anchor"].get<std::string>().empty());
        if (c["claim_id"] == "q=2/3 CM refuted") {
            refuted = c["verdict"] == "verified" && c["witnesses"].contains("kernel_negative_at_t");
        }
    }
    CHECK(refuted);

    const auto em = call({"certify", "em", "--format", "json"});
    CHECK(em.code == 0);
    const auto je = json::parse(em.out);
    int found = 0;
    for (const auto& c : je["certificates"]) {
        if (c["claim_id"] == "H''(1/3) exact" || c["claim_id"] == "Table 3 β_n equality") {
            CHECK(c["verdict"] == "verified");
            ++found;
        }
    }
    CHECK(found == 2);
    // deterministic output
    CHECK(call({"certify", "em", "--format", "json"}).out == em.out);
}

TEST_CASE("cli certify writes the bundle to --output")
{
    const auto dir = temp_dir("certify");
    const auto path = (dir / "bundle.json").string();
    const auto r = call({"certify", "em", "--output", path});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("claim_id,method,verdict\n", 0) == 0);
    std::ifstream f(path);
    const json j = json::parse(f);
    CHECK(j["certificates"].size() == 13);
    CHECK(j["config"]["output"] == path);
}

TEST_CASE("cli output errors are reported")
{
    const auto r = call({"version", "--format", "json", "--output", "/nonexistent/dir/x.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("cli config file with flag override")
{
    const auto dir = temp_dir("config");
    const auto cfg = (dir / "run.ini").string();
    {
        std::ofstream f(cfg);
        f << "# test config\ntol = 1e-10\nk-max = 7\nformat = json\n[phi]\nr = 3\nq = 0\n";
    }
    const auto a = json::parse(call({"phi", "--config", cfg}).out);
    CHECK(a["config"]["tolerance"] == 1e-10);
    CHECK(a["config"]["k_max"] == 7);
    CHECK(a["tables"][0]["rows"][0][0] == 3);

    const auto b = json::parse(call({"phi", "--config", cfg, "--tol", "1e-11", "--r", "5"}).out);
    CHECK(b["config"]["tolerance"] == 1e-11);
    CHECK(b["tables"][0]["rows"][0][0] == 5);

    const auto c = call({"phi", "--config", cfg, "--format", "csv"});
    CHECK(c.out.rfind("r,q,Phi", 0) == 0);
}

TEST_CASE("cli figures")
{
    const auto dir = temp_dir("figures");
    const auto j = call({"figures", "j-sweep", "--out", dir.string(), "--k-max", "40"});
    REQUIRE(j.code == 0);
    auto read = [&](const std::string& name) {
        std::ifstream f(dir / name);
        std::stringstream s;
        s << f.rdbuf();
        return parse_csv(s.str());
    };
    const auto d4 = column(read("j-sweep_d_4.csv"), 1);
    const auto d2 = column(read("j-sweep_d_2.csv"), 1);
    REQUIRE(d4.size() == 41);
    for (std::size_t i = 1; i < d4.size(); ++i) {
        CHECK(d4[i] < d4[i - 1]);
        CHECK(d2[i] > d2[i - 1]);
    }
    CHECK(read("j-sweep_d_4.csv")[0] == std::vector<std::string>{"k", "J", "error_radius"});

    const auto p = call({"figures", "phi-sweep", "--out", dir.string(), "--grid-count", "30"});
    REQUIRE(p.code == 0);
    const auto q0 = read("phi-sweep_q_0.csv");
    for (double v : column(q0, 1)) {
        CHECK(v < 1);
    }
    for (const char* name : {"phi-sweep_q_0.csv", "phi-sweep_q_2over3.csv", "phi-sweep_q_1.csv"}) {
        const auto col = column(read(name), 1);
        CHECK(std::abs(col.back() - 1) < 1e-5);
    }
    CHECK(column(read("phi-sweep_q_2over3.csv"), 1).front() > 1);

    CHECK(call({"figures", "nope", "--out", dir.string()}).code == 2);
    CHECK(call({"figures", "j-sweep"}).code == 2);
}

TEST_CASE("cli rejects a bad precision override")
{
    ::setenv("LERAYKIT_PRECISION_BITS", "12", 1);
    const auto r = call({"version"});
    ::unsetenv("LERAYKIT_PRECISION_BITS");
    CHECK(r.code == 2);
    CHECK(r.err.find("LERAYKIT_PRECISION_BITS") != std::string::npos);
}
