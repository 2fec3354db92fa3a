#include "cli.hpp"

#include "monohire/equilibrium.hpp"
#include "monohire/format.hpp"
#include "monohire/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace monohire;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "monohire");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("monohire_cli_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("solve writes the threshold JSON") {
    TempDir dir;
    const auto r = invoke({"solve", "--n", "2", "--c", "0.2", "--out", dir.file("s.json")});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("level=0.6") != std::string::npos);
    const auto doc = nlohmann::json::parse(read_text_file(dir.file("s.json")));
    CHECK(doc["level"].get<double>() == 0.6);
    CHECK(doc["tau"][0].get<double>() == 0.0);
    CHECK(doc["tau"][1].get<double>() == 0.6);
    CHECK(doc["tau"][2].get<double>() == 1.0);
    CHECK(doc["verification"]["is_equilibrium"].get<bool>());
}

TEST_CASE("solve output round-trips through verify") {
    TempDir dir;
    for (const std::string scheme : {"correlated", "independent"}) {
        REQUIRE(invoke({"solve", "--n", "3", "--c", "0.3", "--scheme", scheme, "--kind",
                        "piecewise-linear", "--breakpoints", "0,0.5,1", "--values", "1,2,1",
                        "--out", dir.file("s.json")})
                    .code == 0);
        const auto v = invoke({"verify", "--profile", dir.file("s.json"), "--out", dir.file("v.json")});
        CHECK(v.code == 0);
        CHECK(v.out.find("is_equilibrium=true") != std::string::npos);
        const auto doc = nlohmann::json::parse(read_text_file(dir.file("v.json")));
        CHECK(doc["verification"]["is_equilibrium"].get<bool>());
        CHECK(doc["scheme"].get<std::string>() == scheme);
    }
    const std::string text = "0: 0.6-0.8\n1: 0.8-1\n";
    write_text_file(dir.file("p.txt"), text);
    const auto v = invoke({"verify", "--profile", dir.file("p.txt"), "--n", "2", "--c", "0.2",
                           "--out", "-"});
    CHECK(v.code == 0);
    CHECK(v.out.find("is_equilibrium=true") != std::string::npos);
}

TEST_CASE("samples prints the smallest k") {
    const auto r = invoke({"samples", "--p1", "0.1", "--p2", "0.15", "--q", "0.9"});
    CHECK(r.code == 0);
    CHECK(r.out == "162\n");
    TempDir dir;
    const auto t = invoke({"samples", "--p1", "0.1", "--p2-range", "0.15:0.4:0.01", "--q",
                           "0.8,0.9,0.95", "--out", dir.file("k.csv")});
    CHECK(t.code == 0);
    CHECK(csv_lines(read_text_file(dir.file("k.csv"))).size() == 79);
}

TEST_CASE("pons sweep over N approaches the limit") {
    TempDir dir;
    const auto r = invoke({"pons-sweep", "--axis", "n", "--grid", "1:100", "--c", "0.2",
                           "--out", dir.file("p.csv")});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(read_text_file(dir.file("p.csv")));
    REQUIRE(lines.size() == 101);
    CHECK(lines[0] == "n,c,scheme,sw_naive,sw_ne,sw_max,pons,poa,status");
    const auto cells = split_list(lines.back(), ',');
    CHECK(cells[0] == "100");
    CHECK(std::abs(parse_double(cells[6], "pons") - 2.7778) < 0.01 * 2.7778);
    CHECK(cells[8] == "ok");
}

TEST_CASE("single-point sweep matches a direct computation") {
    TempDir dir;
    REQUIRE(invoke({"poa-sweep", "--axis", "c", "--grid", "0.3", "--n", "4", "--scheme",
                    "independent", "--grid-size", "20000", "--out", dir.file("p.csv")})
                .code == 0);
    const auto lines = csv_lines(read_text_file(dir.file("p.csv")));
    REQUIRE(lines.size() == 2);
    const auto w = welfare_summary(
        Instance(4, 0.3, ScoreDistribution::uniform(), DecisionScheme::independent), 20000);
    const auto cells = split_list(lines[1], ',');
    CHECK(cells[4] == format_number(w.sw_ne));
    CHECK(cells[7] == format_number(w.poa));
}

TEST_CASE("identical inputs give identical bytes") {
    TempDir dir;
    for (int rep = 0; rep < 2; ++rep) {
        const std::string tag = std::to_string(rep);
        REQUIRE(invoke({"simulate", "--n", "3", "--c", "0.2", "--applicants", "50000", "--seed",
                        "9", "--threads", rep == 0 ? "1" : "3", "--out", dir.file("m" + tag)})
                    .code == 0);
        REQUIRE(invoke({"pons-sweep", "--axis", "c", "--grid", "0.05:0.5:0.05", "--n", "3",
                        "--scheme", "independent", "--grid-size", "5000", "--threads",
                        rep == 0 ? "1" : "4", "--out", dir.file("w" + tag)})
                    .code == 0);
        REQUIRE(invoke({"dynamics", "--n", "3", "--c", "0.2", "--out", dir.file("d" + tag),
                        "--profile-out", dir.file("dp" + tag)})
                    .code == 0);
    }
    for (const std::string stem : {"m", "w", "d", "dp"}) {
        CHECK(read_text_file(dir.file(stem + "0")) == read_text_file(dir.file(stem + "1")));
    }
}

TEST_CASE("config files and flag precedence") {
    TempDir dir;
    write_text_file(dir.file("run.cfg"),
                    "# instance\ncommand = solve\nn = 2\nc = 0.35\nscheme = correlated\n");
    const auto a = invoke({"--config", dir.file("run.cfg"), "--out", dir.file("a.json")});
    CHECK(a.code == 0);
    CHECK(a.out.find("m_max=2") != std::string::npos);
    const auto b = invoke({"solve", "--config", dir.file("run.cfg"), "--c", "0.2", "--out",
                           dir.file("b.json")});
    CHECK(b.code == 0);
    CHECK(b.out.find("level=0.6") != std::string::npos);

    write_text_file(dir.file("bad.cfg"), "n = 2\ncolour = blue\n");
    CHECK(invoke({"solve", "--config", dir.file("bad.cfg")}).code == cli::kExitArgument);
    write_text_file(dir.file("dup.cfg"), "n = 2\nn = 3\n");
    CHECK(invoke({"solve", "--config", dir.file("dup.cfg")}).code == cli::kExitArgument);
    CHECK(cli::parse_config_text("grid_size = 10\n").count("grid-size") == 1);
}

TEST_CASE("output directory from the environment") {
    TempDir dir;
    ::setenv("MONOHIRE_OUT_DIR", dir.path.c_str(), 1);
    const auto r = invoke({"flexcap", "--n", "4", "--welfare", "0.32"});
    ::unsetenv("MONOHIRE_OUT_DIR");
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(read_text_file(dir.file("flexcap.json")));
    CHECK(std::abs(doc["total_capacity"].get<double>() - 0.4) < 1e-9);
    CHECK(std::abs(doc["naive_total_capacity"].get<double>() - 1.6) < 1e-9);
}

TEST_CASE("exit codes") {
    CHECK(invoke({"solve", "--n", "2"}).code == cli::kExitArgument);
    CHECK(invoke({"solve", "--n", "2", "--c", "1.5", "--out", "-"}).code == cli::kExitArgument);
    CHECK(invoke({"solve", "--n", "x", "--c", "0.2"}).code == cli::kExitArgument);
    CHECK(invoke({"solve", "--n", "2", "--c", "0.2", "--scheme", "partial"}).code ==
          cli::kExitArgument);
    CHECK(invoke({"frobnicate"}).code == cli::kExitArgument);
    CHECK(invoke({"solve", "--bogus", "1"}).code == cli::kExitArgument);

    const auto pre = invoke({"one-turn", "--n", "2", "--c", "0.6", "--out", "-"});
    CHECK(pre.code == cli::kExitArgument);
    CHECK(pre.err.find("0.5*delta") != std::string::npos);

    const auto search = invoke({"samples", "--p1", "0.1", "--p2", "0.15", "--q", "0.95",
                                "--k-max", "10"});
    CHECK(search.code == cli::kExitNumerical);

    TempDir dir;
    const auto stuck = invoke({"dynamics", "--n", "4", "--c", "0.15", "--scheme", "independent",
                               "--max-rounds", "1", "--out", dir.file("t.csv"), "--profile-out",
                               dir.file("p.json")});
    CHECK(stuck.code == cli::kExitNumerical);
    CHECK(stuck.out.find("converged=false") != std::string::npos);
}
