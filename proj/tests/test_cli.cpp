#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfc/cli.hpp"

using doctest::Approx;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = gfc::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("cli_") + name + ".kspec";
    std::ofstream f(path);
    f << content;
    return path;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::vector<double> csv_row(const std::string& line) {
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            vals.push_back(std::stod(cell));
        } catch (...) {
        }
    }
    return vals;
}

} // namespace

TEST_CASE("kernel check: power law passes with the expected tail integral") {
    auto path = write_temp("pl", "kind = power_law\nalpha = 0.5\n");
    auto res = run_cli({"kernel", "check", "--kernel", path});
    CHECK(res.code == 0);
    json j = json::parse(res.out);
    CHECK(j["admissible"] == true);
    CHECK(j["k_limits_ok"] == true);
    CHECK(j["phi_limits_ok"] == true);
    CHECK(j["tail_integrable"] == true);
    CHECK(double(j["tail_integral"]) == Approx(2.0).epsilon(1e-8));
    std::remove(path.c_str());
}

TEST_CASE("kernel check: distributed order passes") {
    auto res = run_cli({"kernel", "check", "--kernel",
                        "kind=distributed_order; mu_nodes=1"});
    CHECK(res.code == 0);
    json j = json::parse(res.out);
    CHECK(j["admissible"] == true);
}

TEST_CASE("kernel check: bounded atom measure fails with exit 2") {
    auto res =
        run_cli({"kernel", "check", "--kernel", "kind=measure; measure_atoms=1:1"});
    CHECK(res.code == 2);
    json j = json::parse(res.out);
    CHECK(j["phi_limits_ok"] == false);
    CHECK(j["admissible"] == false);
}

TEST_CASE("kernel check: malformed spec exits 1 naming the field") {
    auto res =
        run_cli({"kernel", "check", "--kernel", "kind=power_law; alpha=1.5"});
    CHECK(res.code == 1);
    CHECK(res.err.find("alpha") != std::string::npos);
}

TEST_CASE("solve: contour row matches the closed form") {
    auto res = run_cli({"solve", "--kernel", "kind=power_law; alpha=0.5",
                        "--lambda", "1", "--t-min", "0.5", "--t-max", "1",
                        "--t-points", "2"});
    CHECK(res.code == 0);
    auto lines = split_lines(res.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t,u,normalized,method");
    auto last = csv_row(lines[2]);
    REQUIRE(last.size() >= 3);
    CHECK(last[0] == Approx(1.0));
    CHECK(last[1] == Approx(5.0089800807622833).epsilon(1e-8));
    CHECK(last[2] == Approx(5.0089800807622833 * std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("solve: tiny t-min row honors the initial condition") {
    auto res = run_cli({"solve", "--kernel", "kind=power_law; alpha=0.5",
                        "--t-min", "1e-14", "--t-max", "1", "--t-points", "3"});
    CHECK(res.code == 0);
    auto lines = split_lines(res.out);
    auto first = csv_row(lines[1]);
    CHECK(first[1] == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("solve: method=all keeps the routes within 1e-2") {
    auto res = run_cli({"solve", "--kernel", "kind=power_law; alpha=0.5",
                        "--t-min", "0.1", "--t-max", "2", "--t-points", "5",
                        "--method", "all", "--steps", "1024"});
    CHECK(res.code == 0);
    auto lines = split_lines(res.out);
    CHECK(lines[0] == "t,u_contour,u_direct,u_subordination,max_rel_discrepancy");
    for (size_t i = 1; i < lines.size(); ++i) {
        auto row = csv_row(lines[i]);
        REQUIRE(row.size() == 5);
        CHECK(row[4] < 1e-2);
    }
}

TEST_CASE("solve: refusal propagates as exit 2") {
    auto res = run_cli({"solve", "--kernel", "kind=measure; measure_atoms=1:1",
                        "--lambda", "0.4"});
    CHECK(res.code == 2);
    CHECK(res.err.find("error") != std::string::npos);
}

TEST_CASE("solve: json embeds the resolved config") {
    auto res = run_cli({"solve", "--kernel", "kind=power_law; alpha=0.5",
                        "--t-min", "0.5", "--t-max", "1", "--t-points", "2",
                        "--format", "json"});
    CHECK(res.code == 0);
    json j = json::parse(res.out);
    CHECK(j["config"]["lambda"] == 1.0);
    CHECK(j["config"]["t_points"] == 2);
    CHECK(j["rows"].size() == 2);
    CHECK(double(j["p0"]) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("asymptote: spot values") {
    auto res = run_cli({"asymptote", "--kernel", "kind=power_law; alpha=0.5",
                        "--lambda", "2"});
    CHECK(res.code == 0);
    json j = json::parse(res.out);
    CHECK(double(j["p0"]) == Approx(4.0).epsilon(1e-12));
    CHECK(double(j["amplitude"]) == Approx(2.0).epsilon(1e-12));

    auto mix = run_cli({"asymptote", "--kernel",
                        "kind=mixture; weights=1,1; "
                        "exponents=0.5,0.33333333333333333",
                        "--lambda", "2", "--format", "csv"});
    CHECK(mix.code == 0);
    auto lines = split_lines(mix.out);
    CHECK(lines[0] == "p0,phi_prime_p0,amplitude");
    auto row = csv_row(lines[1]);
    CHECK(row[0] == Approx(1.0).epsilon(1e-10));
    CHECK(row[2] == Approx(2.4).epsilon(1e-10));

    auto dist = run_cli({"asymptote", "--kernel",
                         "kind=distributed_order; mu_nodes=1", "--lambda",
                         "1.7182818284590452"});
    json jd = json::parse(dist.out);
    CHECK(double(jd["p0"]) == Approx(gfc::euler_e).epsilon(1e-9));

    auto fail = run_cli({"asymptote", "--kernel",
                         "kind=measure; measure_atoms=1:1", "--lambda", "2"});
    CHECK(fail.code == 2);
}

TEST_CASE("subordinate: slice with diagnostics row") {
    auto res = run_cli({"subordinate", "--kernel", "kind=power_law; alpha=0.5",
                        "--t-min", "1", "--t-points", "80"});
    CHECK(res.code == 0);
    auto lines = split_lines(res.out);
    CHECK(lines[0] == "s,G");
    std::string diag = lines.back();
    CHECK(diag.find("# mass=") == 0);
    double mass = std::stod(diag.substr(7));
    CHECK(mass == Approx(1.0).epsilon(1e-6));
    size_t min_pos = diag.find("min=");
    REQUIRE(min_pos != std::string::npos);
    CHECK(std::stod(diag.substr(min_pos + 4)) >= -1e-8);
}

TEST_CASE("mlf subcommand prints the evaluation") {
    auto res = run_cli({"mlf", "0.5", "1"});
    CHECK(res.code == 0);
    CHECK(std::stod(res.out) == Approx(5.0089800807622833).epsilon(1e-12));
    auto res2 = run_cli({"mlf", "1.0", "1"});
    CHECK(std::stod(res2.out) == Approx(gfc::euler_e).epsilon(1e-14));
    auto bad = run_cli({"mlf", "1.5", "1"});
    CHECK(bad.code == 2);
}

TEST_CASE("compare emits the three-route table") {
    auto res = run_cli({"compare", "--kernel", "kind=power_law; alpha=0.5",
                        "--t-min", "0.5", "--t-max", "1", "--t-points", "2",
                        "--steps", "512"});
    CHECK(res.code == 0);
    auto lines = split_lines(res.out);
    CHECK(lines[0] == "t,u_contour,u_direct,u_subordination,max_rel_discrepancy");
    REQUIRE(lines.size() == 3);
}

TEST_CASE("identical configs produce byte-identical output") {
    std::vector<std::string> args{"solve",    "--kernel",
                                  "kind=power_law; alpha=0.5",
                                  "--t-min",  "0.2",
                                  "--t-max",  "3",
                                  "--t-points", "7"};
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("parse errors and unknown flags exit 1") {
    auto res = run_cli({"solve"});
    CHECK(res.code == 1);
    auto unk = run_cli({"solve", "--kernel", "kind=power_law; alpha=0.5",
                        "--frobnicate"});
    CHECK(unk.code == 1);
    auto badgrid =
        run_cli({"solve", "--kernel", "kind=power_law; alpha=0.5", "--t-min",
                 "5", "--t-max", "1"});
    CHECK(badgrid.code == 1);
    auto help = run_cli({"--help"});
    CHECK(help.code == 0);
}

TEST_CASE("GFC_QUIET suppresses progress chatter, not results") {
    std::vector<std::string> args{"asymptote", "--kernel",
                                  "kind=power_law; alpha=0.5", "--lambda", "2"};
    unsetenv("GFC_QUIET");
    auto loud = run_cli(args);
    CHECK(loud.code == 0);
    CHECK_FALSE(loud.err.empty());
    setenv("GFC_QUIET", "1", 1);
    auto quiet = run_cli(args);
    unsetenv("GFC_QUIET");
    CHECK(quiet.code == 0);
    CHECK(quiet.err.empty());
    CHECK(quiet.out == loud.out);
}

TEST_CASE("output lands in the requested file") {
    auto res = run_cli({"asymptote", "--kernel", "kind=power_law; alpha=0.5",
                        "--lambda", "2", "--out", "cli_out.json"});
    CHECK(res.code == 0);
    CHECK(res.out.empty());
    std::ifstream f("cli_out.json");
    REQUIRE(f.good());
    json j = json::parse(f);
    CHECK(double(j["p0"]) == Approx(4.0).epsilon(1e-12));
    std::remove("cli_out.json");
}
