#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <string>

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(STOKESKIT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json results_of(const RunResult& r) {
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j.contains("command"));
    CHECK(j.contains("inputs"));
    CHECK(j.contains("version"));
    return j.at("results");
}

} // namespace

TEST_CASE("lines subcommand emits the exact directions") {
    auto r = run_cli("lines --delta \"1/x\"");
    json res = results_of(r);
    REQUIRE(res.at("directions").size() == 2);
    CHECK(res["directions"][0].get<double>() == doctest::Approx(1.5707963268).epsilon(1e-9));
    CHECK(res["directions"][1].get<double>() == doctest::Approx(4.7123889804).epsilon(1e-9));
    CHECK(res["exact"][0] == "pi/2");
    CHECK(res["exact"][1] == "3pi/2");
}

TEST_CASE("formal subcommand reports factor, rank, slope") {
    auto r = run_cli("formal --op \"x^3*D+1\"");
    json res = results_of(r);
    CHECK(res["newton"]["slopes"][0]["slope"] == "2");
    CHECK(res["ramification"] == 1);
    auto item = res["formal_type"]["items"][0];
    CHECK(item["factor"]["text"] == "1/2*x^-2");
    CHECK(item["rank"] == 1);
}

TEST_CASE("phi subcommand emits the three-case table") {
    auto r = run_cli("phi --factor \"1/x\"");
    json res = results_of(r);
    REQUIRE(res.at("entries").size() == 3);
    CHECK(res["entries"][0]["degree"] == 0);
    CHECK(res["entries"][0]["stratum"] == "Re(t+phi)<?");
    CHECK(res["entries"][0]["factor"]["text"] == "x^-1");
    CHECK(res["entries"][1]["degree"] == 1);
    CHECK(res["entries"][1]["stratum"] == "x=0, t!=inf");
    CHECK(res["entries"][2]["degree"] == 1);
    CHECK(res["entries"][2]["stratum"] == "x!=0, t=inf");
    CHECK(res["otherwise"] == 0);
}

TEST_CASE("exit codes distinguish parse, domain, and validation failures") {
    CHECK(run_cli("lines --delta \"x^^2\"").code == 2);
    CHECK(run_cli("lines").code == 2);             // missing required flag
    CHECK(run_cli("bogus-subcommand").code == 2);  // unknown subcommand
    CHECK(run_cli("lines --delta \"3 + x\"").code == 3);
    CHECK(run_cli("formal --op \"x*D^3 + 1\"").code == 3);

    // invalid structure: wrong-sided unipotent matrix
    std::string st = R"({"formal":{"ramification":1,"items":[)"
                     R"({"factor":"1/x","rank":1,"exponents":["0"]},)"
                     R"({"factor":"0","rank":1,"exponents":["0"]}]},)"
                     R"("matrices":[[[1,0],[0,0],[1,0],[1,0]],[[1,0],[1,0],[0,0],[1,0]]],"base":1})";
    std::ofstream("/tmp/bad_structure.json") << st;
    CHECK(run_cli("glue --structure @/tmp/bad_structure.json").code == 4);
}

TEST_CASE("glue subcommand validates and multiplies out the monodromy") {
    std::string st = R"({"formal":{"ramification":1,"items":[)"
                     R"({"factor":"1/x","rank":1,"exponents":["0"]},)"
                     R"({"factor":"0","rank":1,"exponents":["0"]}]},)"
                     R"("matrices":[[[1,0],[1,0],[0,0],[1,0]],[[1,0],[0,0],[1,0],[1,0]]],"base":1})";
    std::ofstream("/tmp/good_structure.json") << st;
    auto r = run_cli("glue --structure @/tmp/good_structure.json");
    json res = results_of(r);
    CHECK(res["valid"] == true);
    // Mf A_2 A_1 with A_1 upper(1), A_2 lower(1): [[1,1],[1,2]]
    auto m = res["monodromy"]; // row-major [re, im] entries
    CHECK(m[0][0].get<double>() == doctest::Approx(1.0));
    CHECK(m[1][0].get<double>() == doctest::Approx(1.0));
    CHECK(m[2][0].get<double>() == doctest::Approx(1.0));
    CHECK(m[3][0].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("extract subcommand recovers gluing data from trivializations") {
    std::string cover = R"({"formal":{"ramification":1,"items":[)"
                        R"({"factor":"-1*x^-1","rank":1,"exponents":["0"]},)"
                        R"({"factor":"0","rank":1,"exponents":["0"]}]},)"
                        R"("trivializations":[)"
                        R"([[1,0],[0,0],[0,0],[1,0]],)"
                        R"([[1,0],[0,0],[-0.5,0],[1,0]],)"
                        R"([[1,0],[0,0],[-0.5,0],[1,0]]]})";
    std::ofstream("/tmp/cover.json") << cover;
    auto r = run_cli("extract --cover @/tmp/cover.json");
    json res = results_of(r);
    REQUIRE(res["matrices"].size() == 2);
    CHECK(res["matrices"][0][2][0].get<double>() == doctest::Approx(0.5));
    CHECK(res["base"] == 1);
}

TEST_CASE("stokes and monodromy subcommands run the numeric pipeline") {
    std::ofstream("/tmp/diag_sys.json") << R"({"system":[["-1*x^-3","0"],["0","0"]]})";
    auto r = run_cli("stokes --system @/tmp/diag_sys.json");
    json res = results_of(r);
    REQUIRE(res["matrices"].size() == 4);
    for (const auto& m : res["matrices"]) {
        CHECK(std::abs(m[0][0].get<double>() - 1.0) < 1e-8);
        CHECK(std::abs(m[1][0].get<double>()) < 1e-8);
        CHECK(std::abs(m[2][0].get<double>()) < 1e-8);
        CHECK(std::abs(m[3][0].get<double>() - 1.0) < 1e-8);
    }
    auto rm = run_cli("monodromy --op \"x*D - 1/2\" --rho 0.7");
    json mres = results_of(rm);
    CHECK(std::abs(mres["matrix"][0][0].get<double>() + 1.0) < 1e-9);
}

TEST_CASE("sectors and homshape subcommands") {
    auto r = run_cli("sectors --factors \"1/x,0\"");
    json res = results_of(r);
    CHECK(res["lines"].size() == 2);
    CHECK(res["sectors"].size() == 2);
    CHECK(res["pairs"].size() == 1);

    auto h = run_cli("homshape --factors \"1/x,0\" --sector \"-pi/4,pi/4\"");
    json hres = results_of(h);
    CHECK(hres["tag"] == "lower-like");
    CHECK(hres["n"] == 2);
    json expected = json::array({json::array({1, 1}), json::array({2, 1}), json::array({2, 2})});
    CHECK(hres["allowed"] == expected);
}

TEST_CASE("svg output: one polyline per curve, one ray per line, matching tangents") {
    auto r = run_cli("curves --delta \"1/x - 1\" --rho-min 1e-4 --rho-max 0.5 --steps 48 "
                     "--svg /tmp/curves.svg");
    REQUIRE(r.code == 0);
    std::ifstream f("/tmp/curves.svg");
    std::string svg((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    REQUIRE(!svg.empty());

    std::regex line_re("class=\"stokes-line\"[^/]*x2=\"([-0-9.]+)\" y2=\"([-0-9.]+)\"");
    std::regex curve_re("class=\"stokes-curve\"[^>]*points=\"([^\"]*)\"");
    std::vector<double> line_angles;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), line_re);
         it != std::sregex_iterator(); ++it)
        line_angles.push_back(std::atan2(-std::stod((*it)[2]), std::stod((*it)[1])));
    std::vector<double> tangents;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), curve_re);
         it != std::sregex_iterator(); ++it) {
        std::string pts = (*it)[1];
        auto last_space = pts.find_last_of(' ');
        std::string last = pts.substr(last_space + 1);
        auto comma = last.find(',');
        double x = std::stod(last.substr(0, comma));
        double y = std::stod(last.substr(comma + 1));
        tangents.push_back(std::atan2(-y, x));
    }
    REQUIRE(line_angles.size() == 2);
    REQUIRE(tangents.size() == 2);
    for (double t : tangents) {
        double best = 1e9;
        for (double l : line_angles) {
            double d = std::abs(std::remainder(t - l, 2 * kPi));
            best = std::min(best, d);
        }
        CHECK(best < 1e-3);
    }
}

TEST_CASE("reports are bit-for-bit reproducible") {
    auto a = run_cli("lines --delta \"(2+1*i)*x^-3\" --seed 42");
    auto b = run_cli("lines --delta \"(2+1*i)*x^-3\" --seed 42");
    CHECK(a.out == b.out);
    json j = json::parse(a.out);
    CHECK(j["inputs"]["seed"] == 42);

    auto c = run_cli("stokes --op \"x^5*D^2 - 1\" --seed 7");
    auto d = run_cli("stokes --op \"x^5*D^2 - 1\" --seed 7");
    CHECK(c.out == d.out);
}
