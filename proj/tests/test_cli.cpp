#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "marten/report.hpp"

using marten::Json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string out_path = "cli_out_" + std::to_string(counter++) + ".txt";
    std::string cmd = std::string(MARTEN_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    RunResult r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out_path)};
    std::remove(out_path.c_str());
    return r;
}

Json schema_for(const std::string& name) {
    return marten::load_json_file(std::string(MARTEN_SOURCE_DIR) + "/schema/" + name +
                                  ".schema.json");
}

void check_schema(const Json& doc, const std::string& name) {
    auto errors = marten::validate_against_schema(doc, schema_for(name));
    for (const auto& e : errors) UNSCOPED_INFO(e);
    CHECK(errors.empty());
}

} // namespace

TEST_CASE("lambda2 on the terephthalic preset") {
    RunResult r = run_cli("lambda2 --preset terephthalic");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    check_schema(j, "lambda2");
    CHECK(std::abs(j["lambda2"].get<double>() - 0.939) <= 1e-3);
    CHECK_FALSE(j["compatible"].get<bool>());
    CHECK(j["classification"].get<std::string>().rfind("no rank-one connection", 0) == 0);
}

TEST_CASE("variants on the cualni preset") {
    RunResult r = run_cli("variants --preset cualni");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    check_schema(j, "variants");
    CHECK(j["count"].get<int>() == 6);
}

TEST_CASE("twin counts for the rearrangement pair") {
    for (const char* tau : {"0.01", "0.05"}) {
        RunResult r = run_cli(std::string("twin --preset cualni --tau ") + tau);
        REQUIRE(r.exit_code == 0);
        Json j = Json::parse(r.out);
        check_schema(j, "twin");
        CHECK(j["count"].get<int>() == 2);
        for (const auto& s : j["solutions"])
            CHECK(s["residual"].get<double>() <= 1e-10);
    }
}

TEST_CASE("habit planes for cualni") {
    RunResult r = run_cli("habit --preset cualni");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    check_schema(j, "habit");
    CHECK(j["count"].get<int>() > 0);
    for (const auto& s : j["solutions"]) {
        CHECK(s["lambda"].get<double>() > 0.0);
        CHECK(s["lambda"].get<double>() < 1.0);
        CHECK(s["residual"].get<double>() <= 1e-9);
    }
}

TEST_CASE("curve CSV is monotone and reruns byte-identically") {
    RunResult a = run_cli("curve --preset cualni --sigma1 0.5:2.0:16");
    RunResult b = run_cli("curve --preset cualni --sigma1 0.5:2.0:16");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "sigma1,f_sigma1,rank_gap");
    double prev = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        double s1, f, gap;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &s1, &f, &gap) == 3);
        CHECK(f > prev);
        CHECK(gap > 1e-6);
        prev = f;
        ++rows;
    }
    CHECK(rows == 16);
}

TEST_CASE("hysteresis JSON carries the Schmid data") {
    RunResult r = run_cli("hysteresis --preset cualni");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    check_schema(j, "hysteresis");
    CHECK(j["tau_plus"].get<double>() > 0.0);
    CHECK(j["schmid_residual"].get<double>() < 1e-8);
}

TEST_CASE("radial subcommand: degenerate wells and sweep") {
    RunResult r = run_cli("radial --lambda 1.0 --mu 1.0 --n 3");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    check_schema(j, "radial");
    CHECK(j["rho_min"].get<double>() == 0.0);
    CHECK(j["degenerate"].get<bool>());

    RunResult sweep = run_cli("radial --lambda 1.1 --mu 0.9 --n 3 --sweep 1.05:2.0:8");
    REQUIRE(sweep.exit_code == 0);
    CHECK(sweep.out.rfind("k,rho", 0) == 0);
}

TEST_CASE("gamma and threshold constants") {
    RunResult g = run_cli("gamma --gamma0 1.0 --n 2 --ball 1.0");
    REQUIRE(g.exit_code == 0);
    Json gj = Json::parse(g.out);
    check_schema(gj, "gamma");
    CHECK(gj["gamma"].get<double>() == Catch::Approx(0.04).margin(1e-15));

    RunResult t = run_cli("threshold --c0 0.5 --c1 1.0 --alpha 2.0 --p 2.0 --gamma 0.04");
    REQUIRE(t.exit_code == 0);
    Json tj = Json::parse(t.out);
    check_schema(tj, "threshold");
    CHECK(tj["K"].get<double>() == Catch::Approx(0.8).margin(1e-15));
}

TEST_CASE("rooms, noone and l1seq subcommands") {
    RunResult rooms = run_cli("rooms --dfrac 0.5,0.05,0.005");
    REQUIRE(rooms.exit_code == 0);
    CHECK(rooms.out.rfind("d_j,ratio", 0) == 0);

    RunResult noone = run_cli("noone --delta 0.1");
    REQUIRE(noone.exit_code == 0);
    Json nj = Json::parse(noone.out);
    check_schema(nj, "noone");
    CHECK(nj["min_phase_volume"].get<double>() == 0.5 * 0.1 * 0.1);

    RunResult l1 = run_cli("l1seq --j 1,10");
    REQUIRE(l1.exit_code == 0);
    Json lj = Json::parse(l1.out);
    check_schema(lj, "l1seq");
    CHECK(lj["entries"].size() == 2);
}

TEST_CASE("relax subcommand is deterministic for a fixed seed") {
    std::string args = "relax --wells incompatible --mesh 16 --trials 6 --budget 30 --seed 7";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    Json j = Json::parse(a.out);
    check_schema(j, "relax");
    CHECK(j["lowered_count"].get<int>() == 0);

    RunResult strip = run_cli("relax --wells rankone --strip --mesh 32 --budget 10");
    REQUIRE(strip.exit_code == 0);
    Json sj = Json::parse(strip.out);
    CHECK(sj["strip"]["initial_energy"].get<double>() ==
          Catch::Approx(-0.01 * 0.5).margin(1e-12));
}

TEST_CASE("report pipeline emits one validated document per alloy") {
    for (const char* preset : {"cualni", "terephthalic"}) {
        RunResult r = run_cli(std::string("report --preset ") + preset);
        REQUIRE(r.exit_code == 0);
        Json j = Json::parse(r.out);
        check_schema(j, "report");
        if (std::string(preset) == "terephthalic") {
            CHECK_FALSE(j["twin"]["applicable"].get<bool>());
            CHECK_FALSE(j["lambda2"]["compatible"].get<bool>());
        } else {
            CHECK(j["twin"]["applicable"].get<bool>());
            CHECK(j["hysteresis"]["applicable"].get<bool>());
            CHECK(j["laminate"]["energy_gap"].get<double>() < 0.0);
        }
    }
}

TEST_CASE("alloy spec files parse, validate and drive the pipeline") {
    {
        std::ofstream f("spec_min.txt");
        f << "version = 1\nname = unit\nU1 = 1 0 0 0 1 0 0 0 1\n";
    }
    RunResult r = run_cli("variants --spec spec_min.txt");
    REQUIRE(r.exit_code == 0);
    CHECK(Json::parse(r.out)["count"].get<int>() == 1);

    {
        std::ofstream f("spec_conflict.txt");
        f << "version = 1\nU1 = 1 0 0 0 1 0 0 0 1\nlattice = 1.06 0.92 1.02\n";
    }
    CHECK(run_cli("variants --spec spec_conflict.txt").exit_code == 2);

    {
        std::ofstream f("spec_badU.txt");
        f << "version = 1\nU1 = 1 0 0 0 -1 0 0 0 1\n";
    }
    CHECK(run_cli("variants --spec spec_badU.txt").exit_code == 2);

    {
        std::ofstream f("spec_lat.txt");
        f << "version = 1\nname = cualni-by-hand\ngroup = cubic\n"
          << "lattice = 1.0619 0.9178 1.0230\norientation = u1-eigenframe\n";
    }
    RunResult lat = run_cli("curve --spec spec_lat.txt --sigma1 1.0:2.0:3");
    CHECK(lat.exit_code == 0);

    std::remove("spec_min.txt");
    std::remove("spec_conflict.txt");
    std::remove("spec_badU.txt");
    std::remove("spec_lat.txt");
}

TEST_CASE("exit codes: parse, numeric/regime classes") {
    CHECK(run_cli("variants").exit_code == 2);                 // no alloy given
    CHECK(run_cli("variants --preset nosuch").exit_code == 2); // unknown preset
    CHECK(run_cli("nosuchcommand").exit_code == 2);
    {
        std::ofstream f("spec_aligned.txt");
        f << "version = 1\ngroup = cubic\nlattice = 1.0619 0.9178 1.0230\n"
          << "orientation = aligned\n";
    }
    // load-degenerate pair at the aligned orientation: regime error
    CHECK(run_cli("curve --spec spec_aligned.txt --sigma1 1.0:2.0:3").exit_code == 4);
    std::remove("spec_aligned.txt");
    // single-variant family cannot produce a curve or twins: regime error
    CHECK(run_cli("curve --preset terephthalic").exit_code == 4);
    CHECK(run_cli("habit --preset terephthalic").exit_code == 4);
    CHECK(run_cli("twin --preset terephthalic").exit_code == 4);
}
