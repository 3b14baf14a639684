// End-to-end checks of the installed command-line surface. The binary path
// arrives via the XIMSIS_CLI environment variable set by ctest.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ximsis/csv.hpp"
#include "ximsis/screening.hpp"
#include "ximsis/simulate.hpp"

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* env = std::getenv("XIMSIS_CLI");
    if (env) return env;
    return "./tools/ximsis"; // running from the build tree by hand
}

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout only
};

CommandResult run_command(const std::string& args) {
    const std::string tmp = (fs::temp_directory_path() / "ximsis_cli_out.txt").string();
    const std::string cmd = cli_path() + " " + args + " > " + tmp + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    result.output = ss.str();
    std::remove(tmp.c_str());
    return result;
}

std::string write_temp(const std::string& name, const std::string& contents) {
    const std::string path = (fs::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << contents;
    return path;
}

} // namespace

TEST_CASE("xi command prints the closed-form value") {
    const std::string u = write_temp("ximsis_u.txt", "1\n2\n3\n4\n5\n");
    const std::string v = write_temp("ximsis_v.txt", "10\n20\n30\n40\n50\n");
    const CommandResult r = run_command("xi --u " + u + " --v " + v + " --m 1");
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(r.output) == 8.0 / 11.0);
    std::remove(u.c_str());
    std::remove(v.c_str());
}

TEST_CASE("xi command fails loudly on malformed input") {
    const std::string u = write_temp("ximsis_u2.txt", "1\n2\n");
    const std::string v = write_temp("ximsis_v2.txt", "1\n2\n3\n");
    CHECK(run_command("xi --u " + u + " --v " + v + " --m 1").exit_code != 0);
    CHECK(run_command("xi --u /nonexistent --v " + v + " --m 1").exit_code != 0);
    std::remove(u.c_str());
    std::remove(v.c_str());
}

TEST_CASE("screen command recovers planted signals end to end") {
    // Example-1-style data at p=60: the five active features should occupy
    // most of the top d1 = 38 slots in nearly every seed.
    int good = 0;
    const int runs = 12;
    for (int run = 0; run < runs; ++run) {
        ximsis::SimScenario sc = ximsis::example1_scenario(200, 0.30, 9000 + run, 60);
        const ximsis::GeneratedSample sample =
            ximsis::generate_sample(sc, ximsis::calibrate_censoring(sc));
        std::ostringstream csv;
        csv << "time,status";
        for (int j = 0; j < 60; ++j) csv << ",g" << (j + 1);
        csv << '\n';
        for (int i = 0; i < 200; ++i) {
            csv << ximsis::format_double(sample.resp.y[i]) << ','
                << static_cast<int>(sample.resp.delta[i]);
            for (int j = 0; j < 60; ++j) csv << ',' << ximsis::format_double(sample.x(i, j));
            csv << '\n';
        }
        const std::string data = write_temp("ximsis_screen.csv", csv.str());
        const std::string out = (fs::temp_directory_path() / "ximsis_ranked.csv").string();
        const CommandResult r = run_command("screen --data " + data +
                                            " --time time --status status --top 38 --seed " +
                                            std::to_string(run) + " --out " + out);
        REQUIRE(r.exit_code == 0);
        const auto rows = ximsis::read_screening_csv(out);
        REQUIRE(rows.size() == 60);
        int found = 0;
        for (std::size_t i = 0; i < 38; ++i) {
            for (int a = 1; a <= 5; ++a)
                if (rows[i].feature == "g" + std::to_string(a)) ++found;
        }
        good += found >= 4 ? 1 : 0;
        std::remove(data.c_str());
        std::remove(out.c_str());
    }
    CHECK(good == runs);
}

TEST_CASE("screen refuses incomplete data") {
    const std::string data =
        write_temp("ximsis_missing.csv", "time,status,g1,g2\n1,1,NA,2\n2,1,1,3\n3,0,2,4\n");
    CHECK(run_command("screen --data " + data + " --time time --status status").exit_code != 0);
    std::remove(data.c_str());
}

TEST_CASE("impute command fills and preserves everything else") {
    const std::string data = write_temp(
        "ximsis_imp.csv",
        "time,status,g1,g2\n1,1,1.0,2.0\n2,0,1.0,NA\n3,1,4.0,5.0\n4,1,4.0,5.5\n");
    const std::string out = (fs::temp_directory_path() / "ximsis_imp_out.csv").string();
    const CommandResult r =
        run_command("impute --data " + data + " --k 2 --time time --status status --out " + out);
    REQUIRE(r.exit_code == 0);
    const ximsis::RawTable t = ximsis::load_survival_csv(out, "time", "status");
    CHECK(t.missing_cells == 0);
    CHECK(t.y == std::vector<double>{1, 2, 3, 4});
    CHECK(t.features(0, 0) == 1.0);
    CHECK(t.features(1, 1) == 2.0); // zero-distance copy from row 0
    std::remove(data.c_str());
    std::remove(out.c_str());
}

TEST_CASE("simulate --quick emits schema-valid tables") {
    const std::string cfg = write_temp("ximsis_quick.cfg",
                                       "model = cox\nn = 60\np = 50\ntarget_cr = 0.3\n"
                                       "reps = 6\nseed = 12\n");
    const std::string out_dir = (fs::temp_directory_path() / "ximsis_quickout").string();
    const CommandResult r =
        run_command("simulate --config " + cfg + " --quick --out " + out_dir);
    REQUIRE(r.exit_code == 0);
    const std::string stem = out_dir + "/ximsis_quick";
    const ximsis::ExperimentReport report = ximsis::read_report_csv(stem + "_report.csv");
    CHECK(report.rows.size() == 6); // 3 variants x {d1, d2}
    CHECK(report.active == std::vector<std::int32_t>{0, 1, 2, 3, 4});
    for (const auto& row : report.rows) {
        CHECK(row.p_a >= 0.0);
        CHECK(row.p_a <= 1.0);
        CHECK(row.p_j.size() == 5);
        CHECK(row.s_q05 <= row.s_q50);
        CHECK(row.s_q50 <= row.s_q95);
    }
    std::ifstream txt(stem + "_report.txt");
    CHECK(txt.good());
    std::remove(cfg.c_str());
    fs::remove_all(out_dir);
}
