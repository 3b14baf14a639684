// Command-line surface: screen / simulate / impute / xi.
// Exit code 0 on success; any failure prints a single `error: ...` line on
// stderr and exits nonzero. All randomness is controlled by --seed.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ximsis/ximsis.hpp"

namespace {

ximsis::MRule parse_m_rule(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "auto") return ximsis::MRule::automatic(arg.empty() ? 1.0 : std::stod(arg));
    if (kind == "fixed") {
        if (arg.empty()) throw std::runtime_error("fixed M rule needs a value, e.g. fixed:14");
        return ximsis::MRule::fixed(std::stoi(arg));
    }
    throw std::runtime_error("unknown M rule '" + text + "' (use auto:C or fixed:M)");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file '" + path + "'");
    return out;
}

int run_screen(const std::string& data, const std::string& time_col, const std::string& status_col,
               const std::string& m_rule, std::optional<int> top,
               std::optional<double> threshold, std::uint64_t seed, int workers,
               const std::string& out_path) {
    const ximsis::RawTable table = ximsis::load_survival_csv(data, time_col, status_col);
    if (table.missing_cells > 0)
        throw std::runtime_error("data has " + std::to_string(table.missing_cells) +
                                 " missing cells; run `ximsis impute` first");
    ximsis::ScreeningConfig cfg;
    cfg.m_rule = parse_m_rule(m_rule);
    cfg.tie_seed = seed;
    cfg.workers = workers;
    if (threshold) {
        cfg.selection = ximsis::ScreeningConfig::Selection::Threshold;
        cfg.threshold = *threshold;
    } else {
        cfg.selection = ximsis::ScreeningConfig::Selection::TopD;
        cfg.top_d = top ? *top
                        : ximsis::default_model_sizes(static_cast<int>(table.y.size())).d1;
    }
    const ximsis::ScreeningResult result = ximsis::screen(table.features, table.response(), cfg);
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';

    if (out_path.empty()) {
        ximsis::write_screening_csv(std::cout, result, table.feature_names);
    } else {
        auto out = open_output(out_path);
        ximsis::write_screening_csv(out, result, table.feature_names);
    }
    std::cerr << "screened " << table.features.cols() << " features (n=" << table.y.size()
              << ", M=" << result.m_used << "), selected " << result.selected.size() << '\n';
    return 0;
}

int run_simulate(const std::string& config_path, bool quick, const std::string& out_dir,
                 int workers) {
    ximsis::ScenarioConfig cfg = ximsis::load_scenario_config(config_path);
    if (quick) {
        cfg.reps = std::min(cfg.reps, 100);
        cfg.scenario.p = std::min(cfg.scenario.p, 500);
    }
    ximsis::ExperimentSpec spec;
    spec.scenario = cfg.scenario;
    spec.n_reps = cfg.reps;
    spec.base_seed = cfg.scenario.seed;
    spec.workers = workers;

    const ximsis::ExperimentResult result = ximsis::run_experiment(spec);

    std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
    const std::string stem =
        (std::filesystem::path(out_dir.empty() ? "." : out_dir) /
         std::filesystem::path(config_path).stem())
            .string();
    {
        auto csv = open_output(stem + "_report.csv");
        ximsis::write_report_csv(csv, result.report);
    }
    {
        auto txt = open_output(stem + "_report.txt");
        ximsis::write_report_text(txt, result.report);
    }
    ximsis::write_report_text(std::cout, result.report);
    std::cerr << "wrote " << stem << "_report.csv and " << stem << "_report.txt\n";
    return 0;
}

int run_impute(const std::string& data, int k, const std::string& out_path,
               const std::string& time_col, const std::string& status_col) {
    if (!time_col.empty() || !status_col.empty()) {
        if (time_col.empty() || status_col.empty())
            throw std::runtime_error("--time and --status must be given together");
        ximsis::RawTable table = ximsis::load_survival_csv(data, time_col, status_col);
        table.features = ximsis::knn_impute(table.features, k);
        auto out = open_output(out_path);
        ximsis::write_survival_csv(out, table);
    } else {
        ximsis::NumericTable table = ximsis::load_numeric_csv(data);
        table.values = ximsis::knn_impute(table.values, k);
        auto out = open_output(out_path);
        ximsis::write_numeric_csv(out, table);
    }
    return 0;
}

int run_xi(const std::string& u_path, const std::string& v_path, int m, std::uint64_t seed) {
    const std::vector<double> u = ximsis::load_vector(u_path);
    const std::vector<double> v = ximsis::load_vector(v_path);
    std::cout << ximsis::format_double(ximsis::revised_xi(u, v, m, seed)) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"XIM-SIS feature screening for right-censored survival data"};
    app.require_subcommand(1);

    std::string data, time_col, status_col, out_path, m_rule = "auto:1", config_path;
    std::optional<int> top;
    std::optional<double> threshold;
    std::uint64_t seed = 0;
    int workers = 0;
    int k_neighbors = 15;
    bool quick = false;
    std::string u_path, v_path;
    int m_fixed = 1;

    CLI::App* screen = app.add_subcommand("screen", "rank features by omega_hat");
    screen->add_option("--data", data, "delimited survival table")->required();
    screen->add_option("--time", time_col, "observed-time column name")->required();
    screen->add_option("--status", status_col, "event-indicator column name")->required();
    screen->add_option("--m-rule", m_rule, "auto:C or fixed:M (default auto:1)");
    screen->add_option("--top", top, "keep the top D features (default d1 = ceil(n/ln n))");
    screen->add_option("--threshold", threshold, "keep features with omega >= G");
    screen->add_option("--seed", seed, "tie-break seed (default 0)");
    screen->add_option("--workers", workers, "worker threads (default: XIMSIS_WORKERS or cores)");
    screen->add_option("--out", out_path, "output CSV (default: stdout)");

    CLI::App* simulate = app.add_subcommand("simulate", "run a benchmark scenario");
    simulate->add_option("--config", config_path, "scenario config file")->required();
    simulate->add_flag("--quick", quick, "cap at 100 replications and p=500");
    std::string out_dir;
    simulate->add_option("--out", out_dir, "output directory (default .)");
    simulate->add_option("--workers", workers, "worker threads");

    CLI::App* impute = app.add_subcommand("impute", "weighted K-nearest-neighbor imputation");
    impute->add_option("--data", data, "delimited table with missing cells")->required();
    impute->add_option("--k", k_neighbors, "neighbor count (default 15)");
    impute->add_option("--out", out_path, "output CSV")->required();
    impute->add_option("--time", time_col, "optional time column to pass through");
    impute->add_option("--status", status_col, "optional status column to pass through");

    CLI::App* xi = app.add_subcommand("xi", "revised Chatterjee correlation of two vectors");
    xi->add_option("--u", u_path, "conditioning variable, one value per line")->required();
    xi->add_option("--v", v_path, "response variable, one value per line")->required();
    xi->add_option("--m", m_fixed, "right neighbor count M")->required();
    xi->add_option("--seed", seed, "tie-break seed (default 0)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (screen->parsed()) {
            if (top && threshold) throw std::runtime_error("--top and --threshold are exclusive");
            return run_screen(data, time_col, status_col, m_rule, top, threshold, seed, workers,
                              out_path);
        }
        if (simulate->parsed()) return run_simulate(config_path, quick, out_dir, workers);
        if (impute->parsed()) return run_impute(data, k_neighbors, out_path, time_col, status_col);
        if (xi->parsed()) return run_xi(u_path, v_path, m_fixed, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
