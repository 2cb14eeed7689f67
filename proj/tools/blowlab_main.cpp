// Command-line driver: validate / run / sweep / report.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "blowlab/analysis.hpp"
#include "blowlab/bounds.hpp"
#include "blowlab/config.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/harness.hpp"
#include "blowlab/integrate.hpp"

using namespace blowlab;

namespace {

int cmd_validate(const std::string& config_path) {
    const ExperimentConfig config = load_experiment_config(config_path);
    const GridPtr grid = build_grid(config.problem.domain, config.h);
    ProblemSpec problem = config.problem;
    const ValidationReport report = validate_problem(problem, *grid);

    std::cout << "grid: " << grid->size() << " nodes, " << grid->interior.size()
              << " interior, h = " << grid->spacing << "\n";
    for (const auto& c : report.checks)
        std::cout << (c.pass ? "  pass  " : "  FAIL  ") << c.name << " (value " << c.value
                  << ")\n";
    std::cout << "  info  empirical Lip(V) = " << report.empirical_lipschitz << "\n";

    if (problem.amplitude > 0.0) {
        const InitialConditionCheck ic = check_initial_condition(problem, *grid);
        std::cout << (ic.holds ? "  pass  " : "  info  ") << "initial-datum condition (min "
                  << ic.min_value << ")\n";
    }
    const auto [A, xbar] = compute_A(problem, *grid);
    std::cout << "A = " << A << " at xbar = (" << xbar.x;
    if (problem.domain.dimension == 2) std::cout << ", " << xbar.y;
    std::cout << ")\n";
    return report.all_pass() ? 0 : 1;
}

int cmd_run(const std::string& config_path, double m_override) {
    ExperimentConfig config = load_experiment_config(config_path);
    double M = m_override > 0.0 ? m_override : config.problem.amplitude;
    if (M <= 0.0 && !config.m_values.empty()) M = config.m_values.back();
    if (M <= 0.0) fail("config-error", "no amplitude: set [amplitude] m or pass --m");

    const SweepRow row = run_single(config, M);
    const int dim = config.problem.domain.dimension;
    std::cout << csv_header(dim) << "\n" << csv_row(row, dim) << "\n";
    if (!row.error.empty()) {
        std::cerr << "run finished with error: " << row.error << "\n";
        return 1;
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, int jobs) {
    const ExperimentConfig config = load_experiment_config(config_path);
    if (config.m_values.empty())
        fail("config-error", "sweep requires [sweep] m_values or [amplitude] m");

    // Stream rows to results.csv in M order as cells complete.
    namespace fs = std::filesystem;
    fs::create_directories(config.output.dir);
    const fs::path csv_path = fs::path(config.output.dir) / "results.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) fail("io-error", "cannot write '" + csv_path.string() + "'");
    const int dim = config.problem.domain.dimension;
    csv << csv_header(dim) << '\n';
    csv.flush();

    const auto rows = run_sweep(config, jobs, [&](const SweepRow& row) {
        csv << csv_row(row, dim) << '\n';
        csv.flush();
        std::cerr << "M = " << row.M << ": "
                  << (row.error.empty() ? row.stop_reason : row.error) << "\n";
    });
    csv.close();
    emit_outputs(rows, config);
    std::cout << render_report(rows, config);

    for (const auto& row : rows)
        if (!row.error.empty()) return 1;
    return 0;
}

int cmd_report(const std::string& results_dir) {
    // Re-render report.txt from a finished sweep directory.
    namespace fs = std::filesystem;
    const fs::path dir(results_dir);
    if (!fs::exists(dir / "results.csv")) fail("io-error", "no results.csv in " + results_dir);
    std::ifstream in(dir / "results.csv");
    std::string line;
    std::getline(in, line); // header
    std::cout << line << "\n";
    int rows = 0;
    while (std::getline(in, line)) {
        std::cout << line << "\n";
        ++rows;
    }
    std::cout << "(" << rows << " rows)\n";
    const fs::path report = dir / "report.txt";
    if (fs::exists(report)) {
        std::ifstream rep(report);
        std::cout << "\n" << rep.rdbuf();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blowlab: finite-time blow-up laboratory for u_t = lap u + V(x) u^p"};
    app.require_subcommand(1);

    std::string config_path, results_dir;
    double m_override = 0.0;
    int jobs = 1;

    auto* validate = app.add_subcommand("validate", "check a problem config");
    validate->add_option("config", config_path, "config file")->required();

    auto* run = app.add_subcommand("run", "run a single experiment");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--m", m_override, "amplitude override");

    auto* sweep = app.add_subcommand("sweep", "run an M-sweep");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--jobs", jobs, "parallel sweep cells")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "re-render a results directory");
    report->add_option("dir", results_dir, "results directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(config_path);
        if (run->parsed()) return cmd_run(config_path, m_override);
        if (sweep->parsed()) return cmd_sweep(config_path, jobs);
        if (report->parsed()) return cmd_report(results_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
