#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blowlab/bounds.hpp"
#include "blowlab/config.hpp"
#include "blowlab/selfsim.hpp"

namespace blowlab {

// One sweep cell.  Missing analysis values stay null with the reason in
// `error` (the sweep continues past per-cell failures).
struct SweepRow {
    double M = 0.0;
    std::optional<double> T_est;
    std::optional<double> T_scaled; // T_est * M^{p-1}
    std::optional<double> T_upper;
    std::optional<Point> blowup_point;
    std::optional<double> concentration_residual;
    std::optional<double> rate_exponent;
    std::optional<double> w_center_final;
    std::optional<double> E_final;
    std::optional<double> E_target;
    std::string stop_reason;
    std::string error;

    // Carried for reports and plots; not part of the CSV schema.
    std::optional<double> rate_constant;
    std::optional<double> fit_residual;
    std::optional<double> energy_slack;
    std::optional<bool> energy_pass;
    std::optional<EnergyTrace> energy_trace;
};

// Builds, validates, integrates, and analyzes one cell.  Deterministic for
// fixed inputs.  Module errors land in the row's error field.
SweepRow run_single(const ExperimentConfig& config, double M);

using RowCallback = std::function<void(const SweepRow&)>;

// Runs all sweep cells; rows are produced (and the callback invoked) in M
// order regardless of execution order.  jobs > 1 parallelizes cells.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int jobs = 1,
                                const RowCallback& on_row = nullptr);

struct FitReport {
    std::optional<double> C1_fit; // rows below A/(p-1), exponent (p-1)/4
    std::optional<double> C2_fit; // rows above A/(p-1), exponent (p-1)/3
    std::optional<double> slope;  // log|T_scaled - A/(p-1)| vs log M
    std::optional<double> slope_stderr;
    std::string note;
};

// Errors: "insufficient-rows".
FitReport fit_convergence(const std::vector<SweepRow>& rows, double A, double p);

struct ConcentrationFit {
    std::optional<double> C_fit; // max over rows of r M^gamma
    std::optional<double> slope; // log r vs log M
    int rows_used = 0;
    int rows_saturated = 0; // r below 1e-12, excluded
    bool saturated = false; // all rows below resolution: success mode
};

// Errors: "insufficient-rows".
ConcentrationFit fit_concentration(const std::vector<SweepRow>& rows, double gamma);

// Fixed CSV schema (one row per line, header first):
//   M,T_est,T_est_scaled,T_upper,blowup_point_x[,blowup_point_y],
//   concentration_residual,rate_exponent,w_center_final,E_final,E_target,
//   stop_reason,error
std::string csv_header(int dimension);
std::string csv_row(const SweepRow& row, int dimension);

// Writes results.csv, results.jsonl, plotdata/*.dat, and report.txt into the
// configured output directory.  Errors: "io-error".
void emit_outputs(const std::vector<SweepRow>& rows, const ExperimentConfig& config);

// Renders report.txt content (also used by the `report` CLI verb).
std::string render_report(const std::vector<SweepRow>& rows, const ExperimentConfig& config);

} // namespace blowlab
