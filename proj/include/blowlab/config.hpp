#pragma once

#include <map>
#include <string>
#include <vector>

#include "blowlab/analysis.hpp"
#include "blowlab/integrate.hpp"
#include "blowlab/problem.hpp"

namespace blowlab {

// Flat structured-text config: [section] headers, key = value lines, '#'
// comments.  Keys may repeat (gaussian bumps).  Sections and keys outside the
// schema are rejected ("config-error").
struct ConfigFile {
    // section -> ordered (key, value) pairs
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

    bool has(const std::string& section) const;
    const std::string* find(const std::string& section, const std::string& key) const;
    std::vector<std::string> all(const std::string& section, const std::string& key) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config_file(const std::string& path);

struct OutputConfig {
    std::string dir = "results";
    std::vector<std::string> formats = {"csv", "jsonl", "plotdata", "report"};
};

struct AnalysisConfig {
    FitWindow fit_window;
    double set_fraction = 0.5;
    double c_slack = 0.0; // 0 -> default_energy_slack()
};

struct ExperimentConfig {
    ProblemSpec problem; // amplitude from [amplitude] m when present
    double h = 0.0;
    SolverConfig solver;
    std::vector<double> m_values; // strictly increasing
    AnalysisConfig analysis;
    OutputConfig output;
};

// Schema:
//   [domain]    dimension, shape, half_length, half_length_y
//   [potential] kind, c0, bump (repeatable: "a b x0 [y0]"), floor
//   [profile]   kind, c0, bump
//   [exponent]  p
//   [amplitude] m
//   [solver]    h, sigma, eta, u_stop, max_steps, snapshot_levels,
//               reaction_only, decay_window
//   [sweep]     m_values
//   [analysis]  fit_window_lo, fit_window_hi, set_fraction, c_slack
//   [output]    dir, formats
// Errors: "config-error".
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_config_from_text(const std::string& text);

} // namespace blowlab
