#include "blowlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "blowlab/errors.hpp"
#include "blowlab/selfsim.hpp"

namespace blowlab {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail("config-error", "[" + section + "] " + key + ": not a number: '" + v + "'");
    }
}

long parse_long(const std::string& section, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail("config-error", "[" + section + "] " + key + ": not an integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("config-error", "[" + section + "] " + key + ": not a bool: '" + v + "'");
}

std::vector<std::string> split_ws(const std::string& v) {
    std::istringstream in(v);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<double> parse_doubles(const std::string& section, const std::string& key,
                                  const std::string& v) {
    std::vector<double> out;
    for (const auto& tok : split_ws(v)) out.push_back(parse_double(section, key, tok));
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"domain", {"dimension", "shape", "half_length", "half_length_y"}},
        {"potential", {"kind", "c0", "bump", "floor"}},
        {"profile", {"kind", "c0", "bump"}},
        {"exponent", {"p"}},
        {"amplitude", {"m"}},
        {"solver",
         {"h", "sigma", "eta", "u_stop", "max_steps", "snapshot_levels", "reaction_only",
          "decay_window"}},
        {"sweep", {"m_values"}},
        {"analysis", {"fit_window_lo", "fit_window_hi", "set_fraction", "c_slack"}},
        {"output", {"dir", "formats"}},
    };
    return s;
}

FieldSpec parse_field(const ConfigFile& file, const std::string& section) {
    const std::string* kind = file.find(section, "kind");
    if (!kind) fail("config-error", "[" + section + "] requires a kind");

    double c0 = 0.0;
    if (const std::string* v = file.find(section, "c0")) c0 = parse_double(section, "c0", *v);

    std::vector<GaussianBump> bumps;
    for (const auto& v : file.all(section, "bump")) {
        const auto parts = parse_doubles(section, "bump", v);
        if (parts.size() != 3 && parts.size() != 4)
            fail("config-error", "[" + section + "] bump expects 'a b x0 [y0]'");
        GaussianBump b;
        b.amplitude = parts[0];
        b.width = parts[1];
        b.center.x = parts[2];
        b.center.y = parts.size() == 4 ? parts[3] : 0.0;
        bumps.push_back(b);
    }

    if (*kind == "constant") return FieldSpec::constant(c0);
    if (*kind == "gaussian_bumps") return FieldSpec::gaussian_bumps(c0, std::move(bumps));
    if (*kind == "cosine") return FieldSpec::cosine();
    if (*kind == "cosine_times_gaussian")
        return FieldSpec::cosine_times_gaussian(c0, std::move(bumps));
    fail("config-error", "[" + section + "] unknown kind '" + *kind + "'");
}

} // namespace

bool ConfigFile::has(const std::string& section) const { return sections.count(section) > 0; }

const std::string* ConfigFile::find(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    if (it == sections.end()) return nullptr;
    for (const auto& [k, v] : it->second)
        if (k == key) return &v;
    return nullptr;
}

std::vector<std::string> ConfigFile::all(const std::string& section,
                                         const std::string& key) const {
    std::vector<std::string> out;
    auto it = sections.find(section);
    if (it == sections.end()) return out;
    for (const auto& [k, v] : it->second)
        if (k == key) out.push_back(v);
    return out;
}

ConfigFile parse_config_text(const std::string& text) {
    ConfigFile file;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail("config-error", "line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section))
                fail("config-error", "unknown section [" + section + "]");
            file.sections[section]; // record even if empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            fail("config-error", "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!schema().at(section).count(key))
            fail("config-error", "unknown key '" + key + "' in [" + section + "]");
        file.sections[section].emplace_back(key, value);
    }
    return file;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("io-error", "cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

ExperimentConfig experiment_config_from_text(const std::string& text) {
    const ConfigFile file = parse_config_text(text);
    ExperimentConfig config;

    for (const char* required : {"domain", "potential", "profile", "exponent", "solver"})
        if (!file.has(required))
            fail("config-error", std::string("missing required section [") + required + "]");

    // [domain]
    {
        int dimension = 1;
        if (const std::string* v = file.find("domain", "dimension"))
            dimension = static_cast<int>(parse_long("domain", "dimension", *v));
        const std::string* shape = file.find("domain", "shape");
        double hl = 1.0;
        if (const std::string* v = file.find("domain", "half_length"))
            hl = parse_double("domain", "half_length", *v);
        double hly = hl;
        if (const std::string* v = file.find("domain", "half_length_y"))
            hly = parse_double("domain", "half_length_y", *v);
        const std::string shape_name = shape ? *shape : (dimension == 1 ? "interval" : "rectangle");
        if (shape_name == "interval") {
            if (dimension != 1) fail("config-error", "interval requires dimension = 1");
            config.problem.domain = DomainSpec::interval(hl);
        } else if (shape_name == "rectangle") {
            if (dimension != 2) fail("config-error", "rectangle requires dimension = 2");
            config.problem.domain = DomainSpec::rectangle(hl, hly);
        } else if (shape_name == "disc") {
            if (dimension != 2) fail("config-error", "disc requires dimension = 2");
            config.problem.domain = DomainSpec::disc(hl);
        } else {
            fail("config-error", "unknown shape '" + shape_name + "'");
        }
    }

    config.problem.potential = parse_field(file, "potential");
    config.problem.profile = parse_field(file, "profile");
    if (const std::string* v = file.find("potential", "floor"))
        config.problem.potential_floor = parse_double("potential", "floor", *v);

    if (const std::string* v = file.find("exponent", "p"))
        config.problem.exponent = parse_double("exponent", "p", *v);
    else
        fail("config-error", "[exponent] requires p");
    if (!(config.problem.exponent > 1.0)) fail("config-error", "p must exceed 1");

    if (const std::string* v = file.find("amplitude", "m"))
        config.problem.amplitude = parse_double("amplitude", "m", *v);

    // [solver]
    if (const std::string* v = file.find("solver", "h"))
        config.h = parse_double("solver", "h", *v);
    else
        fail("config-error", "[solver] requires h");
    if (const std::string* v = file.find("solver", "sigma"))
        config.solver.diffusion_safety = parse_double("solver", "sigma", *v);
    if (const std::string* v = file.find("solver", "eta"))
        config.solver.growth_cap = parse_double("solver", "eta", *v);
    if (const std::string* v = file.find("solver", "u_stop"))
        config.solver.stop_threshold = parse_double("solver", "u_stop", *v);
    if (const std::string* v = file.find("solver", "max_steps"))
        config.solver.max_steps = parse_long("solver", "max_steps", *v);
    if (const std::string* v = file.find("solver", "snapshot_levels"))
        config.solver.snapshot_levels = parse_doubles("solver", "snapshot_levels", *v);
    else
        config.solver.snapshot_levels = {1e2, 1e3, 1e4};
    if (const std::string* v = file.find("solver", "reaction_only"))
        config.solver.reaction_only = parse_bool("solver", "reaction_only", *v);
    if (const std::string* v = file.find("solver", "decay_window"))
        config.solver.decay_window = static_cast<int>(parse_long("solver", "decay_window", *v));

    // [sweep]
    if (const std::string* v = file.find("sweep", "m_values")) {
        config.m_values = parse_doubles("sweep", "m_values", *v);
        if (config.m_values.empty()) fail("config-error", "m_values must be nonempty");
        for (std::size_t i = 1; i < config.m_values.size(); ++i)
            if (!(config.m_values[i] > config.m_values[i - 1]))
                fail("config-error", "m_values must be strictly increasing");
    } else if (config.problem.amplitude > 0.0) {
        config.m_values = {config.problem.amplitude};
    }

    // [analysis]
    if (const std::string* v = file.find("analysis", "fit_window_lo"))
        config.analysis.fit_window.level_lo = parse_double("analysis", "fit_window_lo", *v);
    if (const std::string* v = file.find("analysis", "fit_window_hi"))
        config.analysis.fit_window.level_hi = parse_double("analysis", "fit_window_hi", *v);
    else
        config.analysis.fit_window.level_hi = config.solver.stop_threshold;
    if (const std::string* v = file.find("analysis", "set_fraction"))
        config.analysis.set_fraction = parse_double("analysis", "set_fraction", *v);
    if (const std::string* v = file.find("analysis", "c_slack"))
        config.analysis.c_slack = parse_double("analysis", "c_slack", *v);
    else
        config.analysis.c_slack = default_energy_slack();

    // [output]
    if (const std::string* v = file.find("output", "dir")) config.output.dir = *v;
    if (const std::string* v = file.find("output", "formats"))
        config.output.formats = split_ws(*v);

    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("io-error", "cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return experiment_config_from_text(buffer.str());
}

} // namespace blowlab
