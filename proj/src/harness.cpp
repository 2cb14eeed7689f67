#include "blowlab/harness.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "blowlab/analysis.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/integrate.hpp"
#include "blowlab/reaction.hpp"

namespace blowlab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

} // namespace

SweepRow run_single(const ExperimentConfig& config, double M) {
    SweepRow row;
    row.M = M;

    ProblemSpec problem = config.problem;
    problem.amplitude = M;
    const double p = problem.exponent;

    try {
        const GridPtr grid = build_grid(problem.domain, config.h);
        const ValidationReport validation = validate_problem(problem, *grid);
        if (!validation.all_pass()) {
            std::string failed;
            for (const auto& c : validation.checks)
                if (!c.pass) failed += (failed.empty() ? "" : ",") + c.name;
            row.error = "validation-failed: " + failed;
            return row;
        }

        const auto [A, xbar] = compute_A(problem, *grid);

        try {
            const BoundsReport bounds = lemma21_upper_bound(problem, *grid);
            row.T_upper = bounds.T_upper;
        } catch (const Error& e) {
            if (e.code() != "M-too-small") throw;
            // No admissible eigenvalue-matching root at this M; leave null.
        }

        const TrajectoryRecord traj = integrate(problem, grid, config.solver);
        row.stop_reason = to_string(traj.stop_reason);
        if (traj.stop_reason != StopReason::ThresholdReached) {
            row.error = "no-blowup: " + row.stop_reason;
            return row;
        }

        const TimeFit time_fit = estimate_blowup_time(traj, p, config.analysis.fit_window);
        row.T_est = time_fit.T_est;
        row.T_scaled = time_fit.T_est * std::pow(M, p - 1.0);
        row.fit_residual = time_fit.residual;

        const BlowupPoint point = estimate_blowup_point(traj);
        row.blowup_point = point.location;
        row.concentration_residual = concentration_residual(point.location, problem, A);

        const RateFit rate =
            fit_blowup_rate(traj, time_fit.T_est, p, config.analysis.fit_window);
        row.rate_exponent = rate.exponent;
        row.rate_constant = rate.constant;

        if (traj.level_snapshots.size() >= 3) {
            const EnergyTrace trace = convergence_diagnostic(
                traj.level_snapshots, point.location, time_fit.T_est, problem);
            row.w_center_final = trace.w_center.back();
            row.E_final = trace.E_values.back();
            row.E_target = trace.E_target;

            const RescaledProfile w0 =
                rescale_snapshot(traj.initial, point.location, time_fit.T_est, p);
            const double V_a = evaluate(problem.potential, problem.domain, point.location);
            const double E_w0 = weighted_energy(w0, V_a, p);
            const SlackResult slack = energy_inequality_check(
                trace, E_w0, time_fit.T_est, config.analysis.c_slack);
            row.energy_slack = slack.slack;
            row.energy_pass = slack.pass;
            row.energy_trace = trace;
        }
    } catch (const Error& e) {
        row.error = e.code();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int jobs,
                                const RowCallback& on_row) {
    const std::vector<double>& Ms = config.m_values;
    if (Ms.empty()) fail("config-error", "sweep requires a nonempty m_values list");

    std::vector<SweepRow> rows(Ms.size());
    std::vector<char> done(Ms.size(), 0);

    if (jobs <= 1) {
        for (std::size_t i = 0; i < Ms.size(); ++i) {
            rows[i] = run_single(config, Ms[i]);
            if (on_row) on_row(rows[i]);
        }
        return rows;
    }

    // Cells are independent; the callback still fires in M order.
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t flushed = 0;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= Ms.size()) return;
            SweepRow row = run_single(config, Ms[i]);
            std::lock_guard<std::mutex> lock(mu);
            rows[i] = std::move(row);
            done[i] = 1;
            while (flushed < Ms.size() && done[flushed]) {
                if (on_row) on_row(rows[flushed]);
                ++flushed;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(Ms.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return rows;
}

FitReport fit_convergence(const std::vector<SweepRow>& rows, double A, double p) {
    std::vector<const SweepRow*> valid;
    for (const auto& r : rows)
        if (r.T_scaled) valid.push_back(&r);
    if (valid.size() < 3) fail("insufficient-rows", "convergence fit needs >= 3 valid rows");

    const double center = A / (p - 1.0);
    FitReport report;
    std::vector<double> lx, ly;
    for (const SweepRow* r : valid) {
        const double diff = *r->T_scaled - center;
        if (diff > 0.0) {
            const double c2 = diff * std::pow(r->M, (p - 1.0) / 3.0);
            report.C2_fit = report.C2_fit ? std::max(*report.C2_fit, c2) : c2;
        } else if (diff < 0.0) {
            const double c1 = -diff * std::pow(r->M, (p - 1.0) / 4.0);
            report.C1_fit = report.C1_fit ? std::max(*report.C1_fit, c1) : c1;
        }
        if (std::abs(diff) > 1e-15) {
            lx.push_back(std::log(r->M));
            ly.push_back(std::log(std::abs(diff)));
        }
    }
    if (!report.C1_fit && !report.C2_fit) {
        report.note = "all rows exactly at A/(p-1); no constants to fit";
        return report;
    }
    if (!report.C1_fit) report.note = "all rows above A/(p-1); C1 not fitted";
    if (!report.C2_fit) report.note = "all rows below A/(p-1); C2 not fitted";

    if (lx.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= ly.size();
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        const double slope = sxy / sxx;
        report.slope = slope;
        if (lx.size() > 2) {
            double ss = 0.0;
            for (std::size_t i = 0; i < lx.size(); ++i) {
                const double r = ly[i] - (my + slope * (lx[i] - mx));
                ss += r * r;
            }
            report.slope_stderr = std::sqrt(ss / (static_cast<double>(lx.size()) - 2.0) / sxx);
        }
    }
    return report;
}

ConcentrationFit fit_concentration(const std::vector<SweepRow>& rows, double gamma) {
    std::vector<const SweepRow*> valid;
    for (const auto& r : rows)
        if (r.concentration_residual) valid.push_back(&r);
    if (valid.size() < 3) fail("insufficient-rows", "concentration fit needs >= 3 valid rows");

    ConcentrationFit fit;
    std::vector<double> lx, ly;
    for (const SweepRow* r : valid) {
        const double res = *r->concentration_residual;
        if (res <= 1e-12) {
            ++fit.rows_saturated;
            continue;
        }
        ++fit.rows_used;
        const double c = res * std::pow(r->M, gamma);
        fit.C_fit = fit.C_fit ? std::max(*fit.C_fit, c) : c;
        lx.push_back(std::log(r->M));
        ly.push_back(std::log(res));
    }
    if (fit.rows_used == 0) {
        fit.saturated = true; // concentration saturated at grid resolution
        return fit;
    }
    if (lx.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= ly.size();
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        fit.slope = sxy / sxx;
    }
    return fit;
}

std::string csv_header(int dimension) {
    std::string h = "M,T_est,T_est_scaled,T_upper,blowup_point_x";
    if (dimension == 2) h += ",blowup_point_y";
    h += ",concentration_residual,rate_exponent,w_center_final,E_final,E_target,stop_reason,error";
    return h;
}

std::string csv_row(const SweepRow& row, int dimension) {
    std::ostringstream out;
    out << fmt(row.M) << ',' << opt_fmt(row.T_est) << ',' << opt_fmt(row.T_scaled) << ','
        << opt_fmt(row.T_upper) << ',';
    out << (row.blowup_point ? fmt(row.blowup_point->x) : "");
    if (dimension == 2) out << ',' << (row.blowup_point ? fmt(row.blowup_point->y) : "");
    out << ',' << opt_fmt(row.concentration_residual) << ',' << opt_fmt(row.rate_exponent) << ','
        << opt_fmt(row.w_center_final) << ',' << opt_fmt(row.E_final) << ','
        << opt_fmt(row.E_target) << ',' << row.stop_reason << ',' << row.error;
    return out.str();
}

namespace {

nlohmann::ordered_json row_json(const SweepRow& row, int dimension) {
    nlohmann::ordered_json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v)
            j[key] = *v;
        else
            j[key] = nullptr;
    };
    j["M"] = row.M;
    put("T_est", row.T_est);
    put("T_est_scaled", row.T_scaled);
    put("T_upper", row.T_upper);
    if (row.blowup_point) {
        j["blowup_point_x"] = row.blowup_point->x;
        if (dimension == 2) j["blowup_point_y"] = row.blowup_point->y;
    } else {
        j["blowup_point_x"] = nullptr;
        if (dimension == 2) j["blowup_point_y"] = nullptr;
    }
    put("concentration_residual", row.concentration_residual);
    put("rate_exponent", row.rate_exponent);
    put("w_center_final", row.w_center_final);
    put("E_final", row.E_final);
    put("E_target", row.E_target);
    j["stop_reason"] = row.stop_reason;
    j["error"] = row.error;
    return j;
}

} // namespace

std::string render_report(const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
    std::ostringstream out;
    const double p = config.problem.exponent;
    out << "blowlab sweep report\n";
    out << "====================\n";

    try {
        const GridPtr grid = build_grid(config.problem.domain, config.h);
        const auto [A, xbar] = compute_A(config.problem, *grid);
        out << "A = " << fmt(A) << " at xbar = (" << fmt(xbar.x);
        if (config.problem.domain.dimension == 2) out << ", " << fmt(xbar.y);
        out << "), A/(p-1) = " << fmt(A / (p - 1.0)) << "\n";
        out << "gamma = " << fmt(gamma_exponent(p)) << "\n\n";

        out << "rows (" << rows.size() << "):\n";
        for (const auto& r : rows) {
            out << "  M = " << fmt(r.M) << ": ";
            if (r.T_scaled)
                out << "T_est*M^{p-1} = " << fmt(*r.T_scaled);
            else
                out << "no estimate";
            if (r.T_upper) out << ", T_upper*M^{p-1} = " << fmt(*r.T_upper * std::pow(r.M, p - 1.0));
            if (!r.error.empty()) out << " [" << r.error << "]";
            out << "\n";
        }
        out << "\n";

        try {
            const FitReport fit = fit_convergence(rows, A, p);
            out << "convergence fit: C1 = " << (fit.C1_fit ? fmt(*fit.C1_fit) : "null")
                << ", C2 = " << (fit.C2_fit ? fmt(*fit.C2_fit) : "null")
                << ", slope = " << (fit.slope ? fmt(*fit.slope) : "null");
            if (fit.slope_stderr) out << " +- " << fmt(*fit.slope_stderr);
            out << "\n";
            if (!fit.note.empty()) out << "  note: " << fit.note << "\n";
        } catch (const Error& e) {
            out << "convergence fit: " << e.code() << "\n";
        }

        try {
            const ConcentrationFit fit = fit_concentration(rows, gamma_exponent(p));
            if (fit.saturated)
                out << "concentration: saturated at grid resolution (success mode)\n";
            else
                out << "concentration fit: C = " << (fit.C_fit ? fmt(*fit.C_fit) : "null")
                    << ", slope = " << (fit.slope ? fmt(*fit.slope) : "null")
                    << ", rows used = " << fit.rows_used
                    << ", saturated = " << fit.rows_saturated << "\n";
        } catch (const Error& e) {
            out << "concentration fit: " << e.code() << "\n";
        }

        bool any_upper = false, sound = true;
        for (const auto& r : rows)
            if (r.T_upper && r.T_est) {
                any_upper = true;
                if (!(*r.T_est <= *r.T_upper)) sound = false;
            }
        if (any_upper)
            out << "upper-bound soundness (T_est <= T_upper on admissible rows): "
                << (sound ? "pass" : "FAIL") << "\n";
        else
            out << "upper-bound soundness: no admissible rows\n";
    } catch (const Error& e) {
        out << "report incomplete: " << e.code() << "\n";
    }
    return out.str();
}

void emit_outputs(const std::vector<SweepRow>& rows, const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail("io-error", "cannot create output directory '" + dir.string() + "'");

    const int dim = config.problem.domain.dimension;
    auto wants = [&](const char* f) {
        for (const auto& s : config.output.formats)
            if (s == f) return true;
        return false;
    };

    auto open = [&](const fs::path& p) {
        std::ofstream out(p, std::ios::binary); // fixed newlines for byte-stable output
        if (!out) fail("io-error", "cannot write '" + p.string() + "'");
        return out;
    };

    if (wants("csv")) {
        auto out = open(dir / "results.csv");
        out << csv_header(dim) << '\n';
        for (const auto& r : rows) out << csv_row(r, dim) << '\n';
    }
    if (wants("jsonl")) {
        auto out = open(dir / "results.jsonl");
        for (const auto& r : rows) out << row_json(r, dim).dump() << '\n';
    }
    if (wants("plotdata")) {
        fs::create_directories(dir / "plotdata", ec);
        if (ec) fail("io-error", "cannot create plotdata directory");
        {
            auto out = open(dir / "plotdata" / "tm_vs_M.dat");
            for (const auto& r : rows)
                if (r.T_scaled) out << fmt(r.M) << ' ' << fmt(*r.T_scaled) << '\n';
        }
        {
            auto out = open(dir / "plotdata" / "r_vs_M.dat");
            for (const auto& r : rows)
                if (r.concentration_residual)
                    out << fmt(r.M) << ' ' << fmt(*r.concentration_residual) << '\n';
        }
        {
            // Energy trace of the largest-M run that has one.
            auto out = open(dir / "plotdata" / "energy_s.dat");
            for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
                if (!it->energy_trace) continue;
                const EnergyTrace& tr = *it->energy_trace;
                for (std::size_t i = 0; i < tr.s_values.size(); ++i)
                    out << fmt(tr.s_values[i]) << ' ' << fmt(tr.E_values[i]) << ' '
                        << fmt(tr.w_center[i]) << '\n';
                break;
            }
        }
    }
    if (wants("report")) {
        auto out = open(dir / "report.txt");
        out << render_report(rows, config);
    }
}

} // namespace blowlab
