#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "whiplash/config.hpp"
#include "whiplash/csv.hpp"
#include "whiplash/errors.hpp"
#include "whiplash/format.hpp"
#include "whiplash/integrators.hpp"
#include "whiplash/optimizers.hpp"

namespace whiplash {

// Exit codes shared by the library-level runners and the CLI.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_divergence = 3;
inline constexpr int exit_io = 4;

struct summary_row {
    std::string id;
    std::string method;
    double final_f = 0.0;
    double final_dist = std::numeric_limits<double>::quiet_NaN();  // to x*, if known
    std::size_t iterations = 0;  // optimizer iterations or integrator steps
    double wall_seconds = 0.0;   // reported on stdout only, never written to CSV
    std::string verdict;
};

// Wall time is deliberately excluded: identical configs must produce
// byte-identical files.
inline std::string summary_csv_header() { return "id,method,final_f,final_dist,iters,verdict"; }

inline std::string summary_csv_row(const summary_row& row) {
    std::ostringstream out;
    out << row.id << ',' << row.method << ',' << format_double(row.final_f) << ','
        << format_double(row.final_dist) << ',' << row.iterations << ',' << row.verdict;
    return out.str();
}

inline std::string summary_table(const std::vector<summary_row>& rows) {
    std::ostringstream out;
    out << "id            method      final_f                final_dist             iters      wall_s    verdict\n";
    for (const summary_row& r : rows) {
        std::ostringstream line;
        line.setf(std::ios::left);
        line.width(14);
        line << r.id;
        line.width(12);
        line << r.method;
        line.width(23);
        line << format_double(r.final_f);
        line.width(23);
        line << format_double(r.final_dist);
        line.width(11);
        line << r.iterations;
        line.width(10);
        std::ostringstream w;
        w.precision(3);
        w << std::fixed << r.wall_seconds;
        line << w.str();
        line << r.verdict;
        out << line.str() << '\n';
    }
    return out.str();
}

struct run_artifacts {
    summary_row summary;
    int exit_code = exit_ok;
    std::vector<std::string> files;
};

// Executes one configured run: writes <prefix>_trace.csv and
// <prefix>_summary.csv, returns the summary row. Divergence is a verdict,
// not a crash; the exit code reflects it.
inline run_artifacts run(const run_config& cfg) {
    const cost_function f = function_by_name(cfg.function_spec);
    summary_row row;
    row.id = cfg.id;
    row.method = cfg.method;

    const auto t_start = std::chrono::steady_clock::now();
    std::string trace_csv;
    if (cfg.mode == run_mode::continuous) {
        const damping_law law = damping_from_config(cfg);
        const trajectory traj = simulate(f, law, cfg.x0, cfg.v0, cfg.step_size, cfg.t_end,
                                         cfg.integrator, cfg.record_stride, cfg.id);
        const trajectory_sample& last = traj.samples.back();
        row.final_f = last.f_value;
        if (f.minimizer) row.final_dist = dist(last.x, *f.minimizer);
        row.iterations = traj.steps_taken;
        row.verdict = traj.diverged ? "diverged" : "horizon_reached";
        trace_csv = trajectory_to_csv(traj, f.dimension);
    } else {
        const run_result res = run_optimizer(f, cfg);
        row.final_f = res.final_f;
        if (f.minimizer) row.final_dist = dist(res.final_x, *f.minimizer);
        row.iterations = res.iterations_used;
        row.verdict = verdict_name(res.outcome);
        trace_csv = records_to_csv(res.records, f.dimension);
    }
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    run_artifacts art;
    const std::string trace_path = cfg.out_prefix + "_trace.csv";
    const std::string summary_path = cfg.out_prefix + "_summary.csv";
    write_file(trace_path, trace_csv);
    write_file(summary_path, summary_csv_header() + "\n" + summary_csv_row(row) + "\n");
    art.files = {trace_path, summary_path};
    art.summary = row;
    art.exit_code = row.verdict == "diverged" ? exit_divergence : exit_ok;
    return art;
}

struct compare_result {
    std::vector<summary_row> rows;  // sorted by final_f ascending, method name breaks ties
    std::vector<std::string> files;
};

// Runs each config (all must share function and x0), emits one merged table
// sorted by final f plus a shared-x-axis f-vs-iteration CSV for plotting.
inline compare_result compare(const std::vector<run_config>& cfgs,
                              const std::string& out_prefix) {
    if (cfgs.empty()) throw validation_error("compare: empty config list");
    for (const run_config& c : cfgs) {
        if (c.mode != run_mode::discrete)
            throw validation_error("compare: only discrete configs are comparable");
        if (c.function_spec != cfgs.front().function_spec)
            throw validation_error("compare: configs disagree on function");
        if (c.x0 != cfgs.front().x0) throw validation_error("compare: configs disagree on x0");
    }

    const cost_function f = function_by_name(cfgs.front().function_spec);
    compare_result out;
    std::vector<run_result> results;
    for (const run_config& cfg : cfgs) {
        summary_row row;
        row.id = cfg.id;
        row.method = cfg.method;
        const auto t_start = std::chrono::steady_clock::now();
        run_result res = run_optimizer(f, cfg);
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        row.final_f = res.final_f;
        if (f.minimizer) row.final_dist = dist(res.final_x, *f.minimizer);
        row.iterations = res.iterations_used;
        row.verdict = verdict_name(res.outcome);
        const std::string trace_path = out_prefix + "_" + cfg.method + "_trace.csv";
        write_file(trace_path, records_to_csv(res.records, f.dimension));
        out.files.push_back(trace_path);
        out.rows.push_back(std::move(row));
        results.push_back(std::move(res));
    }

    // shared-x-axis f-vs-iteration grid at the first config's stride
    {
        const std::size_t stride = cfgs.front().record_stride;
        const std::size_t budget = cfgs.front().max_iters;
        std::ostringstream curve;
        curve << 'k';
        for (const run_config& c : cfgs) curve << ",f_" << c.method;
        curve << '\n';
        std::vector<std::map<std::size_t, double>> by_k(results.size());
        for (std::size_t m = 0; m < results.size(); ++m)
            for (const iterate_record& r : results[m].records) by_k[m][r.k] = r.f_value;
        for (std::size_t k = 0; k <= budget; k += stride) {
            curve << k;
            for (std::size_t m = 0; m < results.size(); ++m) {
                curve << ',';
                auto it = by_k[m].find(k);
                if (it != by_k[m].end()) curve << format_double(it->second);
            }
            curve << '\n';
        }
        const std::string curve_path = out_prefix + "_fcurve.csv";
        write_file(curve_path, curve.str());
        out.files.push_back(curve_path);
    }

    std::sort(out.rows.begin(), out.rows.end(), [](const summary_row& a, const summary_row& b) {
        if (a.final_f != b.final_f) return a.final_f < b.final_f;
        return a.method < b.method;
    });
    std::ostringstream table;
    table << summary_csv_header() << '\n';
    for (const summary_row& r : out.rows) table << summary_csv_row(r) << '\n';
    const std::string table_path = out_prefix + "_compare.csv";
    write_file(table_path, table.str());
    out.files.push_back(table_path);
    return out;
}

struct sweep_result {
    std::vector<summary_row> rows;  // one per step size, input order
    std::vector<double> sizes;
    std::optional<double> largest_non_diverged;
    std::vector<std::string> files;
};

// One run per step size; reports each verdict and identifies the largest
// size that did not diverge.
inline sweep_result step_size_sweep(const run_config& base, const std::vector<double>& sizes,
                                    const std::string& out_prefix) {
    if (base.mode != run_mode::discrete)
        throw validation_error("sweep: base config must be discrete");
    if (sizes.empty()) throw validation_error("sweep: empty step-size list");

    const cost_function f = function_by_name(base.function_spec);
    sweep_result out;
    out.sizes = sizes;
    std::ostringstream table;
    table << "step_size,verdict,final_f,final_dist,iters\n";
    for (double s : sizes) {
        if (!(s > 0.0)) throw validation_error("sweep: step sizes must be > 0");
        run_config cfg = base;
        cfg.step_size = s;
        summary_row row;
        row.id = base.id;
        row.method = base.method;
        const auto t_start = std::chrono::steady_clock::now();
        const run_result res = run_optimizer(f, cfg);
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        row.final_f = res.final_f;
        if (f.minimizer) row.final_dist = dist(res.final_x, *f.minimizer);
        row.iterations = res.iterations_used;
        row.verdict = verdict_name(res.outcome);
        table << format_double(s) << ',' << row.verdict << ',' << format_double(row.final_f)
              << ',' << format_double(row.final_dist) << ',' << row.iterations << '\n';
        if (res.outcome != verdict::diverged &&
            (!out.largest_non_diverged || s > *out.largest_non_diverged))
            out.largest_non_diverged = s;
        out.rows.push_back(std::move(row));
    }
    const std::string path = out_prefix + "_sweep.csv";
    write_file(path, table.str());
    out.files.push_back(path);
    return out;
}

// Runs a named preset into out_dir. Single-run presets execute one run;
// fig7_all fans out to its four starts; fig2 is the method comparison.
// Returns the run exit code (any divergence wins over ok).
inline int run_preset(const std::string& name, const std::string& out_dir, std::ostream& log) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory: " + out_dir);
    const std::string prefix = (fs::path(out_dir) / name).string();

    auto run_single = [&](const std::string& preset_name) {
        run_config cfg = parse_config({{"preset", preset_name}});
        cfg.out_prefix = (fs::path(out_dir) / preset_name).string();
        const run_artifacts art = run(cfg);
        log << summary_table({art.summary});
        return art.exit_code;
    };

    if (single_run_presets().count(name)) return run_single(name);

    const std::vector<std::string> members = multi_run_preset(name);
    if (!members.empty()) {
        int code = exit_ok;
        for (const std::string& m : members) code = std::max(code, run_single(m));
        return code;
    }

    if (name == "fig2") {
        std::vector<run_config> cfgs;
        for (const std::string& m : fig2_methods) {
            kv_map kv = fig2_base_kv();
            kv["method"] = m;
            kv["id"] = "fig2_" + m;
            cfgs.push_back(parse_config(kv));
        }
        const compare_result res = compare(cfgs, prefix);
        log << summary_table(res.rows);
        return exit_ok;
    }
    throw validation_error("preset: unknown preset '" + name + "'");
}

}  // namespace whiplash
