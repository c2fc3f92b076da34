#pragma once

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "whiplash/config.hpp"
#include "whiplash/csv.hpp"
#include "whiplash/harness.hpp"

namespace whiplash {

namespace detail {

inline std::vector<double> parse_sizes_list(const std::string& csv) {
    std::vector<double> sizes;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) sizes.push_back(parse_number("--sizes", trim(item)));
    return sizes;
}

inline kv_map parse_set_pairs(const std::vector<std::string>& pairs) {
    kv_map out;
    for (const std::string& kv : pairs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw validation_error("--set: expected key=value, got '" + kv + "'");
        out[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
    }
    return out;
}

}  // namespace detail

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 2 validation error, 3 divergence verdict, 4 I/O error.
inline int cli_main(std::vector<std::string> args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"whiplash adaptive-damping gradient descent benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> set_pairs;
    std::string methods_csv;
    std::string sizes_csv;
    std::string preset_name;
    std::string out_dir = ".";

    CLI::App* cmd_run = app.add_subcommand("run", "execute one configured run");
    cmd_run->add_option("--config", config_path, "key=value config file")->required();
    cmd_run->add_option("--set", set_pairs, "override config keys (key=value, wins over file)");

    CLI::App* cmd_compare = app.add_subcommand("compare", "run several methods on one problem");
    cmd_compare->add_option("--config", config_path, "base config file")->required();
    cmd_compare->add_option("--methods", methods_csv, "comma-separated optimizer names")->required();

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "rerun one config across step sizes");
    cmd_sweep->add_option("--config", config_path, "base config file")->required();
    cmd_sweep->add_option("--sizes", sizes_csv, "comma-separated step sizes")->required();

    CLI::App* cmd_preset = app.add_subcommand("preset", "run a named benchmark preset");
    cmd_preset->add_option("name", preset_name, "preset name (fig2, fig5, fig6a, fig6b, fig7_all, fig8)")
        ->required();
    cmd_preset->add_option("--out", out_dir, "output directory");

    std::vector<const char*> argv;
    argv.push_back("whiplash");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return exit_validation;
    }

    try {
        if (cmd_run->parsed()) {
            const kv_map doc = parse_kv_text(read_file(config_path));
            const run_config cfg = parse_config(doc, detail::parse_set_pairs(set_pairs));
            const run_artifacts art = run(cfg);
            out << summary_table({art.summary});
            return art.exit_code;
        }
        if (cmd_compare->parsed()) {
            const kv_map doc = parse_kv_text(read_file(config_path));
            const run_config base = parse_config(doc);  // validates the base
            std::vector<run_config> cfgs;
            std::string method;
            std::istringstream ms(methods_csv);
            while (std::getline(ms, method, ',')) {
                kv_map kv = doc;
                kv["method"] = detail::trim(method);
                kv["id"] = base.id + "_" + detail::trim(method);
                cfgs.push_back(parse_config(kv));
            }
            const compare_result res = compare(cfgs, base.out_prefix);
            out << summary_table(res.rows);
            return exit_ok;
        }
        if (cmd_sweep->parsed()) {
            const kv_map doc = parse_kv_text(read_file(config_path));
            const run_config base = parse_config(doc);
            const sweep_result res = step_size_sweep(base, detail::parse_sizes_list(sizes_csv),
                                                     base.out_prefix);
            out << summary_table(res.rows);
            if (res.largest_non_diverged)
                out << "largest non-diverged step size: " << format_double(*res.largest_non_diverged)
                    << '\n';
            else
                out << "all step sizes diverged\n";
            return exit_ok;
        }
        if (cmd_preset->parsed()) {
            return run_preset(preset_name, out_dir, out);
        }
    } catch (const validation_error& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const io_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_validation;
}

}  // namespace whiplash
