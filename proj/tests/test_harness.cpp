#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "whiplash/cli.hpp"
#include "whiplash/csv.hpp"
#include "whiplash/harness.hpp"

using namespace whiplash;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("whiplash_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

run_config small_discrete(const fs::path& dir, const std::string& id) {
    kv_map kv = {{"function", "rosenbrock"}, {"method", "whiplash"}, {"step_size", "1e-5"},
                 {"max_iters", "2000"},      {"x0", "[0,0]"},        {"record_stride", "100"},
                 {"id", id}};
    run_config cfg = parse_config(kv);
    cfg.out_prefix = (dir / id).string();
    return cfg;
}

}  // namespace

TEST_CASE("run writes deterministic trace and summary files") {
    const fs::path dir = fresh_dir("run");
    run_config cfg = small_discrete(dir, "det");

    const run_artifacts first = run(cfg);
    CHECK(first.exit_code == exit_ok);
    CHECK(first.summary.verdict == "budget_exhausted");
    REQUIRE(first.files.size() == 2);

    const std::string trace_a = read_file(first.files[0]);
    const std::string summary_a = read_file(first.files[1]);
    const run_artifacts second = run(cfg);
    CHECK(read_file(second.files[0]) == trace_a);  // byte-identical rerun
    CHECK(read_file(second.files[1]) == summary_a);

    const auto rows = parse_csv(trace_a);
    CHECK(rows.at(0).at(0) == "k");
    CHECK(rows.size() == 2000 / 100 + 1 + 1);  // strides + final + header

    const auto summary_rows = parse_csv(summary_a);
    REQUIRE(summary_rows.size() == 2);
    CHECK(summary_rows[0] ==
          std::vector<std::string>{"id", "method", "final_f", "final_dist", "iters", "verdict"});
    CHECK(summary_rows[1][0] == "det");
    CHECK(summary_rows[1][5] == "budget_exhausted");
}

TEST_CASE("run handles continuous configs and divergence verdicts") {
    const fs::path dir = fresh_dir("cont");
    // the protocol step size is unstable at |v0| = 1000 sqrt(2); expect an
    // orderly divergence verdict, exit code 3 and a truncated trace
    run_config cfg = parse_config({{"preset", "fig6a"}});
    cfg.out_prefix = (dir / "fig6a").string();
    const run_artifacts art = run(cfg);
    CHECK(art.exit_code == exit_divergence);
    CHECK(art.summary.verdict == "diverged");
    const auto rows = parse_csv(read_file(art.files[0]));
    CHECK(rows.at(0).at(0) == "t");
    CHECK(rows.size() >= 3);

    // a stable continuous config completes with exit 0
    run_config ok = parse_config({{"preset", "fig6a"}}, {{"step_size", "2e-4"}});
    ok.out_prefix = (dir / "fig6a_stable").string();
    const run_artifacts good = run(ok);
    CHECK(good.exit_code == exit_ok);
    CHECK(good.summary.verdict == "horizon_reached");
    CHECK(good.summary.final_dist <= 0.1);
}

TEST_CASE("compare runs methods, sorts by final f and emits the shared curve") {
    const fs::path dir = fresh_dir("compare");
    std::vector<run_config> cfgs;
    for (const std::string m : {"gd", "whiplash"}) {
        kv_map kv = {{"function", "quadratic:1,1"}, {"method", m},    {"step_size", "0.1"},
                     {"max_iters", "200"},          {"x0", "[1,0]"},  {"record_stride", "10"},
                     {"id", "cmp_" + m}};
        cfgs.push_back(parse_config(kv));
    }
    const compare_result res = compare(cfgs, (dir / "cmp").string());
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].final_f <= res.rows[1].final_f);

    // gd on the identity quadratic matches (1-s)^(2n) * f0
    const summary_row* gd_row = nullptr;
    for (const summary_row& r : res.rows)
        if (r.method == "gd") gd_row = &r;
    REQUIRE(gd_row != nullptr);
    double expect = 0.5;
    for (int k = 0; k < 200; ++k) expect *= (1.0 - 0.1) * (1.0 - 0.1);
    CHECK_THAT(gd_row->final_f, Catch::Matchers::WithinRel(expect, 1e-10));

    const auto curve = parse_csv(read_file((dir / "cmp_fcurve.csv").string()));
    REQUIRE(curve.size() == 200 / 10 + 1 + 1);  // header + grid rows
    CHECK(curve[0] == std::vector<std::string>{"k", "f_gd", "f_whiplash"});
    for (const auto& row : curve) REQUIRE(row.size() == 3);

    // single-config compare degenerates to a one-row table
    const compare_result single = compare({cfgs[0]}, (dir / "single").string());
    CHECK(single.rows.size() == 1);
}

TEST_CASE("compare rejects mismatched problems") {
    const fs::path dir = fresh_dir("compare_bad");
    run_config a = small_discrete(dir, "a");
    run_config b = small_discrete(dir, "b");
    b.x0 = {1.0, 1.0};
    CHECK_THROWS_AS(compare({a, b}, (dir / "bad").string()), validation_error);
    b = small_discrete(dir, "c");
    b.function_spec = "sphere";
    CHECK_THROWS_AS(compare({a, b}, (dir / "bad").string()), validation_error);
    CHECK_THROWS_AS(compare({}, (dir / "bad").string()), validation_error);
}

TEST_CASE("step size sweep identifies the stability cliff") {
    const fs::path dir = fresh_dir("sweep");
    kv_map kv = {{"function", "quadratic:1,4"}, {"method", "gd"},  {"step_size", "0.1"},
                 {"max_iters", "5000"},         {"x0", "[1,1]"},   {"record_stride", "1000"},
                 {"stop_dist_tol", "1e-9"},     {"id", "gdsweep"}};
    const run_config base = parse_config(kv);
    // 2 / lambda_max = 0.5: the verdict flips exactly at the analytic threshold
    const sweep_result res = step_size_sweep(base, {0.49, 0.51}, (dir / "gd").string());
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].verdict == "converged_dist");
    CHECK(res.rows[1].verdict == "diverged");
    REQUIRE(res.largest_non_diverged);
    CHECK(*res.largest_non_diverged == 0.49);

    const auto rows = parse_csv(read_file(res.files[0]));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"step_size", "verdict", "final_f", "final_dist",
                                              "iters"});

    const sweep_result single = step_size_sweep(base, {0.1}, (dir / "single").string());
    CHECK(single.rows.size() == 1);

    CHECK_THROWS_AS(step_size_sweep(base, {}, (dir / "empty").string()), validation_error);
}

TEST_CASE("cli run exits with the verdict code") {
    const fs::path dir = fresh_dir("cli");
    const std::string cfg_path = (dir / "run.cfg").string();
    write_file(cfg_path,
               "function=rosenbrock\nmethod=whiplash\nstep_size=1e-5\nmax_iters=2000\n"
               "x0=[0,0]\nout_prefix=" + (dir / "out").string() + "\n");

    std::ostringstream out, err;
    CHECK(cli_main({"run", "--config", cfg_path}, out, err) == exit_ok);
    CHECK(out.str().find("budget_exhausted") != std::string::npos);

    // --set wins over the file; a diverging step size maps to exit 3
    out.str("");
    CHECK(cli_main({"run", "--config", cfg_path, "--set", "step_size=0.4", "--set",
                    "max_iters=2000"},
                   out, err) == exit_divergence);

    // validation failures map to exit 2
    CHECK(cli_main({"run", "--config", cfg_path, "--set", "step_size=-1"}, out, err) ==
          exit_validation);
    CHECK(cli_main({"run", "--config", (dir / "missing.cfg").string()}, out, err) == exit_io);
    CHECK(cli_main({"run"}, out, err) == exit_validation);          // missing --config
    CHECK(cli_main({"frobnicate"}, out, err) == exit_validation);   // unknown subcommand
}

TEST_CASE("cli compare and sweep drive the harness") {
    const fs::path dir = fresh_dir("cli2");
    const std::string cfg_path = (dir / "base.cfg").string();
    write_file(cfg_path,
               "function=rosenbrock\nmethod=whiplash\nstep_size=1e-5\nmax_iters=3000\n"
               "x0=[5,-3]\nrecord_stride=100\nout_prefix=" + (dir / "cmp").string() + "\n");

    std::ostringstream out, err;
    REQUIRE(cli_main({"compare", "--config", cfg_path, "--methods", "whiplash,gd"}, out, err) ==
            exit_ok);
    CHECK(fs::exists(dir / "cmp_whiplash_trace.csv"));
    CHECK(fs::exists(dir / "cmp_gd_trace.csv"));
    CHECK(fs::exists(dir / "cmp_fcurve.csv"));
    CHECK(fs::exists(dir / "cmp_compare.csv"));

    out.str("");
    REQUIRE(cli_main({"sweep", "--config", cfg_path, "--sizes", "1e-5,1e-4"}, out, err) == exit_ok);
    CHECK(fs::exists(dir / "cmp_sweep.csv"));
    CHECK(out.str().find("largest non-diverged step size: 1e-05") != std::string::npos);
}

TEST_CASE("cli preset emits the documented artifacts") {
    const fs::path dir = fresh_dir("preset");
    std::ostringstream out, err;
    REQUIRE(cli_main({"preset", "fig8", "--out", dir.string()}, out, err) == exit_ok);
    const auto rows = parse_csv(read_file((dir / "fig8_trace.csv").string()));
    CHECK(rows.at(0) == std::vector<std::string>{"k", "x0", "x1", "z0", "z1", "f", "grad_norm",
                                                 "alpha"});
    CHECK(rows.size() == 20000 / 20 + 1 + 1);

    CHECK(cli_main({"preset", "fig9", "--out", dir.string()}, out, err) == exit_validation);
}
