#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "whiplash/cost_function.hpp"
#include "whiplash/damping.hpp"
#include "whiplash/errors.hpp"
#include "whiplash/integrators.hpp"
#include "whiplash/optimizers.hpp"
#include "whiplash/vec.hpp"

namespace whiplash {

enum class run_mode { continuous, discrete };

// Method parameters reachable via method.params.* keys. Only the keys that
// belong to the selected method are accepted.
struct method_params {
    double gamma0 = 1.0;   // constant damping
    double alpha = 3.0;    // nesterov damping law
    double r = 1.0;        // attouch
    double p = 4.0;        // attouch
    double beta = 0.9;     // heavy ball
    double beta1 = 0.9;    // adam
    double beta2 = 0.999;  // adam
    double epsilon = 1e-8; // adam
    std::optional<double> mu;  // constant momentum override for discrete nesterov
};

// Full experiment description. Continuous runs integrate the damped inertial
// system to t_end; discrete runs iterate an optimizer to max_iters.
struct run_config {
    std::string id;
    run_mode mode = run_mode::discrete;
    std::string function_spec;
    std::string method;
    method_params params;
    double step_size = 0.0;
    double t_end = 0.0;          // continuous horizon
    std::size_t max_iters = 0;   // discrete horizon
    vec x0;
    vec v0;                      // continuous only; defaults to -1000 per component
    integrator_kind integrator = integrator_kind::explicit_euler;
    double stop_grad_tol = 0.0;  // discrete only
    double stop_dist_tol = 0.0;  // discrete only
    std::size_t record_stride = 100;
    std::string out_prefix;      // defaults to id

    optimizer_config to_optimizer_config() const {
        optimizer_config cfg;
        cfg.step_size = step_size;
        cfg.max_iters = max_iters;
        cfg.x0 = x0;
        cfg.stop_grad_tol = stop_grad_tol;
        cfg.stop_dist_tol = stop_dist_tol;
        cfg.record_stride = record_stride;
        return cfg;
    }
};

using kv_map = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw validation_error(key + ": expected a number, got '" + value + "'");
    }
}

inline std::size_t parse_count(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    if (!(v >= 1.0) || v != std::floor(v) || v > 9.0e15)
        throw validation_error(key + ": expected a positive integer, got '" + value + "'");
    return static_cast<std::size_t>(v);
}

// [a,b,...] or bare a,b,...
inline vec parse_vector(const std::string& key, const std::string& value) {
    std::string body = trim(value);
    if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') throw validation_error(key + ": unterminated '[' in '" + value + "'");
        body = body.substr(1, body.size() - 2);
    }
    vec out;
    std::string item;
    std::size_t start = 0;
    while (start <= body.size()) {
        const auto comma = body.find(',', start);
        item = trim(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (item.empty()) throw validation_error(key + ": empty component in '" + value + "'");
        out.push_back(parse_number(key, item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw validation_error(key + ": empty vector '" + value + "'");
    return out;
}

}  // namespace detail

// Single-run presets encoding the benchmark protocols. fig5/fig6a/fig6b
// follow the continuous protocol verbatim (step 0.001, v0 = (-1000,-1000),
// explicit Euler); note that protocol sits outside the integrator's
// stability region and is reported as a divergence verdict (see README).
// fig7_* and fig8 use the discrete protocol step 1e-5.
inline const std::map<std::string, kv_map>& single_run_presets() {
    static const std::map<std::string, kv_map> presets = {
        {"fig5",
         {{"id", "fig5"}, {"mode", "continuous"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "0.001"}, {"t_end", "30"},
          {"x0", "[12,-3]"}, {"v0", "[-1000,-1000]"}, {"integrator", "explicit"},
          {"record_stride", "100"}}},
        {"fig6a",
         {{"id", "fig6a"}, {"mode", "continuous"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "0.001"}, {"t_end", "30"},
          {"x0", "[12,-3]"}, {"v0", "[-1000,-1000]"}, {"integrator", "explicit"},
          {"record_stride", "100"}}},
        {"fig6b",
         {{"id", "fig6b"}, {"mode", "continuous"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "0.001"}, {"t_end", "60"},
          {"x0", "[-4,17]"}, {"v0", "[-1000,-1000]"}, {"integrator", "explicit"},
          {"record_stride", "100"}}},
        {"fig7_a",
         {{"id", "fig7_a"}, {"mode", "discrete"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "1e-5"}, {"max_iters", "2000000"},
          {"x0", "[0,0]"}, {"stop_dist_tol", "1e-2"}, {"record_stride", "100"}}},
        {"fig7_b",
         {{"id", "fig7_b"}, {"mode", "discrete"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "1e-5"}, {"max_iters", "2000000"},
          {"x0", "[12,3]"}, {"stop_dist_tol", "1e-2"}, {"record_stride", "100"}}},
        {"fig7_c",
         {{"id", "fig7_c"}, {"mode", "discrete"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "1e-5"}, {"max_iters", "2000000"},
          {"x0", "[-3,7]"}, {"stop_dist_tol", "1e-2"}, {"record_stride", "100"}}},
        {"fig7_d",
         {{"id", "fig7_d"}, {"mode", "discrete"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "1e-5"}, {"max_iters", "2000000"},
          {"x0", "[-7,17]"}, {"stop_dist_tol", "1e-2"}, {"record_stride", "100"}}},
        {"fig8",
         {{"id", "fig8"}, {"mode", "discrete"}, {"function", "rosenbrock"},
          {"method", "whiplash"}, {"step_size", "1e-5"}, {"max_iters", "20000"},
          {"x0", "[0,0]"}, {"record_stride", "20"}}},
    };
    return presets;
}

// Multi-run presets: fig7_all = the four fig7 starts; fig2 = the five-method
// comparison from (5,-3) at the shared protocol step size and budget.
inline const std::vector<std::string> fig2_methods = {"whiplash", "gd", "nesterov", "heavyball",
                                                      "adam"};

inline std::vector<std::string> multi_run_preset(const std::string& name) {
    if (name == "fig7_all") return {"fig7_a", "fig7_b", "fig7_c", "fig7_d"};
    return {};
}

inline kv_map fig2_base_kv() {
    return {{"id", "fig2"},         {"mode", "discrete"},      {"function", "rosenbrock"},
            {"method", "whiplash"}, {"step_size", "1e-5"},     {"max_iters", "100000"},
            {"x0", "[5,-3]"},       {"record_stride", "100"}};
}

inline bool is_preset_name(const std::string& name) {
    return single_run_presets().count(name) > 0 || !multi_run_preset(name).empty() ||
           name == "fig2";
}

// Parses a flat key=value document ('#' starts a comment, later keys win),
// then applies overrides (the --set pairs; command line wins). A "preset"
// key expands first and explicit keys override it. Unknown keys are errors.
inline run_config parse_config(const kv_map& doc, const kv_map& overrides = {});

inline kv_map parse_kv_text(const std::string& text) {
    kv_map out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        std::string line = text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw validation_error("line " + std::to_string(line_no) +
                                       ": expected key=value, got '" + line + "'");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty())
                throw validation_error("line " + std::to_string(line_no) + ": empty key");
            out[key] = value;
        }
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    return out;
}

inline run_config parse_config_text(const std::string& text, const kv_map& overrides = {}) {
    return parse_config(parse_kv_text(text), overrides);
}

inline run_config parse_config(const kv_map& doc, const kv_map& overrides) {
    kv_map kv = doc;
    for (const auto& [k, v] : overrides) kv[k] = v;

    // preset expansion: preset values first, explicit keys win
    if (auto it = kv.find("preset"); it != kv.end()) {
        const std::string name = it->second;
        const auto& presets = single_run_presets();
        auto pit = presets.find(name);
        if (pit == presets.end()) {
            if (is_preset_name(name))
                throw validation_error("preset: '" + name +
                                       "' expands to multiple runs; use the preset command");
            throw validation_error("preset: unknown preset '" + name + "'");
        }
        kv_map merged = pit->second;
        for (const auto& [k, v] : kv)
            if (k != "preset") merged[k] = v;
        kv = std::move(merged);
    }

    static const std::set<std::string> known = {
        "id", "mode", "function", "method", "step_size", "t_end", "max_iters",
        "x0", "v0", "integrator", "stop_grad_tol", "stop_dist_tol", "record_stride",
        "out_prefix", "method.params.gamma0", "method.params.alpha", "method.params.r",
        "method.params.p", "method.params.beta", "method.params.beta1", "method.params.beta2",
        "method.params.epsilon", "method.params.mu"};
    for (const auto& [k, v] : kv)
        if (!known.count(k)) throw validation_error(k + ": unknown key");

    auto get = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const std::string& key) -> std::string {
        auto v = get(key);
        if (!v) throw validation_error(key + ": missing required key");
        return *v;
    };

    run_config cfg;

    // mode: explicit, or inferred from which horizon key is present
    const bool has_t_end = kv.count("t_end") > 0;
    const bool has_max_iters = kv.count("max_iters") > 0;
    if (auto m = get("mode")) {
        if (*m == "continuous") cfg.mode = run_mode::continuous;
        else if (*m == "discrete") cfg.mode = run_mode::discrete;
        else throw validation_error("mode: expected continuous or discrete, got '" + *m + "'");
    } else if (has_t_end == has_max_iters) {
        throw validation_error("mode: cannot infer (give mode, or exactly one of t_end/max_iters)");
    } else {
        cfg.mode = has_t_end ? run_mode::continuous : run_mode::discrete;
    }
    const bool cont = cfg.mode == run_mode::continuous;

    cfg.function_spec = require("function");
    const cost_function f = function_by_name(cfg.function_spec);  // validates the spec

    cfg.method = require("method");
    static const std::set<std::string> continuous_methods = {"constant", "nesterov", "attouch",
                                                             "whiplash"};
    static const std::set<std::string> discrete_methods = {"whiplash", "gd", "nesterov",
                                                           "heavyball", "adam"};
    const auto& allowed = cont ? continuous_methods : discrete_methods;
    if (!allowed.count(cfg.method))
        throw validation_error("method: unknown " +
                               std::string(cont ? "damping law" : "optimizer") + " '" +
                               cfg.method + "'");

    // method.params.* accepted only where they mean something
    static const std::map<std::string, std::set<std::string>> param_owners = {
        {"gamma0", {"c:constant"}},
        {"alpha", {"c:nesterov"}},
        {"r", {"c:attouch"}},
        {"p", {"c:attouch"}},
        {"beta", {"d:heavyball"}},
        {"beta1", {"d:adam"}},
        {"beta2", {"d:adam"}},
        {"epsilon", {"d:adam"}},
        {"mu", {"d:nesterov"}},
    };
    const std::string owner_tag = (cont ? "c:" : "d:") + cfg.method;
    for (const auto& [pname, owners] : param_owners) {
        const std::string key = "method.params." + pname;
        auto v = get(key);
        if (!v) continue;
        if (!owners.count(owner_tag))
            throw validation_error(key + ": not a parameter of method '" + cfg.method + "'");
        const double num = detail::parse_number(key, *v);
        if (pname == "gamma0") cfg.params.gamma0 = num;
        else if (pname == "alpha") cfg.params.alpha = num;
        else if (pname == "r") cfg.params.r = num;
        else if (pname == "p") cfg.params.p = num;
        else if (pname == "beta") cfg.params.beta = num;
        else if (pname == "beta1") cfg.params.beta1 = num;
        else if (pname == "beta2") cfg.params.beta2 = num;
        else if (pname == "epsilon") cfg.params.epsilon = num;
        else if (pname == "mu") cfg.params.mu = num;
    }

    cfg.step_size = detail::parse_number("step_size", require("step_size"));
    if (!(cfg.step_size > 0.0)) throw validation_error("step_size: must be > 0");

    if (cont) {
        if (has_max_iters) throw validation_error("max_iters: not valid in continuous mode");
        if (kv.count("stop_grad_tol") || kv.count("stop_dist_tol"))
            throw validation_error("stop_grad_tol/stop_dist_tol: not valid in continuous mode");
        cfg.t_end = detail::parse_number("t_end", require("t_end"));
        if (!(cfg.t_end > 0.0)) throw validation_error("t_end: must be > 0");
    } else {
        if (has_t_end) throw validation_error("t_end: not valid in discrete mode");
        if (kv.count("v0")) throw validation_error("v0: not valid in discrete mode");
        if (kv.count("integrator")) throw validation_error("integrator: not valid in discrete mode");
        cfg.max_iters = detail::parse_count("max_iters", require("max_iters"));
        if (auto v = get("stop_grad_tol")) {
            cfg.stop_grad_tol = detail::parse_number("stop_grad_tol", *v);
            if (!(cfg.stop_grad_tol > 0.0)) throw validation_error("stop_grad_tol: must be > 0");
        }
        if (auto v = get("stop_dist_tol")) {
            cfg.stop_dist_tol = detail::parse_number("stop_dist_tol", *v);
            if (!(cfg.stop_dist_tol > 0.0)) throw validation_error("stop_dist_tol: must be > 0");
        }
    }

    cfg.x0 = detail::parse_vector("x0", require("x0"));
    if (cfg.x0.size() != f.dimension)
        throw validation_error("x0: dimension " + std::to_string(cfg.x0.size()) +
                               " does not match " + f.name + " (d=" +
                               std::to_string(f.dimension) + ")");
    if (cont) {
        if (auto v = get("v0")) {
            cfg.v0 = detail::parse_vector("v0", *v);
            if (cfg.v0.size() != cfg.x0.size())
                throw validation_error("v0: dimension does not match x0");
        } else {
            cfg.v0 = vec(cfg.x0.size(), -1000.0);  // the protocol's starting speed
        }
        if (auto v = get("integrator")) {
            if (*v == "explicit") cfg.integrator = integrator_kind::explicit_euler;
            else if (*v == "symplectic") cfg.integrator = integrator_kind::symplectic_euler;
            else throw validation_error("integrator: expected explicit or symplectic, got '" + *v + "'");
        }
    }

    if (auto v = get("record_stride")) cfg.record_stride = detail::parse_count("record_stride", *v);

    cfg.id = get("id").value_or(cfg.function_spec + "_" + cfg.method + "_" +
                                (cont ? "continuous" : "discrete"));
    cfg.out_prefix = get("out_prefix").value_or(cfg.id);
    return cfg;
}

// Builds the damping law a continuous config names.
inline damping_law damping_from_config(const run_config& cfg) {
    if (cfg.method == "constant") return damping_law::constant(cfg.params.gamma0);
    if (cfg.method == "nesterov") return damping_law::nesterov(cfg.params.alpha);
    if (cfg.method == "attouch") return damping_law::attouch(cfg.params.r, cfg.params.p);
    if (cfg.method == "whiplash") return damping_law::whiplash();
    throw validation_error("method: unknown damping law '" + cfg.method + "'");
}

// Dispatches a discrete config to the optimizer it names.
inline run_result run_optimizer(const cost_function& f, const run_config& cfg) {
    const optimizer_config ocfg = cfg.to_optimizer_config();
    if (cfg.method == "whiplash") return whiplash_descent(f, ocfg);
    if (cfg.method == "gd") return gradient_descent(f, ocfg);
    if (cfg.method == "nesterov") {
        if (cfg.params.mu) {
            const double mu = *cfg.params.mu;
            if (!(mu >= 0.0 && mu < 1.0))
                throw validation_error("method.params.mu: must lie in [0, 1)");
            return nesterov_descent(f, ocfg, [mu](std::size_t) { return mu; });
        }
        return nesterov_descent(f, ocfg);
    }
    if (cfg.method == "heavyball") return heavy_ball(f, ocfg, cfg.params.beta);
    if (cfg.method == "adam")
        return adam(f, ocfg, {cfg.params.beta1, cfg.params.beta2, cfg.params.epsilon});
    throw validation_error("method: unknown optimizer '" + cfg.method + "'");
}

}  // namespace whiplash
