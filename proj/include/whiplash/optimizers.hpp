#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "whiplash/cost_function.hpp"
#include "whiplash/errors.hpp"
#include "whiplash/integrators.hpp"  // divergence_radius
#include "whiplash/vec.hpp"

namespace whiplash {

struct optimizer_config {
    double step_size = 0.0;
    std::size_t max_iters = 0;
    vec x0;
    double stop_grad_tol = 0.0;  // 0 disables: stop when |grad| <= tol
    double stop_dist_tol = 0.0;  // 0 disables: stop when |x - x*| <= tol
    std::size_t record_stride = 100;

    void validate(const cost_function& f) const {
        if (!(step_size > 0.0)) throw validation_error("step_size: must be > 0");
        if (max_iters < 1) throw validation_error("max_iters: must be >= 1");
        if (x0.size() != f.dimension)
            throw validation_error("x0: dimension does not match " + f.name);
        if (record_stride == 0) throw validation_error("record_stride: must be >= 1");
        if (stop_dist_tol > 0.0 && !f.minimizer)
            throw validation_error("stop_dist_tol: " + f.name + " has no known minimizer");
    }
};

struct iterate_record {
    std::size_t k = 0;
    vec x;
    vec z;  // momentum z_k = x_k - x_{k-1}
    double alpha = 0.0;
    double f_value = 0.0;
    double grad_norm = 0.0;
};

enum class verdict { converged_grad, converged_dist, budget_exhausted, diverged };

inline std::string verdict_name(verdict v) {
    switch (v) {
        case verdict::converged_grad: return "converged_grad";
        case verdict::converged_dist: return "converged_dist";
        case verdict::budget_exhausted: return "budget_exhausted";
        case verdict::diverged: return "diverged";
    }
    return "?";
}

struct run_result {
    vec final_x;
    double final_f = 0.0;
    std::size_t iterations_used = 0;
    verdict outcome = verdict::budget_exhausted;
    std::vector<iterate_record> records;
};

namespace detail {

inline bool diverged_point(const vec& x, double fx) {
    return !is_finite(x) || !std::isfinite(fx) || norm(x) > divergence_radius;
}

// Shared driver. advance(k, x_prev, x, g) produces x_{k+1} from iterate k;
// alpha_of(k, z) is the damping multiplier recorded at iterate k. Divergence
// is detected on the candidate point, so recorded iterates are always finite.
template <class Advance, class AlphaOf>
run_result drive(const cost_function& f, const optimizer_config& cfg, Advance&& advance,
                 AlphaOf&& alpha_of) {
    cfg.validate(f);
    run_result res;

    vec x = cfg.x0;
    vec x_prev = cfg.x0;
    std::size_t k = 0;

    auto make_record = [&](const vec& xi, double fxi, const vec& gi) {
        iterate_record r;
        r.k = k;
        r.x = xi;
        r.z.resize(xi.size());
        for (std::size_t i = 0; i < xi.size(); ++i) r.z[i] = xi[i] - x_prev[i];
        r.alpha = alpha_of(k, r.z);
        r.f_value = fxi;
        r.grad_norm = norm(gi);
        return r;
    };

    while (true) {
        const vec g = f.grad(x);
        const double fx = f.eval(x);
        if (diverged_point(x, fx)) {  // only reachable for a pathological x0
            res.outcome = verdict::diverged;
            break;
        }
        const bool due = k % cfg.record_stride == 0;
        if (due) res.records.push_back(make_record(x, fx, g));
        auto stop = [&](verdict v) {
            res.outcome = v;
            if (!due) res.records.push_back(make_record(x, fx, g));
        };
        if (cfg.stop_grad_tol > 0.0 && norm(g) <= cfg.stop_grad_tol) {
            stop(verdict::converged_grad);
            break;
        }
        if (cfg.stop_dist_tol > 0.0 && dist(x, *f.minimizer) <= cfg.stop_dist_tol) {
            stop(verdict::converged_dist);
            break;
        }
        if (k == cfg.max_iters) {
            stop(verdict::budget_exhausted);
            break;
        }
        vec next = advance(k, x_prev, x, g);
        if (diverged_point(next, f.eval(next))) {
            stop(verdict::diverged);
            ++k;  // count the update that diverged
            break;
        }
        x_prev = std::move(x);
        x = std::move(next);
        ++k;
    }

    res.final_x = x;
    res.final_f = f.eval(x);
    res.iterations_used = k;
    return res;
}

}  // namespace detail

// Momentum update kernel shared by whiplash_descent and heavy_ball:
//   x_1     = x_0 - s grad f(x_0)
//   z_k     = x_k - x_{k-1}
//   alpha_k = rule(k, z_k)
//   x_{k+1} = x_k + (alpha_k z_k - s grad f(x_k))
// The parenthesised grouping fixes the floating-point evaluation order; the
// two-stage form z_{k+1} = alpha_k z_k - s g, x_{k+1} = x_k + z_{k+1} performs
// the same operations and yields bitwise-identical iterates.
template <class AlphaRule>
run_result momentum_descent(const cost_function& f, const optimizer_config& cfg,
                            AlphaRule&& alpha_rule) {
    const double s = cfg.step_size;
    auto advance = [&alpha_rule, s](std::size_t k, const vec& x_prev, const vec& x, const vec& g) {
        vec next(x.size());
        if (k == 0) {
            for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] - s * g[i];
            return next;
        }
        vec z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - x_prev[i];
        const double alpha = alpha_rule(k, z);
        for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] + (alpha * z[i] - s * g[i]);
        return next;
    };
    auto alpha_of = [&alpha_rule](std::size_t k, const vec& z) { return alpha_rule(k, z); };
    return detail::drive(f, cfg, advance, alpha_of);
}

// Whiplash gradient descent: alpha_k = 1 - sqrt(s) - k s <z_k, z_k>.
// No hyper-parameters beyond s and n.
inline run_result whiplash_descent(const cost_function& f, const optimizer_config& cfg) {
    const double s = cfg.step_size;
    const double alpha_max = 1.0 - std::sqrt(s);
    return momentum_descent(f, cfg, [s, alpha_max](std::size_t k, const vec& z) {
        return alpha_max - static_cast<double>(k) * s * dot(z, z);
    });
}

// x_{k+1} = x_k - s grad f(x_k).
inline run_result gradient_descent(const cost_function& f, const optimizer_config& cfg) {
    const double s = cfg.step_size;
    auto advance = [s](std::size_t, const vec&, const vec& x, const vec& g) {
        vec next(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] - s * g[i];
        return next;
    };
    return detail::drive(f, cfg, advance, [](std::size_t, const vec&) { return 0.0; });
}

// Constant-momentum baseline: x_{k+1} = x_k + beta (x_k - x_{k-1}) - s grad f(x_k),
// structurally the whiplash update with alpha frozen at beta.
inline run_result heavy_ball(const cost_function& f, const optimizer_config& cfg, double beta) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw validation_error("heavy_ball: beta must lie in [0, 1)");
    return momentum_descent(f, cfg, [beta](std::size_t, const vec&) { return beta; });
}

using mu_schedule = std::function<double(std::size_t)>;

// Default momentum schedule k / (k + 3), consistent with the alpha = 3
// continuous-time damping choice.
inline double default_mu(std::size_t k) {
    return static_cast<double>(k) / static_cast<double>(k + 3);
}

// Accelerated baseline:
//   theta_k = y_k - s grad f(y_k)
//   y_{k+1} = theta_k + mu_k (theta_k - theta_{k-1})
// with theta_0 = y_0 = x_0; reported iterates are theta_k. The inner gradient
// step size is fixed to s.
inline run_result nesterov_descent(const cost_function& f, const optimizer_config& cfg,
                                   const mu_schedule& mu = default_mu) {
    cfg.validate(f);
    const double s = cfg.step_size;

    run_result res;
    vec y = cfg.x0;
    vec theta_prev = cfg.x0;
    vec theta = cfg.x0;
    std::size_t k = 0;

    auto make_record = [&](double ft, const vec& gi) {
        iterate_record r;
        r.k = k;
        r.x = theta;
        r.z.resize(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) r.z[i] = theta[i] - theta_prev[i];
        r.alpha = k == 0 ? 0.0 : mu(k);
        r.f_value = ft;
        r.grad_norm = norm(gi);
        return r;
    };

    while (true) {
        const vec g = f.grad(theta);
        const double ft = f.eval(theta);
        if (detail::diverged_point(theta, ft)) {
            res.outcome = verdict::diverged;
            break;
        }
        const bool due = k % cfg.record_stride == 0;
        if (due) res.records.push_back(make_record(ft, g));
        auto stop = [&](verdict v) {
            res.outcome = v;
            if (!due) res.records.push_back(make_record(ft, g));
        };
        if (cfg.stop_grad_tol > 0.0 && norm(g) <= cfg.stop_grad_tol) {
            stop(verdict::converged_grad);
            break;
        }
        if (cfg.stop_dist_tol > 0.0 && dist(theta, *f.minimizer) <= cfg.stop_dist_tol) {
            stop(verdict::converged_dist);
            break;
        }
        if (k == cfg.max_iters) {
            stop(verdict::budget_exhausted);
            break;
        }
        const vec gy = f.grad(y);
        vec theta_next(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) theta_next[i] = y[i] - s * gy[i];
        if (detail::diverged_point(theta_next, f.eval(theta_next))) {
            stop(verdict::diverged);
            ++k;
            break;
        }
        const double mu_k = mu(k + 1);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = theta_next[i] + mu_k * (theta_next[i] - theta[i]);
        theta_prev = std::move(theta);
        theta = std::move(theta_next);
        ++k;
    }

    res.final_x = theta;
    res.final_f = f.eval(theta);
    res.iterations_used = k;
    return res;
}

struct adam_params {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Bias-corrected first/second moment update with the usual defaults.
inline run_result adam(const cost_function& f, const optimizer_config& cfg,
                       const adam_params& p = {}) {
    if (!(p.beta1 >= 0.0 && p.beta1 < 1.0)) throw validation_error("adam: beta1 must lie in [0, 1)");
    if (!(p.beta2 >= 0.0 && p.beta2 < 1.0)) throw validation_error("adam: beta2 must lie in [0, 1)");
    if (!(p.epsilon > 0.0)) throw validation_error("adam: epsilon must be > 0");
    const double s = cfg.step_size;

    vec m, v_est;
    double beta1_pow = 1.0, beta2_pow = 1.0;
    auto advance = [&m, &v_est, &beta1_pow, &beta2_pow, s, p](std::size_t, const vec&,
                                                              const vec& x, const vec& g) {
        if (m.empty()) {
            m = zeros(x.size());
            v_est = zeros(x.size());
        }
        beta1_pow *= p.beta1;
        beta2_pow *= p.beta2;
        vec next(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            m[i] = p.beta1 * m[i] + (1.0 - p.beta1) * g[i];
            v_est[i] = p.beta2 * v_est[i] + (1.0 - p.beta2) * g[i] * g[i];
            const double m_hat = m[i] / (1.0 - beta1_pow);
            const double v_hat = v_est[i] / (1.0 - beta2_pow);
            next[i] = x[i] - s * m_hat / (std::sqrt(v_hat) + p.epsilon);
        }
        return next;
    };
    return detail::drive(f, cfg, advance, [](std::size_t, const vec&) { return 0.0; });
}

}  // namespace whiplash
