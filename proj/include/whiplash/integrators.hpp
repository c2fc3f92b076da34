#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "whiplash/cost_function.hpp"
#include "whiplash/damping.hpp"
#include "whiplash/errors.hpp"
#include "whiplash/vec.hpp"

namespace whiplash {

struct continuous_state {
    double t = 0.0;
    vec x;
    vec v;
};

// Any non-finite component, or |x| beyond this radius, counts as divergence.
// Stiff Rosenbrock dynamics explode fast under explicit Euler with large h;
// the harness records the event instead of crashing.
inline constexpr double divergence_radius = 1e12;

inline bool diverged_state(const continuous_state& s) {
    return !is_finite(s.x) || !is_finite(s.v) || norm(s.x) > divergence_radius;
}

struct trajectory_sample {
    double t = 0.0;
    vec x;
    vec v;
    double f_value = 0.0;
    double gamma_value = 0.0;
    double lyapunov_w = 0.0;  // NaN when the function has no known minimum
};

struct trajectory {
    std::vector<trajectory_sample> samples;
    std::string meta;  // producing run-config identifier
    bool diverged = false;
    std::size_t divergence_step = 0;  // step index at which divergence was detected
    std::size_t steps_taken = 0;
};

enum class integrator_kind { explicit_euler, symplectic_euler };

inline std::string integrator_name(integrator_kind k) {
    return k == integrator_kind::explicit_euler ? "explicit" : "symplectic";
}

// W = 1/2 |v|^2 + f(x) - f*.
inline double lyapunov_energy(const continuous_state& s, const cost_function& f) {
    if (!f.min_value)
        throw unsupported_diagnostic_error("lyapunov_energy: " + f.name +
                                           " has no known minimum value");
    return 0.5 * norm2(s.v) + f.eval(s.x) - *f.min_value;
}

// ode1: position advances with the old velocity.
inline continuous_state step_explicit_euler(const continuous_state& s, double h,
                                            const cost_function& f, const damping_law& law) {
    const double gamma = damping_value(law, s.t, s.v);
    const vec g = f.grad(s.x);
    continuous_state out;
    out.t = s.t + h;
    out.x.resize(s.x.size());
    out.v.resize(s.v.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double a = -gamma * s.v[i] - g[i];
        out.x[i] = s.x[i] + h * s.v[i];
        out.v[i] = s.v[i] + h * a;
    }
    return out;
}

// Semi-implicit: velocity first, position advances with the new velocity.
inline continuous_state step_symplectic_euler(const continuous_state& s, double h,
                                              const cost_function& f, const damping_law& law) {
    const double gamma = damping_value(law, s.t, s.v);
    const vec g = f.grad(s.x);
    continuous_state out;
    out.t = s.t + h;
    out.x.resize(s.x.size());
    out.v.resize(s.v.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        out.v[i] = s.v[i] + h * (-gamma * s.v[i] - g[i]);
        out.x[i] = s.x[i] + h * out.v[i];
    }
    return out;
}

// Fixed-step integration of x'' + gamma(t,v) v + grad f(x) = 0, recording every
// record_stride-th sample plus the first and last. Nesterov damping starts at
// t0 = h to avoid the alpha/t singularity; everything else starts at t0 = 0.
// Divergence truncates the trajectory and sets the flag; it is not fatal.
inline trajectory simulate(const cost_function& f, const damping_law& law, const vec& x0,
                           const vec& v0, double h, double t_end,
                           integrator_kind integrator = integrator_kind::explicit_euler,
                           std::size_t record_stride = 100, const std::string& meta = "") {
    if (!(h > 0.0)) throw validation_error("simulate: step size must be > 0");
    if (x0.size() != f.dimension)
        throw validation_error("simulate: x0 dimension does not match " + f.name);
    if (v0.size() != x0.size())
        throw validation_error("simulate: v0 dimension does not match x0");
    if (record_stride == 0) throw validation_error("simulate: record_stride must be >= 1");

    const double t0 = law.kind == damping_law::family::nesterov ? h : 0.0;
    if (!(t_end > t0)) throw validation_error("simulate: t_end must exceed the start time");
    const auto n_steps = static_cast<std::size_t>(std::llround((t_end - t0) / h));

    trajectory traj;
    traj.meta = meta;
    continuous_state s{t0, x0, v0};

    auto record = [&](const continuous_state& st) {
        trajectory_sample sample;
        sample.t = st.t;
        sample.x = st.x;
        sample.v = st.v;
        sample.f_value = f.eval(st.x);
        sample.gamma_value = damping_value(law, st.t, st.v);
        sample.lyapunov_w = f.min_value ? 0.5 * norm2(st.v) + sample.f_value - *f.min_value
                                        : std::numeric_limits<double>::quiet_NaN();
        traj.samples.push_back(std::move(sample));
    };

    record(s);
    for (std::size_t k = 0; k < n_steps; ++k) {
        continuous_state next = integrator == integrator_kind::explicit_euler
                                    ? step_explicit_euler(s, h, f, law)
                                    : step_symplectic_euler(s, h, f, law);
        next.t = t0 + static_cast<double>(k + 1) * h;  // avoid accumulated t drift
        if (diverged_state(next)) {
            traj.diverged = true;
            traj.divergence_step = k + 1;
            traj.steps_taken = k;
            if (traj.samples.back().t != s.t) record(s);  // last finite state
            return traj;
        }
        s = std::move(next);
        if ((k + 1) % record_stride == 0 && k + 1 != n_steps) record(s);
    }
    traj.steps_taken = n_steps;
    if (n_steps > 0) record(s);
    return traj;
}

}  // namespace whiplash
