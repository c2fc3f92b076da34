#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "whiplash/errors.hpp"
#include "whiplash/matrix.hpp"
#include "whiplash/vec.hpp"

namespace whiplash {

// Evaluable objective with analytic gradient, optional analytic Hessian and
// optional known minimizer. Immutable after construction; evaluation holds no
// state, so instances are safe to share across concurrent runs.
struct cost_function {
    std::string name;
    std::size_t dimension = 0;
    std::function<double(const vec&)> eval;
    std::function<vec(const vec&)> grad;
    std::function<square_matrix(const vec&)> hessian;  // empty if unavailable
    std::optional<vec> minimizer;
    std::optional<double> min_value;

    bool has_hessian() const { return static_cast<bool>(hessian); }
};

// f(x,y) = (1-x)^2 + 100(y-x^2)^2, global minimum 0 at (1,1).
inline cost_function rosenbrock() {
    cost_function f;
    f.name = "rosenbrock";
    f.dimension = 2;
    f.eval = [](const vec& p) {
        const double x = p[0], y = p[1];
        const double u = 1.0 - x, w = y - x * x;
        return u * u + 100.0 * w * w;
    };
    f.grad = [](const vec& p) {
        const double x = p[0], y = p[1];
        const double w = y - x * x;
        return vec{-2.0 * (1.0 - x) - 400.0 * x * w, 200.0 * w};
    };
    f.hessian = [](const vec& p) {
        const double x = p[0], y = p[1];
        square_matrix h(2);
        h(0, 0) = 2.0 - 400.0 * y + 1200.0 * x * x;
        h(0, 1) = h(1, 0) = -400.0 * x;
        h(1, 1) = 200.0;
        return h;
    };
    f.minimizer = vec{1.0, 1.0};
    f.min_value = 0.0;
    return f;
}

// f(x) = 1/2 x'Ax - b'x with A symmetric positive definite.
inline cost_function quadratic(const square_matrix& A, const vec& b) {
    if (b.size() != A.n)
        throw validation_error("quadratic: b dimension " + std::to_string(b.size()) +
                               " does not match A dimension " + std::to_string(A.n));
    const double scale = std::max(1.0, max_abs(A));
    if (max_asymmetry(A) > 1e-12 * scale)
        throw validation_error("quadratic: matrix failed the symmetry check");
    auto L = cholesky(A);
    if (!L)
        throw validation_error("quadratic: matrix failed the positive-definiteness check");
    vec xstar = cholesky_solve(*L, b);

    cost_function f;
    f.name = "quadratic";
    f.dimension = A.n;
    f.eval = [A, b](const vec& x) {
        return 0.5 * dot(x, matvec(A, x)) - dot(b, x);
    };
    f.grad = [A, b](const vec& x) {
        vec g = matvec(A, x);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= b[i];
        return g;
    };
    f.hessian = [A](const vec&) { return A; };
    f.min_value = f.eval(xstar);
    f.minimizer = std::move(xstar);
    return f;
}

// f(x) = sum x_i^2, minimum 0 at the origin.
inline cost_function sphere(std::size_t dimension = 2) {
    cost_function f;
    f.name = "sphere";
    f.dimension = dimension;
    f.eval = [](const vec& x) { return norm2(x); };
    f.grad = [](const vec& x) {
        vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
        return g;
    };
    f.hessian = [dimension](const vec&) {
        square_matrix h = square_matrix::identity(dimension);
        for (std::size_t i = 0; i < dimension; ++i) h(i, i) = 2.0;
        return h;
    };
    f.minimizer = zeros(dimension);
    f.min_value = 0.0;
    return f;
}

// Central-difference gradient, the test-time cross-check for analytic grads.
inline vec finite_difference_grad(const cost_function& f, const vec& x, double h = 1e-6) {
    if (!(h > 0.0)) throw validation_error("finite_difference_grad: h must be > 0");
    vec g(x.size(), 0.0);
    vec p = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        p[i] = xi + h;
        const double fp = f.eval(p);
        p[i] = xi - h;
        const double fm = f.eval(p);
        p[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw nonfinite_value_error("finite_difference_grad: non-finite evaluation of " +
                                        f.name + " at component " + std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Largest step size satisfying the Lipschitz condition 0 < s <= 1/L.
inline double max_step_size(double L) {
    if (!(L > 0.0)) throw std::domain_error("max_step_size: L must be > 0");
    return 1.0 / L;
}

// Resolves "rosenbrock", "sphere", "sphere:<dim>" or "quadratic:<diag spec>"
// (comma-separated positive diagonal entries, b = 0), for CLI selection.
inline cost_function function_by_name(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "rosenbrock") {
        if (!tail.empty()) throw validation_error("function: rosenbrock takes no parameters");
        return rosenbrock();
    }
    if (head == "sphere") {
        if (tail.empty()) return sphere();
        std::size_t pos = 0;
        const int d = std::stoi(tail, &pos);
        if (pos != tail.size() || d < 1)
            throw validation_error("function: bad sphere dimension '" + tail + "'");
        return sphere(static_cast<std::size_t>(d));
    }
    if (head == "quadratic") {
        if (tail.empty())
            throw validation_error("function: quadratic requires a diagonal spec, e.g. quadratic:1,100");
        vec d;
        std::stringstream ss(tail);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t pos = 0;
                d.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw validation_error("function: bad quadratic diagonal entry '" + item + "'");
            }
        }
        if (d.empty()) throw validation_error("function: empty quadratic diagonal spec");
        return quadratic(square_matrix::diagonal(d), zeros(d.size()));
    }
    throw validation_error("function: unknown function '" + spec + "'");
}

}  // namespace whiplash
