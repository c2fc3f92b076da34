#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "whiplash/cost_function.hpp"
#include "whiplash/errors.hpp"
#include "whiplash/format.hpp"
#include "whiplash/integrators.hpp"
#include "whiplash/matrix.hpp"

namespace whiplash {

struct spectrum_report {
    std::vector<double> eigenvalues;  // ascending
    double condition_number = 0.0;    // lambda_max / lambda_min
    double shift = 0.0;               // eta applied, 0 if none
};

// Hessian at x: analytic when available, otherwise the symmetrised
// finite-difference Jacobian of the gradient with h = 1e-5.
inline square_matrix hessian_at(const cost_function& f, const vec& x, double fd_step = 1e-5) {
    square_matrix h(f.dimension);
    if (f.has_hessian()) {
        h = f.hessian(x);
    } else {
        vec p = x;
        for (std::size_t j = 0; j < f.dimension; ++j) {
            const double xj = x[j];
            p[j] = xj + fd_step;
            const vec gp = f.grad(p);
            p[j] = xj - fd_step;
            const vec gm = f.grad(p);
            p[j] = xj;
            for (std::size_t i = 0; i < f.dimension; ++i)
                h(i, j) = (gp[i] - gm[i]) / (2.0 * fd_step);
        }
    }
    // symmetrise as (H + H') / 2
    for (std::size_t i = 0; i < h.n; ++i)
        for (std::size_t j = i + 1; j < h.n; ++j) {
            const double m = 0.5 * (h(i, j) + h(j, i));
            h(i, j) = h(j, i) = m;
        }
    for (double c : h.a)
        if (!std::isfinite(c))
            throw nonfinite_value_error("hessian_at: non-finite entry for " + f.name);
    return h;
}

namespace detail {

inline void require_symmetric(const square_matrix& m) {
    if (max_asymmetry(m) > 1e-9)
        throw validation_error("symmetric_eigenvalues: matrix is not symmetric within 1e-9");
}

inline double off_diagonal_norm(const square_matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j)
            if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

inline double frobenius(const square_matrix& m) {
    double s = 0.0;
    for (double c : m.a) s += c * c;
    return std::sqrt(s);
}

}  // namespace detail

// Eigenvalues of a symmetric matrix, ascending. 2x2 uses the closed form via
// trace and determinant (the small eigenvalue from det/lambda_max to dodge
// cancellation); larger matrices use cyclic Jacobi rotations driven to
// off-diagonal norm <= 1e-12 relative to the Frobenius norm.
inline std::vector<double> symmetric_eigenvalues(const square_matrix& m) {
    detail::require_symmetric(m);
    if (m.n == 0) return {};
    if (m.n == 1) return {m(0, 0)};
    if (m.n == 2) {
        const double tr = m(0, 0) + m(1, 1);
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        const double big = 0.5 * (tr + (tr >= 0.0 ? disc : -disc));
        double a = big;
        double b = big != 0.0 ? det / big : 0.5 * (tr - disc);
        if (a > b) std::swap(a, b);
        return {a, b};
    }

    square_matrix work = m;
    const double stop = 1e-12 * std::max(1.0, detail::frobenius(m));
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (detail::off_diagonal_norm(work) <= stop) break;
        for (std::size_t p = 0; p < work.n; ++p) {
            for (std::size_t q = p + 1; q < work.n; ++q) {
                const double apq = work(p, q);
                if (apq == 0.0) continue;
                const double theta = (work(q, q) - work(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < work.n; ++i) {
                    const double aip = work(i, p), aiq = work(i, q);
                    work(i, p) = c * aip - s * aiq;
                    work(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < work.n; ++i) {
                    const double api = work(p, i), aqi = work(q, i);
                    work(p, i) = c * api - s * aqi;
                    work(q, i) = s * api + c * aqi;
                }
                work(p, q) = work(q, p) = 0.0;
            }
        }
    }
    std::vector<double> eig(work.n);
    for (std::size_t i = 0; i < work.n; ++i) eig[i] = work(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

// lambda_max / lambda_min for a positive-definite symmetric matrix.
inline double condition_number(const square_matrix& m) {
    const std::vector<double> eig = symmetric_eigenvalues(m);
    if (eig.empty() || eig.front() <= 0.0)
        throw indefinite_matrix_error(
            "condition_number: matrix has a non-positive eigenvalue (saddle or singular)");
    return eig.back() / eig.front();
}

// Spectrum of M - eta I: the eigenvalues of M shifted down by eta.
inline spectrum_report shifted_spectrum(const square_matrix& m, double eta) {
    spectrum_report rep;
    rep.eigenvalues = symmetric_eigenvalues(m);
    for (double& v : rep.eigenvalues) v -= eta;
    rep.shift = eta;
    rep.condition_number =
        rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.back() / rep.eigenvalues.front();
    return rep;
}

inline spectrum_report spectrum_of(const square_matrix& m) { return shifted_spectrum(m, 0.0); }

// Minimum real part of the linearised constant-damping system poles after an
// eta shift: sigma = -gamma/2 - eta. A design diagnostic, not asserted
// against nonlinear trajectories.
inline double convergence_rate_sigma(double gamma, double eta) { return -gamma / 2.0 - eta; }

struct monotonicity_violation {
    std::size_t index = 0;  // sample index where W increased
    double t = 0.0;
    double w_before = 0.0;
    double w_after = 0.0;
    double allowed = 0.0;  // integrator tolerance for this pair
};

// Lyapunov slack constant, calibrated on damped-quadratic symplectic runs
// (gamma in {0.5, 1, 5}, eigenvalues in {1, 100}, h in {1e-2, 1e-3}): the
// worst observed step increase of W was 9.6e-4 * h * (1 + |v|^2); 0.01
// leaves a 10x margin.
inline constexpr double monotonicity_slack_c = 0.01;

// Flags adjacent recorded pairs where W rose by more than the integrator
// tolerance eps = C * dt * (1 + |v|^2), dt being the recorded spacing.
// An empty list means monotone within tolerance. Samples with no W (NaN)
// are skipped.
inline std::vector<monotonicity_violation> lyapunov_monotonicity_report(
    const trajectory& traj, double slack_c = monotonicity_slack_c) {
    std::vector<monotonicity_violation> out;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const trajectory_sample& a = traj.samples[i];
        const trajectory_sample& b = traj.samples[i + 1];
        if (std::isnan(a.lyapunov_w) || std::isnan(b.lyapunov_w)) continue;
        const double dt = b.t - a.t;
        const double allowed = slack_c * dt * (1.0 + norm2(a.v));
        if (b.lyapunov_w - a.lyapunov_w > allowed)
            out.push_back({i + 1, b.t, a.lyapunov_w, b.lyapunov_w, allowed});
    }
    return out;
}

inline std::string spectrum_csv_header() { return "lambda_min,lambda_max,kappa,eta"; }

inline std::string spectrum_csv_row(const spectrum_report& rep) {
    std::ostringstream out;
    out << format_double(rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.front()) << ','
        << format_double(rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.back()) << ','
        << format_double(rep.condition_number) << ',' << format_double(rep.shift);
    return out.str();
}

// Aligned two-column text table of the report.
inline std::string spectrum_table(const spectrum_report& rep) {
    std::ostringstream out;
    auto row = [&out](const std::string& label, const std::string& value) {
        out << label;
        for (std::size_t i = label.size(); i < 14; ++i) out << ' ';
        out << value << '\n';
    };
    std::ostringstream eigs;
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        if (i) eigs << ", ";
        eigs << format_double(rep.eigenvalues[i]);
    }
    row("eigenvalues", eigs.str());
    row("kappa", format_double(rep.condition_number));
    row("eta", format_double(rep.shift));
    return out.str();
}

}  // namespace whiplash
