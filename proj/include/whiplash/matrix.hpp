#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "whiplash/vec.hpp"

namespace whiplash {

// Small dense square matrix, row-major. All matrices in this library are
// symmetric Hessians or their shifts; no general linear algebra is needed.
struct square_matrix {
    std::size_t n = 0;
    std::vector<double> a;  // n*n, row-major

    square_matrix() = default;
    explicit square_matrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static square_matrix identity(std::size_t dim) {
        square_matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static square_matrix diagonal(const vec& d) {
        square_matrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
};

inline bool operator==(const square_matrix& x, const square_matrix& y) {
    return x.n == y.n && x.a == y.a;
}

inline double max_abs(const square_matrix& m) {
    double v = 0.0;
    for (double c : m.a) v = std::max(v, std::abs(c));
    return v;
}

inline double max_asymmetry(const square_matrix& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = i + 1; j < m.n; ++j)
            v = std::max(v, std::abs(m(i, j) - m(j, i)));
    return v;
}

inline vec matvec(const square_matrix& m, const vec& x) {
    vec y(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// Lower-triangular Cholesky factor, or nullopt if the matrix is not
// positive definite. Doubles as the PD test for quadratic cost functions.
inline std::optional<square_matrix> cholesky(const square_matrix& m) {
    square_matrix l(m.n);
    for (std::size_t j = 0; j < m.n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) return std::nullopt;
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < m.n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

// Solves A x = b given the Cholesky factor L of A.
inline vec cholesky_solve(const square_matrix& l, const vec& b) {
    const std::size_t n = l.n;
    vec y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    vec x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
        x[i] = s / l(i, i);
    }
    return x;
}

}  // namespace whiplash
