#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace whiplash {

// Dense fixed-dimension point/velocity in 64-bit floating point.
using vec = std::vector<double>;

inline double dot(const vec& a, const vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const vec& a) { return dot(a, a); }

inline double norm(const vec& a) { return std::sqrt(norm2(a)); }

inline bool is_finite(const vec& a) {
    for (double c : a)
        if (!std::isfinite(c)) return false;
    return true;
}

inline bool is_finite(double x) { return std::isfinite(x); }

inline vec zeros(std::size_t n) { return vec(n, 0.0); }

inline double dist(const vec& a, const vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace whiplash
