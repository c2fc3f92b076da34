#pragma once

#include <cmath>
#include <string>

#include "whiplash/errors.hpp"
#include "whiplash/vec.hpp"

namespace whiplash {

// Damping coefficient rule gamma(t, v) for the inertial system
// x'' + gamma(t, x') x' + grad f(x) = 0.
struct damping_law {
    enum class family { constant, nesterov, attouch, whiplash };

    family kind = family::whiplash;
    double gamma0 = 1.0;  // constant: heavy-ball regime
    double alpha = 3.0;   // nesterov: alpha / t
    double r = 1.0;       // attouch: r * |v|^(p-2)
    double p = 4.0;

    static damping_law constant(double gamma0) {
        if (!(gamma0 >= 0.0)) throw validation_error("damping: constant gamma0 must be >= 0");
        damping_law law;
        law.kind = family::constant;
        law.gamma0 = gamma0;
        return law;
    }
    static damping_law nesterov(double alpha = 3.0) {
        if (!(alpha > 0.0)) throw validation_error("damping: nesterov alpha must be > 0");
        damping_law law;
        law.kind = family::nesterov;
        law.alpha = alpha;
        return law;
    }
    static damping_law attouch(double r, double p) {
        if (!(r > 0.0)) throw validation_error("damping: attouch r must be > 0");
        if (!(p >= 2.0)) throw validation_error("damping: attouch p must be >= 2");
        damping_law law;
        law.kind = family::attouch;
        law.r = r;
        law.p = p;
        return law;
    }
    // 1 + t <v, v>; no parameters.
    static damping_law whiplash() {
        damping_law law;
        law.kind = family::whiplash;
        return law;
    }

    std::string name() const {
        switch (kind) {
            case family::constant: return "constant";
            case family::nesterov: return "nesterov";
            case family::attouch: return "attouch";
            case family::whiplash: return "whiplash";
        }
        return "?";
    }
};

inline double damping_value(const damping_law& law, double t, const vec& v) {
    switch (law.kind) {
        case damping_law::family::constant:
            return law.gamma0;
        case damping_law::family::nesterov:
            if (!(t > 0.0))
                throw singular_damping_error("damping: nesterov alpha/t is singular at t <= 0");
            return law.alpha / t;
        case damping_law::family::attouch:
            return law.r * std::pow(norm(v), law.p - 2.0);
        case damping_law::family::whiplash:
            return 1.0 + t * dot(v, v);
    }
    return 0.0;
}

}  // namespace whiplash
