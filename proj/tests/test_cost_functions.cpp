#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "whiplash/cost_function.hpp"
#include "whiplash/spectral.hpp"

using namespace whiplash;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("rosenbrock values and derivatives") {
    const cost_function f = rosenbrock();
    REQUIRE(f.dimension == 2);

    CHECK(f.eval({1.0, 1.0}) == 0.0);
    CHECK(f.eval({0.0, 0.0}) == 1.0);

    const vec g_min = f.grad({1.0, 1.0});
    CHECK(g_min[0] == 0.0);
    CHECK(g_min[1] == 0.0);

    const vec g0 = f.grad({0.0, 0.0});
    CHECK(g0[0] == -2.0);
    CHECK(g0[1] == 0.0);

    const square_matrix h = f.hessian({1.0, 1.0});
    CHECK(h(0, 0) == 802.0);
    CHECK(h(0, 1) == -400.0);
    CHECK(h(1, 0) == -400.0);
    CHECK(h(1, 1) == 200.0);

    REQUIRE(f.minimizer);
    CHECK(norm(f.grad(*f.minimizer)) <= 1e-10);
    CHECK(std::abs(f.eval(*f.minimizer) - *f.min_value) <= 1e-12);
}

TEST_CASE("rosenbrock gradient agrees with central differences") {
    const cost_function f = rosenbrock();
    const vec fd0 = finite_difference_grad(f, {0.0, 0.0}, 1e-6);
    CHECK_THAT(fd0[0], WithinAbs(-2.0, 1e-5));
    CHECK_THAT(fd0[1], WithinAbs(0.0, 1e-5));

    const vec fd_min = finite_difference_grad(f, {1.0, 1.0}, 1e-6);
    CHECK(std::abs(fd_min[0]) <= 1e-6);
    CHECK(std::abs(fd_min[1]) <= 1e-6);
}

TEST_CASE("rosenbrock is nonnegative, zero only at the minimum") {
    const cost_function f = rosenbrock();
    for (double x = -5.0; x <= 5.01; x += 0.5)
        for (double y = -5.0; y <= 5.01; y += 0.5) {
            const double v = f.eval({x, y});
            CHECK(v >= 0.0);
            if (!(x == 1.0 && y == 1.0)) CHECK(v > 0.0);
        }
    CHECK(f.eval({1.0, 1.0}) == 0.0);
}

TEST_CASE("quadratic cost function") {
    SECTION("identity: half squared norm") {
        const cost_function f = quadratic(square_matrix::identity(2), {0.0, 0.0});
        CHECK(f.eval({3.0, 4.0}) == 12.5);
    }
    SECTION("diagonal gradient") {
        const cost_function f = quadratic(square_matrix::diagonal({1.0, 100.0}), {0.0, 0.0});
        const vec g = f.grad({1.0, 1.0});
        CHECK(g[0] == 1.0);
        CHECK(g[1] == 100.0);
    }
    SECTION("minimizer solves Ax = b") {
        const cost_function f = quadratic(square_matrix::diagonal({2.0, 2.0}), {2.0, 2.0});
        REQUIRE(f.minimizer);
        CHECK_THAT((*f.minimizer)[0], WithinAbs(1.0, 1e-14));
        CHECK_THAT((*f.minimizer)[1], WithinAbs(1.0, 1e-14));
        CHECK(norm(f.grad(*f.minimizer)) <= 1e-10);
    }
    SECTION("non-symmetric rejected") {
        square_matrix a(2);
        a(0, 0) = 1.0;
        a(0, 1) = 2.0;
        a(1, 0) = 0.0;
        a(1, 1) = 1.0;
        CHECK_THROWS_WITH(quadratic(a, {0.0, 0.0}), Catch::Matchers::ContainsSubstring("symmetry"));
    }
    SECTION("indefinite rejected") {
        CHECK_THROWS_WITH(quadratic(square_matrix::diagonal({1.0, -1.0}), {0.0, 0.0}),
                          Catch::Matchers::ContainsSubstring("positive-definiteness"));
    }
    SECTION("dimension mismatch rejected") {
        CHECK_THROWS_AS(quadratic(square_matrix::identity(2), {0.0, 0.0, 0.0}), validation_error);
    }
}

TEST_CASE("finite differences on a linear gradient are near exact") {
    const cost_function f = quadratic(square_matrix::identity(2), {0.0, 0.0});
    const vec fd = finite_difference_grad(f, {2.0, 0.0}, 1e-6);
    CHECK_THAT(fd[0], WithinAbs(2.0, 1e-8));
    CHECK_THAT(fd[1], WithinAbs(0.0, 1e-8));

    CHECK_THROWS_AS(finite_difference_grad(f, {2.0, 0.0}, 0.0), validation_error);
}

TEST_CASE("finite differences propagate non-finite evaluations") {
    cost_function bad = rosenbrock();
    bad.eval = [](const vec&) { return std::numeric_limits<double>::infinity(); };
    CHECK_THROWS_AS(finite_difference_grad(bad, {0.0, 0.0}, 1e-6), nonfinite_value_error);
}

TEST_CASE("max_step_size is the Lipschitz reciprocal") {
    CHECK(max_step_size(2.0) == 0.5);
    CHECK(max_step_size(1.0) == 1.0);
    CHECK_THROWS_AS(max_step_size(0.0), std::domain_error);
    CHECK_THROWS_AS(max_step_size(-3.0), std::domain_error);

    // local Lipschitz constant at the minimum = largest Hessian eigenvalue
    const auto eig = symmetric_eigenvalues(hessian_at(rosenbrock(), {1.0, 1.0}));
    CHECK_THAT(max_step_size(eig.back()), WithinRel(1.0 / 1001.6006392325281, 1e-12));
}

TEST_CASE("analytic gradients match the finite-difference oracle at random points") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    const cost_function funcs[] = {rosenbrock(),
                                   quadratic(square_matrix::diagonal({1.0, 100.0}), {1.0, -2.0}),
                                   sphere(3)};
    for (const cost_function& f : funcs) {
        for (int trial = 0; trial < 100; ++trial) {
            vec x(f.dimension);
            for (double& c : x) c = coord(rng);
            const vec ag = f.grad(x);
            const vec fd = finite_difference_grad(f, x, 1e-6);
            CHECK(dist(ag, fd) <= 1e-4 * (1.0 + norm(ag)));
        }
    }
}

TEST_CASE("analytic hessians match the finite-difference jacobian of grad") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    const double h = 1e-5;
    const cost_function funcs[] = {rosenbrock(),
                                   quadratic(square_matrix::diagonal({2.0, 30.0}), {0.0, 0.0})};
    for (const cost_function& f : funcs) {
        for (int trial = 0; trial < 20; ++trial) {
            vec x(f.dimension);
            for (double& c : x) c = coord(rng);
            const square_matrix ah = f.hessian(x);
            vec p = x;
            for (std::size_t j = 0; j < f.dimension; ++j) {
                p[j] = x[j] + h;
                const vec gp = f.grad(p);
                p[j] = x[j] - h;
                const vec gm = f.grad(p);
                p[j] = x[j];
                for (std::size_t i = 0; i < f.dimension; ++i) {
                    const double fd = (gp[i] - gm[i]) / (2.0 * h);
                    CHECK(std::abs(ah(i, j) - fd) <= 1e-3 * (1.0 + std::abs(ah(i, j))));
                }
            }
        }
    }
}

TEST_CASE("function lookup by name") {
    CHECK(function_by_name("rosenbrock").name == "rosenbrock");
    CHECK(function_by_name("sphere").dimension == 2);
    CHECK(function_by_name("sphere:4").dimension == 4);

    const cost_function q = function_by_name("quadratic:1,100");
    CHECK(q.dimension == 2);
    CHECK(q.hessian({0.0, 0.0})(1, 1) == 100.0);

    CHECK_THROWS_AS(function_by_name("himmelblau"), validation_error);
    CHECK_THROWS_AS(function_by_name("quadratic:"), validation_error);
    CHECK_THROWS_AS(function_by_name("quadratic:1,bad"), validation_error);
    CHECK_THROWS_AS(function_by_name("sphere:0"), validation_error);
}

TEST_CASE("sphere basics") {
    const cost_function f = sphere(2);
    CHECK(f.eval({1.0, 2.0}) == 5.0);
    const vec g = f.grad({1.0, 2.0});
    CHECK(g[0] == 2.0);
    CHECK(g[1] == 4.0);
    CHECK(norm(f.grad(*f.minimizer)) <= 1e-10);
}
