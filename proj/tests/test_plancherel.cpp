#include <cmath>
#include <numbers>
#include <vector>

#include "axb/errors.hpp"
#include "axb/plancherel.hpp"
#include "doctest.h"

using namespace axb;

namespace {
std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
    return g;
}
}  // namespace

TEST_CASE("closed form values") {
    CHECK(rho_closed(2, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rho_closed(1, 1.0) == doctest::Approx(0.99627207622074994).epsilon(1e-14));
    CHECK(rho_closed(4, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    // n = 3: (1/4 + u) th(pi sqrt u)
    CHECK(rho_closed(3, 4.0) == doctest::Approx(4.25 * std::tanh(2 * std::numbers::pi)).epsilon(1e-15));
    for (int n = 1; n <= 6; ++n) CHECK(rho_closed(n, 0.0) == 0.0);
    CHECK_THROWS_AS(rho_closed(0, 1.0), DomainError);
    CHECK_THROWS_AS(rho_closed(2, -1.0), DomainError);
}

TEST_CASE("c-function route") {
    // |Gamma(1 + 2i)|^2 = |2i|^2 |Gamma(2i)|^2
    CHECK(rho_via_c(2, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rho_via_c(1, 1.0) == doctest::Approx(std::tanh(std::numbers::pi)).epsilon(1e-12));
    CHECK(rho_via_c(3, 0.0) == 0.0);
    for (int n = 1; n <= 6; ++n)
        for (double u : log_grid(1e-3, 1e4, 50)) {
            double a = rho_closed(n, u), b = rho_via_c(n, u);
            CHECK(std::abs(a - b) <= 1e-10 * a);
        }
}

TEST_CASE("density asymptotics and shape") {
    for (int n = 1; n <= 6; ++n) {
        double big = 1e6;
        CHECK(std::abs(rho_closed(n, big) / std::pow(big, 0.5 * (n - 1)) - 1.0) < 1e-2);
        double small = 1e-8;
        CHECK(std::abs(rho_closed(n, small) / std::sqrt(small) / small_u_constant(n) - 1.0) < 1e-3);
        double prev = 0.0;
        for (double u : log_grid(1e-6, 1e6, 200)) {
            double r = rho_closed(n, u);
            // th(pi sqrt u) rounds to 1 for n = 1 once u is large
            if (n > 1 || u < 10.0) CHECK(r > prev);
            else CHECK(r >= prev);
            prev = r;
        }
    }
    CHECK(small_u_constant(1) == doctest::Approx(std::numbers::pi));
    CHECK(small_u_constant(6) == doctest::Approx(4.0));
    CHECK(small_u_constant(5) == doctest::Approx(std::numbers::pi * 0.25 * 2.25));
}

TEST_CASE("kernel route") {
    // n = 2 the integral telescopes to -sqrt(u)
    for (double u : {1.0, 4.0, 9.0}) CHECK(std::abs(-rho_kernel_integral(2, u) - std::sqrt(u)) < 1e-6);
    // n = 1: int_0^inf sin(w v) / sh(v / 2) dv = pi th(pi w)
    for (double u : {0.25, 1.0, 4.0, 30.0}) {
        double want = std::numbers::pi * std::tanh(std::numbers::pi * std::sqrt(u)) / std::numbers::sqrt2;
        CHECK(std::abs(rho_kernel_integral(1, u) - want) < 1e-9 * want);
    }
    // vanishes at the origin
    for (int n = 1; n <= 4; ++n) {
        CHECK(std::abs(rho_via_kernel(n, 1e-10)) < 1e-4);
        CHECK(std::abs(rho_via_kernel(n, 1e-6)) < std::abs(rho_via_kernel(n, 1e-4)));
    }
    // one positive factor per n
    for (int n = 1; n <= 6; ++n) {
        auto f = fit_kernel_scale(n, {0.25, 0.5, 1.0, 2.0, 4.0, 9.0});
        CHECK(f.scale > 0.0);
        CHECK(f.max_rel_residual < 1e-6);
    }
    CHECK(ic_l(2) == doctest::Approx(-1.0 / (4 * std::numbers::pi * std::numbers::pi)).epsilon(1e-14));
    CHECK(parse_route("cfun") == DensityRoute::c_function);
    CHECK_THROWS_AS(parse_route("nope"), DomainError);
}
