#include <cmath>
#include <numbers>
#include <random>

#include "axb/errors.hpp"
#include "axb/quadrature.hpp"
#include "axb/specfun.hpp"
#include "doctest.h"

using namespace axb;
using std::numbers::pi;

namespace {

// Contour rotation s = r e^{+-i pi/4}: non-oscillatory for rational psi.
cplx rotated_mk(double alpha, int power, double xi) {
    double sgn = xi >= 0 ? 1.0 : -1.0;
    cplx rot = std::polar(1.0, sgn * pi / 4);
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-15;
    cfg.rel_tol = 1e-13;
    auto f = [&](double r) {
        cplx s = rot * r;
        return std::pow(s, power) * std::pow(1.0 + s * s, -alpha) * std::exp(cplx(0, xi) * s) * rot;
    };
    return integrate_complex(f, 0.0, kInf, cfg).value;
}

}  // namespace

TEST_CASE("Gauss-Legendre and Kronrod exactness") {
    GaussLegendre g(16);
    double s = 0.0, s30 = 0.0;
    for (int i = 0; i < 16; ++i) {
        s += g.weights[i];
        s30 += g.weights[i] * std::pow(g.nodes[i], 30);
    }
    CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s30 == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
    QuadratureConfig cfg;
    // the Kronrod rule is exact for degree 31, the embedded Gauss rule is not
    auto r = integrate([](double x) { return std::pow(x, 30) + 3 * x * x; }, -1, 1, cfg);
    CHECK(r.value == doctest::Approx(2.0 / 31.0 + 2.0).epsilon(1e-14));
    CHECK(r.evaluations < 200);
    CHECK(integrate([](double x) { return 1 + x; }, -1, 1, cfg).evaluations == 21);
}

TEST_CASE("integrate: spec examples") {
    QuadratureConfig cfg;
    CHECK(integrate([](double x) { return std::exp(-x); }, 0, kInf, cfg).value == doctest::Approx(1.0).epsilon(1e-11));
    IntegrateOptions sq;
    sq.sqrt_left = true;
    CHECK(integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1, cfg, sq).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    auto vb = integrate([](double v) { return std::exp(-v) / std::sqrt(std::expm1(v)); }, 0, kInf, cfg, sq).value;
    CHECK(vb == doctest::Approx(beta(0.5, 1.5)).epsilon(1e-10));
    CHECK(vb == doctest::Approx(pi / 2).epsilon(1e-10));
}

TEST_CASE("integrate: envelopes, breakpoints, complex values, reversed limits") {
    QuadratureConfig cfg;
    IntegrateOptions env;
    env.envelope_rate = 1.0;
    CHECK(integrate([](double x) { return std::exp(-x) * x; }, 0, kInf, cfg, env).value ==
          doctest::Approx(1.0).epsilon(1e-10));
    IntegrateOptions bp;
    bp.breakpoints = {0.3};
    CHECK(integrate([](double x) { return std::abs(x - 0.3); }, 0, 1, cfg, bp).value ==
          doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-13));
    auto c = integrate_complex([](double x) { return std::exp(cplx(0, x)); }, 0, pi, cfg).value;
    CHECK(std::abs(c - cplx(0, 2)) < 1e-12);
    CHECK(integrate([](double x) { return x; }, 1, 0, cfg).value == doctest::Approx(-0.5));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -kInf, kInf, cfg).value ==
          doctest::Approx(std::sqrt(pi)).epsilon(1e-11));
    // both endpoints singular
    IntegrateOptions two;
    two.sqrt_left = two.sqrt_right = true;
    CHECK(integrate([](double x) { return 1 / std::sqrt(x * (1 - x)); }, 0, 1, cfg, two).value ==
          doctest::Approx(pi).epsilon(1e-11));
}

TEST_CASE("integrate: non-convergence carries the partial value") {
    QuadratureConfig cfg;
    cfg.max_depth = 20;
    try {
        integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, cfg);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(e.partial() > 5.0);
        CHECK(e.error_estimate() > 0.0);
    }
}

TEST_CASE("integrate: observer and refinement consistency") {
    QuadratureConfig cfg;
    IntegrateOptions o;
    double lo = 1e9, hi = -1e9;
    o.observer = [&](double x) { lo = std::min(lo, x); hi = std::max(hi, x); };
    auto f = [](double x) { return std::sin(3 * x) * std::exp(-0.2 * x) / (1 + x * x); };
    auto r1 = integrate(f, 0.5, 7.0, cfg, o);
    CHECK(lo >= 0.5);
    CHECK(hi <= 7.0);
    QuadratureConfig loose;
    loose.abs_tol = 1e-7;
    loose.rel_tol = 1e-7;
    auto r0 = integrate(f, 0.5, 7.0, loose);
    auto rh = integrate(f, 0.5, 7.0, loose.scaled(0.5));
    CHECK(std::abs(rh.value - r0.value) <= r0.err_est);
    CHECK(std::abs(r1.value - r0.value) <= r0.err_est);
    CHECK_THROWS_AS(integrate(f, 0, 1, QuadratureConfig{.abs_tol = -1}), DomainError);
}

TEST_CASE("spherical Bessel batch") {
    std::array<double, 16> out;
    for (double x : {1e-8, 0.003, 0.3, 1.0, pi, 7.0, 15.5, 16.0, 40.0, 200.0}) {
        sph_bessel_batch(x, out);
        for (unsigned k = 0; k < 16; ++k) {
            double want = std::sph_bessel(k, x);
            CHECK(std::abs(out[k] - want) <= 1e-13 * std::max(std::abs(want), 1e-300) + 1e-15);
        }
        sph_bessel_batch(-x, out);
        CHECK(out[3] == doctest::Approx(-std::sph_bessel(3u, x)).epsilon(1e-12));
    }
}

TEST_CASE("oscillatory integral") {
    // int_0^10 x^2 e^{i w x} dx, closed form
    double w = 50.0, b = 10.0;
    cplx iw(0, w);
    cplx want = std::exp(iw * b) * (b * b / iw - 2.0 * b / (iw * iw) + 2.0 / (iw * iw * iw)) - 2.0 / (iw * iw * iw);
    QuadratureConfig cfg;
    auto r = integrate_oscillatory([](double x) { return cplx(x * x); }, w, 0, b, cfg);
    CHECK(std::abs(r.value - want) < 1e-10 * std::abs(want));
    cfg.oscillation_mode = OscillationMode::filon;
    auto f = integrate_oscillatory([](double x) { return cplx(std::exp(-x)); }, 0.7, 0, 30, cfg);
    cplx wf = (std::exp(cplx(-1, 0.7) * 30.0) - 1.0) / cplx(-1, 0.7);
    CHECK(std::abs(f.value - wf) < 1e-11);
}

TEST_CASE("half-line transforms: values at 0 and rotated-contour oracle") {
    QuadratureConfig cfg;
    auto p2 = PsiDescriptor::rational_decay(2.0);
    CHECK(std::abs(inverse_fourier_mk(p2, 0, 1, 0.0, cfg) - 0.5) < 1e-11);
    CHECK(std::abs(inverse_fourier_mk(p2, 1, 2, 0.0, cfg) - pi / 4) < 1e-11);
    CHECK(inverse_fourier_mk(PsiDescriptor::zero(), 2, 3, 1.7, cfg) == cplx(0.0));
    CHECK_THROWS_AS(inverse_fourier_mk(p2, 1, 3, 0.0, cfg), DomainError);
    CHECK_THROWS_AS(inverse_fourier_mk(PsiDescriptor::rational_decay(1.0), 1, 2, 0.0, cfg), DomainError);

    auto p4 = PsiDescriptor::rational_decay(4.0);
    for (int power : {0, 1, 2}) {
        for (double xi : {-250.0, -31.0, -2.5, 0.4, 3.0, 17.0, 120.0, 480.0}) {
            cplx got = inverse_fourier_mk(p4, power > 0 ? power - 1 : 0, power, xi, cfg);
            cplx want = rotated_mk(4.0, power, xi);
            CHECK(std::abs(got - want) <= 1e-10 * std::abs(want) + 1e-14);
        }
    }
}

TEST_CASE("half-line transforms: decay law and conjugate symmetry") {
    QuadratureConfig cfg;
    auto psi = PsiDescriptor::rational_decay(4.0);
    for (int k : {0, 1}) {
        for (int power : {k, k + 1}) {
            double xs[2] = {5.0, 500.0};
            double ys[2];
            for (int i = 0; i < 2; ++i) ys[i] = std::abs(inverse_fourier_mk(psi, k, power, xs[i], cfg));
            double slope = std::log(ys[1] / ys[0]) / std::log(xs[1] / xs[0]);
            CHECK(slope <= (power == k + 1 ? -2.0 : -1.0) + 0.1);
            cplx a = inverse_fourier_mk(psi, k, power, 7.3, cfg);
            cplx b = inverse_fourier_mk(psi, k, power, -7.3, cfg);
            CHECK(std::abs(b - std::conj(a)) < 1e-10);
        }
    }
}

TEST_CASE("compact and tabulated psi") {
    QuadratureConfig cfg;
    // indicator of [0,1]: int_0^1 s e^{i xi s} ds
    auto ind = PsiDescriptor::tabulated({0.0, 1.0}, {1.0, 1.0});
    double xi = 13.0;
    cplx ix(0, xi);
    cplx want = std::exp(ix) / ix - (std::exp(ix) - 1.0) / (ix * ix);
    CHECK(std::abs(inverse_fourier_mk(ind, 0, 1, xi, cfg) - want) < 1e-12);
    auto bump = PsiDescriptor::compact_bump(0.5, 2.0);
    CHECK(bump(0.4) == 0.0);
    CHECK(bump(1.25) == doctest::Approx(1.0));
    auto direct = integrate([&](double s) { return s * bump(s) * std::cos(9.0 * s); }, 0.5, 2.0, cfg).value;
    CHECK(inverse_fourier_mk(bump, 0, 1, 9.0, cfg).real() == doctest::Approx(direct).epsilon(1e-9));
    CHECK(bump.meets_wave_hypotheses(1));
    CHECK_FALSE(ind.meets_wave_hypotheses(1));
    CHECK(PsiDescriptor::rational_decay(4.0).meets_wave_hypotheses(1));
    CHECK_FALSE(PsiDescriptor::rational_decay(1.0).meets_wave_hypotheses(2));
    CHECK(PsiDescriptor::rational_decay(4.0).derivative_bound(4) > 0.0);
    CHECK_THROWS_AS(PsiDescriptor::tabulated({0.0, 0.0}, {1.0, 1.0}), DomainError);
}

TEST_CASE("Fourier table interpolation") {
    QuadratureConfig cfg;
    auto psi = PsiDescriptor::rational_decay(4.0);
    FourierTable tab(psi, 1, 60.0, 0.02, cfg);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-59.0, 59.0);
    double scale = std::abs(inverse_fourier_mk(psi, 0, 1, 0.0, cfg));
    for (int i = 0; i < 40; ++i) {
        double xi = U(rng);
        CHECK(std::abs(tab(xi) - inverse_fourier_mk(psi, 0, 1, xi, cfg)) < 1e-9 * scale);
    }
    // outside the grid the direct transform takes over
    CHECK(std::abs(tab(75.0) - inverse_fourier_mk(psi, 0, 1, 75.0, cfg)) < 1e-12);
}
