#include "axb/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "axb/errors.hpp"

namespace axb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogPi = 1.1447298858494002;
constexpr double kHalfLog2Pi = 0.91893853320467274;

bool is_pole(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

// Stirling series, valid for |z| >= 10 away from the negative axis.
cplx stirling(cplx z) {
    // B_{2k} / (2k (2k-1)) for k = 1..9
    static constexpr std::array<double, 9> c = {
        1.0 / 12.0,          -1.0 / 360.0,         1.0 / 1260.0,
        -1.0 / 1680.0,       1.0 / 1188.0,         -691.0 / 360360.0,
        1.0 / 156.0,         -3617.0 / 122400.0,   43867.0 / 244188.0};
    cplx zinv = 1.0 / z;
    cplx z2 = zinv * zinv;
    cplx acc = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) acc = acc * z2 + c[k];
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + acc * zinv;
}

// Right half-plane: shift up until Stirling is accurate.  A sum of
// principal logs of points with positive real part follows the
// analytic branch.
cplx loggamma_right(cplx z) {
    cplx shift = 0.0;
    while (std::abs(z) < 10.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

// Principal log of sin(pi z) for Im z >= 0, safe for large Im z.
cplx log_sinpi_upper(cplx z) {
    if (z.imag() < 20.0) return std::log(std::sin(kPi * z));
    // sin(pi z) = -e^{-i pi z} (1 - e^{2 i pi z}) / (2i)
    cplx e2 = std::exp(cplx(0.0, 2.0 * kPi) * z);
    cplx scaled = -std::exp(cplx(0.0, -kPi * z.real())) * (1.0 - e2) / cplx(0.0, 2.0);
    return cplx(kPi * z.imag() + std::log(std::abs(scaled)), std::arg(scaled));
}

cplx loggamma_upper(cplx z) {
    if (z.real() >= 0.5) return loggamma_right(z);
    double branch = 2.0 * kPi * std::floor(0.5 * z.real() + 0.25);
    if (z.imag() < 0.0) branch = -branch;
    return cplx(kLogPi, branch) - log_sinpi_upper(z) - loggamma_right(1.0 - z);
}

bool near_nonpos_int(cplx w, double tol) {
    if (std::abs(w.imag()) > tol) return false;
    double r = std::round(w.real());
    return r <= 0.0 && std::abs(w.real() - r) < tol;
}

bool near_int(cplx w, double tol) {
    return std::abs(w.imag()) < tol && std::abs(w.real() - std::round(w.real())) < tol;
}

constexpr double kExactTol = 1e-12;
constexpr double kIntegerSwitch = 1e-6;
constexpr int kMaxTerms = 200000;

std::string describe(cplx a, cplx b, cplx c, double x) {
    std::ostringstream os;
    os.precision(17);
    os << "a=" << a << " b=" << b << " c=" << c << " x=" << x;
    return os.str();
}

cplx gamma_c(cplx z) { return std::exp(log_gamma(z)); }

}  // namespace

cplx log_gamma(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma: non-finite argument");
    if (is_pole(z)) {
        std::ostringstream os;
        os << "log_gamma: pole at z = " << z.real();
        throw DomainError(os.str());
    }
    if (z.imag() < 0.0) return std::conj(loggamma_upper(std::conj(z)));
    return loggamma_upper(z);
}

double log_gamma(double x) {
    if (is_pole(cplx(x, 0.0))) throw DomainError("log_gamma: pole at x = " + std::to_string(x));
    return std::lgamma(x);
}

cplx rgamma(cplx z) {
    if (is_pole(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: arguments must be positive");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace hyp2f1_route {

cplx series(cplx a, cplx b, cplx c, double x) {
    cplx sum = 1.0, term = 1.0;
    int small = 0;
    for (int k = 0; k < kMaxTerms; ++k) {
        term *= (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * x;
        sum += term;
        if (term == 0.0) return sum;
        if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
            throw NumericError("hyp2f1 series overflow: " + describe(a, b, c, x));
        small = std::abs(term) < 1e-16 * std::abs(sum) ? small + 1 : 0;
        if (small == 3) return sum;
    }
    throw NumericError("hyp2f1 series did not converge in " + std::to_string(kMaxTerms) +
                           " terms: " + describe(a, b, c, x),
                       std::abs(sum), std::abs(term));
}

cplx pfaff(cplx a, cplx b, cplx c, double x) {
    double z = x / (x - 1.0);
    return std::pow(cplx(1.0 - x), -a) * series(a, c - b, c, z);
}

cplx inverse_arg(cplx a, cplx b, cplx c, double x) {
    if (near_int(a - b, kExactTol))
        throw DomainError("hyp2f1 inverse-argument route needs a - b non-integer: " +
                          describe(a, b, c, x));
    double w = 1.0 / x;
    cplx gc = gamma_c(c);
    cplx t1 = gc * gamma_c(b - a) * rgamma(b) * rgamma(c - a) * std::pow(cplx(-x), -a) *
              series(a, 1.0 - c + a, 1.0 - b + a, w);
    cplx t2 = gc * gamma_c(a - b) * rgamma(a) * rgamma(c - b) * std::pow(cplx(-x), -b) *
              series(b, 1.0 - c + b, 1.0 - a + b, w);
    return t1 + t2;
}

}  // namespace hyp2f1_route

cplx hyp2f1(cplx a, cplx b, cplx c, double x) {
    if (near_nonpos_int(c, kExactTol))
        throw DomainError("hyp2f1: c is a nonpositive integer: " + describe(a, b, c, x));
    if (!(x <= 0.0)) throw DomainError("hyp2f1: requires x <= 0: " + describe(a, b, c, x));
    if (x == 0.0) return 1.0;

    // terminating cases
    if (near_nonpos_int(a, kExactTol) || near_nonpos_int(b, kExactTol))
        return hyp2f1_route::series(a, b, c, x);
    if (near_nonpos_int(c - a, kExactTol) || near_nonpos_int(c - b, kExactTol))
        return std::pow(cplx(1.0 - x), c - a - b) * hyp2f1_route::series(c - a, c - b, c, x);

    if (x >= -0.5) return hyp2f1_route::series(a, b, c, x);
    if (x >= -2.0) return hyp2f1_route::pfaff(a, b, c, x);
    if (!near_int(a - b, kIntegerSwitch)) return hyp2f1_route::inverse_arg(a, b, c, x);

    // a - b (nearly) an integer: the inverse-argument formula degenerates.
    if (x >= -50.0) return hyp2f1_route::pfaff(a, b, c, x);
    auto round_c = [](cplx w) { return cplx(std::round(w.real()), 0.0); };
    if (near_nonpos_int(c - a, kIntegerSwitch)) {
        cplx ca = round_c(c - a);
        return std::pow(cplx(1.0 - x), c - a - b) * hyp2f1_route::series(ca, c - b, c, x);
    }
    if (near_nonpos_int(c - b, kIntegerSwitch)) {
        cplx cb = round_c(c - b);
        return std::pow(cplx(1.0 - x), c - a - b) * hyp2f1_route::series(c - a, cb, c, x);
    }
    throw NumericError("hyp2f1: integer a - b with x < -50 is not supported: " +
                       describe(a, b, c, x));
}

double tanh_sat(double x) {
    if (x > 19.1) return 1.0;
    if (x < -19.1) return -1.0;
    return std::tanh(x);
}

double gamma_ratio_sq(double v) {
    if (v < 0.0) throw DomainError("gamma_ratio_sq: v must be >= 0");
    return v * tanh_sat(kPi * v);
}

double local_power_integral(double sigma, double b) {
    if (b == 0.0) throw DomainError("local_power_integral: b must be nonzero");
    double ab = std::abs(b);
    // sigma = 1/2 is the one integer case that does not reduce to a polynomial
    if (std::abs(sigma - 0.5) < kIntegerSwitch && ab < 0.1) return std::asinh(1.0 / ab);
    return std::pow(ab, -2.0 * sigma) * hyp2f1(sigma, 0.5, 1.5, -1.0 / (ab * ab)).real();
}

}  // namespace axb
