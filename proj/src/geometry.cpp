#include "axb/geometry.hpp"

#include <cmath>
#include <numbers>

#include "axb/errors.hpp"

namespace axb {

namespace {

constexpr double kLog2 = std::numbers::ln2;

void check_dim(const GroupPoint& p, const GroupPoint& q) {
    if (p.dim() != q.dim())
        throw DomainError("group points of different dimension: " + std::to_string(p.dim()) + " vs " +
                          std::to_string(q.dim()));
}

double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// 2 asinh(sqrt(q)) given log q
double radius_from_logq(double logq) {
    if (logq == -kInf) return 0.0;
    if (logq > 60.0) return 2.0 * kLog2 + logq;
    return 2.0 * std::asinh(std::exp(0.5 * logq));
}

}  // namespace

double GroupPoint::y_norm() const {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
}

GroupPoint multiply(const GroupPoint& p, const GroupPoint& q) {
    check_dim(p, q);
    GroupPoint r{p.x + q.x, p.y};
    double ex = std::exp(p.x);
    for (std::size_t i = 0; i < r.y.size(); ++i) r.y[i] += ex * q.y[i];
    return r;
}

GroupPoint inverse(const GroupPoint& p) {
    GroupPoint r{-p.x, p.y};
    double e = std::exp(-p.x);
    for (double& v : r.y) v = -e * v;
    return r;
}

double modular(const GroupPoint& p, int n) { return std::exp(-n * p.x); }

double log_sinh(double y) {
    if (!(y > 0.0)) return y == 0.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
    if (y > 20.0) return y - kLog2 + std::log1p(-std::exp(-2.0 * y));
    return std::log(std::sinh(y));
}

double log_ch_diff(double R, double x) {
    // ch R - ch x = 2 sh((R+x)/2) sh((R-x)/2)
    double ax = std::abs(x);
    return kLog2 + log_sinh(0.5 * (R + ax)) + log_sinh(0.5 * (R - ax));
}

double distance_xr(double x, double r) {
    if (r == 0.0) return std::abs(x);
    // sh^2(R/2) = sh^2(x/2) + r^2 e^{-x} / 4
    double a = x == 0.0 ? -kInf : 2.0 * log_sinh(0.5 * std::abs(x));
    double b = 2.0 * std::log(std::abs(r)) - x - 2.0 * kLog2;
    return radius_from_logq(logaddexp(a, b));
}

double distance(const GroupPoint& p) { return distance_xr(p.x, p.y_norm()); }

double unit_ball_volume(int n) {
    if (n < 0) throw DomainError("unit_ball_volume: n must be >= 0");
    return std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0));
}

void ShellSpec::validate() const {
    if (!(t > 0.0)) throw DomainError("ShellSpec: t must be > 0");
    if (!(a < b)) throw DomainError("ShellSpec: need a < b");
    if (!(m >= 0.0)) throw DomainError("ShellSpec: m must be >= 0");
    double need = m == 0.0 ? std::max({1.0, 2.0 * std::abs(a), b}) : std::max(std::abs(a), b);
    if (!(t > need))
        throw DomainError("ShellSpec: t = " + std::to_string(t) + " must exceed " + std::to_string(need));
}

double shell_integral(const ShellSpec& spec, int n, const QuadratureConfig& cfg, const ShellObserver& observer) {
    spec.validate();
    if (n < 1) throw DomainError("shell_integral: n must be >= 1");
    const double lo = spec.t + spec.a, hi = spec.t + spec.b;
    const double surface = n * unit_ball_volume(n);
    const QuadratureConfig inner_cfg = cfg.scaled(0.01);

    auto inner = [&](double x) -> double {
        double ax = std::abs(x);
        if (ax >= hi) return 0.0;
        double log_rmax = 0.5 * (kLog2 + x + log_ch_diff(hi, x));
        double umin = ax < lo ? std::exp(0.5 * (kLog2 + x + log_ch_diff(lo, x)) - log_rmax) : 0.0;
        double rmax = std::exp(log_rmax);
        auto f = [&](double u) {
            if (u <= 0.0) return 0.0;
            double r = rmax * u;
            if (observer) observer(x, r);
            double R = distance_xr(x, r);
            double lg = n * log_rmax + (n - 1) * std::log(u) - 0.5 * n * (x + R) - spec.m * std::log(spec.t + R);
            return std::exp(lg);
        };
        return integrate(f, umin, 1.0, inner_cfg).value;
    };

    IntegrateOptions o;
    o.sqrt_left = o.sqrt_right = true;
    double total = 0.0;
    total += integrate(inner, -hi, -lo, cfg, o).value;
    total += integrate(inner, -lo, lo, cfg, o).value;
    total += integrate(inner, lo, hi, cfg, o).value;
    return surface * total;
}

double shell_density(int n, double R, const QuadratureConfig& cfg) {
    if (n < 1) throw DomainError("shell_density: n must be >= 1");
    if (!(R > 0.0)) return 0.0;
    const double surface = n * unit_ball_volume(n);
    if (n == 2) return surface * 2.0 * R * std::exp(log_sinh(R) - R);
    const double e = 0.5 * (n - 2);
    auto f = [&](double x) {
        double lg = log_sinh(R) - 0.5 * n * R + (1.0 - 0.5 * n) * x + e * (kLog2 + x + log_ch_diff(R, x));
        return std::exp(lg);
    };
    IntegrateOptions o;
    o.sqrt_left = o.sqrt_right = (n % 2 == 1);
    return surface * integrate(f, -R, R, cfg, o).value;
}

}  // namespace axb
