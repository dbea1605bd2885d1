#include "axb/plancherel.hpp"

#include <cmath>
#include <numbers>

#include "axb/errors.hpp"
#include "axb/qkl.hpp"
#include "axb/specfun.hpp"

namespace axb {

namespace {

void check_n(int n) {
    if (n < 1) throw DomainError("dimension n must be >= 1, got " + std::to_string(n));
}

// (ch v - 1)^{l - n/2}: 1 for even n, (2 sh^2(v/2))^{-1/2} for odd n
double cosh_weight(int n, double v) {
    if (n % 2 == 0) return 1.0;
    return 1.0 / (std::numbers::sqrt2 * std::sinh(0.5 * v));
}

}  // namespace

DensityRoute parse_route(const std::string& name) {
    if (name == "closed") return DensityRoute::closed_form;
    if (name == "cfun") return DensityRoute::c_function;
    if (name == "kernel") return DensityRoute::kernel_integral;
    throw DomainError("unknown density route '" + name + "'");
}

double rho_closed(int n, double u) {
    check_n(n);
    if (u < 0.0) throw DomainError("rho_closed: u must be >= 0");
    const int l = n / 2;
    const double r = std::sqrt(u);
    double p = 1.0;
    if (n % 2 == 0) {
        for (int j = 1; j <= l - 1; ++j) p *= j * j + u;
        return r * p;
    }
    for (int j = 0; j <= l - 1; ++j) p *= (j + 0.5) * (j + 0.5) + u;
    return p * tanh_sat(std::numbers::pi * r);
}

double rho_via_c(int n, double u) {
    check_n(n);
    if (u < 0.0) throw DomainError("rho_via_c: u must be >= 0");
    if (u == 0.0) return 0.0;
    const double r = std::sqrt(u);
    cplx d = log_gamma(cplx(0.5 * n, r)) - log_gamma(cplx(0.0, r));
    return std::exp(2.0 * d.real()) / r;
}

double ic_l(int n) {
    check_n(n);
    const int l = n / 2;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    const double g = std::tgamma(l + 1 - 0.5 * n);  // Gamma(1) or Gamma(1/2)
    return sign * std::pow(2.0, -1.0 - 0.5 * n) * std::pow(std::numbers::pi, -0.5 * n) /
           (std::numbers::pi * g);
}

double rho_kernel_integral(int n, double u, const QuadratureConfig& cfg) {
    check_n(n);
    if (u < 0.0) throw DomainError("rho_kernel_integral: u must be >= 0");
    if (u == 0.0) return 0.0;
    const int l = n / 2;
    const double w = std::sqrt(u);
    const QklTable& t = qkl_table(l);

    // head: D evaluated through its regular representation near v = 0
    const double v0 = 1.0;
    auto head_f = [&](double v) { return 0.5 * eval_D(t, w, v).imag() * cosh_weight(n, v); };
    IntegrateOptions hopt;
    double head = integrate(head_f, 0.0, v0, cfg.scaled(0.5), hopt).value;

    // tail: D = A e^{iwv} - B e^{-iwv}, integrand decays like e^{-nv/2}
    const double V = v0 + 2.0 / n * (std::log(1.0 / cfg.v_max_envelope) + l * std::log1p(w) + 3.0);
    auto amp = [&](double v, double sgn) {
        cplx acc = 0.0;
        double wk = 1.0;
        for (int k = 0; k <= l; ++k) {
            acc += wk * eval_q(t, k, v);
            wk *= sgn * w;
        }
        return acc * cosh_weight(n, v);
    };
    cplx ia = integrate_oscillatory([&](double v) { return amp(v, 1.0); }, w, v0, V, cfg.scaled(0.25)).value;
    cplx ib = integrate_oscillatory([&](double v) { return amp(v, -1.0); }, -w, v0, V, cfg.scaled(0.25)).value;
    double tail = ((ia - ib) / cplx(0.0, 2.0)).real();
    return head + tail;
}

double rho_via_kernel(int n, double u, const QuadratureConfig& cfg, const NormalizationConfig& norm) {
    return ic_l(n) * rho_kernel_integral(n, u, cfg) / norm.c;
}

double rho(int n, double u, DensityRoute route, const QuadratureConfig& cfg) {
    switch (route) {
        case DensityRoute::closed_form: return rho_closed(n, u);
        case DensityRoute::c_function: return rho_via_c(n, u);
        case DensityRoute::kernel_integral: return rho_via_kernel(n, u, cfg);
    }
    throw DomainError("bad density route");
}

ScaleFit fit_kernel_scale(int n, const std::vector<double>& u_grid, const QuadratureConfig& cfg) {
    if (u_grid.empty()) throw DomainError("fit_kernel_scale: empty grid");
    std::vector<double> ker, ref;
    double mean = 0.0;
    for (double u : u_grid) {
        double k = rho_via_kernel(n, u, cfg), c = rho_closed(n, u);
        if (!(k > 0.0) || !(c > 0.0))
            throw NumericError("fit_kernel_scale: nonpositive density at u = " + std::to_string(u), k);
        ker.push_back(k);
        ref.push_back(c);
        mean += std::log(c / k);
    }
    ScaleFit f;
    f.scale = std::exp(mean / u_grid.size());
    for (std::size_t i = 0; i < ker.size(); ++i)
        f.max_rel_residual = std::max(f.max_rel_residual, std::abs(f.scale * ker[i] / ref[i] - 1.0));
    return f;
}

double small_u_constant(int n) {
    check_n(n);
    const int l = n / 2;
    double p = 1.0;
    if (n % 2 == 0) {
        for (int j = 1; j <= l - 1; ++j) p *= double(j) * j;
        return p;
    }
    for (int j = 0; j <= l - 1; ++j) p *= (j + 0.5) * (j + 0.5);
    return std::numbers::pi * p;
}

}  // namespace axb
