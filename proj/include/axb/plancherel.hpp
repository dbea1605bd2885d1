#pragma once

#include <string>
#include <vector>

#include "axb/quadrature.hpp"

namespace axb {

enum class DensityRoute { closed_form, c_function, kernel_integral };

DensityRoute parse_route(const std::string& name);  // "closed", "cfun", "kernel"

struct NormalizationConfig {
    double c = 1.0;
};

inline int half_dim(int n) { return n / 2; }  // l = floor(n / 2)

// rho_n(u) = sqrt(u) prod_{j=1}^{l-1} (j^2 + u)        (n = 2l)
//          = prod_{j=0}^{l-1} ((j + 1/2)^2 + u) th(pi sqrt u)   (n = 2l + 1)
double rho_closed(int n, double u);
// u^{-1/2} |Gamma(n/2 + i sqrt u)|^2 / |Gamma(i sqrt u)|^2
double rho_via_c(int n, double u);

// i c_l with l = floor(n / 2); real.
double ic_l(int n);

// int_0^inf D^l(sin(v sqrt u)) (ch v - 1)^{l - n/2} dv, D f = (f / sh v)'.
double rho_kernel_integral(int n, double u, const QuadratureConfig& cfg = {});
// i c_l / c times the integral above.
double rho_via_kernel(int n, double u, const QuadratureConfig& cfg = {},
                      const NormalizationConfig& norm = {});

double rho(int n, double u, DensityRoute route, const QuadratureConfig& cfg = {});

// Positive factor s minimising sum (log(s * kernel) - log closed)^2 over the grid.
struct ScaleFit {
    double scale = 1.0;
    double max_rel_residual = 0.0;
};
ScaleFit fit_kernel_scale(int n, const std::vector<double>& u_grid, const QuadratureConfig& cfg = {});

// Limits used by the asymptotic checks: rho(u) / sqrt(u) -> K_n as u -> 0.
double small_u_constant(int n);

}  // namespace axb
