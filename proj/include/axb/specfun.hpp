#pragma once

#include <complex>

namespace axb {

using cplx = std::complex<double>;

// Principal branch of log Gamma.  Throws DomainError at the poles.
cplx log_gamma(cplx z);
double log_gamma(double x);  // log|Gamma(x)|, x not a pole

// 1/Gamma(z), entire; zero at the poles.
cplx rgamma(cplx z);

double beta(double a, double b);

// 2F1(a, b; c; x) for real x <= 0.
cplx hyp2f1(cplx a, cplx b, cplx c, double x);

// Individual evaluation routes, exposed so they can be compared.
namespace hyp2f1_route {
cplx series(cplx a, cplx b, cplx c, double x);        // |x| < 1
cplx pfaff(cplx a, cplx b, cplx c, double x);         // x <= 0
cplx inverse_arg(cplx a, cplx b, cplx c, double x);   // x < -1 (a - b not an integer)
}

// |Gamma(1/2 + iv)|^2 / |Gamma(iv)|^2 = v th(pi v).
double gamma_ratio_sq(double v);

// th(x) that returns exactly 1 once 1 - th(x) is below double resolution.
double tanh_sat(double x);

// int_0^1 (x^2 + b^2)^(-sigma) dx via 2F1.
double local_power_integral(double sigma, double b);

}  // namespace axb
