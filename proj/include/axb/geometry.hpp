#pragma once

#include <functional>
#include <vector>

#include "axb/quadrature.hpp"

namespace axb {

struct GroupPoint {
    double x = 0.0;
    std::vector<double> y;

    std::size_t dim() const { return y.size(); }
    static GroupPoint identity(std::size_t n) { return {0.0, std::vector<double>(n, 0.0)}; }
    double y_norm() const;
};

GroupPoint multiply(const GroupPoint& p, const GroupPoint& q);
GroupPoint inverse(const GroupPoint& p);
double modular(const GroupPoint& p, int n);  // e^{-n x}
double distance(const GroupPoint& p);        // distance to the identity
double distance_xr(double x, double r);      // same, from x and r = |y|

// log sh(y) for y > 0 without overflow
double log_sinh(double y);
// log(ch R - ch x) for |x| <= R, in factored form
double log_ch_diff(double R, double x);

double unit_ball_volume(int n);  // pi^{n/2} / Gamma(n/2 + 1)

struct ShellSpec {
    double t = 0.0, a = 0.0, b = 0.0;
    double m = 0.0;
    void validate() const;
};

using ShellObserver = std::function<void(double x, double r)>;

// int over {t+a <= R(x,y) <= t+b} of e^{-n(x+R)/2} (t+R)^{-m} dx dy in (x, r = |y|) coordinates.
double shell_integral(const ShellSpec& spec, int n, const QuadratureConfig& cfg = {},
                      const ShellObserver& observer = {});

// Density w with int_{R in I} F(R) e^{-n(x+R)/2} dx dy = int_I F(R) w(R) dR.
double shell_density(int n, double R, const QuadratureConfig& cfg = {});

}  // namespace axb
