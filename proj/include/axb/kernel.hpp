#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "axb/geometry.hpp"
#include "axb/quadrature.hpp"

namespace axb {

enum class WaveKind { exp, cos, sinc };
WaveKind parse_wave_kind(const std::string& name);
std::string to_string(WaveKind kind);

// f in f(L) / f(tilde Delta), as a function of the spectral variable u >= 0.
struct SpectralFunction {
    enum class Variant { heat, resolvent, wave, tabulated };
    Variant variant = Variant::heat;
    double gamma = 1.0, t = 0.0;
    cplx z = -1.0, s = 2.0;
    WaveKind kind = WaveKind::exp;
    PsiDescriptor psi = PsiDescriptor::zero();
    std::vector<double> u_samples, f_samples;

    static SpectralFunction heat(double gamma, double t);
    static SpectralFunction resolvent(cplx z, cplx s);
    static SpectralFunction wave(WaveKind kind, double t, PsiDescriptor psi);
    static SpectralFunction tabulated(std::vector<double> u, std::vector<double> f);

    void validate(int n) const;
    cplx operator()(double u) const;
    bool is_nonnegative() const;
};

// ---- identity values and norms -----------------------------------------

// int_0^inf f rho_n; extra breakpoints help with kinks of f.
double kernel_identity_value(const std::function<double(double)>& f, int n, const QuadratureConfig& cfg = {},
                             std::vector<double> breakpoints = {});
double kernel_identity_value(const SpectralFunction& f, int n, const QuadratureConfig& cfg = {});
// int (|Re f| + |Im f|) rho_n, an upper bound for the uniform norm of a signed or complex f.
double kernel_uniform_bound(const SpectralFunction& f, int n, const QuadratureConfig& cfg = {});

double heat_uniform_norm(int n, double gamma, double t, const QuadratureConfig& cfg = {});
double resolvent_norm_bound(int n, cplx z, cplx s, const QuadratureConfig& cfg = {});

// ||k||_inf^{1 - 2/r'} ||k||_2^{2/r'} with 1/r = 1/p - 1/q
double lp_lq_bound(double k_inf, double k_2, double p, double q);
double lp_lq_bound_rprime(double k_inf, double k_2, double r_prime);  // r' in [2, inf]

// Normalizing constant c_l (purely imaginary), l = floor(n/2).
cplx c_l(int n);

// ---- wave kernels: q_{k,l} route ----------------------------------------

// Combination of m_k(+-t +- v) in the kernel integrand.  The coefficient of
// column j is factor * (plain[j] + alt[j] (-1)^k); columns are
// m(t+v), m(t-v), m(v-t), m(-t-v).
struct SignTable {
    cplx factor;
    std::array<double, 4> plain, alt;
    int power_shift;  // m_k(s) = psi(s) s^{k + power_shift}
};
const SignTable& sign_table(WaveKind kind);
inline constexpr std::array<int, 2> kI1Columns{0, 3};
inline constexpr std::array<int, 2> kI2Columns{1, 2};

struct WaveParts {
    cplx total, i1, i2;  // total = i1 + i2
};

class WaveKernel {
public:
    // Tables of m_k cover |xi| <= xi_max; beyond that the transforms are summed directly.
    WaveKernel(WaveKind kind, PsiDescriptor psi, int n, double xi_max, const QuadratureConfig& cfg = {},
               double step = 0.02);

    int n() const { return n_; }
    int l() const { return n_ / 2; }
    WaveKind kind() const { return kind_; }
    const PsiDescriptor& psi() const { return psi_; }

    cplx m_check(int k, double xi) const;
    // e^{nR/2} times the v-integral from R to infinity, with c_l and the kind factor.
    WaveParts radial_scaled(double t, double R) const;
    // k_t, and its two parts, at (x, y) with R = R(x, y).
    WaveParts parts(double t, double x, double R) const;
    cplx value(double t, const GroupPoint& p) const;

    // M(eta) of the plateau analysis and I(xi) = int_0^inf (e^v - 1)^{l - n/2} e^{-vl} M(xi - v) dv
    cplx plateau_M(double eta) const;
    cplx plateau_I(double xi) const;

private:
    WaveKind kind_;
    PsiDescriptor psi_;
    int n_;
    QuadratureConfig cfg_;
    std::vector<std::shared_ptr<FourierTable>> tables_;
    double v_span_;  // truncation length of the v-integral
};

cplx wave_kernel(WaveKind kind, const PsiDescriptor& psi, int n, double t, const GroupPoint& point,
                 const QuadratureConfig& cfg = {});

// N(v) = (e^v - 1)^{l - n/2} e^{-vl} for v > 0, and its integral over (0, inf)
double plateau_weight(int n, double v);
double plateau_weight_integral(int n, const QuadratureConfig& cfg = {});

// w(R) with int_{R(x,y) in I} F(R) e^{-n(x+R)/2} dx dy = int_I F(R) w(R) dR, tabulated.
class ShellWeight {
public:
    ShellWeight(int n, double R_max, const QuadratureConfig& cfg = {}, double step = 0.05);
    double operator()(double R) const;

private:
    int n_;
    double step_, R_max_;
    std::vector<double> logw_;
    QuadratureConfig cfg_;
};

// Volume of {R(x, y) <= r0} for the right Haar measure dx dy.
double haar_ball_volume(int n, double r0, const QuadratureConfig& cfg = {});

double wave_l2_norm(const PsiDescriptor& psi, int n, const QuadratureConfig& cfg = {});

struct L1Result {
    double value = 0.0;        // int over 1 <= R <= R_max of |k_t|
    double ball_bound = 0.0;   // bound for the R <= 1 part
    double ball_volume = 0.0;
};
L1Result wave_l1_norm(const WaveKernel& wk, double t, double R_max, const QuadratureConfig& cfg = {},
                      const ShellWeight* weight = nullptr);
L1Result wave_l1_norm(WaveKind kind, const PsiDescriptor& psi, int n, double t, double R_max,
                      const QuadratureConfig& cfg = {});

// int over t+a <= R <= t+b of |part| dx dy; part 0 = total, 1 = I1, 2 = I2
double shell_part_integral(const WaveKernel& wk, double t, double a, double b, int part, const ShellWeight& w,
                           const QuadratureConfig& cfg = {});

struct PlateauResult {
    double alpha = 0.0, beta = 0.0;
    cplx A;
    double margin = 0.0;     // max |I - A| on [alpha, beta]
    double scan_max = 0.0;   // max |I| over the scan window
    double xi_lo = 0.0, xi_hi = 0.0, step = 0.0;
};
PlateauResult plateau_scan(const WaveKernel& wk, double xi_lo = -10.0, double xi_hi = 30.0, double step = 0.01);
PlateauResult plateau_scan(WaveKind kind, const PsiDescriptor& psi, int n, const QuadratureConfig& cfg = {});

// ---- direct route -------------------------------------------------------

// H_R(s) = int_R^inf D_{l,s}(v) (ch v - ch R)^{l - n/2} dv
cplx radial_H(int n, double s, double R, const QuadratureConfig& cfg = {});
// c_l int_0^S g(s) H_R(s) ds: times e^{-nx/2} this is the kernel of the
// operator with multiplier g(sqrt u) / sqrt u.
cplx radial_kernel_direct(const std::function<cplx(double)>& g, int n, double R, double S,
                          const QuadratureConfig& cfg = {});
cplx wave_kernel_direct(WaveKind kind, const PsiDescriptor& psi, int n, double t, const GroupPoint& point,
                        const QuadratureConfig& cfg = {});

struct MaxAtIdentityReport {
    double value_e = 0.0;            // tilde k_f(e), direct route
    double value_e_closed = 0.0;     // same from int f rho with the matching constant
    std::vector<double> values;      // |tilde k_f(p)| per grid point
    std::vector<std::size_t> offenders;
    bool pass = false;
};
MaxAtIdentityReport max_at_identity_check(const SpectralFunction& f, int n, const std::vector<GroupPoint>& grid,
                                         const QuadratureConfig& cfg = {});

}  // namespace axb
