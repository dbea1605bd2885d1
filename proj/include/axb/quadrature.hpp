#pragma once

#include <array>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace axb {

using cplx = std::complex<double>;

enum class OscillationMode { automatic, filon, none };

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 48;
    double v_max_envelope = 1e-12;  // truncation level for declared exponential envelopes
    OscillationMode oscillation_mode = OscillationMode::automatic;
    int max_intervals = 40000;

    void validate() const;
    QuadratureConfig scaled(double factor) const;  // tolerances multiplied by factor
};

struct IntegrateOptions {
    bool sqrt_left = false;   // integrable (x - a)^(-1/2)-type behaviour at a
    bool sqrt_right = false;  // same at b
    std::vector<double> breakpoints;
    double envelope_rate = 0.0;  // |f| <~ e^{-rate |x|} on infinite domains; > 0 enables truncation
    std::function<void(double)> observer;  // sees every abscissa in the original variable
};

template <class T>
struct QuadResult {
    T value{};
    double err_est = 0.0;
    long evaluations = 0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                             const QuadratureConfig& cfg, const IntegrateOptions& opt = {});
QuadResult<cplx> integrate_complex(const std::function<cplx(double)>& f, double a, double b,
                                   const QuadratureConfig& cfg, const IntegrateOptions& opt = {});

// int_a^b amp(x) e^{i omega x} dx on a finite interval.  Panels with
// |omega| * width > 2 use Legendre projection against exact moments.
QuadResult<cplx> integrate_oscillatory(const std::function<cplx(double)>& amp, double omega,
                                       double a, double b, const QuadratureConfig& cfg);

// Spherical Bessel j_0..j_{count-1}(x), x real.
void sph_bessel_batch(double x, std::span<double> out);

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes, weights;
    explicit GaussLegendre(int n);
};

// ---- psi descriptors ---------------------------------------------------

class PsiDescriptor {
public:
    enum class Family { rational_decay, compact_bump, tabulated };

    static PsiDescriptor rational_decay(double alpha);          // (1 + s^2)^(-alpha)
    static PsiDescriptor compact_bump(double lo, double hi);    // smooth bump on (lo, hi)
    static PsiDescriptor tabulated(std::vector<double> s, std::vector<double> values);
    static PsiDescriptor zero();

    Family family() const { return family_; }
    double alpha() const { return alpha_; }
    double operator()(double s) const;

    // Largest s where s^power |psi(s)| still matters at level tol: the
    // integral over [S, inf) is below tol.  Throws if not integrable.
    double tail_point(double power, double tol) const;
    // Knots where psi is not smooth (support edges, table nodes).
    std::vector<double> knots() const;
    // Numerical witness of sup |psi^(j)(s) s^k| over j <= 2, k <= kmax.
    double derivative_bound(int kmax) const;
    bool meets_wave_hypotheses(int n) const;
    bool is_zero() const;

private:
    Family family_ = Family::rational_decay;
    double alpha_ = 0.0, lo_ = 0.0, hi_ = 0.0;
    bool zero_ = false;
    std::vector<double> s_, v_;
};

// ---- half-line Fourier transforms --------------------------------------

// Precomputed panels for xi -> int_0^S g(s) e^{i xi s} ds.
class HalfLineFourier {
public:
    HalfLineFourier(const std::function<double(double)>& g, double S, std::vector<double> knots,
                    const QuadratureConfig& cfg);
    cplx operator()(double xi) const;
    std::size_t panel_count() const { return panels_.size(); }

private:
    struct Panel {
        double mid, half;
        std::array<double, 16> coef;    // Legendre coefficients
        std::array<double, 16> values;  // samples at Gauss nodes
    };
    std::vector<Panel> panels_;
};

// check m_k(xi) = int_0^inf psi(s) s^power e^{i xi s} ds
cplx inverse_fourier_mk(const PsiDescriptor& psi, int k, int power, double xi,
                        const QuadratureConfig& cfg);

// m_k and its derivative sampled on a uniform xi grid, cubic Hermite in between.
class FourierTable {
public:
    FourierTable(const PsiDescriptor& psi, int power, double xi_max, double step,
                 const QuadratureConfig& cfg);
    cplx operator()(double xi) const;
    double xi_max() const { return xi_max_; }
    int power() const { return power_; }

private:
    int power_;
    double xi_max_, step_;
    std::vector<cplx> val_, der_;
    HalfLineFourier direct_;
};

}  // namespace axb
