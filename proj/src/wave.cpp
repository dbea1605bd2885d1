#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "axb/errors.hpp"
#include "axb/kernel.hpp"
#include "axb/plancherel.hpp"
#include "axb/qkl.hpp"

namespace axb {

namespace {

// log of (ch(R + w) - ch R)^{l - n/2}; 0 for even n.  Takes the offset w
// itself so nothing cancels next to the singular end.
double log_weight(int n, double R, double w) {
    if (n % 2 == 0) return 0.0;
    return -0.5 * (std::numbers::ln2 + log_sinh(R + 0.5 * w) + log_sinh(0.5 * w));
}

double sign_k(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

const SignTable& sign_table(WaveKind kind) {
    // columns: m(t+v), m(t-v), m(v-t), m(-t-v)
    static const SignTable exp_t{1.0, {1, 0, 0, 0}, {0, -1, 0, 0}, 1};
    static const SignTable cos_t{0.5, {1, 0, 1, 0}, {0, -1, 0, -1}, 1};
    static const SignTable sinc_t{cplx(0.0, -0.5), {1, 0, -1, 0}, {0, -1, 0, 1}, 0};
    switch (kind) {
        case WaveKind::exp: return exp_t;
        case WaveKind::cos: return cos_t;
        case WaveKind::sinc: return sinc_t;
    }
    return exp_t;
}

// ---- WaveKernel ---------------------------------------------------------

WaveKernel::WaveKernel(WaveKind kind, PsiDescriptor psi, int n, double xi_max, const QuadratureConfig& cfg,
                       double step)
    : kind_(kind), psi_(std::move(psi)), n_(n), cfg_(cfg) {
    if (n < 1 || n > 12) throw DomainError("wave kernel: n must be in 1..12");
    cfg.validate();
    const int shift = sign_table(kind).power_shift;
    for (int k = 0; k <= l(); ++k)
        tables_.push_back(std::make_shared<FourierTable>(psi_, k + shift, xi_max, step, cfg.scaled(0.01)));
    v_span_ = 2.0 / n * (std::log(1.0 / cfg.v_max_envelope) + 5.0);
}

cplx WaveKernel::m_check(int k, double xi) const { return (*tables_.at(k))(xi); }

WaveParts WaveKernel::radial_scaled(double t, double R) const {
    if (!(R >= 0.0)) throw DomainError("wave kernel: R must be >= 0");
    const SignTable& sg = sign_table(kind_);
    const QklTable& qt = qkl_table(l());
    const int L = l();
    auto integrand = [&](double w, const std::array<int, 2>& cols) {
        double v = R + w;
        double lw = 0.5 * n_ * R - L * v + log_weight(n_, R, w);
        if (!std::isfinite(lw)) return cplx(0.0);
        const double xi[4] = {t + v, t - v, v - t, -t - v};
        cplx acc = 0.0;
        for (int k = 0; k <= L; ++k) {
            cplx inner = 0.0;
            for (int j : cols) {
                double c = sg.plain[j] + sg.alt[j] * sign_k(k);
                if (c != 0.0) inner += c * m_check(k, xi[j]);
            }
            acc += (L == 0 ? cplx(1.0) : eval_q_scaled(qt, k, v)) * inner;
        }
        return std::exp(lw) * acc;
    };
    IntegrateOptions o;
    o.sqrt_left = (n_ % 2 == 1);
    double peak = t - R;  // where t - v vanishes
    for (double d : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0})
        if (peak + d > 0.0 && peak + d < v_span_) o.breakpoints.push_back(peak + d);
    for (double b = 1.0; b < std::min(v_span_, 8.0); b += 1.0) o.breakpoints.push_back(b);
    std::sort(o.breakpoints.begin(), o.breakpoints.end());
    // the interpolated transforms are good to about 1e-9; ask for no more
    QuadratureConfig c = cfg_;
    c.rel_tol = std::max(cfg_.rel_tol, 1e-8);
    c.abs_tol = std::max(0.1 * cfg_.abs_tol, 1e-16);
    cplx i1 = integrate_complex([&](double w) { return integrand(w, kI1Columns); }, 0.0, v_span_, c, o).value;
    cplx i2 = integrate_complex([&](double w) { return integrand(w, kI2Columns); }, 0.0, v_span_, c, o).value;
    cplx pre = c_l(n_) * sg.factor;
    return {pre * (i1 + i2), pre * i1, pre * i2};
}

WaveParts WaveKernel::parts(double t, double x, double R) const {
    WaveParts p = radial_scaled(t, R);
    double e = std::exp(-0.5 * n_ * (x + R));
    return {p.total * e, p.i1 * e, p.i2 * e};
}

cplx WaveKernel::value(double t, const GroupPoint& p) const {
    if (static_cast<int>(p.dim()) != n_) throw DomainError("wave kernel: point dimension differs from n");
    return parts(t, p.x, distance(p)).total;
}

cplx WaveKernel::plateau_M(double eta) const {
    const SignTable& sg = sign_table(kind_);
    const QklTable& qt = qkl_table(l());
    cplx acc = 0.0;
    for (int k = 0; k <= l(); ++k) {
        double c1 = sg.plain[1] + sg.alt[1] * sign_k(k);
        double c2 = sg.plain[2] + sg.alt[2] * sign_k(k);
        cplx term = 0.0;
        if (c1 != 0.0) term += c1 * m_check(k, eta);
        if (c2 != 0.0) term += c2 * m_check(k, -eta);
        acc += qt.a[k].to_complex() * term;
    }
    return acc;
}

cplx WaveKernel::plateau_I(double xi) const {
    auto f = [&](double v) { return plateau_weight(n_, v) * plateau_M(xi - v); };
    IntegrateOptions o;
    o.sqrt_left = (n_ % 2 == 1);
    for (double d : {-2.0, -1.0, 0.0, 1.0, 2.0})
        if (xi + d > 0.0 && xi + d < v_span_) o.breakpoints.push_back(xi + d);
    std::sort(o.breakpoints.begin(), o.breakpoints.end());
    QuadratureConfig c = cfg_;
    c.rel_tol = std::max(cfg_.rel_tol, 1e-8);
    c.abs_tol = std::max(0.1 * cfg_.abs_tol, 1e-16);
    return integrate_complex(f, 0.0, v_span_, c, o).value;
}

double plateau_weight(int n, double v) {
    if (!(v > 0.0)) return 0.0;
    const int L = n / 2;
    if (n % 2 == 0) return std::exp(-L * v);
    if (v < 1.0) return std::exp(-0.5 * std::log(std::expm1(v)) - L * v);
    // (e^v - 1)^{-1/2} = e^{-v/2} (1 - e^{-v})^{-1/2}, safe for large v
    return std::exp(-(L + 0.5) * v - 0.5 * std::log1p(-std::exp(-v)));
}

double plateau_weight_integral(int n, const QuadratureConfig& cfg) {
    if (n < 1) throw DomainError("plateau_weight_integral: n must be >= 1");
    auto f = [n](double v) { return plateau_weight(n, v); };
    IntegrateOptions o;
    o.sqrt_left = (n % 2 == 1);
    return integrate(f, 0.0, 1.0, cfg, o).value + integrate(f, 1.0, kInf, cfg).value;
}

cplx wave_kernel(WaveKind kind, const PsiDescriptor& psi, int n, double t, const GroupPoint& point,
                 const QuadratureConfig& cfg) {
    double R = distance(point);
    double span = 2.0 / n * (std::log(1.0 / cfg.v_max_envelope) + 5.0);
    WaveKernel wk(kind, psi, n, t + R + span + 5.0, cfg);
    return wk.value(t, point);
}

// ---- shell weights and norms --------------------------------------------

ShellWeight::ShellWeight(int n, double R_max, const QuadratureConfig& cfg, double step)
    : n_(n), step_(step), R_max_(R_max), cfg_(cfg) {
    int count = static_cast<int>(std::ceil(R_max / step)) + 3;
    for (int i = 0; i <= count; ++i) {
        double R = 0.5 + i * step;
        logw_.push_back(std::log(shell_density(n, R, cfg)));
    }
}

double ShellWeight::operator()(double R) const {
    double pos = (R - 0.5) / step_;
    if (pos < 1.0 || pos > static_cast<double>(logw_.size()) - 3.0) return shell_density(n_, R, cfg_);
    auto i = static_cast<std::size_t>(pos);
    double s = pos - static_cast<double>(i);
    // cubic Lagrange on nodes i-1 .. i+2
    double f0 = logw_[i - 1], f1 = logw_[i], f2 = logw_[i + 1], f3 = logw_[i + 2];
    double v = -s * (s - 1) * (s - 2) / 6 * f0 + (s + 1) * (s - 1) * (s - 2) / 2 * f1 -
               (s + 1) * s * (s - 2) / 2 * f2 + (s + 1) * s * (s - 1) / 6 * f3;
    return std::exp(v);
}

double haar_ball_volume(int n, double r0, const QuadratureConfig& cfg) {
    if (!(r0 > 0.0)) return 0.0;
    const double vn = unit_ball_volume(n);
    auto f = [&](double x) { return vn * std::exp(0.5 * n * (std::log(2.0) + x + log_ch_diff(r0, x))); };
    IntegrateOptions o;
    o.sqrt_left = o.sqrt_right = true;
    return integrate(f, -r0, r0, cfg, o).value;
}

namespace {

// int_0^inf psi(s)^2 rho(s^2) 2 s^{1 - 2 power} ds
double psi_rho_square(const PsiDescriptor& psi, int n, int power, const QuadratureConfig& cfg) {
    if (psi.is_zero()) return 0.0;
    auto f = [&](double s) {
        double p = psi(s);
        if (p == 0.0) return 0.0;
        return p * p * rho_closed(n, s * s) * 2.0 * std::pow(s, 1 - 2 * power);
    };
    std::vector<double> edges{0.0};
    for (double k : psi.knots())
        if (k > 0.0) edges.push_back(k);
    double total = 0.0;
    if (psi.family() == PsiDescriptor::Family::rational_decay) {
        // psi^2 rho(s^2) s ~ s^{n - 4 alpha - 2 power}
        if (!(4.0 * psi.alpha() > n + 1 - 2 * power))
            throw DivergenceError("wave_l2_norm: psi is not square integrable against rho");
        edges.push_back(1.0);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) total += integrate(f, edges[i], edges[i + 1], cfg).value;
    if (psi.family() == PsiDescriptor::Family::rational_decay) total += integrate(f, edges.back(), kInf, cfg).value;
    return total;
}

double kernel_scale(int n) {
    static std::mutex mu;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    double s = fit_kernel_scale(n, {0.5, 1.0, 2.0}).scale;
    cache[n] = s;
    return s;
}

}  // namespace

double wave_l2_norm(const PsiDescriptor& psi, int n, const QuadratureConfig& cfg) {
    return std::sqrt(psi_rho_square(psi, n, 0, cfg));
}

L1Result wave_l1_norm(const WaveKernel& wk, double t, double R_max, const QuadratureConfig& cfg,
                      const ShellWeight* weight) {
    if (!(R_max > 1.0)) throw DomainError("wave_l1_norm: R_max must exceed 1");
    std::unique_ptr<ShellWeight> own;
    if (!weight) {
        own = std::make_unique<ShellWeight>(wk.n(), R_max + 1.0, cfg);
        weight = own.get();
    }
    auto f = [&](double R) { return std::abs(wk.radial_scaled(t, R).total) * (*weight)(R); };
    IntegrateOptions o;
    for (double b = 2.0; b < R_max; b += 1.0) o.breakpoints.push_back(b);
    QuadratureConfig c = cfg;
    c.rel_tol = std::max(cfg.rel_tol, 1e-7);
    c.abs_tol = std::max(cfg.abs_tol, 1e-10);
    L1Result r;
    r.value = integrate(f, 1.0, R_max, c, o).value;
    // Cauchy-Schwarz on the unit ball; the constant matches the kernel normalisation
    r.ball_volume = haar_ball_volume(wk.n(), 1.0, cfg);
    int power = wk.kind() == WaveKind::sinc ? 1 : 0;
    double l2 = std::sqrt(psi_rho_square(wk.psi(), wk.n(), power, cfg) / kernel_scale(wk.n()));
    r.ball_bound = l2 * std::sqrt(r.ball_volume);
    return r;
}

L1Result wave_l1_norm(WaveKind kind, const PsiDescriptor& psi, int n, double t, double R_max,
                      const QuadratureConfig& cfg) {
    double span = 2.0 / n * (std::log(1.0 / cfg.v_max_envelope) + 5.0);
    WaveKernel wk(kind, psi, n, t + R_max + span + 5.0, cfg);
    return wave_l1_norm(wk, t, R_max, cfg);
}

double shell_part_integral(const WaveKernel& wk, double t, double a, double b, int part, const ShellWeight& w,
                           const QuadratureConfig& cfg) {
    if (part < 0 || part > 2) throw DomainError("shell_part_integral: part must be 0, 1 or 2");
    double lo = std::max(t + a, 0.0), hi = t + b;
    if (!(hi > lo)) throw DomainError("shell_part_integral: empty shell");
    auto f = [&](double R) {
        WaveParts p = wk.radial_scaled(t, R);
        cplx v = part == 0 ? p.total : (part == 1 ? p.i1 : p.i2);
        return std::abs(v) * w(R);
    };
    IntegrateOptions o;
    for (double x = std::ceil(lo); x < hi; x += 1.0)
        if (x > lo) o.breakpoints.push_back(x);
    QuadratureConfig c = cfg;
    c.rel_tol = std::max(cfg.rel_tol, 1e-7);
    c.abs_tol = 1e-300;
    return integrate(f, lo, hi, c, o).value;
}

PlateauResult plateau_scan(const WaveKernel& wk, double xi_lo, double xi_hi, double step) {
    if (wk.psi().is_zero()) throw DomainError("plateau_scan: psi vanishes identically on [0, inf)");
    if (!(xi_hi > xi_lo) || !(step > 0.0)) throw DomainError("plateau_scan: bad scan window");
    std::vector<double> xs;
    std::vector<cplx> vals;
    for (int i = 0;; ++i) {
        double xi = xi_lo + i * step;
        if (xi > xi_hi + 1e-12) break;
        xs.push_back(xi);
        vals.push_back(wk.plateau_I(xi));
    }
    std::size_t best = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (std::abs(vals[i]) > std::abs(vals[best])) best = i;
    PlateauResult r;
    r.xi_lo = xi_lo;
    r.xi_hi = xi_hi;
    r.step = step;
    r.scan_max = std::abs(vals[best]);
    r.A = vals[best];
    const double eps = 0.5 * std::abs(r.A);
    if (!(eps > 0.0)) throw NumericError("plateau_scan: the plateau function vanishes on the scan window");
    std::size_t lo = best, hi = best;
    while (lo > 0 && std::abs(vals[lo - 1] - r.A) < eps) --lo;
    while (hi + 1 < vals.size() && std::abs(vals[hi + 1] - r.A) < eps) ++hi;
    r.alpha = xs[lo];
    r.beta = xs[hi];
    for (std::size_t i = lo; i <= hi; ++i) r.margin = std::max(r.margin, std::abs(vals[i] - r.A));
    if (r.beta - r.alpha < 0.1)
        throw NumericError("plateau_scan: plateau shorter than 0.1", r.beta - r.alpha, r.margin);
    return r;
}

PlateauResult plateau_scan(WaveKind kind, const PsiDescriptor& psi, int n, const QuadratureConfig& cfg) {
    double span = 2.0 / n * (std::log(1.0 / cfg.v_max_envelope) + 5.0);
    WaveKernel wk(kind, psi, n, 30.0 + span + 15.0, cfg);
    return plateau_scan(wk);
}

// ---- direct route -------------------------------------------------------

cplx radial_H(int n, double s, double R, const QuadratureConfig& cfg) {
    if (!(R >= 0.0)) throw DomainError("radial_H: R must be >= 0");
    if (s == 0.0) return 0.0;
    const int l = n / 2;
    const QklTable& qt = qkl_table(l);
    const double h = 1.0;
    auto head = [&](double w) {
        double lw = log_weight(n, R, w);
        if (!std::isfinite(lw)) return cplx(0.0);
        return eval_D(qt, s, R + w) * std::exp(lw);
    };
    IntegrateOptions o;
    o.sqrt_left = (n % 2 == 1);
    cplx acc = integrate_complex(head, 0.0, h, cfg.scaled(0.5), o).value;
    const double V = 2.0 / n * (std::log(1.0 / cfg.v_max_envelope) + l * std::log1p(std::abs(s)) + 5.0);
    auto amp = [&](double v, double sgn) {
        cplx a = 0.0;
        double sk = 1.0;
        for (int k = 0; k <= l; ++k) {
            a += sk * eval_q(qt, k, v);
            sk *= sgn * s;
        }
        return a * std::exp(log_weight(n, R, v - R));
    };
    const double lo = R + h, hi = R + h + V;
    acc += integrate_oscillatory([&](double v) { return amp(v, 1.0); }, s, lo, hi, cfg.scaled(0.25)).value;
    acc -= integrate_oscillatory([&](double v) { return amp(v, -1.0); }, -s, lo, hi, cfg.scaled(0.25)).value;
    return acc;
}

cplx radial_kernel_direct(const std::function<cplx(double)>& g, int n, double R, double S,
                          const QuadratureConfig& cfg) {
    QuadratureConfig outer = cfg;
    outer.rel_tol = std::max(outer.rel_tol, 1e-8);
    IntegrateOptions o;
    double step = std::min(0.5, std::numbers::pi / (R + 1.0));
    for (double b = step; b < S; b += step) o.breakpoints.push_back(b);
    QuadratureConfig inner = cfg.scaled(0.01);
    auto f = [&](double s) {
        cplx gv = g(s);
        if (gv == 0.0) return cplx(0.0);
        return gv * radial_H(n, s, R, inner);
    };
    return c_l(n) * integrate_complex(f, 0.0, S, outer, o).value;
}

cplx wave_kernel_direct(WaveKind kind, const PsiDescriptor& psi, int n, double t, const GroupPoint& point,
                        const QuadratureConfig& cfg) {
    if (static_cast<int>(point.dim()) != n) throw DomainError("wave kernel: point dimension differs from n");
    if (psi.is_zero()) return 0.0;
    const double R = distance(point);
    auto g = [&](double s) -> cplx {
        double p = psi(s);
        switch (kind) {
            case WaveKind::exp: return p * s * std::exp(cplx(0.0, t * s));
            case WaveKind::cos: return p * s * std::cos(t * s);
            case WaveKind::sinc: return p * std::sin(t * s);
        }
        return 0.0;
    };
    // H_R(s) grows like s^l; cut where the tail of psi s^{l+1} drops below 1e-9
    double S = psi.tail_point(n / 2 + 1, 1e-9);
    QuadratureConfig c = cfg;
    c.rel_tol = std::max(c.rel_tol, 1e-8);
    c.abs_tol = std::max(c.abs_tol, 1e-11);
    return std::exp(-0.5 * n * point.x) * radial_kernel_direct(g, n, R, S, c);
}

MaxAtIdentityReport max_at_identity_check(const SpectralFunction& f, int n, const std::vector<GroupPoint>& grid,
                                         const QuadratureConfig& cfg) {
    f.validate(n);
    if (!f.is_nonnegative()) throw DomainError("max_at_identity_check: f must be nonnegative");
    double S = 0.0;
    if (f.variant == SpectralFunction::Variant::heat)
        S = std::pow(45.0 / f.t, 1.0 / (2.0 * f.gamma)) + 1.0;
    else if (f.variant == SpectralFunction::Variant::tabulated)
        S = std::sqrt(f.u_samples.back());
    else
        throw DomainError("max_at_identity_check: only heat and tabulated multipliers are supported");
    auto g = [&](double s) { return f(s * s) * s; };
    MaxAtIdentityReport rep;
    rep.value_e = radial_kernel_direct(g, n, 0.0, S, cfg).real();
    rep.value_e_closed = kernel_identity_value(f, n, cfg) / kernel_scale(n);
    rep.pass = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (static_cast<int>(grid[i].dim()) != n) throw DomainError("max_at_identity_check: point dimension");
        double v = std::abs(radial_kernel_direct(g, n, distance(grid[i]), S, cfg));
        rep.values.push_back(v);
        if (v > rep.value_e * (1.0 + 1e-6)) {
            rep.offenders.push_back(i);
            rep.pass = false;
        }
    }
    return rep;
}

}  // namespace axb
