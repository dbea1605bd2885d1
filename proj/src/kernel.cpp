#include "axb/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "axb/errors.hpp"
#include "axb/plancherel.hpp"

namespace axb {

WaveKind parse_wave_kind(const std::string& name) {
    if (name == "exp") return WaveKind::exp;
    if (name == "cos") return WaveKind::cos;
    if (name == "sinc") return WaveKind::sinc;
    throw DomainError("unknown wave kind '" + name + "'");
}

std::string to_string(WaveKind kind) {
    switch (kind) {
        case WaveKind::exp: return "exp";
        case WaveKind::cos: return "cos";
        case WaveKind::sinc: return "sinc";
    }
    return "?";
}

// ---- SpectralFunction ---------------------------------------------------

SpectralFunction SpectralFunction::heat(double gamma, double t) {
    SpectralFunction f;
    f.variant = Variant::heat;
    f.gamma = gamma;
    f.t = t;
    return f;
}

SpectralFunction SpectralFunction::resolvent(cplx z, cplx s) {
    SpectralFunction f;
    f.variant = Variant::resolvent;
    f.z = z;
    f.s = s;
    return f;
}

SpectralFunction SpectralFunction::wave(WaveKind kind, double t, PsiDescriptor psi) {
    SpectralFunction f;
    f.variant = Variant::wave;
    f.kind = kind;
    f.t = t;
    f.psi = std::move(psi);
    return f;
}

SpectralFunction SpectralFunction::tabulated(std::vector<double> u, std::vector<double> v) {
    SpectralFunction f;
    f.variant = Variant::tabulated;
    f.u_samples = std::move(u);
    f.f_samples = std::move(v);
    return f;
}

void SpectralFunction::validate(int n) const {
    switch (variant) {
        case Variant::heat:
            if (!(gamma > 0.0) || !(t > 0.0)) throw DomainError("heat: gamma and t must be positive");
            break;
        case Variant::resolvent:
            if (z.imag() == 0.0 && z.real() >= 0.0) throw DomainError("resolvent: z lies in the spectrum [0, inf)");
            if (!(s.real() > 0.5 * (n + 1)))
                throw DivergenceError("resolvent: Re s must exceed (n+1)/2 = " + std::to_string(0.5 * (n + 1)));
            break;
        case Variant::wave:
            if (!(t >= 0.0)) throw DomainError("wave: t must be >= 0");
            break;
        case Variant::tabulated:
            if (u_samples.size() < 2 || u_samples.size() != f_samples.size())
                throw DomainError("tabulated: need matching sample vectors of length >= 2");
            for (std::size_t i = 1; i < u_samples.size(); ++i)
                if (!(u_samples[i] > u_samples[i - 1])) throw DomainError("tabulated: u must increase");
            if (u_samples.front() < 0.0) throw DomainError("tabulated: u must be >= 0");
            break;
    }
}

cplx SpectralFunction::operator()(double u) const {
    switch (variant) {
        case Variant::heat: return std::exp(-t * std::pow(u, gamma));
        case Variant::resolvent: return std::exp(-s * std::log(cplx(u) - z));
        case Variant::wave: {
            double r = std::sqrt(u);
            double p = psi(r);
            switch (kind) {
                case WaveKind::exp: return p * std::exp(cplx(0.0, t * r));
                case WaveKind::cos: return p * std::cos(t * r);
                case WaveKind::sinc: return r == 0.0 ? cplx(p * t) : cplx(p * std::sin(t * r) / r);
            }
            return 0.0;
        }
        case Variant::tabulated: {
            const auto& x = u_samples;
            if (u <= x.front() || u >= x.back()) return (u == x.front()) ? f_samples.front() : 0.0;
            auto it = std::upper_bound(x.begin(), x.end(), u);
            std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
            double w = (u - x[i]) / (x[i + 1] - x[i]);
            return (1.0 - w) * f_samples[i] + w * f_samples[i + 1];
        }
    }
    return 0.0;
}

bool SpectralFunction::is_nonnegative() const {
    switch (variant) {
        case Variant::heat: return true;
        case Variant::resolvent: return z.imag() == 0.0 && z.real() < 0.0 && s.imag() == 0.0;
        case Variant::wave: return false;
        case Variant::tabulated:
            return std::all_of(f_samples.begin(), f_samples.end(), [](double v) { return v >= 0.0; });
    }
    return false;
}

// ---- identity values ----------------------------------------------------

double kernel_identity_value(const std::function<double(double)>& f, int n, const QuadratureConfig& cfg,
                             std::vector<double> breakpoints) {
    auto g = [&](double u) {
        double fu = f(u);
        return fu == 0.0 ? 0.0 : fu * rho_closed(n, u);
    };
    std::vector<double> edges{0.0, 1.0};
    for (double b : breakpoints)
        if (b > 0.0 && std::isfinite(b)) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        IntegrateOptions o;
        o.sqrt_left = (i == 0);  // rho ~ sqrt(u) at the origin
        total += integrate(g, edges[i], edges[i + 1], cfg, o).value;
    }
    total += integrate(g, edges.back(), kInf, cfg).value;
    return total;
}

double kernel_identity_value(const SpectralFunction& f, int n, const QuadratureConfig& cfg) {
    f.validate(n);
    if (!f.is_nonnegative())
        throw DomainError("kernel_identity_value needs f >= 0; use kernel_uniform_bound for signed f");
    switch (f.variant) {
        case SpectralFunction::Variant::heat: return heat_uniform_norm(n, f.gamma, f.t, cfg);
        case SpectralFunction::Variant::resolvent: return resolvent_norm_bound(n, f.z, f.s, cfg);
        case SpectralFunction::Variant::tabulated:
            return kernel_identity_value([&](double u) { return f(u).real(); }, n, cfg, f.u_samples);
        case SpectralFunction::Variant::wave: break;
    }
    throw DomainError("kernel_identity_value: unsupported variant");
}

double kernel_uniform_bound(const SpectralFunction& f, int n, const QuadratureConfig& cfg) {
    f.validate(n);
    if (f.variant == SpectralFunction::Variant::resolvent) return resolvent_norm_bound(n, f.z, f.s, cfg);
    if (f.is_nonnegative()) return kernel_identity_value(f, n, cfg);
    std::vector<double> bps = f.u_samples;
    if (f.variant == SpectralFunction::Variant::wave) {
        for (double k : f.psi.knots()) bps.push_back(k * k);
        // one breakpoint per half period of the phase
        if (f.t > 0.0) {
            double S = f.psi.tail_point(n, 1e-14);
            for (double r = std::numbers::pi / f.t; r < S && bps.size() < 4000; r += std::numbers::pi / f.t)
                bps.push_back(r * r);
        }
    }
    return kernel_identity_value(
        [&](double u) {
            cplx v = f(u);
            return std::abs(v.real()) + std::abs(v.imag());
        },
        n, cfg, bps);
}

double heat_uniform_norm(int n, double gamma, double t, const QuadratureConfig& cfg) {
    if (!(gamma > 0.0) || !(t > 0.0)) throw DomainError("heat_uniform_norm: gamma and t must be positive");
    // x = t u^gamma, then x = e^y
    const double lt = std::log(t);
    auto h = [&](double y) {
        double ly = (y - lt) / gamma;  // log u
        double x = std::exp(y);
        return std::exp(-x) * rho_closed(n, std::exp(ly)) * std::exp(ly) / gamma;
    };
    const double lo = -35.0 * gamma, hi = std::log(120.0);
    IntegrateOptions o;
    for (double b = std::ceil(lo); b < hi; b += 1.0) o.breakpoints.push_back(b);
    return integrate(h, lo, hi, cfg, o).value;
}

double resolvent_norm_bound(int n, cplx z, cplx s, const QuadratureConfig& cfg) {
    if (z.imag() == 0.0 && z.real() >= 0.0) throw DomainError("resolvent: z lies in the spectrum [0, inf)");
    if (!(s.real() > 0.5 * (n + 1)))
        throw DivergenceError("resolvent: int |u - z|^{-s} rho(u) du diverges unless Re s > (n+1)/2");
    const double sr = s.real();
    auto g = [&](double u) { return std::exp(-sr * std::log(std::abs(cplx(u) - z))) * rho_closed(n, u); };
    const double a = z.real(), b = std::abs(z.imag()), az = std::abs(z);
    std::vector<double> edges{0.0};
    if (a > 0.0) {
        edges.push_back(a);
        for (double d = std::max(b, 1e-300); d < 10.0 * (a + 1.0); d *= 4.0) {
            edges.push_back(a + d);
            if (a - d > 0.0) edges.push_back(a - d);
        }
        edges.push_back(2.0 * a + 1.0);
    } else {
        for (double f : {0.01, 0.1, 1.0, 10.0, 100.0}) edges.push_back(f * az);
    }
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        IntegrateOptions o;
        o.sqrt_left = (i == 0);
        total += integrate(g, edges[i], edges[i + 1], cfg, o).value;
    }
    total += integrate(g, edges.back(), kInf, cfg).value;
    return std::exp(0.5 * std::numbers::pi * std::abs(s.imag())) * total;
}

double lp_lq_bound_rprime(double k_inf, double k_2, double r_prime) {
    if (!(r_prime >= 2.0)) throw DomainError("lp_lq_bound: needs r' >= 2");
    if (k_inf < 0.0 || k_2 < 0.0) throw DomainError("lp_lq_bound: norms must be nonnegative");
    if (std::isinf(r_prime)) return k_inf;
    double e = 2.0 / r_prime;
    return std::pow(k_inf, 1.0 - e) * std::pow(k_2, e);
}

double lp_lq_bound(double k_inf, double k_2, double p, double q) {
    if (!(p > 1.0) || !(q > p)) throw DomainError("lp_lq_bound: needs 1 < p < q");
    double inv_r = 1.0 / p - 1.0 / q;
    if (!(inv_r >= 0.5)) throw DomainError("lp_lq_bound: needs 1/p - 1/q >= 1/2");
    double inv_rp = 1.0 - inv_r;
    return lp_lq_bound_rprime(k_inf, k_2, inv_rp > 0.0 ? 1.0 / inv_rp : kInf);
}

cplx c_l(int n) { return cplx(0.0, -ic_l(n)); }

}  // namespace axb
