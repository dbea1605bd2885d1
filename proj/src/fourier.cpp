#include <algorithm>
#include <cmath>
#include <numbers>

#include "axb/errors.hpp"
#include "axb/quadrature.hpp"

namespace axb {

namespace {

const GaussLegendre& gl16() {
    static const GaussLegendre g(16);
    return g;
}

// proj[j][m] = (2j+1)/2 w_m P_j(t_m)
const std::array<std::array<double, 16>, 16>& proj16() {
    static const auto table = [] {
        std::array<std::array<double, 16>, 16> p{};
        const auto& g = gl16();
        for (int m = 0; m < 16; ++m) {
            double t = g.nodes[m], a = 1.0, b = t;
            for (int j = 0; j < 16; ++j) {
                double pj = j == 0 ? 1.0 : (j == 1 ? t : ((2.0 * j - 1.0) * t * b - (j - 1.0) * a) / j);
                if (j >= 2) { a = b; b = pj; }
                p[j][m] = 0.5 * (2.0 * j + 1.0) * g.weights[m] * pj;
            }
        }
        return p;
    }();
    return table;
}

double bump_value(double s, double lo, double hi) {
    double x = (2.0 * s - lo - hi) / (hi - lo);
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

}  // namespace

// ---- PsiDescriptor -----------------------------------------------------

PsiDescriptor PsiDescriptor::rational_decay(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("rational_decay: alpha must be > 0");
    PsiDescriptor p;
    p.family_ = Family::rational_decay;
    p.alpha_ = alpha;
    return p;
}

PsiDescriptor PsiDescriptor::compact_bump(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("compact_bump: need lo < hi");
    PsiDescriptor p;
    p.family_ = Family::compact_bump;
    p.lo_ = lo;
    p.hi_ = hi;
    p.zero_ = hi <= 0.0;
    return p;
}

PsiDescriptor PsiDescriptor::tabulated(std::vector<double> s, std::vector<double> values) {
    if (s.size() != values.size() || s.size() < 2) throw DomainError("tabulated psi: need >= 2 matching samples");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1])) throw DomainError("tabulated psi: abscissae must increase");
    PsiDescriptor p;
    p.family_ = Family::tabulated;
    p.zero_ = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }) || s.back() <= 0.0;
    p.s_ = std::move(s);
    p.v_ = std::move(values);
    return p;
}

PsiDescriptor PsiDescriptor::zero() {
    PsiDescriptor p = tabulated({0.0, 1.0}, {0.0, 0.0});
    return p;
}

bool PsiDescriptor::is_zero() const { return zero_; }

double PsiDescriptor::operator()(double s) const {
    switch (family_) {
        case Family::rational_decay: return std::exp(-alpha_ * std::log1p(s * s));
        case Family::compact_bump: return bump_value(s, lo_, hi_);
        case Family::tabulated: {
            if (s < s_.front() || s > s_.back()) return 0.0;
            auto it = std::upper_bound(s_.begin(), s_.end(), s);
            if (it == s_.end()) return v_.back();
            std::size_t i = static_cast<std::size_t>(it - s_.begin());
            double w = (s - s_[i - 1]) / (s_[i] - s_[i - 1]);
            return (1.0 - w) * v_[i - 1] + w * v_[i];
        }
    }
    return 0.0;
}

double PsiDescriptor::tail_point(double power, double tol) const {
    switch (family_) {
        case Family::rational_decay: {
            double e = 2.0 * alpha_ - power - 1.0;
            if (!(e > 0.0)) throw DomainError("psi(s) s^power is not integrable on [0, inf)");
            double S = std::pow(tol * e, -1.0 / e);
            return std::max(S, 2.0);
        }
        case Family::compact_bump: return std::max(hi_, 0.0);
        case Family::tabulated: return std::max(s_.back(), 0.0);
    }
    return 0.0;
}

std::vector<double> PsiDescriptor::knots() const {
    std::vector<double> k;
    if (family_ == Family::compact_bump) {
        if (lo_ > 0.0) k.push_back(lo_);
        if (hi_ > 0.0) k.push_back(hi_);
    } else if (family_ == Family::tabulated) {
        for (double s : s_)
            if (s > 0.0) k.push_back(s);
    }
    return k;
}

double PsiDescriptor::derivative_bound(int kmax) const {
    double smax = family_ == Family::rational_decay ? 200.0 : tail_point(0, 1e-12);
    const double h = 1e-4;
    double best = 0.0;
    for (double s = 0.0; s <= smax; s += 0.01) {
        double f0 = (*this)(s);
        double fp = ((*this)(s + h) - (*this)(std::max(s - h, 0.0))) / (s + h - std::max(s - h, 0.0));
        double fpp = s >= h ? ((*this)(s + h) - 2.0 * f0 + (*this)(s - h)) / (h * h)
                            : ((*this)(s + 2 * h) - 2.0 * (*this)(s + h) + f0) / (h * h);
        for (int k = 0; k <= kmax; ++k) {
            double sk = std::pow(s, k);
            best = std::max({best, std::abs(f0) * sk, std::abs(fp) * sk, std::abs(fpp) * sk});
        }
    }
    return best;
}

bool PsiDescriptor::meets_wave_hypotheses(int n) const {
    if (zero_) return false;
    int l = n / 2;
    switch (family_) {
        case Family::rational_decay: return 2.0 * alpha_ >= n / 2.0 + 3.0 && 2.0 * alpha_ > l + 2.0;
        case Family::compact_bump: return hi_ > 0.0;
        case Family::tabulated: return false;  // piecewise linear is not C^2
    }
    return false;
}

// ---- HalfLineFourier ---------------------------------------------------

HalfLineFourier::HalfLineFourier(const std::function<double(double)>& g, double S, std::vector<double> knots,
                                 const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(S > 0.0)) return;
    std::vector<double> edges{0.0};
    double s = 0.0;
    while (s < S) {
        double w = s < 20.0 ? 0.5 : 0.25 * s;
        s = std::min(s + w, S);
        edges.push_back(s);
    }
    for (double k : knots)
        if (k > 0.0 && k < S) edges.push_back(k);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-14 * (1.0 + std::abs(a)); }),
                edges.end());

    const auto& gl = gl16();
    const auto& P = proj16();
    auto make = [&](double lo, double hi) {
        Panel p{};
        p.mid = 0.5 * (lo + hi);
        p.half = 0.5 * (hi - lo);
        for (int m = 0; m < 16; ++m) p.values[m] = g(p.mid + p.half * gl.nodes[m]);
        for (int j = 0; j < 16; ++j) {
            double c = 0.0;
            for (int m = 0; m < 16; ++m) c += P[j][m] * p.values[m];
            p.coef[j] = c;
        }
        return p;
    };
    double absint = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = make(edges[i], edges[i + 1]);
        for (int m = 0; m < 16; ++m) absint += gl.weights[m] * std::abs(p.values[m]) * p.half;
    }
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * absint);
    std::function<void(double, double, int)> refine = [&](double lo, double hi, int depth) {
        Panel p = make(lo, hi);
        double err = 2.0 * p.half * (std::abs(p.coef[14]) + std::abs(p.coef[15]));
        double pabs = 0.0;
        for (int m = 0; m < 16; ++m) pabs += gl.weights[m] * std::abs(p.values[m]) * p.half;
        double budget = std::max({tol * (hi - lo) / S, tol * pabs / std::max(absint, 1e-300), 64e-16 * pabs});
        if (err <= budget || depth >= 20) {
            panels_.push_back(p);
            return;
        }
        double mid = 0.5 * (lo + hi);
        refine(lo, mid, depth + 1);
        refine(mid, hi, depth + 1);
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) refine(edges[i], edges[i + 1], 0);
}

cplx HalfLineFourier::operator()(double xi) const {
    static const std::array<cplx, 4> ipow = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    const auto& gl = gl16();
    std::array<double, 16> jb;
    double cached_half = -1.0;
    cplx total = 0.0;
    for (const auto& p : panels_) {
        cplx v = 0.0;
        if (std::abs(xi) * 2.0 * p.half <= 2.0) {
            for (int m = 0; m < 16; ++m)
                v += gl.weights[m] * p.values[m] * std::exp(cplx(0.0, xi * (p.mid + p.half * gl.nodes[m])));
            v *= p.half;
        } else {
            if (p.half != cached_half) {
                sph_bessel_batch(xi * p.half, jb);
                cached_half = p.half;
            }
            for (int j = 0; j < 16; ++j) v += p.coef[j] * jb[j] * ipow[j % 4];
            v *= 2.0 * p.half * std::exp(cplx(0.0, xi * p.mid));
        }
        total += v;
    }
    return total;
}

cplx inverse_fourier_mk(const PsiDescriptor& psi, int k, int power, double xi, const QuadratureConfig& cfg) {
    if (k < 0 || (power != k && power != k + 1)) throw DomainError("inverse_fourier_mk: power must be k or k+1");
    if (psi.is_zero()) return 0.0;
    double S = psi.tail_point(power, 0.1 * cfg.abs_tol);
    HalfLineFourier h([&](double s) { return std::pow(s, power) * psi(s); }, S, psi.knots(), cfg);
    return h(xi);
}

// ---- FourierTable ------------------------------------------------------

FourierTable::FourierTable(const PsiDescriptor& psi, int power, double xi_max, double step,
                           const QuadratureConfig& cfg)
    : power_(power),
      xi_max_(xi_max),
      step_(step),
      direct_([&psi, power](double s) { return std::pow(s, power) * psi(s); },
              psi.is_zero() ? 0.0 : psi.tail_point(power, 0.1 * cfg.abs_tol), psi.knots(), cfg) {
    if (!(step > 0.0) || !(xi_max > 0.0)) throw DomainError("FourierTable: step and range must be positive");
    if (psi.is_zero()) {
        val_.assign(1, 0.0);
        der_.assign(1, 0.0);
        return;
    }
    double S = psi.tail_point(power + 1, 0.1 * cfg.abs_tol);
    HalfLineFourier d([&psi, power](double s) { return std::pow(s, power + 1) * psi(s); }, S, psi.knots(), cfg);
    const int half = static_cast<int>(std::ceil(xi_max / step));
    xi_max_ = half * step;
    val_.assign(2 * half + 1, 0.0);
    der_.assign(2 * half + 1, 0.0);
    for (int j = 0; j <= half; ++j) {
        double xi = j * step;
        cplx v = direct_(xi);
        cplx dv = cplx(0.0, 1.0) * d(xi);
        val_[half + j] = v;
        der_[half + j] = dv;
        if (j == 0) continue;
        val_[half - j] = std::conj(v);
        der_[half - j] = -std::conj(dv);
    }
}

cplx FourierTable::operator()(double xi) const {
    if (val_.size() == 1) return 0.0;
    if (std::abs(xi) >= xi_max_) return direct_(xi);
    double pos = (xi + xi_max_) / step_;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= val_.size()) i = val_.size() - 2;
    double t = pos - static_cast<double>(i);
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * val_[i] + h10 * step_ * der_[i] + h01 * val_[i + 1] + h11 * step_ * der_[i + 1];
}

}  // namespace axb
