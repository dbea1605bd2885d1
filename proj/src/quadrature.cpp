#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>
#include <string>

#include "axb/errors.hpp"
#include "axb/quadrature.hpp"

namespace axb {

namespace {

// Gauss-Kronrod 10/21 point rule (QUADPACK qk21).
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208643474708, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <class T>
bool finite(const T& v) {
    if constexpr (std::is_same_v<T, double>) return std::isfinite(v);
    else return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct RuleOut {
    T value;
    double err;
    double floor;  // 50 eps int|f|, the roundoff limit of the estimate
};

template <class T, class F>
RuleOut<T> gk21(const F& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    std::array<T, 21> fv;
    T fc = f(c);
    fv[20] = fc;
    T resk = fc * wgk[10];
    T resg = T{};
    double resabs = std::abs(fc) * wgk[10];
    for (int j = 0; j < 10; ++j) {
        double dx = h * xgk[j];
        T f1 = f(c - dx), f2 = f(c + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        resk += wgk[j] * (f1 + f2);
        resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    T mean = resk * 0.5;
    double resasc = wgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
    const double ah = std::abs(h);
    resasc *= ah;
    resabs *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double floor = 50.0 * kEps * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(floor, err);
    if (!finite(resk)) throw NumericError("integrand is not finite on [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "]");
    return {resk * h, err, floor};
}

template <class T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    std::size_t m = v.size() / 2;
    return pairwise_sum(v.subspan(0, m)) + pairwise_sum(v.subspan(m));
}

template <class T>
using MappedFn = std::function<T(double)>;

template <class T>
struct Piece {
    MappedFn<T> fn;
    double lo, hi;
};

template <class T>
struct Seg {
    double lo, hi;
    T val;
    double err, floor;
    int depth;
    int piece;
};

template <class T>
QuadResult<T> adaptive(const std::vector<Piece<T>>& pieces, const QuadratureConfig& cfg) {
    long evals = 0;
    auto cmp = [](const Seg<T>& a, const Seg<T>& b) { return a.err < b.err; };
    std::priority_queue<Seg<T>, std::vector<Seg<T>>, decltype(cmp)> heap(cmp);
    std::vector<Seg<T>> frozen;
    T total{};
    double err_total = 0.0;
    for (int p = 0; p < static_cast<int>(pieces.size()); ++p) {
        const auto& pc = pieces[p];
        if (pc.hi <= pc.lo) continue;
        auto r = gk21<T>(pc.fn, pc.lo, pc.hi);
        evals += 21;
        heap.push({pc.lo, pc.hi, r.value, r.err, r.floor, 0, p});
        total += r.value;
        err_total += r.err;
    }
    int count = static_cast<int>(heap.size());
    auto tol = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
    while (!heap.empty() && err_total > tol()) {
        Seg<T> s = heap.top();
        heap.pop();
        // at the roundoff floor splitting cannot help
        if (s.err <= s.floor) {
            frozen.push_back(s);
            continue;
        }
        double mid = 0.5 * (s.lo + s.hi);
        bool tiny = (s.hi - s.lo) <= 64.0 * kEps * std::max(std::abs(s.lo), std::abs(s.hi)) ||
                    mid <= s.lo || mid >= s.hi;
        if (s.depth >= cfg.max_depth || tiny) {
            frozen.push_back(s);
            continue;
        }
        if (count >= cfg.max_intervals) {
            heap.push(s);
            break;
        }
        const auto& fn = pieces[s.piece].fn;
        auto left = gk21<T>(fn, s.lo, mid);
        auto right = gk21<T>(fn, mid, s.hi);
        evals += 42;
        ++count;
        total += left.value + right.value - s.val;
        err_total += left.err + right.err - s.err;
        heap.push({s.lo, mid, left.value, left.err, left.floor, s.depth + 1, s.piece});
        heap.push({mid, s.hi, right.value, right.err, right.floor, s.depth + 1, s.piece});
    }
    std::vector<Seg<T>> all = std::move(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Seg<T>& a, const Seg<T>& b) {
        return a.piece != b.piece ? a.piece < b.piece : a.lo < b.lo;
    });
    std::vector<T> vals;
    std::vector<double> errs, floors;
    vals.reserve(all.size());
    for (const auto& s : all) {
        vals.push_back(s.val);
        errs.push_back(s.err);
        floors.push_back(s.floor);
    }
    QuadResult<T> out;
    out.value = pairwise_sum<T>(vals);
    out.err_est = pairwise_sum<double>(errs);
    out.evaluations = evals;
    double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(out.value));
    // error at the roundoff level of the cancelling sum: accept, like QUADPACK's ier = 2
    const double floor_total = pairwise_sum<double>(floors);
    if (out.err_est > target && out.err_est > 2.0 * floor_total) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "adaptive quadrature did not converge: error estimate %.3e > %.3e (value %.6e)",
                      out.err_est, target, std::abs(out.value));
        throw NumericError(msg,
                           std::abs(out.value), out.err_est);
    }
    return out;
}

template <class T>
QuadResult<T> integrate_impl(const std::function<T(double)>& f, double a, double b,
                             const QuadratureConfig& cfg, const IntegrateOptions& opt) {
    cfg.validate();
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
    if (a == b) return {};
    if (a > b) {
        auto r = integrate_impl<T>(f, b, a, cfg, [&] {
            IntegrateOptions o = opt;
            std::swap(o.sqrt_left, o.sqrt_right);
            return o;
        }());
        r.value = -r.value;
        return r;
    }
    auto eval = [&f, &opt](double x) -> T {
        if (opt.observer) opt.observer(x);
        return f(x);
    };

    // split points
    std::vector<double> pts;
    for (double p : opt.breakpoints)
        if (p > a && p < b && std::isfinite(p)) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double lo = a, hi = b;
    if (std::isinf(a) && std::isinf(b) && pts.empty()) pts.push_back(0.0);
    if (opt.envelope_rate > 0.0) {
        double span = std::log(1.0 / cfg.v_max_envelope) / opt.envelope_rate;
        if (std::isinf(hi)) hi = (pts.empty() ? std::max(lo, 0.0) : std::max(pts.back(), 0.0)) + span;
        if (std::isinf(lo)) lo = (pts.empty() ? std::min(hi, 0.0) : std::min(pts.front(), 0.0)) - span;
        std::erase_if(pts, [&](double p) { return p <= lo || p >= hi; });
    }
    if (opt.sqrt_left && std::isinf(hi) && pts.empty()) pts.push_back(lo + 1.0);
    if (opt.sqrt_right && std::isinf(lo) && pts.empty()) pts.push_back(hi - 1.0);

    std::vector<double> edges;
    edges.push_back(lo);
    edges.insert(edges.end(), pts.begin(), pts.end());
    edges.push_back(hi);

    std::vector<Piece<T>> pieces;
    const std::size_t np = edges.size() - 1;
    for (std::size_t i = 0; i < np; ++i) {
        double p = edges[i], q = edges[i + 1];
        bool sl = opt.sqrt_left && i == 0 && std::isfinite(p);
        bool sr = opt.sqrt_right && i + 1 == np && std::isfinite(q);
        if (std::isinf(q)) {
            if (sl) throw DomainError("integrate: endpoint singularity on an unbounded piece");
            pieces.push_back({[eval, p](double th) -> T {
                                  double ang = 0.5 * std::numbers::pi * th;
                                  double c = std::cos(ang);
                                  if (c <= 0.0) return T{};
                                  double x = p + std::tan(ang);
                                  return eval(x) * (0.5 * std::numbers::pi / (c * c));
                              },
                              0.0, 1.0});
            continue;
        }
        if (std::isinf(p)) {
            pieces.push_back({[eval, q](double th) -> T {
                                  double ang = 0.5 * std::numbers::pi * th;
                                  double c = std::cos(ang);
                                  if (c <= 0.0) return T{};
                                  double x = q - std::tan(ang);
                                  return eval(x) * (0.5 * std::numbers::pi / (c * c));
                              },
                              0.0, 1.0});
            continue;
        }
        auto left_sqrt = [eval](double p0, double q0) {
            return Piece<T>{[eval, p0](double w) -> T { return eval(p0 + w * w) * (2.0 * w); }, 0.0,
                            std::sqrt(q0 - p0)};
        };
        auto right_sqrt = [eval](double p0, double q0) {
            return Piece<T>{[eval, q0](double w) -> T { return eval(q0 - w * w) * (2.0 * w); }, 0.0,
                            std::sqrt(q0 - p0)};
        };
        if (sl && sr) {
            double m = 0.5 * (p + q);
            pieces.push_back(left_sqrt(p, m));
            pieces.push_back(right_sqrt(m, q));
        } else if (sl) {
            pieces.push_back(left_sqrt(p, q));
        } else if (sr) {
            pieces.push_back(right_sqrt(p, q));
        } else {
            pieces.push_back({eval, p, q});
        }
    }
    return adaptive<T>(pieces, cfg);
}

// Legendre values P_j(t_m) at the 16 Gauss nodes
struct LegendreTable {
    GaussLegendre gl{16};
    std::array<std::array<double, 16>, 16> proj{};  // proj[j][m] = (2j+1)/2 w_m P_j(t_m)
    LegendreTable() {
        for (int m = 0; m < 16; ++m) {
            double t = gl.nodes[m];
            double p0 = 1.0, p1 = t;
            for (int j = 0; j < 16; ++j) {
                double pj;
                if (j == 0) pj = p0;
                else if (j == 1) pj = p1;
                else {
                    pj = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = pj;
                }
                proj[j][m] = 0.5 * (2.0 * j + 1.0) * gl.weights[m] * pj;
            }
        }
    }
};

const LegendreTable& legendre16() {
    static const LegendreTable t;
    return t;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("QuadratureConfig: tolerances must be > 0");
    if (max_depth < 1 || max_depth > 60) throw DomainError("QuadratureConfig: max_depth must be in [1, 60]");
    if (!(v_max_envelope > 0.0 && v_max_envelope < 1.0))
        throw DomainError("QuadratureConfig: v_max_envelope must be in (0, 1)");
}

QuadratureConfig QuadratureConfig::scaled(double factor) const {
    QuadratureConfig c = *this;
    c.abs_tol *= factor;
    c.rel_tol *= factor;
    return c;
}

QuadResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                             const QuadratureConfig& cfg, const IntegrateOptions& opt) {
    return integrate_impl<double>(f, a, b, cfg, opt);
}

QuadResult<cplx> integrate_complex(const std::function<cplx(double)>& f, double a, double b,
                                   const QuadratureConfig& cfg, const IntegrateOptions& opt) {
    return integrate_impl<cplx>(f, a, b, cfg, opt);
}

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
    if (n < 1) throw DomainError("GaussLegendre: n must be >= 1");
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) { p1 = x; p0 = 1.0; }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void sph_bessel_batch(double x, std::span<double> out) {
    const int n = static_cast<int>(out.size());
    if (n == 0) return;
    double ax = std::abs(x);
    if (ax < 1e-300) {
        std::fill(out.begin(), out.end(), 0.0);
        out[0] = 1.0;
        return;
    }
    double j0 = std::sin(ax) / ax;
    double j1 = std::sin(ax) / (ax * ax) - std::cos(ax) / ax;
    if (ax >= n) {
        out[0] = j0;
        if (n > 1) out[1] = j1;
        for (int k = 1; k + 1 < n; ++k) out[k + 1] = (2.0 * k + 1.0) / ax * out[k] - out[k - 1];
    } else {
        // Miller's downward recurrence, normalised to the larger of j0, j1
        int start = n + 20 + static_cast<int>(ax);
        std::vector<double> f(start + 2, 0.0);
        f[start + 1] = 0.0;
        f[start] = 1e-30;
        for (int k = start; k >= 1; --k) {
            f[k - 1] = (2.0 * k + 1.0) / ax * f[k] - f[k + 1];
            if (std::abs(f[k - 1]) > 1e250) {
                for (int m = k - 1; m <= start; ++m) f[m] *= 1e-250;
            }
        }
        double scale = std::abs(j0) >= std::abs(j1) ? j0 / f[0] : j1 / f[1];
        for (int k = 0; k < n; ++k) out[k] = f[k] * scale;
    }
    if (x < 0.0)
        for (int k = 1; k < n; k += 2) out[k] = -out[k];
}

QuadResult<cplx> integrate_oscillatory(const std::function<cplx(double)>& amp, double omega,
                                       double a, double b, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integrate_oscillatory: finite interval required");
    if (a == b) return {};
    if (a > b) {
        auto r = integrate_oscillatory(amp, omega, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    if (cfg.oscillation_mode == OscillationMode::none || std::abs(omega) * (b - a) <= 2.0) {
        return integrate_complex([&](double x) { return amp(x) * std::exp(cplx(0.0, omega * x)); }, a, b,
                                 cfg);
    }
    const auto& L = legendre16();
    long evals = 0;

    struct PanelOut {
        cplx value;
        double err, absint;
    };
    std::array<double, 16> jb;
    auto panel = [&](double lo, double hi) {
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        std::array<cplx, 16> av;
        double absint = 0.0;
        for (int m = 0; m < 16; ++m) {
            av[m] = amp(mid + half * L.gl.nodes[m]);
            absint += L.gl.weights[m] * std::abs(av[m]) * half;
        }
        evals += 16;
        std::array<cplx, 16> c{};
        for (int j = 0; j < 16; ++j)
            for (int m = 0; m < 16; ++m) c[j] += L.proj[j][m] * av[m];
        double err = 2.0 * half * (std::abs(c[14]) + std::abs(c[15]));
        cplx val = 0.0;
        if (std::abs(omega) * 2.0 * half <= 2.0 && cfg.oscillation_mode == OscillationMode::automatic) {
            for (int m = 0; m < 16; ++m)
                val += L.gl.weights[m] * av[m] * std::exp(cplx(0.0, omega * (mid + half * L.gl.nodes[m])));
            val *= half;
        } else {
            sph_bessel_batch(omega * half, jb);
            static const std::array<cplx, 4> ipow = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
            for (int j = 0; j < 16; ++j) val += c[j] * 2.0 * ipow[j % 4] * jb[j];
            val *= half * std::exp(cplx(0.0, omega * mid));
        }
        return PanelOut{val, err, absint};
    };

    // first pass for the magnitude scale
    const int n0 = 16;
    double absint = 0.0;
    for (int i = 0; i < n0; ++i) absint += panel(a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0).absint;
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * absint);

    std::vector<cplx> vals;
    double err_total = 0.0;
    std::function<void(double, double, int)> refine = [&](double lo, double hi, int depth) {
        PanelOut p = panel(lo, hi);
        double budget = std::max(tol * (hi - lo) / (b - a), 64.0 * kEps * p.absint);
        if (p.err <= budget || depth >= std::min(cfg.max_depth, 24)) {
            vals.push_back(p.value);
            err_total += p.err;
            return;
        }
        double mid = 0.5 * (lo + hi);
        refine(lo, mid, depth + 1);
        refine(mid, hi, depth + 1);
    };
    for (int i = 0; i < n0; ++i) refine(a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0, 0);
    QuadResult<cplx> out{pairwise_sum<cplx>(vals), err_total, evals};
    if (err_total > 100.0 * tol)
        throw NumericError("oscillatory quadrature did not converge", std::abs(out.value), err_total);
    return out;
}

}  // namespace axb
