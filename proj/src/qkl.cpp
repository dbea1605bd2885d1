#include "axb/qkl.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "axb/errors.hpp"

namespace axb {

namespace {

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string rat_str(const Rational& r) { return r.str(); }

// Polynomial in s with terms s^i and c s^i, c^2 reduced to 1 + s^2.
struct Reduced {
    std::map<std::pair<int, int>, GaussianRational> terms;  // (power of s, power of c in {0,1})

    void add(int i, int j, const GaussianRational& v) {
        if (v.is_zero()) return;
        auto& slot = terms[{i, j}];
        slot += v;
        if (slot.is_zero()) terms.erase({i, j});
    }
    void add(const Reduced& o, const GaussianRational& k = GaussianRational(1)) {
        for (const auto& [key, v] : o.terms) add(key.first, key.second, v * k);
    }
    // s^i c^j with c^2 -> 1 + s^2
    void add_monomial(int i, int j, const GaussianRational& v) {
        if (j < 2) {
            add(i, j, v);
            return;
        }
        add_monomial(i, j - 2, v);
        add_monomial(i + 2, j - 2, v);
    }
    Reduced times_s() const {
        Reduced r;
        for (const auto& [key, v] : terms) r.add(key.first + 1, key.second, v);
        return r;
    }
    Reduced times_c() const {
        Reduced r;
        for (const auto& [key, v] : terms) r.add_monomial(key.first, key.second + 1, v);
        return r;
    }
    // d/dv with s' = c, c' = s
    Reduced dv() const {
        Reduced r;
        for (const auto& [key, v] : terms) {
            auto [i, j] = key;
            if (i > 0) r.add_monomial(i - 1, j + 1, v * GaussianRational(i));
            if (j > 0) r.add_monomial(i + 1, j - 1, v * GaussianRational(j));
        }
        return r;
    }
    bool operator==(const Reduced& o) const { return terms == o.terms; }
};

Reduced reduce(const HomogPoly2& p) {
    Reduced r;
    for (int i = 0; i <= p.degree(); ++i) r.add_monomial(i, p.degree() - i, p.coeff(i));
    return r;
}

// sum coef * (1 - z)^i (1 + z)^(d - i) as exact coefficients in z
std::vector<GaussianRational> substitute_z(const HomogPoly2& p) {
    const int d = p.degree();
    std::vector<GaussianRational> out(d + 1);
    for (int i = 0; i <= d; ++i) {
        if (p.coeff(i).is_zero()) continue;
        // (1 - z)^i (1 + z)^(d - i)
        std::vector<Rational> poly{1};
        auto mul = [&](int sign) {
            std::vector<Rational> next(poly.size() + 1, 0);
            for (std::size_t m = 0; m < poly.size(); ++m) {
                next[m] += poly[m];
                next[m + 1] += poly[m] * sign;
            }
            poly = std::move(next);
        };
        for (int m = 0; m < i; ++m) mul(-1);
        for (int m = 0; m < d - i; ++m) mul(+1);
        for (int m = 0; m <= d; ++m) out[m] += p.coeff(i) * GaussianRational(poly[m]);
    }
    return out;
}

Rational binomial(int n, int k) {
    Rational r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

// 2^l P(1 - z, 1 + z) / (1 - z)^(2l) as a power series in z, terms 0..order
std::vector<GaussianRational> scaled_series(const HomogPoly2& p, int l, int order) {
    auto num = substitute_z(p);
    Rational two_l = 1;
    for (int j = 0; j < l; ++j) two_l *= 2;
    std::vector<GaussianRational> out(order + 1);
    for (int m = 0; m <= order; ++m) {
        GaussianRational acc;
        for (int j = 0; j <= m && j < static_cast<int>(num.size()); ++j) {
            int r = m - j;
            Rational c = l == 0 ? Rational(r == 0 ? 1 : 0) : binomial(2 * l - 1 + r, r);
            acc += num[j] * GaussianRational(c);
        }
        out[m] = acc * GaussianRational(two_l);
    }
    return out;
}

cplx horner_z(const std::vector<cplx>& c, double z) {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

}  // namespace

// ---- GaussianRational --------------------------------------------------

cplx GaussianRational::to_complex() const { return {to_double(re), to_double(im)}; }

std::string GaussianRational::str() const {
    if (im == 0) return rat_str(re);
    if (re == 0) return rat_str(im) + "i";
    std::string sign = im > 0 ? "+" : "-";
    return "(" + rat_str(re) + sign + rat_str(im > 0 ? im : Rational(-im)) + "i)";
}

// ---- HomogPoly2 --------------------------------------------------------

HomogPoly2::HomogPoly2(int degree) : degree_(degree), coef_(degree + 1) {
    if (degree < 0) throw DomainError("HomogPoly2: negative degree");
}

HomogPoly2 HomogPoly2::monomial(int ds, int dc, GaussianRational coef) {
    HomogPoly2 p(ds + dc);
    p.coef_[ds] = std::move(coef);
    return p;
}

HomogPoly2 HomogPoly2::operator+(const HomogPoly2& o) const {
    if (o.degree_ != degree_) {
        if (o.is_zero()) return *this;
        if (is_zero()) return o;
        throw DomainError("HomogPoly2: degree mismatch in +");
    }
    HomogPoly2 r(degree_);
    for (int i = 0; i <= degree_; ++i) r.coef_[i] = coef_[i] + o.coef_[i];
    return r;
}

HomogPoly2 HomogPoly2::operator-(const HomogPoly2& o) const { return *this + o * GaussianRational(-1); }

HomogPoly2 HomogPoly2::operator*(const GaussianRational& k) const {
    HomogPoly2 r(degree_);
    for (int i = 0; i <= degree_; ++i) r.coef_[i] = coef_[i] * k;
    return r;
}

HomogPoly2 HomogPoly2::times_s() const {
    HomogPoly2 r(degree_ + 1);
    for (int i = 0; i <= degree_; ++i) r.coef_[i + 1] = coef_[i];
    return r;
}

HomogPoly2 HomogPoly2::times_c() const {
    HomogPoly2 r(degree_ + 1);
    for (int i = 0; i <= degree_; ++i) r.coef_[i] = coef_[i];
    return r;
}

HomogPoly2 HomogPoly2::d_s() const {
    if (degree_ == 0) return HomogPoly2(0);
    HomogPoly2 r(degree_ - 1);
    for (int i = 1; i <= degree_; ++i) r.coef_[i - 1] = coef_[i] * GaussianRational(i);
    return r;
}

HomogPoly2 HomogPoly2::d_c() const {
    if (degree_ == 0) return HomogPoly2(0);
    HomogPoly2 r(degree_ - 1);
    for (int i = 0; i < degree_; ++i) r.coef_[i] = coef_[i] * GaussianRational(degree_ - i);
    return r;
}

HomogPoly2 HomogPoly2::flip_s() const {
    HomogPoly2 r = *this;
    for (int i = 1; i <= degree_; i += 2) r.coef_[i] = -r.coef_[i];
    return r;
}

bool HomogPoly2::operator==(const HomogPoly2& o) const {
    if (is_zero() && o.is_zero()) return true;
    return degree_ == o.degree_ && coef_ == o.coef_;
}

bool HomogPoly2::is_zero() const {
    for (const auto& c : coef_)
        if (!c.is_zero()) return false;
    return true;
}

cplx HomogPoly2::evaluate(double s, double c) const {
    cplx acc = 0.0;
    for (int i = 0; i <= degree_; ++i) acc += coef_[i].to_complex() * std::pow(s, i) * std::pow(c, degree_ - i);
    return acc;
}

std::string HomogPoly2::latex(const std::string& s, const std::string& c) const {
    std::ostringstream os;
    bool first = true;
    for (int i = degree_; i >= 0; --i) {
        const auto& k = coef_[i];
        if (k.is_zero()) continue;
        std::string ks = k.str();
        if (!first) os << (ks[0] == '-' ? " - " : " + ");
        else if (ks[0] == '-') os << "-";
        if (ks[0] == '-') ks = ks.substr(1);
        bool unit = ks == "1";
        if (ks == "1i") ks = "i";
        int j = degree_ - i;
        if (!unit || (i == 0 && j == 0)) os << ks;
        if (i > 0) os << s << (i > 1 ? "^{" + std::to_string(i) + "}" : "");
        if (j > 0) os << c << (j > 1 ? "^{" + std::to_string(j) + "}" : "");
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

// ---- table construction ------------------------------------------------

QklTable build_qkl(int l) {
    if (l < 0 || l > 12) throw DomainError("build_qkl: l must be in [0, 12]");
    const GaussianRational I = GaussianRational::imag_unit();
    std::vector<HomogPoly2> P{HomogPoly2::monomial(0, 0, 1)};
    for (int m = 0; m < l; ++m) {
        // sh^{2m+1} (q / sh)' = P_s s c + P_c s^2 - 2m P c
        auto Q = [&](const HomogPoly2& p) {
            return p.d_s().times_s().times_c() + p.d_c().times_s().times_s() - p.times_c() * GaussianRational(2 * m);
        };
        std::vector<HomogPoly2> next;
        next.push_back(Q(P[0]) - P[0].times_c());
        for (int k = 1; k <= m; ++k) next.push_back(P[k - 1].times_s() * I + Q(P[k]) - P[k].times_c());
        next.push_back(P[m].times_s() * I);
        P = std::move(next);
    }

    QklTable t;
    t.l = l;
    t.P = P;
    for (int k = 0; k <= l; ++k) {
        if (P[k].is_zero()) t.zero_k.push_back(k);
        auto ser = scaled_series(P[k], l, l + 4);
        t.a.push_back(ser[0]);
        TailInfo ti;
        for (int j = 1; j < static_cast<int>(ser.size()); ++j)
            if (!ser[j].is_zero()) {
                ti.order = j;
                ti.leading = ser[j];
                break;
            }
        t.tail.push_back(ti);
        auto z = substitute_z(P[k]);
        std::vector<cplx> zc;
        for (const auto& c : z) zc.push_back(c.to_complex());
        t.pz.push_back(std::move(zc));
        std::vector<cplx> tn(2 * l + 1, 0.0);
        Rational two_l = 1;
        for (int j = 0; j < l; ++j) two_l *= 2;
        for (int m = 0; m <= 2 * l; ++m) {
            GaussianRational c = GaussianRational(m % 2 == 0 ? binomial(2 * l, m) : Rational(-binomial(2 * l, m)));
            GaussianRational e = t.a[k] * c * GaussianRational(-1);
            if (m < static_cast<int>(z.size())) e += z[m] * GaussianRational(two_l);
            tn[m] = e.to_complex();
        }
        t.tail_num.push_back(std::move(tn));
    }
    // b_l: numerical sup on a grid, unbounded when the series order is too low
    for (int k = 0; k <= l; ++k) {
        auto& ti = t.tail[k];
        if (ti.order == 0) {
            ti.bound = 0.0;
        } else if (2 * ti.order < l) {
            ti.bound = std::numeric_limits<double>::infinity();
        } else {
            double best = 0.0;
            for (double v = 1.0; v <= 40.0; v += 0.005) {
                double z = std::exp(-2.0 * v);
                double diff = std::abs(horner_z(t.tail_num[k], z)) / std::pow(1.0 - z, 2 * l);
                best = std::max(best, std::exp(v * l) * diff);
            }
            // beyond the grid the leading term decides
            double lead = std::abs(ti.leading.to_complex());
            if (2 * ti.order == l) best = std::max(best, lead);
            ti.bound = best;
        }
        t.b_bound = std::max(t.b_bound, ti.bound);
    }
    return t;
}

const QklTable& qkl_table(int l) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QklTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(l);
    if (it == cache.end()) it = cache.emplace(l, std::make_unique<QklTable>(build_qkl(l))).first;
    return *it->second;
}

std::vector<GaussianRational> akl_limits(const QklTable& t) { return t.a; }

// ---- floating evaluation -----------------------------------------------

cplx eval_q_scaled(const QklTable& t, int k, double v) {
    if (k < 0 || k > t.l) throw DomainError("eval_q: k out of range");
    if (t.l == 0) return 1.0;
    if (!(v > 0.0)) throw DomainError("eval_q: v must be > 0");
    if (v < 2.0) {
        // direct form, P(sh, ch) / sh^{2l}
        double s = std::sinh(v), c = std::cosh(v);
        return t.P[k].evaluate(s, c) * std::exp(t.l * v - 2.0 * t.l * std::log(s));
    }
    double z = std::exp(-2.0 * v);
    return std::pow(2.0, t.l) * horner_z(t.pz[k], z) / std::pow(1.0 - z, 2 * t.l);
}

cplx eval_q(const QklTable& t, int k, double v) {
    if (t.l == 0) {
        if (k != 0) throw DomainError("eval_q: k out of range");
        return 1.0;
    }
    return eval_q_scaled(t, k, v) * std::exp(-t.l * v);
}

cplx eval_D_direct(const QklTable& t, double u, double v) {
    cplx ep = std::exp(cplx(0.0, u * v)), em = std::conj(ep);
    cplx acc = 0.0;
    double uk = 1.0;
    for (int k = 0; k <= t.l; ++k) {
        double sg = (k % 2 == 0) ? 1.0 : -1.0;
        acc += eval_q(t, k, v) * (uk * ep - sg * uk * em);
        uk *= u;
    }
    return acc;
}

cplx eval_D_series(int l, double u, double v) {
    // odd functions stored as f(v) = v F(v^2); sh v = v S(v^2)
    constexpr int M = 48;
    std::vector<double> F(M), S(M);
    double fact = 1.0;  // (2j+1)!
    double upow = u;    // u^{2j+1}
    for (int j = 0; j < M; ++j) {
        if (j > 0) {
            fact *= (2.0 * j) * (2.0 * j + 1.0);
            upow *= u * u;
        }
        F[j] = (j % 2 == 0 ? 1.0 : -1.0) * upow / fact;
        S[j] = 1.0 / fact;
    }
    for (int step = 0; step < l; ++step) {
        int n = static_cast<int>(F.size());
        std::vector<double> G(n);
        for (int j = 0; j < n; ++j) {  // G = F / S
            double acc = F[j];
            for (int i = 1; i <= j; ++i) acc -= S[i] * G[j - i];
            G[j] = acc / S[0];
        }
        std::vector<double> Fn(n - 1);
        for (int j = 0; j + 1 < n; ++j) Fn[j] = 2.0 * (j + 1) * G[j + 1];
        F = std::move(Fn);
    }
    double w = v * v, acc = 0.0;
    for (auto it = F.rbegin(); it != F.rend(); ++it) acc = acc * w + *it;
    return cplx(0.0, 2.0 * v * acc);
}

cplx eval_D(const QklTable& t, double u, double v) {
    if (v == 0.0) return 0.0;
    if (v < 0.0) return -eval_D(t, u, -v);
    if (t.l == 0) return cplx(0.0, 2.0 * std::sin(u * v));
    if (v < 1.0 && std::abs(u) * v < 4.0) return eval_D_series(t.l, u, v);
    return eval_D_direct(t, u, v);
}

cplx eval_D(int l, double u, double v) { return eval_D(qkl_table(l), u, v); }

// ---- audits ------------------------------------------------------------

bool parity_holds(const QklTable& t) {
    for (int k = 0; k <= t.l; ++k) {
        HomogPoly2 want = k % 2 == 0 ? t.P[k] : t.P[k] * GaussianRational(-1);
        if (!(t.P[k].flip_s() == want)) return false;
    }
    return true;
}

bool recursion_closes(const QklTable& t, const QklTable& next) {
    if (next.l != t.l + 1) return false;
    const GaussianRational I = GaussianRational::imag_unit();
    const int l = t.l;
    std::vector<Reduced> N;
    for (const auto& p : t.P) N.push_back(reduce(p));
    for (int k = 0; k <= l + 1; ++k) {
        // sh^{2l+2} q_{k,l+1} = i s N_{k-1} + s N_k' - (2l + 1) c N_k
        Reduced cand;
        if (k >= 1) cand.add(N[k - 1].times_s(), I);
        if (k <= l) {
            cand.add(N[k].dv().times_s());
            cand.add(N[k].times_c(), GaussianRational(-(2 * l + 1)));
        }
        if (!(cand == reduce(next.P[k]))) return false;
    }
    return true;
}

}  // namespace axb
