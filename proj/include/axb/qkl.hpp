#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace axb {

using cplx = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

struct GaussianRational {
    Rational re, im;

    GaussianRational() = default;
    GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r), im(0) {}
    static GaussianRational imag_unit() { return {0, 1}; }

    GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
    GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    bool operator==(const GaussianRational& o) const = default;
    bool is_zero() const { return re == 0 && im == 0; }
    cplx to_complex() const;
    std::string str() const;
};

// Homogeneous polynomial sum_i coef[i] s^i c^(degree - i).
class HomogPoly2 {
public:
    explicit HomogPoly2(int degree = 0);
    static HomogPoly2 monomial(int ds, int dc, GaussianRational coef);

    int degree() const { return degree_; }
    const GaussianRational& coeff(int i) const { return coef_.at(i); }
    void set_coeff(int i, GaussianRational v) { coef_.at(i) = std::move(v); }

    HomogPoly2 operator+(const HomogPoly2& o) const;
    HomogPoly2 operator-(const HomogPoly2& o) const;
    HomogPoly2 operator*(const GaussianRational& k) const;
    HomogPoly2 times_s() const;
    HomogPoly2 times_c() const;
    HomogPoly2 d_s() const;
    HomogPoly2 d_c() const;
    HomogPoly2 flip_s() const;  // s -> -s
    bool operator==(const HomogPoly2& o) const;
    bool is_zero() const;
    cplx evaluate(double s, double c) const;
    std::string latex(const std::string& s = "x", const std::string& c = "y") const;

private:
    int degree_;
    std::vector<GaussianRational> coef_;
};

struct TailInfo {
    int order = 0;           // e^{lv} q - a = O(e^{-2 order v}); 0 when identically a
    GaussianRational leading;
    double bound = 0.0;      // sup_{v >= 1} e^{2vl} |q - a e^{-vl}|, infinite when unbounded
};

struct QklTable {
    int l = 0;
    std::vector<HomogPoly2> P;
    std::vector<GaussianRational> a;
    std::vector<TailInfo> tail;
    double b_bound = 0.0;
    std::vector<int> zero_k;  // indices with P_{k,l} identically zero

    // floating copies: P_k(1 - z, 1 + z) as polynomials in z
    std::vector<std::vector<cplx>> pz;
    // 2^l P_k(1 - z, 1 + z) - a_k (1 - z)^{2l}, exact up to rounding of the coefficients
    std::vector<std::vector<cplx>> tail_num;
};

QklTable build_qkl(int l);
const QklTable& qkl_table(int l);  // cached, safe to share
std::vector<GaussianRational> akl_limits(const QklTable& t);

cplx eval_q(const QklTable& t, int k, double v);
cplx eval_q_scaled(const QklTable& t, int k, double v);  // e^{lv} q_{k,l}(v)

// D_{l,u}(v) = D^l (e^{iuv} - e^{-iuv}) with D f = (f / sh v)'.
cplx eval_D(const QklTable& t, double u, double v);
cplx eval_D(int l, double u, double v);
cplx eval_D_direct(const QklTable& t, double u, double v);
cplx eval_D_series(int l, double u, double v);

// Checks used by the audit.
bool parity_holds(const QklTable& t);
bool recursion_closes(const QklTable& t, const QklTable& next);

}  // namespace axb
