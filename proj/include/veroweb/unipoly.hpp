#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "veroweb/field.hpp"

namespace veroweb {

// Univariate polynomial in the pencil parameter t over the scalar field K.
// Coefficient i is the coefficient of t^i; the leading coefficient of a
// nonzero polynomial is nonzero.
template <class K>
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
    UniPoly(std::initializer_list<K> coeffs) : c_(coeffs) { trim(); }

    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(const K& a) { return UniPoly(std::vector<K>{a}); }
    static UniPoly t() { return UniPoly(std::vector<K>{K(0), K(1)}); }
    // t + a
    static UniPoly linear(const K& a) { return UniPoly(std::vector<K>{a, K(1)}); }

    bool is_zero() const { return c_.empty(); }
    // Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : K(0); }
    const K& leading() const { return c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == K(1); }

    K eval(const K& x) const {
        K acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<K> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * K(static_cast<long long>(i));
        return UniPoly(std::move(d));
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return UniPoly(std::move(r));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        std::vector<K> r(std::max(a.c_.size(), b.c_.size()), K(0));
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return UniPoly(std::move(r));
    }
    friend UniPoly operator-(const UniPoly& a) {
        std::vector<K> r = a.c_;
        for (auto& x : r) x = -x;
        return UniPoly(std::move(r));
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<K> r(a.c_.size() + b.c_.size() - 1, K(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(r));
    }
    friend UniPoly operator*(const K& s, const UniPoly& a) {
        std::vector<K> r = a.c_;
        for (auto& x : r) x = s * x;
        return UniPoly(std::move(r));
    }
    UniPoly& operator+=(const UniPoly& o) { *this = *this + o; return *this; }
    UniPoly& operator-=(const UniPoly& o) { *this = *this - o; return *this; }
    UniPoly& operator*=(const UniPoly& o) { *this = *this * o; return *this; }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    // Euclidean division over the field; returns {quotient, remainder}.
    friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
        if (b.is_zero()) throw degenerate_error("polynomial division by zero");
        std::vector<K> rem = a.c_;
        std::vector<K> quo;
        int db = b.degree();
        if (a.degree() >= db) quo.assign(a.degree() - db + 1, K(0));
        for (int i = a.degree(); i >= db; --i) {
            if (veroweb::is_zero(rem[i])) continue;
            K q = rem[i] / b.c_.back();
            quo[i - db] = q;
            for (int j = 0; j <= db; ++j) rem[i - db + j] -= q * b.c_[j];
        }
        return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
    }

    // Exact division; throws if the remainder is nonzero.
    friend UniPoly divexact(const UniPoly& a, const UniPoly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw internal_error("inexact polynomial division");
        return q;
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        K inv = K(1) / c_.back();
        return inv * *this;
    }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            if (veroweb::is_zero(c_[i])) continue;
            if (!s.empty()) s += " + ";
            s += scalar_to_string(c_[i]);
            if (i >= 1) s += "*" + var;
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s;
    }

  private:
    void trim() {
        while (!c_.empty() && veroweb::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<K> c_;
};

template <class K>
UniPoly<K> poly_pow(const UniPoly<K>& p, int e) {
    UniPoly<K> r = UniPoly<K>::constant(K(1));
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

// Monic gcd by the Euclidean algorithm.
template <class K>
UniPoly<K> poly_gcd(UniPoly<K> a, UniPoly<K> b) {
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// Resultant via the Sylvester matrix (sizes here are desk scale).
template <class K>
K poly_resultant(const UniPoly<K>& a, const UniPoly<K>& b) {
    int m = a.degree(), n = b.degree();
    if (m < 0 || n < 0) return K(0);
    if (m == 0) {
        K r(1);
        for (int i = 0; i < n; ++i) r *= a.coeff(0);
        return r;
    }
    if (n == 0) {
        K r(1);
        for (int i = 0; i < m; ++i) r *= b.coeff(0);
        return r;
    }
    int sz = m + n;
    std::vector<std::vector<K>> s(sz, std::vector<K>(sz, K(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s[i][i + j] = a.coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s[n + i][i + j] = b.coeff(n - j);
    // In-place Gaussian elimination determinant.
    K det(1);
    for (int col = 0, row = 0; col < sz && row < sz; ++col, ++row) {
        int piv = -1;
        for (int i = row; i < sz; ++i)
            if (!is_zero(s[i][col])) { piv = i; break; }
        if (piv < 0) return K(0);
        if (piv != row) { std::swap(s[piv], s[row]); det = -det; }
        det *= s[row][col];
        K inv = K(1) / s[row][col];
        for (int i = row + 1; i < sz; ++i) {
            if (is_zero(s[i][col])) continue;
            K f = s[i][col] * inv;
            for (int j = col; j < sz; ++j) s[i][j] -= f * s[row][j];
        }
    }
    return det;
}

// disc(p) = (-1)^{d(d-1)/2} Res(p, p') / lc(p).
template <class K>
K poly_discriminant(const UniPoly<K>& p) {
    int d = p.degree();
    if (d <= 0) return K(0);
    K res = poly_resultant(p, p.derivative());
    K sign = ((d * (d - 1) / 2) % 2 == 0) ? K(1) : K(-1);
    return sign * res / p.leading();
}

// Yun's squarefree decomposition: returns [(g_1,1),(g_2,2),...] with
// p = lc * prod g_i^i and the g_i squarefree, pairwise coprime, monic.
template <class K>
std::vector<std::pair<UniPoly<K>, int>> squarefree_decomposition(const UniPoly<K>& p) {
    std::vector<std::pair<UniPoly<K>, int>> out;
    if (p.degree() <= 0) return out;
    UniPoly<K> a = p.monic();
    UniPoly<K> da = a.derivative();
    UniPoly<K> g = poly_gcd(a, da);
    UniPoly<K> w = divexact(a, g);
    UniPoly<K> y = divexact(da, g);
    int i = 1;
    while (w.degree() > 0) {
        UniPoly<K> z = y - w.derivative();
        UniPoly<K> f = poly_gcd(w, z);
        if (f.degree() > 0) out.emplace_back(f, i);
        w = divexact(w, f);
        y = divexact(z, f);
        ++i;
    }
    return out;
}

namespace detail {

inline std::vector<Int> small_divisors(Int n, size_t cap = 4096) {
    std::vector<Int> out;
    if (n < 0) n = -n;
    if (n == 0) return out;
    for (Int d = 1; d * d <= n && out.size() < cap; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
        if (d > 200000) break;  // give up on huge leading/trailing coefficients
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// All rational roots of p with multiplicities, found by the classical
// numerator/denominator divisor search plus a small direct scan.  Complete
// whenever the coefficients are of desk scale; huge coefficients may leave
// rational roots undetected (the residual factor is then reported whole).
inline std::vector<std::pair<Rational, int>> rational_roots(UniPoly<Rational> p) {
    std::vector<std::pair<Rational, int>> roots;
    if (p.degree() <= 0) return roots;
    // Strip t^k.
    int k0 = 0;
    while (k0 <= p.degree() && veroweb::is_zero(p.coeff(k0))) ++k0;
    if (k0 > 0) {
        std::vector<Rational> c(p.coeffs().begin() + k0, p.coeffs().end());
        p = UniPoly<Rational>(std::move(c));
        roots.emplace_back(Rational(0), k0);
    }
    if (p.degree() <= 0) return roots;
    // Clear denominators.
    Int lcm = 1;
    for (auto& c : p.coeffs()) lcm = boost::multiprecision::lcm(lcm, denominator(c));
    std::vector<Int> ic;
    for (auto& c : p.coeffs()) ic.push_back(numerator(c) * (lcm / denominator(c)));
    std::vector<Rational> cands;
    for (const Int& pn : detail::small_divisors(ic.front()))
        for (const Int& qn : detail::small_divisors(ic.back())) {
            cands.emplace_back(pn, qn);
            cands.emplace_back(-pn, qn);
        }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (const auto& r : cands) {
        int mult = 0;
        while (p.degree() > 0 && veroweb::is_zero(p.eval(r))) {
            p = divexact(p, UniPoly<Rational>::linear(-r));
            ++mult;
        }
        if (mult > 0) roots.emplace_back(r, mult);
    }
    return roots;
}

inline std::vector<std::pair<Gaussian, int>> rational_roots(const UniPoly<Gaussian>& p) {
    // Root search in the quadratic extension is limited to roots with
    // rational components visible through the real part of the polynomial.
    std::vector<std::pair<Gaussian, int>> out;
    bool real = true;
    for (auto& c : p.coeffs()) real = real && c.im.is_zero();
    if (!real) return out;
    std::vector<Rational> rc;
    for (auto& c : p.coeffs()) rc.push_back(c.re);
    for (auto& [r, m] : rational_roots(UniPoly<Rational>(std::move(rc)))) out.emplace_back(Gaussian(r), m);
    return out;
}

}  // namespace veroweb
