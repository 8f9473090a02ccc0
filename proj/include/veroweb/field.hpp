#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

#include "veroweb/error.hpp"

namespace veroweb {

using Int = boost::multiprecision::cpp_int;

// Exact rational scalar.  Ground field of the whole library.  The backing
// type keeps gcd(|num|, den) = 1 and den > 0 as invariants; no rounding can
// occur anywhere.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) { return Rational(Int(num), Int(den)); }

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool field_is_positive(const Rational& x) { return x > 0; }
inline bool field_is_real(const Rational&) { return true; }

inline std::string to_string(const Rational& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) s += "/" + denominator(x).str();
    return s;
}

inline Rational parse_rational(std::string s) {
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw parse_error("rational with zero denominator: " + s);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw parse_error("cannot parse rational: " + s);
    }
}

// Exact integer k-th root; empty when x is not a perfect power.
inline std::optional<Int> int_kth_root(const Int& x, unsigned k) {
    if (k == 0) return std::nullopt;
    if (x < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = int_kth_root(-x, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    if (x == 0 || x == 1 || k == 1) return x;
    Int lo = 0, hi = x;
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        Int p = 1;
        bool over = false;
        for (unsigned i = 0; i < k; ++i) {
            p *= mid;
            if (p > x) { over = true; break; }
        }
        if (over) hi = mid - 1; else lo = mid;
    }
    Int p = 1;
    for (unsigned i = 0; i < k; ++i) p *= lo;
    if (p == x) return lo;
    return std::nullopt;
}

// Exact k-th roots of a rational inside the rationals.  For even k both signs
// are returned; an irrational root yields the empty list.
inline std::vector<Rational> rational_kth_roots(const Rational& x, unsigned k) {
    std::vector<Rational> out;
    auto n = int_kth_root(numerator(x), k);
    auto d = int_kth_root(denominator(x), k);
    if (!n || !d) return out;
    Rational r(*n, *d);
    out.push_back(r);
    if (k % 2 == 0 && !r.is_zero()) out.push_back(-r);
    return out;
}

// Quadratic extension a + b i with exact rational components; emulates the
// complex ground field.  Selected at compile time by instantiating the
// library templates with Gaussian instead of Rational.
struct Gaussian {
    Rational re, im;

    Gaussian() : re(0), im(0) {}
    Gaussian(int v) : re(v), im(0) {}          // NOLINT(google-explicit-constructor)
    Gaussian(long long v) : re(v), im(0) {}    // NOLINT(google-explicit-constructor)
    Gaussian(Rational r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
    Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
    friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Gaussian operator/(const Gaussian& a, const Gaussian& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n.is_zero()) throw degenerate_error("division by zero in quadratic extension");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    Gaussian& operator+=(const Gaussian& o) { *this = *this + o; return *this; }
    Gaussian& operator-=(const Gaussian& o) { *this = *this - o; return *this; }
    Gaussian& operator*=(const Gaussian& o) { *this = *this * o; return *this; }
    Gaussian& operator/=(const Gaussian& o) { *this = *this / o; return *this; }
    friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
};

inline bool is_zero(const Gaussian& x) { return x.re.is_zero() && x.im.is_zero(); }
inline bool field_is_positive(const Gaussian& x) { return x.im.is_zero() && x.re > 0; }
inline bool field_is_real(const Gaussian& x) { return x.im.is_zero(); }

inline std::string to_string(const Gaussian& x) {
    if (x.im.is_zero()) return to_string(x.re);
    std::string s = to_string(x.re);
    s += (x.im > 0 ? "+" : "-");
    Rational a = x.im > 0 ? x.im : Rational(-x.im);
    s += to_string(a) + "i";
    return s;
}

inline Gaussian parse_gaussian(const std::string& s) {
    if (s.empty()) throw parse_error("empty scalar");
    if (s.back() != 'i') return Gaussian(parse_rational(s));
    // Split "re+imi" / "re-imi" / "imi" on the last sign that is not leading
    // and not part of a denominator.
    std::string body = s.substr(0, s.size() - 1);
    for (size_t pos = body.size(); pos-- > 1;) {
        if ((body[pos] == '+' || body[pos] == '-') && body[pos - 1] != '/') {
            Rational re = parse_rational(body.substr(0, pos));
            std::string ims = body.substr(pos);
            if (ims == "+") ims = "1"; else if (ims == "-") ims = "-1";
            return {re, parse_rational(ims)};
        }
    }
    if (body.empty() || body == "+") return {Rational(0), Rational(1)};
    if (body == "-") return {Rational(0), Rational(-1)};
    return {Rational(0), parse_rational(body)};
}

inline std::vector<Gaussian> rational_kth_roots(const Gaussian& x, unsigned k) {
    std::vector<Gaussian> out;
    if (k == 1) { out.push_back(x); return out; }
    if (x.im.is_zero()) {
        for (auto& r : rational_kth_roots(x.re, k)) out.emplace_back(r);
        if (k == 2 && x.re < 0) {
            for (auto& r : rational_kth_roots(Rational(-x.re), 2)) out.emplace_back(Rational(0), r);
        }
    }
    return out;
}

template <class K>
std::string scalar_to_string(const K& x) { return to_string(x); }

template <class K>
K scalar_from_string(const std::string& s);

template <>
inline Rational scalar_from_string<Rational>(const std::string& s) { return parse_rational(s); }

template <>
inline Gaussian scalar_from_string<Gaussian>(const std::string& s) { return parse_gaussian(s); }

template <class K>
constexpr const char* field_name();

template <>
constexpr const char* field_name<Rational>() { return "rational"; }

template <>
constexpr const char* field_name<Gaussian>() { return "quadratic-extension"; }

}  // namespace veroweb
