#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "veroweb/matrix.hpp"

namespace veroweb {

using Exps = std::vector<std::uint16_t>;

inline int total_degree(const Exps& e) {
    int d = 0;
    for (auto x : e) d += x;
    return d;
}

// Graded-lexicographic order on exponent tuples; the canonical term order of
// every serialized jet.
struct GrlexLess {
    bool operator()(const Exps& a, const Exps& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Truncated multivariate power series: a formal Taylor representative at the
// base point, exact rational coefficients, hard truncation at total degree
// `order`.  Ring operations re-truncate; absent terms are zero.
template <class K>
class JetSeries {
  public:
    JetSeries() : order_(0) {}
    JetSeries(std::vector<std::string> vars, int order) : vars_(std::move(vars)), order_(order) {
        if (order < 0) throw truncation_error("negative truncation order");
    }

    static JetSeries constant(const std::vector<std::string>& vars, int order, const K& c) {
        JetSeries s(vars, order);
        s.set_coeff(Exps(vars.size(), 0), c);
        return s;
    }
    static JetSeries variable(const std::vector<std::string>& vars, int order, int i) {
        JetSeries s(vars, order);
        Exps e(vars.size(), 0);
        e[i] = 1;
        s.set_coeff(e, K(1));
        return s;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    int nvars() const { return static_cast<int>(vars_.size()); }
    int order() const { return order_; }
    const std::map<Exps, K, GrlexLess>& terms() const { return terms_; }

    K coeff(const Exps& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? K(0) : it->second;
    }
    void set_coeff(const Exps& e, const K& c) {
        if (static_cast<int>(e.size()) != nvars()) throw dimension_error("exponent arity mismatch");
        if (total_degree(e) > order_) throw truncation_error("term beyond truncation order");
        if (is_zero(c)) terms_.erase(e); else terms_[e] = c;
    }
    void add_coeff(const Exps& e, const K& c) { set_coeff(e, coeff(e) + c); }

    bool is_zero_series() const { return terms_.empty(); }
    // Zero when every retained term of total degree <= k vanishes.
    bool is_zero_to_order(int k) const {
        for (auto& [e, c] : terms_)
            if (total_degree(e) <= k && !is_zero(c)) return false;
        return true;
    }
    K value_at_base() const { return coeff(Exps(vars_.size(), 0)); }

    JetSeries truncated(int new_order) const {
        JetSeries s(vars_, std::min(new_order, order_));
        for (auto& [e, c] : terms_)
            if (total_degree(e) <= s.order_) s.terms_[e] = c;
        return s;
    }

    // Homogeneous part of total degree d.
    JetSeries homogeneous_part(int d) const {
        JetSeries s(vars_, order_);
        for (auto& [e, c] : terms_)
            if (total_degree(e) == d) s.terms_[e] = c;
        return s;
    }

    JetSeries derivative(int var) const {
        if (order_ < 1) throw truncation_error("derivative exhausts the truncation order");
        JetSeries s(vars_, order_ - 1);
        for (auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exps d = e;
            --d[var];
            if (total_degree(d) > s.order_) continue;
            s.terms_[d] = c * K(static_cast<long long>(e[var]));
        }
        return s;
    }

    friend JetSeries operator+(const JetSeries& a, const JetSeries& b) {
        a.check_vars(b);
        JetSeries s(a.vars_, std::min(a.order_, b.order_));
        for (auto& [e, c] : a.terms_)
            if (total_degree(e) <= s.order_) s.terms_[e] = c;
        for (auto& [e, c] : b.terms_)
            if (total_degree(e) <= s.order_) s.add_coeff(e, c);
        return s;
    }
    friend JetSeries operator-(const JetSeries& a, const JetSeries& b) {
        a.check_vars(b);
        JetSeries s(a.vars_, std::min(a.order_, b.order_));
        for (auto& [e, c] : a.terms_)
            if (total_degree(e) <= s.order_) s.terms_[e] = c;
        for (auto& [e, c] : b.terms_)
            if (total_degree(e) <= s.order_) s.add_coeff(e, -c);
        return s;
    }
    friend JetSeries operator-(const JetSeries& a) {
        JetSeries s(a.vars_, a.order_);
        for (auto& [e, c] : a.terms_) s.terms_[e] = -c;
        return s;
    }
    friend JetSeries operator*(const JetSeries& a, const JetSeries& b) {
        a.check_vars(b);
        JetSeries s(a.vars_, std::min(a.order_, b.order_));
        for (auto& [ea, ca] : a.terms_) {
            int da = total_degree(ea);
            if (da > s.order_) continue;
            for (auto& [eb, cb] : b.terms_) {
                if (da + total_degree(eb) > s.order_) continue;
                Exps e = ea;
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                s.add_coeff(e, ca * cb);
            }
        }
        return s;
    }
    friend JetSeries operator*(const K& c, const JetSeries& a) {
        JetSeries s(a.vars_, a.order_);
        if (is_zero(c)) return s;
        for (auto& [e, cc] : a.terms_) s.terms_[e] = c * cc;
        return s;
    }
    JetSeries& operator+=(const JetSeries& o) { *this = *this + o; return *this; }
    JetSeries& operator-=(const JetSeries& o) { *this = *this - o; return *this; }
    JetSeries& operator*=(const JetSeries& o) { *this = *this * o; return *this; }

    friend bool operator==(const JetSeries& a, const JetSeries& b) {
        return a.vars_ == b.vars_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const JetSeries& a, const JetSeries& b) { return !(a == b); }

    // Multiplicative inverse; requires a unit constant term.
    JetSeries inverse() const {
        K c0 = value_at_base();
        if (is_zero(c0)) throw degenerate_error("series with zero constant term has no inverse");
        K c0inv = K(1) / c0;
        JetSeries h = c0inv * *this;  // 1 + nilpotent part
        h.add_coeff(Exps(vars_.size(), 0), K(-1));
        JetSeries acc = constant(vars_, order_, K(1));
        JetSeries pw = constant(vars_, order_, K(1));
        for (int k = 1; k <= order_; ++k) {
            pw = pw * h;
            if (pw.is_zero_series()) break;
            acc = (k % 2 == 0) ? acc + pw : acc - pw;
        }
        return c0inv * acc;
    }

    // Substitute images[i] for variable i.  Every image must live in the
    // target context and have zero constant term unless the variable does
    // not occur.
    JetSeries substitute(const std::vector<JetSeries>& images) const {
        if (static_cast<int>(images.size()) != nvars()) throw dimension_error("substitution arity mismatch");
        for (auto& im : images)
            if (!is_zero(im.value_at_base()))
                throw precondition_error("substitution image must vanish at the base point");
        std::vector<std::string> tvars = images.empty() ? vars_ : images[0].vars();
        int torder = order_;
        for (auto& im : images) torder = std::min(torder, im.order());
        JetSeries out(tvars, torder);
        for (auto& [e, c] : terms_) {
            JetSeries term = constant(tvars, torder, c);
            for (int i = 0; i < nvars() && !term.is_zero_series(); ++i)
                for (int p = 0; p < e[i]; ++p) term = term * images[i];
            out += term;
        }
        return out;
    }

    // Rename/merge variables: exponent i of this series is added onto
    // exponent target[i] of the new variable list.  Collapsing several
    // variables onto one implements restriction to a diagonal.
    JetSeries remap_vars(const std::vector<std::string>& new_vars, const std::vector<int>& target) const {
        if (static_cast<int>(target.size()) != nvars()) throw dimension_error("remap arity mismatch");
        JetSeries out(new_vars, order_);
        for (auto& [e, c] : terms_) {
            Exps ne(new_vars.size(), 0);
            for (int i = 0; i < nvars(); ++i) ne[target[i]] += e[i];
            out.add_coeff(ne, c);
        }
        return out;
    }

    // x_i -> b x_i for every variable: scales each term by b^{total degree}.
    JetSeries scale_all_vars(const K& b) const {
        JetSeries out(vars_, order_);
        for (auto& [e, c] : terms_) {
            K f = c;
            for (int i = 0; i < total_degree(e); ++i) f = f * b;
            out.terms_[e] = f;
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [e, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += scalar_to_string(c);
            for (int i = 0; i < nvars(); ++i) {
                if (e[i] == 0) continue;
                s += "*" + vars_[i];
                if (e[i] > 1) s += "^" + std::to_string(e[i]);
            }
        }
        return s;
    }

  private:
    void check_vars(const JetSeries& o) const {
        if (vars_ != o.vars_) throw dimension_error("jet series variable mismatch");
    }
    std::vector<std::string> vars_;
    int order_;
    std::map<Exps, K, GrlexLess> terms_;
};

template <class K>
bool is_zero(const JetSeries<K>& s) {
    return s.is_zero_series();
}

template <class K>
struct ring_traits<JetSeries<K>> {
    static JetSeries<K> zero_like(const JetSeries<K>& x) { return JetSeries<K>(x.vars(), x.order()); }
    static JetSeries<K> one_like(const JetSeries<K>& x) {
        return JetSeries<K>::constant(x.vars(), x.order(), K(1));
    }
    static JetSeries<K> from_int_like(const JetSeries<K>& x, long long v) {
        return JetSeries<K>::constant(x.vars(), x.order(), K(v));
    }
    static JetSeries<K> div_int(const JetSeries<K>& x, long long v) {
        return (K(1) / K(v)) * x;
    }
};

// Composition F(h) of univariate series: F in one variable, h with zero
// constant term; the result lives in h's context.
template <class K>
JetSeries<K> compose_univariate(const JetSeries<K>& f, const JetSeries<K>& h) {
    if (f.nvars() != 1) throw dimension_error("compose_univariate needs a univariate outer series");
    if (!is_zero(h.value_at_base())) throw precondition_error("inner series must vanish at the base point");
    JetSeries<K> out(h.vars(), std::min(f.order(), h.order()));
    JetSeries<K> pw = JetSeries<K>::constant(h.vars(), out.order(), K(1));
    for (int k = 0; k <= f.order(); ++k) {
        Exps e{static_cast<std::uint16_t>(k)};
        K c = f.coeff(e);
        if (!is_zero(c)) out += c * pw;
        if (k < f.order()) pw = pw * h.truncated(out.order());
        if (pw.is_zero_series()) break;
    }
    return out;
}

}  // namespace veroweb
