#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "veroweb/matrix.hpp"

namespace veroweb {

using IndexMask = std::uint32_t;

inline int mask_grade(IndexMask m) { return std::popcount(m); }

inline std::vector<int> mask_indices(IndexMask m) {
    std::vector<int> out;
    for (int i = 0; m != 0; ++i, m >>= 1)
        if (m & 1u) out.push_back(i);
    return out;
}

inline IndexMask mask_of(const std::vector<int>& idx) {
    IndexMask m = 0;
    for (int i : idx) m |= (IndexMask(1) << i);
    return m;
}

// Sign of merging two disjoint increasing index sets: (-1)^{inversions}.
inline int merge_sign(IndexMask a, IndexMask b) {
    int inv = 0;
    for (IndexMask rest = a; rest != 0;) {
        int i = std::countr_zero(rest);
        rest &= rest - 1;
        inv += std::popcount(b & ((IndexMask(1) << i) - 1));
    }
    return (inv % 2 == 0) ? 1 : -1;
}

// Graded exterior-algebra element of fixed grade on K^n (n <= 12 in
// practice).  Terms are keyed by strictly increasing index tuples stored as
// bitmasks; absent terms are zero.
template <class K>
class MultiVector {
  public:
    MultiVector() : dim_(0), grade_(0) {}
    // grade > dim is allowed and forces the zero multivector (no index tuple
    // of that length exists); wedge overflow relies on this.
    MultiVector(int dim, int grade) : dim_(dim), grade_(grade) {
        if (grade < 0) throw dimension_error("multivector grade out of range");
    }

    static MultiVector basis(int dim, IndexMask mask) {
        MultiVector m(dim, mask_grade(mask));
        m.set(mask, K(1));
        return m;
    }
    static MultiVector from_vector(const Vec<K>& v) {
        MultiVector m(static_cast<int>(v.size()), 1);
        for (size_t i = 0; i < v.size(); ++i) m.set(IndexMask(1) << i, v[i]);
        return m;
    }

    int dim() const { return dim_; }
    int grade() const { return grade_; }
    const std::map<IndexMask, K>& terms() const { return terms_; }

    K coeff(IndexMask mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? K(0) : it->second;
    }
    void set(IndexMask mask, const K& v) {
        if (mask_grade(mask) != grade_) throw dimension_error("multivector term grade mismatch");
        if (mask >= (IndexMask(1) << dim_)) throw dimension_error("multivector index out of range");
        if (veroweb::is_zero(v)) terms_.erase(mask); else terms_[mask] = v;
    }
    void add_term(IndexMask mask, const K& v) { set(mask, coeff(mask) + v); }

    bool is_zero() const { return terms_.empty(); }

    friend MultiVector operator+(const MultiVector& a, const MultiVector& b) {
        a.check_shape(b);
        MultiVector r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend MultiVector operator-(const MultiVector& a, const MultiVector& b) {
        a.check_shape(b);
        MultiVector r = a;
        for (auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    friend MultiVector operator-(const MultiVector& a) {
        MultiVector r = a;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    friend MultiVector operator*(const K& s, const MultiVector& a) {
        MultiVector r(a.dim_, a.grade_);
        if (veroweb::is_zero(s)) return r;
        for (auto& [m, c] : a.terms_) r.set(m, s * c);
        return r;
    }
    friend bool operator==(const MultiVector& a, const MultiVector& b) {
        return a.dim_ == b.dim_ && a.grade_ == b.grade_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiVector& a, const MultiVector& b) { return !(a == b); }

    Vec<K> as_vector() const {
        if (grade_ != 1) throw dimension_error("as_vector needs grade 1");
        Vec<K> v(dim_, K(0));
        for (auto& [m, c] : terms_) v[std::countr_zero(m)] = c;
        return v;
    }

  private:
    void check_shape(const MultiVector& o) const {
        if (dim_ != o.dim_ || grade_ != o.grade_) throw dimension_error("multivector shape mismatch");
    }
    int dim_, grade_;
    std::map<IndexMask, K> terms_;
};

// Exterior product.  Bilinear, graded anticommutative; grade overflow beyond
// the ambient dimension gives the zero multivector.
template <class K>
MultiVector<K> wedge(const MultiVector<K>& a, const MultiVector<K>& b) {
    if (a.dim() != b.dim()) throw dimension_error("wedge ambient mismatch");
    int g = a.grade() + b.grade();
    if (g > a.dim()) return MultiVector<K>(a.dim(), g);
    MultiVector<K> r(a.dim(), g);
    for (auto& [ma, ca] : a.terms())
        for (auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;
            K v = ca * cb;
            if (merge_sign(ma, mb) < 0) v = -v;
            r.add_term(ma | mb, v);
        }
    return r;
}

template <class K>
MultiVector<K> wedge_of_vectors(const std::vector<Vec<K>>& vectors, int dim) {
    MultiVector<K> r = MultiVector<K>::basis(dim, 0);
    for (auto& v : vectors) r = wedge(r, MultiVector<K>::from_vector(v));
    return r;
}

// Interior product with the i-th basis vector (contraction in the first slot).
template <class K>
MultiVector<K> contract_basis(const MultiVector<K>& a, int i) {
    if (a.grade() == 0) throw dimension_error("contraction of grade 0");
    MultiVector<K> r(a.dim(), a.grade() - 1);
    IndexMask bit = IndexMask(1) << i;
    for (auto& [m, c] : a.terms()) {
        if (!(m & bit)) continue;
        int below = std::popcount(m & (bit - 1));
        r.add_term(m & ~bit, (below % 2 == 0) ? c : -c);
    }
    return r;
}

template <class K>
MultiVector<K> contract_vector(const MultiVector<K>& a, const Vec<K>& v) {
    MultiVector<K> r(a.dim(), a.grade() - 1);
    for (int i = 0; i < a.dim(); ++i) {
        if (veroweb::is_zero(v[i])) continue;
        r = r + v[i] * contract_basis(a, i);
    }
    return r;
}

// Full evaluation of a grade-r form on r column vectors.
template <class K>
K evaluate_form(const MultiVector<K>& beta, const std::vector<Vec<K>>& vectors) {
    if (static_cast<int>(vectors.size()) != beta.grade()) throw dimension_error("evaluate_form arity mismatch");
    MultiVector<K> cur = beta;
    for (auto it = vectors.begin(); it != vectors.end(); ++it) cur = contract_vector(cur, *it);
    return cur.coeff(0);
}

// Kernel {v : i_v beta = 0} of a grade-r element of the dual.  For a
// decomposable beta this is the codimension-r kernel of the split factors.
template <class K>
Subspace<K> kernel_of_form(const MultiVector<K>& beta) {
    if (beta.is_zero()) throw degenerate_error("kernel of the zero form");
    int n = beta.dim();
    std::vector<MultiVector<K>> cols;
    std::map<IndexMask, int> rows;
    for (int i = 0; i < n; ++i) {
        cols.push_back(contract_basis(beta, i));
        for (auto& [m, c] : cols.back().terms()) rows.emplace(m, 0);
    }
    int rn = 0;
    for (auto& [m, idx] : rows) idx = rn++;
    Mat<K> sys(rn, n);
    for (int i = 0; i < n; ++i)
        for (auto& [m, c] : cols[i].terms()) sys.at(rows[m], i) = c;
    return kernel_space(sys);
}

// Authoritative decomposability check: a nonzero grade-r element is
// decomposable iff its kernel has dimension exactly n - r.
template <class K>
bool is_decomposable(const MultiVector<K>& beta) {
    if (beta.is_zero()) return true;
    if (beta.grade() == 0 || beta.grade() == beta.dim()) return true;
    return kernel_of_form(beta).dim() == beta.dim() - beta.grade();
}

// Pluecker-style diagnostic: contraction by every basis (r-1)-covector must
// wedge back to zero.  Diagnostic only; kernel dimension is authoritative.
template <class K>
bool plucker_diagnostic(const MultiVector<K>& p) {
    if (p.grade() <= 1) return true;
    std::vector<int> idx(p.grade() - 1);
    // iterate strictly increasing (r-1)-tuples as masks
    int n = p.dim(), r = p.grade();
    std::vector<IndexMask> masks;
    for (IndexMask m = 0; m < (IndexMask(1) << n); ++m)
        if (mask_grade(m) == r - 1) masks.push_back(m);
    for (IndexMask m : masks) {
        MultiVector<K> c = p;
        auto is = mask_indices(m);
        for (auto it = is.rbegin(); it != is.rend(); ++it) c = contract_basis(c, *it);
        if (!wedge(c, p).is_zero()) return false;
    }
    return true;
}

// Pullback of a grade-r dual element: (L* beta)(v_1..v_r) = beta(L v_1..L v_r).
template <class K>
MultiVector<K> pullback(const Mat<K>& l, const MultiVector<K>& beta) {
    if (l.rows() != beta.dim()) throw dimension_error("pullback shape mismatch");
    int n = l.cols(), r = beta.grade();
    MultiVector<K> out(n, r);
    if (beta.is_zero()) return out;
    std::vector<IndexMask> smasks;
    for (IndexMask m = 0; m < (IndexMask(1) << n); ++m)
        if (mask_grade(m) == r) smasks.push_back(m);
    for (IndexMask s : smasks) {
        auto scols = mask_indices(s);
        K acc(0);
        for (auto& [t, c] : beta.terms()) {
            auto trows = mask_indices(t);
            Mat<K> minor(r, r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) minor.at(i, j) = l.at(trows[i], scols[j]);
            acc += c * det(std::move(minor));
        }
        out.set(s, acc);
    }
    return out;
}

// Polynomial curve of multivectors: coefficients indexed by the power of t.
template <class K>
class PolyMultiVector {
  public:
    PolyMultiVector() : dim_(0), grade_(0) {}
    PolyMultiVector(int dim, int grade) : dim_(dim), grade_(grade) {}
    PolyMultiVector(int dim, int grade, std::vector<MultiVector<K>> coeffs)
        : dim_(dim), grade_(grade), c_(std::move(coeffs)) {
        trim();
    }

    int dim() const { return dim_; }
    int grade() const { return grade_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<MultiVector<K>>& coeffs() const { return c_; }
    MultiVector<K> coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : MultiVector<K>(dim_, grade_);
    }
    bool is_zero() const { return c_.empty(); }

    MultiVector<K> eval(const K& t) const {
        MultiVector<K> acc(dim_, grade_);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = t * acc + *it;
        return acc;
    }
    // Leading coefficient; by convention the value at infinity of the
    // degree-normalized curve.
    MultiVector<K> at_infinity() const {
        if (c_.empty()) return MultiVector<K>(dim_, grade_);
        return c_.back();
    }

    friend bool operator==(const PolyMultiVector& a, const PolyMultiVector& b) {
        return a.dim_ == b.dim_ && a.grade_ == b.grade_ && a.c_ == b.c_;
    }
    friend bool operator!=(const PolyMultiVector& a, const PolyMultiVector& b) { return !(a == b); }

    friend PolyMultiVector wedge(const PolyMultiVector& a, const PolyMultiVector& b) {
        if (a.dim_ != b.dim_) throw dimension_error("polymultivector wedge mismatch");
        PolyMultiVector r(a.dim_, a.grade_ + b.grade_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, MultiVector<K>(a.dim_, a.grade_ + b.grade_));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] = r.c_[i + j] + wedge(a.c_[i], b.c_[j]);
        r.trim();
        return r;
    }

    // Componentwise exact division by a scalar polynomial.
    friend PolyMultiVector divexact(const PolyMultiVector& a, const UniPoly<K>& q) {
        if (q.is_zero()) throw degenerate_error("division by zero polynomial");
        PolyMultiVector r(a.dim_, a.grade_);
        if (a.is_zero()) return r;
        // Collect the component polynomials, divide each exactly.
        std::map<IndexMask, std::vector<K>> comp;
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (auto& [m, c] : a.c_[i].terms()) {
                auto& col = comp[m];
                col.resize(a.c_.size(), K(0));
                col[i] = c;
            }
        int deg = a.degree() - q.degree();
        r.c_.assign(std::max(deg + 1, 0), MultiVector<K>(a.dim_, a.grade_));
        for (auto& [m, col] : comp) {
            UniPoly<K> quo = divexact(UniPoly<K>(col), q);
            for (int i = 0; i <= quo.degree(); ++i) r.c_[i].add_term(m, quo.coeff(i));
        }
        r.trim();
        return r;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    int dim_, grade_;
    std::vector<MultiVector<K>> c_;
};

}  // namespace veroweb
