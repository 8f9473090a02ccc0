#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "veroweb/unipoly.hpp"

namespace veroweb {

// Minimal ring interface used by the generic matrix algorithms.  Scalars
// ignore the exemplar; jet series use it to recover variables and order.
template <class R>
struct ring_traits {
    static R zero_like(const R&) { return R(0); }
    static R one_like(const R&) { return R(1); }
    static R from_int_like(const R&, long long v) { return R(v); }
    static R div_int(const R& x, long long v) { return x / R(v); }
};

template <class K>
using Vec = std::vector<K>;

// Dense rows x cols matrix.  Over the ground field this is the LinearMap of
// the library; it is reused with jet-series entries for coordinate tensors.
template <class K>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    // Entries are value-initialized (the zero of the ring for scalar types).
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
    Mat(int rows, int cols, const K& fill)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}
    Mat(int rows, int cols, std::vector<K> data) : rows_(rows), cols_(cols), a_(std::move(data)) {
        if (a_.size() != static_cast<size_t>(rows) * cols) throw dimension_error("matrix data size mismatch");
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = K(1);
        return m;
    }
    static Mat from_rows(const std::vector<Vec<K>>& rows) {
        if (rows.empty()) return Mat(0, 0);
        Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows(); ++i) {
            if (rows[i].size() != static_cast<size_t>(m.cols())) throw dimension_error("ragged rows");
            for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    K& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const K& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Vec<K> row(int i) const {
        Vec<K> r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }
    Vec<K> col(int j) const {
        Vec<K> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    Mat transpose() const {
        Mat m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    friend Mat operator+(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_error("matrix add shape mismatch");
        Mat r = a;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
        return r;
    }
    friend Mat operator-(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_error("matrix sub shape mismatch");
        Mat r = a;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
        return r;
    }
    friend Mat operator-(const Mat& a) {
        Mat r = a;
        for (auto& x : r.a_) x = -x;
        return r;
    }
    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw dimension_error("matrix mul shape mismatch");
        if (a.a_.empty() || b.a_.empty()) return Mat(a.rows_, b.cols_);
        Mat r(a.rows_, b.cols_, ring_traits<K>::zero_like(a.a_[0]));
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const K& aik = a.at(i, k);
                for (int j = 0; j < b.cols_; ++j) r.at(i, j) += aik * b.at(k, j);
            }
        return r;
    }
    friend Mat operator*(const K& s, const Mat& a) {
        Mat r = a;
        for (auto& x : r.a_) x = s * x;
        return r;
    }
    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

    Vec<K> apply(const Vec<K>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw dimension_error("matrix apply shape mismatch");
        if (a_.empty()) return Vec<K>(static_cast<size_t>(rows_));
        Vec<K> r(rows_, ring_traits<K>::zero_like(a_[0]));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
        return r;
    }

    K trace() const {
        if (!square()) throw dimension_error("trace of non-square matrix");
        if (rows_ == 0) return K{};
        K t = ring_traits<K>::zero_like(a_[0]);
        for (int i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    bool is_zero() const {
        for (auto& x : a_)
            if (!veroweb::is_zero(x)) return false;
        return true;
    }

  private:
    int rows_, cols_;
    std::vector<K> a_;
};

// In-place reduced row echelon form over the field; returns pivot columns.
template <class K>
std::vector<int> rref(Mat<K>& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < m.rows(); ++i)
            if (!is_zero(m.at(i, col))) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        K inv = K(1) / m.at(row, col);
        for (int j = col; j < m.cols(); ++j) m.at(row, j) = inv * m.at(row, j);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || is_zero(m.at(i, col))) continue;
            K f = m.at(i, col);
            for (int j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class K>
int rank(Mat<K> m) {
    return static_cast<int>(rref(m).size());
}

template <class K>
K det(Mat<K> m) {
    if (!m.square()) throw dimension_error("determinant of non-square matrix");
    K d(1);
    int n = m.rows();
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (!is_zero(m.at(i, col))) { piv = i; break; }
        if (piv < 0) return K(0);
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
            d = -d;
        }
        d *= m.at(col, col);
        K inv = K(1) / m.at(col, col);
        for (int i = col + 1; i < n; ++i) {
            if (is_zero(m.at(i, col))) continue;
            K f = m.at(i, col) * inv;
            for (int j = col; j < n; ++j) m.at(i, j) -= f * m.at(col, j);
        }
    }
    return d;
}

template <class K>
std::optional<Mat<K>> try_inverse(const Mat<K>& m) {
    if (!m.square()) throw dimension_error("inverse of non-square matrix");
    int n = m.rows();
    Mat<K> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = K(1);
    }
    auto piv = rref(aug);
    if (static_cast<int>(piv.size()) != n || (n > 0 && piv.back() != n - 1)) return std::nullopt;
    Mat<K> inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

template <class K>
Mat<K> inverse(const Mat<K>& m) {
    auto inv = try_inverse(m);
    if (!inv) throw degenerate_error("matrix is singular");
    return *inv;
}

// Basis rows of {x : m x = 0}, echelonized against the non-pivot coordinates.
template <class K>
std::vector<Vec<K>> kernel_basis(Mat<K> m) {
    int n = m.cols();
    auto pivots = rref(m);
    std::vector<bool> is_piv(n, false);
    for (int p : pivots) is_piv[p] = true;
    std::vector<Vec<K>> out;
    for (int free = 0; free < n; ++free) {
        if (is_piv[free]) continue;
        Vec<K> v(n, K(0));
        v[free] = K(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(static_cast<int>(r), free);
        out.push_back(std::move(v));
    }
    return out;
}

// Least-index particular solution of m x = b, empty when inconsistent.
template <class K>
std::optional<Vec<K>> solve(const Mat<K>& m, const Vec<K>& b) {
    if (static_cast<int>(b.size()) != m.rows()) throw dimension_error("solve shape mismatch");
    Mat<K> aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    Vec<K> x(m.cols(), K(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), m.cols());
    return x;
}

// Faddeev-LeVerrier.  Returns the coefficients c_0..c_n of det(tI - M)
// together with the matrices B_k of adj(tI - M) = sum_k t^k B_k.  Works over
// any commutative Q-algebra (exact division by small integers only), so it is
// shared between the scalar and the jet-coefficient tensors; in particular no
// rational-function intermediates ever appear.
template <class K>
struct CharPolyData {
    std::vector<K> charpoly;    // c_0..c_n, monic
    std::vector<Mat<K>> adj;    // B_0..B_{n-1}
};

template <class K>
CharPolyData<K> faddeev(const Mat<K>& m) {
    if (!m.square()) throw dimension_error("characteristic polynomial of non-square matrix");
    int n = m.rows();
    if (n == 0) throw dimension_error("characteristic polynomial of empty matrix");
    const K one = ring_traits<K>::one_like(m.at(0, 0));
    const K zero = ring_traits<K>::zero_like(m.at(0, 0));
    CharPolyData<K> out;
    out.charpoly.assign(n + 1, zero);
    out.charpoly[n] = one;
    // M_1 = M, c_{n-k} = -tr(M M_{k-1} + c_{n-k+1} M)/k pattern; the running
    // matrix A_k = M^k + c_{n-1} M^{k-1} + ... gives adj(tI - M) as
    // sum_{k} t^{n-1-k} A_k.
    Mat<K> ident(n, n, zero);
    for (int i = 0; i < n; ++i) ident.at(i, i) = one;
    Mat<K> a = ident;
    out.adj.assign(n, Mat<K>(n, n, zero));
    for (int k = 1; k <= n; ++k) {
        out.adj[n - k] = a;  // coefficient of t^{n-k} in adj(tI - M)
        Mat<K> ma = m * a;
        K c = ring_traits<K>::div_int(ma.trace(), k);
        out.charpoly[n - k] = -c;
        if (k < n) {
            a = ma;
            for (int i = 0; i < n; ++i) a.at(i, i) -= c;
        }
    }
    return out;
}

// det(M + tI) as a polynomial: the characteristic polynomial of -M.
template <class K>
UniPoly<K> char_poly(const Mat<K>& m) {
    if (!m.square()) throw dimension_error("characteristic polynomial of non-square matrix");
    if (m.rows() == 0) return UniPoly<K>::constant(K(1));
    return UniPoly<K>(faddeev(-m).charpoly);
}

// adj(M + tI) v as a vector of polynomials of degree <= n-1; multiplying by
// (M + tI) reproduces det(M + tI) v.  Computed without any division.
template <class K>
std::vector<UniPoly<K>> resolvent_curve(const Mat<K>& m, const Vec<K>& v) {
    if (!m.square()) throw dimension_error("resolvent of non-square matrix");
    if (static_cast<int>(v.size()) != m.cols()) throw dimension_error("resolvent vector size mismatch");
    auto fd = faddeev(-m);  // adj(tI + M) = adj(tI - (-M))
    int n = m.rows();
    std::vector<std::vector<K>> comp(n, std::vector<K>(std::max(n, 1), K(0)));
    for (int k = 0; k < n; ++k) {
        Vec<K> w = fd.adj[k].apply(v);
        for (int i = 0; i < n; ++i) comp[i][k] = w[i];
    }
    std::vector<UniPoly<K>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.emplace_back(std::move(comp[i]));
    return out;
}

// Subspace of K^n held as a reduced-row-echelon basis, one row per vector.
// The echelon form is the unique canonical representative, so equality of
// subspaces is plain equality of the stored matrices.
template <class K>
class Subspace {
  public:
    explicit Subspace(int ambient) : ambient_(ambient), basis_(0, ambient) {}
    Subspace(int ambient, const std::vector<Vec<K>>& vectors) : ambient_(ambient), basis_(0, ambient) {
        Mat<K> m = Mat<K>::from_rows(vectors);
        if (!vectors.empty() && m.cols() != ambient) throw dimension_error("subspace vector size mismatch");
        if (vectors.empty()) { pivots_.clear(); return; }
        pivots_ = rref(m);
        basis_ = Mat<K>(static_cast<int>(pivots_.size()), ambient);
        for (int i = 0; i < basis_.rows(); ++i)
            for (int j = 0; j < ambient; ++j) basis_.at(i, j) = m.at(i, j);
    }

    static Subspace zero(int ambient) { return Subspace(ambient); }
    static Subspace full(int ambient) {
        std::vector<Vec<K>> rows;
        for (int i = 0; i < ambient; ++i) {
            Vec<K> v(ambient, K(0));
            v[i] = K(1);
            rows.push_back(std::move(v));
        }
        return Subspace(ambient, rows);
    }

    int ambient() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const Mat<K>& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }
    Vec<K> basis_row(int i) const { return basis_.row(i); }
    std::vector<Vec<K>> basis_rows() const {
        std::vector<Vec<K>> out;
        for (int i = 0; i < dim(); ++i) out.push_back(basis_.row(i));
        return out;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    bool contains(const Vec<K>& v) const {
        if (static_cast<int>(v.size()) != ambient_) throw dimension_error("contains: vector size mismatch");
        Vec<K> r = v;
        for (int i = 0; i < dim(); ++i) {
            K f = r[pivots_[i]];
            if (is_zero(f)) continue;
            for (int j = 0; j < ambient_; ++j) r[j] -= f * basis_.at(i, j);
        }
        for (auto& x : r)
            if (!is_zero(x)) return false;
        return true;
    }
    bool contains(const Subspace& other) const {
        for (int i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_row(i))) return false;
        return true;
    }

    // Coordinates of v in the echelon basis, if v lies in the subspace.
    std::optional<Vec<K>> coordinates_of(const Vec<K>& v) const {
        Vec<K> r = v, c(dim(), K(0));
        for (int i = 0; i < dim(); ++i) {
            K f = r[pivots_[i]];
            c[i] = f;
            if (is_zero(f)) continue;
            for (int j = 0; j < ambient_; ++j) r[j] -= f * basis_.at(i, j);
        }
        for (auto& x : r)
            if (!is_zero(x)) return std::nullopt;
        return c;
    }

    Vec<K> from_coordinates(const Vec<K>& c) const {
        if (static_cast<int>(c.size()) != dim()) throw dimension_error("from_coordinates size mismatch");
        Vec<K> v(ambient_, K(0));
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < ambient_; ++j) v[j] += c[i] * basis_.at(i, j);
        return v;
    }

    std::vector<int> complement_coords() const {
        std::vector<int> out;
        size_t p = 0;
        for (int j = 0; j < ambient_; ++j) {
            if (p < pivots_.size() && pivots_[p] == j) { ++p; continue; }
            out.push_back(j);
        }
        return out;
    }

  private:
    int ambient_;
    Mat<K> basis_;
    std::vector<int> pivots_;
};

template <class K>
Subspace<K> sum(const Subspace<K>& a, const Subspace<K>& b) {
    if (a.ambient() != b.ambient()) throw dimension_error("subspace sum ambient mismatch");
    auto rows = a.basis_rows();
    for (auto& r : b.basis_rows()) rows.push_back(r);
    return Subspace<K>(a.ambient(), rows);
}

template <class K>
Subspace<K> intersect(const Subspace<K>& a, const Subspace<K>& b) {
    if (a.ambient() != b.ambient()) throw dimension_error("subspace intersect ambient mismatch");
    // v = u A = w B; left kernel of the stacked matrix [A; B] yields (u, -w).
    int da = a.dim(), db = b.dim();
    if (da == 0 || db == 0) return Subspace<K>::zero(a.ambient());
    Mat<K> stacked(da + db, a.ambient());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < a.ambient(); ++j) stacked.at(i, j) = a.basis().at(i, j);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < a.ambient(); ++j) stacked.at(da + i, j) = b.basis().at(i, j);
    auto ker = kernel_basis(stacked.transpose());
    std::vector<Vec<K>> rows;
    for (auto& z : ker) {
        Vec<K> v(a.ambient(), K(0));
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < a.ambient(); ++j) v[j] += z[i] * a.basis().at(i, j);
        rows.push_back(std::move(v));
    }
    return Subspace<K>(a.ambient(), rows);
}

// Annihilator in the dual: {phi : phi(s) = 0 for all s in S}.
template <class K>
Subspace<K> annihilator(const Subspace<K>& s) {
    if (s.dim() == 0) return Subspace<K>::full(s.ambient());
    return Subspace<K>(s.ambient(), kernel_basis(s.basis()));
}

// Span of {M v : v basis of S}; M is applied to column vectors.
template <class K>
Subspace<K> image_under(const Mat<K>& m, const Subspace<K>& s) {
    if (m.cols() != s.ambient()) throw dimension_error("image_under shape mismatch");
    std::vector<Vec<K>> rows;
    for (auto& v : s.basis_rows()) rows.push_back(m.apply(v));
    return Subspace<K>(m.rows(), rows);
}

template <class K>
Subspace<K> column_space(const Mat<K>& m) {
    std::vector<Vec<K>> rows;
    for (int j = 0; j < m.cols(); ++j) rows.push_back(m.col(j));
    return Subspace<K>(m.rows(), rows);
}

template <class K>
Subspace<K> kernel_space(const Mat<K>& m) {
    return Subspace<K>(m.cols(), kernel_basis(m));
}

// Extends `current` (independent rows) with echelon-basis vectors of `pool`
// chosen greedily by least pivot index.  Returns the appended vectors.
template <class K>
std::vector<Vec<K>> extend_basis(std::vector<Vec<K>>& current, const Subspace<K>& pool) {
    std::vector<Vec<K>> added;
    for (auto& cand : pool.basis_rows()) {
        auto trial = current;
        trial.push_back(cand);
        Mat<K> m = Mat<K>::from_rows(trial);
        if (rank(std::move(m)) == static_cast<int>(trial.size())) {
            current.push_back(cand);
            added.push_back(cand);
        }
    }
    return added;
}

}  // namespace veroweb
