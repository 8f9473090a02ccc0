#pragma once

#include <string>
#include <vector>

#include "veroweb/jets.hpp"
#include "veroweb/multivector.hpp"

namespace veroweb {

// Differential form with jet coefficients: grade-k exterior form whose
// coefficients are truncated power series in the same coordinates the
// differentials refer to.
template <class K>
class JetForm {
  public:
    JetForm() : grade_(0), order_(0) {}
    JetForm(std::vector<std::string> vars, int grade, int order)
        : vars_(std::move(vars)), grade_(grade), order_(order) {
        if (grade < 0) throw dimension_error("negative form grade");
    }

    static JetForm function(const JetSeries<K>& f) {
        JetForm out(f.vars(), 0, f.order());
        if (!f.is_zero_series()) out.terms_[0] = f;
        return out;
    }
    // dx_i with unit coefficient
    static JetForm d_coord(const std::vector<std::string>& vars, int order, int i) {
        JetForm out(vars, 1, order);
        out.terms_[IndexMask(1) << i] = JetSeries<K>::constant(vars, order, K(1));
        return out;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    int nvars() const { return static_cast<int>(vars_.size()); }
    int grade() const { return grade_; }
    int order() const { return order_; }
    const std::map<IndexMask, JetSeries<K>>& terms() const { return terms_; }

    JetSeries<K> coeff(IndexMask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? JetSeries<K>(vars_, order_) : it->second;
    }
    void set_coeff(IndexMask m, const JetSeries<K>& s) {
        if (mask_grade(m) != grade_) throw dimension_error("form term grade mismatch");
        if (s.vars() != vars_) throw dimension_error("form coefficient variable mismatch");
        JetSeries<K> t = s.truncated(order_);
        if (t.is_zero_series()) terms_.erase(m); else terms_[m] = t;
    }
    void add_coeff(IndexMask m, const JetSeries<K>& s) { set_coeff(m, coeff(m) + s.truncated(order_)); }

    bool is_zero_form() const { return terms_.empty(); }
    bool is_zero_to_order(int k) const {
        for (auto& [m, s] : terms_)
            if (!s.is_zero_to_order(k)) return false;
        return true;
    }

    MultiVector<K> value_at_base() const {
        MultiVector<K> out(nvars(), grade_);
        for (auto& [m, s] : terms_) out.set(m, s.value_at_base());
        return out;
    }

    JetForm truncated(int new_order) const {
        JetForm out(vars_, grade_, std::min(new_order, order_));
        for (auto& [m, s] : terms_) {
            JetSeries<K> t = s.truncated(out.order_);
            if (!t.is_zero_series()) out.terms_[m] = t;
        }
        return out;
    }

    friend JetForm operator+(const JetForm& a, const JetForm& b) {
        a.check_shape(b);
        JetForm out = a.truncated(std::min(a.order_, b.order_));
        for (auto& [m, s] : b.terms_) out.add_coeff(m, s);
        return out;
    }
    friend JetForm operator-(const JetForm& a, const JetForm& b) {
        a.check_shape(b);
        JetForm out = a.truncated(std::min(a.order_, b.order_));
        for (auto& [m, s] : b.terms_) out.add_coeff(m, -s);
        return out;
    }
    friend JetForm operator-(const JetForm& a) {
        JetForm out(a.vars_, a.grade_, a.order_);
        for (auto& [m, s] : a.terms_) out.terms_[m] = -s;
        return out;
    }
    friend JetForm operator*(const JetSeries<K>& f, const JetForm& a) {
        JetForm out(a.vars_, a.grade_, std::min(a.order_, f.order()));
        for (auto& [m, s] : a.terms_) {
            JetSeries<K> t = f * s;
            if (!t.is_zero_series()) out.terms_[m] = t.truncated(out.order_);
        }
        return out;
    }
    friend JetForm operator*(const K& c, const JetForm& a) {
        JetForm out(a.vars_, a.grade_, a.order_);
        if (is_zero(c)) return out;
        for (auto& [m, s] : a.terms_) out.terms_[m] = c * s;
        return out;
    }
    friend bool operator==(const JetForm& a, const JetForm& b) {
        return a.vars_ == b.vars_ && a.grade_ == b.grade_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const JetForm& a, const JetForm& b) { return !(a == b); }

  private:
    void check_shape(const JetForm& o) const {
        if (vars_ != o.vars_ || grade_ != o.grade_) throw dimension_error("form shape mismatch");
    }
    std::vector<std::string> vars_;
    int grade_, order_;
    std::map<IndexMask, JetSeries<K>> terms_;
};

template <class K>
JetForm<K> wedge(const JetForm<K>& a, const JetForm<K>& b) {
    if (a.vars() != b.vars()) throw dimension_error("wedge variable mismatch");
    JetForm<K> out(a.vars(), a.grade() + b.grade(), std::min(a.order(), b.order()));
    if (a.grade() + b.grade() > a.nvars()) return out;
    for (auto& [ma, sa] : a.terms())
        for (auto& [mb, sb] : b.terms()) {
            if (ma & mb) continue;
            JetSeries<K> c = sa * sb;
            if (merge_sign(ma, mb) < 0) c = -c;
            out.add_coeff(ma | mb, c);
        }
    return out;
}

// Exterior derivative; costs one order of truncation.
template <class K>
JetForm<K> ext_d(const JetForm<K>& a) {
    if (a.order() < 1) throw truncation_error("exterior derivative exhausts the truncation order");
    JetForm<K> out(a.vars(), a.grade() + 1, a.order() - 1);
    if (a.grade() + 1 > a.nvars()) return out;
    for (auto& [m, s] : a.terms())
        for (int i = 0; i < a.nvars(); ++i) {
            IndexMask bit = IndexMask(1) << i;
            if (m & bit) continue;
            JetSeries<K> ds = s.derivative(i);
            if (ds.is_zero_series()) continue;
            if (merge_sign(bit, m) < 0) ds = -ds;
            out.add_coeff(bit | m, ds);
        }
    return out;
}

// Antisymmetric coefficient lookup on an arbitrary index tuple.
template <class K>
JetSeries<K> eval_indices(const JetForm<K>& a, std::vector<int> idx) {
    int sign = 1;
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return JetSeries<K>(a.vars(), a.order());
            if (idx[i] > idx[j]) {
                std::swap(idx[i], idx[j]);
                sign = -sign;
            }
        }
    JetSeries<K> c = a.coeff(mask_of(idx));
    return sign < 0 ? -c : c;
}

// Coordinate (1,1) tensor with jet coefficients.  Row u of the matrix holds
// the expansion of dx_u o J in the coordinate differentials; equivalently
// J e_v = sum_u m[u][v] e_u on vectors.
template <class K>
struct JetTensor11 {
    std::vector<std::string> vars;
    Mat<JetSeries<K>> m;

    JetTensor11() = default;
    JetTensor11(std::vector<std::string> v, Mat<JetSeries<K>> mat) : vars(std::move(v)), m(std::move(mat)) {
        if (!m.square() || m.rows() != static_cast<int>(vars.size()))
            throw dimension_error("tensor matrix must be square in the frame dimension");
    }

    static JetTensor11 zero(const std::vector<std::string>& vars, int order) {
        int n = static_cast<int>(vars.size());
        return JetTensor11(vars, Mat<JetSeries<K>>(n, n, JetSeries<K>(vars, order)));
    }
    static JetTensor11 scalar(const std::vector<std::string>& vars, int order, const K& c) {
        auto t = zero(vars, order);
        for (int i = 0; i < t.m.rows(); ++i) t.m.at(i, i) = JetSeries<K>::constant(vars, order, c);
        return t;
    }
    int order() const {
        int o = -1;
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) o = (o < 0) ? m.at(i, j).order() : std::min(o, m.at(i, j).order());
        return o;
    }
    Mat<K> value_at_base() const {
        Mat<K> out(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).value_at_base();
        return out;
    }
    JetTensor11 plus_scalar(const K& c) const {
        JetTensor11 out = *this;
        for (int i = 0; i < m.rows(); ++i)
            out.m.at(i, i) = out.m.at(i, i) + JetSeries<K>::constant(vars, out.m.at(i, i).order(), c);
        return out;
    }
    friend JetTensor11 operator*(const JetTensor11& a, const JetTensor11& b) {
        return JetTensor11(a.vars, a.m * b.m);
    }
};

namespace detail {
template <class K>
JetSeries<K> jet_minor_det(const Mat<JetSeries<K>>& m, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
    size_t q = rows.size();
    if (q == 0) throw dimension_error("empty minor");
    if (q == 1) return m.at(rows[0], cols[0]);
    JetSeries<K> acc = ring_traits<JetSeries<K>>::zero_like(m.at(0, 0));
    for (size_t j = 0; j < q; ++j) {
        const JetSeries<K>& pivot = m.at(rows[0], cols[j]);
        if (pivot.is_zero_series()) continue;
        std::vector<int> subr(rows.begin() + 1, rows.end());
        std::vector<int> subc;
        for (size_t c = 0; c < q; ++c)
            if (c != j) subc.push_back(cols[c]);
        JetSeries<K> term = pivot * jet_minor_det(m, subr, subc);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}
}  // namespace detail

// tau o G: full pullback, (tau o G)(X_1..X_k) = tau(G X_1, ..., G X_k).
template <class K>
JetForm<K> tau_circ(const JetForm<K>& tau, const JetTensor11<K>& g) {
    if (tau.vars() != g.vars) throw dimension_error("tau_circ frame mismatch");
    const int n = tau.nvars(), k = tau.grade();
    JetForm<K> out(tau.vars(), k, std::min(tau.order(), g.order()));
    if (tau.is_zero_form()) return out;
    if (k == 0) {
        out.add_coeff(0, tau.coeff(0));
        return out;
    }
    for (IndexMask s = 0; s < (IndexMask(1) << n); ++s) {
        if (mask_grade(s) != k) continue;
        auto scols = mask_indices(s);
        JetSeries<K> acc(tau.vars(), out.order());
        for (auto& [t, c] : tau.terms()) {
            auto trows = mask_indices(t);
            acc += c * detail::jet_minor_det(g.m, trows, scols);
        }
        if (!acc.is_zero_series()) out.add_coeff(s, acc);
    }
    return out;
}

// tau_G: G inserted in one slot at a time, summed over slots.
template <class K>
JetForm<K> tau_sub(const JetForm<K>& tau, const JetTensor11<K>& g) {
    if (tau.vars() != g.vars) throw dimension_error("tau_sub frame mismatch");
    const int n = tau.nvars(), k = tau.grade();
    JetForm<K> out(tau.vars(), k, std::min(tau.order(), g.order()));
    if (k == 0) return out;  // no slot to substitute into
    for (IndexMask s = 0; s < (IndexMask(1) << n); ++s) {
        if (mask_grade(s) != k) continue;
        auto idx = mask_indices(s);
        JetSeries<K> acc(tau.vars(), out.order());
        for (int pos = 0; pos < k; ++pos)
            for (int i = 0; i < n; ++i) {
                const JetSeries<K>& gi = g.m.at(i, idx[pos]);
                if (gi.is_zero_series()) continue;
                auto rep = idx;
                rep[pos] = i;
                JetSeries<K> val = eval_indices(tau, rep);
                if (!val.is_zero_series()) acc += gi * val;
            }
        if (!acc.is_zero_series()) out.add_coeff(s, acc);
    }
    return out;
}

// Nijenhuis torsion as a vector-valued 2-form: component k is the 2-form
// N^k(X, Y); vanishes identically for constant-coefficient tensors.
template <class K>
std::vector<JetForm<K>> nijenhuis(const JetTensor11<K>& g) {
    const int n = static_cast<int>(g.vars.size());
    const int ord = g.order();
    if (ord < 1) throw truncation_error("torsion needs order >= 1");
    std::vector<JetForm<K>> out;
    out.reserve(n);
    // precompute partials
    std::vector<std::vector<std::vector<JetSeries<K>>>> dg(
        n, std::vector<std::vector<JetSeries<K>>>(n, std::vector<JetSeries<K>>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int m = 0; m < n; ++m) dg[a][b][m] = g.m.at(a, b).derivative(m);
    for (int k = 0; k < n; ++k) {
        JetForm<K> f(g.vars, 2, ord - 1);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                JetSeries<K> acc(g.vars, ord - 1);
                for (int m = 0; m < n; ++m) {
                    acc += g.m.at(m, i).truncated(ord - 1) * dg[k][j][m];
                    acc -= g.m.at(m, j).truncated(ord - 1) * dg[k][i][m];
                    acc += g.m.at(k, m).truncated(ord - 1) * (dg[m][i][j] - dg[m][j][i]);
                }
                if (!acc.is_zero_series()) f.add_coeff((IndexMask(1) << i) | (IndexMask(1) << j), acc);
            }
        out.push_back(std::move(f));
    }
    return out;
}

template <class K>
bool torsion_is_zero(const std::vector<JetForm<K>>& n, int to_order) {
    for (auto& f : n)
        if (!f.is_zero_to_order(to_order)) return false;
    return true;
}

// rho o N_G as a 2-form for a 1-form rho.
template <class K>
JetForm<K> contract_with_torsion(const JetForm<K>& rho, const std::vector<JetForm<K>>& torsion) {
    if (rho.grade() != 1) throw dimension_error("1-form expected");
    int ord = rho.order();
    for (auto& f : torsion) ord = std::min(ord, f.order());
    JetForm<K> out(rho.vars(), 2, ord);
    for (int k = 0; k < rho.nvars(); ++k) {
        JetSeries<K> rk = rho.coeff(IndexMask(1) << k);
        if (rk.is_zero_series()) continue;
        for (auto& [m, s] : torsion[k].terms()) out.add_coeff(m, rk * s);
    }
    return out;
}

// Residual of the derivation identity for pullbacks of 1-forms:
// (d(rho o G))_G - (d rho) o G - d(rho o G^2) - rho o N_G, identically zero.
template <class K>
JetForm<K> pullback_derivation_residual(const JetForm<K>& rho, const JetTensor11<K>& g) {
    if (rho.grade() != 1) throw dimension_error("pullback_derivation_residual expects a 1-form");
    JetForm<K> lhs = tau_sub(ext_d(tau_circ(rho, g)), g);
    JetForm<K> r1 = tau_circ(ext_d(rho), g);
    JetForm<K> r2 = ext_d(tau_circ(rho, g * g));
    JetForm<K> r3 = contract_with_torsion(rho, nijenhuis(g));
    return lhs - r1 - r2 - r3;
}

// Residual of the commutation identity between d and pullback:
// (d(tau o G))_G - d((tau o G)_G) - (d tau) o G, zero whenever N_G = 0.
template <class K>
JetForm<K> torsion_commutation_residual(const JetForm<K>& tau, const JetTensor11<K>& g) {
    auto tors = nijenhuis(g);
    if (!torsion_is_zero(tors, g.order() - 1))
        throw precondition_error("tensor has nonzero torsion; identity needs N_G = 0");
    JetForm<K> lhs = tau_sub(ext_d(tau_circ(tau, g)), g);
    JetForm<K> r1 = ext_d(tau_sub(tau_circ(tau, g), g));
    JetForm<K> r2 = tau_circ(ext_d(tau), g);
    return lhs - r1 - r2;
}

// Polynomial-in-t family of jet forms.
template <class K>
struct PolyJetForm {
    std::vector<JetForm<K>> c;  // coefficient of t^i

    int degree() const { return static_cast<int>(c.size()) - 1; }
    JetForm<K> eval(const K& t) const {
        if (c.empty()) throw degenerate_error("empty polynomial family");
        JetForm<K> acc = c.back();
        for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) acc = t * acc + c[i];
        return acc;
    }
    void trim() {
        while (c.size() > 1 && c.back().is_zero_form()) c.pop_back();
    }
};

// gamma(t) o (J + tI) for a polynomial family of 1-forms.
template <class K>
PolyJetForm<K> pencil_compose_1form(const PolyJetForm<K>& gamma, const JetTensor11<K>& j) {
    PolyJetForm<K> out;
    int deg = gamma.degree();
    for (int i = 0; i <= deg + 1; ++i)
        out.c.push_back(JetForm<K>(j.vars, 1, std::min(gamma.c[0].order(), j.order())));
    for (int i = 0; i <= deg; ++i) {
        out.c[i] = out.c[i] + tau_circ(gamma.c[i], j);
        out.c[i + 1] = out.c[i + 1] + gamma.c[i].truncated(out.c[i + 1].order());
    }
    out.trim();
    return out;
}

// Order-by-order inverse of a jet matrix with invertible base value.
template <class K>
Mat<JetSeries<K>> jet_matrix_inverse(const Mat<JetSeries<K>>& m, const std::vector<std::string>& vars,
                                     int order) {
    const int n = m.rows();
    Mat<K> base(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base.at(i, j) = m.at(i, j).value_at_base();
    auto binv = try_inverse(base);
    if (!binv) throw degenerate_error("jet matrix is singular at the base point");
    Mat<JetSeries<K>> b0(n, n, JetSeries<K>(vars, order));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            b0.at(i, j) = JetSeries<K>::constant(vars, order, binv->at(i, j));
    // X = sum (I - B0 M)^k B0
    Mat<JetSeries<K>> rmat = -(b0 * m);
    for (int i = 0; i < n; ++i)
        rmat.at(i, i) = rmat.at(i, i) + JetSeries<K>::constant(vars, order, K(1));
    Mat<JetSeries<K>> acc = b0, pw = b0;
    for (int k = 1; k <= order; ++k) {
        pw = rmat * pw;
        bool zero = true;
        for (int i = 0; i < n && zero; ++i)
            for (int j = 0; j < n && zero; ++j) zero = pw.at(i, j).is_zero_series();
        if (zero) break;
        acc = acc + pw;
    }
    return acc;
}

}  // namespace veroweb
