#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "veroweb/veronese.hpp"

namespace veroweb {

// Classification of pairs of bivectors: rank and corank, the core subspace
// L0, the symplectic factor with its elementary divisors, and the
// characteristic numbers of the induced web on W / L0.

template <class K>
Mat<K> bivector_matrix(const MultiVector<K>& b) {
    if (b.grade() != 2) throw dimension_error("bivector expected");
    int n = b.dim();
    Mat<K> a(n, n);
    for (auto& [m, c] : b.terms()) {
        auto idx = mask_indices(m);
        a.at(idx[0], idx[1]) = c;
        a.at(idx[1], idx[0]) = -c;
    }
    return a;
}

template <class K>
MultiVector<K> bivector_from_matrix(const Mat<K>& a) {
    if (!a.square()) throw dimension_error("antisymmetric matrix expected");
    MultiVector<K> b(a.rows(), 2);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j) {
            if (a.at(i, j) != -a.at(j, i)) throw precondition_error("matrix is not antisymmetric");
            b.set((IndexMask(1) << i) | (IndexMask(1) << j), a.at(i, j));
        }
    return b;
}

// Lambda(xi, .) as a vector of W; the image of the bivector is the span of
// these over all covectors xi.
template <class K>
Vec<K> bivector_insert(const Mat<K>& a, const Vec<K>& xi) {
    Vec<K> v = a.apply(xi);
    for (auto& x : v) x = -x;
    return v;
}

// Dual bivector of a symplectic 2-form (convention: w(u,v) = u^T Omega v).
template <class K>
Mat<K> dual_bivector(const Mat<K>& omega) {
    auto inv = try_inverse(omega);
    if (!inv) throw degenerate_error("form is not symplectic");
    return -*inv;
}

// The 2-form associated to a bivector on its image: for u = Lambda(xi,.),
// v = Lambda(eta,.), omega(u,v) = Lambda(xi,eta).  Returns the matrix of the
// form on the given basis (which must lie inside Im Lambda).
template <class K>
Mat<K> associated_form_on(const Mat<K>& a, const std::vector<Vec<K>>& basis) {
    int d = static_cast<int>(basis.size());
    std::vector<Vec<K>> xi(d);
    for (int i = 0; i < d; ++i) {
        Vec<K> rhs = basis[i];
        for (auto& x : rhs) x = -x;
        auto sol = solve(a, rhs);  // -A xi = u
        if (!sol) throw precondition_error("vector is not in the image of the bivector");
        xi[i] = *sol;
    }
    Mat<K> m(d, d);
    for (int j = 0; j < d; ++j) {
        Vec<K> img = a.apply(xi[j]);
        for (int i = 0; i < d; ++i) {
            K acc(0);
            for (size_t c = 0; c < img.size(); ++c) acc += xi[i][c] * img[c];
            m.at(i, j) = acc;
        }
    }
    return m;
}

template <class K>
struct BivectorPair {
    int dim = 0;
    MultiVector<K> lambda, lambda1;

    BivectorPair(int d, MultiVector<K> l, MultiVector<K> l1)
        : dim(d), lambda(std::move(l)), lambda1(std::move(l1)) {
        if (lambda.dim() != d || lambda1.dim() != d || lambda.grade() != 2 || lambda1.grade() != 2)
            throw dimension_error("bivector pair shape mismatch");
    }
};

template <class K>
MultiVector<K> pencil_member(const BivectorPair<K>& p, const K& c0, const K& c1) {
    return c0 * p.lambda + c1 * p.lambda1;
}

struct PencilRank {
    int rank = 0;
    int corank = 0;
    bool is_maximal = false;
};

// Rank of the pencil: max over dim+1 samples of rank((1-t)L + t L1); the rank
// drops at finitely many (at most dim/2) parameter values.
template <class K>
PencilRank pencil_rank(const BivectorPair<K>& p) {
    PencilRank out;
    for (int t = 0; t <= p.dim; ++t) {
        Mat<K> m = bivector_matrix(pencil_member(p, K(1) - K(t), K(t)));
        out.rank = std::max(out.rank, rank(std::move(m)));
    }
    out.corank = p.dim - out.rank;
    int r0 = rank(bivector_matrix(p.lambda));
    int r1 = rank(bivector_matrix(p.lambda1));
    out.is_maximal = (r0 == out.rank && r1 == out.rank);
    return out;
}

template <class K>
struct Maximalized {
    BivectorPair<K> pair;
    K a, a1;  // Lambda' = (1-a)L + a L1, Lambda1' = (1-a1)L + a1 L1
};

// Recombine the pencil so both named members attain the pencil rank.  An
// already maximal pair is returned unchanged with (a, a1) = (0, 1).
template <class K>
Maximalized<K> maximalize(const BivectorPair<K>& p) {
    if (p.lambda.is_zero() && p.lambda1.is_zero() && p.dim >= 2)
        throw degenerate_error("zero pencil");
    auto pr = pencil_rank(p);
    if (pr.is_maximal) return {p, K(0), K(1)};
    auto member_rank = [&](const K& a) {
        return rank(bivector_matrix(pencil_member(p, K(1) - a, a)));
    };
    std::vector<K> picked;
    for (int i = 0; i <= p.dim + 3 && picked.size() < 2; ++i)
        if (member_rank(K(i)) == pr.rank) picked.push_back(K(i));
    if (picked.size() < 2) throw internal_error("maximal recombination not found");
    BivectorPair<K> out(p.dim, pencil_member(p, K(1) - picked[0], picked[0]),
                        pencil_member(p, K(1) - picked[1], picked[1]));
    return {out, picked[0], picked[1]};
}

// Description of a bivector as a symplectic quotient: the covectors
// omega(V0, .) restricted to V1 annihilate the image and omega restricted to
// V1 is its 2-form.  The bivector itself is materialized from that
// description (kernel of the covectors plus inversion of the restricted
// form), not from the projection.
template <class K>
struct QuotientBivector {
    std::vector<Vec<K>> ann_covectors;  // in V1 coordinates
    Mat<K> restricted_form;             // omega restricted to V1, V1 coordinates
    MultiVector<K> bivector;
};

template <class K>
QuotientBivector<K> quotient_bivector(const Mat<K>& omega, const Subspace<K>& v0, const Subspace<K>& v1) {
    const int n = omega.rows();
    if (!omega.square() || v0.ambient() != n || v1.ambient() != n)
        throw dimension_error("quotient_bivector shape mismatch");
    if (!(omega + omega.transpose()).is_zero()) throw precondition_error("form is not antisymmetric");
    if (!try_inverse(omega)) throw precondition_error("form is not symplectic");
    if (v0.dim() + v1.dim() != n || sum(v0, v1).dim() != n)
        throw precondition_error("V0 and V1 are not complementary");
    auto pair_with = [&](const Vec<K>& u, const Vec<K>& v) {
        K acc(0);
        auto ov = omega.apply(v);
        for (int c = 0; c < n; ++c) acc += u[c] * ov[c];
        return acc;
    };
    for (auto& u : v0.basis_rows())
        for (auto& v : v0.basis_rows())
            if (!is_zero(pair_with(u, v))) throw precondition_error("V0 is not isotropic for the form");

    QuotientBivector<K> out;
    auto v1rows = v1.basis_rows();
    const int d1 = v1.dim();
    for (auto& u : v0.basis_rows()) {
        Vec<K> cov(d1);
        for (int b = 0; b < d1; ++b) cov[b] = pair_with(u, v1rows[b]);
        out.ann_covectors.push_back(std::move(cov));
    }
    out.restricted_form = Mat<K>(d1, d1);
    for (int a = 0; a < d1; ++a)
        for (int b = 0; b < d1; ++b) out.restricted_form.at(a, b) = pair_with(v1rows[a], v1rows[b]);

    Subspace<K> img = out.ann_covectors.empty()
                          ? Subspace<K>::full(d1)
                          : kernel_space(Mat<K>::from_rows(out.ann_covectors));
    if (img.dim() == 0) {
        out.bivector = MultiVector<K>(d1, 2);
        return out;
    }
    auto brows = img.basis_rows();
    Mat<K> bd = Mat<K>::from_rows(brows);
    Mat<K> md(img.dim(), img.dim());
    for (int a = 0; a < img.dim(); ++a)
        for (int b = 0; b < img.dim(); ++b) {
            K acc(0);
            auto ov = out.restricted_form.apply(brows[b]);
            for (int c = 0; c < d1; ++c) acc += brows[a][c] * ov[c];
            md.at(a, b) = acc;
        }
    auto mdinv = try_inverse(md);
    if (!mdinv) throw internal_error("restricted form degenerate on the quotient image");
    out.bivector = bivector_from_matrix(bd.transpose() * (-*mdinv) * bd);
    return out;
}

// Projection matrix V -> V1 coordinates along V0.
template <class K>
Mat<K> projection_along(const Subspace<K>& v0, const Subspace<K>& v1) {
    const int n = v0.ambient();
    Mat<K> basis(n, n);
    auto r0 = v0.basis_rows(), r1 = v1.basis_rows();
    for (int i = 0; i < v0.dim(); ++i)
        for (int c = 0; c < n; ++c) basis.at(c, i) = r0[i][c];
    for (int i = 0; i < v1.dim(); ++i)
        for (int c = 0; c < n; ++c) basis.at(c, v0.dim() + i) = r1[i][c];
    Mat<K> inv = inverse(basis);
    Mat<K> p(v1.dim(), n);
    for (int i = 0; i < v1.dim(); ++i)
        for (int c = 0; c < n; ++c) p.at(i, c) = inv.at(v0.dim() + i, c);
    return p;
}

template <class K>
Mat<K> pushforward_bivector(const Mat<K>& p, const Mat<K>& biv) {
    return p * biv * p.transpose();
}

// The Kronecker elementary pair in dimension 2n-1: quotient of the dual pair
// of (sum e*_{2j-1}^e*_{2j}, sum b_j e*_{2j-1}^e*_{2j}) by the line spanned
// by -sum e_{2j}.  Up to isomorphism it only depends on the dimension.
template <class K>
BivectorPair<K> elementary_pair(int n, const std::vector<K>& b) {
    if (n < 1 || static_cast<int>(b.size()) != n) throw precondition_error("need n scalars");
    detail::require_distinct(b, "elementary pair");
    for (auto& x : b)
        if (is_zero(x)) throw precondition_error("elementary pair scalars must be nonzero");
    const int N = 2 * n;
    Mat<K> omega(N, N), omega1(N, N);
    for (int j = 0; j < n; ++j) {
        omega.at(2 * j, 2 * j + 1) = K(1);
        omega.at(2 * j + 1, 2 * j) = K(-1);
        omega1.at(2 * j, 2 * j + 1) = b[j];
        omega1.at(2 * j + 1, 2 * j) = -b[j];
    }
    Vec<K> e0(N, K(0));
    for (int j = 0; j < n; ++j) e0[2 * j + 1] = K(-1);
    Subspace<K> v0(N, {e0});
    std::vector<Vec<K>> e1rows;
    for (int i = 0; i < N - 1; ++i) {
        Vec<K> v(N, K(0));
        v[i] = K(1);
        e1rows.push_back(std::move(v));
    }
    Subspace<K> v1(N, e1rows);
    Mat<K> p = projection_along(v0, v1);
    Mat<K> l = pushforward_bivector(p, dual_bivector(omega));
    Mat<K> l1 = pushforward_bivector(p, dual_bivector(omega1));
    return BivectorPair<K>(N - 1, bivector_from_matrix(l), bivector_from_matrix(l1));
}

template <class K>
struct SampleRecord {
    K t = K(0);
    int member_rank = 0;
    int intersection_dim = -1;  // -1 when the sample was skipped
};

template <class K>
struct ExceptionalValues {
    std::vector<std::pair<K, int>> roots;  // rational roots of the char poly
    UniPoly<K> residual;                   // unfactored part (constant when split)
};

template <class K>
struct PencilInvariants {
    int rank = 0;
    int corank = 0;
    bool is_maximal = false;
    Subspace<K> l0 = Subspace<K>(0);
    Subspace<K> l1 = Subspace<K>(0);
    UniPoly<K> symplectic_charpoly;
    std::vector<UniPoly<K>> invariant_factors;  // nontrivial, ascending divisibility
    std::vector<std::pair<UniPoly<K>, int>> elementary_divisors;
    bool divisors_paired = false;
    std::vector<int> web_char_numbers;  // descending
    ExceptionalValues<K> exceptional_values;
    std::vector<SampleRecord<K>> trace;
};

namespace detail {

template <class F>
void for_each_subset(int n, int k, F&& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!fn(idx)) return;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

template <class K>
UniPoly<K> poly_minor_det(const std::vector<std::vector<UniPoly<K>>>& tm,
                          const std::vector<int>& rows, const std::vector<int>& cols) {
    size_t q = rows.size();
    if (q == 1) return tm[rows[0]][cols[0]];
    UniPoly<K> acc;
    for (size_t j = 0; j < q; ++j) {
        const UniPoly<K>& pivot = tm[rows[0]][cols[j]];
        if (pivot.is_zero()) continue;
        std::vector<int> subr(rows.begin() + 1, rows.end());
        std::vector<int> subc;
        for (size_t c = 0; c < q; ++c)
            if (c != j) subc.push_back(cols[c]);
        UniPoly<K> term = pivot * poly_minor_det<K>(tm, subr, subc);
        if (j % 2 == 0) acc += term; else acc -= term;
    }
    return acc;
}

// Invariant factors of tI - K via gcd chains of minors (no Smith form).
template <class K>
std::vector<UniPoly<K>> invariant_factors_of(const Mat<K>& kbar) {
    const int s = kbar.rows();
    std::vector<UniPoly<K>> out;
    if (s == 0) return out;
    std::vector<std::vector<UniPoly<K>>> tm(s, std::vector<UniPoly<K>>(s));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            tm[i][j] = UniPoly<K>::constant(-kbar.at(i, j));
            if (i == j) tm[i][j] += UniPoly<K>::t();
        }
    UniPoly<K> prev = UniPoly<K>::constant(K(1));
    for (int k = 1; k <= s; ++k) {
        UniPoly<K> g;
        for_each_subset(s, k, [&](const std::vector<int>& rows) {
            bool keep_going = true;
            for_each_subset(s, k, [&](const std::vector<int>& cols) {
                UniPoly<K> m = poly_minor_det<K>(tm, rows, cols);
                if (!m.is_zero()) g = g.is_zero() ? m.monic() : poly_gcd(g, m);
                keep_going = !(!g.is_zero() && g.degree() == 0);
                return keep_going;
            });
            return keep_going;
        });
        if (g.is_zero()) throw internal_error("vanishing minor gcd for tI - K");
        out.push_back(divexact(g, prev).monic());
        prev = g;
    }
    return out;
}

}  // namespace detail

// Full classification of a maximal pair.  L0 is the stabilized
// intersection of Im(Lambda + t Lambda1) over integer samples with corank
// exactly r; sampling requires at least dim+1 inspected values and two
// consecutive admissible samples leaving the intersection unchanged.
template <class K>
PencilInvariants<K> classify(const BivectorPair<K>& p) {
    PencilInvariants<K> out;
    const int m = p.dim;
    auto pr = pencil_rank(p);
    out.rank = pr.rank;
    out.corank = pr.corank;
    out.is_maximal = pr.is_maximal;
    if (!pr.is_maximal) throw precondition_error("pair is not maximal; recombine it first");
    const int r = pr.corank;
    Mat<K> la = bivector_matrix(p.lambda);
    Mat<K> la1 = bivector_matrix(p.lambda1);

    Subspace<K> l0 = Subspace<K>::full(m);
    bool have_good = false, stabilized = false;
    int stable_run = 0, inspected = 0;
    for (int t = 0; t <= 3 * m + 10; ++t) {
        ++inspected;
        Subspace<K> img = column_space(la + K(t) * la1);
        SampleRecord<K> rec;
        rec.t = K(t);
        rec.member_rank = img.dim();
        if (m - img.dim() != r) {
            out.trace.push_back(rec);
            continue;
        }
        Subspace<K> next = have_good ? intersect(l0, img) : img;
        if (have_good && next == l0) ++stable_run; else stable_run = 0;
        have_good = true;
        l0 = next;
        rec.intersection_dim = l0.dim();
        out.trace.push_back(rec);
        if (stable_run >= 2 && inspected >= m + 1) { stabilized = true; break; }
    }
    if (!stabilized) throw internal_error("L0 intersection failed to stabilize");
    out.l0 = l0;

    // L1 = Lambda(L0', .); as subspaces Lambda and Lambda1 give the same image.
    Subspace<K> l0ann = annihilator(l0);
    std::vector<Vec<K>> l1rows, l1rows_alt;
    for (auto& xi : l0ann.basis_rows()) {
        l1rows.push_back(bivector_insert(la, xi));
        l1rows_alt.push_back(bivector_insert(la1, xi));
    }
    out.l1 = Subspace<K>(m, l1rows);
    if (out.l1 != Subspace<K>(m, l1rows_alt))
        throw internal_error("Lambda and Lambda1 disagree on the annihilator of L0");
    if (!l0.contains(out.l1)) throw internal_error("L1 is not contained in L0");

    // Symplectic factor on L0 / L1.
    auto l0rows = l0.basis_rows();
    Mat<K> mw = associated_form_on(la, l0rows);
    Mat<K> mw1 = associated_form_on(la1, l0rows);
    {
        std::vector<Vec<K>> kv;
        for (auto& c : kernel_space(mw).basis_rows()) kv.push_back(l0.from_coordinates(c));
        if (Subspace<K>(m, kv) != out.l1) throw internal_error("kernel of restricted form is not L1");
    }
    std::vector<Vec<K>> l1_in_l0;
    for (auto& v : out.l1.basis_rows()) {
        auto c = l0.coordinates_of(v);
        if (!c) throw internal_error("L1 not expressible in L0 coordinates");
        l1_in_l0.push_back(*c);
    }
    Subspace<K> l1c(l0.dim(), l1_in_l0);
    auto quot_idx = l1c.complement_coords();
    const int s = static_cast<int>(quot_idx.size());
    if (s > 0) {
        Mat<K> wbar(s, s), wbar1(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                wbar.at(i, j) = mw.at(quot_idx[i], quot_idx[j]);
                wbar1.at(i, j) = mw1.at(quot_idx[i], quot_idx[j]);
            }
        auto winv = try_inverse(wbar);
        if (!winv) throw internal_error("projected form on L0/L1 is not symplectic");
        Mat<K> kbar = (wbar1 * *winv).transpose();  // wbar1 = wbar(Kbar ., .)
        out.symplectic_charpoly = UniPoly<K>(faddeev(kbar).charpoly);
        for (auto& f : detail::invariant_factors_of(kbar))
            if (f.degree() >= 1) out.invariant_factors.push_back(f);
        for (auto& f : out.invariant_factors) {
            UniPoly<K> rem = f.monic();
            for (auto& [root, mult] : rational_roots(f)) {
                out.elementary_divisors.emplace_back(UniPoly<K>::linear(-root), mult);
                for (int q = 0; q < mult; ++q) rem = divexact(rem, UniPoly<K>::linear(-root));
            }
            if (rem.degree() >= 1) out.elementary_divisors.emplace_back(rem, 1);
        }
        // Even-multiplicity certificate: nontrivial invariant factors pair up.
        out.divisors_paired = out.invariant_factors.size() % 2 == 0;
        for (size_t i = 0; i + 1 < out.invariant_factors.size() && out.divisors_paired; i += 2)
            out.divisors_paired = (out.invariant_factors[i] == out.invariant_factors[i + 1]);
    } else {
        out.symplectic_charpoly = UniPoly<K>::constant(K(1));
        out.divisors_paired = true;
    }

    // Induced web on W / L0.
    if (r > 0) {
        auto comp = l0.complement_coords();
        const int np = static_cast<int>(comp.size());
        Mat<K> proj(np, m);
        for (int i = 0; i < np; ++i) proj.at(i, comp[i]) = K(1);
        for (int pi = 0; pi < l0.dim(); ++pi)
            for (int i = 0; i < np; ++i) proj.at(i, l0.pivots()[pi]) = -l0.basis().at(pi, comp[i]);
        auto project = [&](const Subspace<K>& sp) {
            std::vector<Vec<K>> rows;
            for (auto& v : sp.basis_rows()) rows.push_back(proj.apply(v));
            return Subspace<K>(np, rows);
        };
        Subspace<K> winf = project(column_space(la1));
        if (winf.dim() != np - r) throw internal_error("web plane at infinity has wrong dimension");
        std::vector<std::pair<K, Mat<K>>> annbases;
        for (auto& rec : out.trace) {
            if (rec.intersection_dim < 0) continue;
            Subspace<K> wt = project(column_space(la + rec.t * la1));
            annbases.emplace_back(rec.t, annihilator(wt).basis());
            if (static_cast<int>(annbases.size()) >= np + 2) break;
        }
        Mat<K> ell(np, winf.dim());
        for (int i = 0; i < winf.dim(); ++i) {
            Vec<K> u = winf.basis_row(i);
            std::vector<Vec<K>> rows;
            Vec<K> rhs;
            for (auto& [t, ab] : annbases)
                for (int q = 0; q < ab.rows(); ++q) {
                    rows.push_back(ab.row(q));
                    K acc(0);
                    for (int c = 0; c < np; ++c) acc += ab.at(q, c) * u[c];
                    rhs.push_back(-t * acc);
                }
            Mat<K> sys = Mat<K>::from_rows(rows);
            if (rank(sys) != np) throw internal_error("web morphism underdetermined by samples");
            auto sol = solve(sys, rhs);
            if (!sol) throw internal_error("web morphism reconstruction inconsistent");
            for (int c = 0; c < np; ++c) ell.at(c, i) = (*sol)[c];
        }
        AlgWeb<K> web(winf, ell);
        auto validity = web_validity(web);
        if (!validity.admissible) throw internal_error("induced web is not admissible");
        out.web_char_numbers = char_numbers_from_chain(validity.chain);
    }

    // Dimension bookkeeping certificates.
    int book = out.symplectic_charpoly.degree();
    for (int nl : out.web_char_numbers) book += 2 * nl - 1;
    if (book != m) throw internal_error("dimension bookkeeping failed in classify");
    if (l0.dim() - out.l1.dim() != out.symplectic_charpoly.degree())
        throw internal_error("dim L0 - dim L1 differs from the symplectic degree");

    for (auto& [root, mult] : rational_roots(out.symplectic_charpoly))
        out.exceptional_values.roots.emplace_back(root, mult);
    UniPoly<K> rem = out.symplectic_charpoly.monic();
    for (auto& [root, mult] : out.exceptional_values.roots)
        for (int q = 0; q < mult; ++q) rem = divexact(rem, UniPoly<K>::linear(-root));
    out.exceptional_values.residual = rem;
    return out;
}

// In odd dimension the dense orbit is the Kronecker elementary
// pair: maximal, corank one, trivial symplectic factor.
template <class K>
bool is_generic(const BivectorPair<K>& p) {
    if (p.dim % 2 == 0) throw precondition_error("genericity is defined in odd dimension");
    auto pr = pencil_rank(p);
    if (!pr.is_maximal || pr.corank != 1) return false;
    return classify(p).symplectic_charpoly.degree() == 0;
}

// Dimension of the symplectic factor of the quotient of a symplectic pair by
// a line: 2 (n - dim span(V0, J)) where omega1 = omega(J, .).
template <class K>
int line_quotient_symplectic_dim(const Mat<K>& omega, const Mat<K>& omega1, const Subspace<K>& v0) {
    const int N = omega.rows();
    if (N % 2 != 0) throw dimension_error("symplectic forms live in even dimension");
    if (v0.dim() != 1) throw precondition_error("V0 must be a line");
    auto oinv = try_inverse(omega);
    if (!oinv || !try_inverse(omega1)) throw degenerate_error("forms must be symplectic");
    Mat<K> j = (omega1 * *oinv).transpose();  // omega1 = omega(J ., .)
    Subspace<K> v1 = v0;
    while (true) {
        Subspace<K> next = sum(v1, image_under(j, v1));
        if (next.dim() == v1.dim()) break;
        v1 = next;
    }
    return 2 * (N / 2 - v1.dim());
}

// Direct sum of two pairs on the concatenated coordinates.
template <class K>
BivectorPair<K> product_pair(const BivectorPair<K>& a, const BivectorPair<K>& b) {
    int n = a.dim + b.dim;
    auto emb = [&](const MultiVector<K>& lo, const MultiVector<K>& hi) {
        MultiVector<K> out(n, 2);
        for (auto& [mm, c] : lo.terms()) out.set(mm, c);
        for (auto& [mm, c] : hi.terms()) out.set(mm << a.dim, c);
        return out;
    };
    return BivectorPair<K>(n, emb(a.lambda, b.lambda), emb(a.lambda1, b.lambda1));
}

// Dual pair of two symplectic forms on the same space.
template <class K>
BivectorPair<K> dual_pair(const Mat<K>& omega, const Mat<K>& omega1) {
    return BivectorPair<K>(omega.rows(), bivector_from_matrix(dual_bivector(omega)),
                           bivector_from_matrix(dual_bivector(omega1)));
}

}  // namespace veroweb
