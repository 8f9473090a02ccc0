#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "veroweb/multivector.hpp"

namespace veroweb {

// Algebraic Veronese webs on a vector space: admissible couples (W, J),
// their normal form, Veronese curves, characteristic numbers and adapted
// dual bases.

template <class K>
struct AdmissibilityReport {
    bool admissible = false;
    std::vector<int> chain;  // dim W, dim(W + JW), dim(W + JW + J^2 W), ...
};

// Iterated sums W + JW + ... until stabilization (at most n steps).
template <class K>
AdmissibilityReport<K> is_admissible(const Subspace<K>& w, const Mat<K>& j) {
    if (!j.square() || j.cols() != w.ambient()) throw dimension_error("couple shape mismatch");
    AdmissibilityReport<K> rep;
    Subspace<K> cur = w;
    rep.chain.push_back(cur.dim());
    while (true) {
        Subspace<K> next = sum(cur, image_under(j, cur));
        if (next.dim() == cur.dim()) break;
        cur = next;
        rep.chain.push_back(cur.dim());
    }
    rep.admissible = (cur.dim() == w.ambient());
    return rep;
}

inline std::string chain_str(const std::vector<int>& chain) {
    std::string s = "(";
    for (size_t i = 0; i < chain.size(); ++i) s += (i ? "," : "") + std::to_string(chain[i]);
    return s + ")";
}

// Characteristic numbers from the dimension chain alone: the number of
// blocks of dimension >= l equals the l-th chain increment, so the block
// sizes are the conjugate partition of the increments.
inline std::vector<int> char_numbers_from_chain(const std::vector<int>& chain) {
    if (chain.empty()) return {};
    std::vector<int> inc;
    inc.push_back(chain[0]);
    for (size_t i = 1; i < chain.size(); ++i) inc.push_back(chain[i] - chain[i - 1]);
    int r = inc[0];
    std::vector<int> dims;
    for (int jblk = 1; jblk <= r; ++jblk)
        dims.push_back(static_cast<int>(std::count_if(inc.begin(), inc.end(), [&](int d) { return d >= jblk; })));
    return dims;  // descending by construction
}

template <class K>
std::vector<int> characteristic_numbers(const Subspace<K>& w, const Mat<K>& j) {
    auto rep = is_admissible(w, j);
    if (!rep.admissible)
        throw precondition_error("couple is not admissible; chain stalls at " + chain_str(rep.chain));
    return char_numbers_from_chain(rep.chain);
}

template <class K>
struct CoupleNormalForm {
    Mat<K> H;                          // nilpotent with Im(H - J) in W
    std::vector<Vec<K>> e;             // basis of W, one generator per block
    std::vector<int> dims;             // n_1 >= ... >= n_r
    std::vector<Subspace<K>> blocks;   // U_j spanned by (e_j, H)
    std::vector<int> chain;            // admissibility chain of the input
};

// Constructive normal form.  The block generators are chosen adapted to the
// flag K_k = { w in W : J^k w lies in W + JW + ... + J^{k-1} W }; chain
// corrections from W then close each block under a single nilpotent H.  All
// free choices are resolved by reduced-echelon least-index pivoting so the
// output is deterministic.
template <class K>
CoupleNormalForm<K> normalize_couple(const Subspace<K>& w, const Mat<K>& j) {
    auto rep = is_admissible(w, j);
    if (!rep.admissible)
        throw precondition_error("couple is not admissible; chain stalls at " + chain_str(rep.chain));
    const int n = w.ambient();
    const int r = w.dim();

    // Filtration V_0 = W up to V_m = V and powers of J.
    std::vector<Subspace<K>> filt{w};
    while (filt.back().dim() < n) filt.push_back(sum(filt.back(), image_under(j, filt.back())));
    const int m = static_cast<int>(filt.size()) - 1;
    std::vector<Mat<K>> jpow{Mat<K>::identity(n)};
    for (int k = 1; k <= m + 1; ++k) jpow.push_back(j * jpow.back());

    auto wrows = w.basis_rows();

    // Flag inside W-coordinates: K_k = ker(w -> J^k w mod V_{k-1}).
    auto flag_at = [&](int k) -> Subspace<K> {
        if (k > m) return Subspace<K>::full(r);
        Subspace<K> ann = annihilator(filt[k - 1]);
        // rows: covectors of V_{k-1}'s annihilator applied to J^k u_i
        Mat<K> sys(ann.dim(), r);
        for (int i = 0; i < r; ++i) {
            Vec<K> img = jpow[k].apply(wrows[i]);
            for (int t = 0; t < ann.dim(); ++t) {
                K acc(0);
                auto arow = ann.basis_row(t);
                for (int c = 0; c < n; ++c) acc += arow[c] * img[c];
                sys.at(t, i) = acc;
            }
        }
        return kernel_space(sys);
    };

    // Adapted generators: blocks of size k are new flag directions at level k.
    std::vector<Vec<K>> coords;           // generators in W-coordinates
    std::vector<int> block_size;
    for (int k = 1; k <= m + 1 && static_cast<int>(coords.size()) < r; ++k) {
        auto added = extend_basis(coords, flag_at(k));
        for (size_t t = 0; t < added.size(); ++t) block_size.push_back(k);
    }
    if (static_cast<int>(coords.size()) != r) throw internal_error("flag basis extraction failed");

    // Chain corrections from W so each block closes: solve
    // J^s e = sum_{s<n_j} J^s c_s with c_s in W, then f_{i+1} = J f_i - c_{n_j-1-i}.
    std::vector<std::vector<Vec<K>>> chains;
    for (size_t bi = 0; bi < coords.size(); ++bi) {
        const int nb = block_size[bi];
        Vec<K> gen = w.from_coordinates(coords[bi]);
        Mat<K> big(n, nb * r);
        for (int s = 0; s < nb; ++s)
            for (int i = 0; i < r; ++i) {
                Vec<K> col = jpow[s].apply(wrows[i]);
                for (int c = 0; c < n; ++c) big.at(c, s * r + i) = col[c];
            }
        auto sol = solve(big, jpow[nb].apply(gen));
        if (!sol) throw internal_error("block correction solve failed");
        std::vector<Vec<K>> cs(nb, Vec<K>(n, K(0)));
        for (int s = 0; s < nb; ++s)
            for (int i = 0; i < r; ++i)
                for (int c = 0; c < n; ++c) cs[s][c] += (*sol)[s * r + i] * wrows[i][c];
        std::vector<Vec<K>> chain{gen};
        for (int i = 0; i + 1 < nb; ++i) {
            Vec<K> next = j.apply(chain.back());
            for (int c = 0; c < n; ++c) next[c] -= cs[nb - 1 - i][c];
            chain.push_back(std::move(next));
        }
        chains.push_back(std::move(chain));
    }

    // Reorder blocks by descending dimension (stable).
    std::vector<size_t> order(chains.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return block_size[a] > block_size[b]; });

    CoupleNormalForm<K> nf;
    nf.chain = rep.chain;
    Mat<K> fmat(n, n), gmat(n, n);
    int colidx = 0;
    for (size_t oi = 0; oi < order.size(); ++oi) {
        auto& chain = chains[order[oi]];
        nf.e.push_back(chain.front());
        nf.dims.push_back(static_cast<int>(chain.size()));
        nf.blocks.emplace_back(n, chain);
        for (size_t i = 0; i < chain.size(); ++i, ++colidx) {
            for (int c = 0; c < n; ++c) {
                fmat.at(c, colidx) = chain[i][c];
                gmat.at(c, colidx) = (i + 1 < chain.size()) ? chain[i + 1][c] : K(0);
            }
        }
    }
    auto finv = try_inverse(fmat);
    if (!finv) throw internal_error("normal-form chains are not a basis");
    nf.H = gmat * *finv;

    // Certificate: block sizes must reproduce the chain-difference formula.
    auto expect = char_numbers_from_chain(rep.chain);
    if (nf.dims != expect) throw internal_error("normal form dims disagree with chain formula");
    return nf;
}

template <class K>
struct VeroneseCurve {
    PolyMultiVector<K> curve;        // grade r, degree exactly n - r
    std::vector<int> char_numbers;   // descending
};

// gamma(t) = phi(t) (J+tI)^{-1}w_1 ^ ... ^ (J+tI)^{-1}w_r as a polynomial
// curve, computed through the adjugate so no division ever occurs; the
// leading coefficient equals the requested top wedge.
template <class K>
VeroneseCurve<K> build_curve(const Subspace<K>& w, const Mat<K>& j, const MultiVector<K>& w_top) {
    auto rep = is_admissible(w, j);
    if (!rep.admissible)
        throw precondition_error("couple is not admissible; chain stalls at " + chain_str(rep.chain));
    const int n = w.ambient();
    const int r = w.dim();
    if (w_top.dim() != n || w_top.grade() != r) throw dimension_error("top wedge has wrong shape");

    auto urows = w.basis_rows();
    MultiVector<K> uw = wedge_of_vectors(urows, n);
    if (w_top.is_zero()) throw precondition_error("top wedge is zero");
    // w_top must be proportional to the wedge of a basis of W.
    IndexMask m0 = uw.terms().begin()->first;
    K c = w_top.coeff(m0) / uw.coeff(m0);
    if (is_zero(c) || w_top != c * uw) throw precondition_error("top wedge does not span the given W");

    auto fd = faddeev(-j);  // adj(J + tI) coefficients
    PolyMultiVector<K> acc(n, 0, {c * MultiVector<K>::basis(n, 0)});
    for (int bi = 0; bi < r; ++bi) {
        std::vector<MultiVector<K>> comp(n);
        for (int k = 0; k < n; ++k) comp[k] = MultiVector<K>::from_vector(fd.adj[k].apply(urows[bi]));
        acc = wedge(acc, PolyMultiVector<K>(n, 1, comp));
    }
    UniPoly<K> phi(fd.charpoly);
    PolyMultiVector<K> curve = (r >= 2) ? divexact(acc, poly_pow(phi, r - 1)) : acc;

    if (curve.degree() != n - r) throw internal_error("curve degree differs from n - r");
    if (curve.at_infinity() != w_top) throw internal_error("curve leading coefficient differs from top wedge");
    VeroneseCurve<K> out;
    out.curve = std::move(curve);
    out.char_numbers = char_numbers_from_chain(rep.chain);
    return out;
}

// Two curves on the same space are isomorphic exactly when their
// characteristic-number multisets agree.
template <class K>
bool curves_isomorphic(const VeroneseCurve<K>& a, const VeroneseCurve<K>& b) {
    if (a.curve.dim() != b.curve.dim() || a.curve.grade() != b.curve.grade())
        throw dimension_error("curves live on different spaces");
    auto x = a.char_numbers, y = b.char_numbers;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
}

// A Veronese web presented by its plane at infinity and the morphism
// ell : w(infinity) -> V; the planes are w(t) = (ell + tI) w(infinity).
template <class K>
struct AlgWeb {
    Subspace<K> w_inf;
    Mat<K> ell;  // ambient x dim(w_inf), acting on w_inf echelon coordinates

    AlgWeb(Subspace<K> winf, Mat<K> l) : w_inf(std::move(winf)), ell(std::move(l)) {
        if (ell.rows() != w_inf.ambient() || ell.cols() != w_inf.dim())
            throw dimension_error("ell has wrong shape");
    }
};

// Deterministic extension of ell to an endomorphism: zero on the echelon
// complement of w_inf.
template <class K>
Mat<K> extend_ell(const AlgWeb<K>& web) {
    const int n = web.w_inf.ambient();
    const int r = web.w_inf.dim();
    Mat<K> basis(n, n), images(n, n);
    auto rows = web.w_inf.basis_rows();
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < n; ++c) {
            basis.at(c, i) = rows[i][c];
            images.at(c, i) = web.ell.at(c, i);
        }
    auto comp = web.w_inf.complement_coords();
    for (size_t i = 0; i < comp.size(); ++i) basis.at(comp[i], r + static_cast<int>(i)) = K(1);
    return images * inverse(basis);
}

// Validity: no nonzero ell-invariant subspace of w_inf, i.e. the dual couple
// (annihilator(w_inf), J^T) is admissible for any extension J.
template <class K>
AdmissibilityReport<K> web_validity(const AlgWeb<K>& web) {
    Mat<K> j = extend_ell(web);
    return is_admissible(annihilator(web.w_inf), j.transpose());
}

// w(t) = (ell + tI) w(infinity) for finite t.
template <class K>
Subspace<K> web_plane(const AlgWeb<K>& web, const K& t) {
    const int n = web.w_inf.ambient();
    std::vector<Vec<K>> rows;
    auto basis = web.w_inf.basis_rows();
    for (int i = 0; i < web.w_inf.dim(); ++i) {
        Vec<K> v(n);
        for (int c = 0; c < n; ++c) v[c] = web.ell.at(c, i) + t * basis[i][c];
        rows.push_back(std::move(v));
    }
    Subspace<K> plane(n, rows);
    if (plane.dim() != web.w_inf.dim()) throw internal_error("web plane dropped dimension");
    return plane;
}

// w(infinity) is w_inf itself.
template <class K>
Subspace<K> web_plane_infinity(const AlgWeb<K>& web) {
    return web.w_inf;
}

// Representative curve of the web in the dual exterior power: the curve of
// the dual couple (annihilator(w_inf), J^T) with top wedge beta, Ker beta =
// w_inf.  Ker gamma(t) recovers web_plane(t).
template <class K>
VeroneseCurve<K> web_curve(const AlgWeb<K>& web) {
    Mat<K> j = extend_ell(web);
    Subspace<K> wdual = annihilator(web.w_inf);
    auto rows = wdual.basis_rows();
    return build_curve(wdual, j.transpose(), wedge_of_vectors(rows, web.w_inf.ambient()));
}

// Adapted dual bases (two modes mirroring the two splitting statements).
// The splitting covectors come from the normal form of the dual couple:
// e_ij = (-1)^{n_j - i} H^{n_j - i} e_j and gamma_j(t) = sum_i t^{i-1} e_ij.
template <class K>
struct CurveSplitting {
    std::vector<std::vector<Vec<K>>> covectors;  // [block j][i = 0..n_j-1]
    std::vector<int> dims;                       // descending
    Vec<K> gamma_block(int blk, const K& t) const {
        const auto& block = covectors[blk];
        Vec<K> acc(block[0].size(), K(0));
        K p(1);
        for (size_t i = 0; i < block.size(); ++i) {
            for (size_t c = 0; c < acc.size(); ++c) acc[c] += p * block[i][c];
            p = p * t;
        }
        return acc;
    }
};

template <class K>
CurveSplitting<K> curve_splitting(const AlgWeb<K>& web) {
    Mat<K> j = extend_ell(web);
    Subspace<K> wdual = annihilator(web.w_inf);
    auto nf = normalize_couple(wdual, j.transpose());
    const int n = web.w_inf.ambient();
    CurveSplitting<K> sp;
    sp.dims = nf.dims;
    for (size_t blk = 0; blk < nf.e.size(); ++blk) {
        const int nb = nf.dims[blk];
        std::vector<Vec<K>> block(nb);
        Vec<K> cur = nf.e[blk];
        for (int pw = 0; pw <= nb - 1; ++pw) {
            // covector for i = n_j - pw
            Vec<K> val = cur;
            if (pw % 2 == 1)
                for (auto& x : val) x = -x;
            block[nb - 1 - pw] = val;
            if (pw < nb - 1) cur = nf.H.apply(cur);
        }
        sp.covectors.push_back(std::move(block));
    }
    return sp;
}

namespace detail {
template <class K>
void require_distinct(const std::vector<K>& xs, const char* what) {
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j)
            if (xs[i] == xs[j]) throw precondition_error(std::string("repeated scalars in ") + what);
}
}  // namespace detail

// Mode (1): scalars b_1..b_{n-k} and b, all distinct, 1 <= k <= r.  Returns
// covectors alpha_j with alpha_j(w(b_j)) = 0 for j <= n-k and alpha_j(w(b))=0
// for the trailing k.
template <class K>
std::vector<Vec<K>> adapted_basis_mixed(const AlgWeb<K>& web, const std::vector<K>& b_list, const K& b) {
    auto sp = curve_splitting(web);
    const int n = web.w_inf.ambient();
    const int r = static_cast<int>(sp.dims.size());
    const int k = n - static_cast<int>(b_list.size());
    if (k < 1 || k > r) throw precondition_error("scalar count must be n-k with 1 <= k <= r");
    auto all = b_list;
    all.push_back(b);
    detail::require_distinct(all, "adapted basis");

    std::vector<Vec<K>> alphas;
    size_t jidx = 0;
    for (int blk = 0; blk < r; ++blk) {
        int cnt = sp.dims[blk] - (blk < k ? 1 : 0);
        for (int c = 0; c < cnt; ++c, ++jidx) alphas.push_back(sp.gamma_block(blk, b_list[jidx]));
    }
    for (int blk = 0; blk < k; ++blk) alphas.push_back(sp.gamma_block(blk, b));
    if (rank(Mat<K>::from_rows(alphas)) != n) throw internal_error("adapted covectors are dependent");
    return alphas;
}

// Mode (2): scalars c_1..c_{n_1}; returns the basis beta_ij = gamma_i(c_j),
// i = 1..k_j, where k_j counts the blocks of dimension >= j.
template <class K>
std::vector<Vec<K>> adapted_basis_heights(const AlgWeb<K>& web, const std::vector<K>& c_list) {
    auto sp = curve_splitting(web);
    const int n = web.w_inf.ambient();
    const int n1 = sp.dims.empty() ? 0 : sp.dims.front();
    if (static_cast<int>(c_list.size()) != n1) throw precondition_error("need exactly n_1 scalars");
    detail::require_distinct(c_list, "adapted basis");
    std::vector<Vec<K>> betas;
    for (int jcol = 0; jcol < n1; ++jcol) {
        int kj = static_cast<int>(std::count_if(sp.dims.begin(), sp.dims.end(),
                                                [&](int d) { return d >= jcol + 1; }));
        for (int i = 0; i < kj; ++i) betas.push_back(sp.gamma_block(i, c_list[jcol]));
    }
    if (rank(Mat<K>::from_rows(betas)) != n) throw internal_error("adapted covectors are dependent");
    return betas;
}

}  // namespace veroweb
