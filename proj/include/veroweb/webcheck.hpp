#pragma once

#include <string>
#include <vector>

#include "veroweb/jetform.hpp"
#include "veroweb/veronese.hpp"

namespace veroweb {

// Veronese-web verification and bihamiltonian compatibility at jet level.

// A codimension-r subfoliation given by r closed defining 1-forms.
template <class K>
struct FoliationSpec {
    std::vector<JetForm<K>> covectors;

    int codim() const { return static_cast<int>(covectors.size()); }
    JetForm<K> top_wedge() const {
        if (covectors.empty()) throw degenerate_error("empty foliation spec");
        JetForm<K> acc = covectors[0];
        for (size_t i = 1; i < covectors.size(); ++i) acc = wedge(acc, covectors[i]);
        return acc;
    }
};

template <class K>
void validate_foliation(const FoliationSpec<K>& f) {
    if (f.covectors.empty()) throw degenerate_error("empty foliation spec");
    for (auto& cv : f.covectors) {
        if (cv.grade() != 1) throw dimension_error("foliation covectors must be 1-forms");
        if (!ext_d(cv).is_zero_to_order(cv.order() - 1))
            throw precondition_error("foliation covector is not closed to truncation order");
    }
    if (f.top_wedge().value_at_base().is_zero())
        throw precondition_error("foliation covectors are dependent at the base point");
}

namespace detail {

// adj(B) and det(B) of a jet matrix through the division-free recursion.
template <class K>
std::pair<Mat<JetSeries<K>>, JetSeries<K>> jet_adjugate(const Mat<JetSeries<K>>& b) {
    auto fd = faddeev(b);
    int n = b.rows();
    Mat<JetSeries<K>> adj = fd.adj[0];
    JetSeries<K> det = fd.charpoly[0];
    if (n % 2 == 0) {
        adj = -adj;  // adj(B) = (-1)^{n-1} * coefficient, det(B) = (-1)^n c_0
    } else {
        det = -det;
    }
    return {adj, det};
}

template <class K>
std::vector<UniPoly<K>> lagrange_basis(const std::vector<K>& nodes) {
    std::vector<UniPoly<K>> out;
    for (size_t s = 0; s < nodes.size(); ++s) {
        UniPoly<K> num = UniPoly<K>::constant(K(1));
        K den(1);
        for (size_t q = 0; q < nodes.size(); ++q) {
            if (q == s) continue;
            num *= UniPoly<K>::linear(-nodes[q]);  // (t - node_q)
            den = den * (nodes[s] - nodes[q]);
        }
        out.push_back((K(1) / den) * num);
    }
    return out;
}

}  // namespace detail

// Representative curve gamma(t) = det(J + tI) beta o (J + tI)^{-1} of the
// web cut out by (J, beta), computed through the adjugate over the jet ring
// and certified by re-multiplication at enough sample values to pin the
// polynomial identity gamma(t) phi(t)^{r-1} = beta o adj(J + tI).
template <class K>
PolyJetForm<K> representative(const JetTensor11<K>& j, const JetForm<K>& beta) {
    const int n = static_cast<int>(j.vars.size());
    const int r = beta.grade();
    if (beta.vars() != j.vars) throw dimension_error("representative frame mismatch");
    MultiVector<K> beta0 = beta.value_at_base();
    if (beta0.is_zero()) throw precondition_error("beta vanishes at the base point");
    // Pointwise span condition (singular frames are rejected here).
    Mat<K> j0 = j.value_at_base();
    Subspace<K> f0 = kernel_of_form(beta0);
    if (!is_admissible(annihilator(f0), j0.transpose()).admissible)
        throw precondition_error("singular jet frame: the kernel of beta admits an invariant subspace");

    UniPoly<K> phi0 = char_poly(j0);
    auto good = [&](long long t) { return !is_zero(phi0.eval(K(t))); };
    const int need = r * (n - 1) + 1;
    std::vector<K> nodes;
    std::vector<JetForm<K>> pulled;   // beta o adj(J + tI)
    std::vector<JetSeries<K>> dets;   // phi(t) as a jet
    for (long long t = 0; static_cast<int>(nodes.size()) < need; ++t) {
        if (!good(t)) continue;
        Mat<JetSeries<K>> b = j.m;
        for (int i = 0; i < n; ++i)
            b.at(i, i) = b.at(i, i) + JetSeries<K>::constant(j.vars, b.at(i, i).order(), K(t));
        auto [adj, det] = detail::jet_adjugate(b);
        JetTensor11<K> adjt(j.vars, adj);
        nodes.push_back(K(t));
        pulled.push_back(tau_circ(beta, adjt));
        dets.push_back(det);
    }
    // gamma at the first n-r+1 nodes, then Lagrange interpolation.
    std::vector<K> inodes(nodes.begin(), nodes.begin() + (n - r + 1));
    auto lag = detail::lagrange_basis(inodes);
    PolyJetForm<K> gamma;
    for (int i = 0; i <= n - r; ++i) gamma.c.push_back(JetForm<K>(j.vars, r, beta.order()));
    for (size_t s = 0; s < inodes.size(); ++s) {
        JetSeries<K> scale = JetSeries<K>::constant(j.vars, beta.order(), K(1));
        for (int q = 0; q < r - 1; ++q) scale = scale * dets[s];
        JetForm<K> val = scale.inverse() * pulled[s];
        for (int i = 0; i <= n - r; ++i) {
            K c = lag[s].coeff(i);
            if (!is_zero(c)) gamma.c[i] = gamma.c[i] + c * val;
        }
    }
    // Degree/divisibility certificate on every sample.
    for (size_t s = 0; s < nodes.size(); ++s) {
        JetForm<K> lhs = gamma.eval(nodes[s]);
        JetSeries<K> scale = JetSeries<K>::constant(j.vars, beta.order(), K(1));
        for (int q = 0; q < r - 1; ++q) scale = scale * dets[s];
        if (!(scale * lhs - pulled[s]).is_zero_to_order(lhs.order()))
            throw precondition_error("frame does not produce a polynomial representative");
    }
    if (!(gamma.c[n - r] - beta).is_zero_to_order(beta.order()))
        throw internal_error("representative leading coefficient differs from beta");
    return gamma;
}

// Contraction of a jet form by the i-th coordinate vector.
template <class K>
JetForm<K> contract_basis(const JetForm<K>& a, int i) {
    if (a.grade() == 0) throw dimension_error("contraction of a 0-form");
    JetForm<K> out(a.vars(), a.grade() - 1, a.order());
    IndexMask bit = IndexMask(1) << i;
    for (auto& [m, s] : a.terms()) {
        if (!(m & bit)) continue;
        int below = std::popcount(m & (bit - 1));
        out.add_coeff(m & ~bit, (below % 2 == 0) ? s : -s);
    }
    return out;
}

// Extract r jet 1-forms spanning the annihilator of Ker(gamma) near the base
// point, by contracting with coordinate (r-1)-frames chosen greedily for
// base-point independence.
template <class K>
std::vector<JetForm<K>> defining_covectors(const JetForm<K>& gamma, int r) {
    const int n = gamma.nvars();
    std::vector<JetForm<K>> out;
    std::vector<Vec<K>> base_rows;
    for (IndexMask m = 0; m < (IndexMask(1) << n) && static_cast<int>(out.size()) < r; ++m) {
        if (mask_grade(m) != r - 1) continue;
        JetForm<K> mu = gamma;
        auto idx = mask_indices(m);
        for (auto it = idx.rbegin(); it != idx.rend(); ++it) mu = contract_basis(mu, *it);
        Vec<K> row(n, K(0));
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            row[i] = mu.coeff(IndexMask(1) << i).value_at_base();
            nonzero = nonzero || !is_zero(row[i]);
        }
        if (!nonzero) continue;
        auto trial = base_rows;
        trial.push_back(row);
        if (rank(Mat<K>::from_rows(trial)) != static_cast<int>(trial.size())) continue;
        base_rows.push_back(row);
        out.push_back(mu);
    }
    if (static_cast<int>(out.size()) != r)
        throw degenerate_error("could not extract independent defining covectors");
    return out;
}

template <class K>
struct WebSampleCheck {
    K t = K(0);
    int kernel_dim = -1;
    bool involutive = false;
    int residual_order = -1;
};

template <class K>
struct WebReport {
    bool span_ok = false;
    std::vector<int> char_numbers;  // at the base point
    int height = 0;                 // n_1
    bool torsion_ok = false;
    int torsion_order = -1;
    bool closure_ok = false;
    int closure_order = -1;
    bool beta_matches_foliation = false;
    std::vector<WebSampleCheck<K>> samples;
    bool integrability_ok = false;

    bool pass() const {
        return span_ok && torsion_ok && closure_ok && beta_matches_foliation && integrability_ok;
    }
};

// Web verification: span condition at the base point, torsion and closure
// restricted to the foliation (implemented by wedging with the defining
// covectors), and leafwise integrability of w(t) at height+2 sampled values.
template <class K>
WebReport<K> verify_web(const JetTensor11<K>& j, const JetForm<K>& beta, const FoliationSpec<K>& fol,
                        int extra_samples = 0) {
    validate_foliation(fol);
    const int n = static_cast<int>(j.vars.size());
    const int r = fol.codim();
    if (beta.grade() != r) throw dimension_error("beta grade must equal the foliation codimension");
    WebReport<K> rep;

    JetForm<K> lam = fol.top_wedge();
    MultiVector<K> lam0 = lam.value_at_base();
    Subspace<K> f0 = kernel_of_form(lam0);
    MultiVector<K> beta0 = beta.value_at_base();
    rep.beta_matches_foliation = !beta0.is_zero() && kernel_of_form(beta0) == f0;

    Mat<K> j0 = j.value_at_base();
    auto adm = is_admissible(annihilator(f0), j0.transpose());
    rep.span_ok = adm.admissible;
    if (rep.span_ok) {
        rep.char_numbers = char_numbers_from_chain(adm.chain);
        rep.height = rep.char_numbers.front();
    }

    // Torsion restricted to the foliation, componentwise.
    auto tors = nijenhuis(j);
    rep.torsion_order = std::min(lam.order(), j.order() - 1);
    rep.torsion_ok = true;
    for (auto& comp : tors) {
        JetForm<K> w = wedge(lam, comp);
        rep.torsion_ok = rep.torsion_ok && w.is_zero_to_order(rep.torsion_order);
    }

    // d(lambda_j o J) restricted to the foliation.
    rep.closure_order = std::min(lam.order(), j.order()) - 1;
    rep.closure_ok = true;
    for (auto& cv : fol.covectors) {
        JetForm<K> w = wedge(lam, ext_d(tau_circ(cv, j)));
        rep.closure_ok = rep.closure_ok && w.is_zero_to_order(rep.closure_order);
    }

    // Leafwise integrability of w(t) at height+2 (plus extra) sample values.
    if (rep.span_ok && rep.beta_matches_foliation) {
        PolyJetForm<K> gamma = representative(j, beta);
        int count = rep.height + 2 + extra_samples;
        rep.integrability_ok = true;
        for (int tv = 0; tv < count; ++tv) {
            WebSampleCheck<K> sc;
            sc.t = K(tv);
            JetForm<K> gt = gamma.eval(sc.t);
            MultiVector<K> g0 = gt.value_at_base();
            sc.kernel_dim = g0.is_zero() ? -1 : kernel_of_form(g0).dim();
            if (sc.kernel_dim != n - r) {
                sc.involutive = false;
                rep.integrability_ok = false;
                rep.samples.push_back(sc);
                continue;
            }
            auto mus = defining_covectors(gt, r);
            JetForm<K> muw = mus[0];
            for (int i = 1; i < r; ++i) muw = wedge(muw, mus[i]);
            sc.residual_order = gt.order() - 1;
            sc.involutive = true;
            for (auto& mu : mus) {
                JetForm<K> w = wedge(muw, ext_d(mu));
                sc.involutive = sc.involutive && w.is_zero_to_order(sc.residual_order);
            }
            rep.integrability_ok = rep.integrability_ok && sc.involutive;
            rep.samples.push_back(sc);
        }
    }
    return rep;
}

// Diagonal web tensor J = sum f_j(x_j) d/dx_j x dx_j from one-variable jets.
template <class K>
JetTensor11<K> diagonal_field_tensor(const std::vector<JetSeries<K>>& f,
                                     const std::vector<std::string>& vars, int order) {
    const int n = static_cast<int>(vars.size());
    if (static_cast<int>(f.size()) != n) throw dimension_error("need one field per coordinate");
    JetTensor11<K> j = JetTensor11<K>::zero(vars, order);
    for (int i = 0; i < n; ++i) {
        if (f[i].nvars() != 1) throw dimension_error("diagonal fields are one-variable series");
        j.m.at(i, i) = f[i].truncated(order).remap_vars(vars, {i});
    }
    return j;
}

template <class K>
struct FlatnessObstruction {
    PolyJetForm<K> gamma;       // the full representative built from the fields
    JetForm<K> obstruction;     // gamma_{n-2} ^ d gamma_{n-2}
};

// Codimension-one diagonal example: gamma(t) = sum_j prod_{i != j}(t + f_i) dx_j.
// The 3-form gamma_{n-2} ^ d gamma_{n-2} carries the flatness obstruction
// f_i (f_k' - f_j') + f_j (f_i' - f_k') + f_k (f_j' - f_i') in each
// coordinate triple.
template <class K>
FlatnessObstruction<K> flatness_obstruction(const std::vector<JetSeries<K>>& fields, int order) {
    const int n = static_cast<int>(fields.size());
    if (n < 3) throw precondition_error("flatness obstruction needs at least three fields");
    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));
    std::vector<JetSeries<K>> f;
    for (int i = 0; i < n; ++i) f.push_back(fields[i].truncated(order).remap_vars(vars, {i}));

    FlatnessObstruction<K> out;
    for (int d = 0; d <= n - 1; ++d) out.gamma.c.push_back(JetForm<K>(vars, 1, order));
    for (int jj = 0; jj < n; ++jj) {
        // prod_{i != j} (t + f_i): elementary-symmetric accumulation
        std::vector<JetSeries<K>> coeffs{JetSeries<K>::constant(vars, order, K(1))};
        for (int i = 0; i < n; ++i) {
            if (i == jj) continue;
            std::vector<JetSeries<K>> next(coeffs.size() + 1, JetSeries<K>(vars, order));
            for (size_t d = 0; d < coeffs.size(); ++d) {
                next[d + 1] += coeffs[d];
                next[d] += coeffs[d] * f[i];
            }
            coeffs = std::move(next);
        }
        for (size_t d = 0; d < coeffs.size(); ++d) out.gamma.c[d].add_coeff(IndexMask(1) << jj, coeffs[d]);
    }
    JetForm<K> g = out.gamma.c[n - 2];
    out.obstruction = wedge(g, ext_d(g));
    return out;
}

template <class K>
struct CompatibilityReport {
    bool compatible = false;
    int residual_order = -1;
    JetForm<K> residual;
};

// Bihamiltonian compatibility: alpha_1 ^ ... ^ alpha_r ^ d(omega_J) = 0.
template <class K>
CompatibilityReport<K> compatibility(const FoliationSpec<K>& alphas, const JetTensor11<K>& j,
                                     const JetForm<K>& omega) {
    validate_foliation(alphas);
    if (omega.grade() != 2) throw dimension_error("omega must be a 2-form");
    if (!ext_d(omega).is_zero_to_order(omega.order() - 1))
        throw precondition_error("omega is not closed to truncation order");
    CompatibilityReport<K> out;
    JetForm<K> w = wedge(alphas.top_wedge(), ext_d(tau_sub(omega, j)));
    out.residual = w;
    out.residual_order = w.order();
    out.compatible = w.is_zero_to_order(out.residual_order);
    return out;
}

// A Poisson structure of constant corank r in coordinates: r closed defining
// 1-forms of the symplectic foliation plus a closed 2-form restricting
// symplectically to it.
template <class K>
struct PoissonData {
    std::vector<JetForm<K>> covectors;
    JetForm<K> two_form;
};

// Dual-bivector conversion: kernel frame of the covectors, restricted form,
// inversion over the jet ring.
template <class K>
Mat<JetSeries<K>> materialize_bivector(const PoissonData<K>& d) {
    if (d.covectors.empty()) throw degenerate_error("need at least one defining covector");
    const auto& vars = d.two_form.vars();
    const int n = static_cast<int>(vars.size());
    const int r = static_cast<int>(d.covectors.size());
    const int order = d.two_form.order();
    Mat<JetSeries<K>> a(r, n, JetSeries<K>(vars, order));
    Mat<K> a0(r, n);
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < n; ++c) {
            a.at(i, c) = d.covectors[i].coeff(IndexMask(1) << c).truncated(order);
            a0.at(i, c) = a.at(i, c).value_at_base();
        }
    Mat<K> a0r = a0;
    auto pivots = rref(a0r);
    if (static_cast<int>(pivots.size()) != r)
        throw precondition_error("defining covectors are dependent at the base point");
    std::vector<int> nonpiv;
    {
        size_t p = 0;
        for (int c = 0; c < n; ++c) {
            if (p < pivots.size() && pivots[p] == c) { ++p; continue; }
            nonpiv.push_back(c);
        }
    }
    const int d1 = n - r;
    // kernel frame X: X[nonpiv] = I, X[piv] = -Apiv^{-1} Anonpiv
    Mat<JetSeries<K>> apiv(r, r, JetSeries<K>(vars, order)), anp(r, d1, JetSeries<K>(vars, order));
    for (int i = 0; i < r; ++i) {
        for (int c = 0; c < r; ++c) apiv.at(i, c) = a.at(i, pivots[c]);
        for (int c = 0; c < d1; ++c) anp.at(i, c) = a.at(i, nonpiv[c]);
    }
    Mat<JetSeries<K>> xpiv = -(jet_matrix_inverse(apiv, vars, order) * anp);
    Mat<JetSeries<K>> x(n, d1, JetSeries<K>(vars, order));
    for (int c = 0; c < d1; ++c) {
        x.at(nonpiv[c], c) = JetSeries<K>::constant(vars, order, K(1));
        for (int i = 0; i < r; ++i) x.at(pivots[i], c) = xpiv.at(i, c);
    }
    // omega matrix and restriction M = X^T Omega X
    Mat<JetSeries<K>> om(n, n, JetSeries<K>(vars, order));
    for (auto& [m, s] : d.two_form.terms()) {
        auto idx = mask_indices(m);
        om.at(idx[0], idx[1]) = s;
        om.at(idx[1], idx[0]) = -s;
    }
    Mat<JetSeries<K>> md = x.transpose() * om * x;
    Mat<K> md0(d1, d1);
    for (int i = 0; i < d1; ++i)
        for (int c = 0; c < d1; ++c) md0.at(i, c) = md.at(i, c).value_at_base();
    if (!try_inverse(md0))
        throw precondition_error("two-form is not symplectic on the kernel distribution");
    Mat<JetSeries<K>> mdinv = jet_matrix_inverse(md, vars, order);
    return x * (-mdinv) * x.transpose();
}

// Schouten bracket of two bivectors in coordinates, as a grade-3 form-like
// object of components sum_l (L^{li} d_l L1^{jk} + L1^{li} d_l L^{jk} + cyc).
template <class K>
JetForm<K> schouten_bracket(const Mat<JetSeries<K>>& l, const Mat<JetSeries<K>>& l1,
                            const std::vector<std::string>& vars) {
    const int n = l.rows();
    int order = l.at(0, 0).order() - 1;
    JetForm<K> out(vars, 3, order);
    for (int i = 0; i < n; ++i)
        for (int jj = i + 1; jj < n; ++jj)
            for (int k = jj + 1; k < n; ++k) {
                JetSeries<K> acc(vars, order);
                int cyc[3][3] = {{i, jj, k}, {jj, k, i}, {k, i, jj}};
                for (auto& c : cyc)
                    for (int m = 0; m < n; ++m) {
                        acc += l.at(m, c[0]).truncated(order) * l1.at(c[1], c[2]).derivative(m);
                        acc += l1.at(m, c[0]).truncated(order) * l.at(c[1], c[2]).derivative(m);
                    }
                if (!acc.is_zero_series())
                    out.add_coeff((IndexMask(1) << i) | (IndexMask(1) << jj) | (IndexMask(1) << k), acc);
            }
    return out;
}

template <class K>
struct SchoutenReport {
    bool compatible = false;
    int residual_order = -1;
};

// Independent compatibility oracle: vanishing of the mixed Schouten bracket
// of the materialized bivectors.  Both inputs must be Poisson to truncation
// order (their own brackets must vanish), which is checked first.
template <class K>
SchoutenReport<K> schouten_compat_oracle(const PoissonData<K>& a, const PoissonData<K>& b) {
    auto la = materialize_bivector(a);
    auto lb = materialize_bivector(b);
    const auto& vars = a.two_form.vars();
    int order = a.two_form.order() - 1;
    if (!schouten_bracket(la, la, vars).is_zero_to_order(order))
        throw precondition_error("first structure is not Poisson to truncation order");
    if (!schouten_bracket(lb, lb, vars).is_zero_to_order(order))
        throw precondition_error("second structure is not Poisson to truncation order");
    SchoutenReport<K> out;
    out.residual_order = order;
    out.compatible = schouten_bracket(la, lb, vars).is_zero_to_order(order);
    return out;
}

template <class K>
struct LiouvilleModel {
    std::vector<std::string> vars;  // x_1..x_{n-r}, y_1..y_r, u_1..u_{n-r}
    PoissonData<K> lambda;          // dy_k and sum dx_j ^ du_j
    PoissonData<K> lambda1;         // alpha_k and sum a_j dx_j ^ du_j
    std::vector<K> fiber_scaling;   // the map (x, y, u) -> (x, y, a_1 u_1, ...)
};

// The Liouville bihamiltonian model of a web given by constant defining
// covectors alpha_k = dy_k + sum_j kappa_{kj} dx_j.
template <class K>
LiouvilleModel<K> liouville_model(int n, int r, const std::vector<K>& a, const Mat<K>& kappa, int order) {
    if (static_cast<int>(a.size()) != n - r) throw precondition_error("need n - r scalars");
    detail::require_distinct(a, "liouville model");
    for (auto& x : a)
        if (is_zero(x)) throw precondition_error("liouville scalars must be nonzero");
    if (kappa.rows() != r || kappa.cols() != n - r) throw dimension_error("kappa must be r x (n-r)");
    LiouvilleModel<K> out;
    for (int i = 0; i < n - r; ++i) out.vars.push_back("x" + std::to_string(i + 1));
    for (int k = 0; k < r; ++k) out.vars.push_back("y" + std::to_string(k + 1));
    for (int i = 0; i < n - r; ++i) out.vars.push_back("u" + std::to_string(i + 1));
    const int m = 2 * (n - r) + r;
    (void)m;
    auto dv = [&](int i) { return JetForm<K>::d_coord(out.vars, order, i); };
    JetForm<K> sympl(out.vars, 2, order), sympl_a(out.vars, 2, order);
    for (int i = 0; i < n - r; ++i) {
        JetForm<K> w = wedge(dv(i), dv(n - r + r + i));
        sympl = sympl + w;
        sympl_a = sympl_a + a[i] * w;
    }
    out.lambda.two_form = sympl;
    out.lambda1.two_form = sympl_a;
    for (int k = 0; k < r; ++k) {
        out.lambda.covectors.push_back(dv(n - r + k));
        JetForm<K> alpha = dv(n - r + k);
        for (int i = 0; i < n - r; ++i) alpha = alpha + kappa.at(k, i) * dv(i);
        out.lambda1.covectors.push_back(alpha);
    }
    out.fiber_scaling = a;
    return out;
}

}  // namespace veroweb
