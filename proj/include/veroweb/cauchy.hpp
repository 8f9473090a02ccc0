#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "veroweb/webcheck.hpp"

namespace veroweb {

// Formal power-series solution of the Cauchy systems attached to adapted
// coordinates x_1..x_{n-r}, y_1..y_r: closed-form extension, inhomogeneous
// right-hand sides, potentials, and the versal model of codimension-one
// webs.  All solvers run order-by-order linear solves on jet coefficients in
// the direction normal to the surface S = {x_1 = ... = x_{n-r}}, checking
// solvability at each order; outputs are certified afterwards by independent
// residual computations on forms.

template <class K>
struct ProblemFrame {
    int n = 0, r = 0;
    std::vector<K> a;   // a_1..a_{n-r}, pairwise distinct
    K a_extra = K(0);   // the remaining eigenvalue, distinct from the a_j
    int order = 0;
    std::vector<std::string> vars;   // x1..x_{n-r}, y1..y_r
    std::vector<std::string> svars;  // s, y1..y_r

    ProblemFrame(int n_, int r_, std::vector<K> a_, K aext, int ord)
        : n(n_), r(r_), a(std::move(a_)), a_extra(aext), order(ord) {
        if (r < 1 || n <= r) throw precondition_error("frame needs n > r >= 1");
        if (static_cast<int>(a.size()) != n - r) throw precondition_error("need n - r eigenvalues");
        auto all = a;
        all.push_back(a_extra);
        detail::require_distinct(all, "problem frame");
        for (int i = 0; i < n - r; ++i) vars.push_back("x" + std::to_string(i + 1));
        for (int k = 0; k < r; ++k) vars.push_back("y" + std::to_string(k + 1));
        svars.push_back("s");
        for (int k = 0; k < r; ++k) svars.push_back("y" + std::to_string(k + 1));
    }

    int q() const { return n - r; }          // number of x coordinates
    int yindex(int k) const { return q() + k; }

    JetSeries<K> restrict_to_surface(const JetSeries<K>& f) const {
        std::vector<int> target(n, 0);
        for (int k = 0; k < r; ++k) target[yindex(k)] = 1 + k;
        return f.remap_vars(svars, target);
    }

    // J0 = sum a_j d/dx_j x dx_j + a d/dy_k x dy_k
    JetTensor11<K> diagonal_tensor() const {
        auto t = JetTensor11<K>::zero(vars, order);
        for (int j = 0; j < q(); ++j) t.m.at(j, j) = JetSeries<K>::constant(vars, order, a[j]);
        for (int k = 0; k < r; ++k)
            t.m.at(yindex(k), yindex(k)) = JetSeries<K>::constant(vars, order, a_extra);
        return t;
    }
};

// Frame together with the coefficient functions f_kj of dy_k o J; the data
// of the adapted-frame extension systems.  Validation enforces the standing hypotheses:
// f_1j positive at the base point, d(alpha~_k) ^ dy_1..dy_r = 0, and zero
// torsion of the resulting tensor.
template <class K>
struct FrameTensor {
    ProblemFrame<K> frame;
    Mat<JetSeries<K>> fkj;  // r x (n-r)

    FrameTensor(ProblemFrame<K> fr, Mat<JetSeries<K>> f) : frame(std::move(fr)), fkj(std::move(f)) {
        if (fkj.rows() != frame.r || fkj.cols() != frame.q())
            throw dimension_error("coefficient matrix must be r x (n-r)");
        for (int j = 0; j < frame.q(); ++j)
            if (!field_is_positive(fkj.at(0, j).value_at_base()))
                throw precondition_error("f_1j must be positive at the base point");
        JetTensor11<K> t = tensor();
        JetForm<K> dys = dy_wedge();
        for (int k = 0; k < frame.r; ++k) {
            if (!wedge(ext_d(alpha_tilde(k)), dys).is_zero_to_order(frame.order - 1))
                throw precondition_error("d(alpha~_k) ^ dy_1..dy_r must vanish");
        }
        if (!torsion_is_zero(nijenhuis(t), frame.order - 1))
            throw precondition_error("frame tensor must be torsion free");
    }

    JetForm<K> alpha_tilde(int k) const {
        JetForm<K> out(frame.vars, 1, frame.order);
        for (int j = 0; j < frame.q(); ++j) out.set_coeff(IndexMask(1) << j, fkj.at(k, j));
        return out;
    }
    JetForm<K> dy_wedge() const {
        JetForm<K> acc = JetForm<K>::d_coord(frame.vars, frame.order, frame.yindex(0));
        for (int k = 1; k < frame.r; ++k)
            acc = wedge(acc, JetForm<K>::d_coord(frame.vars, frame.order, frame.yindex(k)));
        return acc;
    }
    JetTensor11<K> tensor() const {
        auto t = frame.diagonal_tensor();
        for (int k = 0; k < frame.r; ++k)
            for (int j = 0; j < frame.q(); ++j) t.m.at(frame.yindex(k), j) = fkj.at(k, j);
        return t;
    }
};

// Boundary data on S in coordinates (s, y_1..y_r).
template <class K>
struct CauchyDatum {
    std::vector<std::string> svars;
    int order = 0;
    std::vector<JetSeries<K>> phi;
};

namespace detail {

inline std::vector<Exps> monomials_of_degree(int nvars, int d) {
    std::vector<Exps> out;
    Exps e(nvars, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == nvars - 1) {
            e[pos] = static_cast<std::uint16_t>(left);
            out.push_back(e);
            e[pos] = 0;
            return;
        }
        for (int v = left; v >= 0; --v) {
            e[pos] = static_cast<std::uint16_t>(v);
            rec(pos + 1, left - v);
        }
        e[pos] = 0;
    };
    if (nvars == 0) {
        if (d == 0) out.push_back({});
        return out;
    }
    rec(0, d);
    return out;
}

// One homogeneous-degree linear solve: sparse rows over the coefficient
// unknowns of this degree.
template <class K>
struct DegreeSystem {
    int nunk = 0;
    std::vector<std::map<int, K>> rows;
    std::vector<K> rhs;

    void add_row(std::map<int, K> row, K b) {
        rows.push_back(std::move(row));
        rhs.push_back(std::move(b));
    }
    // Unique solution required unless pin_free (then free unknowns are zero).
    Vec<K> solve(bool require_unique, const char* what) const {
        Mat<K> m(static_cast<int>(rows.size()), nunk);
        for (size_t i = 0; i < rows.size(); ++i)
            for (auto& [j, c] : rows[i]) m.at(static_cast<int>(i), j) = c;
        if (require_unique && rank(m) != nunk)
            throw internal_error(std::string(what) + ": degree system is not uniquely solvable");
        auto sol = veroweb::solve(m, rhs);
        if (!sol) throw internal_error(std::string(what) + ": degree system is inconsistent");
        return *sol;
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Coupled closed-form solver (the adapted-frame linear extension systems).
//
// Unknowns: s closed 1-forms beta_q = sum phi_qj dx_j + sum phi_qk dy_k with
//   (d(beta_q o J) + sum_l beta_l ^ rho_lq) ^ dy_1..dy_r = rhs_q ^ dy_1..dy_r
// and beta_q restricted to S equal to the given datum (zero when absent).
// ---------------------------------------------------------------------------

template <class K>
struct CoupledSolveInput {
    std::vector<std::vector<JetForm<K>>> rho;  // s x s 1-forms (may be empty)
    std::vector<JetForm<K>> rhs2;              // s 2-forms (may be empty)
    std::vector<const CauchyDatum<K>*> data;   // s pointers (null = zero datum)
};

template <class K>
void check_datum_closed(const ProblemFrame<K>& fr, const CauchyDatum<K>& datum) {
    if (datum.svars != fr.svars) throw dimension_error("datum lives on the wrong surface chart");
    if (static_cast<int>(datum.phi.size()) != fr.n) throw dimension_error("datum needs n components");
    // pulled-back form (sum_j phi_j) ds + sum_k phi_{n-r+k} dy_k must be closed
    JetSeries<K> gs(fr.svars, datum.order);
    for (int j = 0; j < fr.q(); ++j) gs += datum.phi[j];
    for (int k = 0; k < fr.r; ++k) {
        if (!(gs.derivative(1 + k) - datum.phi[fr.q() + k].derivative(0)).is_zero_series())
            throw precondition_error("datum restriction to the surface foliation is not closed");
        for (int l = k + 1; l < fr.r; ++l)
            if (!(datum.phi[fr.q() + k].derivative(1 + l) - datum.phi[fr.q() + l].derivative(1 + k))
                     .is_zero_series())
                throw precondition_error("datum restriction to the surface foliation is not closed");
    }
}

template <class K>
std::vector<JetForm<K>> solve_coupled_closed_forms(const FrameTensor<K>& ft,
                                                   const CoupledSolveInput<K>& in, int s,
                                                   const char* what = "closed-form solve") {
    const ProblemFrame<K>& fr = ft.frame;
    const int n = fr.n, q = fr.q(), N = fr.order;
    for (auto* d : in.data)
        if (d) check_datum_closed(fr, *d);

    JetTensor11<K> jt = ft.tensor();
    JetForm<K> dys = ft.dy_wedge();

    // running unknowns: beta components as jets, filled degree by degree
    std::vector<std::vector<JetSeries<K>>> phi(s, std::vector<JetSeries<K>>(n, JetSeries<K>(fr.vars, N)));
    std::vector<K> f0(static_cast<size_t>(fr.r) * q);
    for (int k = 0; k < fr.r; ++k)
        for (int j = 0; j < q; ++j) f0[k * q + j] = ft.fkj.at(k, j).value_at_base();

    for (int d = 0; d <= N; ++d) {
        auto mons = detail::monomials_of_degree(n, d);
        std::map<Exps, int> midx;
        for (size_t i = 0; i < mons.size(); ++i) midx[mons[i]] = static_cast<int>(i);
        const int msz = static_cast<int>(mons.size());
        detail::DegreeSystem<K> sys;
        sys.nunk = s * n * msz;
        auto unk = [&](int qq, int comp, const Exps& e) { return (qq * n + comp) * msz + midx.at(e); };

        // residuals of the current partial solution, per q
        std::vector<JetForm<K>> resid_d(s, JetForm<K>(fr.vars, 1, 0));
        std::vector<JetForm<K>> resid_main(s, JetForm<K>(fr.vars, 1, 0));
        if (d >= 1) {
            std::vector<JetForm<K>> betas;
            for (int qq = 0; qq < s; ++qq) {
                JetForm<K> b(fr.vars, 1, N);
                for (int c = 0; c < n; ++c) b.set_coeff(IndexMask(1) << c, phi[qq][c]);
                betas.push_back(b);
            }
            for (int qq = 0; qq < s; ++qq) {
                resid_d[qq] = ext_d(betas[qq]);
                JetForm<K> main = ext_d(tau_circ(betas[qq], jt));
                if (!in.rho.empty())
                    for (int l = 0; l < s; ++l)
                        if (!in.rho[l][qq].is_zero_form()) main = main + wedge(betas[l], in.rho[l][qq]);
                if (!in.rhs2.empty() && !in.rhs2[qq].is_zero_form())
                    main = main - in.rhs2[qq].truncated(main.order());
                resid_main[qq] = main;
            }
        }

        if (d >= 1) {
            auto prev = detail::monomials_of_degree(n, d - 1);
            for (int qq = 0; qq < s; ++qq) {
                // d beta = 0, all coordinate pairs
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v)
                        for (auto& nu : prev) {
                            std::map<int, K> row;
                            Exps eu = nu;
                            ++eu[u];
                            row[unk(qq, v, eu)] += K(static_cast<long long>(nu[u] + 1));
                            Exps ev = nu;
                            ++ev[v];
                            row[unk(qq, u, ev)] -= K(static_cast<long long>(nu[v] + 1));
                            K b = -eval_indices(resid_d[qq], {u, v}).coeff(nu);
                            sys.add_row(std::move(row), std::move(b));
                        }
                // main equation: dx_i ^ dx_j components only
                for (int i = 0; i < q; ++i)
                    for (int j = i + 1; j < q; ++j)
                        for (auto& nu : prev) {
                            std::map<int, K> row;
                            // d(beta o J): d_i of (a_j phi_j + sum_k phi_yk f_kj)
                            Exps ei = nu;
                            ++ei[i];
                            Exps ej = nu;
                            ++ej[j];
                            row[unk(qq, j, ei)] += fr.a[j] * K(static_cast<long long>(nu[i] + 1));
                            row[unk(qq, i, ej)] -= fr.a[i] * K(static_cast<long long>(nu[j] + 1));
                            for (int k = 0; k < fr.r; ++k) {
                                int yc = fr.yindex(k);
                                row[unk(qq, yc, ei)] += f0[k * q + j] * K(static_cast<long long>(nu[i] + 1));
                                row[unk(qq, yc, ej)] -= f0[k * q + i] * K(static_cast<long long>(nu[j] + 1));
                            }
                            K b = -eval_indices(resid_main[qq], {i, j}).coeff(nu);
                            sys.add_row(std::move(row), std::move(b));
                        }
            }
        }

        // boundary rows: restriction to S prescribed (or zero)
        for (int qq = 0; qq < s; ++qq)
            for (int comp = 0; comp < n; ++comp)
                for (int p = 0; p <= d; ++p) {
                    auto ymons = detail::monomials_of_degree(fr.r, d - p);
                    for (auto& ye : ymons) {
                        std::map<int, K> row;
                        for (auto& e : mons) {
                            int xdeg = 0;
                            bool match = true;
                            for (int j = 0; j < q; ++j) xdeg += e[j];
                            if (xdeg != p) continue;
                            for (int k = 0; k < fr.r && match; ++k) match = (e[fr.yindex(k)] == ye[k]);
                            if (match) row[unk(qq, comp, e)] += K(1);
                        }
                        K b(0);
                        if (in.data[qq]) {
                            Exps se(fr.r + 1, 0);
                            se[0] = static_cast<std::uint16_t>(p);
                            for (int k = 0; k < fr.r; ++k) se[1 + k] = ye[k];
                            b = in.data[qq]->phi[comp].coeff(se);
                        }
                        sys.add_row(std::move(row), std::move(b));
                    }
                }

        Vec<K> sol = sys.solve(true, what);
        for (int qq = 0; qq < s; ++qq)
            for (int comp = 0; comp < n; ++comp)
                for (auto& e : mons) {
                    const K& c = sol[unk(qq, comp, e)];
                    if (!is_zero(c)) phi[qq][comp].add_coeff(e, c);
                }
    }

    std::vector<JetForm<K>> out;
    for (int qq = 0; qq < s; ++qq) {
        JetForm<K> b(fr.vars, 1, N);
        for (int c = 0; c < n; ++c) b.set_coeff(IndexMask(1) << c, phi[qq][c]);
        out.push_back(std::move(b));
    }
    return out;
}

template <class K>
struct ClosedFormSolution {
    JetForm<K> beta;
    int residual_order = -1;
};

// Closed 1-form extension (the injective/bijective correspondence beta ->
// beta'): given boundary data on S, produce the closed beta with
// (d(beta o J) + beta ^ alpha0) ^ dy_1..dy_r = 0.
template <class K>
ClosedFormSolution<K> solve_closed_form(const FrameTensor<K>& ft, const JetForm<K>& alpha0,
                                        const CauchyDatum<K>& datum) {
    CoupledSolveInput<K> in;
    if (!alpha0.is_zero_form()) in.rho = {{alpha0}};
    in.data = {&datum};
    auto betas = solve_coupled_closed_forms(ft, in, 1, "closed-form extension");
    ClosedFormSolution<K> out;
    out.beta = betas[0];
    // independent residual certification
    const int N = ft.frame.order;
    if (!ext_d(out.beta).is_zero_to_order(N - 1)) throw internal_error("solution is not closed");
    JetForm<K> main = ext_d(tau_circ(out.beta, ft.tensor()));
    if (!alpha0.is_zero_form()) main = main + wedge(out.beta, alpha0);
    JetForm<K> res = wedge(main, ft.dy_wedge());
    out.residual_order = res.order();
    if (!res.is_zero_to_order(out.residual_order)) throw internal_error("solution fails the main identity");
    for (int c = 0; c < ft.frame.n; ++c) {
        JetSeries<K> restr = ft.frame.restrict_to_surface(out.beta.coeff(IndexMask(1) << c));
        int mo = std::min(restr.order(), datum.phi[c].order());
        if (restr.truncated(mo) != datum.phi[c].truncated(mo))
            throw internal_error("solution does not restrict to the datum");
    }
    return out;
}

// Inhomogeneous version: closed beta with
// d(beta o J) ^ dy_1..dy_r = dx_1 ^ gamma ^ dy_1..dy_r.  The germ freedom is
// pinned by zero boundary data on S, which the uniqueness of the extension
// problem turns into a deterministic output.
template <class K>
ClosedFormSolution<K> solve_rhs_form(const FrameTensor<K>& ft, const JetForm<K>& gamma) {
    const ProblemFrame<K>& fr = ft.frame;
    if (gamma.grade() != 1) throw dimension_error("gamma must be a 1-form");
    if (!ext_d(gamma).is_zero_to_order(gamma.order() - 1))
        throw precondition_error("gamma is not closed to truncation order");
    JetForm<K> dx1 = JetForm<K>::d_coord(fr.vars, fr.order, 0);
    JetForm<K> hyp = wedge(wedge(ext_d(tau_circ(gamma, ft.tensor())), dx1), ft.dy_wedge());
    if (!hyp.is_zero_to_order(hyp.order()))
        throw precondition_error("gamma fails d(gamma o J) ^ dx_1 ^ dy_1..dy_r = 0");

    CoupledSolveInput<K> in;
    in.rhs2 = {wedge(dx1, gamma)};
    in.data = {nullptr};
    auto betas = solve_coupled_closed_forms(ft, in, 1, "inhomogeneous closed-form solve");
    ClosedFormSolution<K> out;
    out.beta = betas[0];
    if (!ext_d(out.beta).is_zero_to_order(fr.order - 1)) throw internal_error("solution is not closed");
    JetForm<K> res = wedge(ext_d(tau_circ(out.beta, ft.tensor())) - wedge(dx1, gamma).truncated(fr.order - 1),
                           ft.dy_wedge());
    out.residual_order = res.order();
    if (!res.is_zero_to_order(out.residual_order))
        throw internal_error("solution fails the inhomogeneous identity");
    return out;
}

template <class K>
struct PotentialSolution {
    JetSeries<K> phi;
    JetForm<K> beta;  // d phi
    int residual_order = -1;
};

// Potential equation: a function phi with
// alpha_1 ^ ... ^ alpha_r ^ (d(d phi o J) - omega) = 0, given closed omega
// with d(omega_J) in the ideal of the foliation.  The foliation must be the
// frame's own y-coordinate ideal (constant combinations of the dy_k).
template <class K>
PotentialSolution<K> solve_potential(const ProblemFrame<K>& frame, const JetTensor11<K>& j,
                                     const FoliationSpec<K>& efol, const JetForm<K>& omega) {
    const int n = frame.n, q = frame.q();
    if (j.vars != frame.vars) throw dimension_error("tensor frame mismatch");
    // Extract the coefficient functions and validate the adapted shape.
    Mat<JetSeries<K>> fk(frame.r, q, JetSeries<K>(frame.vars, frame.order));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            const JetSeries<K>& entry = j.m.at(u, v);
            if (u < q) {
                JetSeries<K> want(frame.vars, entry.order());
                if (u == v) want = JetSeries<K>::constant(frame.vars, entry.order(), frame.a[u]);
                if (entry != want) throw precondition_error("tensor is not in the adapted frame");
            } else if (v >= q) {
                JetSeries<K> want(frame.vars, entry.order());
                if (u == v) want = JetSeries<K>::constant(frame.vars, entry.order(), frame.a_extra);
                if (entry != want) throw precondition_error("tensor is not in the adapted frame");
            } else {
                fk.at(u - q, v) = entry;
            }
        }
    FrameTensor<K> ft(frame, fk);
    // The ideal I(E) must be generated by the dy_k: each covector a constant
    // combination of them, jointly independent.
    validate_foliation(efol);
    if (efol.codim() != frame.r) throw precondition_error("foliation codimension must equal r");
    Mat<K> combo(frame.r, frame.r);
    for (int k = 0; k < frame.r; ++k) {
        for (int c = 0; c < n; ++c) {
            const JetSeries<K> coeff = efol.covectors[k].coeff(IndexMask(1) << c);
            if (c < q) {
                if (!coeff.is_zero_series())
                    throw precondition_error("foliation is not spanned by the frame dy covectors");
            } else {
                if (!(coeff - JetSeries<K>::constant(frame.vars, coeff.order(), coeff.value_at_base()))
                         .is_zero_series())
                    throw precondition_error("foliation covectors must be constant in the adapted frame");
                combo.at(k, c - q) = coeff.value_at_base();
            }
        }
    }
    if (rank(combo) != frame.r) throw precondition_error("foliation covectors are dependent");

    if (omega.grade() != 2) throw dimension_error("omega must be a 2-form");
    if (!ext_d(omega).is_zero_to_order(omega.order() - 1))
        throw precondition_error("omega is not closed to truncation order");
    JetForm<K> dys = ft.dy_wedge();
    JetForm<K> obstruction = wedge(ext_d(tau_sub(omega, ft.tensor())), dys);
    if (!obstruction.is_zero_to_order(obstruction.order()))
        throw precondition_error("d(omega_J) is not in the ideal of the foliation");

    CoupledSolveInput<K> in;
    in.rhs2 = {omega.truncated(frame.order)};
    in.data = {nullptr};
    auto betas = solve_coupled_closed_forms(ft, in, 1, "potential solve");
    PotentialSolution<K> out;
    out.beta = betas[0];

    // Poincare primitive of the closed beta, vanishing at the base point.
    JetSeries<K> phi(frame.vars, frame.order);
    for (int c = 0; c < n; ++c) {
        const JetSeries<K> bc = out.beta.coeff(IndexMask(1) << c);
        for (auto& [e, coef] : bc.terms()) {
            Exps mu = e;
            ++mu[c];
            int dtot = total_degree(mu);
            if (dtot > frame.order) continue;
            phi.add_coeff(mu, coef / K(dtot));
        }
    }
    out.phi = phi;

    JetForm<K> res = wedge(ext_d(tau_circ(ext_d(JetForm<K>::function(phi)), ft.tensor())) -
                               omega.truncated(frame.order - 2),
                           dys);
    out.residual_order = res.order();
    if (!res.is_zero_to_order(out.residual_order)) throw internal_error("potential fails its identity");
    return out;
}

// ---------------------------------------------------------------------------
// Versal solver: the codimension-one quadratic system
//   d(alpha~) ^ dy = 0,
//   (d(alpha~ o J0) - alpha~ ^ d alpha~/dy) ^ dy = 0
// for alpha~ = sum f_j dx_j with admissible boundary data on S0.
// ---------------------------------------------------------------------------

template <class K>
struct VersalSolution {
    std::vector<JetSeries<K>> f;  // f_1..f_{n-1} in (x_1..x_{n-1}, y)
    int residual_order = -1;
};

template <class K>
void check_admissible_germ(const ProblemFrame<K>& fr, const CauchyDatum<K>& germ) {
    if (fr.r != 1) throw precondition_error("versal germs live on codimension-one frames");
    if (static_cast<int>(germ.phi.size()) != fr.q())
        throw dimension_error("germ needs n - 1 components");
    if (germ.svars != fr.svars) throw dimension_error("germ lives on the wrong surface chart");
    for (int j = 0; j < fr.q(); ++j) {
        // phi_j = 1 on the curve y = 0
        for (auto& [e, c] : germ.phi[j].terms()) {
            if (e[1] != 0) continue;
            K want = (e[0] == 0) ? K(1) : K(0);
            if (c != want)
                throw precondition_error("germ is not admissible: phi_" + std::to_string(j + 1) +
                                         " differs from 1 on the curve y = 0");
        }
        if (!is_zero(germ.phi[j].value_at_base() - K(1)))
            throw precondition_error("germ is not admissible: phi_" + std::to_string(j + 1) +
                                     " is not 1 at the origin");
    }
    // phi_1 = 1 on the curve x = 0 (s = 0)
    for (auto& [e, c] : germ.phi[0].terms()) {
        if (e[0] != 0) continue;
        K want = (e[1] == 0) ? K(1) : K(0);
        if (c != want)
            throw precondition_error("germ is not admissible: phi_1 differs from 1 on the curve x = 0");
    }
}

template <class K>
std::vector<JetForm<K>> versal_residuals(const ProblemFrame<K>& fr, const std::vector<JetSeries<K>>& f) {
    const int q = fr.q();
    JetForm<K> alpha(fr.vars, 1, fr.order);
    for (int j = 0; j < q; ++j) alpha.set_coeff(IndexMask(1) << j, f[j]);
    JetForm<K> dy = JetForm<K>::d_coord(fr.vars, fr.order, fr.yindex(0));
    JetForm<K> dalpha_dy(fr.vars, 1, fr.order - 1);
    for (int j = 0; j < q; ++j) dalpha_dy.set_coeff(IndexMask(1) << j, f[j].derivative(fr.yindex(0)));
    JetForm<K> first = wedge(ext_d(alpha), dy);
    JetForm<K> second =
        wedge(ext_d(tau_circ(alpha, fr.diagonal_tensor())) - wedge(alpha, dalpha_dy), dy);
    return {first, second};
}

template <class K>
VersalSolution<K> solve_versal(const ProblemFrame<K>& fr, const CauchyDatum<K>& germ) {
    if (fr.r != 1) throw precondition_error("versal solver requires r = 1");
    check_admissible_germ(fr, germ);
    const int n = fr.n, q = fr.q(), N = fr.order;
    const int yv = fr.yindex(0);

    std::vector<JetSeries<K>> f(q, JetSeries<K>(fr.vars, N));
    std::vector<K> f0(q);
    for (int j = 0; j < q; ++j) f0[j] = germ.phi[j].value_at_base();

    for (int d = 0; d <= N; ++d) {
        auto mons = detail::monomials_of_degree(n, d);
        std::map<Exps, int> midx;
        for (size_t i = 0; i < mons.size(); ++i) midx[mons[i]] = static_cast<int>(i);
        const int msz = static_cast<int>(mons.size());
        detail::DegreeSystem<K> sys;
        sys.nunk = q * msz;
        auto unk = [&](int comp, const Exps& e) { return comp * msz + midx.at(e); };

        std::vector<JetForm<K>> resid;
        if (d >= 1) resid = versal_residuals(fr, f);

        if (d >= 1) {
            auto prev = detail::monomials_of_degree(n, d - 1);
            for (int i = 0; i < q; ++i)
                for (int j = i + 1; j < q; ++j)
                    for (auto& nu : prev) {
                        // d alpha ^ dy: d_i f_j - d_j f_i = 0
                        std::map<int, K> rowA;
                        Exps ei = nu;
                        ++ei[i];
                        Exps ej = nu;
                        ++ej[j];
                        rowA[unk(j, ei)] += K(static_cast<long long>(nu[i] + 1));
                        rowA[unk(i, ej)] -= K(static_cast<long long>(nu[j] + 1));
                        K bA = -eval_indices(resid[0], {i, j, yv}).coeff(nu);
                        sys.add_row(std::move(rowA), std::move(bA));
                        // second equation: a_j d_i f_j - a_i d_j f_i
                        //                  - f_i(0) d_y f_j + f_j(0) d_y f_i
                        std::map<int, K> rowB;
                        Exps ey = nu;
                        ++ey[yv];
                        rowB[unk(j, ei)] += fr.a[j] * K(static_cast<long long>(nu[i] + 1));
                        rowB[unk(i, ej)] -= fr.a[i] * K(static_cast<long long>(nu[j] + 1));
                        rowB[unk(j, ey)] -= f0[i] * K(static_cast<long long>(nu[yv] + 1));
                        rowB[unk(i, ey)] += f0[j] * K(static_cast<long long>(nu[yv] + 1));
                        K bB = -eval_indices(resid[1], {i, j, yv}).coeff(nu);
                        sys.add_row(std::move(rowB), std::move(bB));
                    }
        }

        // boundary rows on S0
        for (int comp = 0; comp < q; ++comp)
            for (int p = 0; p <= d; ++p) {
                std::map<int, K> row;
                for (auto& e : mons) {
                    int xdeg = 0;
                    for (int j = 0; j < q; ++j) xdeg += e[j];
                    if (xdeg == p && e[yv] == d - p) row[unk(comp, e)] += K(1);
                }
                Exps se{static_cast<std::uint16_t>(p), static_cast<std::uint16_t>(d - p)};
                K b = germ.phi[comp].coeff(se);
                sys.add_row(std::move(row), std::move(b));
            }

        Vec<K> sol = sys.solve(true, "versal solve");
        for (int comp = 0; comp < q; ++comp)
            for (auto& e : mons) {
                const K& c = sol[unk(comp, e)];
                if (!is_zero(c)) f[comp].add_coeff(e, c);
            }
    }

    VersalSolution<K> out;
    out.f = f;
    auto resid = versal_residuals(fr, f);
    out.residual_order = std::min(resid[0].order(), resid[1].order());
    if (!resid[0].is_zero_to_order(resid[0].order()) || !resid[1].is_zero_to_order(resid[1].order()))
        throw internal_error("versal solution fails its system");
    for (int j = 0; j < q; ++j) {
        JetSeries<K> restr = fr.restrict_to_surface(f[j]);
        int mo = std::min(restr.order(), germ.phi[j].order());
        if (restr.truncated(mo) != germ.phi[j].truncated(mo))
            throw internal_error("versal solution does not restrict to the germ");
    }
    return out;
}

template <class K>
struct WebFromVersal {
    JetTensor11<K> j;
    PolyJetForm<K> gamma;
};

// gamma(t) = -sum_j (prod_{k != j} (t + a_k) f_j) dx_j + prod_k (t + a_k) dy
// together with the tensor dx_j o J = a_j dx_j, dy o J = a dy + sum f_j dx_j.
template <class K>
WebFromVersal<K> versal_to_web(const ProblemFrame<K>& fr, const VersalSolution<K>& sol) {
    if (fr.r != 1) throw precondition_error("versal webs have codimension one");
    const int q = fr.q(), N = fr.order;
    WebFromVersal<K> out;
    out.j = fr.diagonal_tensor();
    for (int j = 0; j < q; ++j) out.j.m.at(fr.yindex(0), j) = sol.f[j];

    UniPoly<K> full = UniPoly<K>::constant(K(1));
    for (int k = 0; k < q; ++k) full *= UniPoly<K>::linear(fr.a[k]);
    for (int d = 0; d <= q; ++d) out.gamma.c.push_back(JetForm<K>(fr.vars, 1, N));
    for (int d = 0; d <= full.degree(); ++d)
        out.gamma.c[d].set_coeff(IndexMask(1) << fr.yindex(0),
                                 JetSeries<K>::constant(fr.vars, N, full.coeff(d)));
    for (int j = 0; j < q; ++j) {
        UniPoly<K> part = divexact(full, UniPoly<K>::linear(fr.a[j]));
        for (int d = 0; d <= part.degree(); ++d)
            out.gamma.c[d].add_coeff(IndexMask(1) << j, (-part.coeff(d)) * sol.f[j]);
    }
    out.gamma.trim();

    // gamma(t) o (J + tI) = prod (t + a_k) (t + a) dy
    auto comp = pencil_compose_1form(out.gamma, out.j);
    UniPoly<K> expect = full * UniPoly<K>::linear(fr.a_extra);
    for (int d = 0; d <= comp.degree(); ++d) {
        JetForm<K> want(fr.vars, 1, comp.c[d].order());
        want.set_coeff(IndexMask(1) << fr.yindex(0),
                       JetSeries<K>::constant(fr.vars, comp.c[d].order(), expect.coeff(d)));
        if (!(comp.c[d] - want).is_zero_to_order(comp.c[d].order()))
            throw internal_error("versal curve fails the pencil identity");
    }
    return out;
}

template <class K>
struct ChartNormalization {
    JetSeries<K> h1, h2;              // one-variable reparametrizations
    std::vector<JetSeries<K>> f;      // normalized coefficients
};

// Chart normalization: reparametrize x and y by one-variable germs so that
// f_1 = ... = f_{n-1} = 1 on the curve x_1 = ... = x_{n-1}, y = 0 and
// f_1 = 1 on the curve x = 0.  Requires f_1 positive at the base point and a
// chart already adapted to the intrinsic curve (all f_j equal on it).
template <class K>
ChartNormalization<K> normalize_chart(const ProblemFrame<K>& fr, const std::vector<JetSeries<K>>& f) {
    if (fr.r != 1) throw precondition_error("chart normalization requires r = 1");
    const int q = fr.q(), N = fr.order;
    if (static_cast<int>(f.size()) != q) throw dimension_error("need n - 1 coefficient functions");
    if (!field_is_positive(f[0].value_at_base()))
        throw precondition_error("f_1 must be positive at the base point");
    // adaptedness: all f_j agree on the curve x_1 = ... = x_{n-1}, y = 0
    std::vector<std::string> tvar{"t"};
    std::vector<int> diag_target(fr.n, 0);
    auto on_diag_curve = [&](const JetSeries<K>& g) {
        JetSeries<K> ony(g.vars(), g.order());
        for (auto& [e, c] : g.terms())
            if (e[fr.yindex(0)] == 0) ony.set_coeff(e, c);
        return ony.remap_vars(tvar, diag_target);
    };
    for (int j = 1; j < q; ++j)
        if (on_diag_curve(f[j]) != on_diag_curve(f[0]))
            throw precondition_error("chart is not adapted: coefficients differ on the diagonal curve");

    // h2' (t) = f_1(0,...,0, h2(t)), h2(0) = 0
    std::vector<std::string> uvar{"u"};
    JetSeries<K> bigF(uvar, N);
    for (auto& [e, c] : f[0].terms()) {
        bool xfree = true;
        for (int j = 0; j < q; ++j) xfree = xfree && (e[j] == 0);
        if (xfree) bigF.set_coeff({e[fr.yindex(0)]}, c);
    }
    JetSeries<K> h2(tvar, N);
    for (int m = 1; m <= N; ++m) {
        JetSeries<K> rhs = compose_univariate(bigF, h2);
        h2.set_coeff({static_cast<std::uint16_t>(m)},
                     rhs.coeff({static_cast<std::uint16_t>(m - 1)}) / K(m));
    }
    K h2p0 = h2.coeff({1});

    // h1'(t) = h2'(0) / f_1(h1(t),...,h1(t), 0), h1(0) = 0
    JetSeries<K> bigG = on_diag_curve(f[0]);
    bigG = bigG.remap_vars(uvar, {0});
    JetSeries<K> h1(tvar, N);
    for (int m = 1; m <= N; ++m) {
        JetSeries<K> rhs = h2p0 * compose_univariate(bigG, h1).inverse();
        h1.set_coeff({static_cast<std::uint16_t>(m)},
                     rhs.coeff({static_cast<std::uint16_t>(m - 1)}) / K(m));
    }
    if (h1.coeff({1}) != K(1)) throw internal_error("h1'(0) must be 1");

    // f_norm_j = h1'(x_j) (h2'(y))^{-1} f_j(h1(x_1), ..., h1(x_{n-1}), h2(y))
    ChartNormalization<K> out;
    out.h1 = h1;
    out.h2 = h2;
    std::vector<JetSeries<K>> images;
    for (int j = 0; j < q; ++j) images.push_back(h1.remap_vars(fr.vars, {j}));
    images.push_back(h2.remap_vars(fr.vars, {fr.yindex(0)}));
    JetSeries<K> h2p(tvar, N - 1);
    for (int m = 1; m <= N; ++m)
        h2p.set_coeff({static_cast<std::uint16_t>(m - 1)},
                      h2.coeff({static_cast<std::uint16_t>(m)}) * K(m));
    JetSeries<K> h1p(tvar, N - 1);
    for (int m = 1; m <= N; ++m)
        h1p.set_coeff({static_cast<std::uint16_t>(m - 1)},
                      h1.coeff({static_cast<std::uint16_t>(m)}) * K(m));
    JetSeries<K> h2p_inv_y = h2p.remap_vars(fr.vars, {fr.yindex(0)}).inverse();
    for (int j = 0; j < q; ++j) {
        JetSeries<K> sub = f[j].substitute(images);
        JetSeries<K> scaled = h1p.remap_vars(fr.vars, {j}) * h2p_inv_y * sub;
        out.f.push_back(scaled);
    }
    // normalization certificates
    for (int j = 0; j < q; ++j) {
        JetSeries<K> diag = on_diag_curve(out.f[j]);
        JetSeries<K> one = JetSeries<K>::constant(tvar, diag.order(), K(1));
        if (diag != one) throw internal_error("normalized coefficients are not 1 on the diagonal curve");
    }
    {
        JetSeries<K> onx0(fr.vars, out.f[0].order());
        for (auto& [e, c] : out.f[0].terms()) {
            bool xfree = true;
            for (int j = 0; j < q; ++j) xfree = xfree && (e[j] == 0);
            if (xfree) onx0.set_coeff(e, c);
        }
        std::vector<int> ytarget(fr.n, 0);
        JetSeries<K> red = onx0.remap_vars(tvar, ytarget);
        if (red != JetSeries<K>::constant(tvar, red.order(), K(1)))
            throw internal_error("normalized f_1 is not 1 on the curve x = 0");
    }
    return out;
}

// Homothety equivalence of admissible germs: search for b with
// phibar(x, y) = phi(bx, by), coefficientwise b^{degree}.
template <class K>
std::optional<K> germ_equiv(const ProblemFrame<K>& fr, const CauchyDatum<K>& phi,
                            const CauchyDatum<K>& phibar, int order) {
    check_admissible_germ(fr, phi);
    check_admissible_germ(fr, phibar);
    const int q = fr.q();
    order = std::min({order, phi.order, phibar.order});
    // lowest degree with a nonzero coefficient in either germ
    for (int m = 1; m <= order; ++m) {
        for (int j = 0; j < q; ++j) {
            for (auto& [e, c] : phi.phi[j].terms()) {
                if (total_degree(e) != m || is_zero(c)) continue;
                K ratio = phibar.phi[j].coeff(e) / c;
                if (is_zero(ratio)) return std::nullopt;
                for (const K& b : rational_kth_roots(ratio, static_cast<unsigned>(m))) {
                    bool ok = true;
                    for (int jj = 0; jj < q && ok; ++jj) {
                        JetSeries<K> scaled = phi.phi[jj].truncated(order).scale_all_vars(b);
                        ok = (scaled == phibar.phi[jj].truncated(order));
                    }
                    if (ok) return b;
                }
                return std::nullopt;
            }
            for (auto& [e, c] : phibar.phi[j].terms())
                if (total_degree(e) == m && !is_zero(c)) return std::nullopt;  // phi flat here, phibar not
        }
    }
    return K(1);  // both flat to the inspected order
}

template <class K>
struct RamificationCertificate {
    UniPoly<K> poly;
    K discriminant = K(0);
    bool squarefree = false;
};

// The derivative of prod (t + a_k): degree n-2 with n-2 distinct roots for
// distinct real a_k; certified square-free by a nonzero discriminant.  Roots
// themselves are never extracted.
template <class K>
RamificationCertificate<K> ramification_polynomial(const std::vector<K>& a) {
    if (a.size() < 2) throw precondition_error("need at least two scalars");
    detail::require_distinct(a, "ramification polynomial");
    UniPoly<K> prod = UniPoly<K>::constant(K(1));
    for (auto& ak : a) prod *= UniPoly<K>::linear(ak);
    RamificationCertificate<K> out;
    out.poly = prod.derivative();
    if (out.poly.degree() != static_cast<int>(a.size()) - 1)
        throw internal_error("ramification polynomial has the wrong degree");
    out.discriminant = out.poly.degree() >= 1 ? poly_discriminant(out.poly) : K(1);
    out.squarefree = !is_zero(out.discriminant);
    return out;
}

}  // namespace veroweb
