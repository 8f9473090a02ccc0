// veroweb: batch computer algebra for the local theory of Veronese webs.
//
// Subcommands: curve build, couple normalize, pencil classify,
// pencil generic-test, web verify, web compat, versal solve, versal equiv.
// All I/O is JSON; reports are byte-identical for a fixed (input, seed,
// order).  Exit codes: 0 verified success, 1 verified negative, 2 parse or
// precondition errors.

#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "veroweb/json_io.hpp"
#include "veroweb/veroweb.hpp"

using namespace veroweb;

namespace {

struct CommonOpts {
    std::string in_path, out_path;
    std::string field = "rational";
    std::string format = "json";
    long long seed = 20260801;  // default seed, recorded in every report
    int order = 6;
    int samples = 0;
};

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open input file");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return j;
}

template <class K>
Json report_head(const char* schema, const CommonOpts& opt) {
    Json r;
    r["schema"] = std::string("veroweb/") + schema + "/v1";
    r["tool"] = "veroweb";
    r["version"] = VEROWEB_VERSION;
    r["field"] = field_name<K>();
    r["order"] = opt.order;
    r["seed"] = opt.seed;
    return r;
}

int emit(const Json& report, const CommonOpts& opt, const std::string& text_summary, int exit_code) {
    std::string payload = report.dump(2) + "\n";
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw parse_error(opt.out_path + ": cannot open output file");
        out << payload;
    }
    if (opt.format == "text") {
        std::cout << text_summary << "\n";
    } else if (opt.out_path.empty()) {
        std::cout << payload;
    }
    return exit_code;
}

template <class K>
int run_curve_build(const CommonOpts& opt) {
    Json in = load_json(opt.in_path);
    Mat<K> j = jio::matrix_from<K>(jio::field(in, "J", "/"), "/J");
    Subspace<K> w = jio::subspace_from<K>(jio::field(in, "W", "/"), "/W");
    MultiVector<K> top = in.contains("w_top")
                             ? jio::multivector_from<K>(in["w_top"], "/w_top")
                             : wedge_of_vectors(w.basis_rows(), w.ambient());
    auto curve = build_curve(w, j, top);
    auto adm = is_admissible(w, j);
    Json r = report_head<K>("curve", opt);
    r["chain"] = adm.chain;
    r["char_numbers"] = curve.char_numbers;
    Json coeffs = Json::array();
    for (int d = 0; d <= curve.curve.degree(); ++d)
        coeffs.push_back(jio::multivector_json(curve.curve.coeff(d)));
    r["curve"] = std::move(coeffs);
    std::string summary = "curve: degree " + std::to_string(curve.curve.degree()) + ", chain " +
                          chain_str(adm.chain);
    return emit(r, opt, summary, 0);
}

template <class K>
int run_couple_normalize(const CommonOpts& opt) {
    Json in = load_json(opt.in_path);
    Mat<K> j = jio::matrix_from<K>(jio::field(in, "J", "/"), "/J");
    Subspace<K> w = jio::subspace_from<K>(jio::field(in, "W", "/"), "/W");
    auto nf = normalize_couple(w, j);
    Json r = report_head<K>("normal-form", opt);
    r["chain"] = nf.chain;
    r["dims"] = nf.dims;
    r["H"] = jio::matrix_json(nf.H);
    Json gens = Json::array();
    for (auto& e : nf.e) {
        Json row = Json::array();
        for (auto& c : e) row.push_back(jio::scalar_json(c));
        gens.push_back(std::move(row));
    }
    r["e"] = std::move(gens);
    Json blocks = Json::array();
    for (auto& b : nf.blocks) blocks.push_back(jio::subspace_json(b));
    r["blocks"] = std::move(blocks);
    return emit(r, opt, "normal form: dims " + chain_str(nf.dims), 0);
}

template <class K>
int run_pencil_classify(const CommonOpts& opt) {
    Json in = load_json(opt.in_path);
    int dim = jio::int_field(in, "dim", "/");
    BivectorPair<K> pair(dim, jio::multivector_from<K>(jio::field(in, "lambda", "/"), "/lambda"),
                         jio::multivector_from<K>(jio::field(in, "lambda1", "/"), "/lambda1"));
    auto mx = maximalize(pair);
    auto inv = classify(mx.pair);
    Json r = report_head<K>("pencil", opt);
    r["dim"] = dim;
    r["recombination"] = {jio::scalar_json(mx.a), jio::scalar_json(mx.a1)};
    r["rank"] = inv.rank;
    r["corank"] = inv.corank;
    r["web_char_numbers"] = inv.web_char_numbers;
    r["L0"] = jio::subspace_json(inv.l0);
    r["L1"] = jio::subspace_json(inv.l1);
    r["symplectic_charpoly"] = jio::unipoly_json(inv.symplectic_charpoly);
    Json invf = Json::array();
    for (auto& f : inv.invariant_factors) invf.push_back(jio::unipoly_json(f));
    r["invariant_factors"] = std::move(invf);
    Json divs = Json::array();
    for (auto& [p, m] : inv.elementary_divisors) {
        Json d;
        d["factor"] = jio::unipoly_json(p);
        d["multiplicity"] = m;
        divs.push_back(std::move(d));
    }
    r["elementary_divisors"] = std::move(divs);
    r["divisors_paired"] = inv.divisors_paired;
    Json exc;
    Json roots = Json::array();
    for (auto& [root, m] : inv.exceptional_values.roots) {
        Json e;
        e["root"] = jio::scalar_json(root);
        e["multiplicity"] = m;
        roots.push_back(std::move(e));
    }
    exc["roots"] = std::move(roots);
    exc["residual"] = jio::unipoly_json(inv.exceptional_values.residual);
    r["exceptional_values"] = std::move(exc);
    Json trace = Json::array();
    for (auto& rec : inv.trace) {
        Json t;
        t["t"] = jio::scalar_json(rec.t);
        t["member_rank"] = rec.member_rank;
        t["intersection_dim"] = rec.intersection_dim;
        trace.push_back(std::move(t));
    }
    r["trace"] = std::move(trace);
    std::string summary = "pencil: corank " + std::to_string(inv.corank) + ", char numbers " +
                          chain_str(inv.web_char_numbers) + ", symplectic degree " +
                          std::to_string(inv.symplectic_charpoly.degree());
    return emit(r, opt, summary, 0);
}

template <class K>
int run_generic_test(const CommonOpts& opt, int dim, int count) {
    if (dim % 2 == 0) throw precondition_error("genericity is defined in odd dimension");
    std::mt19937_64 eng(static_cast<std::uint64_t>(opt.seed));
    auto rnd = [&](long long lo, long long hi) {
        return static_cast<long long>(
            lo + static_cast<long long>(eng() % static_cast<std::uint64_t>(hi - lo + 1)));
    };
    int generic = 0;
    for (int it = 0; it < count; ++it) {
        MultiVector<K> l(dim, 2), l1(dim, 2);
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                l.set((IndexMask(1) << i) | (IndexMask(1) << j), K(rnd(-50, 50)));
                l1.set((IndexMask(1) << i) | (IndexMask(1) << j), K(rnd(-50, 50)));
            }
        BivectorPair<K> p(dim, l, l1);
        if (is_generic(p)) ++generic;
    }
    Json r = report_head<K>("generic-test", opt);
    r["dim"] = dim;
    r["count"] = count;
    r["generic"] = generic;
    std::string summary = "generic pairs: " + std::to_string(generic) + "/" + std::to_string(count);
    return emit(r, opt, summary, 0);
}

template <class K>
int run_web_verify(const CommonOpts& opt) {
    Json in = load_json(opt.in_path);
    JetTensor11<K> j = jio::jettensor_from<K>(jio::field(in, "J", "/"), "/J");
    JetForm<K> beta = jio::jetform_from<K>(jio::field(in, "beta", "/"), "/beta");
    const Json& fol_json = jio::field(in, "foliation", "/");
    FoliationSpec<K> fol;
    for (size_t i = 0; i < fol_json.size(); ++i)
        fol.covectors.push_back(jio::jetform_from<K>(fol_json[i], "/foliation/" + std::to_string(i)));
    auto rep = verify_web(j, beta, fol, opt.samples);
    Json r = report_head<K>("web-verify", opt);
    r["span_ok"] = rep.span_ok;
    r["char_numbers"] = rep.char_numbers;
    r["height"] = rep.height;
    r["torsion_ok"] = rep.torsion_ok;
    r["torsion_order"] = rep.torsion_order;
    r["closure_ok"] = rep.closure_ok;
    r["closure_order"] = rep.closure_order;
    r["beta_matches_foliation"] = rep.beta_matches_foliation;
    Json samples = Json::array();
    for (auto& s : rep.samples) {
        Json e;
        e["t"] = jio::scalar_json(s.t);
        e["kernel_dim"] = s.kernel_dim;
        e["involutive"] = s.involutive;
        e["residual_order"] = s.residual_order;
        samples.push_back(std::move(e));
    }
    r["samples"] = std::move(samples);
    r["pass"] = rep.pass();
    std::string summary = std::string("web verify: ") + (rep.pass() ? "pass" : "fail");
    return emit(r, opt, summary, rep.pass() ? 0 : 1);
}

template <class K>
int run_web_compat(const CommonOpts& opt) {
    Json in = load_json(opt.in_path);
    JetTensor11<K> j = jio::jettensor_from<K>(jio::field(in, "J", "/"), "/J");
    JetForm<K> omega = jio::jetform_from<K>(jio::field(in, "omega", "/"), "/omega");
    const Json& al = jio::field(in, "alphas", "/");
    FoliationSpec<K> alphas;
    for (size_t i = 0; i < al.size(); ++i)
        alphas.covectors.push_back(jio::jetform_from<K>(al[i], "/alphas/" + std::to_string(i)));
    auto rep = compatibility(alphas, j, omega);
    Json r = report_head<K>("web-compat", opt);
    r["compatible"] = rep.compatible;
    r["residual_order"] = rep.residual_order;
    std::string summary = std::string("compatibility: ") + (rep.compatible ? "yes" : "no");
    return emit(r, opt, summary, rep.compatible ? 0 : 1);
}

template <class K>
K pick_extra_eigenvalue(const std::vector<K>& a) {
    for (long long c = 0;; ++c) {
        bool used = false;
        for (auto& x : a) used = used || (x == K(c));
        if (!used) return K(c);
    }
}

template <class K>
int run_versal_solve(const CommonOpts& opt, const std::string& germ_path, const std::string& a_csv) {
    Json gj = load_json(germ_path);
    std::vector<K> a;
    {
        std::string tok;
        for (char ch : a_csv + ",") {
            if (ch == ',') {
                if (!tok.empty()) a.push_back(scalar_from_string<K>(tok));
                tok.clear();
            } else {
                tok += ch;
            }
        }
    }
    int n = static_cast<int>(a.size()) + 1;
    ProblemFrame<K> fr(n, 1, a, pick_extra_eigenvalue(a), opt.order);
    CauchyDatum<K> germ;
    germ.svars = fr.svars;
    germ.order = opt.order;
    std::vector<std::string> gvars = jio::field(gj, "vars", "/").get<std::vector<std::string>>();
    if (gvars != fr.svars) throw parse_error("/vars: germ must use the surface chart (s, y1)");
    const Json& phis = jio::field(gj, "phi", "/");
    for (size_t i = 0; i < phis.size(); ++i)
        germ.phi.push_back(
            jio::jet_from_terms<K>(phis[i], fr.svars, opt.order, "/phi/" + std::to_string(i)));
    auto sol = solve_versal(fr, germ);
    auto web = versal_to_web(fr, sol);
    Json r = report_head<K>("versal-solution", opt);
    Json alist = Json::array();
    for (auto& x : a) alist.push_back(jio::scalar_json(x));
    r["a"] = std::move(alist);
    r["a_extra"] = jio::scalar_json(fr.a_extra);
    r["residual_order"] = sol.residual_order;
    Json fjets = Json::array();
    for (auto& f : sol.f) fjets.push_back(jio::jetseries_json(f));
    r["f"] = std::move(fjets);
    Json gcoeff = Json::array();
    for (auto& c : web.gamma.c) gcoeff.push_back(jio::jetform_json(c));
    r["gamma"] = std::move(gcoeff);
    return emit(r, opt, "versal solve: residual order " + std::to_string(sol.residual_order), 0);
}

template <class K>
int run_versal_equiv(const CommonOpts& opt) {
    Json in = load_json(opt.in_path);
    std::vector<K> a = jio::scalar_list<K>(jio::field(in, "a", "/"), "/a");
    int n = static_cast<int>(a.size()) + 1;
    ProblemFrame<K> fr(n, 1, a, pick_extra_eigenvalue(a), opt.order);
    auto read_germ = [&](const char* name) {
        CauchyDatum<K> g;
        g.svars = fr.svars;
        g.order = opt.order;
        const Json& phis = jio::field(in, name, "/");
        for (size_t i = 0; i < phis.size(); ++i)
            g.phi.push_back(jio::jet_from_terms<K>(phis[i], fr.svars, opt.order,
                                                   std::string("/") + name + "/" + std::to_string(i)));
        return g;
    };
    CauchyDatum<K> phi = read_germ("phi");
    CauchyDatum<K> phibar = read_germ("phibar");
    auto b = germ_equiv(fr, phi, phibar, opt.order);
    Json r = report_head<K>("versal-equiv", opt);
    r["equivalent"] = b.has_value();
    r["b"] = b ? Json(jio::scalar_json(*b)) : Json(nullptr);
    std::string summary = b ? ("equivalent, b = " + scalar_to_string(*b)) : "not equivalent";
    return emit(r, opt, summary, b ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computer algebra for the local theory of Veronese webs"};
    app.require_subcommand(1);

    CommonOpts opt;
    int dim = 5, count = 100;
    std::string germ_path, a_csv;
    std::string action;

    auto add_common = [&](CLI::App* cmd, bool with_in) {
        if (with_in) cmd->add_option("--in", opt.in_path, "input JSON file")->required();
        cmd->add_option("--out", opt.out_path, "output report file (stdout when absent)");
        cmd->add_option("--field", opt.field, "scalar field: rational | quadratic-extension");
        cmd->add_option("--format", opt.format, "output format: json | text");
        cmd->add_option("--seed", opt.seed, "seed recorded in the report");
        cmd->add_option("--order", opt.order, "truncation order for jet commands");
    };

    auto* curve = app.add_subcommand("curve", "Veronese curves from couples");
    auto* curve_build = curve->add_subcommand("build", "build the curve of an admissible couple");
    add_common(curve_build, true);
    curve_build->callback([&] { action = "curve build"; });

    auto* couple = app.add_subcommand("couple", "admissible couples");
    auto* couple_norm = couple->add_subcommand("normalize", "normal form of an admissible couple");
    add_common(couple_norm, true);
    couple_norm->callback([&] { action = "couple normalize"; });

    auto* pencil = app.add_subcommand("pencil", "pairs of bivectors");
    auto* pencil_classify = pencil->add_subcommand("classify", "full classification of a pair");
    add_common(pencil_classify, true);
    pencil_classify->callback([&] { action = "pencil classify"; });
    auto* pencil_generic = pencil->add_subcommand("generic-test", "sampled genericity frequency");
    add_common(pencil_generic, false);
    pencil_generic->add_option("--dim", dim, "odd ambient dimension");
    pencil_generic->add_option("--count", count, "number of sampled pairs");
    pencil_generic->callback([&] { action = "pencil generic-test"; });

    auto* web = app.add_subcommand("web", "jet-level web checks");
    auto* web_verify = web->add_subcommand("verify", "verify the web conditions of (J, beta, foliation)");
    add_common(web_verify, true);
    web_verify->add_option("--samples", opt.samples, "extra integrability samples");
    web_verify->callback([&] { action = "web verify"; });
    auto* web_compat = web->add_subcommand("compat", "bihamiltonian compatibility check");
    add_common(web_compat, true);
    web_compat->callback([&] { action = "web compat"; });

    auto* versal = app.add_subcommand("versal", "codimension-one versal models");
    auto* versal_solve = versal->add_subcommand("solve", "solve the versal system for a germ");
    versal_solve->add_option("--germ", germ_path, "germ JSON file")->required();
    versal_solve->add_option("--a", a_csv, "comma-separated eigenvalues a_1..a_{n-1}")->required();
    add_common(versal_solve, false);
    versal_solve->callback([&] { action = "versal solve"; });
    auto* versal_equiv = versal->add_subcommand("equiv", "homothety equivalence of admissible germs");
    add_common(versal_equiv, true);
    versal_equiv->callback([&] { action = "versal equiv"; });

    CLI11_PARSE(app, argc, argv);

    try {
        auto dispatch = [&](auto tag) -> int {
            using K = decltype(tag);
            if (action == "curve build") return run_curve_build<K>(opt);
            if (action == "couple normalize") return run_couple_normalize<K>(opt);
            if (action == "pencil classify") return run_pencil_classify<K>(opt);
            if (action == "pencil generic-test") return run_generic_test<K>(opt, dim, count);
            if (action == "web verify") return run_web_verify<K>(opt);
            if (action == "web compat") return run_web_compat<K>(opt);
            if (action == "versal solve") return run_versal_solve<K>(opt, germ_path, a_csv);
            if (action == "versal equiv") return run_versal_equiv<K>(opt);
            std::cerr << "unknown action\n";
            return 2;
        };
        if (opt.field == "rational") return dispatch(Rational());
        if (opt.field == "quadratic-extension") return dispatch(Gaussian());
        std::cerr << "error: unknown field mode '" << opt.field << "'\n";
        return 2;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
