#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "veroweb/cauchy.hpp"
#include "veroweb/pencil.hpp"

namespace veroweb {

using Json = nlohmann::ordered_json;

namespace jio {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw parse_error(path + ": " + what);
}

inline const Json& field(const Json& j, const char* name, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(path + "/" + name, "missing field");
    return *it;
}

inline int int_field(const Json& j, const char* name, const std::string& path) {
    const Json& v = field(j, name, path);
    if (!v.is_number_integer()) fail(path + "/" + name, "expected an integer");
    return v.get<int>();
}

template <class K>
K scalar(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return K(j.get<long long>());
    if (!j.is_string()) fail(path, "expected a scalar string");
    try {
        return scalar_from_string<K>(j.get<std::string>());
    } catch (const parse_error& e) {
        fail(path, e.what());
    }
}

template <class K>
std::vector<K> scalar_list(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of scalars");
    std::vector<K> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(scalar<K>(j[i], path + "/" + std::to_string(i)));
    return out;
}

template <class K>
Json scalar_json(const K& x) {
    return Json(scalar_to_string(x));
}

// ---- matrices / subspaces ----

template <class K>
Json matrix_json(const Mat<K>& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class K>
Mat<K> matrix_from(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty row-major array");
    std::vector<Vec<K>> rows;
    for (size_t i = 0; i < j.size(); ++i)
        rows.push_back(scalar_list<K>(j[i], path + "/" + std::to_string(i)));
    for (auto& r : rows)
        if (r.size() != rows[0].size()) fail(path, "ragged matrix rows");
    return Mat<K>::from_rows(rows);
}

template <class K>
Json subspace_json(const Subspace<K>& s) {
    Json out;
    out["ambient"] = s.ambient();
    Json rows = Json::array();
    for (int i = 0; i < s.dim(); ++i) {
        Json row = Json::array();
        for (int c = 0; c < s.ambient(); ++c) row.push_back(scalar_json(s.basis().at(i, c)));
        rows.push_back(std::move(row));
    }
    out["basis"] = std::move(rows);
    return out;
}

template <class K>
Subspace<K> subspace_from(const Json& j, const std::string& path) {
    int ambient = int_field(j, "ambient", path);
    const Json& basis = field(j, "basis", path);
    if (!basis.is_array()) fail(path + "/basis", "expected an array");
    std::vector<Vec<K>> rows;
    for (size_t i = 0; i < basis.size(); ++i)
        rows.push_back(scalar_list<K>(basis[i], path + "/basis/" + std::to_string(i)));
    return Subspace<K>(ambient, rows);
}

// ---- multivectors: terms keyed by 1-based sorted index strings "1,3,4" ----

inline std::string mask_key(IndexMask m) {
    std::string s;
    for (int i : mask_indices(m)) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
    return s;
}

inline IndexMask mask_from_key(const std::string& key, int dim, const std::string& path) {
    IndexMask m = 0;
    size_t pos = 0;
    while (pos < key.size()) {
        size_t comma = key.find(',', pos);
        std::string tok = key.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        int idx = 0;
        try {
            idx = std::stoi(tok);
        } catch (...) {
            fail(path, "bad index '" + tok + "'");
        }
        if (idx < 1 || idx > dim) fail(path, "index out of range: " + tok);
        IndexMask bit = IndexMask(1) << (idx - 1);
        if (m & bit) fail(path, "repeated index: " + tok);
        m |= bit;
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return m;
}

template <class K>
Json multivector_json(const MultiVector<K>& v) {
    Json out;
    out["dim"] = v.dim();
    out["grade"] = v.grade();
    Json terms = Json::object();
    for (auto& [m, c] : v.terms()) terms[mask_key(m)] = scalar_json(c);
    out["terms"] = std::move(terms);
    return out;
}

template <class K>
MultiVector<K> multivector_from(const Json& j, const std::string& path) {
    int dim = int_field(j, "dim", path);
    int grade = int_field(j, "grade", path);
    MultiVector<K> out(dim, grade);
    const Json& terms = field(j, "terms", path);
    if (!terms.is_object()) fail(path + "/terms", "expected an object");
    for (auto& [key, val] : terms.items()) {
        IndexMask m = mask_from_key(key, dim, path + "/terms/" + key);
        if (mask_grade(m) != grade) fail(path + "/terms/" + key, "term grade mismatch");
        out.set(m, scalar<K>(val, path + "/terms/" + key));
    }
    return out;
}

// ---- jets: exponent keys "(i1,...,ik)" ----

inline std::string exps_key(const Exps& e) {
    std::string s = "(";
    for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
    return s + ")";
}

inline Exps exps_from_key(const std::string& key, int nvars, const std::string& path) {
    if (key.size() < 2 || key.front() != '(' || key.back() != ')') fail(path, "bad exponent key " + key);
    Exps e;
    std::string body = key.substr(1, key.size() - 2);
    size_t pos = 0;
    while (pos <= body.size() && !body.empty()) {
        size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            e.push_back(static_cast<std::uint16_t>(std::stoi(tok)));
        } catch (...) {
            fail(path, "bad exponent '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (static_cast<int>(e.size()) != nvars) fail(path, "exponent arity mismatch in " + key);
    return e;
}

template <class K>
Json jet_terms_json(const JetSeries<K>& s) {
    Json terms = Json::object();
    for (auto& [e, c] : s.terms()) terms[exps_key(e)] = scalar_json(c);
    return terms;
}

template <class K>
JetSeries<K> jet_from_terms(const Json& terms, const std::vector<std::string>& vars, int order,
                            const std::string& path) {
    JetSeries<K> out(vars, order);
    if (!terms.is_object()) fail(path, "expected an object of terms");
    for (auto& [key, val] : terms.items()) {
        Exps e = exps_from_key(key, static_cast<int>(vars.size()), path + "/" + key);
        if (total_degree(e) > order) fail(path + "/" + key, "term beyond the truncation order");
        out.set_coeff(e, scalar<K>(val, path + "/" + key));
    }
    return out;
}

template <class K>
Json jetseries_json(const JetSeries<K>& s) {
    Json out;
    out["vars"] = s.vars();
    out["order"] = s.order();
    out["terms"] = jet_terms_json(s);
    return out;
}

template <class K>
JetSeries<K> jetseries_from(const Json& j, const std::string& path) {
    const Json& v = field(j, "vars", path);
    std::vector<std::string> vars = v.get<std::vector<std::string>>();
    int order = int_field(j, "order", path);
    return jet_from_terms<K>(field(j, "terms", path), vars, order, path + "/terms");
}

template <class K>
Json jetform_json(const JetForm<K>& f) {
    Json out;
    out["vars"] = f.vars();
    out["grade"] = f.grade();
    out["order"] = f.order();
    Json terms = Json::object();
    for (auto& [m, s] : f.terms()) terms[mask_key(m)] = jet_terms_json(s);
    out["terms"] = std::move(terms);
    return out;
}

template <class K>
JetForm<K> jetform_from(const Json& j, const std::string& path) {
    std::vector<std::string> vars = field(j, "vars", path).get<std::vector<std::string>>();
    int grade = int_field(j, "grade", path);
    int order = int_field(j, "order", path);
    JetForm<K> out(vars, grade, order);
    const Json& terms = field(j, "terms", path);
    for (auto& [key, val] : terms.items()) {
        IndexMask m = mask_from_key(key, static_cast<int>(vars.size()), path + "/terms/" + key);
        out.set_coeff(m, jet_from_terms<K>(val, vars, order, path + "/terms/" + key));
    }
    return out;
}

template <class K>
Json jettensor_json(const JetTensor11<K>& t) {
    Json out;
    out["vars"] = t.vars;
    out["order"] = t.order();
    Json rows = Json::array();
    for (int i = 0; i < t.m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < t.m.cols(); ++j) row.push_back(jet_terms_json(t.m.at(i, j)));
        rows.push_back(std::move(row));
    }
    out["matrix"] = std::move(rows);
    return out;
}

template <class K>
JetTensor11<K> jettensor_from(const Json& j, const std::string& path) {
    std::vector<std::string> vars = field(j, "vars", path).get<std::vector<std::string>>();
    int order = int_field(j, "order", path);
    const Json& rows = field(j, "matrix", path);
    int n = static_cast<int>(vars.size());
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) fail(path + "/matrix", "expected n rows");
    Mat<JetSeries<K>> m(n, n, JetSeries<K>(vars, order));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            fail(path + "/matrix/" + std::to_string(i), "expected n entries");
        for (int c = 0; c < n; ++c)
            m.at(i, c) = jet_from_terms<K>(rows[i][c], vars, order,
                                           path + "/matrix/" + std::to_string(i) + "/" + std::to_string(c));
    }
    return JetTensor11<K>(vars, m);
}

template <class K>
Json unipoly_json(const UniPoly<K>& p) {
    Json out = Json::array();
    for (int i = 0; i <= p.degree(); ++i) out.push_back(scalar_json(p.coeff(i)));
    return out;
}

}  // namespace jio
}  // namespace veroweb
