#include <catch2/catch_amalgamated.hpp>

#include "veroweb/matrix.hpp"
#include "test_support.hpp"

using namespace veroweb;
using M = Mat<Rational>;
using S = Subspace<Rational>;
using P = UniPoly<Rational>;

TEST_CASE("rref, rank, kernel, solve") {
    testsup::Rng rng(11);
    for (int it = 0; it < 30; ++it) {
        M a = rng.matrix(4, 6);
        M c = a;
        auto piv = rref(c);
        CHECK(static_cast<int>(piv.size()) == rank(a));
        for (auto& v : kernel_basis(a)) {
            auto img = a.apply(v);
            for (auto& x : img) CHECK(x.is_zero());
        }
        Vec<Rational> x = rng.vector(6);
        auto b = a.apply(x);
        auto sol = solve(a, b);
        REQUIRE(sol.has_value());
        CHECK(a.apply(*sol) == b);
    }
}

TEST_CASE("determinant, inverse") {
    testsup::Rng rng(12);
    for (int it = 0; it < 20; ++it) {
        M a = rng.matrix(4, 4);
        Rational d = det(a);
        std::vector<std::vector<Rational>> rows;
        for (int i = 0; i < 4; ++i) rows.push_back(a.row(i));
        CHECK(d == testsup::cofactor_det(rows));
        if (!d.is_zero()) {
            M inv = inverse(a);
            CHECK(a * inv == M::identity(4));
        }
    }
}

TEST_CASE("char_poly examples and oracle") {
    // identity 2x2 -> (t+1)^2
    CHECK(char_poly(M::identity(2)) == P{Rational(1), Rational(2), Rational(1)});
    // diag(2,3) -> (t+2)(t+3)
    M d(2, 2);
    d.at(0, 0) = Rational(2);
    d.at(1, 1) = Rational(3);
    CHECK(char_poly(d) == P::linear(Rational(2)) * P::linear(Rational(3)));
    // random 4x4 against cofactor expansion of M + tI over the polynomial ring
    testsup::Rng rng(13);
    for (int it = 0; it < 10; ++it) {
        M a = rng.matrix(4, 4);
        std::vector<std::vector<P>> poly(4, std::vector<P>(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                poly[i][j] = P::constant(a.at(i, j));
                if (i == j) poly[i][j] += P::t();
            }
        CHECK(char_poly(a) == testsup::cofactor_det(poly));
        CHECK(char_poly(a).is_monic());
    }
}

TEST_CASE("resolvent curve: diagonal, nilpotent and rotation examples") {
    M d(2, 2);
    d.at(0, 0) = Rational(2);
    d.at(1, 1) = Rational(3);
    auto rv = resolvent_curve(d, {Rational(1), Rational(0)});
    CHECK(rv[0] == P::linear(Rational(3)));
    CHECK(rv[1].is_zero());

    // H e1 = 0, H e2 = -e1: adj(H+tI) e2 = e1 + t e2
    M h(2, 2);
    h.at(0, 1) = Rational(-1);
    auto rh = resolvent_curve(h, {Rational(0), Rational(1)});
    CHECK(rh[0] == P::constant(Rational(1)));
    CHECK(rh[1] == P::t());

    // J = [[0,-1],[1,0]], v = e1 -> t e1 - e2
    M j(2, 2);
    j.at(0, 1) = Rational(-1);
    j.at(1, 0) = Rational(1);
    auto rj = resolvent_curve(j, {Rational(1), Rational(0)});
    CHECK(rj[0] == P::t());
    CHECK(rj[1] == P::constant(Rational(-1)));
}

TEST_CASE("resolvent composed with (J+tI) reproduces char_poly * v") {
    testsup::Rng rng(14);
    for (int it = 0; it < 100; ++it) {
        int n = static_cast<int>(rng.intval(1, 5));
        M j = rng.matrix(n, n);
        Vec<Rational> v = rng.vector(n);
        auto rv = resolvent_curve(j, v);
        P phi = char_poly(j);
        // (J + tI) rv = phi v componentwise
        for (int i = 0; i < n; ++i) {
            P lhs = P::t() * rv[i];
            for (int k = 0; k < n; ++k) lhs += P::constant(j.at(i, k)) * rv[k];
            CHECK(lhs == P::constant(v[i]) * phi);
        }
    }
}

TEST_CASE("subspace canonicalization and operations") {
    testsup::Rng rng(15);
    for (int it = 0; it < 30; ++it) {
        // two random bases of the same space give identical echelon form
        M b = rng.matrix(3, 5);
        S s1(5, {b.row(0), b.row(1), b.row(2)});
        M t = rng.matrix(3, 3);
        while (det(t).is_zero()) t = rng.matrix(3, 3);
        M c = t * b;
        S s2(5, {c.row(0), c.row(1), c.row(2)});
        CHECK(s1 == s2);
    }

    SECTION("intersection") {
        auto e = [](int i) {
            Vec<Rational> v(3, Rational(0));
            v[i] = Rational(1);
            return v;
        };
        S a(3, {e(0), e(1)});
        S b(3, {e(1), e(2)});
        S i = intersect(a, b);
        CHECK(i == S(3, {e(1)}));
        CHECK(intersect(a, a) == a);
        // dimension formula on random 5-dim pairs
        testsup::Rng rng2(16);
        for (int it = 0; it < 30; ++it) {
            M ma = rng2.matrix(2, 5), mb = rng2.matrix(3, 5);
            S sa(5, {ma.row(0), ma.row(1)});
            S sb(5, {mb.row(0), mb.row(1), mb.row(2)});
            CHECK(intersect(sa, sb).dim() == sa.dim() + sb.dim() - sum(sa, sb).dim());
        }
    }

    SECTION("annihilator") {
        CHECK(annihilator(S::full(4)) == S::zero(4));
        Vec<Rational> e1(2, Rational(0));
        e1[0] = Rational(1);
        S s(2, {e1});
        Vec<Rational> e2s(2, Rational(0));
        e2s[1] = Rational(1);
        CHECK(annihilator(s) == S(2, {e2s}));
        testsup::Rng rng3(17);
        for (int it = 0; it < 30; ++it) {
            M m = rng3.matrix(2, 5);
            S sp(5, {m.row(0), m.row(1)});
            CHECK(annihilator(annihilator(sp)) == sp);
            CHECK(annihilator(sp).dim() == 5 - sp.dim());
        }
    }
}

TEST_CASE("faddeev adjugate identity") {
    testsup::Rng rng(18);
    for (int it = 0; it < 20; ++it) {
        int n = static_cast<int>(rng.intval(1, 5));
        M m = rng.matrix(n, n);
        auto fd = faddeev(m);
        // (tI - M) adj(tI - M) = charpoly(t) I, checked coefficientwise.
        std::vector<M> lhs(n + 1, M(n, n));
        for (int k = 0; k < n; ++k) {
            lhs[k + 1] = lhs[k + 1] + fd.adj[k];
            lhs[k] = lhs[k] - m * fd.adj[k];
        }
        for (int k = 0; k <= n; ++k) CHECK(lhs[k] == fd.charpoly[k] * M::identity(n));
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(char_poly(M(2, 3)), dimension_error);
    CHECK_THROWS_AS(det(M(2, 3)), dimension_error);
    CHECK_THROWS_AS(inverse(M(2, 2)), degenerate_error);
    CHECK_THROWS_AS(intersect(S::full(2), S::full(3)), dimension_error);
}

TEST_CASE("linear algebra over the quadratic extension") {
    using G = Gaussian;
    Mat<G> rot(2, 2);
    rot.at(0, 1) = G(Rational(-1));
    rot.at(1, 0) = G(Rational(1));
    // char poly t^2 + 1 splits over the extension
    auto cp = char_poly(rot);
    CHECK(cp == UniPoly<G>({G(1), G(0), G(1)}));
    G i(Rational(0), Rational(1));
    CHECK(is_zero(cp.eval(i)));
    // eigen decomposition data: rank of rot - i I drops
    Mat<G> shifted = rot;
    shifted.at(0, 0) = -i;
    shifted.at(1, 1) = -i;
    CHECK(rank(shifted) == 1);
    CHECK(kernel_space(shifted).dim() == 1);
    // subspace canonicalization over the extension
    Subspace<G> s(2, {{G(1), i}});
    CHECK(s.dim() == 1);
    CHECK(annihilator(annihilator(s)) == s);
}
