#include <catch2/catch_amalgamated.hpp>

#include "veroweb/multivector.hpp"
#include "test_support.hpp"

using namespace veroweb;
using MV = MultiVector<Rational>;
using M = Mat<Rational>;

namespace {
Vec<Rational> e(int n, int i) {
    Vec<Rational> v(n, Rational(0));
    v[i] = Rational(1);
    return v;
}
MV rand_mv(testsup::Rng& rng, int n, int g) {
    MV m(n, g);
    for (IndexMask mask = 0; mask < (IndexMask(1) << n); ++mask)
        if (mask_grade(mask) == g) m.set(mask, rng.rational(-4, 4, 2));
    return m;
}
}  // namespace

TEST_CASE("wedge basics") {
    MV e1 = MV::from_vector(e(3, 0));
    MV e2 = MV::from_vector(e(3, 1));
    CHECK(wedge(e1, e2) == MV::basis(3, 0b011));
    CHECK(wedge(e1, e1).is_zero());
    // (e1+e2) ^ (e1-e2) = -2 e12
    MV a = MV::from_vector({Rational(1), Rational(1), Rational(0)});
    MV b = MV::from_vector({Rational(1), Rational(-1), Rational(0)});
    CHECK(wedge(a, b) == Rational(-2) * MV::basis(3, 0b011));
}

TEST_CASE("wedge associativity and graded anticommutativity") {
    testsup::Rng rng(21);
    for (int it = 0; it < 40; ++it) {
        int n = 5;
        MV a = rand_mv(rng, n, 1), b = rand_mv(rng, n, 2), c = rand_mv(rng, n, 1);
        CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
        // a ^ b = (-1)^{|a||b|} b ^ a
        MV ab = wedge(a, b);
        MV ba = wedge(b, a);
        CHECK(ab == ba);  // 1*2 even
        MV ac = wedge(a, c);
        CHECK(ac == -wedge(c, a));  // 1*1 odd
    }
    // grade overflow is the zero multivector, not an error
    testsup::Rng rng2(22);
    MV x = rand_mv(rng2, 3, 2), y = rand_mv(rng2, 3, 2);
    CHECK(wedge(x, y).is_zero());
    CHECK(wedge(x, y).grade() == 4);
}

TEST_CASE("kernel_of_form") {
    // beta = e1* ^ e2* in K^3 -> span(e3)
    MV b12 = MV::basis(3, 0b011);
    CHECK(kernel_of_form(b12) == Subspace<Rational>(3, {e(3, 2)}));
    // beta = (e1*+e3*) ^ e2* -> span(e1 - e3)
    MV b = wedge(MV::from_vector({Rational(1), Rational(0), Rational(1)}), MV::from_vector(e(3, 1)));
    CHECK(kernel_of_form(b) == Subspace<Rational>(3, {{Rational(1), Rational(0), Rational(-1)}}));
    CHECK_THROWS_AS(kernel_of_form(MV(3, 2)), degenerate_error);
}

TEST_CASE("pullback") {
    testsup::Rng rng(23);
    // identity leaves forms unchanged
    MV beta = rand_mv(rng, 4, 2);
    CHECK(pullback(M::identity(4), beta) == beta);
    // diag(a1,a2) scales e1*^e2* by a1 a2
    M d(2, 2);
    d.at(0, 0) = Rational(3);
    d.at(1, 1) = Rational(5);
    CHECK(pullback(d, MV::basis(2, 0b11)) == Rational(15) * MV::basis(2, 0b11));
    // random L, beta on K^4: agree with evaluation on all basis pairs
    for (int it = 0; it < 10; ++it) {
        M l = rng.matrix(4, 4);
        MV f = rand_mv(rng, 4, 2);
        MV pf = pullback(l, f);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Rational lhs = evaluate_form(pf, {e(4, i), e(4, j)});
                Rational rhs = evaluate_form(f, {l.apply(e(4, i)), l.apply(e(4, j))});
                CHECK(lhs == rhs);
            }
        // functoriality
        M m2 = rng.matrix(4, 4);
        CHECK(pullback(m2, pullback(l, f)) == pullback(l * m2, f));
    }
}

TEST_CASE("kernel of pullback is preimage of kernel") {
    testsup::Rng rng(24);
    for (int it = 0; it < 20; ++it) {
        M l = rng.matrix(4, 4);
        if (det(l).is_zero()) continue;
        MV beta = wedge(MV::from_vector(rng.vector(4)), MV::from_vector(rng.vector(4)));
        if (beta.is_zero()) continue;
        auto ker = kernel_of_form(beta);
        auto kerp = kernel_of_form(pullback(l, beta));
        CHECK(image_under(inverse(l), ker) == kerp);
    }
}

TEST_CASE("decomposability checks") {
    testsup::Rng rng(25);
    auto v1 = rng.vector(4), v2 = rng.vector(4);
    MV dec = wedge(MV::from_vector(v1), MV::from_vector(v2));
    if (!dec.is_zero()) {
        CHECK(is_decomposable(dec));
        CHECK(plucker_diagnostic(dec));
    }
    // e12 + e34 is not decomposable in K^4
    MV nd = MV::basis(4, 0b0011) + MV::basis(4, 0b1100);
    CHECK(!is_decomposable(nd));
    CHECK(!plucker_diagnostic(nd));
}

TEST_CASE("polynomial multivector curves") {
    testsup::Rng rng(26);
    MV c0 = rand_mv(rng, 4, 1), c1 = rand_mv(rng, 4, 1), c2 = rand_mv(rng, 4, 1);
    PolyMultiVector<Rational> p(4, 1, {c0, c1, c2});
    CHECK(p.degree() == 2);
    Rational t(3);
    CHECK(p.eval(t) == c0 + t * c1 + (t * t) * c2);
    // wedge then divide exactly round trip
    PolyMultiVector<Rational> q(4, 1, {c1, c2});
    auto w = wedge(p, q);
    UniPoly<Rational> s{Rational(1), Rational(2)};
    // multiply componentwise via wedge with scalar poly times unit 0-vector
    PolyMultiVector<Rational> unit(4, 0, {MV::basis(4, 0), Rational(2) * MV::basis(4, 0)});
    auto scaled = wedge(w, unit);
    CHECK(divexact(scaled, s) == w);
}
