#include <catch2/catch_amalgamated.hpp>

#include "veroweb/unipoly.hpp"
#include "test_support.hpp"

using namespace veroweb;
using P = UniPoly<Rational>;

TEST_CASE("basic polynomial arithmetic") {
    P a{Rational(1), Rational(2)};          // 1 + 2t
    P b{Rational(0), Rational(0), Rational(3)};  // 3t^2
    CHECK((a * b).degree() == 3);
    CHECK((a * b).coeff(3) == Rational(6));
    CHECK((a - a).is_zero());
    CHECK(a.eval(Rational(2)) == Rational(5));
    CHECK(P::linear(Rational(5)).eval(Rational(-5)).is_zero());
    CHECK(a.derivative() == P{Rational(2)});
}

TEST_CASE("division, gcd and exactness") {
    testsup::Rng rng(7);
    for (int it = 0; it < 50; ++it) {
        std::vector<Rational> ac(4), bc(3);
        for (auto& c : ac) c = rng.rational();
        for (auto& c : bc) c = rng.rational();
        P a(ac), b(bc);
        if (b.is_zero()) continue;
        auto [q, r] = divmod(a, b);
        CHECK(q * b + r == a);
        CHECK(r.degree() < b.degree());
        CHECK(divexact(a * b, b) == a);
    }
    P g = P::linear(Rational(2)) * P::linear(Rational(2)) * P::linear(Rational(-1));
    P h = P::linear(Rational(2)) * P::linear(Rational(3));
    CHECK(poly_gcd(g, h) == P::linear(Rational(2)));
}

TEST_CASE("resultant and discriminant") {
    // disc(t^2 + bt + c) = b^2 - 4c
    P p{Rational(3), Rational(4), Rational(1)};
    CHECK(poly_discriminant(p) == Rational(4));
    // repeated root => zero discriminant
    P q = P::linear(Rational(1)) * P::linear(Rational(1));
    CHECK(poly_discriminant(q).is_zero());
    // Resultant of (t-a)(t-b) style products equals product of differences.
    P f = P::linear(Rational(-1)) * P::linear(Rational(-2));  // roots 1, 2
    P g = P::linear(Rational(-3));                            // root 3
    CHECK(poly_resultant(f, g) == Rational((3 - 1) * (3 - 2)));
}

TEST_CASE("squarefree decomposition (Yun)") {
    P f = P::linear(Rational(1));
    P g = P::linear(Rational(-2));
    P p = f * f * f * g * g;  // (t+1)^3 (t-2)^2
    auto parts = squarefree_decomposition(p);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].first == g.monic());
    CHECK(parts[0].second == 2);
    CHECK(parts[1].first == f.monic());
    CHECK(parts[1].second == 3);
}

TEST_CASE("rational roots with multiplicity") {
    P f = P::linear(Rational(1, 2)) * P::linear(Rational(1, 2)) * P::linear(Rational(-3)) *
          P{Rational(1), Rational(0), Rational(1)};  // (t+1/2)^2 (t-3)(t^2+1)
    auto roots = rational_roots(f);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == std::pair{Rational(-1, 2), 2});
    CHECK(roots[1] == std::pair{Rational(3), 1});
    auto none = rational_roots(P{Rational(1), Rational(0), Rational(1)});
    CHECK(none.empty());
}
