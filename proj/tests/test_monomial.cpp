#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monofix/monomial.hpp"
#include "monofix/rng.hpp"

using namespace monofix;

namespace {

MonomialAutomorphism inv_all(TowerField& t, Rat a1, Rat a2, Rat a3) {
    MonomialAutomorphism s;
    s.mat = IntMat::from_rows({{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}});
    s.coeffs = {t.from_rational(a1), t.from_rational(a2), t.from_rational(a3)};
    return s;
}

// x -> y -> z -> -1/(xyz)
MonomialAutomorphism cyclic_twisted(TowerField& t) {
    MonomialAutomorphism s;
    // sigma(x1)=x2, sigma(x2)=x3, sigma(x3)=-1/(x1 x2 x3); columns are image exponents
    s.mat = IntMat::from_rows({{0, 0, -1}, {1, 0, -1}, {0, 1, -1}});
    s.coeffs = {t.from_rational(1), t.from_rational(1), t.from_rational(-1)};
    return s;
}

} // namespace

TEST_CASE("apply: inversion action on x1*x2*x3") {
    TowerField t;
    auto s = inv_all(t, 2, 3, 5);
    RF f = parse_rf(t, 3, "x1*x2*x3");
    CHECK(apply(s, f).equals(parse_rf(t, 3, "30/(x1*x2*x3)")));
    auto id = monomial_identity(&t, 3);
    RF g = parse_rf(t, 3, "(x1 + x2^2)/(x3 - 1)");
    CHECK(apply(id, g).equals(g));
}

TEST_CASE("cyclic twisted automorphism has order 4 and sigma^2 sends x1 to x3") {
    TowerField t;
    auto s = cyclic_twisted(t);
    CHECK(apply(s, parse_rf(t, 3, "x1")).equals(parse_rf(t, 3, "x2")));
    CHECK(order(s) == 4);
    auto s2 = compose(s, s);
    CHECK(apply(s2, parse_rf(t, 3, "x1")).equals(parse_rf(t, 3, "x3")));
    CHECK(!verify_relations({s}, {{1, 1}}));      // sigma^2 != 1
    CHECK(verify_relations({s}, {{1, 1, 1, 1}})); // sigma^4 = 1
}

TEST_CASE("involution relations and closure sizes") {
    TowerField t;
    auto s = inv_all(t, 2, 3, 5);
    CHECK(order(s) == 2);
    CHECK(verify_relations({s}, {{1, 1}}));
    MonomialGroup g1 = group_closure({monomial_identity(&t, 3)});
    CHECK(g1.size() == 1);
    MonomialGroup g2 = group_closure({s});
    CHECK(g2.size() == 2);

    // commuting pair: diag(1,-1,-1) and -I with unit coefficients
    MonomialAutomorphism a;
    a.mat = IntMat::from_rows({{1, 0, 0}, {0, -1, 0}, {0, 0, -1}});
    a.coeffs = {t.from_rational(1), t.from_rational(1), t.from_rational(1)};
    MonomialGroup g4 = group_closure({a, inv_all(t, 1, 1, 1)});
    CHECK(g4.size() == 4);
    CHECK(verify_relations({a, inv_all(t, 1, 1, 1)}, {{1, 2, -1, -2}}));
}

TEST_CASE("order 4 coefficient pattern: (i^1 x1, x3, b/x2)") {
    TowerField t;
    MonomialAutomorphism s;
    s.mat = IntMat::from_rows({{1, 0, 0}, {0, 0, -1}, {0, 1, 0}});
    s.coeffs = {t.i(), t.from_rational(1), t.from_rational(7)};
    CHECK(order(s) == 4);
    MonomialGroup g = group_closure({s});
    CHECK(g.size() == 4);
    CHECK(g.rho_injective());
}

TEST_CASE("group closure rejects non-2-groups and runaway coefficients") {
    TowerField t;
    MonomialAutomorphism rot3; // cyclic permutation of the variables: order 3
    rot3.mat = IntMat::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
    rot3.coeffs = {t.from_rational(1), t.from_rational(1), t.from_rational(1)};
    CHECK_THROWS_AS(group_closure({rot3}), DomainError);

    MonomialAutomorphism bad;
    bad.mat = IntMat::identity(3);
    bad.coeffs = {t.from_rational(2), t.from_rational(1), t.from_rational(1)};
    CHECK_THROWS_AS(order(bad), DomainError);
}

TEST_CASE("rho is a homomorphism and apply respects composition") {
    TowerField t;
    Rng rng(3);
    auto s = cyclic_twisted(t);
    auto u = inv_all(t, 1, 1, -1);
    MonomialGroup g = group_closure({s, u});
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) {
            auto c = compose(g.elements[i], g.elements[j]);
            CHECK(c.mat == g.elements[i].mat * g.elements[j].mat);
        }
    RF f = parse_rf(t, 3, "(x1 - x2)/(x3 + 2)");
    auto c = compose(s, u);
    CHECK(apply(c, f).equals(apply(s, apply(u, f))));
    // automorphism property on a product
    RF h = parse_rf(t, 3, "x1*x3 - 1");
    CHECK(apply(s, f * h).equals(apply(s, f) * apply(s, h)));
    // order divides group order
    CHECK(static_cast<size_t>(g.size()) % static_cast<size_t>(order(s)) == 0);
}

TEST_CASE("inverse of a monomial automorphism") {
    TowerField t;
    auto s = cyclic_twisted(t);
    auto si = inverse(s);
    CHECK(compose(s, si).is_identity_map());
    CHECK(compose(si, s).is_identity_map());
}
