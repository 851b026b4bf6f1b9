#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monofix/ratfunc.hpp"
#include "monofix/rng.hpp"

using namespace monofix;

namespace {

RF rf(TowerField& t, int n, const std::string& s) { return parse_rf(t, n, s); }

RF random_rf(TowerField& t, int n, Rng& rng) {
    Poly num(&t, n), den(&t, n);
    for (int k = 0; k < 4; ++k) {
        std::vector<long> e(static_cast<size_t>(n));
        for (auto& x : e) x = rng.range(0, 2);
        num.add_term(Poly::pack(e), t.from_rational(Rat(rng.range(-5, 5))));
        for (auto& x : e) x = rng.range(0, 2);
        den.add_term(Poly::pack(e), t.from_rational(Rat(rng.range(-5, 5))));
    }
    if (den.is_zero()) den = Poly::constant(&t, n, Rat(1));
    if (num.is_zero()) num = Poly::constant(&t, n, Rat(1));
    return RF(num, den);
}

} // namespace

TEST_CASE("basic arithmetic and normalization") {
    TowerField t;
    RF f = rf(t, 2, "x1 - 1/x1");
    CHECK(f.equals(rf(t, 2, "(x1^2 - 1)/x1")));
    CHECK(rf(t, 2, "x1/x2").inv().equals(rf(t, 2, "x2/x1")));
    RF g = rf(t, 2, "(x1^2 - 1)/(x1 - 1)");
    CHECK(g.equals(rf(t, 2, "x1 + 1")));
    CHECK((f + (-f)).is_zero());
    CHECK(rf(t, 2, "x1").equals(rf(t, 2, "x2")) == false);
}

TEST_CASE("normalization is idempotent and canonical") {
    TowerField t;
    Rng rng(7);
    for (int k = 0; k < 20; ++k) {
        RF f = random_rf(t, 3, rng);
        RF g(f.num(), f.den()); // re-normalize
        CHECK(g.num() == f.num());
        CHECK(g.den() == f.den());
        CHECK(f.den().leading_coeff().is_one());
    }
}

TEST_CASE("substitution: x->1/x, y->1/y on xy") {
    TowerField t;
    RF f = rf(t, 2, "x1*x2");
    SubstitutionMap m;
    m.images = {rf(t, 2, "1/x1"), rf(t, 2, "1/x2")};
    CHECK(rf_substitute(f, m).equals(rf(t, 2, "1/(x1*x2)")));
}

TEST_CASE("x + a/x is invariant under x -> a/x") {
    TowerField t;
    // a as a second variable: f(x, a) = x + a/x, m: x -> a/x, a -> a
    RF f = rf(t, 2, "x1 + x2/x1");
    SubstitutionMap m;
    m.images = {rf(t, 2, "x2/x1"), rf(t, 2, "x2")};
    CHECK(rf_substitute(f, m).equals(f));
}

TEST_CASE("substitution distributes over arithmetic") {
    TowerField t;
    Rng rng(99);
    SubstitutionMap m;
    m.images = {rf(t, 3, "x1 + x2"), rf(t, 3, "x1*x3"), rf(t, 3, "x3 - 1")};
    for (int k = 0; k < 10; ++k) {
        RF f = random_rf(t, 3, rng), g = random_rf(t, 3, rng);
        CHECK(rf_substitute(f * g, m).equals(rf_substitute(f, m) * rf_substitute(g, m)));
        CHECK(rf_substitute(f + g, m).equals(rf_substitute(f, m) + rf_substitute(g, m)));
    }
}

TEST_CASE("indeterminate substitution is rejected") {
    TowerField t;
    RF f = rf(t, 2, "1/(x1 - x2)");
    SubstitutionMap m;
    m.images = {rf(t, 2, "x2"), rf(t, 2, "x2")};
    CHECK_THROWS_AS(rf_substitute(f, m), DomainError);
}

TEST_CASE("birational maps round-trip") {
    TowerField t;
    // w = (1-x)/(1+x) is an involution
    auto mk = [&](const std::string& s) { return rf(t, 1, s); };
    auto m = std::make_shared<SubstitutionMap>();
    m->images = {mk("(1 - x1)/(1 + x1)")};
    auto minv = std::make_shared<SubstitutionMap>(*m);
    m->inverse = minv;
    CHECK(roundtrip_ok(*m));

    Rng rng(5);
    RF f = rf(t, 1, "(x1^2 + 3)/(x1 - 2)");
    CHECK(rf_substitute(rf_substitute(f, *m), *minv).equals(f));
}

TEST_CASE("coefficient involution in substitution maps") {
    TowerField t;
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    RF f = RF::constant(&t, 1, s2) * rf(t, 1, "x1") + RF::constant(&t, 1, t.i());
    SubstitutionMap m = identity_map(&t, 1);
    m.coeff_auto = 1; // conjugate sqrt(2) -> -sqrt(2)
    RF g = rf_substitute(f, m);
    RF expect = RF::constant(&t, 1, t.neg(s2)) * rf(t, 1, "x1") + RF::constant(&t, 1, t.i());
    CHECK(g.equals(expect));
}

TEST_CASE("jacobian ranks") {
    TowerField t;
    Rng rng(11);
    std::vector<RF> id{rf(t, 3, "x1"), rf(t, 3, "x2"), rf(t, 3, "x3")};
    CHECK(jacobian_rank(id, rng) == 3);
    std::vector<RF> dep{rf(t, 3, "x1"), rf(t, 3, "x1^2"), rf(t, 3, "x1^3")};
    CHECK(jacobian_rank(dep, rng) == 1);
    // u, v of the two-variable involution with a=b=1, plus a carried variable
    std::vector<RF> uv{rf(t, 3, "(x1 - 1/x1)/(x1*x2 - 1/(x1*x2))"),
                       rf(t, 3, "(x2 - 1/x2)/(x1*x2 - 1/(x1*x2))"), rf(t, 3, "x3")};
    CHECK(jacobian_rank(uv, rng) == 3);
}

TEST_CASE("gcd agrees between PRS and specialization fast path") {
    TowerField t;
    Rng rng(31);
    for (int k = 0; k < 10; ++k) {
        RF a = random_rf(t, 3, rng), b = random_rf(t, 3, rng), c = random_rf(t, 3, rng);
        Poly f = a.num() * c.num();
        Poly g = b.num() * c.num();
        Rng r1(1000 + static_cast<uint64_t>(k));
        Poly fast = poly_gcd(f, g, &r1);
        Poly slow = poly_gcd(f, g, nullptr);
        CHECK(fast == slow);
        // the common factor divides the gcd
        CHECK(fast.divided_by(poly_gcd(c.num(), fast, &r1)).has_value());
    }
}

TEST_CASE("printer/parser round-trip on generators-like expressions") {
    TowerField t;
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    Rng rng(17);
    for (int k = 0; k < 10; ++k) {
        RF f = random_rf(t, 3, rng) + RF::constant(&t, 3, s2);
        RF back = parse_rf(t, 3, to_string(f));
        CHECK(back.equals(f));
    }
}
