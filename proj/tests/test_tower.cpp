#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monofix/field_io.hpp"
#include "monofix/rng.hpp"
#include "monofix/tower.hpp"

using namespace monofix;

TEST_CASE("adjoining sqrt(2) to Q grows one level and squares back") {
    TowerField t;
    int before = t.levels();
    FieldElement s = t.adjoin_sqrt(t.from_rational(2));
    CHECK(t.levels() == before + 1);
    CHECK(t.mul(s, s) == t.from_rational(2));

    // second adjunction of the same radicand reuses the root
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    CHECK(t.levels() == before + 1);
    CHECK(s2 == s);
}

TEST_CASE("zeta4 is pre-adjoined and i*i = -1") {
    TowerField t;
    FieldElement i = t.i();
    CHECK(t.mul(i, i) == t.from_rational(-1));
    CHECK(t.is_square(t.from_rational(-1)));
}

TEST_CASE("element with square equal to 2*sqrt(-1) exists after adjunction") {
    TowerField t;
    FieldElement rad = t.mul_rat(t.i(), 2); // 2*sqrt(-1)
    FieldElement e = t.adjoin_sqrt(rad);
    CHECK(t.mul(e, e) == rad);
    // (1+i)^2 = 2i, so the root already lives in Q(i) and the tower must not grow
    CHECK(t.levels() == 1);
}

TEST_CASE("square detection") {
    TowerField t;
    CHECK(t.is_square(t.from_rational(4)));
    CHECK(!t.is_square(t.from_rational(2)));
    CHECK(t.is_square(t.from_rational(Rat(9, 25))));
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    CHECK(t.is_square(t.from_rational(2)));
    // (1 + sqrt(2))^2 = 3 + 2 sqrt(2)
    FieldElement v = t.add(t.from_rational(3), t.mul_rat(s2, 2));
    auto r = t.sqrt_in_tower(v);
    REQUIRE(r.has_value());
    CHECK(t.mul(*r, *r) == v);
}

TEST_CASE("inverse by conjugation ladder: 1/(1+sqrt(2)) = -1+sqrt(2)") {
    TowerField t;
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    FieldElement a = t.add(t.from_rational(1), s2);
    FieldElement inv = t.inv(a);
    CHECK(inv == t.add(t.from_rational(-1), s2));
    CHECK(t.mul(a, inv).is_one());
}

TEST_CASE("field axioms on random triples, exact") {
    TowerField t;
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    FieldElement s3 = t.adjoin_sqrt(t.from_rational(3));
    Rng rng(42);
    auto random_elem = [&]() {
        FieldElement e = t.from_rational(Rat(rng.range(-9, 9)));
        if (rng.below(2)) e = t.add(e, t.mul_rat(t.i(), rng.range(-4, 4)));
        if (rng.below(2)) e = t.add(e, t.mul_rat(s2, rng.range(-4, 4)));
        if (rng.below(2)) e = t.add(e, t.mul_rat(s3, rng.range(-4, 4)));
        return e;
    };
    for (int k = 0; k < 50; ++k) {
        FieldElement a = random_elem(), b = random_elem(), c = random_elem();
        CHECK(t.mul(a, t.mul(b, c)) == t.mul(t.mul(a, b), c));
        CHECK(t.mul(a, t.add(b, c)) == t.add(t.mul(a, b), t.mul(a, c)));
        CHECK(t.add(a, t.neg(a)).is_zero());
        if (!a.is_zero()) CHECK(t.mul(a, t.inv(a)).is_one());
    }
}

TEST_CASE("canonical form: a - b == 0 iff identical maps") {
    TowerField t;
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    FieldElement a = t.mul(s2, s2);              // 2 via multiplication
    FieldElement b = t.from_rational(2);          // 2 directly
    CHECK(a == b);
    CHECK(t.sub(a, b).is_zero());
}

TEST_CASE("multiplicative orders of roots of unity") {
    TowerField t;
    CHECK(*t.multiplicative_order(t.from_rational(-1)) == 2);
    CHECK(*t.multiplicative_order(t.i()) == 4);
    FieldElement z8 = t.adjoin_sqrt(t.i()); // primitive 8th root
    CHECK(*t.multiplicative_order(z8) == 8);
    CHECK(!t.multiplicative_order(t.from_rational(2), 64).has_value());
}

TEST_CASE("strict field refuses new adjunctions") {
    auto q = TowerField::strict_rationals();
    CHECK(q->is_square(q->from_rational(4)));
    CHECK(!q->is_square(q->from_rational(-1)));
    CHECK_THROWS_AS(q->adjoin_sqrt(q->from_rational(2)), DomainError);
    CHECK(q->adjoin_sqrt(q->from_rational(9)) == q->from_rational(3));
}

TEST_CASE("radicand normalization strips rational square content") {
    TowerField t;
    FieldElement r = t.adjoin_sqrt(t.from_rational(8)); // = 2*sqrt(2)
    CHECK(t.mul(r, r) == t.from_rational(8));
    int lv = t.levels();
    FieldElement r2 = t.adjoin_sqrt(t.from_rational(2));
    CHECK(t.levels() == lv); // sqrt(2) already present via normalized radicand
    CHECK(t.mul(r2, r2) == t.from_rational(2));
}

TEST_CASE("zero radicand is an error") {
    TowerField t;
    CHECK_THROWS_AS(t.adjoin_sqrt(t.zero()), DomainError);
}

TEST_CASE("coefficient grammar round-trips") {
    TowerField t;
    FieldElement s2 = t.adjoin_sqrt(t.from_rational(2));
    FieldElement e = t.add(t.mul_rat(t.mul(s2, t.i()), Rat(3, 2)), t.from_rational(1));
    std::string s = to_string(e);
    FieldElement back = parse_field_element(t, s);
    CHECK(back == e);

    FieldElement p = parse_field_element(t, "(3/2)*sqrt(2)*sqrt(-1) + 1");
    CHECK(p == e);
    CHECK_THROWS_AS(parse_field_element(t, "1 + + 2"), DomainError);
}
