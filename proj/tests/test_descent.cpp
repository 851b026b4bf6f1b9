#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monofix/descent.hpp"

using namespace monofix;

namespace {

MonomialAutomorphism from_cols(TowerField& t, std::vector<std::vector<long long>> rows,
                               std::vector<FieldElement> coeffs) {
    MonomialAutomorphism s;
    s.mat = IntMat::from_rows(rows);
    s.coeffs = std::move(coeffs);
    (void)t;
    return s;
}

int degree_product(const PipelineState& st) {
    int p = 1;
    for (const auto& s : st.cert.steps) p *= s.degree_factor;
    return p;
}

void check_invariant_generators(PipelineState& st, const MonomialGroup& g) {
    for (const auto& e : g.elements)
        for (int i = 0; i < 3; ++i) CHECK(apply(e, st.coords_abs[static_cast<size_t>(i)]).equals(st.coords_abs[static_cast<size_t>(i)]));
    std::vector<RF> gens(st.coords_abs.begin(), st.coords_abs.end());
    Rng r(5);
    CHECK(jacobian_rank(gens, r) == 3);
}

} // namespace

TEST_CASE("linearize then inversion pair: sign-scaled slot plus inverted pair") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    auto s = from_cols(t, {{1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
                       {t.from_rational(-1), t.from_rational(3), t.from_rational(5)});
    MonomialGroup g = group_closure({s});
    PipelineState st = make_state(K, g, Rng(1));

    step_linearize(st, {0}, "invariant replacement for the scaled slot");
    CHECK(st.order() == 2);
    size_t si = 1;
    auto spec = make_involution_pair(st, si, 1, 2, st.cst(Rat(3)), st.cst(Rat(5)));
    step_c2(st, spec);
    CHECK(st.done());
    CHECK(degree_product(st) == 2);
    check_invariant_generators(st, g);
}

TEST_CASE("involution pair identities hold with symbolic carried coefficient") {
    // sigma: x2 -> z/x2, x3 -> (2 z)/x3 with the carried coordinate z = x1
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    PipelineState st;
    st.K = K;
    st.rng = Rng(2);
    for (int i = 0; i < 3; ++i) st.coords_abs[static_cast<size_t>(i)] = st.var(i);
    GroupImage id{std::array<RF, 3>{st.var(0), st.var(1), st.var(2)}};
    RF z = st.var(0);
    GroupImage s{std::array<RF, 3>{z, z / st.var(1), (z + z) / st.var(2)}};
    st.residual = {id, s};
    auto spec = make_involution_pair(st, 1, 1, 2, z, z + z);
    step_c2(st, spec);
    CHECK(st.done());
    CHECK(degree_product(st) == 2);
    (void)t;
}

TEST_CASE("twisted pair with a = 1, b1 = 1, b2 = 0") {
    auto K = std::make_shared<TowerField>();
    PipelineState st;
    st.K = K;
    st.rng = Rng(3);
    for (int i = 0; i < 3; ++i) st.coords_abs[static_cast<size_t>(i)] = st.var(i);
    RF x = st.var(1), y = st.var(2);
    RF one = st.cst(Rat(1));
    RF b = x + one / x;
    GroupImage id{std::array<RF, 3>{st.var(0), x, y}};
    GroupImage s{std::array<RF, 3>{st.var(0), one / x, b / y}};
    st.residual = {id, s};
    auto spec = make_twisted_pair(st, 1, 1, 2, one, one, st.cst(Rat(0)));
    step_c2(st, spec);
    CHECK(st.done());
    // u, v invariance was verified inside; double-check externally
    for (int i = 0; i < 3; ++i) {
        const RF& gen = st.coords_abs[static_cast<size_t>(i)];
        SubstitutionMap m;
        m.images = {RF::variable(K.get(), 3, 0), one / RF::variable(K.get(), 3, 1),
                    (RF::variable(K.get(), 3, 1) + one / RF::variable(K.get(), 3, 1)) /
                        RF::variable(K.get(), 3, 2)};
        CHECK(rf_substitute(gen, m).equals(gen));
    }
}

TEST_CASE("twisted pair rejects b1 = 0") {
    auto K = std::make_shared<TowerField>();
    PipelineState st;
    st.K = K;
    st.rng = Rng(3);
    for (int i = 0; i < 3; ++i) st.coords_abs[static_cast<size_t>(i)] = st.var(i);
    RF x = st.var(1), y = st.var(2);
    RF one = st.cst(Rat(1));
    GroupImage id{std::array<RF, 3>{st.var(0), x, y}};
    GroupImage s{std::array<RF, 3>{st.var(0), one / x, one / y}};
    st.residual = {id, s};
    CHECK_THROWS_AS(make_twisted_pair(st, 1, 1, 2, one, st.cst(Rat(0)), one), DomainError);
}

TEST_CASE("signed diag: negated slot, inverted slot, constant-inverted slot") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    auto s = from_cols(t, {{1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
                       {t.from_rational(-1), t.from_rational(5), t.from_rational(-1)});
    MonomialGroup g = group_closure({s});
    PipelineState st = make_state(K, g, Rng(4));
    auto spec = make_signed_diag(st, 1);
    step_c2(st, spec);
    CHECK(st.done());
    CHECK(degree_product(st) == 2);
    check_invariant_generators(st, g);
}

TEST_CASE("signed diag: pure sign pattern uses squares and cross products") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    auto s = from_cols(t, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                       {t.from_rational(-1), t.from_rational(-1), t.from_rational(1)});
    MonomialGroup g = group_closure({s});
    PipelineState st = make_state(K, g, Rng(4));
    auto spec = make_signed_diag(st, 1);
    step_c2(st, spec);
    CHECK(st.done());
    check_invariant_generators(st, g);
}

TEST_CASE("swap pair") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    auto s = from_cols(t, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}},
                       {t.from_rational(1), t.from_rational(1), t.from_rational(1)});
    MonomialGroup g = group_closure({s});
    PipelineState st = make_state(K, g, Rng(6));
    auto spec = make_swap_pair(st, 1, 1, 2);
    step_c2(st, spec);
    CHECK(st.done());
    CHECK(degree_product(st) == 2);
    check_invariant_generators(st, g);
}

TEST_CASE("min poly descent consumes the restriction kernel") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    // s1 acts only on slot 0 (sign), s2 inverts slot 1
    auto s1 = from_cols(t, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                        {t.from_rational(-1), t.from_rational(1), t.from_rational(1)});
    auto s2 = from_cols(t, {{1, 0, 0}, {0, -1, 0}, {0, 0, 1}},
                        {t.from_rational(1), t.from_rational(3), t.from_rational(1)});
    MonomialGroup g = group_closure({s1, s2});
    CHECK(g.size() == 4);
    PipelineState st = make_state(K, g, Rng(7));
    step_min_poly(st, 0, "square of the sign-flipped slot");
    CHECK(st.order() == 2);
    CHECK(st.cert.steps.back().degree_factor == 2);
    // finish with a single-slot inversion
    auto spec = make_signed_diag(st, 1);
    step_c2(st, spec);
    CHECK(st.done());
    CHECK(degree_product(st) == 4);
    check_invariant_generators(st, g);
}

TEST_CASE("scalar kernel step inside a pipeline") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    auto tau = from_cols(t, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                         {t.from_rational(-1), t.from_rational(-1), t.from_rational(-1)});
    MonomialGroup g = group_closure({tau});
    PipelineState st = make_state(K, g, Rng(8));
    step_scalar_kernel(st);
    CHECK(st.done());
    CHECK(degree_product(st) == 2);
    check_invariant_generators(st, g);
}

TEST_CASE("conic descent on a split bundle with an obvious point") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    PipelineState st;
    st.K = K;
    st.rng = Rng(9);
    for (int i = 0; i < 3; ++i) st.coords_abs[static_cast<size_t>(i)] = st.var(i);
    RF al = st.var(0), x = st.var(1), y = st.var(2);
    GroupImage id{std::array<RF, 3>{al, x, y}};
    // b = 1, c = 0: sigma(y) = x^2 / y
    GroupImage s{std::array<RF, 3>{-al, x, x * x / y}};
    st.residual = {id, s};
    RF b = st.cst(Rat(1)), c = st.cst(Rat(0));
    auto pt = conic_point_search(K.get(), 0, b, c);
    REQUIRE(pt.has_value());
    auto spec = make_conic(st, 1, 0, 1, 2, b, c, *pt);
    step_c2(st, spec);
    CHECK(st.done());
    CHECK(degree_product(st) == 2);
    // generators fixed under s
    SubstitutionMap m;
    m.images = {-RF::variable(K.get(), 3, 0), RF::variable(K.get(), 3, 1),
                RF::variable(K.get(), 3, 1) * RF::variable(K.get(), 3, 1) / RF::variable(K.get(), 3, 2)};
    for (int i = 0; i < 3; ++i)
        CHECK(rf_substitute(st.coords_abs[static_cast<size_t>(i)], m).equals(st.coords_abs[static_cast<size_t>(i)]));
    std::vector<RF> gens(st.coords_abs.begin(), st.coords_abs.end());
    Rng r(10);
    CHECK(jacobian_rank(gens, r) == 3);
    (void)t;
}

TEST_CASE("multiquadratic degree over strict rationals") {
    auto q = TowerField::strict_rationals();
    CHECK(multiquadratic_degree(q.get(), {q->from_rational(4), q->from_rational(9), q->from_rational(1)}) == 1);
    CHECK(multiquadratic_degree(q.get(), {q->from_rational(2), q->from_rational(3), q->from_rational(6)}) == 4);
    CHECK(multiquadratic_degree(q.get(), {q->from_rational(2), q->from_rational(3), q->from_rational(5)}) == 8);
}

TEST_CASE("mobius + scale helpers keep the round trip") {
    auto K = std::make_shared<TowerField>();
    TowerField& t = *K;
    auto s = from_cols(t, {{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                       {t.from_rational(4), t.from_rational(1), t.from_rational(1)});
    MonomialGroup g = group_closure({s});
    PipelineState st = make_state(K, g, Rng(11));
    // y1 = x1 / 2 turns x1 -> 4/x1 into y1 -> 1/y1
    scale_slot(st, 0, t.from_rational(2), "unit inversion coefficient");
    CHECK(st.residual[1].im[0].equals(st.cst(Rat(1)) / st.var(0)));
    mobius_slot(st, 0, "inversion to sign flip");
    CHECK(st.residual[1].im[0].equals(-st.var(0)));
    // finish: scalar kernel on the sign flip
    step_scalar_kernel(st);
    CHECK(st.done());
    CHECK(degree_product(st) == 2);
    check_invariant_generators(st, g);
}
