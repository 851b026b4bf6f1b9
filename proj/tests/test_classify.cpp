#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monofix/classify.hpp"
#include "monofix/rng.hpp"

using namespace monofix;

namespace {

MonomialGroup group_from_mats(TowerField& t, const std::vector<IntMat>& mats) {
    std::vector<MonomialAutomorphism> gens;
    for (const auto& m : mats) {
        MonomialAutomorphism a;
        a.mat = m;
        a.coeffs.assign(3, t.one());
        gens.push_back(a);
    }
    return group_closure(gens);
}

IntMat random_unimodular(Rng& rng, long long entry_bound) {
    for (;;) {
        IntMat u = IntMat::identity(3);
        int ops = 4 + static_cast<int>(rng.below(8));
        for (int k = 0; k < ops; ++k) {
            int kind = static_cast<int>(rng.below(3));
            int i = static_cast<int>(rng.below(3));
            int j = static_cast<int>(rng.below(3));
            if (kind == 0 && i != j) {
                long f = rng.range(-1, 1);
                for (int c = 0; c < 3; ++c) u.at(i, c) += f * u.at(j, c);
            } else if (kind == 1 && i != j) {
                for (int c = 0; c < 3; ++c) std::swap(u.at(i, c), u.at(j, c));
            } else {
                for (int c = 0; c < 3; ++c) u.at(i, c) = -u.at(i, c);
            }
        }
        bool small = true;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (std::abs(u.at(i, j)) > entry_bound) small = false;
        long long d = u.det();
        if (small && (d == 1 || d == -1) && !u.is_identity()) return u;
    }
}

int expected_order(const std::string& ag) {
    if (ag == "C2") return 2;
    if (ag == "C4" || ag == "C2xC2") return 4;
    if (ag == "D4xC2") return 16;
    return 8;
}

} // namespace

TEST_CASE("the table holds 36 classes with the right group orders and types") {
    TowerField t;
    const auto& table = class_table();
    CHECK(table.size() == 36);
    for (const auto& rep : table) {
        MonomialGroup g = group_from_mats(t, rep.gens);
        CHECK(static_cast<int>(g.size()) == expected_order(rep.abstract_group));
        // element order structure pins the abstract type for these groups
        int max_ord = 1;
        bool abelian = true;
        for (const auto& a : g.elements) {
            max_ord = std::max(max_ord, order(a));
            for (const auto& b : g.elements)
                if (!(compose(a, b) == compose(b, a))) abelian = false;
        }
        if (rep.abstract_group == "C2xC2xC2") {
            CHECK(abelian);
            CHECK(max_ord == 2);
        } else if (rep.abstract_group == "C4xC2") {
            CHECK(abelian);
            CHECK(max_ord == 4);
        } else if (rep.abstract_group == "D4") {
            CHECK(!abelian);
        } else if (rep.abstract_group == "C4") {
            CHECK(max_ord == 4);
        } else if (rep.abstract_group == "C2xC2") {
            CHECK(abelian);
            CHECK(max_ord == 2);
        }
    }
}

TEST_CASE("representatives identify as themselves (pairwise distinctness)") {
    TowerField t;
    const auto& table = class_table();
    for (size_t ci = 0; ci < table.size(); ++ci) {
        MonomialGroup g = group_from_mats(t, table[ci].gens);
        ClassMatch m = identify_class(g);
        CHECK(m.class_index == static_cast<int>(ci));
    }
}

TEST_CASE("named classes from explicit actions") {
    TowerField t;
    MonomialGroup minus = group_from_mats(t, {IntMat::from_rows({{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}})});
    CHECK(class_table()[static_cast<size_t>(identify_class(minus).class_index)].label == "W5(173)");
    MonomialGroup d23 = group_from_mats(t, {IntMat::from_rows({{1, 0, 0}, {0, -1, 0}, {0, 0, -1}})});
    CHECK(class_table()[static_cast<size_t>(identify_class(d23).class_index)].label == "W1(173)");
}

TEST_CASE("round-trip under random unimodular conjugation (spot check)") {
    TowerField t;
    Rng rng(2024);
    const auto& table = class_table();
    for (size_t ci = 0; ci < table.size(); ++ci) {
        IntMat U = random_unimodular(rng, 3);
        IntMat Uinv = U.unimodular_inverse();
        std::vector<IntMat> conj_gens;
        for (const auto& m : table[ci].gens) conj_gens.push_back(U * m * Uinv);
        MonomialGroup g = group_from_mats(t, conj_gens);
        ClassMatch match = identify_class(g);
        CHECK(match.class_index == static_cast<int>(ci));
        // returned conjugator is valid
        IntMat Vinv = match.conj.unimodular_inverse();
        std::vector<IntMat> back;
        for (const auto& e : g.elements) back.push_back(Vinv * e.mat * match.conj);
        std::vector<IntMat> reps;
        {
            MonomialGroup rg = group_from_mats(t, table[ci].gens);
            for (const auto& e : rg.elements) reps.push_back(e.mat);
        }
        for (const auto& m : back) {
            bool found = false;
            for (const auto& r : reps)
                if (m == r) found = true;
            CHECK(found);
        }
    }
}
