#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monofix/lattice.hpp"
#include "monofix/rng.hpp"

using namespace monofix;

namespace {

void check_snf(const IntMat& A) {
    SmithResult r = smith_normal_form(A);
    CHECK(r.U * A * r.V == r.D);
    long long du = r.U.det(), dv = r.V.det();
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    int nmin = std::min(A.rows(), A.cols());
    for (int i = 0; i < nmin; ++i)
        for (int j = 0; j < std::min(r.D.rows(), r.D.cols()); ++j)
            if (i != j && i < r.D.rows() && j < r.D.cols()) {
                if (i < r.D.rows() && j < r.D.cols() && i != j) CHECK(r.D.at(i, j) == 0);
            }
    for (int i = 0; i + 1 < nmin; ++i) {
        long long a = r.D.at(i, i), b = r.D.at(i + 1, i + 1);
        CHECK(a >= 0);
        if (a != 0) CHECK(b % a == 0);
        if (a == 0) CHECK(b == 0);
    }
}

// brute-force saturation oracle: HNF of all solutions with |lambda_i| <= bound
IntMat brute_kernel(const TowerField* t, const std::vector<std::vector<FieldElement>>& gens, int n,
                    long bound) {
    std::vector<std::vector<long long>> sols;
    std::vector<long> lam(static_cast<size_t>(n), -bound);
    for (;;) {
        bool ok = true;
        for (const auto& g : gens) {
            FieldElement prod = t->one();
            for (int i = 0; i < n; ++i) prod = t->mul(prod, t->pow(g[static_cast<size_t>(i)], lam[static_cast<size_t>(i)]));
            if (!prod.is_one()) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::vector<long long> v(lam.begin(), lam.end());
            sols.push_back(v);
        }
        int i = 0;
        while (i < n && lam[static_cast<size_t>(i)] == bound) lam[static_cast<size_t>(i++)] = -bound;
        if (i == n) break;
        ++lam[static_cast<size_t>(i)];
    }
    IntMat rows = IntMat::from_rows(sols);
    return hnf_columns(rows.transpose());
}

} // namespace

TEST_CASE("snf of identity and simple cases") {
    check_snf(IntMat::identity(3));
    IntMat a = IntMat::from_rows({{2, 4}, {6, 8}});
    SmithResult r = smith_normal_form(a);
    CHECK(r.D.at(0, 0) == 2);
    CHECK(r.D.at(1, 1) == 4);
    IntMat z = IntMat::from_rows({{0}});
    SmithResult rz = smith_normal_form(z);
    CHECK(rz.D.at(0, 0) == 0);
}

TEST_CASE("snf property suite on random matrices") {
    Rng rng(123);
    for (int k = 0; k < 60; ++k) {
        int m = 1 + static_cast<int>(rng.below(4));
        int n = 1 + static_cast<int>(rng.below(4));
        IntMat a(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = rng.range(-20, 20);
        check_snf(a);
    }
}

TEST_CASE("hnf is a canonical lattice form") {
    // two bases of the same lattice get the same HNF
    IntMat a = IntMat::from_rows({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    IntMat b = IntMat::from_rows({{2, 2, 0}, {1, 0, 0}, {0, 0, 1}});
    // b's columns: (2,1,0),(2,0,0),(0,0,1) span the same lattice as (2,0,0),(0,1,0),(0,0,1)
    CHECK(hnf_columns(a) == hnf_columns(b));
}

TEST_CASE("scalar kernel lattice: single sign flip on x1,x3") {
    TowerField t;
    std::vector<std::vector<FieldElement>> gens{
        {t.from_rational(-1), t.from_rational(1), t.from_rational(-1)}};
    KernelLattice lat = scalar_kernel_lattice(&t, gens, 3);
    CHECK(lat.index == 2);
    CHECK(hnf_columns(lat.basis) == brute_kernel(&t, gens, 3, 2));
}

TEST_CASE("scalar kernel lattice: global sign flip") {
    TowerField t;
    std::vector<std::vector<FieldElement>> gens{
        {t.from_rational(-1), t.from_rational(-1), t.from_rational(-1)}};
    KernelLattice lat = scalar_kernel_lattice(&t, gens, 3);
    CHECK(lat.index == 2);
    CHECK(hnf_columns(lat.basis) == brute_kernel(&t, gens, 3, 2));
}

TEST_CASE("scalar kernel lattice: trivial group") {
    TowerField t;
    std::vector<std::vector<FieldElement>> gens;
    KernelLattice lat = scalar_kernel_lattice(&t, gens, 3);
    CHECK(lat.index == 1);
    CHECK(lat.basis == IntMat::identity(3));
}

TEST_CASE("scalar kernel agrees with brute force on random 8th-root groups") {
    TowerField t;
    FieldElement z8 = t.adjoin_sqrt(t.i());
    Rng rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        int ngen = 1 + static_cast<int>(rng.below(2));
        std::vector<std::vector<FieldElement>> gens;
        for (int g = 0; g < ngen; ++g) {
            std::vector<FieldElement> row;
            for (int i = 0; i < 3; ++i) row.push_back(t.pow(z8, rng.range(0, 7)));
            gens.push_back(row);
        }
        KernelLattice lat = scalar_kernel_lattice(&t, gens, 3);
        CHECK(hnf_columns(lat.basis) == brute_kernel(&t, gens, 3, 8));
        long long d = lat.basis.det();
        CHECK(std::abs(d) == lat.index);
    }
}

TEST_CASE("non-root-of-unity coefficients are rejected") {
    TowerField t;
    std::vector<std::vector<FieldElement>> gens{
        {t.from_rational(2), t.from_rational(1), t.from_rational(1)}};
    CHECK_THROWS_AS(scalar_kernel_lattice(&t, gens, 3), DomainError);
}

TEST_CASE("reduce_to_faithful: already faithful group is untouched") {
    TowerField t;
    MonomialAutomorphism s;
    s.mat = IntMat::from_rows({{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    s.coeffs = {t.from_rational(1), t.from_rational(1), t.from_rational(1)};
    MonomialGroup g = group_closure({s});
    FaithfulReduction red = reduce_to_faithful(g);
    CHECK(red.total_index == 1);
    CHECK(red.steps.empty());
    CHECK(red.quotient.size() == 2);
}

TEST_CASE("reduce_to_faithful: pure scalar group becomes trivial") {
    TowerField t;
    MonomialAutomorphism tau;
    tau.mat = IntMat::identity(3);
    tau.coeffs = {t.from_rational(-1), t.from_rational(1), t.from_rational(-1)};
    MonomialGroup g = group_closure({tau});
    FaithfulReduction red = reduce_to_faithful(g);
    CHECK(red.total_index == 2);
    CHECK(red.quotient.size() == 1);
    // every z is fixed by tau: z = x^B columns
    for (const auto& z : red.map.images) CHECK(apply(tau, z).equals(z));
    CHECK(red.quotient.rho_injective());
}

TEST_CASE("reduce_to_faithful: mixed scalar and faithful part") {
    TowerField t;
    MonomialAutomorphism tau; // scalar of order 2
    tau.mat = IntMat::identity(3);
    tau.coeffs = {t.from_rational(-1), t.from_rational(1), t.from_rational(-1)};
    MonomialAutomorphism s; // x1 -> a/x1 pattern on first coordinate
    s.mat = IntMat::from_rows({{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    s.coeffs = {t.from_rational(3), t.from_rational(1), t.from_rational(1)};
    MonomialGroup g = group_closure({tau, s});
    CHECK(g.size() == 4);
    FaithfulReduction red = reduce_to_faithful(g);
    CHECK(red.total_index == 2);
    CHECK(red.quotient.size() == 2);
    CHECK(red.quotient.rho_injective());
    for (const auto& z : red.map.images) CHECK(apply(tau, z).equals(z));
}
