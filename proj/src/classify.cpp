#include "monofix/classify.hpp"

#include <algorithm>
#include <map>

namespace monofix {

namespace {

IntMat M(std::vector<std::vector<long long>> rows) { return IntMat::from_rows(std::move(rows)); }

IntMat diag(long long a, long long b, long long c) {
    return M({{a, 0, 0}, {0, b, 0}, {0, 0, c}});
}

std::vector<ClassRep> build_table() {
    IntMat mI = diag(-1, -1, -1);
    // recurring generators
    IntMat inv1 = diag(-1, 1, 1);                        // x1 -> 1/x1
    IntMat d23 = diag(1, -1, -1);                        // x2,x3 inverted
    IntMat swap23 = M({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});          // x2 <-> x3
    IntMat swapneg23 = M({{1, 0, 0}, {0, 0, -1}, {0, -1, 0}});     // x2 -> 1/x3, x3 -> 1/x2
    IntMat rot23 = M({{1, 0, 0}, {0, 0, -1}, {0, 1, 0}});          // x2 -> x3 -> 1/x2
    IntMat inv1_swap23 = M({{-1, 0, 0}, {0, 0, 1}, {0, 1, 0}});    // 1/x1 with swap
    IntMat inv1_swapneg23 = M({{-1, 0, 0}, {0, 0, -1}, {0, -1, 0}});
    IntMat inv1_rot23 = M({{-1, 0, 0}, {0, 0, -1}, {0, 1, 0}});
    IntMat comp4 = M({{1, 0, 1}, {0, 0, -1}, {0, 1, 0}});          // x1, x3, x1/x2 pattern
    IntMat comp4_inv = M({{-1, 0, 1}, {0, 0, -1}, {0, 1, 0}});     // 1/x1, x3, x1/x2

    std::vector<ClassRep> t;
    // order 2
    t.push_back({"W1(173)", "C2", {d23}});
    t.push_back({"W2(173)", "C2", {inv1}});
    t.push_back({"W3(173)", "C2", {inv1_swap23}});
    t.push_back({"W4(173)", "C2", {swapneg23}});
    t.push_back({"W5(173)", "C2", {mI}});
    // order 4, cyclic
    t.push_back({"W1(174)", "C4", {rot23}});
    t.push_back({"W2(174)", "C4", {inv1_rot23}});
    t.push_back({"W3(174)", "C4", {comp4}});
    t.push_back({"W4(174)", "C4", {comp4_inv}});
    // order 4, Klein
    t.push_back({"W5(174)", "C2xC2", {d23, mI}});
    t.push_back({"W6(174)", "C2xC2", {d23, diag(-1, -1, 1)}});
    t.push_back({"W7(174)", "C2xC2", {d23, diag(1, 1, -1)}});
    t.push_back({"W8(174)", "C2xC2", {d23, inv1_swapneg23}});
    t.push_back({"W9(174)", "C2xC2", {d23, swap23}});
    t.push_back({"W10(174)", "C2xC2", {inv1, swap23}});
    t.push_back({"W11(174)", "C2xC2", {inv1_swap23, d23}});
    t.push_back({"W12(174)", "C2xC2",
                 {inv1_swap23, M({{-1, 0, 0}, {1, 0, -1}, {-1, -1, 0}})}});
    t.push_back({"W13(174)", "C2xC2",
                 {inv1_swap23, M({{1, 0, 0}, {-1, 0, 1}, {1, 1, 0}})}});
    t.push_back({"W14(174)", "C2xC2",
                 {inv1_swap23, M({{-1, 1, -1}, {0, 0, -1}, {0, -1, 0}})}});
    t.push_back({"W15(174)", "C2xC2",
                 {inv1_swap23, M({{1, -1, 1}, {0, 0, 1}, {0, 1, 0}})}});
    // order 8, C4 x C2
    t.push_back({"W1(187)", "C4xC2", {rot23, mI}});
    t.push_back({"W2(187)", "C4xC2", {comp4, mI}});
    // order 8, elementary abelian
    t.push_back({"W3(187)", "C2xC2xC2", {diag(-1, 1, 1), diag(1, -1, 1), diag(1, 1, -1)}});
    t.push_back({"W4(187)", "C2xC2xC2", {d23, inv1_swapneg23, mI}});
    t.push_back({"W5(187)", "C2xC2xC2",
                 {inv1_swap23, M({{-1, 0, 0}, {1, 0, -1}, {-1, -1, 0}}), mI}});
    t.push_back({"W6(187)", "C2xC2xC2",
                 {inv1_swap23, M({{-1, 1, -1}, {0, 0, -1}, {0, -1, 0}}), mI}});
    // order 8, dihedral
    t.push_back({"W7(187)", "D4", {rot23, inv1_swap23}});
    t.push_back({"W8(187)", "D4", {rot23, swapneg23}});
    t.push_back({"W9(187)", "D4", {inv1_rot23, inv1_swap23}});
    t.push_back({"W10(187)", "D4", {inv1_rot23, swapneg23}});
    t.push_back({"W11(187)", "D4", {comp4, inv1_swapneg23}});
    t.push_back({"W12(187)", "D4", {comp4, swap23}});
    t.push_back({"W13(187)", "D4",
                 {M({{-1, 0, -1}, {0, 0, 1}, {0, -1, 0}}), inv1_swapneg23}});
    t.push_back({"W14(187)", "D4", {M({{-1, 0, -1}, {0, 0, 1}, {0, -1, 0}}), swap23}});
    // order 16
    t.push_back({"W1(194)", "D4xC2", {rot23, inv1_swap23, mI}});
    t.push_back({"W2(195)", "D4xC2", {comp4, inv1_swapneg23, mI}});
    return t;
}

int mat_order(const IntMat& m) {
    IntMat p = m;
    for (int k = 1; k <= 16; ++k) {
        if (p.is_identity()) return k;
        p = p * m;
    }
    fail("OrderBoundExceeded", "matrix order above 16");
}

int rank_of(IntMat m) {
    // integer row echelon rank (entries stay small)
    int rows = m.rows(), cols = m.cols();
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m.at(r, c) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int cc = 0; cc < cols; ++cc) std::swap(m.at(rank, cc), m.at(pivot, cc));
        for (int r = rank + 1; r < rows; ++r) {
            while (m.at(r, c) != 0) {
                long long q = m.at(r, c) / m.at(rank, c);
                if (q == 0) {
                    for (int cc = 0; cc < cols; ++cc) std::swap(m.at(rank, cc), m.at(r, cc));
                    continue;
                }
                for (int cc = 0; cc < cols; ++cc) m.at(r, cc) -= q * m.at(rank, cc);
            }
        }
        ++rank;
    }
    return rank;
}

struct ElemProfile {
    int order;
    long long trace;
    long long det;
    int rank_minus; // rank(M - I)
    int rank_plus;  // rank(M + I)
    auto operator<=>(const ElemProfile&) const = default;
};

ElemProfile profile_of(const IntMat& m) {
    IntMat mi = m, mp = m;
    for (int i = 0; i < 3; ++i) {
        mi.at(i, i) -= 1;
        mp.at(i, i) += 1;
    }
    long long tr = m.at(0, 0) + m.at(1, 1) + m.at(2, 2);
    return {mat_order(m), tr, m.det(), rank_of(mi), rank_of(mp)};
}

std::multiset<ElemProfile> group_profile(const std::vector<IntMat>& mats) {
    std::multiset<ElemProfile> s;
    for (const auto& m : mats) s.insert(profile_of(m));
    return s;
}

std::vector<IntMat> matrix_closure(const std::vector<IntMat>& gens) {
    std::vector<IntMat> elems{IntMat::identity(3)};
    std::vector<size_t> work{0};
    auto find = [&](const IntMat& m) {
        for (const auto& e : elems)
            if (e == m) return true;
        return false;
    };
    while (!work.empty()) {
        size_t i = work.back();
        work.pop_back();
        for (const auto& g : gens) {
            IntMat h = g * elems[i];
            if (!find(h)) {
                elems.push_back(h);
                work.push_back(elems.size() - 1);
                require(elems.size() <= 64, "ClosureBoundExceeded", "matrix closure too large");
            }
        }
    }
    return elems;
}

// integer nullspace basis of the stacked equations img_k U - U rep_k = 0
std::vector<IntMat> intertwiner_basis(const std::vector<IntMat>& reps,
                                      const std::vector<IntMat>& imgs) {
    int k = static_cast<int>(reps.size());
    IntMat sys(9 * k, 9);
    for (int e = 0; e < k; ++e) {
        const IntMat& A = imgs[static_cast<size_t>(e)]; // A U = U B
        const IntMat& B = reps[static_cast<size_t>(e)];
        // row index (i,j): sum_l A(i,l) U(l,j) - U(i,l) B(l,j) = 0
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                int row = 9 * e + 3 * i + j;
                for (int l = 0; l < 3; ++l) {
                    sys.at(row, 3 * l + j) += A.at(i, l);
                    sys.at(row, 3 * i + l) -= B.at(l, j);
                }
            }
    }
    SmithResult snf = smith_normal_form(sys);
    std::vector<IntMat> basis;
    int nmin = std::min(sys.rows(), sys.cols());
    for (int c = 0; c < 9; ++c) {
        bool zero_diag = c >= nmin || snf.D.at(c, c) == 0;
        if (!zero_diag) continue;
        IntMat u(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) u.at(i, j) = snf.V.at(3 * i + j, c);
        basis.push_back(u);
    }
    return basis;
}

bool conjugates_group(const IntMat& U, const std::vector<IntMat>& group_mats,
                      const std::vector<IntMat>& rep_mats) {
    IntMat Uinv = U.unimodular_inverse();
    for (const auto& m : group_mats) {
        IntMat c = Uinv * m * U;
        bool found = false;
        for (const auto& r : rep_mats)
            if (c == r) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

// poor man's lattice reduction: pairwise size-reduce the 9-dim basis vectors
void size_reduce(std::vector<IntMat>& basis) {
    auto dot = [](const IntMat& a, const IntMat& b) {
        long long s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += a.at(i, j) * b.at(i, j);
        return s;
    };
    bool changed = true;
    for (int round = 0; round < 20 && changed; ++round) {
        changed = false;
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size(); ++j) {
                if (i == j) continue;
                long long bj = dot(basis[j], basis[j]);
                if (bj == 0) continue;
                long long f = (2 * dot(basis[i], basis[j]) + (bj >= 0 ? bj : -bj)) / (2 * bj);
                if (f == 0) continue;
                IntMat cand = basis[i];
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) cand.at(r, c) -= f * basis[j].at(r, c);
                if (dot(cand, cand) < dot(basis[i], basis[i])) {
                    basis[i] = cand;
                    changed = true;
                }
            }
    }
    std::sort(basis.begin(), basis.end(), [&](const IntMat& a, const IntMat& b) {
        return dot(a, a) < dot(b, b);
    });
    while (!basis.empty()) {
        bool zero = true;
        for (int i = 0; i < 3 && zero; ++i)
            for (int j = 0; j < 3 && zero; ++j)
                if (basis.front().at(i, j) != 0) zero = false;
        if (zero)
            basis.erase(basis.begin());
        else
            break;
    }
}

} // namespace

const std::vector<ClassRep>& class_table() {
    static const std::vector<ClassRep> table = build_table();
    return table;
}

int class_index_of(const std::string& label) {
    const auto& t = class_table();
    for (size_t i = 0; i < t.size(); ++i)
        if (t[i].label == label) return static_cast<int>(i);
    fail("ClassNotIdentified", "unknown class label " + label);
}

ClassMatch identify_class(const MonomialGroup& g) {
    require(g.rho_injective(), "BadInput", "exponent map not injective; reduce first");
    std::vector<IntMat> mats;
    for (const auto& e : g.elements) mats.push_back(e.mat);
    auto prof = group_profile(mats);

    for (size_t ci = 0; ci < class_table().size(); ++ci) {
        const ClassRep& rep = class_table()[ci];
        std::vector<IntMat> rep_mats = matrix_closure(rep.gens);
        if (rep_mats.size() != mats.size()) continue;
        if (group_profile(rep_mats) != prof) continue;

        // candidate images per representative generator, filtered by profile
        std::vector<std::vector<IntMat>> cands(rep.gens.size());
        for (size_t gi = 0; gi < rep.gens.size(); ++gi) {
            auto p = profile_of(rep.gens[gi]);
            for (const auto& m : mats)
                if (profile_of(m) == p) cands[gi].push_back(m);
            if (cands[gi].empty()) break;
        }
        bool viable = true;
        for (const auto& c : cands)
            if (c.empty()) viable = false;
        if (!viable) continue;

        auto finish = [&](const IntMat& U) -> ClassMatch {
            ClassMatch match;
            match.class_index = static_cast<int>(ci);
            match.conj = U;
            IntMat Uinv = U.unimodular_inverse();
            for (const auto& rg : rep.gens) {
                IntMat want = U * rg * Uinv;
                bool found = false;
                for (const auto& e : g.elements)
                    if (e.mat == want) {
                        match.matched_gens.push_back(e);
                        found = true;
                        break;
                    }
                require(found, "ClassNotIdentified", "conjugated generator missing from group");
            }
            return match;
        };

        if (conjugates_group(IntMat::identity(3), mats, rep_mats)) return finish(IntMat::identity(3));

        // iterate generator-image assignments
        std::vector<size_t> idx(rep.gens.size(), 0);
        for (;;) {
            std::vector<IntMat> imgs;
            for (size_t gi = 0; gi < rep.gens.size(); ++gi) imgs.push_back(cands[gi][idx[gi]]);
            auto basis = intertwiner_basis(rep.gens, imgs);
            size_reduce(basis);
            if (basis.size() > 6) basis.resize(6);
            if (!basis.empty()) {
                int nu = static_cast<int>(basis.size());
                int bound = nu <= 2 ? 6 : 3;
                std::vector<int> cs(static_cast<size_t>(nu), -bound);
                for (;;) {
                    IntMat U(3, 3);
                    bool nonzero = false;
                    for (int bi = 0; bi < nu; ++bi)
                        for (int i = 0; i < 3; ++i)
                            for (int j = 0; j < 3; ++j)
                                U.at(i, j) += cs[static_cast<size_t>(bi)] * basis[static_cast<size_t>(bi)].at(i, j);
                    for (int i = 0; i < 3 && !nonzero; ++i)
                        for (int j = 0; j < 3 && !nonzero; ++j)
                            if (U.at(i, j) != 0) nonzero = true;
                    if (nonzero) {
                        long long d = U.det();
                        if ((d == 1 || d == -1) && conjugates_group(U, mats, rep_mats)) return finish(U);
                    }
                    int pos = 0;
                    while (pos < nu && cs[static_cast<size_t>(pos)] == bound) {
                        cs[static_cast<size_t>(pos)] = -bound;
                        ++pos;
                    }
                    if (pos == nu) break;
                    ++cs[static_cast<size_t>(pos)];
                }
            }
            size_t pos = 0;
            while (pos < idx.size() && idx[pos] + 1 == cands[pos].size()) idx[pos++] = 0;
            if (pos == idx.size()) break;
            ++idx[pos];
        }
    }
    fail("ClassNotIdentified", "no matching conjugacy class found");
}

} // namespace monofix
