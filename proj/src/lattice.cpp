#include "monofix/lattice.hpp"

#include <numeric>

namespace monofix {

KernelLattice scalar_kernel_lattice(const TowerField* t,
                                    const std::vector<std::vector<FieldElement>>& scalar_gens,
                                    int n) {
    // trivial scalar group: full lattice
    bool all_trivial = true;
    for (const auto& row : scalar_gens)
        for (const auto& c : row)
            if (!c.is_one()) all_trivial = false;
    if (scalar_gens.empty() || all_trivial) return {IntMat::identity(n), 1};

    // close the coefficient group multiplicatively; it is a finite cyclic
    // subgroup of the field, so a maximal-order element generates it
    std::vector<FieldElement> w{t->one()};
    auto find = [&](const FieldElement& e) {
        for (const auto& x : w)
            if (x == e) return true;
        return false;
    };
    std::vector<FieldElement> frontier;
    for (const auto& row : scalar_gens)
        for (const auto& c : row) {
            auto ord = t->multiplicative_order(c, 64);
            require(ord.has_value(), "NotRootOfUnity",
                    "scalar coefficient has multiplicative order above 64");
            if (!find(c)) {
                w.push_back(c);
                frontier.push_back(c);
            }
        }
    while (!frontier.empty()) {
        FieldElement e = frontier.back();
        frontier.pop_back();
        for (size_t i = 0; i < w.size(); ++i) {
            FieldElement p = t->mul(e, w[i]);
            if (!find(p)) {
                require(w.size() < 256, "NotRootOfUnity", "coefficient group too large");
                w.push_back(p);
                frontier.push_back(p);
            }
        }
    }
    long long m = static_cast<long long>(w.size());
    FieldElement zeta = t->one();
    for (const auto& e : w)
        if (*t->multiplicative_order(e, 64) == m) {
            zeta = e;
            break;
        }
    require(*t->multiplicative_order(zeta, 64) == m, "NotRootOfUnity",
            "coefficient group is not cyclic");

    auto dlog = [&](const FieldElement& e) -> long long {
        FieldElement p = t->one();
        for (long long k = 0; k < m; ++k) {
            if (p == e) return k;
            p = t->mul(p, zeta);
        }
        fail("NotRootOfUnity", "discrete log failed");
    };

    // solve E*lambda = 0 (mod m) via Smith form of the exponent matrix
    int k = static_cast<int>(scalar_gens.size());
    IntMat E(k, n);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < n; ++c) E.at(r, c) = dlog(scalar_gens[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    SmithResult snf = smith_normal_form(E);
    IntMat scale = IntMat::identity(n);
    for (int i = 0; i < n; ++i) {
        long long d = i < k ? snf.D.at(i, i) : 0;
        long long g = std::gcd(d, m);
        scale.at(i, i) = m / (g == 0 ? m : g);
    }
    IntMat basis = hnf_columns(snf.V * scale);
    long long idx = basis.det();
    if (idx < 0) idx = -idx;
    require(idx > 0, "BadLattice", "kernel lattice degenerate");
    return {basis, idx};
}

namespace {

// integral conjugate Binv * M * B, or nullopt if not integral
std::optional<IntMat> conjugate_integral(const IntMat& B, const IntMat& M) {
    int n = B.rows();
    long long det = B.det();
    require(det != 0, "BadLattice", "singular lattice basis");
    // adj(B) * M * B must be divisible by det
    IntMat adj(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMat sub(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    sub.at(rr, cc++) = B.at(r, c);
                }
                ++rr;
            }
            long long cof = sub.det();
            if ((i + j) & 1) cof = -cof;
            adj.at(j, i) = cof;
        }
    IntMat num = adj * M * B;
    IntMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (num.at(i, j) % det != 0) return std::nullopt;
            out.at(i, j) = num.at(i, j) / det;
        }
    return out;
}

} // namespace

FaithfulReduction reduce_to_faithful(const MonomialGroup& g, int depth_cap) {
    const TowerField* t = g.elements[0].coeffs[0].tower();
    int n = g.n();
    FaithfulReduction out;
    out.map = identity_map(t, n);
    out.quotient = g;

    for (int depth = 0; depth < depth_cap; ++depth) {
        const MonomialGroup& cur = out.quotient;
        std::vector<const MonomialAutomorphism*> scalars;
        for (const auto& e : cur.elements)
            if (e.mat.is_identity() && !e.is_identity_map()) scalars.push_back(&e);
        if (scalars.empty()) return out;

        std::vector<std::vector<FieldElement>> rows;
        for (const auto* s : scalars) rows.push_back(s->coeffs);
        KernelLattice lat = scalar_kernel_lattice(t, rows, n);
        const IntMat& B = lat.basis;

        CertStep step;
        step.kind = StepKind::ScalarKernel;
        step.note = "invariant power products of the scalar kernel";
        step.lattice_basis = B;
        step.degree_factor = static_cast<int>(lat.index);
        long long h0 = static_cast<long long>(scalars.size()) + 1;
        step.hypotheses.push_back({"kernel_is_scalar", true});
        step.hypotheses.push_back({"index_equals_kernel_order", lat.index == h0});
        require(lat.index == h0, "BadLattice", "lattice index does not match scalar kernel order");

        // z_j = prod_i x_i^{B(i,j)}
        SubstitutionMap zmap;
        for (int j = 0; j < n; ++j) {
            Poly num = Poly::constant(t, n, Rat(1)), den = num;
            for (int i = 0; i < n; ++i) {
                long long e = B.at(i, j);
                if (e > 0)
                    num = num * Poly::variable(t, n, i, e);
                else if (e < 0)
                    den = den * Poly::variable(t, n, i, -e);
            }
            zmap.images.push_back(RF(num, den));
        }

        // every scalar must fix every z_j: prod_i a_i^{B(i,j)} == 1
        bool fixed = true;
        for (const auto* s : scalars)
            for (int j = 0; j < n && fixed; ++j) {
                FieldElement c = t->one();
                for (int i = 0; i < n; ++i) {
                    long long e = B.at(i, j);
                    if (e) c = t->mul(c, t->pow(s->coeffs[static_cast<size_t>(i)], e));
                }
                fixed = c.is_one();
            }
        step.hypotheses.push_back({"kernel_fixes_power_products", fixed});
        require(fixed, "BadLattice", "scalar kernel does not fix the lattice power products");

        // induced action: mat' = B^-1 M B, coeff'_j = prod_i a_i^{B(i,j)}
        std::vector<MonomialAutomorphism> induced;
        std::vector<int> fwd(cur.elements.size());
        for (size_t idx = 0; idx < cur.elements.size(); ++idx) {
            const auto& e = cur.elements[idx];
            auto conj = conjugate_integral(B, e.mat);
            require(conj.has_value(), "BadLattice", "lattice is not stable under the action");
            MonomialAutomorphism q;
            q.mat = *conj;
            q.coeffs.resize(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) {
                FieldElement c = t->one();
                for (int i = 0; i < n; ++i) {
                    long long be = B.at(i, j);
                    if (be) c = t->mul(c, t->pow(e.coeffs[static_cast<size_t>(i)], be));
                }
                q.coeffs[static_cast<size_t>(j)] = c;
            }
            int found = -1;
            for (size_t k = 0; k < induced.size(); ++k)
                if (induced[k] == q) {
                    found = static_cast<int>(k);
                    break;
                }
            if (found < 0) {
                induced.push_back(q);
                found = static_cast<int>(induced.size()) - 1;
            }
            fwd[idx] = found;
        }
        require(induced.size() * static_cast<size_t>(h0) == cur.elements.size(), "BadLattice",
                "quotient size mismatch after kernel reduction");

        MonomialGroup quot;
        // keep identity first
        std::vector<MonomialAutomorphism> reordered;
        std::vector<int> reindex(induced.size());
        int id_at = -1;
        for (size_t k = 0; k < induced.size(); ++k)
            if (induced[k].is_identity_map()) id_at = static_cast<int>(k);
        require(id_at >= 0, "BadLattice", "identity missing from quotient");
        reordered.push_back(induced[static_cast<size_t>(id_at)]);
        reindex[static_cast<size_t>(id_at)] = 0;
        for (size_t k = 0; k < induced.size(); ++k)
            if (static_cast<int>(k) != id_at) {
                reordered.push_back(induced[k]);
                reindex[k] = static_cast<int>(reordered.size()) - 1;
            }
        for (auto& f : fwd) f = reindex[static_cast<size_t>(f)];
        quot.elements = reordered;
        for (const auto& e : quot.elements)
            if (!e.is_identity_map()) quot.generators.push_back(e);

        for (int j = 0; j < n; ++j) step.images[static_cast<size_t>(j)] = zmap.images[static_cast<size_t>(j)];
        for (const auto& e : quot.elements) {
            GroupImage gi;
            auto sm = as_subst(e);
            for (int j = 0; j < n; ++j) gi.im[static_cast<size_t>(j)] = sm.images[static_cast<size_t>(j)];
            step.residual_after.push_back(gi);
        }
        step.forward = fwd;
        out.steps.push_back(step);
        out.total_index *= lat.index;
        // z_new expressed in x: substitute the previous x-expressions into zmap
        out.map = compose(out.map, zmap);
        out.quotient = quot;
        if (out.quotient.rho_injective()) return out;
    }
    fail("ReductionDepthExceeded", "scalar kernel reduction did not terminate");
}

} // namespace monofix
