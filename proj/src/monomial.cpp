#include "monofix/monomial.hpp"

#include <deque>

namespace monofix {

bool MonomialAutomorphism::is_identity_map() const {
    if (!mat.is_identity()) return false;
    for (const auto& c : coeffs)
        if (!c.is_one()) return false;
    return true;
}

MonomialAutomorphism monomial_identity(const TowerField* t, int n) {
    MonomialAutomorphism s;
    s.mat = IntMat::identity(n);
    s.coeffs.assign(static_cast<size_t>(n), t->one());
    return s;
}

void check_monomial(const MonomialAutomorphism& s) {
    require(s.mat.rows() == s.mat.cols(), "BadMatrix", "exponent matrix must be square");
    require(static_cast<int>(s.coeffs.size()) == s.mat.rows(), "BadInput",
            "coefficient count must match matrix size");
    long long d = s.mat.det();
    require(d == 1 || d == -1, "NotUnimodular", "exponent matrix must have determinant +-1");
    for (const auto& c : s.coeffs) require(!c.is_zero(), "ZeroCoefficient", "monomial coefficient is zero");
}

SubstitutionMap as_subst(const MonomialAutomorphism& s) {
    const TowerField* t = s.coeffs[0].tower();
    int n = s.n();
    SubstitutionMap m;
    for (int j = 0; j < n; ++j) {
        Poly num = Poly::constant(t, n, s.coeffs[static_cast<size_t>(j)]);
        Poly den = Poly::constant(t, n, Rat(1));
        for (int i = 0; i < n; ++i) {
            long long e = s.mat.at(i, j);
            if (e > 0)
                num = num * Poly::variable(t, n, i, e);
            else if (e < 0)
                den = den * Poly::variable(t, n, i, -e);
        }
        m.images.push_back(RF(num, den));
    }
    return m;
}

RF apply(const MonomialAutomorphism& s, const RF& f) {
    require(s.n() == f.nvars(), "BadInput", "automorphism/function dimension mismatch");
    return rf_substitute(f, as_subst(s));
}

MonomialAutomorphism compose(const MonomialAutomorphism& s, const MonomialAutomorphism& t) {
    require(s.n() == t.n(), "BadInput", "composition dimension mismatch");
    const TowerField* tw = s.coeffs[0].tower();
    MonomialAutomorphism r;
    r.mat = s.mat * t.mat;
    r.coeffs.resize(static_cast<size_t>(s.n()));
    // (s∘t)(x_j) = a_j(t) * prod_i (s(x_i))^{m_ij(t)}
    for (int j = 0; j < s.n(); ++j) {
        FieldElement c = t.coeffs[static_cast<size_t>(j)];
        for (int i = 0; i < s.n(); ++i) {
            long long e = t.mat.at(i, j);
            if (e) c = tw->mul(c, tw->pow(s.coeffs[static_cast<size_t>(i)], e));
        }
        r.coeffs[static_cast<size_t>(j)] = c;
    }
    return r;
}

MonomialAutomorphism inverse(const MonomialAutomorphism& s) {
    const TowerField* tw = s.coeffs[0].tower();
    MonomialAutomorphism r;
    r.mat = s.mat.unimodular_inverse();
    r.coeffs.resize(static_cast<size_t>(s.n()));
    for (int j = 0; j < s.n(); ++j) {
        FieldElement c = tw->one();
        for (int i = 0; i < s.n(); ++i) {
            long long e = r.mat.at(i, j);
            if (e) c = tw->mul(c, tw->pow(s.coeffs[static_cast<size_t>(i)], -e));
        }
        r.coeffs[static_cast<size_t>(j)] = c;
    }
    return r;
}

int order(const MonomialAutomorphism& s, int bound) {
    MonomialAutomorphism p = s;
    for (int k = 1; k <= bound; ++k) {
        if (p.is_identity_map()) return k;
        p = compose(p, s);
    }
    fail("OrderBoundExceeded", "element order exceeds " + std::to_string(bound) +
                                   " (coefficients are not suitable roots of unity)");
}

MonomialGroup group_closure(const std::vector<MonomialAutomorphism>& gens, size_t bound) {
    require(!gens.empty(), "BadInput", "closure of empty generating set");
    const TowerField* t = gens[0].coeffs[0].tower();
    int n = gens[0].n();
    for (const auto& g : gens) {
        check_monomial(g);
        require(g.n() == n, "BadInput", "mixed dimensions in generating set");
        order(g); // also bounds coefficient orders
    }
    MonomialGroup grp;
    grp.generators = gens;
    grp.elements.push_back(monomial_identity(t, n));
    std::deque<size_t> work{0};
    auto find = [&](const MonomialAutomorphism& s) -> bool {
        for (const auto& e : grp.elements)
            if (e == s) return true;
        return false;
    };
    while (!work.empty()) {
        size_t idx = work.front();
        work.pop_front();
        for (const auto& g : gens) {
            MonomialAutomorphism h = compose(g, grp.elements[idx]);
            if (!find(h)) {
                grp.elements.push_back(h);
                require(grp.elements.size() <= bound, "ClosureBoundExceeded",
                        "group closure exceeds " + std::to_string(bound) + " elements");
                work.push_back(grp.elements.size() - 1);
            }
        }
    }
    size_t sz = grp.elements.size();
    require((sz & (sz - 1)) == 0, "NotTwoGroup",
            "group order " + std::to_string(sz) + " is not a power of 2");
    return grp;
}

std::set<IntMat> MonomialGroup::rho_image() const {
    std::set<IntMat> s;
    for (const auto& e : elements) s.insert(e.mat);
    return s;
}

bool verify_relations(const std::vector<MonomialAutomorphism>& gens,
                      const std::vector<std::vector<int>>& words) {
    if (gens.empty()) return true;
    const TowerField* t = gens[0].coeffs[0].tower();
    int n = gens[0].n();
    for (const auto& w : words) {
        MonomialAutomorphism acc = monomial_identity(t, n);
        for (int sym : w) {
            require(sym != 0 && std::abs(sym) <= static_cast<int>(gens.size()), "BadInput",
                    "relation word references unknown generator");
            const MonomialAutomorphism& g = gens[static_cast<size_t>(std::abs(sym) - 1)];
            acc = compose(acc, sym > 0 ? g : inverse(g));
        }
        if (!acc.is_identity_map()) return false;
    }
    return true;
}

} // namespace monofix
