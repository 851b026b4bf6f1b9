#ifndef MONOFIX_MONOMIAL_HPP
#define MONOFIX_MONOMIAL_HPP

#include <set>

#include "monofix/intmat.hpp"
#include "monofix/ratfunc.hpp"

namespace monofix {

// sigma(x_j) = coeffs[j] * prod_i x_i^{mat(i,j)}  (column action)
struct MonomialAutomorphism {
    IntMat mat;
    std::vector<FieldElement> coeffs;

    int n() const { return mat.rows(); }
    bool is_identity_map() const;
    bool operator==(const MonomialAutomorphism& o) const { return mat == o.mat && coeffs == o.coeffs; }
    bool operator!=(const MonomialAutomorphism& o) const { return !(*this == o); }
};

MonomialAutomorphism monomial_identity(const TowerField* t, int n);

// structural validity: square, unimodular, nonzero coefficients
void check_monomial(const MonomialAutomorphism& s);

RF apply(const MonomialAutomorphism& s, const RF& f);
SubstitutionMap as_subst(const MonomialAutomorphism& s);

MonomialAutomorphism compose(const MonomialAutomorphism& s, const MonomialAutomorphism& t);
MonomialAutomorphism inverse(const MonomialAutomorphism& s);

// smallest k >= 1 with s^k = id; error OrderBoundExceeded past 64
int order(const MonomialAutomorphism& s, int bound = 64);

struct MonomialGroup {
    std::vector<MonomialAutomorphism> elements; // closed, elements[0] = identity
    std::vector<MonomialAutomorphism> generators;

    int n() const { return elements.empty() ? 0 : elements[0].n(); }
    size_t size() const { return elements.size(); }
    std::set<IntMat> rho_image() const;
    bool rho_injective() const { return rho_image().size() == elements.size(); }
};

// full closure by orbit enumeration; errors: ClosureBoundExceeded (> 1024),
// NotTwoGroup (size not a power of 2)
MonomialGroup group_closure(const std::vector<MonomialAutomorphism>& gens, size_t bound = 1024);

// words are sequences of generator references: +k means gens[k-1], -k its inverse
bool verify_relations(const std::vector<MonomialAutomorphism>& gens,
                      const std::vector<std::vector<int>>& words);

} // namespace monofix

#endif
