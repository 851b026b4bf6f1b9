#ifndef MONOFIX_LATTICE_HPP
#define MONOFIX_LATTICE_HPP

#include "monofix/certificate.hpp"
#include "monofix/monomial.hpp"

namespace monofix {

// Sublattice of Z^n fixed by a scalar subgroup: columns of `basis` are the
// exponent vectors of the invariant power products.
struct KernelLattice {
    IntMat basis;    // n x n, full rank, HNF-reduced columns
    long long index; // |det(basis)|
};

// scalar_gens[t][i] = a_i(tau_t) for scalar automorphisms x_i -> a_i * x_i.
// All coefficients must be roots of unity (error NotRootOfUnity otherwise).
KernelLattice scalar_kernel_lattice(const TowerField* t,
                                    const std::vector<std::vector<FieldElement>>& scalar_gens,
                                    int n);

struct FaithfulReduction {
    SubstitutionMap map;     // z in terms of x (identity when already faithful)
    MonomialGroup quotient;  // induced action on z with injective exponent map
    std::vector<CertStep> steps;
    long long total_index = 1;
};

// Quotient away the scalar kernel (elements with exponent matrix I) by
// passing to invariant power products, repeating until the exponent map is
// injective. depth_cap guards malformed inputs.
FaithfulReduction reduce_to_faithful(const MonomialGroup& g, int depth_cap = 4);

} // namespace monofix

#endif
