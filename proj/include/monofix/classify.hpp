#ifndef MONOFIX_CLASSIFY_HPP
#define MONOFIX_CLASSIFY_HPP

#include "monofix/monomial.hpp"

namespace monofix {

// One of the 36 conjugacy classes of 2-subgroups of GL3(Z), named by the
// standard W_i(page) labels of the crystallographic tables.
struct ClassRep {
    std::string label;
    std::string abstract_group;
    std::vector<IntMat> gens;
};

const std::vector<ClassRep>& class_table();
int class_index_of(const std::string& label);

struct ClassMatch {
    int class_index = -1;
    IntMat conj; // U with U^-1 rho(G) U = representative matrix set
    // input elements corresponding to the representative's generators
    std::vector<MonomialAutomorphism> matched_gens;
};

// Identify the GL3(Z)-conjugacy class of a group with injective exponent
// map. Filters candidates by element invariants, then solves the integer
// intertwiner equations for a unimodular conjugator.
ClassMatch identify_class(const MonomialGroup& g);

} // namespace monofix

#endif
