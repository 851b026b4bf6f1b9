#ifndef MONOFIX_DESCENT_HPP
#define MONOFIX_DESCENT_HPP

#include <memory>

#include "monofix/certificate.hpp"
#include "monofix/lattice.hpp"

namespace monofix {

// Rolling state of a fixed-field construction: the current transcendence
// basis expressed in the original variables, and the residual group acting on
// it. Steps consume normal subgroups and append certificate entries; the
// degree factors multiply up to the order of the input group.
struct PipelineState {
    std::shared_ptr<TowerField> K;
    std::array<RF, 3> coords_abs;      // current coords as functions of x1,x2,x3
    std::vector<GroupImage> residual;  // action on current coords; [0] = identity
    Certificate cert;
    std::vector<std::string> class_path;
    Rng rng;

    TowerField* T() { return K.get(); }
    const TowerField* T() const { return K.get(); }
    RF var(int i) const { return RF::variable(K.get(), 3, i); }
    RF cst(const FieldElement& c) const { return RF::constant(K.get(), 3, c); }
    RF cst(const Rat& c) const { return RF::constant(K.get(), 3, c); }
    size_t order() const { return residual.size(); }
    bool done() const { return residual.size() == 1; }

    // residual index of an element equal to g (error if absent)
    size_t find(const GroupImage& g) const;
};

PipelineState make_state(std::shared_ptr<TowerField> K, const MonomialGroup& g, Rng rng);
// also runs the scalar-kernel reduction steps of `red`
PipelineState make_state(std::shared_ptr<TowerField> K, const FaithfulReduction& red,
                         const MonomialGroup& g, Rng rng);

// ---- degree-1 steps -------------------------------------------------------

// invertible change of coordinates; verifies the round trip and pushes the
// residual action through
void step_change(PipelineState& st, StepKind kind, const std::string& note,
                 std::array<RF, 3> images, std::array<RF, 3> inverse,
                 std::vector<HypoCheck> extra = {});

// convenience: scale slot i by a nonzero constant (y = x/c)
void scale_slot(PipelineState& st, int slot, const FieldElement& c, const std::string& note);
// Moebius slot change y = (1-x)/(1+x) (self-inverse)
void mobius_slot(PipelineState& st, int slot, const std::string& note);

// semilinear averaging: the affine slots acquire invariant replacements;
// requires the residual to restrict faithfully to the other coordinates
void step_linearize(PipelineState& st, const std::vector<int>& affine_slots,
                    const std::string& note);
bool restriction_faithful(const PipelineState& st, const std::vector<int>& affine_slots);

// ---- group-consuming steps ------------------------------------------------

struct C2Spec {
    size_t s_index = 0;
    std::array<RF, 3> new_coords;
    QuadraticWitness wit;
    StepKind kind = StepKind::MinPolyDescent;
    std::string note;
    std::vector<HypoCheck> extra;
};

// generic certified index-2 descent; verifies the witness, re-derives the
// induced action mechanically and checks it, then commits the step
void step_c2(PipelineState& st, const C2Spec& spec);

// two-slot inversion pair s: x -> a/x, y -> b/y with a, b fixed functions of
// the carried coordinate; produces the classical u, v generators and their
// reconstruction identities
C2Spec make_involution_pair(PipelineState& st, size_t s_index, int slot_x, int slot_y,
                            const RF& a, const RF& b);

// twisted variant: s: x -> a/x, y -> {b1 [x + a/x] + b2}/y with a b1 != 0
C2Spec make_twisted_pair(PipelineState& st, size_t s_index, int slot_x, int slot_y, const RF& a,
                         const RF& b1, const RF& b2);

// involution acting slotwise as x -> x, x -> -x, or x -> A/x (A carried);
// handles sign patterns and single-slot inversions uniformly
C2Spec make_signed_diag(PipelineState& st, size_t s_index);

// pure swap of two slots
C2Spec make_swap_pair(PipelineState& st, size_t s_index, int slot_p, int slot_q);

// scalar-kernel reduction inside a pipeline whose residual is monomial again
void step_scalar_kernel(PipelineState& st);

// min-poly descent (one affine slot, group elements trivial on the other
// coordinates are consumed); factor = |kernel|
void step_min_poly(PipelineState& st, int slot, const std::string& note);

// ---- conic descent ---------------------------------------------------------

// s: alpha -> -alpha, x -> x, y -> b (x^2 - c)/y over F = K(alpha^2), with
// b, c functions of a := alpha^2. `point` is a projective point at infinity
// [S0 : T0 : X0] of the quadric S^2 - T^2/a - 4 b (x^2 - c), coordinates as
// functions of the a-variable (3-var RFs using only slot_alpha's variable,
// which is interpreted as a after descent).
struct ConicPoint {
    RF S0, T0, X0;
};
C2Spec make_conic(PipelineState& st, size_t s_index, int slot_alpha, int slot_x, int slot_y,
                  const RF& b, const RF& c, const ConicPoint& point);

// bounded small-height search for an infinity point of the quadric (fallback
// when no explicit point is supplied); nullopt if the search fails
std::optional<ConicPoint> conic_point_search(const TowerField* t, int a_var, const RF& b,
                                             const RF& c);

// multiquadratic degree jump [K(sqrt a1, sqrt a2, sqrt a3) : K] for the
// obstruction test; K taken from the elements' tower (strict or not)
int multiquadratic_degree(const TowerField* t, const std::array<FieldElement, 3>& as);

// ---- expression helper -----------------------------------------------------

// express h (an RF in the previous coordinates, invariant under the consumed
// involution) through the new coordinates using the quadratic witness.
// Returns nullopt if h fails to reduce to a theta-free expression.
std::optional<RF> express_via_witness(const PipelineState& st, const std::array<RF, 3>& new_coords,
                                      const QuadraticWitness& wit, const RF& h);

} // namespace monofix

#endif
