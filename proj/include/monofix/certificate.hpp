#ifndef MONOFIX_CERTIFICATE_HPP
#define MONOFIX_CERTIFICATE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "monofix/intmat.hpp"
#include "monofix/ratfunc.hpp"

namespace monofix {

enum class StepKind {
    Normalize,
    ScalarKernel,
    Linearize,
    MinPolyDescent,
    InvolutionPair,
    TwistedPair,
    ConicDescent,
    VariableChange,
    ObstructionCheck,
};

std::string step_kind_name(StepKind k);

struct HypoCheck {
    std::string name;
    bool ok = false;
};

// Witness that the new coordinates generate an index-2 subfield: theta is
// quadratic over the new field (theta^2 + p*theta + q = 0) and every old
// coordinate is rational in (new coords, theta).
struct QuadraticWitness {
    RF theta;              // in previous coordinates (3 vars)
    RF p, q;               // in new coordinates (3 vars)
    std::array<RF, 3> recon; // old coord i as RF in 4 vars (new1,new2,new3,theta)
};

// An automorphism of the current coordinate field, by its coordinate images.
struct GroupImage {
    std::array<RF, 3> im;

    bool is_identity() const;
    bool same_as(const GroupImage& o) const;
};

RF apply_image(const GroupImage& g, const RF& f);
GroupImage compose_images(const GroupImage& g_after, const GroupImage& g_first);

struct CertStep {
    StepKind kind = StepKind::VariableChange;
    std::string note;
    std::array<RF, 3> images; // new coords as functions of the previous coords
    std::optional<std::array<RF, 3>> inverse_images;
    std::optional<QuadraticWitness> witness;
    std::optional<IntMat> lattice_basis;
    int degree_factor = 1;
    std::vector<HypoCheck> hypotheses;
    std::vector<GroupImage> residual_after; // action on the new coords
    std::vector<int> forward;               // prev residual index -> residual_after index
};

struct Certificate {
    std::vector<CertStep> steps;
};

enum class Verdict { Rational, NotRetractRational, Failed };
std::string verdict_name(Verdict v);

struct VerificationOutcome {
    bool invariance = false;
    bool transcendence = false;
    bool certificate = false;
    std::string detail;
    bool all() const { return invariance && transcendence && certificate; }
};

struct RationalityReport {
    std::string class_id = "trivial";
    std::vector<std::string> class_path;
    std::string abstract_group = "1";
    int group_order = 1;
    int lemma_index = 1;
    std::array<RF, 3> generators;
    std::vector<GroupImage> initial_residual; // input closure as coordinate images
    Certificate certificate;
    Verdict verdict = Verdict::Failed;
    VerificationOutcome verification;
    uint64_t seed = 0;
};

} // namespace monofix

#endif
