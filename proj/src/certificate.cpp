#include "monofix/certificate.hpp"

namespace monofix {

std::string step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::Normalize: return "normalize";
        case StepKind::ScalarKernel: return "scalar_kernel";
        case StepKind::Linearize: return "linearize";
        case StepKind::MinPolyDescent: return "min_poly_descent";
        case StepKind::InvolutionPair: return "involution_pair";
        case StepKind::TwistedPair: return "twisted_pair";
        case StepKind::ConicDescent: return "conic_descent";
        case StepKind::VariableChange: return "variable_change";
        case StepKind::ObstructionCheck: return "obstruction_check";
    }
    return "?";
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Rational: return "Rational";
        case Verdict::NotRetractRational: return "NotRetractRational";
        case Verdict::Failed: return "Failed";
    }
    return "?";
}

bool GroupImage::is_identity() const {
    const TowerField* t = im[0].tower();
    int n = im[0].nvars();
    for (int i = 0; i < 3; ++i)
        if (!im[static_cast<size_t>(i)].equals(RF::variable(t, n, i))) return false;
    return true;
}

bool GroupImage::same_as(const GroupImage& o) const {
    for (int i = 0; i < 3; ++i)
        if (!im[static_cast<size_t>(i)].equals(o.im[static_cast<size_t>(i)])) return false;
    return true;
}

RF apply_image(const GroupImage& g, const RF& f) {
    SubstitutionMap m;
    m.images.assign(g.im.begin(), g.im.end());
    return rf_substitute(f, m);
}

GroupImage compose_images(const GroupImage& g_after, const GroupImage& g_first) {
    GroupImage r;
    for (int i = 0; i < 3; ++i) r.im[static_cast<size_t>(i)] = apply_image(g_after, g_first.im[static_cast<size_t>(i)]);
    return r;
}

} // namespace monofix
