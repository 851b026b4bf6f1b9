#include "monofix/descent.hpp"

#include <algorithm>

namespace monofix {

namespace {

SubstitutionMap map_of(const std::array<RF, 3>& images) {
    SubstitutionMap m;
    m.images.assign(images.begin(), images.end());
    return m;
}

RF subst3(const RF& f, const std::array<RF, 3>& images) { return rf_substitute(f, map_of(images)); }

bool any_var(const RF& f, int v) { return f.num().uses_var(v) || f.den().uses_var(v); }

void push_hypo(std::vector<HypoCheck>& hs, const std::string& name, bool ok) {
    hs.push_back({name, ok});
    require(ok, "HypothesisFailed", name);
}

} // namespace

size_t PipelineState::find(const GroupImage& g) const {
    for (size_t i = 0; i < residual.size(); ++i)
        if (residual[i].same_as(g)) return i;
    fail("ElementNotFound", "group element not in residual");
}

PipelineState make_state(std::shared_ptr<TowerField> K, const MonomialGroup& g, Rng rng) {
    PipelineState st;
    st.K = std::move(K);
    st.rng = rng;
    for (int i = 0; i < 3; ++i) st.coords_abs[static_cast<size_t>(i)] = st.var(i);
    for (const auto& e : g.elements) {
        GroupImage gi;
        auto m = as_subst(e);
        for (int i = 0; i < 3; ++i) gi.im[static_cast<size_t>(i)] = m.images[static_cast<size_t>(i)];
        st.residual.push_back(gi);
    }
    return st;
}

PipelineState make_state(std::shared_ptr<TowerField> K, const FaithfulReduction& red,
                         const MonomialGroup& g, Rng rng) {
    PipelineState st = make_state(K, g, rng);
    for (const auto& step : red.steps) {
        st.cert.steps.push_back(step);
        st.residual = step.residual_after;
    }
    for (int i = 0; i < 3; ++i) st.coords_abs[static_cast<size_t>(i)] = red.map.images[static_cast<size_t>(i)];
    return st;
}

// ---------------------------------------------------------------------------
// degree-1 steps

void step_change(PipelineState& st, StepKind kind, const std::string& note,
                 std::array<RF, 3> images, std::array<RF, 3> inverse, std::vector<HypoCheck> extra) {
    CertStep step;
    step.kind = kind;
    step.note = note;
    step.images = images;
    step.inverse_images = inverse;
    step.degree_factor = 1;
    step.hypotheses = std::move(extra);

    bool rt = true;
    for (int i = 0; i < 3 && rt; ++i) {
        rt = subst3(images[static_cast<size_t>(i)], inverse).equals(st.var(i)) &&
             subst3(inverse[static_cast<size_t>(i)], images).equals(st.var(i));
    }
    push_hypo(step.hypotheses, "round_trip_identity", rt);

    // induced action: sigma'_i = phi_i(sigma(psi(w')))
    for (const auto& g : st.residual) {
        GroupImage ng;
        for (int i = 0; i < 3; ++i) {
            RF moved = apply_image(g, images[static_cast<size_t>(i)]); // in prev coords
            ng.im[static_cast<size_t>(i)] = subst3(moved, inverse);    // back to new coords
        }
        step.residual_after.push_back(ng);
    }
    step.forward.resize(st.residual.size());
    for (size_t i = 0; i < st.residual.size(); ++i) step.forward[i] = static_cast<int>(i);

    std::array<RF, 3> abs;
    for (int i = 0; i < 3; ++i) abs[static_cast<size_t>(i)] = subst3(images[static_cast<size_t>(i)], st.coords_abs);
    st.coords_abs = abs;
    st.residual = step.residual_after;
    st.cert.steps.push_back(std::move(step));
}

void scale_slot(PipelineState& st, int slot, const FieldElement& c, const std::string& note) {
    require(!c.is_zero(), "ZeroCoefficient", "scaling by zero");
    std::array<RF, 3> images{st.var(0), st.var(1), st.var(2)};
    std::array<RF, 3> inv = images;
    images[static_cast<size_t>(slot)] = st.var(slot).mul_coeff(st.T()->inv(c));
    inv[static_cast<size_t>(slot)] = st.var(slot).mul_coeff(c);
    step_change(st, StepKind::Normalize, note, images, inv);
}

void mobius_slot(PipelineState& st, int slot, const std::string& note) {
    std::array<RF, 3> images{st.var(0), st.var(1), st.var(2)};
    RF one = st.cst(Rat(1));
    images[static_cast<size_t>(slot)] = (one - st.var(slot)) / (one + st.var(slot));
    std::array<RF, 3> inv = images; // self-inverse
    step_change(st, StepKind::VariableChange, note, images, inv);
}

bool restriction_faithful(const PipelineState& st, const std::vector<int>& affine_slots) {
    auto is_L = [&](int v) {
        return std::find(affine_slots.begin(), affine_slots.end(), v) == affine_slots.end();
    };
    for (size_t gi = 1; gi < st.residual.size(); ++gi) {
        bool moves_L = false;
        for (int v = 0; v < 3; ++v)
            if (is_L(v) && !st.residual[gi].im[static_cast<size_t>(v)].equals(st.var(v))) moves_L = true;
        if (!moves_L) return false;
    }
    return true;
}

void step_linearize(PipelineState& st, const std::vector<int>& affine_slots, const std::string& note) {
    const TowerField* t = st.T();
    int k = static_cast<int>(affine_slots.size());
    require(k >= 1 && k <= 2, "BadInput", "linearize expects 1 or 2 affine slots");
    std::vector<int> L;
    for (int v = 0; v < 3; ++v)
        if (std::find(affine_slots.begin(), affine_slots.end(), v) == affine_slots.end()) L.push_back(v);

    std::vector<HypoCheck> hypos;

    // shape: base slots map into the base subfield; affine slots are affine over it
    std::vector<std::vector<std::vector<RF>>> A(st.residual.size());
    std::vector<std::vector<RF>> B(st.residual.size());
    bool shape_ok = true;
    for (size_t gi = 0; gi < st.residual.size() && shape_ok; ++gi) {
        const auto& g = st.residual[gi];
        for (int lv : L)
            for (int av : affine_slots)
                if (any_var(g.im[static_cast<size_t>(lv)], av)) shape_ok = false;
        A[gi].assign(static_cast<size_t>(k), std::vector<RF>(static_cast<size_t>(k)));
        B[gi].assign(static_cast<size_t>(k), RF());
        for (int i = 0; i < k && shape_ok; ++i) {
            const RF& im = g.im[static_cast<size_t>(affine_slots[static_cast<size_t>(i)])];
            for (int av : affine_slots)
                if (im.den().uses_var(av)) shape_ok = false;
            if (!shape_ok) break;
            Poly bpart(t, 3);
            std::vector<Poly> apart(static_cast<size_t>(k), Poly(t, 3));
            for (const auto& [key, c] : im.num().terms()) {
                long total = 0;
                int which = -1;
                for (int j = 0; j < k; ++j) {
                    long e = Poly::exp_of(key, affine_slots[static_cast<size_t>(j)]);
                    total += e;
                    if (e == 1) which = j;
                }
                if (total == 0)
                    bpart.add_term(key, c);
                else if (total == 1) {
                    uint64_t nk = key - (static_cast<uint64_t>(1)
                                         << ((Poly::kMaxVars - 1 - affine_slots[static_cast<size_t>(which)]) * Poly::kExpBits));
                    apart[static_cast<size_t>(which)].add_term(nk, c);
                } else
                    shape_ok = false;
            }
            if (!shape_ok) break;
            RF den = RF::from_poly(im.den());
            B[gi][static_cast<size_t>(i)] = RF::from_poly(bpart) / den;
            for (int j = 0; j < k; ++j)
                A[gi][static_cast<size_t>(i)][static_cast<size_t>(j)] = RF::from_poly(apart[static_cast<size_t>(j)]) / den;
        }
    }
    push_hypo(hypos, "affine_shape_over_base", shape_ok);
    push_hypo(hypos, "faithful_restriction", restriction_faithful(st, affine_slots));

    // averaging with retry: z = P x_aff + p with P = sum_g g(C) A(g)
    RF zero = st.cst(Rat(0));
    auto rand_L_poly = [&]() {
        RF r = st.cst(Rat(st.rng.range(-4, 4)));
        for (int lv : L) r = r + st.var(lv).mul_coeff(t->from_rational(Rat(st.rng.range(-4, 4))));
        return r;
    };
    bool ok = false;
    std::array<RF, 3> images{st.var(0), st.var(1), st.var(2)}, inv = images;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
        std::vector<std::vector<RF>> C(static_cast<size_t>(k), std::vector<RF>(static_cast<size_t>(k), zero));
        std::vector<RF> c0(static_cast<size_t>(k), zero);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) C[static_cast<size_t>(i)][static_cast<size_t>(j)] = rand_L_poly();
            c0[static_cast<size_t>(i)] = rand_L_poly();
        }
        std::vector<std::vector<RF>> P(static_cast<size_t>(k), std::vector<RF>(static_cast<size_t>(k), zero));
        std::vector<RF> pvec(static_cast<size_t>(k), zero);
        for (size_t gi = 0; gi < st.residual.size(); ++gi) {
            const auto& g = st.residual[gi];
            std::vector<std::vector<RF>> gC(static_cast<size_t>(k), std::vector<RF>(static_cast<size_t>(k)));
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    gC[static_cast<size_t>(i)][static_cast<size_t>(j)] = apply_image(g, C[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j)
                    for (int l = 0; l < k; ++l)
                        P[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                            P[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                            gC[static_cast<size_t>(i)][static_cast<size_t>(l)] * A[gi][static_cast<size_t>(l)][static_cast<size_t>(j)];
                RF gb = zero;
                for (int l = 0; l < k; ++l) gb = gb + gC[static_cast<size_t>(i)][static_cast<size_t>(l)] * B[gi][static_cast<size_t>(l)];
                pvec[static_cast<size_t>(i)] = pvec[static_cast<size_t>(i)] + gb + apply_image(g, c0[static_cast<size_t>(i)]);
            }
        }
        RF det = k == 1 ? P[0][0] : P[0][0] * P[1][1] - P[0][1] * P[1][0];
        if (det.is_zero()) continue;
        ok = true;
        for (int i = 0; i < k; ++i) {
            RF z = pvec[static_cast<size_t>(i)];
            for (int j = 0; j < k; ++j)
                z = z + P[static_cast<size_t>(i)][static_cast<size_t>(j)] * st.var(affine_slots[static_cast<size_t>(j)]);
            images[static_cast<size_t>(affine_slots[static_cast<size_t>(i)])] = z;
        }
        std::vector<std::vector<RF>> Pinv(static_cast<size_t>(k), std::vector<RF>(static_cast<size_t>(k)));
        if (k == 1)
            Pinv[0][0] = det.inv();
        else {
            RF di = det.inv();
            Pinv[0][0] = P[1][1] * di;
            Pinv[0][1] = -P[0][1] * di;
            Pinv[1][0] = -P[1][0] * di;
            Pinv[1][1] = P[0][0] * di;
        }
        for (int i = 0; i < k; ++i) {
            RF x = zero;
            for (int j = 0; j < k; ++j)
                x = x + Pinv[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                            (st.var(affine_slots[static_cast<size_t>(j)]) - pvec[static_cast<size_t>(j)]);
            inv[static_cast<size_t>(affine_slots[static_cast<size_t>(i)])] = x;
        }
        for (size_t gi = 0; gi < st.residual.size() && ok; ++gi)
            for (int i = 0; i < k && ok; ++i) {
                const RF& z = images[static_cast<size_t>(affine_slots[static_cast<size_t>(i)])];
                if (!apply_image(st.residual[gi], z).equals(z)) ok = false;
            }
    }
    require(ok, "AveragingDegenerate", "semilinear averaging failed after 10 attempts");
    push_hypo(hypos, "averaged_coordinates_invariant", true);

    step_change(st, StepKind::Linearize, note, images, inv, hypos);
}

// ---------------------------------------------------------------------------
// theta machinery

std::optional<RF> express_via_witness(const PipelineState& st, const std::array<RF, 3>& new_coords,
                                      const QuadraticWitness& wit, const RF& h) {
    const TowerField* t = st.T();
    SubstitutionMap to4;
    for (int i = 0; i < 3; ++i) to4.images.push_back(wit.recon[static_cast<size_t>(i)]);
    RF h4 = rf_substitute(h, to4);

    RF p3 = wit.p, q3 = wit.q;
    auto reduce = [&](const Poly& poly4) -> std::pair<RF, RF> {
        long dmax = poly4.degree(3);
        std::vector<RF> alpha(static_cast<size_t>(dmax) + 1), beta(static_cast<size_t>(dmax) + 1);
        alpha[0] = RF::constant(t, 3, Rat(1));
        beta[0] = RF::constant(t, 3, Rat(0));
        for (long e = 1; e <= dmax; ++e) {
            alpha[static_cast<size_t>(e)] = -(q3 * beta[static_cast<size_t>(e - 1)]);
            beta[static_cast<size_t>(e)] = alpha[static_cast<size_t>(e - 1)] - p3 * beta[static_cast<size_t>(e - 1)];
        }
        RF a0 = RF::constant(t, 3, Rat(0)), a1 = a0;
        for (const auto& [key, c] : poly4.terms()) {
            long et = Poly::exp_of(key, 3);
            uint64_t nk = key - (static_cast<uint64_t>(et) << ((Poly::kMaxVars - 1 - 3) * Poly::kExpBits));
            Poly mono(t, 4);
            mono.add_term(nk, c);
            RF m3 = RF::from_poly(mono.remap_vars({0, 1, 2, 0}, 3));
            a0 = a0 + m3 * alpha[static_cast<size_t>(et)];
            a1 = a1 + m3 * beta[static_cast<size_t>(et)];
        }
        return {a0, a1};
    };
    auto [n0, n1] = reduce(h4.num());
    auto [d0, d1] = reduce(h4.den());
    if (d0.is_zero() && d1.is_zero()) return std::nullopt;
    if (!(n0 * d1).equals(n1 * d0)) return std::nullopt;
    RF out = d0.is_zero() ? n1 / d1 : n0 / d0;
    if (!subst3(out, new_coords).equals(h)) return std::nullopt;
    return out;
}

// ---------------------------------------------------------------------------
// generic certified C2 quotient

void step_c2(PipelineState& st, const C2Spec& spec) {
    const GroupImage& s = st.residual[spec.s_index];
    CertStep step;
    step.kind = spec.kind;
    step.note = spec.note;
    step.images = spec.new_coords;
    step.witness = spec.wit;
    step.degree_factor = 2;
    step.hypotheses = spec.extra;

    push_hypo(step.hypotheses, "consumed_is_not_identity", !s.is_identity());
    push_hypo(step.hypotheses, "consumed_is_involution", compose_images(s, s).is_identity());
    bool central = true;
    for (const auto& g : st.residual)
        if (!compose_images(g, s).same_as(compose_images(s, g))) central = false;
    push_hypo(step.hypotheses, "consumed_is_central", central);

    bool invariant = true;
    for (int i = 0; i < 3; ++i)
        if (!apply_image(s, spec.new_coords[static_cast<size_t>(i)]).equals(spec.new_coords[static_cast<size_t>(i)]))
            invariant = false;
    push_hypo(step.hypotheses, "new_coords_invariant", invariant);

    RF p_old = subst3(spec.wit.p, spec.new_coords);
    RF q_old = subst3(spec.wit.q, spec.new_coords);
    RF quad = spec.wit.theta * spec.wit.theta + p_old * spec.wit.theta + q_old;
    push_hypo(step.hypotheses, "theta_quadratic", quad.is_zero());

    bool recon_ok = true;
    {
        SubstitutionMap to_old;
        for (int i = 0; i < 3; ++i) to_old.images.push_back(spec.new_coords[static_cast<size_t>(i)]);
        to_old.images.push_back(spec.wit.theta);
        for (int i = 0; i < 3 && recon_ok; ++i)
            recon_ok = rf_substitute(spec.wit.recon[static_cast<size_t>(i)], to_old).equals(st.var(i));
    }
    push_hypo(step.hypotheses, "reconstruction_identities", recon_ok);

    std::vector<GroupImage> induced;
    std::vector<int> fwd(st.residual.size());
    for (size_t gi = 0; gi < st.residual.size(); ++gi) {
        const auto& g = st.residual[gi];
        GroupImage ng;
        for (int i = 0; i < 3; ++i) {
            RF moved = apply_image(g, spec.new_coords[static_cast<size_t>(i)]);
            auto expr = express_via_witness(st, spec.new_coords, spec.wit, moved);
            require(expr.has_value(), "NotExpressible",
                    "induced image is not a function of the new coordinates");
            ng.im[static_cast<size_t>(i)] = *expr;
        }
        int found = -1;
        for (size_t j = 0; j < induced.size(); ++j)
            if (induced[j].same_as(ng)) {
                found = static_cast<int>(j);
                break;
            }
        if (found < 0) {
            induced.push_back(ng);
            found = static_cast<int>(induced.size()) - 1;
        }
        fwd[gi] = found;
    }
    push_hypo(step.hypotheses, "quotient_halves_group", induced.size() * 2 == st.residual.size());
    require(induced[0].is_identity(), "QuotientInternal", "identity not preserved by quotient");

    step.residual_after = induced;
    step.forward = fwd;

    std::array<RF, 3> abs;
    for (int i = 0; i < 3; ++i) abs[static_cast<size_t>(i)] = subst3(spec.new_coords[static_cast<size_t>(i)], st.coords_abs);
    st.coords_abs = abs;
    st.residual = step.residual_after;
    st.cert.steps.push_back(std::move(step));
}

// ---------------------------------------------------------------------------
// C2 builders

namespace {

int third_slot(int a, int b) { return 3 - a - b; }

} // namespace

C2Spec make_involution_pair(PipelineState& st, size_t s_index, int slot_x, int slot_y, const RF& a,
                            const RF& b) {
    const GroupImage& s = st.residual[s_index];
    int slot_z = third_slot(slot_x, slot_y);
    RF x = st.var(slot_x), y = st.var(slot_y), z = st.var(slot_z);

    C2Spec spec;
    spec.s_index = s_index;
    spec.kind = StepKind::InvolutionPair;
    spec.note = "two-slot inversion pair";

    bool shape = s.im[static_cast<size_t>(slot_x)].equals(a / x) &&
                 s.im[static_cast<size_t>(slot_y)].equals(b / y) && s.im[static_cast<size_t>(slot_z)].equals(z);
    push_hypo(spec.extra, "inversion_pair_shape", shape);
    push_hypo(spec.extra, "coefficients_nonzero", !a.is_zero() && !b.is_zero());
    push_hypo(spec.extra, "coefficients_carried_only",
              !any_var(a, slot_x) && !any_var(a, slot_y) && !any_var(b, slot_x) && !any_var(b, slot_y));
    push_hypo(spec.extra, "coefficients_invariant",
              apply_image(s, a).equals(a) && apply_image(s, b).equals(b));

    RF one = st.cst(Rat(1));
    RF denom = x * y - a * b / (x * y);
    RF u = (x - a / x) / denom;
    RF v = (y - b / y) / denom;
    spec.new_coords[static_cast<size_t>(slot_x)] = u;
    spec.new_coords[static_cast<size_t>(slot_y)] = v;
    spec.new_coords[static_cast<size_t>(slot_z)] = z;

    // a, b only involve the carried slot, whose variable index is unchanged
    const RF& a_n = a;
    const RF& b_n = b;
    RF un = st.var(slot_x), vn = st.var(slot_y);

    RF sum_x = (-(b_n * un * un) + a_n * vn * vn + one) / vn;         // x + a/x
    RF sum_y = (b_n * un * un - a_n * vn * vn + one) / un;            // y + b/y
    RF sum_xy = (-(b_n * un * un) - a_n * vn * vn + one) / (un * vn); // xy + ab/(xy)

    push_hypo(spec.extra, "identity_sum_x", subst3(sum_x, spec.new_coords).equals(x + a / x));
    push_hypo(spec.extra, "identity_sum_y", subst3(sum_y, spec.new_coords).equals(y + b / y));
    push_hypo(spec.extra, "identity_sum_xy",
              subst3(sum_xy, spec.new_coords).equals(x * y + a * b / (x * y)));
    RF lhs = (x - a / x) / (b * x / y - a * y / x);
    RF rhs = subst3(un / (b_n * un * un - a_n * vn * vn), spec.new_coords);
    push_hypo(spec.extra, "identity_quotient", lhs.equals(rhs));

    spec.wit.theta = x;
    spec.wit.p = -sum_x;
    spec.wit.q = a_n;
    auto lift = [&](const RF& f) { return f.remap_vars({0, 1, 2}, 4); };
    RF th = RF::variable(st.T(), 4, 3);
    RF u4 = RF::variable(st.T(), 4, slot_x);
    RF v4 = RF::variable(st.T(), 4, slot_y);
    RF half = RF::constant(st.T(), 4, Rat(1, 2));
    spec.wit.recon[static_cast<size_t>(slot_x)] = th;
    // y = [ (y + b/y) + v (x - a/x) / u ] / 2
    spec.wit.recon[static_cast<size_t>(slot_y)] =
        (lift(sum_y) + v4 * (th + th - lift(sum_x)) / u4) * half;
    spec.wit.recon[static_cast<size_t>(slot_z)] = RF::variable(st.T(), 4, slot_z);
    return spec;
}

C2Spec make_twisted_pair(PipelineState& st, size_t s_index, int slot_x, int slot_y, const RF& a,
                         const RF& b1, const RF& b2) {
    const GroupImage& s = st.residual[s_index];
    int slot_z = third_slot(slot_x, slot_y);
    RF x = st.var(slot_x), y = st.var(slot_y), z = st.var(slot_z);
    RF b = b1 * (x + a / x) + b2;

    C2Spec spec;
    spec.s_index = s_index;
    spec.kind = StepKind::TwistedPair;
    spec.note = "inversion pair with x-dependent twist";

    bool shape = s.im[static_cast<size_t>(slot_x)].equals(a / x) &&
                 s.im[static_cast<size_t>(slot_y)].equals(b / y) && s.im[static_cast<size_t>(slot_z)].equals(z);
    push_hypo(spec.extra, "twisted_pair_shape", shape);
    push_hypo(spec.extra, "a_b1_nonzero", !(a * b1).is_zero());
    push_hypo(spec.extra, "coefficients_carried_only",
              !any_var(a, slot_x) && !any_var(a, slot_y) && !any_var(b1, slot_x) &&
                  !any_var(b1, slot_y) && !any_var(b2, slot_x) && !any_var(b2, slot_y));

    RF one = st.cst(Rat(1));
    RF denom = x * y - a * b / (x * y);
    RF u = (x - a / x) / denom;
    RF v = (y - b / y) / denom;
    spec.new_coords[static_cast<size_t>(slot_x)] = u;
    spec.new_coords[static_cast<size_t>(slot_y)] = v;
    spec.new_coords[static_cast<size_t>(slot_z)] = z;

    RF un = st.var(slot_x), vn = st.var(slot_y);
    RF c_new = (a * vn * vn - b2 * un * un + one) / (vn + b1 * un * un);
    RF b_new = b1 * c_new + b2;
    push_hypo(spec.extra, "identity_sum_x", subst3(c_new, spec.new_coords).equals(x + a / x));
    RF sum_y_new = (b_new * un * un - a * vn * vn + one) / un;
    push_hypo(spec.extra, "identity_sum_y", subst3(sum_y_new, spec.new_coords).equals(y + b / y));

    spec.wit.theta = x;
    spec.wit.p = -c_new;
    spec.wit.q = a;
    auto lift = [&](const RF& f) { return f.remap_vars({0, 1, 2}, 4); };
    RF th = RF::variable(st.T(), 4, 3);
    RF u4 = RF::variable(st.T(), 4, slot_x);
    RF v4 = RF::variable(st.T(), 4, slot_y);
    RF half = RF::constant(st.T(), 4, Rat(1, 2));
    spec.wit.recon[static_cast<size_t>(slot_x)] = th;
    spec.wit.recon[static_cast<size_t>(slot_y)] =
        (lift(sum_y_new) + v4 * (th + th - lift(c_new)) / u4) * half;
    spec.wit.recon[static_cast<size_t>(slot_z)] = RF::variable(st.T(), 4, slot_z);
    return spec;
}

C2Spec make_signed_diag(PipelineState& st, size_t s_index) {
    const TowerField* t = st.T();
    const GroupImage& s = st.residual[s_index];

    C2Spec spec;
    spec.s_index = s_index;
    spec.kind = StepKind::MinPolyDescent;
    spec.note = "slotwise involution: fixed / negated / inverted slots";

    enum Kind { F, N, V };
    std::array<Kind, 3> kind{};
    std::array<RF, 3> A{};
    bool shape = true;
    for (int i = 0; i < 3; ++i) {
        RF xi = st.var(i);
        const RF& im = s.im[static_cast<size_t>(i)];
        if (im.equals(xi))
            kind[static_cast<size_t>(i)] = F;
        else if (im.equals(-xi))
            kind[static_cast<size_t>(i)] = N;
        else {
            RF prod = im * xi;
            if (!any_var(prod, i)) {
                kind[static_cast<size_t>(i)] = V;
                A[static_cast<size_t>(i)] = prod;
            } else
                shape = false;
        }
    }
    push_hypo(spec.extra, "slotwise_involution_shape", shape);

    int anchor = -1;
    for (int i = 0; i < 3 && anchor < 0; ++i)
        if (kind[static_cast<size_t>(i)] == V) anchor = i;
    bool anchor_is_v = anchor >= 0;
    if (anchor < 0)
        for (int i = 0; i < 3 && anchor < 0; ++i)
            if (kind[static_cast<size_t>(i)] == N) anchor = i;
    require(anchor >= 0, "BadInput", "involution acts trivially");

    bool coeff_ok = true;
    for (int i = 0; i < 3; ++i)
        if (kind[static_cast<size_t>(i)] == V)
            for (int j = 0; j < 3; ++j)
                if (kind[static_cast<size_t>(j)] != F && any_var(A[static_cast<size_t>(i)], j)) coeff_ok = false;
    push_hypo(spec.extra, "inversion_coefficients_carried", coeff_ok);

    RF xa = st.var(anchor);
    RF anti_a = anchor_is_v ? xa - A[static_cast<size_t>(anchor)] / xa : xa + xa;
    RF th = RF::variable(t, 4, 3);

    std::array<RF, 3> nc;
    QuadraticWitness wit;
    wit.theta = xa;
    RF da_new;
    if (anchor_is_v) {
        nc[static_cast<size_t>(anchor)] = xa + A[static_cast<size_t>(anchor)] / xa;
        RF ha_n = st.var(anchor);
        wit.p = -ha_n;
        wit.q = A[static_cast<size_t>(anchor)];
        da_new = ha_n * ha_n - A[static_cast<size_t>(anchor)].mul_coeff(t->from_rational(4));
    } else {
        nc[static_cast<size_t>(anchor)] = xa * xa;
        wit.p = RF::constant(t, 3, Rat(0));
        wit.q = -st.var(anchor);
        da_new = st.var(anchor).mul_coeff(t->from_rational(4));
    }
    RF two_th = th + th;
    RF anti_a_4 = anchor_is_v ? two_th - RF::variable(t, 4, anchor) : two_th;
    wit.recon[static_cast<size_t>(anchor)] = th;

    for (int i = 0; i < 3; ++i) {
        if (i == anchor) continue;
        switch (kind[static_cast<size_t>(i)]) {
            case F:
                nc[static_cast<size_t>(i)] = st.var(i);
                wit.recon[static_cast<size_t>(i)] = RF::variable(t, 4, i);
                break;
            case N:
                nc[static_cast<size_t>(i)] = st.var(i) * anti_a;
                wit.recon[static_cast<size_t>(i)] = RF::variable(t, 4, i) / anti_a_4;
                break;
            case V: {
                // fuse (h_i, m_i) through the rational point (m, h) = (0, r_i)
                // of m^2 = d_a (h^2 - 4 A_i), with r_i = 2 sqrt(A_i)
                require(A[static_cast<size_t>(i)].is_constant(), "BadInput",
                        "second inverted slot needs a constant coefficient");
                FieldElement ai = A[static_cast<size_t>(i)].constant_value();
                FieldElement ri = t->mul_rat(st.K->adjoin_sqrt(ai), 2);
                RF anti_i = st.var(i) - A[static_cast<size_t>(i)] / st.var(i);
                RF h_i = st.var(i) + A[static_cast<size_t>(i)] / st.var(i);
                RF lam = (anti_a * anti_i) / (h_i - st.cst(ri));
                nc[static_cast<size_t>(i)] = lam;
                RF lam_n = st.var(i);
                RF h_n = (lam_n * lam_n + da_new).mul_coeff(ri) / (lam_n * lam_n - da_new);
                RF lift_h = h_n.remap_vars({0, 1, 2}, 4);
                RF lift_lam = RF::variable(t, 4, i);
                RF anti_4 = lift_lam * (lift_h - RF::constant(t, 4, ri)) / anti_a_4;
                wit.recon[static_cast<size_t>(i)] = (lift_h + anti_4) * RF::constant(t, 4, Rat(1, 2));
                break;
            }
            default:
                break;
        }
    }
    spec.new_coords = nc;
    spec.wit = wit;
    return spec;
}

C2Spec make_swap_pair(PipelineState& st, size_t s_index, int slot_p, int slot_q) {
    const TowerField* t = st.T();
    const GroupImage& s = st.residual[s_index];
    int slot_z = third_slot(slot_p, slot_q);
    RF p = st.var(slot_p), q = st.var(slot_q), z = st.var(slot_z);

    C2Spec spec;
    spec.s_index = s_index;
    spec.kind = StepKind::MinPolyDescent;
    spec.note = "swap of two slots: elementary symmetric coordinates";
    bool shape = s.im[static_cast<size_t>(slot_p)].equals(q) && s.im[static_cast<size_t>(slot_q)].equals(p) &&
                 s.im[static_cast<size_t>(slot_z)].equals(z);
    push_hypo(spec.extra, "swap_shape", shape);

    spec.new_coords[static_cast<size_t>(slot_p)] = p + q;
    spec.new_coords[static_cast<size_t>(slot_q)] = p * q;
    spec.new_coords[static_cast<size_t>(slot_z)] = z;
    spec.wit.theta = p;
    spec.wit.p = -st.var(slot_p);
    spec.wit.q = st.var(slot_q);
    RF th = RF::variable(t, 4, 3);
    spec.wit.recon[static_cast<size_t>(slot_p)] = th;
    spec.wit.recon[static_cast<size_t>(slot_q)] = RF::variable(t, 4, slot_p) - th;
    spec.wit.recon[static_cast<size_t>(slot_z)] = RF::variable(t, 4, slot_z);
    return spec;
}

// ---------------------------------------------------------------------------
// scalar kernel inside a pipeline

namespace {

std::optional<MonomialGroup> residual_as_monomial(const PipelineState& st) {
    MonomialGroup g;
    for (const auto& e : st.residual) {
        MonomialAutomorphism a;
        a.mat = IntMat(3, 3);
        a.coeffs.resize(3);
        for (int j = 0; j < 3; ++j) {
            const RF& im = e.im[static_cast<size_t>(j)];
            if (im.num().term_count() != 1 || im.den().term_count() != 1) return std::nullopt;
            auto nk = im.num().leading_key();
            auto dk = im.den().leading_key();
            for (int i = 0; i < 3; ++i) {
                long en = Poly::exp_of(nk, i), ed = Poly::exp_of(dk, i);
                if (en && ed) return std::nullopt;
                a.mat.at(i, j) = en - ed;
            }
            a.coeffs[static_cast<size_t>(j)] =
                st.T()->div(im.num().leading_coeff(), im.den().leading_coeff());
        }
        long long d = a.mat.det();
        if (d != 1 && d != -1) return std::nullopt;
        g.elements.push_back(a);
    }
    for (const auto& e : g.elements)
        if (!e.is_identity_map()) g.generators.push_back(e);
    return g;
}

} // namespace

void step_scalar_kernel(PipelineState& st) {
    auto mono = residual_as_monomial(st);
    require(mono.has_value(), "BadInput", "residual is not monomial; cannot reduce scalar kernel");
    FaithfulReduction red = reduce_to_faithful(*mono);
    require(!red.steps.empty(), "BadInput", "no scalar kernel to reduce");
    for (auto step : red.steps) {
        std::array<RF, 3> abs;
        for (int i = 0; i < 3; ++i)
            abs[static_cast<size_t>(i)] = subst3(step.images[static_cast<size_t>(i)], st.coords_abs);
        st.coords_abs = abs;
        st.residual = step.residual_after;
        st.cert.steps.push_back(std::move(step));
    }
}

// ---------------------------------------------------------------------------
// min poly descent

void step_min_poly(PipelineState& st, int slot, const std::string& note) {
    const TowerField* t = st.T();
    std::vector<int> L;
    for (int v = 0; v < 3; ++v)
        if (v != slot) L.push_back(v);

    std::vector<HypoCheck> hypos;
    bool shape = true;
    for (const auto& g : st.residual) {
        for (int lv : L)
            if (any_var(g.im[static_cast<size_t>(lv)], slot)) shape = false;
        const RF& im = g.im[static_cast<size_t>(slot)];
        if (im.den().uses_var(slot) || im.num().degree(slot) > 1) shape = false;
    }
    push_hypo(hypos, "affine_shape_over_base", shape);

    std::vector<size_t> kernel;
    for (size_t gi = 0; gi < st.residual.size(); ++gi) {
        bool fixes_L = true;
        for (int lv : L)
            if (!st.residual[gi].im[static_cast<size_t>(lv)].equals(st.var(lv))) fixes_L = false;
        if (fixes_L) kernel.push_back(gi);
    }
    require(kernel.size() > 1, "BadInput", "restriction kernel is trivial; use linearize instead");

    RF f;
    long found_deg = 0;
    for (long d = 1; d <= static_cast<long>(st.residual.size()) && found_deg == 0; ++d) {
        std::vector<RF> lambdas;
        lambdas.push_back(st.cst(Rat(1)));
        for (int lv : L) lambdas.push_back(st.var(lv));
        for (int tries = 0; tries < 4; ++tries) {
            RF lam = st.cst(Rat(st.rng.range(-4, 4)));
            for (int lv : L) lam = lam + st.var(lv).mul_coeff(t->from_rational(Rat(st.rng.range(-4, 4))));
            lambdas.push_back(lam);
        }
        for (const auto& lam : lambdas) {
            RF base = lam * st.var(slot).pow(d);
            RF acc = st.cst(Rat(0));
            for (const auto& g : st.residual) acc = acc + apply_image(g, base);
            if (acc.num().degree(slot) == d && !acc.den().uses_var(slot)) {
                f = acc;
                found_deg = d;
                break;
            }
        }
    }
    require(found_deg > 0, "NoInvariantFound", "no nonconstant invariant polynomial found");
    push_hypo(hypos, "invariant_degree_equals_kernel_order",
              static_cast<size_t>(found_deg) == kernel.size());

    bool finv = true;
    for (const auto& g : st.residual)
        if (!apply_image(g, f).equals(f)) finv = false;
    push_hypo(hypos, "invariant_fixed_by_group", finv);

    CertStep step;
    step.kind = StepKind::MinPolyDescent;
    step.note = note;
    for (int v = 0; v < 3; ++v) step.images[static_cast<size_t>(v)] = v == slot ? f : st.var(v);
    step.degree_factor = static_cast<int>(kernel.size());
    step.hypotheses = hypos;

    std::vector<GroupImage> induced;
    std::vector<int> fwd(st.residual.size());
    for (size_t gi = 0; gi < st.residual.size(); ++gi) {
        GroupImage ng;
        for (int v = 0; v < 3; ++v)
            ng.im[static_cast<size_t>(v)] = v == slot ? st.var(slot) : st.residual[gi].im[static_cast<size_t>(v)];
        int found = -1;
        for (size_t j = 0; j < induced.size(); ++j)
            if (induced[j].same_as(ng)) {
                found = static_cast<int>(j);
                break;
            }
        if (found < 0) {
            induced.push_back(ng);
            found = static_cast<int>(induced.size()) - 1;
        }
        fwd[gi] = found;
    }
    require(induced.size() * kernel.size() == st.residual.size(), "QuotientInternal",
            "kernel size does not divide out evenly");
    require(induced[0].is_identity(), "QuotientInternal", "identity not preserved");
    step.residual_after = induced;
    step.forward = fwd;

    std::array<RF, 3> abs;
    for (int i = 0; i < 3; ++i)
        abs[static_cast<size_t>(i)] = subst3(step.images[static_cast<size_t>(i)], st.coords_abs);
    st.coords_abs = abs;
    st.residual = induced;
    st.cert.steps.push_back(std::move(step));
}

// ---------------------------------------------------------------------------
// conic descent

C2Spec make_conic(PipelineState& st, size_t s_index, int slot_alpha, int slot_x, int slot_y,
                  const RF& b, const RF& c, const ConicPoint& point) {
    const TowerField* t = st.T();
    const GroupImage& s = st.residual[s_index];
    RF al = st.var(slot_alpha), x = st.var(slot_x), y = st.var(slot_y);

    C2Spec spec;
    spec.s_index = s_index;
    spec.kind = StepKind::ConicDescent;
    spec.note = "conic bundle trivialized from a rational point";

    RF a = al * al;
    // b, c and the point are supplied as functions of the a-variable: they may
    // only use slot_alpha's variable, which after descent stands for a itself
    std::array<RF, 3> a_for_alpha{st.var(0), st.var(1), st.var(2)};
    a_for_alpha[static_cast<size_t>(slot_alpha)] = a;
    auto a_only = [&](const RF& f) { return !any_var(f, slot_x) && !any_var(f, slot_y); };
    push_hypo(spec.extra, "base_data_in_a_variable",
              a_only(b) && a_only(c) && a_only(point.S0) && a_only(point.T0) && a_only(point.X0));
    RF bn = b, cn = c;
    RF b_old = subst3(b, a_for_alpha), c_old = subst3(c, a_for_alpha);

    bool shape = s.im[static_cast<size_t>(slot_alpha)].equals(-al) &&
                 s.im[static_cast<size_t>(slot_x)].equals(x) &&
                 (s.im[static_cast<size_t>(slot_y)] * y).equals(b_old * (x * x - c_old));
    push_hypo(spec.extra, "conic_action_shape", shape);
    push_hypo(spec.extra, "b_nonzero", !b.is_zero());

    RF S0a = subst3(point.S0, a_for_alpha), T0a = subst3(point.T0, a_for_alpha),
       X0a = subst3(point.X0, a_for_alpha);
    RF conic_val = S0a * S0a - T0a * T0a / a - b_old * X0a * X0a * st.cst(Rat(4));
    push_hypo(spec.extra, "point_on_conic", conic_val.is_zero() && !X0a.is_zero());

    RF sy = s.im[static_cast<size_t>(slot_y)];
    RF sp = y + sy;
    RF tp = al * (y - sy);
    RF rel = sp * sp - tp * tp / a - (x * x - c_old) * b_old * st.cst(Rat(4));
    push_hypo(spec.extra, "fixed_invariants_satisfy_conic", rel.is_zero());

    RF g1 = sp - (S0a / X0a) * x;
    RF g2 = tp - (T0a / X0a) * x;
    spec.new_coords[static_cast<size_t>(slot_alpha)] = a;
    spec.new_coords[static_cast<size_t>(slot_x)] = g1;
    spec.new_coords[static_cast<size_t>(slot_y)] = g2;

    RF an = st.var(slot_alpha), g1n = st.var(slot_x), g2n = st.var(slot_y);
    RF d1 = point.S0 / point.X0, d2 = point.T0 / point.X0;
    RF four = RF::constant(t, 3, Rat(4));
    RF lin = (g1n * d1 - g2n * d2 / an) * st.cst(Rat(2));
    RF cst0 = g1n * g1n - g2n * g2n / an + four * bn * cn;
    require(!lin.is_zero(), "ConicDegenerate", "projection line family is degenerate");
    RF mu = -cst0 / lin;
    RF sp_n = g1n + d1 * mu;
    RF tp_n = g2n + d2 * mu;
    RF roundtrip = sp_n * sp_n - tp_n * tp_n / an - four * bn * (mu * mu - cn);
    push_hypo(spec.extra, "parametrization_round_trip", roundtrip.is_zero());

    spec.wit.theta = al;
    spec.wit.p = RF::constant(t, 3, Rat(0));
    spec.wit.q = -an;
    auto lift = [&](const RF& f) { return f.remap_vars({0, 1, 2}, 4); };
    RF th = RF::variable(t, 4, 3);
    spec.wit.recon[static_cast<size_t>(slot_alpha)] = th;
    spec.wit.recon[static_cast<size_t>(slot_x)] = lift(mu);
    spec.wit.recon[static_cast<size_t>(slot_y)] =
        (lift(sp_n) + lift(tp_n) / th) * RF::constant(t, 4, Rat(1, 2));
    return spec;
}

std::optional<ConicPoint> conic_point_search(const TowerField* t, int a_var, const RF& b,
                                             const RF& c) {
    (void)c;
    RF a = RF::variable(t, 3, a_var);
    std::vector<FieldElement> consts{t->from_rational(0),  t->from_rational(1),
                                     t->from_rational(-1), t->from_rational(2),
                                     t->from_rational(-2), t->i(),
                                     t->neg(t->i()),       t->mul_rat(t->i(), 2),
                                     t->mul_rat(t->i(), -2)};
    auto mk = [&](const FieldElement& hi, const FieldElement& lo) {
        return a.mul_coeff(hi) + RF::constant(t, 3, lo);
    };
    for (const auto& s1 : consts)
        for (const auto& s0 : consts)
            for (const auto& t1 : consts)
                for (const auto& t0 : consts) {
                    RF S0 = mk(s1, s0), T0 = mk(t1, t0), X0 = RF::constant(t, 3, Rat(1));
                    if (S0.is_zero() && T0.is_zero()) continue;
                    RF val = S0 * S0 - T0 * T0 / a - b * X0 * X0 * RF::constant(t, 3, Rat(4));
                    if (val.is_zero()) return ConicPoint{S0, T0, X0};
                }
    return std::nullopt;
}

int multiquadratic_degree(const TowerField* t, const std::array<FieldElement, 3>& as) {
    std::vector<FieldElement> basis;
    for (const auto& ai : as) {
        require(!ai.is_zero(), "ZeroCoefficient", "obstruction coefficient is zero");
        bool dependent = false;
        size_t n = basis.size();
        for (size_t mask = 0; mask < (static_cast<size_t>(1) << n) && !dependent; ++mask) {
            FieldElement prod = ai;
            for (size_t j = 0; j < n; ++j)
                if (mask & (static_cast<size_t>(1) << j)) prod = t->mul(prod, basis[j]);
            if (t->is_square(prod)) dependent = true;
        }
        if (!dependent) basis.push_back(ai);
    }
    return 1 << basis.size();
}

} // namespace monofix
