#ifndef MONOFIX_POLY_HPP
#define MONOFIX_POLY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "monofix/rng.hpp"
#include "monofix/tower.hpp"

namespace monofix {

// Sparse multivariate polynomial over the tower field. Exponent tuples are
// packed into a uint64 key, 10 bits per variable, variable 0 in the highest
// bits so integer key order equals lex order with x1 > x2 > ...
class Poly {
public:
    static constexpr int kMaxVars = 6;
    static constexpr int kExpBits = 10;
    static constexpr long kExpMax = (1 << kExpBits) - 1;

    Poly() : tower_(nullptr), nvars_(0) {}
    Poly(const TowerField* t, int nvars) : tower_(t), nvars_(nvars) {}

    static Poly constant(const TowerField* t, int nvars, const FieldElement& c);
    static Poly constant(const TowerField* t, int nvars, const Rat& c);
    static Poly variable(const TowerField* t, int nvars, int i, long e = 1);

    static uint64_t pack(const std::vector<long>& exp);
    static std::vector<long> unpack(uint64_t key, int nvars);
    static long exp_of(uint64_t key, int var) {
        return static_cast<long>((key >> ((kMaxVars - 1 - var) * kExpBits)) & kExpMax);
    }

    const TowerField* tower() const { return tower_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
    FieldElement constant_value() const;
    size_t term_count() const { return terms_.size(); }
    const std::map<uint64_t, FieldElement>& terms() const { return terms_; }

    void add_term(uint64_t key, const FieldElement& c);

    long degree(int var) const;
    bool uses_var(int var) const { return degree(var) > 0; }
    int top_var() const; // highest-index variable actually present, or -1

    // lex-leading coefficient / term
    const FieldElement& leading_coeff() const;
    uint64_t leading_key() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly mul_coeff(const FieldElement& c) const;
    Poly pow(long e) const;
    Poly derivative(int var) const;
    FieldElement eval(const std::vector<FieldElement>& point) const;
    // partial evaluation of one variable
    Poly eval_var(int var, const FieldElement& value) const;
    // evaluate all variables except `keep`, producing a univariate coefficient list
    std::vector<FieldElement> eval_except(const std::vector<FieldElement>& point, int keep) const;

    // exact division: returns nullopt if o does not divide this
    std::optional<Poly> divided_by(const Poly& o) const;

    // coefficients of this viewed as univariate in `var` (index = power)
    std::vector<Poly> coeffs_in(int var) const;
    static Poly from_coeffs_in(const TowerField* t, int nvars, int var, const std::vector<Poly>& cs);

    // reinterpret over a different variable count; map[i] = new index of old var i
    Poly remap_vars(const std::vector<int>& map, int new_nvars) const;
    Poly map_coeffs(const std::function<FieldElement(const FieldElement&)>& fn) const;

private:
    const TowerField* tower_;
    int nvars_;
    std::map<uint64_t, FieldElement> terms_;
};

// gcd over the tower field, monic w.r.t. lex-leading coefficient.
// `rng` drives the specialization fast path; pass nullptr to force the
// primitive-PRS route.
Poly poly_gcd(const Poly& f, const Poly& g, Rng* rng = nullptr);

} // namespace monofix

#endif
