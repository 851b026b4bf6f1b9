#ifndef MONOFIX_TOWER_HPP
#define MONOFIX_TOWER_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "monofix/errors.hpp"

namespace monofix {

using Rat = mpq_class;

class TowerField;

// Element of a growable tower Q(s_0, s_1, ...) with s_k^2 = r_k, where each
// radicand r_k lives in the subtower below level k. The basis consists of the
// square-free products of the s_k, indexed by bitmask: basis(m) = prod of s_k
// for k in m. Coefficients are exact rationals; zero terms are never stored,
// so equal elements have identical maps.
class FieldElement {
public:
    FieldElement() : tower_(nullptr) {}
    FieldElement(const TowerField* t, const Rat& r) : tower_(t) {
        if (r != 0) coeffs_[0] = r;
    }

    const TowerField* tower() const { return tower_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_rational() const {
        return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0);
    }
    Rat rational_value() const {
        if (coeffs_.empty()) return Rat(0);
        require(is_rational(), "NotRational", "element has radical part");
        return coeffs_.begin()->second;
    }
    bool is_one() const { return is_rational() && rational_value() == 1; }

    // highest adjunction index used, or -1 for rationals
    int top_level() const;

    const std::map<uint32_t, Rat>& coeffs() const { return coeffs_; }

    bool operator==(const FieldElement& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    // arbitrary strict order, used for canonical printing / map keys
    bool operator<(const FieldElement& o) const;

    friend class TowerField;

private:
    const TowerField* tower_;
    std::map<uint32_t, Rat> coeffs_;
};

class TowerField {
public:
    // Default tower starts with sqrt(-1) adjoined (level 0); nearly every
    // construction needs it and pre-adjoining keeps case code simple.
    TowerField();

    // Bare rationals, and no automatic adjunction: adjoin_sqrt on a
    // non-square fails instead of growing the tower.
    static std::shared_ptr<TowerField> strict_rationals();

    bool strict() const { return strict_; }
    int levels() const { return static_cast<int>(radicands_.size()); }
    const FieldElement& radicand(int k) const { return radicands_[static_cast<size_t>(k)]; }

    FieldElement zero() const { return FieldElement(this, 0); }
    FieldElement one() const { return FieldElement(this, 1); }
    FieldElement from_rational(const Rat& r) const { return FieldElement(this, r); }
    // the adjoined square root s_k itself
    FieldElement generator(int k) const;
    FieldElement i() const { return generator(0); } // sqrt(-1) in the default tower

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement mul_rat(const FieldElement& a, const Rat& r) const;
    FieldElement inv(const FieldElement& a) const;
    FieldElement div(const FieldElement& a, const FieldElement& b) const { return mul(a, inv(b)); }
    FieldElement pow(const FieldElement& a, long e) const;

    // exact square root within the current tower, if one exists
    std::optional<FieldElement> sqrt_in_tower(const FieldElement& v) const;
    bool is_square(const FieldElement& v) const { return v.is_zero() || sqrt_in_tower(v).has_value(); }

    // Returns s with s*s == radicand. Reuses an existing root when the
    // radicand is already a square; otherwise appends one adjunction (the
    // radicand is normalized by stripping the square part of its rational
    // content first). In strict mode a non-square radicand is an error.
    FieldElement adjoin_sqrt(const FieldElement& radicand);

    // smallest k >= 1 with a^k == 1, or nullopt if k would exceed `bound`
    std::optional<int> multiplicative_order(const FieldElement& a, int bound = 64) const;

    // conjugation s_k -> -s_k; valid only if no later radicand involves s_k
    FieldElement conjugate_level(const FieldElement& a, int k) const;
    bool conjugation_valid(int k) const;

private:
    explicit TowerField(bool strict) : strict_(strict) {}

    FieldElement mul_basis(uint32_t ma, uint32_t mb) const;
    void split(const FieldElement& v, int m, FieldElement& b, FieldElement& c) const;
    std::optional<FieldElement> sqrt_level(const FieldElement& v, int m) const;

    bool strict_ = false;
    std::vector<FieldElement> radicands_;
    // product cache for basis monomials; mutable: pure memoization
    mutable std::map<uint64_t, FieldElement> basis_cache_;
};

} // namespace monofix

#endif
