#ifndef MONOFIX_RATFUNC_HPP
#define MONOFIX_RATFUNC_HPP

#include <memory>
#include <string>

#include "monofix/field_io.hpp"
#include "monofix/poly.hpp"

namespace monofix {

// Reduced fraction of polynomials. Canonical form: gcd(num, den) = 1 and the
// denominator's lex-leading coefficient is 1. Zero is 0/1.
class RationalFunction {
public:
    RationalFunction() = default;
    RationalFunction(Poly num, Poly den, Rng* rng = nullptr);

    static RationalFunction from_poly(const Poly& p);
    static RationalFunction constant(const TowerField* t, int nvars, const FieldElement& c);
    static RationalFunction constant(const TowerField* t, int nvars, const Rat& c);
    static RationalFunction variable(const TowerField* t, int nvars, int i);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const TowerField* tower() const { return num_.tower(); }
    int nvars() const { return num_.nvars(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    FieldElement constant_value() const;

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator-() const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction inv() const;
    RationalFunction pow(long e) const;
    RationalFunction mul_coeff(const FieldElement& c) const;

    // exact equality via cross-multiplication (no normalization needed)
    bool equals(const RationalFunction& o) const;
    bool operator==(const RationalFunction& o) const { return equals(o); }

    RationalFunction derivative(int var) const;
    // evaluate; nullopt if the denominator vanishes at the point
    std::optional<FieldElement> eval(const std::vector<FieldElement>& point) const;

    RationalFunction remap_vars(const std::vector<int>& map, int new_nvars) const;
    RationalFunction map_coeffs(const std::function<FieldElement(const FieldElement&)>& fn) const;

private:
    Poly num_, den_;
};

using RF = RationalFunction;

// Substitution x_i -> images[i], with an optional coefficient involution
// (tower conjugation at one adjunction level) applied to all coefficients
// first. When `inverse` is set the map is certified birational.
struct SubstitutionMap {
    std::vector<RF> images;
    std::optional<int> coeff_auto;
    std::shared_ptr<const SubstitutionMap> inverse;

    int source_nvars() const { return static_cast<int>(images.size()); }
    int target_nvars() const { return images.empty() ? 0 : images[0].nvars(); }
};

SubstitutionMap identity_map(const TowerField* t, int nvars);

// f(images), exact. Throws IndeterminateForm if the substituted denominator
// vanishes identically.
RF rf_substitute(const RF& f, const SubstitutionMap& m);

// (m_after ∘ m_first): apply m_first, then m_after
SubstitutionMap compose(const SubstitutionMap& m_after, const SubstitutionMap& m_first);

// checks that m and m.inverse really do round-trip all variables
bool roundtrip_ok(const SubstitutionMap& m);

// rank of the Jacobian of fs at random rational points (numerators and
// denominators bounded by 10^4), up to `retries` attempts; returns the
// maximum rank observed. Rank == nvars certifies algebraic independence.
int jacobian_rank(const std::vector<RF>& fs, Rng& rng, int retries = 20);

// textual grammar: variables x1..xn, coefficient literals per the field
// grammar, operators + - * / ^
RF parse_rf(TowerField& t, int nvars, const std::string& text);
std::string to_string(const RF& f);
std::string to_string(const Poly& p);

} // namespace monofix

#endif
