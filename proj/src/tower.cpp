#include "monofix/tower.hpp"

#include <algorithm>

namespace monofix {

int FieldElement::top_level() const {
    int top = -1;
    for (const auto& [m, c] : coeffs_) {
        (void)c;
        for (int k = 0; k < 32; ++k)
            if (m & (1u << k)) top = std::max(top, k);
    }
    return top;
}

bool FieldElement::operator<(const FieldElement& o) const {
    auto it = coeffs_.begin(), jt = o.coeffs_.begin();
    for (; it != coeffs_.end() && jt != o.coeffs_.end(); ++it, ++jt) {
        if (it->first != jt->first) return it->first < jt->first;
        int c = cmp(it->second, jt->second);
        if (c != 0) return c < 0;
    }
    return it == coeffs_.end() && jt != o.coeffs_.end();
}

TowerField::TowerField() {
    adjoin_sqrt(from_rational(-1));
}

std::shared_ptr<TowerField> TowerField::strict_rationals() {
    return std::shared_ptr<TowerField>(new TowerField(true));
}

FieldElement TowerField::generator(int k) const {
    require(k >= 0 && k < levels(), "BadLevel", "no such adjunction");
    FieldElement e;
    e.tower_ = this;
    e.coeffs_[1u << k] = 1;
    return e;
}

FieldElement TowerField::add(const FieldElement& a, const FieldElement& b) const {
    FieldElement r = a;
    r.tower_ = this;
    for (const auto& [m, c] : b.coeffs_) {
        Rat& slot = r.coeffs_[m];
        slot += c;
        if (slot == 0) r.coeffs_.erase(m);
    }
    return r;
}

FieldElement TowerField::sub(const FieldElement& a, const FieldElement& b) const {
    return add(a, neg(b));
}

FieldElement TowerField::neg(const FieldElement& a) const {
    FieldElement r = a;
    r.tower_ = this;
    for (auto& [m, c] : r.coeffs_) {
        (void)m;
        c = -c;
    }
    return r;
}

FieldElement TowerField::mul_rat(const FieldElement& a, const Rat& q) const {
    if (q == 0) return zero();
    FieldElement r = a;
    r.tower_ = this;
    for (auto& [m, c] : r.coeffs_) {
        (void)m;
        c *= q;
    }
    return r;
}

// product of two basis monomials. Shared bits square into radicands, which
// live strictly below the shared top bit, so the recursion terminates.
FieldElement TowerField::mul_basis(uint32_t ma, uint32_t mb) const {
    if ((ma & mb) == 0) {
        FieldElement e;
        e.tower_ = this;
        e.coeffs_[ma | mb] = 1;
        return e;
    }
    uint64_t key = (static_cast<uint64_t>(std::min(ma, mb)) << 32) | std::max(ma, mb);
    auto it = basis_cache_.find(key);
    if (it != basis_cache_.end()) return it->second;

    uint32_t shared = ma & mb;
    uint32_t rest = ma ^ mb;
    FieldElement acc = one();
    for (int k = 0; k < 32; ++k)
        if (shared & (1u << k)) acc = mul(acc, radicands_[static_cast<size_t>(k)]);
    FieldElement out = zero();
    for (const auto& [m, c] : acc.coeffs_)
        out = add(out, mul_rat(mul_basis(m, rest), c));
    basis_cache_[key] = out;
    return out;
}

FieldElement TowerField::mul(const FieldElement& a, const FieldElement& b) const {
    FieldElement out = zero();
    if (a.is_zero() || b.is_zero()) return out;
    if (a.is_rational()) return mul_rat(b, a.rational_value());
    if (b.is_rational()) return mul_rat(a, b.rational_value());
    for (const auto& [ma, ca] : a.coeffs_) {
        for (const auto& [mb, cb] : b.coeffs_) {
            Rat c = ca * cb;
            if ((ma & mb) == 0) {
                Rat& slot = out.coeffs_[ma | mb];
                slot += c;
                if (slot == 0) out.coeffs_.erase(ma | mb);
            } else {
                out = add(out, mul_rat(mul_basis(ma, mb), c));
            }
        }
    }
    out.tower_ = this;
    return out;
}

// split v (living in levels < m) as b + c*s_{m-1}
void TowerField::split(const FieldElement& v, int m, FieldElement& b, FieldElement& c) const {
    uint32_t bit = 1u << (m - 1);
    b = zero();
    c = zero();
    for (const auto& [mask, q] : v.coeffs_) {
        if (mask & bit)
            c.coeffs_[mask & ~bit] = q;
        else
            b.coeffs_[mask] = q;
    }
    b.tower_ = this;
    c.tower_ = this;
}

FieldElement TowerField::inv(const FieldElement& a) const {
    require(!a.is_zero(), "DivisionByZero", "inverse of zero");
    if (a.is_rational()) return from_rational(Rat(1) / a.rational_value());
    int t = a.top_level();
    FieldElement b, c;
    split(a, t + 1, b, c);
    // conjugate = b - c*s_t ;  a * conj = b^2 - c^2 r_t lives one level down
    FieldElement norm = sub(mul(b, b), mul(mul(c, c), radicands_[static_cast<size_t>(t)]));
    require(!norm.is_zero(), "TowerDegenerate",
            "radicand became a square below its adjunction level");
    FieldElement conj = sub(b, mul(c, generator(t)));
    return mul(conj, inv(norm));
}

FieldElement TowerField::pow(const FieldElement& a, long e) const {
    if (e < 0) return pow(inv(a), -e);
    FieldElement r = one(), base = a;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

namespace {

bool rat_sqrt(const Rat& q, Rat& out) {
    if (q < 0) return false;
    if (q == 0) {
        out = 0;
        return true;
    }
    mpz_class n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    out = Rat(sn, sd);
    return true;
}

// n = s^2 * f with f squarefree up to the trial-division bound
void square_split(mpz_class n, mpz_class& s, mpz_class& f) {
    s = 1;
    f = 1;
    if (n < 0) {
        f = -1;
        n = -n;
    }
    mpz_class p = 2;
    while (p * p <= n && p < 20000) {
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            mpz_class q = n / p;
            if (mpz_divisible_p(q.get_mpz_t(), p.get_mpz_t())) {
                s *= p;
                n = q / p;
            } else {
                f *= p;
                n = q;
                break;
            }
        }
        p += (p == 2) ? 1 : 2;
    }
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        s *= r;
    } else {
        f *= n;
    }
}

} // namespace

// Square root within the level-m subtower. With v = b + c*s over the top
// adjunction s^2 = r:
//   c == 0: v is a square iff b or b*r is a square below (root u or u*s).
//   c != 0: (u + w*s)^2 = v forces u^2 = (b +- d)/2, d = sqrt(b^2 - c^2 r).
std::optional<FieldElement> TowerField::sqrt_level(const FieldElement& v, int m) const {
    if (v.is_zero()) return zero();
    if (m == 0) {
        if (!v.is_rational()) return std::nullopt;
        Rat r;
        if (rat_sqrt(v.rational_value(), r)) return from_rational(r);
        return std::nullopt;
    }
    int lvl = m - 1;
    FieldElement b, c;
    split(v, m, b, c);
    const FieldElement& r = radicands_[static_cast<size_t>(lvl)];
    if (c.is_zero()) {
        auto u = sqrt_level(b, lvl);
        if (u) return u;
        auto w = sqrt_level(div(b, r), lvl);
        if (w) return mul(*w, generator(lvl));
        return std::nullopt;
    }
    FieldElement disc = sub(mul(b, b), mul(mul(c, c), r));
    auto d = sqrt_level(disc, lvl);
    if (!d) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        FieldElement half = sign == 0 ? add(b, *d) : sub(b, *d);
        half = mul_rat(half, Rat(1, 2));
        auto u = sqrt_level(half, lvl);
        if (u && !u->is_zero()) {
            FieldElement w = div(mul_rat(c, Rat(1, 2)), *u);
            FieldElement cand = add(*u, mul(w, generator(lvl)));
            if (mul(cand, cand) == v) return cand;
        }
    }
    return std::nullopt;
}

std::optional<FieldElement> TowerField::sqrt_in_tower(const FieldElement& v) const {
    return sqrt_level(v, levels());
}

FieldElement TowerField::adjoin_sqrt(const FieldElement& radicand) {
    require(!radicand.is_zero(), "ZeroRadicand", "sqrt of zero radicand");
    auto existing = sqrt_in_tower(radicand);
    if (existing) return *existing;
    require(!strict_, "StrictFieldViolation", "square root not available in strict field");

    // strip the square part of the rational content: radicand = sq^2 * reduced
    Rat content = 0;
    for (const auto& [m, q] : radicand.coeffs()) {
        (void)m;
        if (content == 0)
            content = abs(q);
        else {
            mpz_class gn, gd;
            mpz_gcd(gn.get_mpz_t(), content.get_num().get_mpz_t(), q.get_num().get_mpz_t());
            mpz_lcm(gd.get_mpz_t(), content.get_den().get_mpz_t(), q.get_den().get_mpz_t());
            content = Rat(gn, gd);
            content.canonicalize();
        }
    }
    mpz_class sn, fn, sd, fd;
    square_split(content.get_num(), sn, fn);
    square_split(content.get_den(), sd, fd);
    Rat sq_part(sn, sd);
    sq_part.canonicalize();
    FieldElement reduced = mul_rat(radicand, Rat(1) / (sq_part * sq_part));

    radicands_.push_back(reduced);
    return mul_rat(generator(levels() - 1), sq_part);
}

std::optional<int> TowerField::multiplicative_order(const FieldElement& a, int bound) const {
    require(!a.is_zero(), "DivisionByZero", "order of zero");
    FieldElement p = a;
    for (int k = 1; k <= bound; ++k) {
        if (p.is_one()) return k;
        p = mul(p, a);
    }
    return std::nullopt;
}

bool TowerField::conjugation_valid(int k) const {
    for (int j = k + 1; j < levels(); ++j)
        for (const auto& [m, q] : radicands_[static_cast<size_t>(j)].coeffs()) {
            (void)q;
            if (m & (1u << k)) return false;
        }
    return true;
}

FieldElement TowerField::conjugate_level(const FieldElement& a, int k) const {
    require(conjugation_valid(k), "ConjugationInvalid",
            "later adjunction depends on this square root");
    FieldElement r = a;
    r.tower_ = this;
    for (auto& [m, q] : r.coeffs_)
        if (m & (1u << k)) q = -q;
    return r;
}

} // namespace monofix
