#include "monofix/poly.hpp"

#include <algorithm>

namespace monofix {

Poly Poly::constant(const TowerField* t, int nvars, const FieldElement& c) {
    Poly p(t, nvars);
    if (!c.is_zero()) p.terms_[0] = c;
    return p;
}

Poly Poly::constant(const TowerField* t, int nvars, const Rat& c) {
    return constant(t, nvars, t->from_rational(c));
}

Poly Poly::variable(const TowerField* t, int nvars, int i, long e) {
    require(i >= 0 && i < nvars && nvars <= kMaxVars, "BadVariable", "variable index out of range");
    Poly p(t, nvars);
    if (e == 0) return constant(t, nvars, Rat(1));
    require(e > 0 && e <= kExpMax, "ExponentOverflow", "exponent out of range");
    uint64_t key = static_cast<uint64_t>(e) << ((kMaxVars - 1 - i) * kExpBits);
    p.terms_[key] = t->one();
    return p;
}

uint64_t Poly::pack(const std::vector<long>& exp) {
    uint64_t key = 0;
    for (size_t i = 0; i < exp.size(); ++i) {
        require(exp[i] >= 0 && exp[i] <= kExpMax, "ExponentOverflow", "exponent out of range");
        key |= static_cast<uint64_t>(exp[i]) << ((kMaxVars - 1 - static_cast<int>(i)) * kExpBits);
    }
    return key;
}

std::vector<long> Poly::unpack(uint64_t key, int nvars) {
    std::vector<long> e(static_cast<size_t>(nvars));
    for (int i = 0; i < nvars; ++i) e[static_cast<size_t>(i)] = exp_of(key, i);
    return e;
}

FieldElement Poly::constant_value() const {
    if (terms_.empty()) return tower_ ? tower_->zero() : FieldElement();
    require(is_constant(), "NotConstant", "polynomial is not constant");
    return terms_.begin()->second;
}

void Poly::add_term(uint64_t key, const FieldElement& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_[key] = c;
    } else {
        FieldElement s = tower_->add(it->second, c);
        if (s.is_zero())
            terms_.erase(it);
        else
            it->second = s;
    }
}

long Poly::degree(int var) const {
    long d = 0;
    for (const auto& [k, c] : terms_) {
        (void)c;
        d = std::max(d, exp_of(k, var));
    }
    return d;
}

int Poly::top_var() const {
    int top = -1;
    for (const auto& [k, c] : terms_) {
        (void)c;
        for (int v = nvars_ - 1; v > top; --v)
            if (exp_of(k, v) > 0) top = v;
    }
    return top;
}

const FieldElement& Poly::leading_coeff() const {
    require(!terms_.empty(), "ZeroPolynomial", "leading coefficient of zero");
    return terms_.rbegin()->second;
}

uint64_t Poly::leading_key() const {
    require(!terms_.empty(), "ZeroPolynomial", "leading term of zero");
    return terms_.rbegin()->first;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, tower_->neg(c));
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [k, c] : r.terms_) {
        (void)k;
        c = tower_->neg(c);
    }
    return r;
}

namespace {

uint64_t add_keys(uint64_t a, uint64_t b, int nvars) {
    uint64_t r = a + b;
    // per-variable overflow check: exponent fields must not carry
    for (int i = 0; i < nvars; ++i)
        require(Poly::exp_of(r, i) == Poly::exp_of(a, i) + Poly::exp_of(b, i), "ExponentOverflow",
                "exponent field overflow in multiplication");
    return r;
}

} // namespace

Poly Poly::operator*(const Poly& o) const {
    Poly r(tower_, nvars_);
    if (is_zero() || o.is_zero()) return r;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_)
            r.add_term(add_keys(ka, kb, nvars_), tower_->mul(ca, cb));
    return r;
}

Poly Poly::mul_coeff(const FieldElement& c) const {
    Poly r(tower_, nvars_);
    if (c.is_zero()) return r;
    for (const auto& [k, a] : terms_) {
        FieldElement p = tower_->mul(a, c);
        if (!p.is_zero()) r.terms_[k] = p;
    }
    return r;
}

Poly Poly::pow(long e) const {
    require(e >= 0, "ExponentOverflow", "negative polynomial power");
    Poly r = constant(tower_, nvars_, Rat(1));
    Poly base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

Poly Poly::derivative(int var) const {
    Poly r(tower_, nvars_);
    int shift = (kMaxVars - 1 - var) * kExpBits;
    for (const auto& [k, c] : terms_) {
        long e = exp_of(k, var);
        if (e == 0) continue;
        uint64_t nk = k - (static_cast<uint64_t>(1) << shift);
        r.add_term(nk, tower_->mul_rat(c, Rat(e)));
    }
    return r;
}

FieldElement Poly::eval(const std::vector<FieldElement>& point) const {
    const TowerField* t = tower_;
    std::vector<std::vector<FieldElement>> pows(static_cast<size_t>(nvars_));
    for (int i = 0; i < nvars_; ++i) {
        long d = degree(i);
        auto& tab = pows[static_cast<size_t>(i)];
        tab.resize(static_cast<size_t>(d) + 1);
        tab[0] = t->one();
        for (long e = 1; e <= d; ++e) tab[static_cast<size_t>(e)] = t->mul(tab[static_cast<size_t>(e - 1)], point[static_cast<size_t>(i)]);
    }
    FieldElement acc = t->zero();
    for (const auto& [k, c] : terms_) {
        FieldElement v = c;
        for (int i = 0; i < nvars_; ++i) {
            long e = exp_of(k, i);
            if (e) v = t->mul(v, pows[static_cast<size_t>(i)][static_cast<size_t>(e)]);
        }
        acc = t->add(acc, v);
    }
    return acc;
}

Poly Poly::eval_var(int var, const FieldElement& value) const {
    const TowerField* t = tower_;
    long d = degree(var);
    std::vector<FieldElement> pows(static_cast<size_t>(d) + 1);
    pows[0] = t->one();
    for (long e = 1; e <= d; ++e) pows[static_cast<size_t>(e)] = t->mul(pows[static_cast<size_t>(e - 1)], value);
    Poly r(t, nvars_);
    int shift = (kMaxVars - 1 - var) * kExpBits;
    for (const auto& [k, c] : terms_) {
        long e = exp_of(k, var);
        uint64_t nk = k - (static_cast<uint64_t>(e) << shift);
        r.add_term(nk, t->mul(c, pows[static_cast<size_t>(e)]));
    }
    return r;
}

std::vector<FieldElement> Poly::eval_except(const std::vector<FieldElement>& point, int keep) const {
    const TowerField* t = tower_;
    std::vector<FieldElement> out(static_cast<size_t>(degree(keep)) + 1, t->zero());
    for (const auto& [k, c] : terms_) {
        FieldElement v = c;
        for (int i = 0; i < nvars_; ++i) {
            if (i == keep) continue;
            long e = exp_of(k, i);
            if (e) v = t->mul(v, t->pow(point[static_cast<size_t>(i)], e));
        }
        size_t d = static_cast<size_t>(exp_of(k, keep));
        out[d] = t->add(out[d], v);
    }
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return out;
}

std::optional<Poly> Poly::divided_by(const Poly& o) const {
    require(!o.is_zero(), "DivisionByZero", "polynomial division by zero");
    Poly rem = *this;
    Poly quot(tower_, nvars_);
    FieldElement lc_inv = tower_->inv(o.leading_coeff());
    uint64_t lk = o.leading_key();
    while (!rem.is_zero()) {
        uint64_t rk = rem.leading_key();
        // divisibility of exponent tuples
        uint64_t qk = rk - lk;
        bool ok = rk >= lk;
        if (ok)
            for (int i = 0; i < nvars_ && ok; ++i)
                ok = exp_of(rk, i) >= exp_of(lk, i) && exp_of(qk, i) == exp_of(rk, i) - exp_of(lk, i);
        if (!ok) return std::nullopt;
        FieldElement qc = tower_->mul(rem.leading_coeff(), lc_inv);
        Poly mono(tower_, nvars_);
        mono.terms_[qk] = qc;
        quot = quot + mono;
        rem = rem - mono * o;
    }
    return quot;
}

std::vector<Poly> Poly::coeffs_in(int var) const {
    std::vector<Poly> out(static_cast<size_t>(degree(var)) + 1, Poly(tower_, nvars_));
    int shift = (kMaxVars - 1 - var) * kExpBits;
    for (const auto& [k, c] : terms_) {
        long e = exp_of(k, var);
        uint64_t nk = k - (static_cast<uint64_t>(e) << shift);
        out[static_cast<size_t>(e)].add_term(nk, c);
    }
    return out;
}

Poly Poly::from_coeffs_in(const TowerField* t, int nvars, int var, const std::vector<Poly>& cs) {
    Poly r(t, nvars);
    int shift = (kMaxVars - 1 - var) * kExpBits;
    for (size_t e = 0; e < cs.size(); ++e)
        for (const auto& [k, c] : cs[e].terms())
            r.add_term(k + (static_cast<uint64_t>(e) << shift), c);
    return r;
}

Poly Poly::remap_vars(const std::vector<int>& map, int new_nvars) const {
    Poly r(tower_, new_nvars);
    for (const auto& [k, c] : terms_) {
        uint64_t nk = 0;
        for (int i = 0; i < nvars_; ++i) {
            long e = exp_of(k, i);
            if (!e) continue;
            int ni = map[static_cast<size_t>(i)];
            require(ni >= 0 && ni < new_nvars, "BadVariable", "variable remap out of range");
            nk |= static_cast<uint64_t>(e) << ((kMaxVars - 1 - ni) * kExpBits);
        }
        r.add_term(nk, c);
    }
    return r;
}

Poly Poly::map_coeffs(const std::function<FieldElement(const FieldElement&)>& fn) const {
    Poly r(tower_, nvars_);
    for (const auto& [k, c] : terms_) r.add_term(k, fn(c));
    return r;
}

// ---------------------------------------------------------------------------
// gcd

namespace {

// univariate gcd over the field, coefficients as a power list; monic result
std::vector<FieldElement> uni_gcd(const TowerField* t, std::vector<FieldElement> a,
                                  std::vector<FieldElement> b) {
    auto trim = [](std::vector<FieldElement>& v) {
        while (!v.empty() && v.back().is_zero()) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        FieldElement lb_inv = t->inv(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            FieldElement q = t->mul(a.back(), lb_inv);
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[off + i] = t->sub(a[off + i], t->mul(q, b[i]));
            trim(a);
            if (a.size() < b.size()) break;
        }
        std::swap(a, b);
        trim(b);
    }
    if (!a.empty()) {
        FieldElement la_inv = t->inv(a.back());
        for (auto& c : a) c = t->mul(c, la_inv);
    }
    return a;
}

Poly content_in(const Poly& f, int var, Rng* rng) {
    auto cs = f.coeffs_in(var);
    Poly g(f.tower(), f.nvars());
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : poly_gcd(g, c, rng);
        if (g.is_constant()) break;
    }
    return g;
}

// per-variable minimal exponents (the monomial content)
uint64_t monomial_content(const Poly& f) {
    bool first = true;
    std::vector<long> mins(static_cast<size_t>(f.nvars()), 0);
    for (const auto& [k, c] : f.terms()) {
        (void)c;
        for (int i = 0; i < f.nvars(); ++i) {
            long e = Poly::exp_of(k, i);
            if (first)
                mins[static_cast<size_t>(i)] = e;
            else
                mins[static_cast<size_t>(i)] = std::min(mins[static_cast<size_t>(i)], e);
        }
        first = false;
    }
    return Poly::pack(mins);
}

Poly shift_down(const Poly& f, uint64_t key) {
    Poly r(f.tower(), f.nvars());
    for (const auto& [k, c] : f.terms()) r.add_term(k - key, c);
    return r;
}

// gcd of two polynomials both with positive degree in `var` and primitive
// w.r.t. it, by evaluation/interpolation on the highest other variable.
// Falls back recursively; the final division check makes it exact.
Poly gcd_prim(const Poly& f, const Poly& g, int var, Rng* rng);

// dispatcher used by gcd_prim for evaluated (smaller) problems
Poly gcd_rec(const Poly& f, const Poly& g, Rng* rng) { return poly_gcd(f, g, rng); }

Poly gcd_prim(const Poly& f, const Poly& g, int var, Rng* rng) {
    const TowerField* t = f.tower();
    int n = f.nvars();
    // find interpolation variable: highest var < nvars, != var, present in f or g
    int y = -1;
    for (int i = 0; i < n; ++i)
        if (i != var && (f.uses_var(i) || g.uses_var(i))) y = i;
    if (y < 0) {
        // genuinely univariate in var
        std::vector<FieldElement> uf, ug;
        for (const auto& c : f.coeffs_in(var)) uf.push_back(c.constant_value());
        for (const auto& c : g.coeffs_in(var)) ug.push_back(c.constant_value());
        auto u = uni_gcd(t, uf, ug);
        Poly r(t, n);
        for (size_t e = 0; e < u.size(); ++e)
            if (!u[e].is_zero()) r = r + Poly::variable(t, n, var, static_cast<long>(e)).mul_coeff(u[e]);
        if (u.size() == 1) r = Poly::constant(t, n, Rat(1));
        return r;
    }

    Poly lf = f.coeffs_in(var).back();
    Poly lg = g.coeffs_in(var).back();
    Poly gamma = poly_gcd(lf, lg, rng);

    long degy_budget = std::max(f.degree(y), g.degree(y)) + gamma.degree(y) + 2;
    long min_degv = -1;
    Poly interp(t, n);   // current Newton interpolant of the gamma-scaled gcd
    Poly basis = Poly::constant(t, n, Rat(1)); // prod (y - t_j)
    int stable = 0;
    long next_point = 1;

    for (long used = 0; used < 4 * degy_budget + 40; ++next_point) {
        FieldElement tv = t->from_rational(Rat(next_point));
        Poly ft = f.eval_var(y, tv);
        Poly gt = g.eval_var(y, tv);
        if (ft.degree(var) != f.degree(var) || gt.degree(var) != g.degree(var)) continue;
        Poly ht = gcd_rec(ft, gt, rng);
        long dv = ht.degree(var);
        if (dv == 0) {
            // coprime images: the primitive parts share no factor
            return Poly::constant(t, n, Rat(1));
        }
        if (min_degv >= 0 && dv > min_degv) continue; // unlucky evaluation
        if (min_degv < 0 || dv < min_degv) {
            // restart collection at the lower degree
            min_degv = dv;
            interp = Poly(t, n);
            basis = Poly::constant(t, n, Rat(1));
            stable = 0;
            used = 0;
        }
        // scale image so its var-leading coefficient is gamma(y=tv)
        Poly gamma_t = gamma.eval_var(y, tv);
        Poly lc_ht = ht.coeffs_in(var).back();
        auto scale = gamma_t.divided_by(lc_ht);
        if (!scale) continue; // bad point
        ht = ht * *scale;

        // Newton update
        Poly err = ht - interp.eval_var(y, tv);
        if (err.is_zero()) {
            ++stable;
        } else {
            FieldElement bt = basis.eval_var(y, tv).constant_value();
            require(!bt.is_zero(), "GcdInternal", "repeated interpolation point");
            interp = interp + basis * err.mul_coeff(t->inv(bt));
            stable = 0;
        }
        basis = basis * (Poly::variable(t, n, y) - Poly::constant(t, n, tv));
        ++used;

        if (stable >= 1 && !interp.is_zero()) {
            Poly cand = interp;
            Poly cc = content_in(cand, var, rng);
            cand = *cand.divided_by(cc);
            if (f.divided_by(cand) && g.divided_by(cand)) return cand;
        }
    }
    fail("GcdInternal", "interpolation gcd did not stabilize");
}

FieldElement sample_value(const TowerField* t, Rng& rng) {
    long num = rng.range(-40, 40);
    if (num == 0) num = 1;
    long den = rng.range(1, 7);
    return t->from_rational(Rat(num, den));
}

} // namespace

Poly poly_gcd(const Poly& f0, const Poly& g0, Rng* rng) {
    const TowerField* t = f0.tower() ? f0.tower() : g0.tower();
    auto monic = [&](const Poly& p) {
        if (p.is_zero()) return p;
        return p.mul_coeff(t->inv(p.leading_coeff()));
    };
    if (f0.is_zero()) return monic(g0);
    if (g0.is_zero()) return monic(f0);
    if (f0.is_constant() || g0.is_constant()) return Poly::constant(t, f0.nvars(), Rat(1));

    // strip monomial contents: gcd(x^a f', x^b g') = x^min(a,b) gcd(f', g')
    uint64_t mf = monomial_content(f0), mg = monomial_content(g0);
    std::vector<long> shared(static_cast<size_t>(f0.nvars()));
    for (int i = 0; i < f0.nvars(); ++i)
        shared[static_cast<size_t>(i)] = std::min(Poly::exp_of(mf, i), Poly::exp_of(mg, i));
    Poly f = shift_down(f0, mf);
    Poly g = shift_down(g0, mg);
    Poly mono(t, f0.nvars());
    mono.add_term(Poly::pack(shared), t->one());

    if (f.is_constant() || g.is_constant()) return monic(mono);

    int var = std::max(f.top_var(), g.top_var());
    if (f.degree(var) == 0 || g.degree(var) == 0) {
        const Poly& without = f.degree(var) == 0 ? f : g;
        const Poly& with = f.degree(var) == 0 ? g : f;
        return monic(mono * poly_gcd(without, content_in(with, var, rng), rng));
    }

    Poly cf = content_in(f, var, rng);
    Poly cg = content_in(g, var, rng);
    Poly c = poly_gcd(cf, cg, rng);
    Poly pf = *f.divided_by(cf);
    Poly pg = *g.divided_by(cg);

    // probe: a random evaluation of the other variables bounds deg_var(gcd)
    if (rng) {
        for (int attempt = 0; attempt < 3; ++attempt) {
            std::vector<FieldElement> pt(static_cast<size_t>(f.nvars()), t->zero());
            for (int i = 0; i < f.nvars(); ++i)
                if (i != var) pt[static_cast<size_t>(i)] = sample_value(t, *rng);
            auto uf = pf.eval_except(pt, var);
            auto ug = pg.eval_except(pt, var);
            if (uf.size() != static_cast<size_t>(pf.degree(var)) + 1 ||
                ug.size() != static_cast<size_t>(pg.degree(var)) + 1)
                continue;
            auto u = uni_gcd(t, uf, ug);
            if (u.size() <= 1) return monic(mono * c);
            break;
        }
    }

    Poly pp = gcd_prim(pf, pg, var, rng);
    return monic(mono * c * pp);
}

} // namespace monofix
