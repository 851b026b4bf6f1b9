#include "monofix/ratfunc.hpp"

#include <cctype>
#include <sstream>

namespace monofix {

RationalFunction::RationalFunction(Poly num, Poly den, Rng* rng) : num_(std::move(num)), den_(std::move(den)) {
    require(!den_.is_zero(), "DivisionByZero", "zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::constant(den_.tower(), den_.nvars(), Rat(1));
        return;
    }
    Rng local(0xabcdef12345ull);
    Poly g = poly_gcd(num_, den_, rng ? rng : &local);
    if (!g.is_constant()) {
        num_ = *num_.divided_by(g);
        den_ = *den_.divided_by(g);
    }
    FieldElement lead = den_.leading_coeff();
    if (!lead.is_one()) {
        FieldElement inv = den_.tower()->inv(lead);
        num_ = num_.mul_coeff(inv);
        den_ = den_.mul_coeff(inv);
    }
}

RF RationalFunction::from_poly(const Poly& p) {
    RF f;
    f.num_ = p;
    f.den_ = Poly::constant(p.tower(), p.nvars(), Rat(1));
    return f;
}

RF RationalFunction::constant(const TowerField* t, int nvars, const FieldElement& c) {
    return from_poly(Poly::constant(t, nvars, c));
}

RF RationalFunction::constant(const TowerField* t, int nvars, const Rat& c) {
    return from_poly(Poly::constant(t, nvars, c));
}

RF RationalFunction::variable(const TowerField* t, int nvars, int i) {
    return from_poly(Poly::variable(t, nvars, i));
}

FieldElement RationalFunction::constant_value() const {
    require(is_constant(), "NotConstant", "rational function is not constant");
    if (num_.is_zero()) return tower()->zero();
    return tower()->div(num_.constant_value(), den_.constant_value());
}

RF RationalFunction::operator+(const RF& o) const {
    return RF(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RF RationalFunction::operator-(const RF& o) const {
    return RF(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RF RationalFunction::operator-() const {
    RF f = *this;
    f.num_ = -f.num_;
    return f;
}

RF RationalFunction::operator*(const RF& o) const { return RF(num_ * o.num_, den_ * o.den_); }

RF RationalFunction::operator/(const RF& o) const {
    require(!o.is_zero(), "DivisionByZero", "division by zero rational function");
    return RF(num_ * o.den_, den_ * o.num_);
}

RF RationalFunction::inv() const {
    require(!is_zero(), "DivisionByZero", "inverse of zero rational function");
    return RF(den_, num_);
}

RF RationalFunction::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    RF r = constant(tower(), nvars(), Rat(1));
    RF base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

RF RationalFunction::mul_coeff(const FieldElement& c) const {
    if (c.is_zero()) return constant(tower(), nvars(), Rat(0));
    RF f = *this;
    f.num_ = f.num_.mul_coeff(c);
    return f;
}

bool RationalFunction::equals(const RF& o) const {
    return num_ * o.den_ == o.num_ * den_;
}

RF RationalFunction::derivative(int var) const {
    // (n'd - nd')/d^2
    return RF(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

std::optional<FieldElement> RationalFunction::eval(const std::vector<FieldElement>& point) const {
    FieldElement d = den_.eval(point);
    if (d.is_zero()) return std::nullopt;
    return tower()->div(num_.eval(point), d);
}

RF RationalFunction::remap_vars(const std::vector<int>& map, int new_nvars) const {
    RF f;
    f.num_ = num_.remap_vars(map, new_nvars);
    f.den_ = den_.remap_vars(map, new_nvars);
    return f;
}

RF RationalFunction::map_coeffs(const std::function<FieldElement(const FieldElement&)>& fn) const {
    return RF(num_.map_coeffs(fn), den_.map_coeffs(fn));
}

SubstitutionMap identity_map(const TowerField* t, int nvars) {
    SubstitutionMap m;
    for (int i = 0; i < nvars; ++i) m.images.push_back(RF::variable(t, nvars, i));
    return m;
}

namespace {

// substitute images into a polynomial over a single shared denominator
RF subst_poly(const Poly& p, const SubstitutionMap& m) {
    const TowerField* t = m.images.empty() ? p.tower() : m.images[0].tower();
    int out_vars = m.images.empty() ? p.nvars() : m.images[0].nvars();
    int in_vars = p.nvars();
    require(static_cast<int>(m.images.size()) == in_vars, "BadSubstitution",
            "substitution image count mismatch");

    Poly src = p;
    if (m.coeff_auto)
        src = p.map_coeffs([&](const FieldElement& c) { return t->conjugate_level(c, *m.coeff_auto); });

    std::vector<long> maxdeg(static_cast<size_t>(in_vars), 0);
    for (int i = 0; i < in_vars; ++i) maxdeg[static_cast<size_t>(i)] = src.degree(i);

    std::vector<std::vector<Poly>> numpow(static_cast<size_t>(in_vars)), denpow(static_cast<size_t>(in_vars));
    for (int i = 0; i < in_vars; ++i) {
        long d = maxdeg[static_cast<size_t>(i)];
        auto& np = numpow[static_cast<size_t>(i)];
        auto& dp = denpow[static_cast<size_t>(i)];
        np.resize(static_cast<size_t>(d) + 1);
        dp.resize(static_cast<size_t>(d) + 1);
        np[0] = Poly::constant(t, out_vars, Rat(1));
        dp[0] = np[0];
        for (long e = 1; e <= d; ++e) {
            np[static_cast<size_t>(e)] = np[static_cast<size_t>(e - 1)] * m.images[static_cast<size_t>(i)].num();
            dp[static_cast<size_t>(e)] = dp[static_cast<size_t>(e - 1)] * m.images[static_cast<size_t>(i)].den();
        }
    }

    Poly acc(t, out_vars);
    for (const auto& [k, c] : src.terms()) {
        Poly term = Poly::constant(t, out_vars, c);
        for (int i = 0; i < in_vars; ++i) {
            long e = Poly::exp_of(k, i);
            term = term * numpow[static_cast<size_t>(i)][static_cast<size_t>(e)];
            term = term * denpow[static_cast<size_t>(i)][static_cast<size_t>(maxdeg[static_cast<size_t>(i)] - e)];
        }
        acc = acc + term;
    }
    Poly den = Poly::constant(t, out_vars, Rat(1));
    for (int i = 0; i < in_vars; ++i) den = den * denpow[static_cast<size_t>(i)][static_cast<size_t>(maxdeg[static_cast<size_t>(i)])];
    return RF(acc, den);
}

} // namespace

RF rf_substitute(const RF& f, const SubstitutionMap& m) {
    RF den = subst_poly(f.den(), m);
    require(!den.is_zero(), "IndeterminateForm", "substituted denominator vanishes identically");
    RF num = subst_poly(f.num(), m);
    return num / den;
}

SubstitutionMap compose(const SubstitutionMap& m_after, const SubstitutionMap& m_first) {
    SubstitutionMap out;
    require(!m_first.coeff_auto && !m_after.coeff_auto, "BadSubstitution",
            "composition with coefficient automorphisms is not supported");
    for (const auto& im : m_first.images) out.images.push_back(rf_substitute(im, m_after));
    return out;
}

bool roundtrip_ok(const SubstitutionMap& m) {
    if (!m.inverse) return false;
    int n = m.source_nvars();
    const TowerField* t = m.images[0].tower();
    for (int i = 0; i < n; ++i) {
        RF xi = RF::variable(t, n, i);
        if (!rf_substitute(m.images[static_cast<size_t>(i)], *m.inverse).equals(xi)) return false;
        if (!rf_substitute(m.inverse->images[static_cast<size_t>(i)], m).equals(xi)) return false;
    }
    return true;
}

namespace {

int matrix_rank(const TowerField* t, std::vector<std::vector<FieldElement>> a) {
    int rows = static_cast<int>(a.size());
    if (rows == 0) return 0;
    int cols = static_cast<int>(a[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!a[static_cast<size_t>(r)][static_cast<size_t>(c)].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[static_cast<size_t>(rank)], a[static_cast<size_t>(pivot)]);
        FieldElement pinv = t->inv(a[static_cast<size_t>(rank)][static_cast<size_t>(c)]);
        for (int r = rank + 1; r < rows; ++r) {
            FieldElement f = t->mul(a[static_cast<size_t>(r)][static_cast<size_t>(c)], pinv);
            if (f.is_zero()) continue;
            for (int cc = c; cc < cols; ++cc)
                a[static_cast<size_t>(r)][static_cast<size_t>(cc)] = t->sub(
                    a[static_cast<size_t>(r)][static_cast<size_t>(cc)],
                    t->mul(f, a[static_cast<size_t>(rank)][static_cast<size_t>(cc)]));
        }
        ++rank;
    }
    return rank;
}

} // namespace

int jacobian_rank(const std::vector<RF>& fs, Rng& rng, int retries) {
    require(!fs.empty(), "BadInput", "jacobian of empty family");
    const TowerField* t = fs[0].tower();
    int n = fs[0].nvars();
    int best = 0;
    int target = std::min<int>(static_cast<int>(fs.size()), n);

    // symbolic partials, evaluated exactly at sampled points
    std::vector<std::vector<RF>> partials(fs.size());
    for (size_t i = 0; i < fs.size(); ++i)
        for (int v = 0; v < n; ++v) partials[i].push_back(fs[i].derivative(v));

    int valid_attempts = 0;
    for (int attempt = 0; attempt < retries; ++attempt) {
        std::vector<FieldElement> pt(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) {
            long num = rng.range(-9999, 9999);
            if (num == 0) num = 1;
            long den = rng.range(1, 64);
            pt[static_cast<size_t>(v)] = t->from_rational(Rat(num, den));
        }
        bool ok = true;
        std::vector<std::vector<FieldElement>> mat(fs.size(),
                                                   std::vector<FieldElement>(static_cast<size_t>(n)));
        for (size_t i = 0; i < fs.size() && ok; ++i)
            for (int v = 0; v < n && ok; ++v) {
                auto val = partials[i][static_cast<size_t>(v)].eval(pt);
                if (!val)
                    ok = false;
                else
                    mat[i][static_cast<size_t>(v)] = *val;
            }
        if (!ok) continue;
        ++valid_attempts;
        best = std::max(best, matrix_rank(t, mat));
        if (best == target) return best;
    }
    require(valid_attempts > 0, "SamplerExhausted", "no valid evaluation point found");
    return best;
}

// ---------------------------------------------------------------------------
// parsing / printing

namespace {

struct RfParser {
    TowerField& t;
    int nvars;
    TextCursor& cur;

    RF expr() {
        bool neg = cur.eat('-');
        RF v = term();
        if (neg) v = -v;
        for (;;) {
            cur.skip_ws();
            if (cur.eat('+'))
                v = v + term();
            else if (cur.peek() == '-') {
                cur.eat('-');
                v = v - term();
            } else
                break;
        }
        return v;
    }

    RF term() {
        RF v = power();
        for (;;) {
            cur.skip_ws();
            char c = cur.peek();
            if (c == '*') {
                cur.eat('*');
                v = v * power();
            } else if (c == '/') {
                cur.eat('/');
                RF d = power();
                require(!d.is_zero(), "DivisionByZero", "division by zero in expression");
                v = v / d;
            } else
                break;
        }
        return v;
    }

    RF power() {
        cur.skip_ws();
        if (cur.peek() == '-') { // unary minus binds looser than '^'
            cur.eat('-');
            return -power();
        }
        RF base = factor();
        cur.skip_ws();
        if (cur.peek() == '^') {
            cur.eat('^');
            cur.skip_ws();
            bool neg = cur.eat('-');
            size_t start = cur.pos;
            while (cur.pos < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.pos])))
                ++cur.pos;
            if (cur.pos == start) cur.error("expected exponent");
            long e = std::stol(cur.s.substr(start, cur.pos - start));
            return base.pow(neg ? -e : e);
        }
        return base;
    }

    RF factor() {
        cur.skip_ws();
        char c = cur.peek();
        if (c == '-') {
            cur.eat('-');
            return -factor();
        }
        if (c == '(') {
            cur.eat('(');
            RF v = expr();
            if (!cur.eat(')')) cur.error("expected ')'");
            return v;
        }
        if (c == 'x') {
            ++cur.pos;
            size_t start = cur.pos;
            while (cur.pos < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.pos])))
                ++cur.pos;
            if (cur.pos == start) cur.error("expected variable index after 'x'");
            int idx = std::stoi(cur.s.substr(start, cur.pos - start));
            if (idx < 1 || idx > nvars) cur.error("variable index out of range");
            return RF::variable(&t, nvars, idx - 1);
        }
        if (c == 's') {
            // sqrt(...) coefficient
            if (cur.s.compare(cur.pos, 5, "sqrt(") == 0) {
                cur.pos += 5;
                FieldElement arg = parse_field_expr(t, cur);
                if (!cur.eat(')')) cur.error("expected ')' after sqrt argument");
                return RF::constant(&t, nvars, t.adjoin_sqrt(arg));
            }
            cur.error("expected sqrt(...)");
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = cur.pos;
            while (cur.pos < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.pos])))
                ++cur.pos;
            mpz_class num(cur.s.substr(start, cur.pos - start));
            return RF::constant(&t, nvars, Rat(num));
        }
        cur.error("unexpected character in expression");
    }
};

bool coeff_needs_parens(const std::string& s) {
    return s.find(' ') != std::string::npos || s.find('+') != std::string::npos ||
           s.find('/') != std::string::npos || (s.find('-') != std::string::npos && s != "-1");
}

} // namespace

RF parse_rf(TowerField& t, int nvars, const std::string& text) {
    TextCursor cur(text);
    RfParser p{t, nvars, cur};
    RF v = p.expr();
    cur.skip_ws();
    if (cur.pos != text.size()) cur.error("trailing input in expression");
    return v;
}

std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    // lex-descending for readability
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        std::string vars;
        for (int i = 0; i < p.nvars(); ++i) {
            long e = Poly::exp_of(it->first, i);
            if (!e) continue;
            if (!vars.empty()) vars += "*";
            vars += "x" + std::to_string(i + 1);
            if (e > 1) vars += "^" + std::to_string(e);
        }
        std::string cs = to_string(it->second);
        std::string part;
        if (vars.empty())
            part = coeff_needs_parens(cs) ? "(" + cs + ")" : cs;
        else if (cs == "1")
            part = vars;
        else if (cs == "-1")
            part = "-" + vars;
        else
            part = (coeff_needs_parens(cs) ? "(" + cs + ")" : cs) + "*" + vars;
        if (first)
            out += part;
        else if (!part.empty() && part[0] == '-')
            out += " - " + part.substr(1);
        else
            out += " + " + part;
        first = false;
    }
    return out;
}

std::string to_string(const RF& f) {
    std::string n = to_string(f.num());
    if (f.den().is_constant() && f.den().constant_value().is_one()) return n;
    return "(" + n + ")/(" + to_string(f.den()) + ")";
}

} // namespace monofix
