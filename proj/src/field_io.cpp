#include "monofix/field_io.hpp"

#include <cctype>
#include <sstream>

namespace monofix {

void TextCursor::error(const std::string& what) const {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos && i < s.size(); ++i) {
        if (s[i] == '\n') {
            ++line;
            col = 1;
        } else
            ++col;
    }
    fail("ParseError", what + " at line " + std::to_string(line) + ", column " + std::to_string(col));
}

namespace {

Rat parse_number(TextCursor& cur) {
    cur.skip_ws();
    size_t start = cur.pos;
    while (cur.pos < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.pos]))) ++cur.pos;
    if (cur.pos == start) cur.error("expected number");
    mpz_class num(cur.s.substr(start, cur.pos - start));
    return Rat(num);
}

FieldElement parse_factor(TowerField& t, TextCursor& cur);

FieldElement parse_term(TowerField& t, TextCursor& cur) {
    FieldElement v = parse_factor(t, cur);
    for (;;) {
        cur.skip_ws();
        if (cur.eat('*'))
            v = t.mul(v, parse_factor(t, cur));
        else if (cur.peek() == '/' ) {
            // '/' only when followed by a factor start (digit, sqrt, paren, -)
            size_t save = cur.pos;
            cur.eat('/');
            char c = cur.peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == 's' || c == '(' || c == '-') {
                FieldElement d = parse_factor(t, cur);
                require(!d.is_zero(), "DivisionByZero", "division by zero in coefficient");
                v = t.div(v, d);
            } else {
                cur.pos = save;
                break;
            }
        } else
            break;
    }
    return v;
}

FieldElement parse_factor(TowerField& t, TextCursor& cur) {
    cur.skip_ws();
    if (cur.eat('-')) return t.neg(parse_factor(t, cur));
    char c = cur.peek();
    if (c == '(') {
        cur.eat('(');
        FieldElement v = parse_field_expr(t, cur);
        if (!cur.eat(')')) cur.error("expected ')'");
        return v;
    }
    if (c == 's') {
        cur.skip_ws();
        if (cur.s.compare(cur.pos, 5, "sqrt(") == 0) {
            cur.pos += 5;
            FieldElement arg = parse_field_expr(t, cur);
            if (!cur.eat(')')) cur.error("expected ')' after sqrt argument");
            return t.adjoin_sqrt(arg);
        }
        cur.error("expected sqrt(...)");
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return t.from_rational(parse_number(cur));
    cur.error("expected coefficient factor");
}

} // namespace

FieldElement parse_field_expr(TowerField& t, TextCursor& cur) {
    FieldElement v = t.zero();
    bool neg = cur.eat('-');
    FieldElement first = parse_term(t, cur);
    v = neg ? t.neg(first) : first;
    for (;;) {
        cur.skip_ws();
        if (cur.eat('+'))
            v = t.add(v, parse_term(t, cur));
        else if (cur.peek() == '-') {
            cur.eat('-');
            v = t.sub(v, parse_term(t, cur));
        } else
            break;
    }
    return v;
}

FieldElement parse_field_element(TowerField& t, const std::string& text) {
    TextCursor cur(text);
    FieldElement v = parse_field_expr(t, cur);
    cur.skip_ws();
    if (cur.pos != text.size()) cur.error("trailing input in coefficient");
    return v;
}

namespace {

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::string mask_str(const TowerField& t, uint32_t mask) {
    std::string out;
    for (int k = 0; k < 32; ++k)
        if (mask & (1u << k)) {
            if (!out.empty()) out += "*";
            out += "sqrt(" + to_string(t.radicand(k)) + ")";
        }
    return out;
}

} // namespace

std::string to_string(const FieldElement& e) {
    if (e.is_zero()) return "0";
    const TowerField& t = *e.tower();
    std::string out;
    bool first = true;
    for (const auto& [mask, q] : e.coeffs()) {
        Rat a = abs(q);
        bool negative = q < 0;
        std::string part;
        std::string radicals = mask == 0 ? "" : mask_str(t, mask);
        std::string coeff = rat_str(a);
        if (radicals.empty())
            part = coeff;
        else if (a == 1)
            part = radicals;
        else if (a.get_den() == 1)
            part = coeff + "*" + radicals;
        else
            part = "(" + coeff + ")*" + radicals;
        if (first) {
            out = negative ? "-" + part : part;
            first = false;
        } else {
            out += negative ? " - " : " + ";
            out += part;
        }
    }
    return out;
}

} // namespace monofix
