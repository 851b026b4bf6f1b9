#ifndef MONOFIX_FIELD_IO_HPP
#define MONOFIX_FIELD_IO_HPP

#include <string>

#include "monofix/tower.hpp"

namespace monofix {

// Cursor over expression text with line/column tracking for parse errors.
struct TextCursor {
    const std::string& s;
    size_t pos = 0;

    explicit TextCursor(const std::string& str) : s(str) {}
    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r'))
            ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void error(const std::string& what) const;
};

// Nested-radical grammar: rationals, + - * / ( ), sqrt(expr).
// Parsing may adjoin square roots to the tower (error in strict mode).
FieldElement parse_field_element(TowerField& tower, const std::string& text);

// Grammar-level printer; parse(print(e)) == e in the same tower.
std::string to_string(const FieldElement& e);

// internal: parse one coefficient expression starting at the cursor
FieldElement parse_field_expr(TowerField& tower, TextCursor& cur);

} // namespace monofix

#endif
