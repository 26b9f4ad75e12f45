#pragma once

// Line-oriented text formats.
//
// Algebra file:
//   dim 2
//   vars x y
//   d/dx
//   -1/2 * x y d/dy + x^2 d/dx
//   euler
// '#' starts a comment. `vars` may be omitted, in which case x, y, z (or
// x1..xn when n > 3) are used.
//
// Endomorphism file: one `source -> image` line per entry, both sides in the
// generator grammar. Sources must be linearly independent; the map is zero on
// the earliest basis vectors completing them to a basis.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lieder/algebra.hpp"
#include "lieder/derspaces.hpp"
#include "lieder/errors.hpp"
#include "lieder/linsolve.hpp"
#include "lieder/polyvec.hpp"
#include "lieder/rational.hpp"

namespace lieder {

struct ParsedAlgebra {
    AlgebraSpec spec;
    std::vector<std::string> vars;
};

namespace detail {

/// Recursive-descent reader over one line of the generator grammar.
class FieldReader {
public:
    FieldReader(std::string_view text, std::size_t line, std::size_t column0, const std::vector<std::string>& vars)
        : s_(text), line_(line), col0_(column0), vars_(vars) {}

    PolyVectorField read_sum() {
        const std::size_t n = vars_.size();
        PolyVectorField total(n);
        skip_ws();
        if (at_end()) fail("empty expression");
        bool first = true;
        while (!at_end()) {
            Rational sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            total = total + read_term().scaled(sign);
            first = false;
            skip_ws();
        }
        return total;
    }

private:
    PolyVectorField read_term() {
        const std::size_t n = vars_.size();
        Rational coeff = 1;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = read_rational();
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
            }
            if (at_end() || peek() == '+' || peek() == '-') {
                if (coeff == 0) return PolyVectorField(n);
                fail("a coefficient needs a field after it");
            }
        }
        Exponents e(n, 0);
        while (true) {
            skip_ws();
            if (at_end()) fail("term has no d/d<var>");
            const std::size_t start = pos_;
            if (!is_ident_start(peek())) fail("expected a variable, 'euler' or d/d<var>");
            std::string id = read_ident();
            if (id == "d" && s_.substr(pos_, 2) == "/d") {
                pos_ += 2;
                const std::size_t vstart = pos_;
                if (at_end() || !is_ident_start(peek())) fail("expected a variable after d/d");
                std::size_t dir = var_index(read_ident(), vstart);
                return make_field(n, {{coeff, e, dir}});
            }
            if (id == "euler") {
                if (total_degree(e) != 0) fail_at(start, "'euler' cannot be multiplied by variables");
                return euler(n).scaled(coeff);
            }
            std::size_t v = var_index(id, start);
            unsigned power = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos_;
                skip_ws();
                const std::size_t pstart = pos_;
                if (peek() == '-') {
                    std::size_t k = pos_ + 1;
                    while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
                    throw NonsensePower(where(pstart) + "negative exponent '" + std::string(s_.substr(pstart, k - pstart)) + "'");
                }
                if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent after '^'");
                std::size_t k = pos_;
                while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
                const std::string digits(s_.substr(pos_, k - pos_));
                if (digits.size() > 4) throw NonsensePower(where(pstart) + "exponent " + digits + " is too large");
                power = static_cast<unsigned>(std::stoul(digits));
                pos_ = k;
            }
            e[v] += power;
            skip_ws();
            if (peek() == '*') ++pos_;
        }
    }

    Rational read_rational() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '/' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        try {
            return parse_rational(s_.substr(start, pos_ - start));
        } catch (const InvalidArgument& ex) {
            fail_at(start, ex.what());
        }
    }

    std::size_t var_index(const std::string& id, std::size_t start) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == id) return i;
        throw UnknownVariable(where(start) + "unknown variable '" + id + "'");
    }

    static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    std::string read_ident() {
        const std::size_t start = pos_;
        while (!at_end() && is_ident(peek())) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    std::string where(std::size_t p) const {
        return "line " + std::to_string(line_) + ", column " + std::to_string(col0_ + p) + ": ";
    }
    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t p, const std::string& msg) const { throw ParseError(line_, col0_ + p, msg); }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t col0_;
    const std::vector<std::string>& vars_;
};

struct Line {
    std::size_t number;
    std::string text;  ///< comment stripped
};

inline std::vector<Line> content_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back({number, raw});
    }
    return out;
}

inline std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> w;
    for (std::string t; in >> t;) w.push_back(t);
    return w;
}

}  // namespace detail

/// One field in the generator grammar; `line` only labels errors.
inline PolyVectorField parse_field(std::string_view text, const std::vector<std::string>& vars, std::size_t line = 1) {
    return detail::FieldReader(text, line, 1, vars).read_sum();
}

inline ParsedAlgebra parse_algebra(const std::string& text) {
    auto lines = detail::content_lines(text);
    ParsedAlgebra out;
    std::size_t k = 0;
    if (lines.empty()) throw ParseError(1, 1, "missing 'dim <n>' header");
    {
        auto w = detail::words(lines[0].text);
        const std::size_t col = lines[0].text.find_first_not_of(" \t") + 1;
        if (w.size() != 2 || w[0] != "dim") throw ParseError(lines[0].number, col, "expected 'dim <n>'");
        if (w[1].find_first_not_of("0123456789") != std::string::npos || w[1].size() > 3 || std::stoi(w[1]) == 0)
            throw ParseError(lines[0].number, lines[0].text.find(w[1]) + 1, "dimension must be a positive integer");
        out.spec.n = static_cast<std::size_t>(std::stoi(w[1]));
        ++k;
    }
    out.vars = default_variable_names(out.spec.n);
    if (k < lines.size()) {
        auto w = detail::words(lines[k].text);
        if (!w.empty() && w[0] == "vars") {
            if (w.size() != out.spec.n + 1)
                throw ParseError(lines[k].number, lines[k].text.find("vars") + 1,
                                 "expected " + std::to_string(out.spec.n) + " variable names");
            out.vars.assign(w.begin() + 1, w.end());
            for (std::size_t i = 0; i < out.vars.size(); ++i) {
                const auto& v = out.vars[i];
                const bool ok = (std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_') &&
                                std::all_of(v.begin(), v.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }) &&
                                v != "d" && v != "euler" && std::count(out.vars.begin(), out.vars.end(), v) == 1;
                if (!ok) throw ParseError(lines[k].number, lines[k].text.find(v) + 1, "bad variable name '" + v + "'");
            }
            ++k;
        }
    }
    for (; k < lines.size(); ++k) {
        const auto& l = lines[k];
        auto w = detail::words(l.text);
        if (w[0] == "dim" || w[0] == "vars")
            throw ParseError(l.number, l.text.find(w[0]) + 1, "'" + w[0] + "' must come first");
        out.spec.generators.push_back(detail::FieldReader(l.text, l.number, 1, out.vars).read_sum());
    }
    return out;
}

/// Inverse of parse_algebra for a list of fields.
inline std::string format_algebra(std::size_t n, const std::vector<PolyVectorField>& fields, const std::vector<std::string>& vars) {
    std::string s = "dim " + std::to_string(n) + "\nvars";
    for (const auto& v : vars) s += " " + v;
    s += "\n";
    for (const auto& f : fields) s += format_field(f, vars) + "\n";
    return s;
}

/// Reads `source -> image` lines against the closed algebra A.
inline Endo parse_endo(const std::string& text, const GradedAlgebra& A, const std::vector<std::string>& vars) {
    const std::size_t d = A.dim();
    std::vector<SparseRow> sources, images;
    for (const auto& l : detail::content_lines(text)) {
        auto arrow = l.text.find("->");
        if (arrow == std::string::npos) throw ParseError(l.number, 1, "expected 'source -> image'");
        auto X = detail::FieldReader(std::string_view(l.text).substr(0, arrow), l.number, 1, vars).read_sum();
        auto Y = detail::FieldReader(std::string_view(l.text).substr(arrow + 2), l.number, arrow + 3, vars).read_sum();
        auto x = A.try_coordinates(X);
        if (!x) throw NotInAlgebra("line " + std::to_string(l.number) + ": source " + format_field(X, vars) + " is not in the algebra");
        auto y = A.try_coordinates(Y);
        if (!y) throw NotInAlgebra("line " + std::to_string(l.number) + ": image " + format_field(Y, vars) + " is not in the algebra");
        sources.push_back(to_sparse(*x));
        images.push_back(to_sparse(*y));
    }
    if (Subspace::span(d, sources).dim() != sources.size())
        throw InvalidArgument("endomorphism sources are linearly dependent");
    // Complete the sources with unit vectors sent to zero.
    Subspace grown = Subspace::span(d, sources);
    for (std::size_t q = 0; q < d && sources.size() < d; ++q) {
        if (contains(grown, unit(q))) continue;
        sources.push_back(unit(q));
        images.push_back({});
        grown = Subspace::span(d, sources);
    }
    // Invert S (columns = sources) through the reduced form of [S | I].
    std::vector<SparseRow> rows(d);
    for (std::size_t k = 0; k < d; ++k)
        for (const auto& [p, x] : sources[k]) rows[p].emplace_back(k, x);
    for (std::size_t p = 0; p < d; ++p) rows[p].emplace_back(d + p, Rational(1));
    auto reduced = detail::rref(rows);
    // Row k of the inverse is the tail of the reduced row with pivot k.
    std::vector<SparseRow> inverse(d);
    for (const auto& r : reduced) {
        SparseRow tail;
        for (const auto& [c, x] : r)
            if (c >= d) tail.emplace_back(c - d, x);
        inverse.at(r.front().first) = std::move(tail);
    }
    // f(e_q) = sum_k inverse[k][q] * image_k.
    std::vector<SparseRow> columns(d);
    for (std::size_t k = 0; k < d; ++k)
        for (const auto& [q, x] : inverse[k]) columns[q] = axpby(1, columns[q], x, images[k]);
    return Endo::from_columns(columns);
}

}  // namespace lieder
