#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "lieder/errors.hpp"

namespace lieder {

using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p", "-p" or "p/q" with decimal integers; rejects anything else.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto valid_int = [](std::string_view t, bool allow_sign) {
        if (!t.empty() && allow_sign && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
        throw InvalidArgument("not a rational literal: '" + s + "'");
    if (num.front() == '+') num.erase(0, 1);
    Integer n(num, 10), d(den, 10);
    if (d == 0) throw InvalidArgument("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

}  // namespace lieder
