#pragma once

// Polynomial vector fields on R^n with exact rational coefficients.
//
// A field is stored as a sorted list of monomial terms c * x^a d/dx^i. The
// sort key is (total degree, exponents, direction); within one total degree
// exponent vectors are ordered so that x^1 precedes x^2 precedes ... (the
// reverse of plain lexicographic order), which lists x d/dx before y d/dy.
// Canonical form is unique, so `operator==` is mathematical equality.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lieder/errors.hpp"
#include "lieder/rational.hpp"

namespace lieder {

using Exponents = std::vector<unsigned>;

inline int total_degree(const Exponents& e) {
    return static_cast<int>(std::accumulate(e.begin(), e.end(), 0u));
}

/// Identifies the monomial field x^exponents d/dx^direction (direction is 0-based).
struct MonomialKey {
    Exponents exponents;
    std::size_t direction = 0;

    bool operator==(const MonomialKey&) const = default;
};

/// Canonical term order; see the file comment.
struct MonomialKeyLess {
    bool operator()(const MonomialKey& a, const MonomialKey& b) const {
        int da = total_degree(a.exponents), db = total_degree(b.exponents);
        if (da != db) return da < db;
        if (a.exponents != b.exponents) return a.exponents > b.exponents;
        return a.direction < b.direction;
    }
};

/// One term c * x^exponents d/dx^direction with c != 0.
struct MonomialField {
    Rational coeff;
    MonomialKey key;

    int degree() const { return total_degree(key.exponents) - 1; }
    bool operator==(const MonomialField&) const = default;
};

/// Input term for `make_field`; `direction` is 0-based.
struct TermSpec {
    Rational coeff;
    Exponents exponents;
    std::size_t direction = 0;
};

class PolyVectorField {
public:
    PolyVectorField() = default;
    explicit PolyVectorField(std::size_t n) : n_(n) {}

    std::size_t n() const { return n_; }
    const std::vector<MonomialField>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Coefficient of the monomial `key`, zero when absent.
    Rational coefficient(const MonomialKey& key) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                                   [](const MonomialField& t, const MonomialKey& k) {
                                       return MonomialKeyLess{}(t.key, k);
                                   });
        if (it != terms_.end() && it->key == key) return it->coeff;
        return Rational(0);
    }

    /// True when every term has the same degree (the zero field is not homogeneous).
    bool is_homogeneous() const {
        if (terms_.empty()) return false;
        return terms_.front().degree() == terms_.back().degree();
    }

    /// Degree of a homogeneous field (lowest term degree otherwise). Precondition: nonzero.
    int degree() const { return terms_.front().degree(); }

    PolyVectorField operator+(const PolyVectorField& other) const;
    PolyVectorField operator-(const PolyVectorField& other) const;
    PolyVectorField operator-() const { return scaled(Rational(-1)); }
    PolyVectorField scaled(const Rational& c) const;

    bool operator==(const PolyVectorField&) const = default;

    /// Orders fields by their term lists (key, then coefficient).
    friend bool operator<(const PolyVectorField& a, const PolyVectorField& b) {
        MonomialKeyLess less;
        std::size_t m = std::min(a.terms_.size(), b.terms_.size());
        for (std::size_t i = 0; i < m; ++i) {
            const auto& s = a.terms_[i];
            const auto& t = b.terms_[i];
            if (less(s.key, t.key)) return true;
            if (less(t.key, s.key)) return false;
            if (s.coeff != t.coeff) return s.coeff < t.coeff;
        }
        return a.terms_.size() < b.terms_.size();
    }

    /// Builds a field from an accumulated map, dropping zero coefficients.
    static PolyVectorField from_map(std::size_t n,
                                    const std::map<MonomialKey, Rational, MonomialKeyLess>& acc) {
        PolyVectorField f(n);
        for (const auto& [k, c] : acc)
            if (c != 0) f.terms_.push_back({c, k});
        return f;
    }

private:
    std::size_t n_ = 0;
    std::vector<MonomialField> terms_;
};

using TermMap = std::map<MonomialKey, Rational, MonomialKeyLess>;

namespace detail {

inline void accumulate(TermMap& acc, const MonomialKey& k, const Rational& c) {
    auto [it, inserted] = acc.try_emplace(k, c);
    if (!inserted) it->second += c;
}

inline TermMap to_map(const PolyVectorField& f) {
    TermMap m;
    for (const auto& t : f.terms()) m.emplace(t.key, t.coeff);
    return m;
}

inline void require_same_dim(const PolyVectorField& a, const PolyVectorField& b) {
    if (a.n() != b.n())
        throw DimensionMismatch("fields live on R^" + std::to_string(a.n()) + " and R^" +
                                std::to_string(b.n()));
}

}  // namespace detail

inline PolyVectorField PolyVectorField::operator+(const PolyVectorField& other) const {
    detail::require_same_dim(*this, other);
    TermMap acc = detail::to_map(*this);
    for (const auto& t : other.terms_) detail::accumulate(acc, t.key, t.coeff);
    return from_map(n_, acc);
}

inline PolyVectorField PolyVectorField::operator-(const PolyVectorField& other) const {
    return *this + other.scaled(Rational(-1));
}

inline PolyVectorField PolyVectorField::scaled(const Rational& c) const {
    PolyVectorField f(n_);
    if (c == 0) return f;
    f.terms_ = terms_;
    for (auto& t : f.terms_) t.coeff *= c;
    return f;
}

/// Canonicalizing constructor: merges like terms and drops zeros.
inline PolyVectorField make_field(std::size_t n, const std::vector<TermSpec>& terms) {
    if (n == 0) throw DimensionMismatch("ambient dimension must be positive");
    TermMap acc;
    for (const auto& t : terms) {
        if (t.exponents.size() != n)
            throw DimensionMismatch("multi-index of length " + std::to_string(t.exponents.size()) +
                                    " on R^" + std::to_string(n));
        if (t.direction >= n)
            throw BadDirection("direction " + std::to_string(t.direction) + " outside 0.." +
                               std::to_string(n - 1));
        detail::accumulate(acc, MonomialKey{t.exponents, t.direction}, t.coeff);
    }
    return PolyVectorField::from_map(n, acc);
}

/// The monomial field x^exponents d/dx^direction with unit coefficient.
inline PolyVectorField monomial_field(std::size_t n, Exponents exponents, std::size_t direction) {
    return make_field(n, {{Rational(1), std::move(exponents), direction}});
}

/// d/dx^i.
inline PolyVectorField constant_field(std::size_t n, std::size_t i) {
    return monomial_field(n, Exponents(n, 0), i);
}

/// x^i d/dx^i.
inline PolyVectorField diagonal_field(std::size_t n, std::size_t i) {
    Exponents e(n, 0);
    e[i] = 1;
    return monomial_field(n, std::move(e), i);
}

/// E = sum_i x^i d/dx^i.
inline PolyVectorField euler(std::size_t n) {
    if (n == 0) throw DimensionMismatch("ambient dimension must be positive");
    std::vector<TermSpec> terms;
    for (std::size_t i = 0; i < n; ++i) {
        Exponents e(n, 0);
        e[i] = 1;
        terms.push_back({Rational(1), std::move(e), i});
    }
    return make_field(n, terms);
}

/// [X, Y] = (X^i dY^j/dx^i - Y^i dX^j/dx^i) d/dx^j.
inline PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    detail::require_same_dim(X, Y);
    const std::size_t n = X.n();
    TermMap acc;
    Exponents e(n);
    for (const auto& a : X.terms()) {
        for (const auto& b : Y.terms()) {
            const std::size_t i = a.key.direction;
            const std::size_t j = b.key.direction;
            // a(b): differentiate b's coefficient along x^i.
            if (unsigned p = b.key.exponents[i]; p > 0) {
                for (std::size_t t = 0; t < n; ++t) e[t] = a.key.exponents[t] + b.key.exponents[t];
                e[i] -= 1;
                detail::accumulate(acc, MonomialKey{e, j}, a.coeff * b.coeff * p);
            }
            if (unsigned p = a.key.exponents[j]; p > 0) {
                for (std::size_t t = 0; t < n; ++t) e[t] = a.key.exponents[t] + b.key.exponents[t];
                e[j] -= 1;
                detail::accumulate(acc, MonomialKey{e, i}, -(a.coeff * b.coeff * p));
            }
        }
    }
    return PolyVectorField::from_map(n, acc);
}

struct HomogeneousPart {
    int degree;
    PolyVectorField field;
};

/// Splits X into homogeneous components, in increasing degree.
inline std::vector<HomogeneousPart> homogeneous_parts(const PolyVectorField& X) {
    std::vector<HomogeneousPart> parts;
    TermMap current;
    int current_degree = 0;
    auto flush = [&] {
        if (!current.empty())
            parts.push_back({current_degree, PolyVectorField::from_map(X.n(), current)});
        current.clear();
    };
    for (const auto& t : X.terms()) {
        if (!current.empty() && t.degree() != current_degree) flush();
        current_degree = t.degree();
        current.emplace(t.key, t.coeff);
    }
    flush();
    return parts;
}

/// True iff every term is c * x^i d/dx^i.
inline bool is_diagonal_linear(const PolyVectorField& X) {
    return std::all_of(X.terms().begin(), X.terms().end(), [](const MonomialField& t) {
        const auto& e = t.key.exponents;
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k] != (k == t.key.direction ? 1u : 0u)) return false;
        return true;
    });
}

/// True iff every term has total degree one.
inline bool is_linear(const PolyVectorField& X) {
    return std::all_of(X.terms().begin(), X.terms().end(),
                       [](const MonomialField& t) { return t.degree() == 0; });
}

/// Default coordinate names: x, y, z for n <= 3, else x1..xn.
inline std::vector<std::string> default_variable_names(std::size_t n) {
    std::vector<std::string> names;
    if (n <= 3) {
        const char* xyz[] = {"x", "y", "z"};
        for (std::size_t i = 0; i < n; ++i) names.emplace_back(xyz[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    }
    return names;
}

/// Renders a field in the generator-file grammar, e.g. "x^2 d/dx - 1/2 * x y d/dz".
inline std::string format_field(const PolyVectorField& X, const std::vector<std::string>& vars) {
    if (X.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : X.terms()) {
        Rational c = t.coeff;
        if (first) {
            if (c < 0) {
                out += "-";
                c = -c;
            }
        } else {
            out += c < 0 ? " - " : " + ";
            if (c < 0) c = -c;
        }
        first = false;
        if (c != 1) out += to_string(c) + " * ";
        for (std::size_t k = 0; k < t.key.exponents.size(); ++k) {
            unsigned p = t.key.exponents[k];
            if (p == 0) continue;
            out += vars.at(k);
            if (p > 1) out += "^" + std::to_string(p);
            out += " ";
        }
        out += "d/d" + vars.at(t.key.direction);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const PolyVectorField& X) {
    return os << format_field(X, default_variable_names(X.n()));
}

}  // namespace lieder
