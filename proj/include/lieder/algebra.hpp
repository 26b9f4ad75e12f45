#pragma once

// Finite-dimensional graded Lie algebras of polynomial vector fields.
//
// `close_and_grade` turns a generator list into a homogeneous basis closed
// under the bracket, sorted by (degree, canonical field order), together with
// its structure constants. Everything downstream works in coordinates with
// respect to that basis.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lieder/errors.hpp"
#include "lieder/linsolve.hpp"
#include "lieder/polyvec.hpp"

namespace lieder {

inline constexpr int kDefaultDegreeCap = 12;

struct AlgebraSpec {
    std::size_t n = 0;
    std::vector<PolyVectorField> generators;
    std::optional<int> degree_cap;
};

struct CloseOptions {
    /// Reject algebras missing a constant field d/dx^i or the Euler field.
    bool require_standing_hypotheses = true;
};

struct AlgebraFlags {
    bool contains_all_constants = false;
    bool contains_euler = false;
    bool contains_all_diagonal = false;
    bool is_separated = false;
    bool diagonal_equals_P0 = false;  ///< P_0 is exactly the span of the x^i d/dx^i
    bool H0_subset_P0 = false;        ///< P_0 holds every linear field
    bool P0_is_euler_line = false;    ///< P_0 = <E>
    bool P0_is_diagonal = false;      ///< every element of P_0 is diagonal linear
};

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }
};

namespace detail {

/// Incremental span of fields with exact coordinates relative to insertion order.
class FieldSpan {
public:
    explicit FieldSpan(std::size_t n = 0) : n_(n) {}

    std::size_t size() const { return count_; }

    /// Adds X when it is independent of what is already there.
    bool add(const PolyVectorField& X) {
        auto [residual, weights] = reduce(X);
        if (residual.empty()) return false;
        auto pivot_it = residual.begin();
        MonomialKey pivot = pivot_it->first;
        Rational inv = 1 / pivot_it->second;
        for (auto& [k, c] : residual) c *= inv;
        SparseRow combo{{count_, inv}};
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (weights[r] != 0) combo = axpby(Rational(1), combo, -weights[r] * inv, rows_[r].combo);
        rows_.push_back({std::move(pivot), std::move(residual), std::move(combo)});
        ++count_;
        return true;
    }

    std::optional<RatVector> coordinates(const PolyVectorField& X) const {
        auto [residual, weights] = reduce(X);
        if (!residual.empty()) return std::nullopt;
        SparseRow acc;
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (weights[r] != 0) acc = axpby(Rational(1), acc, weights[r], rows_[r].combo);
        return to_dense(acc, count_);
    }

private:
    struct Reduced {
        MonomialKey pivot;
        TermMap field;
        SparseRow combo;
    };

    std::pair<TermMap, std::vector<Rational>> reduce(const PolyVectorField& X) const {
        if (X.n() != n_) throw DimensionMismatch("field dimension does not match the algebra");
        TermMap residual = to_map(X);
        std::vector<Rational> weights(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            auto it = residual.find(rows_[r].pivot);
            if (it == residual.end()) continue;
            Rational a = it->second;
            weights[r] = a;
            for (const auto& [k, c] : rows_[r].field) {
                auto [jt, inserted] = residual.try_emplace(k, -(a * c));
                if (!inserted) {
                    jt->second -= a * c;
                    if (jt->second == 0) residual.erase(jt);
                }
            }
        }
        return {std::move(residual), std::move(weights)};
    }

    std::size_t n_;
    std::size_t count_ = 0;
    std::vector<Reduced> rows_;
};

}  // namespace detail

class GradedAlgebra;
GradedAlgebra close_and_grade(const AlgebraSpec& spec, CloseOptions options);

class GradedAlgebra {
public:
    std::size_t n() const { return n_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<PolyVectorField>& basis() const { return basis_; }
    const PolyVectorField& basis(std::size_t i) const { return basis_.at(i); }
    int degree(std::size_t i) const { return degrees_.at(i); }
    const std::map<int, IndexRange>& grading() const { return grading_; }
    const AlgebraFlags& flags() const { return flags_; }
    int degree_cap() const { return degree_cap_; }

    /// Elements the closure had to add beyond the homogeneous parts of the generators.
    const std::vector<PolyVectorField>& adjoined() const { return adjoined_; }

    int min_degree() const { return grading_.empty() ? 0 : grading_.begin()->first; }
    int max_degree() const { return grading_.empty() ? 0 : grading_.rbegin()->first; }

    /// Index range of P_d; empty when P_d = 0.
    IndexRange range(int d) const {
        auto it = grading_.find(d);
        return it == grading_.end() ? IndexRange{} : it->second;
    }

    /// Coordinates of [basis_i, basis_j].
    const SparseRow& structure_constants(std::size_t i, std::size_t j) const {
        return constants_.at(i * dim() + j);
    }

    /// Bracket of two elements given in coordinates.
    SparseRow bracket_coords(const SparseRow& u, const SparseRow& v) const {
        SparseRow out;
        for (const auto& [i, a] : u)
            for (const auto& [j, b] : v) {
                const auto& c = structure_constants(i, j);
                if (!c.empty()) out = axpby(Rational(1), out, a * b, c);
            }
        return out;
    }

    std::optional<RatVector> try_coordinates(const PolyVectorField& X) const {
        if (X.n() != n_) throw DimensionMismatch("field dimension does not match the algebra");
        return span_.coordinates(X);
    }

    /// Exact coordinates of X; throws NotInAlgebra when X is outside the span.
    RatVector coordinates(const PolyVectorField& X) const {
        auto c = try_coordinates(X);
        if (!c) throw NotInAlgebra(format_field(X, default_variable_names(n_)) + " is not in the algebra");
        return *c;
    }

    bool contains(const PolyVectorField& X) const { return try_coordinates(X).has_value(); }

    PolyVectorField element(const SparseRow& coords) const {
        PolyVectorField X(n_);
        for (const auto& [i, c] : coords) X = X + basis_.at(i).scaled(c);
        return X;
    }

    PolyVectorField element(const RatVector& coords) const { return element(to_sparse(coords)); }

    RatVector euler_coordinates() const { return coordinates(euler(n_)); }

private:
    friend GradedAlgebra close_and_grade(const AlgebraSpec& spec, CloseOptions options);

    std::size_t n_ = 0;
    int degree_cap_ = kDefaultDegreeCap;
    std::vector<PolyVectorField> basis_;
    std::vector<int> degrees_;
    std::map<int, IndexRange> grading_;
    std::vector<SparseRow> constants_;
    AlgebraFlags flags_;
    std::vector<PolyVectorField> adjoined_;
    detail::FieldSpan span_;
};

/// Closes the generators under the bracket and grades the result.
///
/// Generators are split into homogeneous parts first. Pairs are bracketed in
/// the order (0,1), (0,2), (1,2), (0,3), ... of insertion; each new bracket is
/// scaled to leading coefficient one before it is adjoined. A nonzero bracket
/// of degree above the cap raises CapExceeded.
inline GradedAlgebra close_and_grade(const AlgebraSpec& spec, CloseOptions options = {}) {
    const std::size_t n = spec.n;
    if (n == 0) throw DimensionMismatch("ambient dimension must be positive");
    const int cap = spec.degree_cap.value_or(kDefaultDegreeCap);
    for (const auto& g : spec.generators)
        if (g.n() != n)
            throw DimensionMismatch("generator on R^" + std::to_string(g.n()) + " in an algebra on R^" +
                                    std::to_string(n));

    detail::FieldSpan work(n);
    std::vector<PolyVectorField> elems;
    std::vector<bool> adjoined;
    for (const auto& g : spec.generators) {
        for (auto& part : homogeneous_parts(g)) {
            if (part.degree > cap) throw CapExceeded(part.degree, cap);
            if (work.add(part.field)) {
                elems.push_back(std::move(part.field));
                adjoined.push_back(false);
            }
        }
    }
    for (std::size_t k = 0; k < elems.size(); ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            PolyVectorField b = bracket(elems[j], elems[k]);
            if (b.is_zero()) continue;
            for (auto& part : homogeneous_parts(b)) {
                if (part.degree > cap) throw CapExceeded(part.degree, cap);
                PolyVectorField f = part.field.scaled(1 / part.field.terms().front().coeff);
                if (work.add(f)) {
                    elems.push_back(std::move(f));
                    adjoined.push_back(true);
                }
            }
        }
    }

    std::vector<std::size_t> order(elems.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        int da = elems[a].degree(), db = elems[b].degree();
        if (da != db) return da < db;
        return elems[a] < elems[b];
    });

    GradedAlgebra A;
    A.n_ = n;
    A.degree_cap_ = cap;
    A.span_ = detail::FieldSpan(n);
    for (std::size_t idx : order) {
        A.basis_.push_back(elems[idx]);
        A.degrees_.push_back(elems[idx].degree());
        A.span_.add(elems[idx]);
        if (adjoined[idx]) A.adjoined_.push_back(elems[idx]);
    }
    for (std::size_t i = 0; i < A.basis_.size(); ++i) {
        auto& r = A.grading_[A.degrees_[i]];
        if (r.size() == 0) r.begin = i;
        r.end = i + 1;
    }
    const std::size_t d = A.dim();
    A.constants_.resize(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if (i == j) continue;
            if (j < i) {
                A.constants_[i * d + j] = axpby(Rational(0), {}, Rational(-1), A.constants_[j * d + i]);
                continue;
            }
            A.constants_[i * d + j] = to_sparse(A.coordinates(bracket(A.basis_[i], A.basis_[j])));
        }

    AlgebraFlags& fl = A.flags_;
    fl.contains_all_constants = true;
    fl.contains_all_diagonal = true;
    for (std::size_t i = 0; i < n; ++i) {
        fl.contains_all_constants = fl.contains_all_constants && A.contains(constant_field(n, i));
        fl.contains_all_diagonal = fl.contains_all_diagonal && A.contains(diagonal_field(n, i));
    }
    fl.contains_euler = A.contains(euler(n));
    fl.is_separated = std::all_of(A.basis_.begin(), A.basis_.end(), [&](const PolyVectorField& X) {
        return std::all_of(X.terms().begin(), X.terms().end(), [&](const MonomialField& t) {
            return A.contains(monomial_field(n, t.key.exponents, t.key.direction));
        });
    });
    const IndexRange p0 = A.range(0);
    fl.P0_is_diagonal = true;
    for (std::size_t i = p0.begin; i < p0.end; ++i)
        fl.P0_is_diagonal = fl.P0_is_diagonal && is_diagonal_linear(A.basis_[i]);
    fl.diagonal_equals_P0 = fl.contains_all_diagonal && p0.size() == n;
    fl.H0_subset_P0 = p0.size() == n * n;
    fl.P0_is_euler_line = fl.contains_euler && p0.size() == 1;

    if (options.require_standing_hypotheses) {
        if (!fl.contains_all_constants)
            throw MissingConstants("the closed algebra lacks some constant field d/dx^i");
        if (!fl.contains_euler) throw MissingEuler("the closed algebra lacks the Euler field");
    }
    return A;
}

/// Free-function form of GradedAlgebra::coordinates.
inline RatVector coordinates(const GradedAlgebra& A, const PolyVectorField& X) { return A.coordinates(X); }

/// Unit coordinate vector e_i in Q^dim.
inline SparseRow unit(std::size_t i) { return {{i, Rational(1)}}; }

struct DerivedData {
    Subspace derived;          ///< [P, P]
    Subspace p0_complement;    ///< chosen complement of P_0 ∩ [P,P] inside P_0
    Subspace p1_p_minus1;      ///< span [P_1, P_-1]
    Subspace p0_p0;            ///< span [P_0, P_0]
    bool hypothesis_A = false; ///< [P_1, P_-1] ⊆ [P_0, P_0]
};

inline Subspace span_of_brackets(const GradedAlgebra& A, IndexRange left, IndexRange right) {
    std::vector<SparseRow> rows;
    for (std::size_t i = left.begin; i < left.end; ++i)
        for (std::size_t j = right.begin; j < right.end; ++j) rows.push_back(A.structure_constants(i, j));
    return Subspace::span(A.dim(), rows);
}

/// Coordinates subspace spanned by the basis elements of degree d.
inline Subspace graded_piece(const GradedAlgebra& A, int d) {
    std::vector<SparseRow> rows;
    IndexRange r = A.range(d);
    for (std::size_t i = r.begin; i < r.end; ++i) rows.push_back(unit(i));
    return Subspace::span(A.dim(), rows);
}

/// The complement of P_0 ∩ [P,P] in P_0 is built from the earliest P_0 basis
/// vectors that extend a basis of the intersection.
inline DerivedData derived_data(const GradedAlgebra& A) {
    DerivedData out;
    const IndexRange all{0, A.dim()};
    out.derived = span_of_brackets(A, all, all);
    out.p1_p_minus1 = span_of_brackets(A, A.range(1), A.range(-1));
    out.p0_p0 = span_of_brackets(A, A.range(0), A.range(0));
    out.hypothesis_A = is_subspace_of(out.p1_p_minus1, out.p0_p0);

    Subspace meet = intersection(graded_piece(A, 0), out.derived);
    Subspace grown = meet;
    std::vector<SparseRow> chosen;
    IndexRange p0 = A.range(0);
    for (std::size_t i = p0.begin; i < p0.end; ++i) {
        if (contains(grown, unit(i))) continue;
        chosen.push_back(unit(i));
        grown = sum(grown, Subspace::span(A.dim(), {unit(i)}));
    }
    out.p0_complement = Subspace::span(A.dim(), chosen);
    return out;
}

/// Every monomial field of degree -1..cap on R^n, in canonical order.
inline std::vector<PolyVectorField> truncated_ambient_basis(std::size_t n, int cap) {
    std::vector<MonomialKey> keys;
    Exponents e(n, 0);
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == n) {
            e[pos] = static_cast<unsigned>(remaining);
            for (std::size_t dir = 0; dir < n; ++dir) keys.push_back({e, dir});
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[pos] = static_cast<unsigned>(k);
            self(self, pos + 1, remaining - k);
        }
    };
    for (int t = 0; t <= cap + 1; ++t) rec(rec, 0, t);
    std::sort(keys.begin(), keys.end(), MonomialKeyLess{});
    std::vector<PolyVectorField> out;
    for (auto& k : keys) out.push_back(monomial_field(n, k.exponents, k.direction));
    return out;
}

namespace detail {

inline void require_ambient_cap(const GradedAlgebra& A, int cap) {
    if (cap < A.max_degree())
        throw InvalidArgument("ambient cap " + std::to_string(cap) + " below the algebra's top degree " +
                              std::to_string(A.max_degree()));
}

/// Rows of the linear system sum_k x_k [m_k, basis_i] (+ extra columns) = 0,
/// one row per (i, output monomial).
struct AmbientRowLess {
    bool operator()(const std::pair<std::size_t, MonomialKey>& a,
                    const std::pair<std::size_t, MonomialKey>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return MonomialKeyLess{}(a.second, b.second);
    }
};

struct AmbientBracketSystem {
    std::map<std::pair<std::size_t, MonomialKey>, SparseRow, AmbientRowLess> rows;

    void add(std::size_t i, const PolyVectorField& value, std::size_t column, const Rational& scale) {
        for (const auto& t : value.terms()) rows[{i, t.key}].emplace_back(column, t.coeff * scale);
    }

    RatMatrix matrix(std::size_t cols) const {
        RatMatrix M(0, cols);
        for (const auto& [key, row] : rows) M.append_row(row);
        return M;
    }
};

}  // namespace detail

/// Fields of degree <= cap commuting with all of A, in coordinates of
/// truncated_ambient_basis(n, cap).
inline Subspace centralizer_in_truncated_ambient(const GradedAlgebra& A, int ambient_cap) {
    detail::require_ambient_cap(A, ambient_cap);
    auto amb = truncated_ambient_basis(A.n(), ambient_cap);
    detail::AmbientBracketSystem sys;
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t k = 0; k < amb.size(); ++k) sys.add(i, bracket(amb[k], A.basis(i)), k, 1);
    return kernel(sys.matrix(amb.size()));
}

/// Fields X of degree <= cap with [X, A] ⊆ A, in ambient coordinates.
inline Subspace normalizer_in_truncated_ambient(const GradedAlgebra& A, int ambient_cap) {
    detail::require_ambient_cap(A, ambient_cap);
    auto amb = truncated_ambient_basis(A.n(), ambient_cap);
    const std::size_t K = amb.size();
    const std::size_t d = A.dim();
    detail::AmbientBracketSystem sys;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < K; ++k) sys.add(i, bracket(amb[k], A.basis(i)), k, 1);
        for (std::size_t j = 0; j < d; ++j) sys.add(i, A.basis(j), K + i * d + j, -1);
    }
    return project(kernel(sys.matrix(K + d * d)), 0, K);
}

/// span(A) in the coordinates of truncated_ambient_basis(n, cap).
inline Subspace algebra_in_ambient(const GradedAlgebra& A, int ambient_cap) {
    detail::require_ambient_cap(A, ambient_cap);
    auto amb = truncated_ambient_basis(A.n(), ambient_cap);
    std::map<MonomialKey, std::size_t, MonomialKeyLess> index;
    for (std::size_t k = 0; k < amb.size(); ++k) index.emplace(amb[k].terms().front().key, k);
    std::vector<SparseRow> rows;
    for (const auto& X : A.basis()) {
        SparseRow r;
        for (const auto& t : X.terms()) r.emplace_back(index.at(t.key), t.coeff);
        rows.push_back(normalized(std::move(r)));
    }
    return Subspace::span(amb.size(), rows);
}

}  // namespace lieder
