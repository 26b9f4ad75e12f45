#pragma once

// Exact sparse linear algebra over Q.
//
// Elimination runs on primitive integer rows: every row is scaled to coprime
// integer entries, two rows are combined as a*x - b*y with a, b reduced by
// their gcd, and the result is made primitive again. Rationals reappear only
// when the final reduced echelon form is normalized to unit pivots.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lieder/errors.hpp"
#include "lieder/rational.hpp"

namespace lieder {

using RatVector = std::vector<Rational>;

/// Sparse vector: (index, value) pairs, strictly increasing index, nonzero values.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

inline SparseRow to_sparse(const RatVector& v) {
    SparseRow r;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) r.emplace_back(i, v[i]);
    return r;
}

inline RatVector to_dense(const SparseRow& r, std::size_t n) {
    RatVector v(n);
    for (const auto& [i, x] : r) v.at(i) = x;
    return v;
}

/// Sorts by index, merges duplicates and drops zeros.
inline SparseRow normalized(SparseRow r) {
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseRow out;
    for (auto& [i, x] : r) {
        if (!out.empty() && out.back().first == i)
            out.back().second += x;
        else
            out.emplace_back(i, std::move(x));
        if (out.back().second == 0) out.pop_back();
    }
    return out;
}

/// a*x + b*y for sparse rows.
inline SparseRow axpby(const Rational& a, const SparseRow& x, const Rational& b, const SparseRow& y) {
    SparseRow out;
    out.reserve(x.size() + y.size());
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() || j != y.end()) {
        if (j == y.end() || (i != x.end() && i->first < j->first)) {
            Rational v = a * i->second;
            if (v != 0) out.emplace_back(i->first, std::move(v));
            ++i;
        } else if (i == x.end() || j->first < i->first) {
            Rational v = b * j->second;
            if (v != 0) out.emplace_back(j->first, std::move(v));
            ++j;
        } else {
            Rational v = a * i->second + b * j->second;
            if (v != 0) out.emplace_back(i->first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

inline Rational dot(const SparseRow& a, const SparseRow& b) {
    Rational s = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first)
            ++i;
        else if (j->first < i->first)
            ++j;
        else {
            s += i->second * j->second;
            ++i;
            ++j;
        }
    }
    return s;
}

/// Sparse row-major rational matrix.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows) {}

    std::size_t rows() const { return data_.size(); }
    std::size_t cols() const { return cols_; }

    /// Appends a row; entries are normalized and must lie in 0..cols-1.
    void append_row(SparseRow row) {
        row = normalized(std::move(row));
        if (!row.empty() && row.back().first >= cols_)
            throw DimensionMismatch("column " + std::to_string(row.back().first) +
                                    " out of range for " + std::to_string(cols_) + " columns");
        data_.push_back(std::move(row));
    }

    void set(std::size_t r, std::size_t c, const Rational& v) {
        if (r >= rows() || c >= cols_) throw DimensionMismatch("entry index out of range");
        auto& row = data_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& e, std::size_t k) { return e.first < k; });
        if (it != row.end() && it->first == c) {
            if (v == 0)
                row.erase(it);
            else
                it->second = v;
        } else if (v != 0) {
            row.insert(it, {c, v});
        }
    }

    Rational at(std::size_t r, std::size_t c) const {
        const auto& row = data_.at(r);
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& e, std::size_t k) { return e.first < k; });
        return (it != row.end() && it->first == c) ? it->second : Rational(0);
    }

    const SparseRow& row(std::size_t r) const { return data_.at(r); }
    const std::vector<SparseRow>& row_data() const { return data_; }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }

    RatVector multiply(const RatVector& v) const {
        if (v.size() != cols_) throw DimensionMismatch("vector length does not match column count");
        RatVector out(rows());
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto& [c, x] : data_[r]) out[r] += x * v[c];
        return out;
    }

    static RatMatrix from_dense(const std::vector<RatVector>& rows, std::size_t cols) {
        RatMatrix m(0, cols);
        for (const auto& r : rows) {
            if (r.size() != cols) throw DimensionMismatch("ragged dense matrix");
            m.append_row(to_sparse(r));
        }
        return m;
    }

private:
    std::size_t cols_ = 0;
    std::vector<SparseRow> data_;
};

namespace detail {

using IntRow = std::vector<std::pair<std::size_t, Integer>>;

inline void make_primitive(IntRow& r) {
    if (r.empty()) return;
    Integer g = 0;
    for (const auto& [c, x] : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    if (r.front().second < 0) g = -g;
    if (g != 1)
        for (auto& [c, x] : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

inline IntRow to_int_row(const SparseRow& row) {
    Integer l = 1;
    for (const auto& [c, x] : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntRow out;
    out.reserve(row.size());
    for (const auto& [c, x] : row) {
        Integer v = l / x.get_den();
        v *= x.get_num();
        out.emplace_back(c, std::move(v));
    }
    make_primitive(out);
    return out;
}

/// a*x - b*y; the caller arranges for some column to cancel.
inline IntRow combine(const Integer& a, const IntRow& x, const Integer& b, const IntRow& y) {
    IntRow out;
    out.reserve(x.size() + y.size());
    auto i = x.begin();
    auto j = y.begin();
    Integer t;
    while (i != x.end() || j != y.end()) {
        if (j == y.end() || (i != x.end() && i->first < j->first)) {
            out.emplace_back(i->first, a * i->second);
            ++i;
        } else if (i == x.end() || j->first < i->first) {
            out.emplace_back(j->first, -(b * j->second));
            ++j;
        } else {
            t = a * i->second - b * j->second;
            if (t != 0) out.emplace_back(i->first, t);
            ++i;
            ++j;
        }
    }
    return out;
}

/// Eliminates column `col` of `row` using `pivot` (whose entry at `col` is `p`).
inline void eliminate(IntRow& row, const Integer& row_entry, const IntRow& pivot, const Integer& p) {
    Integer g = gcd(p, row_entry);
    Integer a = p / g;
    Integer b = row_entry / g;
    row = combine(a, row, b, pivot);
    make_primitive(row);
}

inline const Integer* entry(const IntRow& row, std::size_t col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, std::size_t k) { return e.first < k; });
    return (it != row.end() && it->first == col) ? &it->second : nullptr;
}

/// Incremental integer row-echelon form keyed by pivot column.
class Echelon {
public:
    /// Reduces `row` against the current pivots and stores it if independent.
    bool insert(IntRow row) {
        while (!row.empty()) {
            std::size_t lead = row.front().first;
            auto it = pivots_.find(lead);
            if (it == pivots_.end()) {
                pivots_.emplace(lead, std::move(row));
                return true;
            }
            Integer e = row.front().second;
            eliminate(row, e, it->second, it->second.front().second);
        }
        return false;
    }

    std::size_t rank() const { return pivots_.size(); }

    /// Reduced echelon form with unit pivots, pivot columns increasing.
    std::vector<SparseRow> reduced() {
        // Back-substitute from the last pivot so that each pivot row used for
        // elimination is already free of later pivot columns.
        for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
            IntRow& row = it->second;
            for (auto later = it.base(); later != pivots_.end(); ++later) {
                const Integer* e = entry(row, later->first);
                if (!e) continue;
                Integer ev = *e;
                eliminate(row, ev, later->second, later->second.front().second);
            }
        }
        std::vector<SparseRow> out;
        out.reserve(pivots_.size());
        for (const auto& [col, row] : pivots_) {
            const Integer& p = row.front().second;
            SparseRow r;
            r.reserve(row.size());
            for (const auto& [c, x] : row) {
                Rational q(x, p);
                q.canonicalize();
                r.emplace_back(c, std::move(q));
            }
            out.push_back(std::move(r));
        }
        return out;
    }

private:
    std::map<std::size_t, IntRow> pivots_;
};

inline std::vector<SparseRow> rref(const std::vector<SparseRow>& rows) {
    Echelon ech;
    for (const auto& r : rows)
        if (!r.empty()) ech.insert(to_int_row(r));
    return ech.reduced();
}

}  // namespace detail

/// A linear subspace of Q^ambient, stored by its reduced row-echelon basis.
/// The reduced form is unique, so `==` is subspace equality.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    static Subspace span(std::size_t ambient, const std::vector<SparseRow>& vectors) {
        for (const auto& v : vectors)
            if (!v.empty() && v.back().first >= ambient)
                throw DimensionMismatch("vector index outside ambient dimension " +
                                        std::to_string(ambient));
        Subspace s(ambient);
        s.basis_ = detail::rref(vectors);
        return s;
    }

    static Subspace span_dense(std::size_t ambient, const std::vector<RatVector>& vectors) {
        std::vector<SparseRow> rows;
        for (const auto& v : vectors) {
            if (v.size() != ambient) throw DimensionMismatch("vector length differs from ambient");
            rows.push_back(to_sparse(v));
        }
        return span(ambient, rows);
    }

    static Subspace full(std::size_t ambient) {
        Subspace s(ambient);
        for (std::size_t i = 0; i < ambient; ++i) s.basis_.push_back({{i, Rational(1)}});
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    bool is_zero() const { return basis_.empty(); }
    const std::vector<SparseRow>& basis() const { return basis_; }
    RatVector dense(std::size_t i) const { return to_dense(basis_.at(i), ambient_); }

    std::vector<std::size_t> pivots() const {
        std::vector<std::size_t> p;
        for (const auto& r : basis_) p.push_back(r.front().first);
        return p;
    }

    /// Residual of `v` after subtracting its projection along the pivot columns.
    SparseRow residual(SparseRow v) const {
        for (const auto& row : basis_) {
            std::size_t p = row.front().first;
            auto it = std::lower_bound(v.begin(), v.end(), p,
                                       [](const auto& e, std::size_t k) { return e.first < k; });
            if (it == v.end() || it->first != p) continue;
            Rational c = it->second;
            v = axpby(Rational(1), v, -c, row);
        }
        return v;
    }

    bool operator==(const Subspace&) const = default;

private:
    std::size_t ambient_ = 0;
    std::vector<SparseRow> basis_;
};

/// Rank of M.
inline std::size_t rank(const RatMatrix& M) {
    detail::Echelon ech;
    for (const auto& r : M.row_data())
        if (!r.empty()) ech.insert(detail::to_int_row(r));
    return ech.rank();
}

/// {v : Mv = 0}.
inline Subspace kernel(const RatMatrix& M) {
    const std::size_t n = M.cols();
    auto R = detail::rref(M.row_data());
    std::vector<bool> is_pivot(n, false);
    for (const auto& r : R) is_pivot[r.front().first] = true;
    // Column f of the reduced form, indexed by the pivot row that holds it.
    std::vector<SparseRow> free_cols(n);
    for (const auto& r : R) {
        std::size_t p = r.front().first;
        for (std::size_t k = 1; k < r.size(); ++k) free_cols[r[k].first].emplace_back(p, -r[k].second);
    }
    std::vector<SparseRow> vectors;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        SparseRow v = std::move(free_cols[f]);
        v.emplace_back(f, Rational(1));
        vectors.push_back(normalized(std::move(v)));
    }
    return Subspace::span(n, vectors);
}

inline bool contains(const Subspace& S, const SparseRow& v) {
    if (!v.empty() && v.back().first >= S.ambient_dim())
        throw DimensionMismatch("vector index outside ambient dimension");
    return S.residual(v).empty();
}

inline bool contains(const Subspace& S, const RatVector& v) {
    if (v.size() != S.ambient_dim())
        throw DimensionMismatch("vector of length " + std::to_string(v.size()) +
                                " tested against subspace of Q^" + std::to_string(S.ambient_dim()));
    return contains(S, to_sparse(v));
}

/// B is a subspace of A.
inline bool is_subspace_of(const Subspace& B, const Subspace& A) {
    if (A.ambient_dim() != B.ambient_dim()) throw DimensionMismatch("ambient dimensions differ");
    return std::all_of(B.basis().begin(), B.basis().end(),
                       [&](const SparseRow& v) { return A.residual(v).empty(); });
}

inline Subspace sum(const Subspace& A, const Subspace& B) {
    if (A.ambient_dim() != B.ambient_dim()) throw DimensionMismatch("ambient dimensions differ");
    std::vector<SparseRow> rows = A.basis();
    rows.insert(rows.end(), B.basis().begin(), B.basis().end());
    return Subspace::span(A.ambient_dim(), rows);
}

/// (A + B, A ∩ B), the intersection by Zassenhaus' method.
inline std::pair<Subspace, Subspace> sum_and_intersection(const Subspace& A, const Subspace& B) {
    if (A.ambient_dim() != B.ambient_dim()) throw DimensionMismatch("ambient dimensions differ");
    const std::size_t n = A.ambient_dim();
    std::vector<SparseRow> rows;
    for (const auto& a : A.basis()) {
        SparseRow r = a;
        for (const auto& [i, x] : a) r.emplace_back(i + n, x);
        rows.push_back(std::move(r));
    }
    for (const auto& b : B.basis()) rows.push_back(b);
    auto R = detail::rref(rows);
    std::vector<SparseRow> sum_rows, meet_rows;
    for (auto& r : R) {
        if (r.front().first < n) {
            SparseRow left;
            for (const auto& [i, x] : r)
                if (i < n) left.emplace_back(i, x);
            sum_rows.push_back(std::move(left));
        } else {
            SparseRow right;
            for (const auto& [i, x] : r) right.emplace_back(i - n, x);
            meet_rows.push_back(std::move(right));
        }
    }
    return {Subspace::span(n, sum_rows), Subspace::span(n, meet_rows)};
}

inline Subspace intersection(const Subspace& A, const Subspace& B) {
    return sum_and_intersection(A, B).second;
}

/// dim A - dim B, requiring B ⊆ A.
inline std::size_t quotient_dim(const Subspace& A, const Subspace& B) {
    if (!is_subspace_of(B, A)) throw NotASubspace("quotient requires B to be contained in A");
    return A.dim() - B.dim();
}

/// {v ∈ S : c·v = 0 for every constraint row c}.
inline Subspace restrict_to(const Subspace& S, const std::vector<SparseRow>& constraints) {
    const std::size_t k = S.dim();
    RatMatrix W(0, k);
    for (const auto& c : constraints) {
        SparseRow row;
        for (std::size_t t = 0; t < k; ++t) {
            Rational v = dot(c, S.basis()[t]);
            if (v != 0) row.emplace_back(t, std::move(v));
        }
        if (!row.empty()) W.append_row(std::move(row));
    }
    if (W.rows() == 0) return S;
    Subspace coeffs = kernel(W);
    std::vector<SparseRow> vectors;
    for (const auto& c : coeffs.basis()) {
        SparseRow v;
        for (const auto& [t, x] : c) v = axpby(Rational(1), v, x, S.basis()[t]);
        vectors.push_back(std::move(v));
    }
    return Subspace::span(S.ambient_dim(), vectors);
}

/// {v ∈ S : v_i = 0 for every i with allowed[i] == false}.
inline Subspace restrict_support(const Subspace& S, const std::vector<bool>& allowed) {
    if (allowed.size() != S.ambient_dim()) throw DimensionMismatch("support mask length");
    std::vector<SparseRow> constraints;
    for (std::size_t i = 0; i < allowed.size(); ++i)
        if (!allowed[i]) constraints.push_back({{i, Rational(1)}});
    return restrict_to(S, constraints);
}

/// Image of S under the coordinate projection onto [begin, begin + count).
inline Subspace project(const Subspace& S, std::size_t begin, std::size_t count) {
    if (begin + count > S.ambient_dim()) throw DimensionMismatch("projection window out of range");
    std::vector<SparseRow> rows;
    for (const auto& b : S.basis()) {
        SparseRow r;
        for (const auto& [i, x] : b)
            if (i >= begin && i < begin + count) r.emplace_back(i - begin, x);
        rows.push_back(std::move(r));
    }
    return Subspace::span(count, rows);
}

/// S placed into Q^ambient at coordinate offset `offset`.
inline Subspace embed(const Subspace& S, std::size_t ambient, std::size_t offset) {
    if (offset + S.ambient_dim() > ambient) throw DimensionMismatch("embedding out of range");
    std::vector<SparseRow> rows;
    for (const auto& b : S.basis()) {
        SparseRow r;
        for (const auto& [i, x] : b) r.emplace_back(i + offset, x);
        rows.push_back(std::move(r));
    }
    return Subspace::span(ambient, rows);
}

}  // namespace lieder
