#pragma once

// Linear systems for the derivation-like species of a graded algebra P.
//
// An endomorphism f is stored as a dim x dim matrix acting on basis
// coordinates: entry (p, q) is the coefficient of basis_p in f(basis_q).
// A solution of arity k is the row-major concatenation of k such matrices,
// ordered (f), (f, g) or (f, h, g), so unknown (slot, p, q) sits at
// slot * dim^2 + p * dim + q.
//
// Pairs enumerated per species:
//   derivations, quasiderivations   i < j            (i = j is vacuous)
//   centroid, quasicentroid         i <= j           (both equalities for the centroid)
//   generalized derivations         all ordered (i, j), diagonal included

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lieder/algebra.hpp"
#include "lieder/errors.hpp"
#include "lieder/linsolve.hpp"

namespace lieder {

enum class Species { Inner, Der, Centroid, QCentroid, QDerPair, GenDerTriple, MDerMinus2 };

inline std::string species_name(Species s) {
    switch (s) {
        case Species::Inner: return "AD";
        case Species::Der: return "DER";
        case Species::Centroid: return "CENTROID";
        case Species::QCentroid: return "QCENTROID";
        case Species::QDerPair: return "QDER_PAIR";
        case Species::GenDerTriple: return "GENDER_TRIPLE";
        case Species::MDerMinus2: return "MDER_MINUS2";
    }
    return "?";
}

/// Endomorphism of P in basis coordinates.
class Endo {
public:
    Endo() = default;
    explicit Endo(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

    static Endo identity(std::size_t dim) {
        Endo e(dim);
        for (std::size_t i = 0; i < dim; ++i) e(i, i) = 1;
        return e;
    }

    /// Slot `slot` of a stacked solution vector.
    static Endo from_stacked(std::size_t dim, const SparseRow& v, std::size_t slot = 0) {
        Endo e(dim);
        const std::size_t lo = slot * dim * dim, hi = lo + dim * dim;
        for (const auto& [i, x] : v)
            if (i >= lo && i < hi) e.entries_[i - lo] = x;
        return e;
    }

    /// Builds f from the images of the basis elements (coordinate vectors).
    static Endo from_columns(const std::vector<SparseRow>& images) {
        Endo e(images.size());
        for (std::size_t q = 0; q < images.size(); ++q)
            for (const auto& [p, x] : images[q]) e(p, q) = x;
        return e;
    }

    std::size_t dim() const { return dim_; }
    Rational& operator()(std::size_t p, std::size_t q) { return entries_.at(p * dim_ + q); }
    const Rational& operator()(std::size_t p, std::size_t q) const { return entries_.at(p * dim_ + q); }

    SparseRow column(std::size_t q) const {
        SparseRow c;
        for (std::size_t p = 0; p < dim_; ++p)
            if ((*this)(p, q) != 0) c.emplace_back(p, (*this)(p, q));
        return c;
    }

    SparseRow apply(const SparseRow& x) const {
        SparseRow out;
        for (const auto& [q, a] : x) out = axpby(Rational(1), out, a, column(q));
        return out;
    }

    SparseRow flatten(std::size_t slot = 0) const {
        SparseRow r;
        const std::size_t off = slot * dim_ * dim_;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i] != 0) r.emplace_back(off + i, entries_[i]);
        return r;
    }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const Rational& x) { return x == 0; });
    }

    Endo operator+(const Endo& o) const {
        Endo e = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) e.entries_[i] += o.entries_.at(i);
        return e;
    }
    Endo operator-(const Endo& o) const { return *this + o.scaled(-1); }
    Endo scaled(const Rational& c) const {
        Endo e = *this;
        for (auto& x : e.entries_) x *= c;
        return e;
    }

    bool operator==(const Endo&) const = default;

private:
    std::size_t dim_ = 0;
    RatVector entries_;
};

/// Concatenates a tuple of endomorphisms into one stacked vector.
inline SparseRow stack(const std::vector<Endo>& tuple) {
    SparseRow r;
    for (std::size_t s = 0; s < tuple.size(); ++s) {
        auto part = tuple[s].flatten(s);
        r.insert(r.end(), part.begin(), part.end());
    }
    return r;
}

struct SolutionSpace {
    Species species = Species::Der;
    std::size_t arity = 1;
    std::size_t algebra_dim = 0;
    Subspace space;
    std::optional<std::map<int, Subspace>> degree_blocks;
    /// False when a bounded enumeration stopped early (the space over-approximates).
    bool exhaustive = true;

    std::size_t slot_size() const { return algebra_dim * algebra_dim; }
    std::size_t dim() const { return space.dim(); }

    Subspace slot_projection(std::size_t slot) const { return project(space, slot * slot_size(), slot_size()); }
    Subspace f_projection() const { return slot_projection(0); }

    /// Solutions whose f component vanishes (the K part of the pair space).
    Subspace f_zero_part() const {
        std::vector<bool> allowed(space.ambient_dim(), true);
        for (std::size_t i = 0; i < slot_size(); ++i) allowed[i] = false;
        return restrict_support(space, allowed);
    }

    std::vector<Endo> unstack(const SparseRow& v) const {
        std::vector<Endo> out;
        for (std::size_t s = 0; s < arity; ++s) out.push_back(Endo::from_stacked(algebra_dim, v, s));
        return out;
    }

    bool contains(const std::vector<Endo>& tuple) const {
        if (tuple.size() != arity) throw DimensionMismatch("tuple arity differs from the solution space");
        return lieder::contains(space, stack(tuple));
    }
};

namespace detail {

/// Accumulates one vector equation (dim components) at a time into rows of a matrix.
class SystemBuilder {
public:
    SystemBuilder(const GradedAlgebra& A, std::size_t arity)
        : A_(A), d_(A.dim()), matrix_(0, arity * A.dim() * A.dim()), acc_(A.dim()) {}

    std::size_t var(std::size_t slot, std::size_t p, std::size_t q) const { return slot * d_ * d_ + p * d_ + q; }

    /// sign * [F v, w]
    void f_left(std::size_t slot, const SparseRow& v, const SparseRow& w, int sign) {
        for (std::size_t p = 0; p < d_; ++p) {
            SparseRow bw = A_.bracket_coords(unit(p), w);
            for (const auto& [q, vq] : v)
                for (const auto& [k, c] : bw) add(k, var(slot, p, q), sign * vq * c);
        }
    }

    /// sign * [v, F w]
    void f_right(std::size_t slot, const SparseRow& v, const SparseRow& w, int sign) {
        for (std::size_t p = 0; p < d_; ++p) {
            SparseRow vb = A_.bracket_coords(v, unit(p));
            for (const auto& [q, wq] : w)
                for (const auto& [k, c] : vb) add(k, var(slot, p, q), sign * wq * c);
        }
    }

    /// sign * F(u)
    void f_of(std::size_t slot, const SparseRow& u, int sign) {
        for (const auto& [q, uq] : u)
            for (std::size_t k = 0; k < d_; ++k) add(k, var(slot, k, q), sign * uq);
    }

    /// Closes the current equation, emitting its nonzero components.
    void end() {
        for (auto& row : acc_) {
            SparseRow r;
            for (auto& [c, x] : row)
                if (x != 0) r.emplace_back(c, std::move(x));
            if (!r.empty()) matrix_.append_row(std::move(r));
            row.clear();
        }
    }

    /// A bare scalar equation c·x = 0.
    void scalar_row(SparseRow r) { matrix_.append_row(std::move(r)); }

    const RatMatrix& matrix() const { return matrix_; }

private:
    void add(std::size_t k, std::size_t column, const Rational& value) {
        auto [it, inserted] = acc_[k].try_emplace(column, value);
        if (!inserted) it->second += value;
    }

    const GradedAlgebra& A_;
    std::size_t d_;
    RatMatrix matrix_;
    std::vector<std::map<std::size_t, Rational>> acc_;
};

inline SolutionSpace make_space(Species s, std::size_t arity, const GradedAlgebra& A, Subspace space) {
    SolutionSpace out;
    out.species = s;
    out.arity = arity;
    out.algebra_dim = A.dim();
    out.space = std::move(space);
    return out;
}

}  // namespace detail

/// ad(X) = [X, .] for X in coordinates.
inline Endo ad_endo(const GradedAlgebra& A, const SparseRow& x) {
    std::vector<SparseRow> images;
    for (std::size_t q = 0; q < A.dim(); ++q) images.push_back(A.bracket_coords(x, unit(q)));
    return Endo::from_columns(images);
}

inline SolutionSpace inner_derivations(const GradedAlgebra& A) {
    std::vector<SparseRow> rows;
    for (std::size_t i = 0; i < A.dim(); ++i) rows.push_back(ad_endo(A, unit(i)).flatten());
    return detail::make_space(Species::Inner, 1, A, Subspace::span(A.dim() * A.dim(), rows));
}

/// Constraint matrix of a species (arity 1, 2 or 3 as documented above).
inline RatMatrix species_system(const GradedAlgebra& A, Species s) {
    const std::size_t d = A.dim();
    switch (s) {
        case Species::Der: {
            detail::SystemBuilder b(A, 1);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j) {
                    b.f_of(0, A.structure_constants(i, j), 1);
                    b.f_left(0, unit(i), unit(j), -1);
                    b.f_right(0, unit(i), unit(j), -1);
                    b.end();
                }
            return b.matrix();
        }
        case Species::Centroid: {
            detail::SystemBuilder b(A, 1);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i; j < d; ++j) {
                    b.f_of(0, A.structure_constants(i, j), 1);
                    b.f_left(0, unit(i), unit(j), -1);
                    b.end();
                    b.f_of(0, A.structure_constants(i, j), 1);
                    b.f_right(0, unit(i), unit(j), -1);
                    b.end();
                }
            return b.matrix();
        }
        case Species::QCentroid: {
            detail::SystemBuilder b(A, 1);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i; j < d; ++j) {
                    b.f_left(0, unit(i), unit(j), 1);
                    b.f_right(0, unit(i), unit(j), -1);
                    b.end();
                }
            return b.matrix();
        }
        case Species::QDerPair: {
            detail::SystemBuilder b(A, 2);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j) {
                    b.f_left(0, unit(i), unit(j), 1);
                    b.f_right(0, unit(i), unit(j), 1);
                    b.f_of(1, A.structure_constants(i, j), -1);
                    b.end();
                }
            return b.matrix();
        }
        case Species::GenDerTriple: {
            detail::SystemBuilder b(A, 3);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    b.f_left(0, unit(i), unit(j), 1);
                    b.f_right(1, unit(i), unit(j), 1);
                    b.f_of(2, A.structure_constants(i, j), -1);
                    b.end();
                }
            return b.matrix();
        }
        default:
            throw InvalidArgument("species " + species_name(s) + " has no plain constraint system");
    }
}

inline std::size_t species_arity(Species s) {
    switch (s) {
        case Species::QDerPair: return 2;
        case Species::GenDerTriple: return 3;
        default: return 1;
    }
}

/// Kernel of the species' constraint system.
inline SolutionSpace solve_species(const GradedAlgebra& A, Species s) {
    return detail::make_space(s, species_arity(s), A, kernel(species_system(A, s)));
}

inline SolutionSpace solve_derivations(const GradedAlgebra& A) { return solve_species(A, Species::Der); }
inline SolutionSpace solve_centroid(const GradedAlgebra& A) { return solve_species(A, Species::Centroid); }
inline SolutionSpace solve_quasicentroid(const GradedAlgebra& A) { return solve_species(A, Species::QCentroid); }
inline SolutionSpace solve_generalized(const GradedAlgebra& A) { return solve_species(A, Species::GenDerTriple); }

/// For each degree shift d, the solutions whose components all map P_j into
/// P_{j+d}. Only nonzero blocks are returned. Every graded system here splits
/// into these blocks, so their sum is the whole space.
inline std::map<int, Subspace> degree_filter(const SolutionSpace& S, const GradedAlgebra& A) {
    if (S.arity > 2) throw InvalidArgument("degree_filter expects arity 1 or 2");
    const std::size_t d = A.dim();
    std::map<int, Subspace> blocks;
    const int spread = A.max_degree() - A.min_degree();
    for (int shift = -spread; shift <= spread; ++shift) {
        std::vector<bool> allowed(S.space.ambient_dim(), false);
        for (std::size_t slot = 0; slot < S.arity; ++slot)
            for (std::size_t p = 0; p < d; ++p)
                for (std::size_t q = 0; q < d; ++q)
                    allowed[slot * d * d + p * d + q] = A.degree(p) == A.degree(q) + shift;
        Subspace block = restrict_support(S.space, allowed);
        if (!block.is_zero()) blocks.emplace(shift, std::move(block));
    }
    return blocks;
}

inline SolutionSpace solve_quasiderivations(const GradedAlgebra& A) {
    SolutionSpace S = solve_species(A, Species::QDerPair);
    S.degree_blocks = degree_filter(S, A);
    return S;
}

/// Degree-d block of S intersected with {f(E) = 0}.
inline Subspace vanishing_on_E_subspace(const SolutionSpace& S, const GradedAlgebra& A, int d) {
    auto blocks = S.degree_blocks ? *S.degree_blocks : degree_filter(S, A);
    auto it = blocks.find(d);
    if (it == blocks.end()) return Subspace(S.space.ambient_dim());
    const std::size_t n = A.dim();
    const SparseRow e = to_sparse(A.euler_coordinates());
    std::vector<SparseRow> constraints;
    for (std::size_t p = 0; p < n; ++p) {
        SparseRow c;
        for (const auto& [q, eq] : e) c.emplace_back(p * n + q, eq);
        constraints.push_back(std::move(c));
    }
    return restrict_to(it->second, constraints);
}

// Direct residual checks on every ordered basis pair. These evaluate the
// defining identities and do not go through the constraint matrices.

inline bool satisfies_derivation(const GradedAlgebra& A, const Endo& D) {
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) {
            SparseRow lhs = D.apply(A.structure_constants(i, j));
            SparseRow rhs = axpby(1, A.bracket_coords(D.column(i), unit(j)), 1, A.bracket_coords(unit(i), D.column(j)));
            if (lhs != rhs) return false;
        }
    return true;
}

inline bool satisfies_centroid(const GradedAlgebra& A, const Endo& f) {
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) {
            SparseRow a = f.apply(A.structure_constants(i, j));
            if (a != A.bracket_coords(f.column(i), unit(j)) || a != A.bracket_coords(unit(i), f.column(j)))
                return false;
        }
    return true;
}

inline bool satisfies_quasicentroid(const GradedAlgebra& A, const Endo& f) {
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j)
            if (A.bracket_coords(f.column(i), unit(j)) != A.bracket_coords(unit(i), f.column(j))) return false;
    return true;
}

/// [fX, Y] + [X, hY] = g[X, Y] on all basis pairs.
inline bool satisfies_generalized(const GradedAlgebra& A, const Endo& f, const Endo& h, const Endo& g) {
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) {
            SparseRow lhs = axpby(1, A.bracket_coords(f.column(i), unit(j)), 1, A.bracket_coords(unit(i), h.column(j)));
            if (lhs != g.apply(A.structure_constants(i, j))) return false;
        }
    return true;
}

inline bool satisfies_quasiderivation(const GradedAlgebra& A, const Endo& f, const Endo& g) {
    return satisfies_generalized(A, f, f, g);
}

/// Checks that every basis vector of S solves its species' identity.
inline bool all_solutions_verified(const SolutionSpace& S, const GradedAlgebra& A) {
    for (const auto& v : S.space.basis()) {
        auto t = S.unstack(v);
        bool ok = false;
        switch (S.species) {
            case Species::Inner:
            case Species::Der: ok = satisfies_derivation(A, t[0]); break;
            case Species::Centroid: ok = satisfies_centroid(A, t[0]); break;
            case Species::QCentroid: ok = satisfies_quasicentroid(A, t[0]); break;
            case Species::QDerPair: ok = satisfies_quasiderivation(A, t[0], t[1]); break;
            case Species::GenDerTriple: ok = satisfies_generalized(A, t[0], t[1], t[2]); break;
            case Species::MDerMinus2: ok = true; break;
        }
        if (!ok) return false;
    }
    return true;
}

/// Rebuilds the centroid element with f(E) = E0 from the degree-zero part:
/// f(Y) = [E0, Y] / m on P_m (m != 0), and on P_0 the unique Y0 with
/// [C, Y0] = [-E0, [C, Y]] for every constant field C. The result is then
/// checked against the centroid identity; nullopt means E0 is not realizable.
inline std::optional<Endo> centroid_from_E0(const GradedAlgebra& A, const PolyVectorField& E0) {
    if (!E0.is_zero() && !(E0.is_homogeneous() && E0.degree() == 0))
        throw NotDegreeZero("f(E) must be a linear (degree 0) field");
    auto e0 = A.try_coordinates(E0);
    if (!e0) return std::nullopt;
    const SparseRow E0c = to_sparse(*e0);
    const std::size_t d = A.dim();
    const IndexRange minus1 = A.range(-1);
    const IndexRange p0 = A.range(0);
    std::vector<SparseRow> images(d);
    for (std::size_t q = 0; q < d; ++q) {
        const int m = A.degree(q);
        if (m != 0) {
            images[q] = axpby(Rational(0), {}, Rational(1) / m, A.bracket_coords(E0c, unit(q)));
            continue;
        }
        // Unknowns y_r over the P_0 basis: sum_r y_r [C, b_r] = [-E0, [C, b_q]].
        const std::size_t k = p0.size();
        RatMatrix M(0, k + 1);
        for (std::size_t c = minus1.begin; c < minus1.end; ++c) {
            std::vector<std::map<std::size_t, Rational>> rows(d);
            for (std::size_t r = 0; r < k; ++r)
                for (const auto& [t, x] : A.structure_constants(c, p0.begin + r)) rows[t][r] += x;
            SparseRow target = A.bracket_coords(E0c, A.structure_constants(c, q));  // [E0,[C,Y]]
            for (const auto& [t, x] : target) rows[t][k] += x;                   // moves -[..] to the left
            for (auto& row : rows) {
                SparseRow s;
                for (auto& [col, x] : row)
                    if (x != 0) s.emplace_back(col, x);
                if (!s.empty()) M.append_row(std::move(s));
            }
        }
        Subspace sol = kernel(M);
        std::optional<SparseRow> y;
        for (const auto& v : sol.basis()) {
            auto it = std::find_if(v.begin(), v.end(), [&](const auto& e) { return e.first == k; });
            if (it == v.end()) continue;
            if (y) return std::nullopt;  // not unique
            SparseRow img;
            for (const auto& [r, x] : v)
                if (r < k) img.emplace_back(p0.begin + r, x / it->second);
            y = std::move(img);
        }
        if (!y || sol.dim() != 1) return std::nullopt;
        images[q] = *y;
    }
    Endo f = Endo::from_columns(images);
    if (!satisfies_centroid(A, f)) return std::nullopt;
    return f;
}

struct MDerivationCheck {
    bool holds = true;
    bool exhaustive = true;
    std::size_t tuples_checked = 0;
    std::vector<std::size_t> violation;  ///< first violating tuple when !holds
};

namespace detail {

/// [x_1, [x_2, ..., [x_{m-1}, x_m]...]] on coordinate vectors.
inline SparseRow nested_bracket(const GradedAlgebra& A, const std::vector<SparseRow>& xs) {
    SparseRow acc = xs.back();
    for (std::size_t k = xs.size() - 1; k-- > 0;) {
        if (acc.empty()) return acc;
        acc = A.bracket_coords(xs[k], acc);
    }
    return acc;
}

/// d^m, saturating at SIZE_MAX.
inline std::size_t tuple_count(std::size_t d, int m) {
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) {
        if (d != 0 && total > std::numeric_limits<std::size_t>::max() / d)
            return std::numeric_limits<std::size_t>::max();
        total *= d;
    }
    return total;
}

/// Lexicographic odometer over {0..d-1}^m; returns false after the last tuple.
inline bool next_tuple(std::vector<std::size_t>& t, std::size_t d) {
    for (std::size_t k = t.size(); k-- > 0;) {
        if (++t[k] < d) return true;
        t[k] = 0;
    }
    return false;
}

}  // namespace detail

/// Checks D[X1,[X2,...,Xm]] = sum_k [X1,...,[D Xk,...]] on basis m-tuples in
/// lexicographic order, stopping at the first violation or after
/// `tuple_budget` tuples. An inconclusive run raises BudgetTooSmall.
inline MDerivationCheck mderivation_check(const GradedAlgebra& A, const Endo& D, int m, std::size_t tuple_budget) {
    if (m < 2) throw InvalidArgument("m-derivations need m >= 2");
    if (D.dim() != A.dim()) throw DimensionMismatch("endomorphism size differs from the algebra");
    const std::size_t d = A.dim();
    MDerivationCheck out;
    const std::size_t total = detail::tuple_count(d, m);
    if (d == 0) return out;
    std::vector<std::size_t> t(static_cast<std::size_t>(m), 0);
    std::vector<SparseRow> xs(m);
    do {
        if (out.tuples_checked == tuple_budget) break;
        ++out.tuples_checked;
        for (int k = 0; k < m; ++k) xs[k] = unit(t[k]);
        SparseRow lhs = D.apply(detail::nested_bracket(A, xs));
        SparseRow rhs;
        for (int k = 0; k < m; ++k) {
            SparseRow dk = D.column(t[k]);
            if (dk.empty()) continue;
            auto ys = xs;
            ys[k] = std::move(dk);
            rhs = axpby(1, rhs, 1, detail::nested_bracket(A, ys));
        }
        if (lhs != rhs) {
            out.holds = false;
            out.violation = t;
            out.exhaustive = out.tuples_checked == total;
            return out;
        }
    } while (detail::next_tuple(t, d));
    out.exhaustive = out.tuples_checked == total;
    if (!out.exhaustive)
        throw BudgetTooSmall("checked " + std::to_string(out.tuples_checked) + " of " + std::to_string(total) +
                             " tuples without finding a violation");
    return out;
}

/// Degree -2 maps supported on P_1 (valued in P_-1) satisfying the four
/// odd-m-derivation conditions. The nested-bracket condition is imposed on
/// every m-tuple enumerated within `tuple_budget`; `exhaustive` records
/// whether that enumeration finished.
inline SolutionSpace solve_mder_minus2(const GradedAlgebra& A, int m, std::size_t tuple_budget) {
    if (m < 3 || m % 2 == 0) throw InvalidArgument("the degree -2 family needs odd m >= 3");
    const std::size_t d = A.dim();
    const IndexRange p1 = A.range(1);
    const IndexRange pm1 = A.range(-1);
    const IndexRange p0 = A.range(0);
    detail::SystemBuilder b(A, 1);

    // Support: columns in P_1, rows in P_-1.
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
            if (!(p1.contains(q) && pm1.contains(p))) b.scalar_row({{b.var(0, p, q), Rational(1)}});

    // [D(P_1), P_j] = 0 for j != 0.
    for (std::size_t q = p1.begin; q < p1.end; ++q)
        for (std::size_t j = 0; j < d; ++j)
            if (A.degree(j) != 0) {
                b.f_left(0, unit(q), unit(j), 1);
                b.end();
            }
    // D[X, Y] = [D(Y), X] for (X, Y) in P_0 x P_1.
    for (std::size_t i = p0.begin; i < p0.end; ++i)
        for (std::size_t q = p1.begin; q < p1.end; ++q) {
            b.f_of(0, A.structure_constants(i, q), 1);
            b.f_left(0, unit(q), unit(i), -1);
            b.end();
        }
    // [D(P_1), [P,P] ∩ P_0] = 0.
    Subspace meet = intersection(derived_data(A).derived, graded_piece(A, 0));
    for (std::size_t q = p1.begin; q < p1.end; ++q)
        for (const auto& z : meet.basis()) {
            b.f_left(0, unit(q), z, 1);
            b.end();
        }
    // D kills nested brackets landing in P_1 whose first P_1 entry is preceded
    // by an entry of degree -1 or >= 2.
    detail::Echelon killed;
    const std::size_t total = detail::tuple_count(d, m);
    std::size_t enumerated = 0;
    if (d > 0 && p1.size() > 0) {
        std::vector<std::size_t> t(static_cast<std::size_t>(m), 0);
        std::vector<SparseRow> xs(m);
        do {
            if (enumerated == tuple_budget) break;
            ++enumerated;
            int deg_sum = 0;
            for (auto k : t) deg_sum += A.degree(k);
            if (deg_sum != 1) continue;
            std::size_t first_p1 = t.size();
            for (std::size_t k = 0; k < t.size(); ++k)
                if (A.degree(t[k]) == 1) {
                    first_p1 = k;
                    break;
                }
            if (first_p1 == t.size()) continue;
            bool guarded = false;
            for (std::size_t k = 0; k < first_p1; ++k)
                guarded = guarded || A.degree(t[k]) == -1 || A.degree(t[k]) >= 2;
            if (!guarded) continue;
            for (int k = 0; k < m; ++k) xs[k] = unit(t[k]);
            SparseRow v = detail::nested_bracket(A, xs);
            if (!v.empty()) killed.insert(detail::to_int_row(v));
        } while (detail::next_tuple(t, d));
    } else {
        enumerated = total;
    }
    for (const auto& v : killed.reduced()) {
        b.f_of(0, v, 1);
        b.end();
    }
    SolutionSpace S = detail::make_space(Species::MDerMinus2, 1, A, kernel(b.matrix()));
    S.exhaustive = enumerated == total;
    return S;
}

}  // namespace lieder
