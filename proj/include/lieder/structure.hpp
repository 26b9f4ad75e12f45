#pragma once

// Classification statements about P checked against computed solution spaces.
// Every conclusion is a subspace equality or inclusion in reduced echelon form.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lieder/algebra.hpp"
#include "lieder/derspaces.hpp"
#include "lieder/linsolve.hpp"

namespace lieder {

enum class TheoremId {
    GradingLemma,
    CentralizerZero,
    H1Zero,
    CentroidForm,
    CEqQC,
    QDerSplit,
    GenderSum,
    MainDecomp,
    OddDerivation,
};

inline std::string theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::GradingLemma: return "GRADING_LEMMA";
        case TheoremId::CentralizerZero: return "CENTRALIZER_ZERO";
        case TheoremId::H1Zero: return "H1_ZERO";
        case TheoremId::CentroidForm: return "CENTROID_FORM";
        case TheoremId::CEqQC: return "C_EQ_QC";
        case TheoremId::QDerSplit: return "QDER_SPLIT";
        case TheoremId::GenderSum: return "GENDER_SUM";
        case TheoremId::MainDecomp: return "MAIN_DECOMP";
        case TheoremId::OddDerivation: return "ODD_DERIVATION";
    }
    return "?";
}

enum class Verdict { Holds, Fails, NotApplicable };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "PASS";
        case Verdict::Fails: return "FAIL";
        case Verdict::NotApplicable: return "NOT_APPLICABLE";
    }
    return "?";
}

struct Witness {
    std::string label;
    std::vector<Endo> endos;
    std::optional<Subspace> space;
};

struct TheoremReport {
    TheoremId id = TheoremId::GradingLemma;
    std::vector<std::pair<std::string, bool>> hypotheses;
    Verdict verdict = Verdict::NotApplicable;
    std::vector<Witness> witnesses;
    std::string notes;

    bool hypotheses_hold() const {
        for (const auto& h : hypotheses)
            if (!h.second) return false;
        return true;
    }
    bool holds() const { return verdict == Verdict::Holds; }
    bool fails() const { return verdict == Verdict::Fails; }

    void note(const std::string& s) {
        if (!notes.empty()) notes += "; ";
        notes += s;
    }
};

namespace detail {

inline TheoremReport start(TheoremId id, std::vector<std::pair<std::string, bool>> hyps = {}) {
    TheoremReport r;
    r.id = id;
    r.hypotheses = std::move(hyps);
    return r;
}

/// Marks the report not applicable and names the broken hypotheses.
inline bool gate(TheoremReport& r) {
    if (r.hypotheses_hold()) return true;
    std::string broken;
    for (const auto& [name, ok] : r.hypotheses)
        if (!ok) broken += (broken.empty() ? "" : ", ") + name;
    r.verdict = Verdict::NotApplicable;
    r.note("HypothesisFailed: " + broken);
    return false;
}

inline Verdict verdict_of(bool ok) { return ok ? Verdict::Holds : Verdict::Fails; }

inline std::string dims(const std::string& a, std::size_t da, const std::string& b, std::size_t db) {
    return "dim " + a + " = " + std::to_string(da) + ", dim " + b + " = " + std::to_string(db);
}

inline Subspace span_endos(std::size_t d, const std::vector<Endo>& endos) {
    std::vector<SparseRow> rows;
    for (const auto& e : endos) rows.push_back(e.flatten());
    return Subspace::span(d * d, rows);
}

}  // namespace detail

/// The map Id_i: Y -> [x^i d/dx^i, Y] / m on P_m (m != 0), extended to P_0 by
/// the degree-zero reconstruction. nullopt when x^i d/dx^i gives no centroid element.
inline std::optional<Endo> partial_identity(const GradedAlgebra& A, std::size_t i) {
    return centroid_from_E0(A, diagonal_field(A.n(), i));
}

/// Brackets of basis elements are re-expanded from the structure constants,
/// are homogeneous of the summed degree, and basis elements are eigenvectors of ad E.
inline TheoremReport check_grading(const GradedAlgebra& A) {
    TheoremReport r = detail::start(TheoremId::GradingLemma);
    const PolyVectorField E = euler(A.n());
    bool ok = true;
    for (std::size_t i = 0; i < A.dim() && ok; ++i) {
        if (bracket(E, A.basis(i)) != A.basis(i).scaled(A.degree(i))) {
            ok = false;
            r.note("[E, basis " + std::to_string(i) + "] is not degree times itself");
        }
        for (std::size_t j = 0; j < A.dim() && ok; ++j) {
            PolyVectorField b = bracket(A.basis(i), A.basis(j));
            if (b != A.element(A.structure_constants(i, j))) {
                ok = false;
                r.note("structure constants disagree with the bracket on (" + std::to_string(i) + ", " +
                       std::to_string(j) + ")");
            } else if (!b.is_zero() && !(b.is_homogeneous() && b.degree() == A.degree(i) + A.degree(j))) {
                ok = false;
                r.note("bracket of (" + std::to_string(i) + ", " + std::to_string(j) + ") leaves degree " +
                       std::to_string(A.degree(i) + A.degree(j)));
            }
        }
    }
    r.verdict = detail::verdict_of(ok);
    return r;
}

inline TheoremReport check_centralizer(const GradedAlgebra& A, const SolutionSpace& ad, int ambient_cap) {
    TheoremReport r = detail::start(TheoremId::CentralizerZero, {{"contains_all_constants", A.flags().contains_all_constants},
                                                                 {"contains_euler", A.flags().contains_euler}});
    if (!detail::gate(r)) return r;
    Subspace c = centralizer_in_truncated_ambient(A, ambient_cap);
    r.witnesses.push_back({"centralizer", {}, c});
    r.note("ambient truncated at degree " + std::to_string(ambient_cap));
    r.note(detail::dims("centralizer", c.dim(), "ad", ad.dim()));
    r.verdict = detail::verdict_of(c.is_zero() && ad.dim() == A.dim());
    return r;
}

inline TheoremReport check_h1(const GradedAlgebra& A, const SolutionSpace& der, const SolutionSpace& ad) {
    TheoremReport r = detail::start(TheoremId::H1Zero, {{"contains_all_diagonal", A.flags().contains_all_diagonal}});
    r.note(detail::dims("Der", der.dim(), "ad", ad.dim()));
    if (!detail::gate(r)) return r;
    r.verdict = detail::verdict_of(is_subspace_of(ad.space, der.space) && quotient_dim(der.space, ad.space) == 0);
    return r;
}

inline TheoremReport check_centroid_form(const GradedAlgebra& A, const SolutionSpace& c) {
    const auto& fl = A.flags();
    // Alternative hypotheses: the report lists the one that applies, or all of them when none does.
    TheoremReport r = detail::start(TheoremId::CentroidForm);
    if (fl.H0_subset_P0)
        r.hypotheses = {{"all_linear_fields_in_P0", true}};
    else if (fl.P0_is_euler_line)
        r.hypotheses = {{"P0_is_euler_line", true}};
    else if (fl.diagonal_equals_P0)
        r.hypotheses = {{"diagonal_equals_P0", true}};
    else
        r.hypotheses = {{"all_linear_fields_in_P0", false}, {"diagonal_equals_P0", false}, {"P0_is_euler_line", false}};
    r.witnesses.push_back({"centroid", {}, c.space});
    const std::size_t d = A.dim();
    std::vector<Endo> predicted{Endo::identity(d)};
    if (fl.H0_subset_P0 || fl.P0_is_euler_line) {
        r.note("predicted span <Id>");
    } else if (fl.diagonal_equals_P0) {
        r.note("predicted span <Id, Id_1..Id_n>");
        for (std::size_t i = 0; i < A.n(); ++i) {
            auto idi = partial_identity(A, i);
            if (!idi) {
                r.verdict = Verdict::Fails;
                r.note("Id_" + std::to_string(i + 1) + " does not exist");
                return r;
            }
            predicted.push_back(*idi);
        }
    } else {
        detail::gate(r);
        r.note("no predicted form; computed centroid has dim " + std::to_string(c.dim()));
        return r;
    }
    r.witnesses.push_back({"predicted", predicted, std::nullopt});
    r.verdict = detail::verdict_of(detail::span_endos(d, predicted) == c.space);
    r.note(detail::dims("C", c.dim(), "predicted", detail::span_endos(d, predicted).dim()));
    return r;
}

inline TheoremReport check_c_eq_qc(const SolutionSpace& c, const SolutionSpace& qc) {
    TheoremReport r = detail::start(TheoremId::CEqQC);
    r.note(detail::dims("C", c.dim(), "QC", qc.dim()));
    r.verdict = detail::verdict_of(c.space == qc.space);
    return r;
}

/// f-projection of QDer = degree-0 block + sum of E-vanishing blocks + ad.
inline TheoremReport check_qder_split(const GradedAlgebra& A, const SolutionSpace& qder, const SolutionSpace& ad) {
    TheoremReport r = detail::start(TheoremId::QDerSplit, {{"contains_euler", A.flags().contains_euler}});
    if (!detail::gate(r)) return r;
    const auto blocks = qder.degree_blocks ? *qder.degree_blocks : degree_filter(qder, A);
    std::size_t block_total = 0;
    for (const auto& [deg, b] : blocks) block_total += b.dim();
    const bool blocks_exact = block_total == qder.dim();

    SolutionSpace with_blocks = qder;
    with_blocks.degree_blocks = blocks;
    Subspace rhs = ad.space;
    for (const auto& [deg, b] : blocks) {
        const std::size_t sz = qder.slot_size();
        if (deg == 0) {
            rhs = sum(rhs, project(b, 0, sz));
            continue;
        }
        Subspace prime = project(vanishing_on_E_subspace(with_blocks, A, deg), 0, sz);
        if (!prime.is_zero()) r.witnesses.push_back({"E-vanishing block of degree " + std::to_string(deg), {}, prime});
        rhs = sum(rhs, prime);
    }
    const Subspace lhs = qder.f_projection();
    r.note(detail::dims("f-projection", lhs.dim(), "split", rhs.dim()));
    if (!blocks_exact) r.note("degree blocks do not add up to the pair space");
    r.verdict = detail::verdict_of(blocks_exact && lhs == rhs);
    return r;
}

/// f-projection of GenDer = f-projection of QDer + QC, and each triple splits as
/// ((f+h)/2, (f+h)/2, g) in QDer plus (f-h)/2 in QC.
inline TheoremReport check_gender_sum(const SolutionSpace& qder, const SolutionSpace& qc, const SolutionSpace& gender) {
    TheoremReport r = detail::start(TheoremId::GenderSum);
    const Subspace lhs = gender.f_projection();
    const Subspace rhs = sum(qder.f_projection(), qc.space);
    r.note(detail::dims("GenDer f-projection", lhs.dim(), "QDer + QC", rhs.dim()));
    bool split = true;
    for (const auto& v : gender.space.basis()) {
        auto t = gender.unstack(v);
        Endo half_sum = (t[0] + t[1]).scaled(Rational(1, 2));
        Endo half_diff = (t[0] - t[1]).scaled(Rational(1, 2));
        split = split && qder.contains({half_sum, t[2]}) && qc.contains({half_diff});
    }
    if (!split) r.note("some GenDer triple does not split into QDer + QC");
    r.verdict = detail::verdict_of(split && lhs == rhs);
    return r;
}

/// Maps supported on P_-1 sending d/dx^j to a multiple of x^j d/dx^j such that
/// (f, 0) is a quasiderivation, found from the bracket residuals directly.
inline std::vector<Endo> degree_one_diagonal_family(const GradedAlgebra& A) {
    if (!A.flags().contains_all_constants || !A.flags().contains_all_diagonal) return {};
    const std::size_t d = A.dim(), n = A.n();
    std::vector<Endo> shapes;
    const IndexRange pm1 = A.range(-1);
    for (std::size_t j = 0; j < n; ++j) {
        // f(b_q) = (d/dx^j-coefficient of b_q) * x^j d/dx^j on P_-1.
        Endo f(d);
        const SparseRow dst = to_sparse(A.coordinates(diagonal_field(n, j)));
        const MonomialKey dj{Exponents(n, 0), j};
        for (std::size_t q = pm1.begin; q < pm1.end; ++q) {
            const Rational a = A.basis(q).coefficient(dj);
            if (a == 0) continue;
            for (const auto& [p, x] : dst) f(p, q) = a * x;
        }
        shapes.push_back(std::move(f));
    }
    // Residual of (f, 0) on all basis pairs, linear in the shape coefficients.
    std::vector<SparseRow> residuals;
    for (const auto& f : shapes) {
        SparseRow res;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                SparseRow v = axpby(1, A.bracket_coords(f.column(a), unit(b)), 1, A.bracket_coords(unit(a), f.column(b)));
                for (const auto& [k, x] : v) res.emplace_back((a * d + b) * d + k, x);
            }
        residuals.push_back(std::move(res));
    }
    RatMatrix M(0, shapes.size());
    std::map<std::size_t, std::map<std::size_t, Rational>> by_row;
    for (std::size_t s = 0; s < residuals.size(); ++s)
        for (const auto& [row, x] : residuals[s]) by_row[row][s] += x;
    for (const auto& [row, entries] : by_row) {
        SparseRow r;
        for (const auto& [s, x] : entries)
            if (x != 0) r.emplace_back(s, x);
        if (!r.empty()) M.append_row(std::move(r));
    }
    std::vector<Endo> out;
    const Subspace coefficients = kernel(M);
    for (const auto& alpha : coefficients.basis()) {
        Endo f(d);
        for (const auto& [s, x] : alpha) f = f + shapes[s].scaled(x);
        out.push_back(std::move(f));
    }
    return out;
}

/// Pairs (0, k) with k vanishing on [P, P], built as a kernel independently of the QDer solve.
inline Subspace predicted_k_component(const GradedAlgebra& A, const Subspace& derived) {
    const std::size_t d = A.dim(), sz = d * d;
    std::vector<SparseRow> constraints;
    for (std::size_t i = 0; i < sz; ++i) constraints.push_back({{i, Rational(1)}});
    for (const auto& z : derived.basis())
        for (std::size_t p = 0; p < d; ++p) {
            SparseRow c;
            for (const auto& [q, x] : z) c.emplace_back(sz + p * d + q, x);
            constraints.push_back(std::move(c));
        }
    return restrict_to(Subspace::full(2 * sz), constraints);
}

/// GenDer f-projection = span(QC ∪ ad ∪ G), and the QDer pair space is
/// {(c, 2c)} + {(ad X, ad X)} + {(f'', 0)} + K.
inline TheoremReport check_main_decomposition(const GradedAlgebra& A, const SolutionSpace& gender, const SolutionSpace& qder,
                                              const SolutionSpace& qc, const SolutionSpace& ad) {
    const DerivedData dd = derived_data(A);
    TheoremReport r = detail::start(TheoremId::MainDecomp, {{"P1_P-1_in_P0_P0", dd.hypothesis_A},
                                                            {"separated", A.flags().is_separated},
                                                            {"contains_all_diagonal", A.flags().contains_all_diagonal}});
    if (!detail::gate(r)) return r;
    const std::size_t d = A.dim(), sz = d * d;

    const std::vector<Endo> residual_family = degree_one_diagonal_family(A);
    const std::vector<Endo> G = A.flags().P0_is_diagonal ? residual_family : std::vector<Endo>{};
    if (!A.flags().P0_is_diagonal) {
        r.note("G = 0 since P_0 holds a non-diagonal linear field");
        if (!residual_family.empty()) {
            r.note("yet " + std::to_string(residual_family.size()) +
                   " map(s) d/dx^j -> c x^j d/dx^j pass the quasiderivation identity");
            r.witnesses.push_back({"suppressed diagonal maps", residual_family, std::nullopt});
        }
    }
    r.witnesses.push_back({"G", G, std::nullopt});

    Subspace predicted_f = sum(sum(qc.space, ad.space), detail::span_endos(d, G));
    const Subspace f_proj = gender.f_projection();
    r.note(detail::dims("GenDer f-projection", f_proj.dim(), "QC + ad + G", predicted_f.dim()));

    std::vector<SparseRow> pairs;
    for (const auto& c : qc.space.basis()) {
        Endo e = Endo::from_stacked(d, c);
        pairs.push_back(stack({e, e.scaled(2)}));
    }
    for (const auto& a : ad.space.basis()) {
        Endo e = Endo::from_stacked(d, a);
        pairs.push_back(stack({e, e}));
    }
    for (const auto& g : G) pairs.push_back(stack({g, Endo(d)}));
    const Subspace K = predicted_k_component(A, dd.derived);
    r.witnesses.push_back({"K", {}, K});
    const Subspace predicted_pairs = sum(Subspace::span(2 * sz, pairs), K);
    r.note(detail::dims("QDer pair space", qder.dim(), "predicted", predicted_pairs.dim()));
    r.note("dim K = " + std::to_string(K.dim()));
    r.note("checked on the closed basis up to degree " + std::to_string(A.max_degree()));
    r.verdict = detail::verdict_of(f_proj == predicted_f && qder.space == predicted_pairs);
    return r;
}

/// Under P_0 = <E> ⊆ [P_1, P_-1], separation, and every P_2 basis element
/// commuting with some nonzero element of P_-1, each f in the degree -2,
/// E-vanishing QDer block is a 3-derivation.
inline TheoremReport check_odd_derivation(const GradedAlgebra& A, const SolutionSpace& qder) {
    const DerivedData dd = derived_data(A);
    const bool euler_line = A.flags().P0_is_euler_line;
    const bool in_bracket = euler_line && contains(dd.p1_p_minus1, to_sparse(A.euler_coordinates()));
    bool p2_condition = true;
    const IndexRange p2 = A.range(2), pm1 = A.range(-1);
    for (std::size_t i = p2.begin; i < p2.end; ++i) {
        RatMatrix M(0, pm1.size());
        std::vector<std::map<std::size_t, Rational>> rows(A.dim());
        for (std::size_t j = pm1.begin; j < pm1.end; ++j)
            for (const auto& [k, x] : A.structure_constants(i, j)) rows[k][j - pm1.begin] += x;
        for (auto& row : rows) {
            SparseRow s;
            for (const auto& [c, x] : row)
                if (x != 0) s.emplace_back(c, x);
            if (!s.empty()) M.append_row(std::move(s));
        }
        p2_condition = p2_condition && !kernel(M).is_zero();
    }
    TheoremReport r = detail::start(TheoremId::OddDerivation, {{"P0_is_euler_line", euler_line},
                                                               {"E_in_P1_P-1", in_bracket},
                                                               {"separated", A.flags().is_separated},
                                                               {"P2_meets_P-1_kernel", p2_condition}});
    if (!detail::gate(r)) return r;
    SolutionSpace with_blocks = qder;
    if (!with_blocks.degree_blocks) with_blocks.degree_blocks = degree_filter(qder, A);
    Subspace block = project(vanishing_on_E_subspace(with_blocks, A, -2), 0, qder.slot_size());
    r.witnesses.push_back({"E-vanishing degree -2 block", {}, block});
    bool ok = true;
    const std::size_t budget = detail::tuple_count(A.dim(), 3);
    for (const auto& v : block.basis())
        ok = ok && mderivation_check(A, Endo::from_stacked(A.dim(), v), 3, budget).holds;
    r.note("dim block = " + std::to_string(block.dim()));
    r.verdict = detail::verdict_of(ok);
    return r;
}

}  // namespace lieder
