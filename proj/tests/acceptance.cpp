// One line per acceptance criterion; exit status is nonzero if any line fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lieder/structure.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_algebra.hpp"

using namespace lieder;
using fixtures::dx;
using fixtures::endo_on_basis;
using fixtures::mono;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

constexpr std::size_t kCorpusSize = 60;

const std::vector<GradedAlgebra>& corpus() {
    static const auto c = testing_support::random_corpus(kCorpusSize);
    return c;
}

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s >= limit_seconds) out.require(false, "time limit exceeded");
    if (!out.ok) ++failures;
    std::ostringstream time;
    time << std::fixed << std::setprecision(3) << s << "s < " << limit_seconds << "s";
    std::cout << (out.ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << title << " (" << time.str() << ")";
    if (!out.detail.empty()) std::cout << " -- " << out.detail;
    std::cout << std::endl;
}

Endo ad_of(const GradedAlgebra& A, std::size_t i) { return ad_endo(A, unit(i)); }

Subspace span_tuples(std::size_t ambient, const std::vector<std::vector<Endo>>& tuples) {
    std::vector<SparseRow> rows;
    for (const auto& t : tuples) rows.push_back(stack(t));
    return Subspace::span(ambient, rows);
}

}  // namespace

int main() {
    criterion(1, "diagonal plane: Id + Id_2 lies in C and C = QC", 1.0, [] {
        Outcome o;
        auto A = fixtures::plane_diagonal();
        Endo f = endo_on_basis(A, {{dx(2, 0), dx(2, 0)},
                                   {dx(2, 1), dx(2, 1).scaled(2)},
                                   {diagonal_field(2, 0), diagonal_field(2, 0)},
                                   {diagonal_field(2, 1), diagonal_field(2, 1).scaled(2)}});
        auto c = solve_centroid(A), qc = solve_quasicentroid(A);
        o.require(c.contains({f}), "f not in C");
        o.require(c.space == qc.space, "C != QC");
        o.detail = "dim C = " + std::to_string(c.dim()) + ", dim QC = " + std::to_string(qc.dim()) + (o.ok ? "" : "; " + o.detail);
        return o;
    });

    criterion(2, "shear plane: explicit map lies in C and C is larger than <Id>", 1.0, [] {
        Outcome o;
        auto A = fixtures::plane_shear();
        auto xdy = mono(2, {1, 0}, 1);
        Endo f = endo_on_basis(A, {{dx(2, 0), dx(2, 0) + dx(2, 1)},
                                   {dx(2, 1), dx(2, 1)},
                                   {euler(2), euler(2) + xdy},
                                   {xdy, xdy}});
        auto c = solve_centroid(A);
        o.require(c.contains({f}), "f not in C");
        o.require(c.contains({Endo::identity(A.dim())}), "Id not in C");
        o.require(c.dim() > 1, "C = <Id>");
        o.require(!partial_identity(A, 0) && !partial_identity(A, 1), "Id_i exists");
        if (o.ok) o.detail = "dim C = " + std::to_string(c.dim());
        return o;
    });

    criterion(3, "diagonal plane: (f'', 0) is a quasiderivation, f'' not in Der, not in QC", 1.0, [] {
        Outcome o;
        auto A = fixtures::plane_diagonal();
        Endo f = endo_on_basis(A, {{dx(2, 0), diagonal_field(2, 0)}, {dx(2, 1), diagonal_field(2, 1)}});
        o.require(solve_quasiderivations(A).contains({f, Endo(A.dim())}), "(f'', 0) not in QDer");
        o.require(!solve_derivations(A).contains({f}), "f'' in Der");
        o.require(!solve_quasicentroid(A).contains({f}), "f'' in QC");
        return o;
    });

    criterion(4, "quadratic space: D0 is a 3-derivation (216 triples), not a 2-derivation, (D0, -D0) in the E-vanishing degree -2 block", 5.0, [] {
        Outcome o;
        auto A = fixtures::space_quadratic();
        Endo D0 = endo_on_basis(A, {{mono(3, {2, 0, 0}, 2), dx(3, 2)}});
        auto three = mderivation_check(A, D0, 3, 100000);
        o.require(three.holds && three.exhaustive && three.tuples_checked == 216, "m = 3 check");
        auto two = mderivation_check(A, D0, 2, 100000);
        o.require(!two.holds && two.violation.size() == 2, "m = 2 check");
        auto qder = solve_quasiderivations(A);
        o.require(contains(vanishing_on_E_subspace(qder, A, -2), stack({D0, D0.scaled(-1)})), "(D0, -D0) not in block");
        if (o.ok) o.detail = "m = 3 checked " + std::to_string(three.tuples_checked) + " triples";
        return o;
    });

    criterion(5, "diagonal plane: GenDer = QC + ad + f'' family + K as exact subspaces", 5.0, [] {
        Outcome o;
        auto A = fixtures::plane_diagonal();
        const std::size_t d = A.dim(), sz = d * d;
        auto qc = solve_quasicentroid(A), gen = solve_generalized(A);
        auto family = degree_one_diagonal_family(A);
        const Endo zero(d);

        std::vector<Endo> f_parts;
        for (const auto& v : qc.space.basis()) f_parts.push_back(Endo::from_stacked(d, v));
        for (std::size_t i = 0; i < d; ++i) f_parts.push_back(ad_of(A, i));
        f_parts.insert(f_parts.end(), family.begin(), family.end());
        o.require(gen.f_projection() == detail::span_endos(d, f_parts), "f-projection differs");

        std::vector<std::vector<Endo>> triples;
        for (const auto& v : qc.space.basis()) {
            Endo c = Endo::from_stacked(d, v);
            triples.push_back({c, c, c.scaled(2)});
            triples.push_back({c, c.scaled(-1), zero});
        }
        for (std::size_t i = 0; i < d; ++i) triples.push_back({ad_of(A, i), ad_of(A, i), ad_of(A, i)});
        for (const auto& g : family) triples.push_back({g, g, zero});
        auto K = predicted_k_component(A, derived_data(A).derived);
        for (const auto& v : K.basis()) triples.push_back({zero, zero, Endo::from_stacked(d, v, 1)});
        auto predicted = span_tuples(3 * sz, triples);
        o.require(gen.space == predicted, "triple space differs");
        o.detail = "dim GenDer = " + std::to_string(gen.dim()) + ", f'' family " + std::to_string(family.size()) +
                   ", K " + std::to_string(K.dim()) + (o.ok ? "" : "; " + o.detail);
        return o;
    });

    criterion(6, "tower plane truncated at degree cap 4: GenDer f-projection = <Id> + ad, K in the pair space, f'' family zero", 30.0, [] {
        Outcome o;
        auto A = fixtures::plane_tower_cap4();
        const std::size_t d = A.dim();
        o.require(d == 9 && A.max_degree() == 4, "closure did not give the 9-element basis");
        o.require(!A.flags().P0_is_diagonal, "P_0 unexpectedly diagonal");
        o.require(degree_one_diagonal_family(A).empty(), "f'' family is nonzero");
        auto qc = solve_quasicentroid(A), qder = solve_quasiderivations(A), gen = solve_generalized(A);
        auto ad = inner_derivations(A);

        std::vector<Endo> f_parts{Endo::identity(d)};
        for (std::size_t i = 0; i < d; ++i) f_parts.push_back(ad_of(A, i));
        o.require(gen.f_projection() == detail::span_endos(d, f_parts), "f-projection is not <Id> + ad");
        o.require(qc.space == detail::span_endos(d, {Endo::identity(d)}), "QC is not <Id>");
        auto K = predicted_k_component(A, derived_data(A).derived);
        o.require(qder.f_zero_part() == K, "K component differs");
        auto report = check_main_decomposition(A, gen, qder, qc, ad);
        o.require(report.holds(), "decomposition check: " + report.notes);
        o.detail = "truncated at degree cap 4; dim GenDer = " + std::to_string(gen.dim()) + ", dim K = " +
                   std::to_string(K.dim()) + (o.ok ? "" : "; " + o.detail);
        return o;
    });

    criterion(7, "property suite over " + std::to_string(kCorpusSize) + " random separated algebras", 600.0, [] {
        Outcome o;
        o.require(corpus().size() >= 50, "corpus too small");
        std::size_t max_dim = 0;
        for (std::size_t k = 0; k < corpus().size(); ++k) {
            const auto& A = corpus()[k];
            const std::string tag = "#" + std::to_string(k) + " ";
            max_dim = std::max(max_dim, A.dim());
            o.require(A.n() >= 2 && A.n() <= 3 && A.dim() <= 12 && A.flags().is_separated, tag + "corpus shape");
            auto ad = inner_derivations(A), der = solve_derivations(A), c = solve_centroid(A),
                 qc = solve_quasicentroid(A), qder = solve_quasiderivations(A), gen = solve_generalized(A);
            o.require(c.space == qc.space, tag + "C != QC");
            o.require(is_subspace_of(ad.space, der.space), tag + "ad not in Der");
            o.require(is_subspace_of(der.space, qder.f_projection()), tag + "Der not in QDer");
            o.require(is_subspace_of(qder.f_projection(), gen.f_projection()), tag + "QDer not in GenDer");
            o.require(gen.f_projection() == sum(qder.f_projection(), qc.space), tag + "GenDer != QDer + QC");
            for (const auto* S : {&ad, &der, &c, &qc, &qder, &gen})
                o.require(all_solutions_verified(*S, A), tag + species_name(S->species) + " verification");
            o.require(centralizer_in_truncated_ambient(A, A.max_degree() + 3).is_zero(), tag + "centralizer");
        }
        if (o.ok) o.detail = "largest dim " + std::to_string(max_dim);
        return o;
    });

    criterion(8, "H^1 = 0 on every corpus algebra with all diagonal fields; dim Der = 4 for the diagonal plane", 600.0, [] {
        Outcome o;
        std::size_t checked = 0;
        for (const auto& A : corpus()) {
            if (!A.flags().contains_all_diagonal) continue;
            ++checked;
            o.require(solve_derivations(A).dim() == A.dim(), "outer derivation found");
        }
        o.require(checked > 0, "no corpus algebra holds all diagonal fields");
        auto A = fixtures::plane_diagonal();
        std::vector<int> deg;
        for (std::size_t i = 0; i < A.dim(); ++i) deg.push_back(A.degree(i));
        o.require(oracle::solve(A.basis(), deg, oracle::Kind::Der).size() == 4, "oracle Der dim");
        o.require(solve_derivations(A).dim() == 4, "solver Der dim");
        o.detail = std::to_string(checked) + " algebras checked" + (o.ok ? "" : "; " + o.detail);
        return o;
    });

    criterion(9, "sparse solver agrees with the dense oracle on every algebra of dim <= 6", 600.0, [] {
        Outcome o;
        std::vector<GradedAlgebra> small{fixtures::plane_diagonal(), fixtures::plane_shear(), fixtures::plane_euler(),
                                         fixtures::space_quadratic(), fixtures::line_projective()};
        for (const auto& A : corpus())
            if (A.dim() <= 6) small.push_back(A);
        using K = oracle::Kind;
        for (std::size_t k = 0; k < small.size(); ++k) {
            const auto& A = small[k];
            std::vector<int> deg;
            for (std::size_t i = 0; i < A.dim(); ++i) deg.push_back(A.degree(i));
            const std::vector<std::pair<K, SolutionSpace>> cases{
                {K::Der, solve_derivations(A)},    {K::Centroid, solve_centroid(A)},
                {K::QC, solve_quasicentroid(A)},   {K::QDer, solve_quasiderivations(A)},
                {K::GenDer, solve_generalized(A)}, {K::MDer2, solve_mder_minus2(A, 3, 1000000)}};
            for (const auto& [kind, S] : cases) {
                auto O = oracle::solve(A.basis(), deg, kind);
                oracle::Mat M;
                for (std::size_t i = 0; i < S.dim(); ++i) M.push_back(S.space.dense(i));
                o.require(O.size() == S.dim() && oracle::same_span(O, M, S.space.ambient_dim()),
                          "algebra " + std::to_string(k) + " " + species_name(S.species));
            }
        }
        if (o.ok) o.detail = std::to_string(small.size()) + " algebras, 6 species each";
        return o;
    });

    return failures == 0 ? 0 : 1;
}
