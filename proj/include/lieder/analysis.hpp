#pragma once

// Orchestration behind the `lieder` command line: read a file, close the
// algebra, solve the requested species, run the theorem checks, render.

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lieder/algebra.hpp"
#include "lieder/derspaces.hpp"
#include "lieder/errors.hpp"
#include "lieder/parse.hpp"
#include "lieder/structure.hpp"

namespace lieder {

enum class OutputFormat { Text, Json };

inline const std::vector<std::string>& species_keys() {
    static const std::vector<std::string> keys{"der", "c", "qc", "qder", "gender", "mder2"};
    return keys;
}

struct AnalysisRequest {
    std::string input_path;
    std::optional<std::string> input_text;  ///< used instead of reading input_path
    std::set<std::string> species{"der", "c", "qc", "qder", "gender", "mder2"};
    std::optional<int> ambient_cap;  ///< default: max degree + 3
    int degree_cap = kDefaultDegreeCap;
    std::size_t tuple_budget = 100000;
    int mder_m = 3;
    OutputFormat format = OutputFormat::Text;
    bool theorem_checks = true;
};

struct AnalysisOutcome {
    int exit_code = 0;
    std::string report;
    nlohmann::ordered_json json;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string theorem_label(TheoremId id) {
    switch (id) {
        case TheoremId::GradingLemma: return "grading [P_i, P_j] in P_i+j";
        case TheoremId::CentralizerZero: return "centralizer = 0";
        case TheoremId::H1Zero: return "H^1 = 0";
        case TheoremId::CentroidForm: return "centroid form";
        case TheoremId::CEqQC: return "C = QC";
        case TheoremId::QDerSplit: return "QDer graded split";
        case TheoremId::GenderSum: return "GenDer = QDer + QC";
        case TheoremId::MainDecomp: return "GenDer decomposition";
        case TheoremId::OddDerivation: return "QDer'_-2 odd derivations";
    }
    return "?";
}

inline std::string species_title(const std::string& key) {
    static const std::map<std::string, std::string> t{{"ad", "ad"},      {"der", "Der"},       {"c", "C"},
                                                      {"qc", "QC"},      {"qder", "QDer"},     {"gender", "GenDer"},
                                                      {"mder2", "MDer_-2"}};
    return t.at(key);
}

/// "b_q -> image" for every nonzero column.
inline std::string describe_endo(const GradedAlgebra& A, const Endo& f, const std::vector<std::string>& vars) {
    std::string s;
    for (std::size_t q = 0; q < f.dim(); ++q) {
        SparseRow c = f.column(q);
        if (c.empty()) continue;
        if (!s.empty()) s += ", ";
        s += format_field(A.basis(q), vars) + " -> " + format_field(A.element(c), vars);
    }
    return s.empty() ? "0" : s;
}

inline nlohmann::ordered_json vector_json(const SparseRow& v, std::size_t length) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    RatVector dense = to_dense(v, length);
    for (const auto& x : dense) arr.push_back(to_string(x));
    return arr;
}

}  // namespace detail

inline AnalysisOutcome run(const AnalysisRequest& req) {
    AnalysisOutcome out;
    std::ostringstream txt;
    nlohmann::ordered_json J;
    try {
        if (req.species.empty()) throw InvalidArgument("no species requested");
        for (const auto& s : req.species)
            if (std::find(species_keys().begin(), species_keys().end(), s) == species_keys().end())
                throw InvalidArgument("unknown species '" + s + "'");
        const std::string text = req.input_text ? *req.input_text : detail::read_file(req.input_path);
        ParsedAlgebra parsed = parse_algebra(text);
        parsed.spec.degree_cap = req.degree_cap;
        const GradedAlgebra A = close_and_grade(parsed.spec);
        const auto& vars = parsed.vars;
        const int ambient_cap = req.ambient_cap ? *req.ambient_cap : A.max_degree() + 3;
        if (ambient_cap < A.max_degree())
            throw InvalidArgument("ambient cap " + std::to_string(ambient_cap) + " is below the algebra's top degree " +
                                  std::to_string(A.max_degree()));

        // Algebra section.
        nlohmann::ordered_json alg;
        alg["n"] = A.n();
        alg["dim"] = A.dim();
        alg["vars"] = vars;
        alg["degree_cap"] = A.degree_cap();
        alg["basis"] = nlohmann::ordered_json::array();
        alg["degrees"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < A.dim(); ++i) {
            alg["basis"].push_back(format_field(A.basis(i), vars));
            alg["degrees"].push_back(A.degree(i));
        }
        alg["grading"] = nlohmann::ordered_json::object();
        for (const auto& [deg, r] : A.grading()) alg["grading"][std::to_string(deg)] = r.size();
        alg["adjoined"] = nlohmann::ordered_json::array();
        for (const auto& X : A.adjoined()) alg["adjoined"].push_back(format_field(X, vars));
        const auto& fl = A.flags();
        alg["flags"] = {{"contains_all_constants", fl.contains_all_constants},
                        {"contains_euler", fl.contains_euler},
                        {"contains_all_diagonal", fl.contains_all_diagonal},
                        {"is_separated", fl.is_separated},
                        {"diagonal_equals_P0", fl.diagonal_equals_P0},
                        {"H0_subset_P0", fl.H0_subset_P0},
                        {"P0_is_euler_line", fl.P0_is_euler_line},
                        {"P0_is_diagonal", fl.P0_is_diagonal}};
        J["algebra"] = alg;

        txt << "algebra: n = " << A.n() << ", dim = " << A.dim() << ", degrees " << A.min_degree() << ".."
            << A.max_degree() << "\n";
        txt << "basis:\n";
        for (std::size_t i = 0; i < A.dim(); ++i)
            txt << "  [" << i << "] (deg " << A.degree(i) << ") " << format_field(A.basis(i), vars) << "\n";
        txt << "adjoined by closure:";
        if (A.adjoined().empty()) txt << " none";
        for (const auto& X : A.adjoined()) txt << "\n  " << format_field(X, vars);
        txt << "\nflags:";
        for (const auto& [k, v] : alg["flags"].items()) txt << " " << k << "=" << (v.get<bool>() ? "yes" : "no");
        txt << "\nresults concern the finite closed basis above (degrees up to " << A.max_degree() << ")\n";

        // Spaces. Theorem checks need most of them, so those are solved whenever checks run.
        auto wanted = [&](const std::string& k) { return req.species.count(k) > 0; };
        const bool need_all = req.theorem_checks;
        std::map<std::string, SolutionSpace> spaces;
        spaces.emplace("ad", inner_derivations(A));
        if (wanted("der") || need_all) spaces.emplace("der", solve_derivations(A));
        if (wanted("c") || need_all) spaces.emplace("c", solve_centroid(A));
        if (wanted("qc") || need_all) spaces.emplace("qc", solve_quasicentroid(A));
        if (wanted("qder") || need_all) spaces.emplace("qder", solve_quasiderivations(A));
        if (wanted("gender") || need_all) spaces.emplace("gender", solve_generalized(A));
        if (wanted("mder2")) spaces.emplace("mder2", solve_mder_minus2(A, req.mder_m, req.tuple_budget));

        bool failed = false;
        nlohmann::ordered_json js = nlohmann::ordered_json::object();
        txt << "spaces:\n";
        for (const std::string key : {"ad", "der", "c", "qc", "qder", "gender", "mder2"}) {
            if (key != "ad" && !wanted(key)) continue;
            const SolutionSpace& S = spaces.at(key);
            nlohmann::ordered_json e;
            e["dim"] = S.dim();
            e["arity"] = S.arity;
            e["basis"] = nlohmann::ordered_json::array();
            for (const auto& v : S.space.basis()) e["basis"].push_back(detail::vector_json(v, S.space.ambient_dim()));
            e["degree_blocks"] = nullptr;
            if (S.degree_blocks) {
                e["degree_blocks"] = nlohmann::ordered_json::object();
                for (const auto& [deg, b] : *S.degree_blocks) e["degree_blocks"][std::to_string(deg)] = b.dim();
            }
            const bool verified = all_solutions_verified(S, A);
            e["verified"] = verified;
            failed = failed || !verified;
            if (S.arity > 1) e["f_projection_dim"] = S.f_projection().dim();
            if (key == "mder2") {
                e["m"] = req.mder_m;
                e["exhaustive"] = S.exhaustive;
            }
            js[key] = e;

            txt << "  " << detail::species_title(key) << ": dim " << S.dim();
            if (S.arity > 1) txt << " (arity " << S.arity << ", f-projection dim " << S.f_projection().dim() << ")";
            if (S.degree_blocks) {
                txt << ", degree blocks";
                for (const auto& [deg, b] : *S.degree_blocks) txt << " " << deg << ":" << b.dim();
            }
            if (key == "mder2" && !S.exhaustive)
                txt << " [BudgetTooSmall: nested-bracket condition checked on " << req.tuple_budget
                    << " tuples only, space may be too large]";
            if (!verified) txt << " [VERIFICATION FAILED]";
            txt << "\n";
            const Subspace shown = S.arity > 1 ? S.f_projection() : S.space;
            for (const auto& v : shown.basis())
                txt << "    " << detail::describe_endo(A, Endo::from_stacked(A.dim(), v), vars) << "\n";
        }
        J["spaces"] = js;

        // Theorems.
        J["theorems"] = nlohmann::ordered_json::array();
        if (req.theorem_checks) {
            const auto& ad = spaces.at("ad");
            std::vector<TheoremReport> reports{
                check_grading(A),
                check_centralizer(A, ad, ambient_cap),
                check_h1(A, spaces.at("der"), ad),
                check_centroid_form(A, spaces.at("c")),
                check_c_eq_qc(spaces.at("c"), spaces.at("qc")),
                check_qder_split(A, spaces.at("qder"), ad),
                check_gender_sum(spaces.at("qder"), spaces.at("qc"), spaces.at("gender")),
                check_main_decomposition(A, spaces.at("gender"), spaces.at("qder"), spaces.at("qc"), ad),
                check_odd_derivation(A, spaces.at("qder")),
            };
            txt << "theorems:\n";
            for (const auto& r : reports) {
                nlohmann::ordered_json t;
                t["id"] = theorem_name(r.id);
                t["hypotheses"] = nlohmann::ordered_json::object();
                for (const auto& [name, ok] : r.hypotheses) t["hypotheses"][name] = ok;
                if (r.verdict == Verdict::NotApplicable)
                    t["holds"] = "NOT_APPLICABLE";
                else
                    t["holds"] = r.holds();
                t["notes"] = r.notes;
                J["theorems"].push_back(t);
                failed = failed || r.fails();
                txt << "  " << detail::theorem_label(r.id) << ": " << verdict_name(r.verdict) << "  [" << theorem_name(r.id)
                    << "]";
                if (!r.notes.empty()) txt << " " << r.notes;
                txt << "\n";
            }
        }
        out.exit_code = failed ? 1 : 0;
    } catch (const Error& e) {
        out.exit_code = 2;
        J = nlohmann::ordered_json::object();
        J["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        txt.str("");
        txt << "error: " << e.what() << "\n";
    }
    out.json = J;
    out.report = req.format == OutputFormat::Json ? J.dump(2) + "\n" : txt.str();
    return out;
}

struct VerifyRequest {
    std::string algebra_path;
    std::string endo_path;
    std::optional<std::string> algebra_text;
    std::optional<std::string> endo_text;
    std::string as;  ///< der | centroid | qc | mder:<m>
    int degree_cap = kDefaultDegreeCap;
    std::size_t tuple_budget = 100000;
};

/// Exit 0 when the map has the property, 1 when it does not (or the tuple
/// budget ran out first), 2 on bad input.
inline AnalysisOutcome verify(const VerifyRequest& req) {
    AnalysisOutcome out;
    std::ostringstream txt;
    try {
        ParsedAlgebra parsed = parse_algebra(req.algebra_text ? *req.algebra_text : detail::read_file(req.algebra_path));
        parsed.spec.degree_cap = req.degree_cap;
        const GradedAlgebra A = close_and_grade(parsed.spec);
        const Endo f = parse_endo(req.endo_text ? *req.endo_text : detail::read_file(req.endo_path), A, parsed.vars);
        txt << "map: " << detail::describe_endo(A, f, parsed.vars) << "\n";
        bool holds = false;
        if (req.as == "der") {
            holds = satisfies_derivation(A, f);
            if (holds != solve_derivations(A).contains({f})) throw InvalidArgument("solver and direct check disagree");
        } else if (req.as == "centroid") {
            holds = satisfies_centroid(A, f);
            if (holds != solve_centroid(A).contains({f})) throw InvalidArgument("solver and direct check disagree");
        } else if (req.as == "qc") {
            holds = satisfies_quasicentroid(A, f);
            if (holds != solve_quasicentroid(A).contains({f})) throw InvalidArgument("solver and direct check disagree");
        } else if (req.as.rfind("mder:", 0) == 0) {
            int m = 0;
            try {
                m = std::stoi(req.as.substr(5));
            } catch (const std::exception&) {
                throw InvalidArgument("bad m in '" + req.as + "'");
            }
            try {
                MDerivationCheck r = mderivation_check(A, f, m, req.tuple_budget);
                holds = r.holds;
                txt << "tuples checked: " << r.tuples_checked << (r.exhaustive ? " (exhaustive)" : "") << "\n";
                if (!r.holds) {
                    txt << "violated at:";
                    for (auto i : r.violation) txt << " [" << format_field(A.basis(i), parsed.vars) << "]";
                    txt << "\n";
                }
            } catch (const BudgetTooSmall& e) {
                txt << req.as << ": UNKNOWN (" << e.what() << ")\n";
                out.exit_code = 1;
                out.report = txt.str();
                return out;
            }
        } else {
            throw InvalidArgument("--as must be der, centroid, qc or mder:<m>");
        }
        txt << req.as << ": " << (holds ? "PASS" : "FAIL") << "\n";
        out.exit_code = holds ? 0 : 1;
    } catch (const Error& e) {
        out.exit_code = 2;
        txt.str("");
        txt << "error: " << e.what() << "\n";
    }
    out.report = txt.str();
    return out;
}

}  // namespace lieder
