#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lieder/analysis.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Derivation-like spaces of Lie algebras of polynomial vector fields"};
    app.require_subcommand(1);

    lieder::AnalysisRequest req;
    std::string compute = "der,c,qc,qder,gender,mder2";
    std::string format = "text";
    bool no_theorems = false;
    int ambient_cap = -1;
    auto* analyze = app.add_subcommand("analyze", "close an algebra and report its spaces and theorem checks");
    analyze->add_option("file", req.input_path, "algebra file")->required();
    analyze->add_option("--compute", compute, "comma-separated subset of der,c,qc,qder,gender,mder2");
    analyze->add_option("--degree-cap", req.degree_cap, "largest degree allowed during closure");
    analyze->add_option("--ambient-cap", ambient_cap, "degree cap of the ambient field space (default: top degree + 3)");
    analyze->add_option("--tuple-budget", req.tuple_budget, "bound on enumerated m-tuples");
    analyze->add_option("--mder-m", req.mder_m, "odd m for the degree -2 m-derivation family");
    analyze->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    analyze->add_flag("--no-theorems", no_theorems, "skip theorem checks");

    lieder::VerifyRequest vreq;
    auto* verify = app.add_subcommand("verify", "test one endomorphism against a defining identity");
    verify->add_option("file", vreq.algebra_path, "algebra file")->required();
    verify->add_option("--endo", vreq.endo_path, "endomorphism file")->required();
    verify->add_option("--as", vreq.as, "der, centroid, qc or mder:<m>")->required();
    verify->add_option("--degree-cap", vreq.degree_cap, "largest degree allowed during closure");
    verify->add_option("--tuple-budget", vreq.tuple_budget, "bound on enumerated m-tuples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    lieder::AnalysisOutcome result;
    if (*analyze) {
        req.species.clear();
        std::stringstream ss(compute);
        for (std::string item; std::getline(ss, item, ',');)
            if (!item.empty()) req.species.insert(item);
        if (ambient_cap >= 0) req.ambient_cap = ambient_cap;
        req.format = format == "json" ? lieder::OutputFormat::Json : lieder::OutputFormat::Text;
        req.theorem_checks = !no_theorems;
        result = lieder::run(req);
    } else {
        result = lieder::verify(vreq);
    }
    (result.exit_code == 2 ? std::cerr : std::cout) << result.report;
    return result.exit_code;
}
