// Command-line front end: gn-check, counterexample, optimality, properties.
// Output is deterministic JSON (or a CSV mirror); exit code 0 when every
// assertion in the report passed, 1 on assertion failure, 2 on usage errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rical/harness.hpp"

namespace {

rical::Rational parse_rational(const std::string& s) { return rical::Rational::parse(s); }

std::optional<rical::Rational> parse_fine(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::nullopt;
    return parse_rational(s);
}

std::vector<rical::Rational> parse_rational_list(const std::vector<std::string>& in) {
    std::vector<rical::Rational> out;
    for (const auto& s : in) out.push_back(parse_rational(s));
    return out;
}

rical::Rational default_tol() {
    if (const char* env = std::getenv("RICAL_TOL")) return rical::Rational::parse(env);
    return rical::enc::default_tol();
}

int emit(const rical::Json& report, const std::string& out_path, const std::string& format,
         bool all_pass) {
    std::string payload =
        format == "csv" ? rical::harness::to_csv(report) : report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) {
            std::cerr << "cannot open output file: " << out_path << "\n";
            return 2;
        }
        os << payload;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact rearrangement-invariant analysis harness"};
    app.require_subcommand(1);

    std::string out_path, format = "json";
    std::string Q = "2", q = "2", R = "2", r = "2", Pprime, pprime;
    std::string witness = "lan:1", tol_s;
    std::vector<std::string> dilations{"1"};
    std::vector<long> n_list;
    std::uint64_t seed = 1;
    long count = 100;

    auto* gn = app.add_subcommand("gn-check", "ratio and dilation-invariance report");
    gn->add_option("--Q", Q);
    gn->add_option("--q", q)->description("fine index or 'inf'");
    gn->add_option("--R", R);
    gn->add_option("--r", r)->description("fine index or 'inf'");
    gn->add_option("--Pprime", Pprime, "off-target primary index (reports the drift)");
    gn->add_option("--pprime", pprime);
    gn->add_option("--witness", witness, "lan:<alpha> or mf:<n>");
    gn->add_option("--dilations", dilations, "dilation scales");
    gn->add_option("--tol", tol_s);

    auto* ce = app.add_subcommand("counterexample", "two-peak family table");
    ce->add_option("--n-list", n_list, "family indices, each >= 4")->required();
    ce->add_option("--tol", tol_s);

    auto* opt = app.add_subcommand("optimality", "divergence of the ratio sequence");
    opt->add_option("--Q", Q);
    opt->add_option("--q", q);
    opt->add_option("--R", R);
    opt->add_option("--r", r);
    opt->add_option("--Pprime", Pprime);
    opt->add_option("--pprime", pprime);
    opt->add_option("--n-list", n_list, "refinement levels");
    auto* opt_seed = opt->add_option("--seed", seed, "use a seeded random profile pair");
    opt->add_option("--tol", tol_s);

    auto* props = app.add_subcommand("properties", "randomized operator-property suite");
    props->add_option("--seed", seed);
    props->add_option("--count", count);
    props->add_option("--tol", tol_s);

    for (CLI::App* sub : {gn, ce, opt, props}) {
        sub->add_option("--out", out_path, "write the report to this path (default: stdout)");
        sub->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help exits 0, any parse problem exits 2
    }

    try {
        rical::Rational tol = tol_s.empty() ? default_tol() : parse_rational(tol_s);
        if (gn->parsed()) {
            rical::harness::GnRequest req;
            req.Q = parse_rational(Q);
            req.q = parse_fine(q);
            req.R = parse_rational(R);
            req.r = parse_fine(r);
            if (!Pprime.empty()) req.Pprime = parse_rational(Pprime);
            if (!pprime.empty()) req.pprime = parse_fine(pprime);
            req.witness = witness;
            req.dilations = parse_rational_list(dilations);
            req.tol = tol;
            auto rep = rical::harness::run_gn_check(req);
            return emit(rical::harness::gn_to_json(rep), out_path, format, rep.all_pass);
        }
        if (ce->parsed()) {
            auto rep = rical::harness::run_counterexample(n_list, tol);
            return emit(rical::harness::counterexample_to_json(rep), out_path, format, rep.all_pass);
        }
        if (opt->parsed()) {
            rical::harness::OptimalityRequest req;
            req.Q = parse_rational(Q);
            req.q = parse_fine(q);
            req.R = parse_rational(R);
            req.r = parse_fine(r);
            if (!Pprime.empty()) req.Pprime = parse_rational(Pprime);
            if (!pprime.empty()) req.pprime = parse_fine(pprime);
            if (!n_list.empty()) req.ns = n_list;
            if (opt_seed->count() > 0) req.seed = seed;
            req.tol = tol;
            auto rep = rical::harness::run_optimality(req);
            bool pass = rep.all_pass && rep.strictly_increasing;
            return emit(rical::harness::optimality_to_json(rep), out_path, format, pass);
        }
        if (props->parsed()) {
            auto rep = rical::harness::run_property_suite(seed, count, tol);
            return emit(rical::harness::property_to_json(rep), out_path, format, rep.all_pass);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
