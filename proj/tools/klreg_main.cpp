#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "klreg/engine.hpp"
#include "klreg/selftest.hpp"

namespace {

using namespace klreg;

struct CommonArgs {
    std::string field_path;
    long p = 0;
    long precision = 40;
    long n_max = 2;
    long coeff_bound = 0;
    std::string json_path;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_p) {
    cmd->add_option("--field", a.field_path, "field description JSON file")->required();
    if (with_p) cmd->add_option("--p", a.p, "prime p")->required();
    cmd->add_option("--precision", a.precision, "working p-adic digits (default 40)");
    cmd->add_option("--n-max", a.n_max, "oracle n range");
    cmd->add_option("--coeff-bound", a.coeff_bound, "oracle exponent box bound (default p^2)");
    cmd->add_option("--json", a.json_path, "write the JSON report to this path");
    cmd->add_flag("--quiet", a.quiet, "suppress the human-readable table");
}

EngineOptions make_options(const CommonArgs& a) {
    EngineOptions opt;
    opt.precision = a.precision;
    opt.oracle.n_max = a.n_max;
    opt.oracle.coeff_bound = a.coeff_bound;
    return opt;
}

void write_json(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

int run_analyze(const CommonArgs& a) {
    FieldSpec K = build_field_from_file(a.field_path);
    EngineOptions opt = make_options(a);
    KLReport rep = analyze(K, Int(a.p), opt);
    if (!a.quiet) std::cout << report_to_table(rep);
    if (!a.json_path.empty()) write_json(a.json_path, report_to_json(rep));
    return rep.all_checks_pass() ? 0 : 1;
}

int run_oracle(const CommonArgs& a, long c, bool c_given) {
    FieldSpec K = build_field_from_file(a.field_path);
    EngineOptions opt = make_options(a);
    opt.run_oracle = false;
    opt.run_kummer = false;
    PipelineRun run = run_pipeline(K, Int(a.p), opt.precision, opt);
    long use_c = c_given ? c : run.reg.kappa;
    long B = a.coeff_bound > 0 ? a.coeff_bound : a.p * a.p;
    OracleVerdict v = kappa_bruteforce_oracle(run, use_c, a.n_max, B, opt.oracle.candidate_budget);
    if (!a.quiet) {
        std::cout << "field " << K.label << ", p = " << a.p << ", kappa = " << run.reg.kappa
                  << ", oracle at c = " << use_c << "\n";
        std::cout << "tested " << v.tested << " candidates (n <= " << v.n_max
                  << ", |m| <= " << v.coeff_bound << ")\n";
        if (v.budget_exhausted)
            std::cout << "budget exhausted: partial verdict\n";
        else if (v.consistent)
            std::cout << "consistent: no counterexample in the box\n";
        else
            std::cout << "counterexample: " << v.counterexample << "\n";
    }
    return v.consistent && !v.budget_exhausted ? 0 : 1;
}

int run_regulator_check(const CommonArgs& a) {
    FieldSpec K = build_field_from_file(a.field_path);
    EngineOptions opt = make_options(a);
    opt.run_oracle = false;
    opt.run_kummer = false;
    KLReport rep = analyze(K, Int(a.p), opt);
    bool ok = true;
    for (const auto& c : rep.checks) {
        if (c.name != "coates-valuation" && c.name != "simplified-formula") continue;
        if (!a.quiet) std::cout << "[" << c.status << "] " << c.name << ": " << c.detail << "\n";
        ok &= c.status != "fail";
    }
    if (!a.json_path.empty()) write_json(a.json_path, report_to_json(rep));
    return ok ? 0 : 1;
}

int run_scan(const CommonArgs& a, long pmin, long pmax) {
    if (pmax < pmin) throw UsageError("scan: empty prime range");
    FieldSpec K = build_field_from_file(a.field_path);
    EngineOptions opt = make_options(a);
    auto rows = p_scan(K, pmin, pmax, opt);
    if (!a.quiet) std::cout << scan_to_table(K, rows);
    if (!a.json_path.empty()) write_json(a.json_path, scan_to_json(K, rows));
    for (const auto& r : rows)
        if (r.ok && !r.checks_pass) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kummer-Leopoldt constant and normalized p-adic regulator toolkit"};
    app.require_subcommand(1);

    CommonArgs analyze_args, oracle_args, reg_args, scan_args;
    long oracle_c = 0, pmin = 0, pmax = 0;
    bool quiet_selftest = false;

    auto* cmd_analyze = app.add_subcommand("analyze", "full pipeline + consistency checks");
    add_common(cmd_analyze, analyze_args, true);

    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force Definition-style verdict at c");
    add_common(cmd_oracle, oracle_args, true);
    auto* copt = cmd_oracle->add_option("--c", oracle_c, "membership shift c (default kappa)");

    auto* cmd_reg = app.add_subcommand("regulator-check", "valuation identities only");
    add_common(cmd_reg, reg_args, true);

    auto* cmd_scan = app.add_subcommand("scan", "run the pipeline for every prime in a range");
    add_common(cmd_scan, scan_args, false);
    cmd_scan->add_option("--pmin", pmin, "first prime")->required();
    cmd_scan->add_option("--pmax", pmax, "last prime")->required();

    auto* cmd_selftest = app.add_subcommand("selftest", "run the acceptance matrix");
    cmd_selftest->add_flag("--quiet", quiet_selftest, "only print the final verdict");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_analyze->parsed()) return run_analyze(analyze_args);
        if (cmd_oracle->parsed()) return run_oracle(oracle_args, oracle_c, copt->count() > 0);
        if (cmd_reg->parsed()) return run_regulator_check(reg_args);
        if (cmd_scan->parsed()) return run_scan(scan_args, pmin, pmax);
        if (cmd_selftest->parsed()) {
            std::ostringstream sink;
            bool ok = klreg::selftest::run_all(quiet_selftest ? sink : std::cout);
            if (quiet_selftest) std::cout << (ok ? "PASS\n" : "FAIL\n");
            return ok ? 0 : 1;
        }
    } catch (const klreg::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const klreg::PrecisionError& e) {
        std::cerr << "precision-unstable: " << e.what() << "\n";
        return 3;
    } catch (const klreg::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
