#pragma once

#include <string>
#include <vector>

#include "klreg/quadratic_forms.hpp"
#include "klreg/units.hpp"

namespace klreg {

struct OracleBounds {
    long n_max = 2;
    long coeff_bound = 0;  // 0: default p^2
    long candidate_budget = 2000000;
};

struct EngineOptions {
    long precision = 40;      // working p-adic digits N
    long verify_offset = 10;  // certified integers must match at N + offset
    long safety_margin = 5;
    OracleBounds oracle;
    bool run_oracle = true;
    bool run_kummer = true;
};

struct CheckOutcome {
    std::string name;
    std::string status;  // pass | fail | skipped
    std::string detail;
};

// tor(log U_K / log E-bar): elementary divisors, kappa = max exponent.
struct RegulatorStructure {
    std::vector<long> divisor_exponents;
    long kappa = 0;
    long order_exponent = 0;
    long free_rank = 0;  // [K:Q] - rank, equals r2 + 1 under Leopoldt
};

struct WMuReport {
    std::vector<long> local_torsion_exponents;  // k_p per prime
    long mu_exponent = 0;                       // global k
    long w_order_exponent = 0;                  // sum k_p
    long wmu_order_exponent = 0;                // sum k_p - k
    long nu = 0;                                // exponent of W/mu
};

struct OracleVerdict {
    bool ran = false;
    bool consistent = true;
    bool budget_exhausted = false;
    long tested = 0;
    long c = 0, n_max = 0, coeff_bound = 0;
    std::string counterexample;  // description when found
};

/*
 * One full run at a fixed precision: splitting, local torsion and unit
 * lattices, unit system, the global log-lattice pair, and every invariant.
 */
struct PipelineRun {
    FieldSpec K;
    Int p;
    long N = 0;
    long margin = 5;
    PrimeSplitting split;
    std::vector<LocalTorsion> torsions;
    std::vector<LocalUnitLattice> lattices;
    UnitSystem units;
    std::vector<std::vector<LocalElement>> unit_images;       // [prime][unit]
    std::vector<std::vector<UnitDecomposition>> unit_decomp;  // [prime][unit]
    std::vector<LocalElement> mu_images;                      // per prime, when mu nontrivial
    std::vector<long> mu_dlogs;                               // per prime, when mu nontrivial
    PadicMatrix e_coords;                                     // [K:Q] x #units
    std::vector<long> selected_units;
    long certified_rank = 0;
    bool leopoldt_verified = false;
    RegulatorStructure reg;
    WMuReport wmu;
    long tor_ue_order_exponent = 0;
    long tor_ue_p_rank = 0;
    std::vector<CheckOutcome> checks;
    std::vector<std::string> assumptions;

    PipelineRun() : e_coords(Int(2), 1, 0, 0) {}
};

PipelineRun run_pipeline(const FieldSpec& K, const Int& p, long N, const EngineOptions& opt);

// rk_p(T_K) = rk_p(Cl^{S,res}) + #S - 1 (valid when mu_K != 1).
long rank_formula_T(long rk_cl_s_res, long s_count);

// Definition-style brute-force verdict at a given c over the enumerated box.
OracleVerdict kappa_bruteforce_oracle(const PipelineRun& run, long c, long n_max,
                                      long coeff_bound, long candidate_budget);

struct KLReport {
    FieldSpec K;
    Int p;
    long precision_base = 0;
    long precision_verify = 0;
    bool stable = false;
    std::string leopoldt;  // verified | inconclusive
    RegulatorStructure reg;
    WMuReport wmu;
    long tor_ue_order_exponent = 0;
    std::vector<std::pair<long, long>> splitting;  // (e, f) per prime
    std::string provenance;
    Int principalization_exponent = 1;
    long unit_count = 0;
    std::vector<long> selected_units;
    OracleVerdict oracle;
    std::vector<CheckOutcome> checks;
    std::vector<std::string> assumptions;

    bool all_checks_pass() const {
        for (const auto& c : checks)
            if (c.status == "fail") return false;
        return true;
    }
};

KLReport analyze(const FieldSpec& K, const Int& p, const EngineOptions& opt);

struct ScanRow {
    Int p;
    bool ok = false;
    long kappa = 0;
    long order_exponent = 0;
    long nu = 0;
    bool checks_pass = false;
    std::string error;
};

// Full pipeline for every prime in [pmin, pmax]; per-prime failures are
// recorded and the scan continues. No conjecture is asserted.
std::vector<ScanRow> p_scan(const FieldSpec& K, long pmin, long pmax, const EngineOptions& opt);

// Stable-key JSON document (schema in the README); byte-identical for
// identical inputs.
std::string report_to_json(const KLReport& rep);
std::string report_to_table(const KLReport& rep);
std::string scan_to_json(const FieldSpec& K, const std::vector<ScanRow>& rows);
std::string scan_to_table(const FieldSpec& K, const std::vector<ScanRow>& rows);

} // namespace klreg
