#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "klreg/engine.hpp"

namespace klreg {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json field_json(const FieldSpec& K) {
    ordered_json f;
    switch (K.kind) {
        case FieldKind::Quadratic:
            f["kind"] = "quadratic";
            f["d"] = K.d;
            break;
        case FieldKind::Cyclotomic:
            f["kind"] = "cyclotomic";
            f["m"] = K.m;
            break;
        case FieldKind::Custom: {
            f["kind"] = "custom";
            ordered_json mp = ordered_json::array();
            for (const auto& c : K.min_poly) mp.push_back(c.get_str());
            f["min_poly"] = mp;
            break;
        }
    }
    f["label"] = K.label;
    f["degree"] = K.degree;
    f["signature"] = ordered_json::array({K.r1, K.r2});
    f["discriminant"] = K.discriminant.get_str();
    f["unit_rank"] = K.unit_rank();
    return f;
}

ordered_json checks_json(const std::vector<CheckOutcome>& checks) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json j;
        j["name"] = c.name;
        j["status"] = c.status;
        j["detail"] = c.detail;
        arr.push_back(j);
    }
    return arr;
}

} // namespace

std::string report_to_json(const KLReport& rep) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "klreg";
    j["field"] = field_json(rep.K);
    j["p"] = rep.p.get_str();
    {
        ordered_json pr;
        pr["base"] = rep.precision_base;
        pr["verify"] = rep.precision_verify;
        pr["stable"] = rep.stable;
        j["precision"] = pr;
    }
    {
        ordered_json arr = ordered_json::array();
        for (const auto& [e, f] : rep.splitting) {
            ordered_json s;
            s["e"] = e;
            s["f"] = f;
            arr.push_back(s);
        }
        j["splitting"] = arr;
    }
    j["leopoldt"] = rep.leopoldt;
    {
        ordered_json r;
        r["divisor_exponents"] = rep.reg.divisor_exponents;
        r["kappa"] = rep.reg.kappa;
        r["order_exponent"] = rep.reg.order_exponent;
        r["free_rank"] = rep.reg.free_rank;
        j["regulator"] = r;
    }
    {
        ordered_json w;
        w["local_torsion_exponents"] = rep.wmu.local_torsion_exponents;
        w["mu_exponent"] = rep.wmu.mu_exponent;
        w["w_order_exponent"] = rep.wmu.w_order_exponent;
        w["wmu_order_exponent"] = rep.wmu.wmu_order_exponent;
        w["nu"] = rep.wmu.nu;
        j["wmu"] = w;
    }
    j["tor_ue_order_exponent"] = rep.tor_ue_order_exponent;
    {
        ordered_json u;
        u["provenance"] = rep.provenance;
        u["count"] = rep.unit_count;
        u["selected"] = rep.selected_units;
        u["principalization_exponent"] = rep.principalization_exponent.get_str();
        j["units"] = u;
    }
    {
        ordered_json o;
        o["ran"] = rep.oracle.ran;
        o["c"] = rep.oracle.c;
        o["n_max"] = rep.oracle.n_max;
        o["coeff_bound"] = rep.oracle.coeff_bound;
        o["tested"] = rep.oracle.tested;
        o["consistent"] = rep.oracle.consistent;
        o["budget_exhausted"] = rep.oracle.budget_exhausted;
        o["counterexample"] = rep.oracle.counterexample;
        j["oracle"] = o;
    }
    j["checks"] = checks_json(rep.checks);
    j["assumptions"] = rep.assumptions;
    return j.dump(2) + "\n";
}

std::string report_to_table(const KLReport& rep) {
    std::ostringstream os;
    os << "field: " << rep.K.label << "   p = " << rep.p.get_str() << "\n";
    os << "precision: N = " << rep.precision_base << " (verified at N = " << rep.precision_verify
       << ", " << (rep.stable ? "stable" : "UNSTABLE") << ")\n";
    os << "splitting:";
    for (const auto& [e, f] : rep.splitting) os << " (e=" << e << ", f=" << f << ")";
    os << "\n";
    os << "leopoldt: " << rep.leopoldt << "\n";
    os << "kappa = " << rep.reg.kappa << ", v_p(#R) = " << rep.reg.order_exponent
       << ", divisors p^";
    os << "[";
    for (size_t i = 0; i < rep.reg.divisor_exponents.size(); ++i) {
        if (i) os << ",";
        os << rep.reg.divisor_exponents[i];
    }
    os << "]\n";
    os << "nu = " << rep.wmu.nu << ", v_p(#W) = " << rep.wmu.w_order_exponent
       << ", v_p(#mu) = " << rep.wmu.mu_exponent
       << ", v_p(#W/mu) = " << rep.wmu.wmu_order_exponent << "\n";
    os << "v_p(#tor(U/E-bar)) = " << rep.tor_ue_order_exponent << "\n";
    os << "checks:\n";
    for (const auto& c : rep.checks)
        os << "  [" << std::setw(7) << c.status << "] " << c.name << ": " << c.detail << "\n";
    if (!rep.assumptions.empty()) {
        os << "assumptions:\n";
        for (const auto& a : rep.assumptions) os << "  - " << a << "\n";
    }
    return os.str();
}

std::string scan_to_json(const FieldSpec& K, const std::vector<ScanRow>& rows) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "klreg";
    j["field"] = field_json(K);
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json row;
        row["p"] = r.p.get_str();
        row["ok"] = r.ok;
        if (r.ok) {
            row["kappa"] = r.kappa;
            row["order_exponent"] = r.order_exponent;
            row["nu"] = r.nu;
            row["checks_pass"] = r.checks_pass;
        } else {
            row["error"] = r.error;
        }
        arr.push_back(row);
    }
    j["rows"] = arr;
    return j.dump(2) + "\n";
}

std::string scan_to_table(const FieldSpec& K, const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    os << "scan: " << K.label << "\n";
    os << std::setw(8) << "p" << std::setw(8) << "kappa" << std::setw(12) << "v_p(#R)"
       << std::setw(6) << "nu" << std::setw(10) << "checks" << "\n";
    long exceptional = 0;
    for (const auto& r : rows) {
        if (!r.ok) {
            os << std::setw(8) << r.p.get_str() << "  error: " << r.error << "\n";
            continue;
        }
        os << std::setw(8) << r.p.get_str() << std::setw(8) << r.kappa << std::setw(12)
           << r.order_exponent << std::setw(6) << r.nu << std::setw(10)
           << (r.checks_pass ? "pass" : "FAIL") << "\n";
        if (r.kappa > 0) ++exceptional;
    }
    os << "exceptional primes (kappa > 0): " << exceptional << "\n";
    return os.str();
}

} // namespace klreg
