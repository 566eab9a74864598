#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klreg/engine.hpp"
#include "klreg/selftest.hpp"

#include <sstream>

namespace py = pybind11;
using namespace klreg;

namespace {

py::object json_loads(const std::string& text) {
    return py::module_::import("json").attr("loads")(text);
}

EngineOptions options_from(long precision, long n_max, long coeff_bound, bool run_oracle) {
    EngineOptions opt;
    opt.precision = precision;
    opt.oracle.n_max = n_max;
    opt.oracle.coeff_bound = coeff_bound;
    opt.run_oracle = run_oracle;
    opt.run_kummer = run_oracle;
    return opt;
}

py::object py_analyze(const std::string& field_json, long p, long precision, long n_max,
                      long coeff_bound, bool run_oracle) {
    FieldSpec K = build_field(field_json);
    KLReport rep = analyze(K, Int(p), options_from(precision, n_max, coeff_bound, run_oracle));
    return json_loads(report_to_json(rep));
}

py::object py_analyze_file(const std::string& path, long p, long precision, long n_max,
                           long coeff_bound, bool run_oracle) {
    FieldSpec K = build_field_from_file(path);
    KLReport rep = analyze(K, Int(p), options_from(precision, n_max, coeff_bound, run_oracle));
    return json_loads(report_to_json(rep));
}

py::object py_scan(const std::string& field_json, long pmin, long pmax, long precision) {
    FieldSpec K = build_field(field_json);
    auto rows = p_scan(K, pmin, pmax, options_from(precision, 2, 0, true));
    return json_loads(scan_to_json(K, rows));
}

py::dict py_oracle(const std::string& field_json, long p, long c, long n_max, long coeff_bound,
                   long precision) {
    FieldSpec K = build_field(field_json);
    EngineOptions opt = options_from(precision, n_max, coeff_bound, false);
    PipelineRun run = run_pipeline(K, Int(p), precision, opt);
    long B = coeff_bound > 0 ? coeff_bound : p * p;
    OracleVerdict v = kappa_bruteforce_oracle(run, c, n_max, B, opt.oracle.candidate_budget);
    py::dict d;
    d["kappa"] = run.reg.kappa;
    d["c"] = v.c;
    d["consistent"] = v.consistent;
    d["budget_exhausted"] = v.budget_exhausted;
    d["tested"] = v.tested;
    d["counterexample"] = v.counterexample;
    return d;
}

py::dict py_snf(const std::vector<std::vector<long>>& rows, long p, long precision) {
    std::vector<std::vector<Int>> m;
    for (const auto& r : rows) {
        std::vector<Int> row;
        for (long x : r) row.push_back(Int(x));
        m.push_back(std::move(row));
    }
    SNFResult s = snf(PadicMatrix::from_int_rows(Int(p), precision, m), 5);
    py::dict d;
    d["divisor_exponents"] = s.divisor_exponents;
    d["free_rank"] = s.free_rank;
    d["certified"] = s.certified;
    return d;
}

py::dict py_narrow_class_group(long D) {
    NarrowClassGroupData g = narrow_class_group_quadratic(Int(D));
    py::dict d;
    d["discriminant"] = D;
    d["narrow_h"] = g.narrow_h;
    d["cycle_structure"] = g.cycle_structure;
    return d;
}

std::vector<std::string> py_fundamental_unit(long dv) {
    FieldSpec K = make_quadratic(dv);
    FieldElement u = fundamental_unit_real_quadratic(K);
    std::vector<std::string> out;
    for (const auto& c : u.coords) out.push_back(c.get_str());
    return out;
}

bool py_selftest() {
    std::ostringstream os;
    bool ok = selftest::run_all(os);
    py::print(os.str());
    return ok;
}

} // namespace

PYBIND11_MODULE(_klreg, m) {
    m.doc() = "Kummer-Leopoldt constant and normalized p-adic regulator toolkit";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    m.def("analyze", &py_analyze, py::arg("field_json"), py::arg("p"), py::arg("precision") = 40,
          py::arg("n_max") = 2, py::arg("coeff_bound") = 0, py::arg("run_oracle") = true,
          "Run the full pipeline; returns the report as a dict.");
    m.def("analyze_file", &py_analyze_file, py::arg("path"), py::arg("p"),
          py::arg("precision") = 40, py::arg("n_max") = 2, py::arg("coeff_bound") = 0,
          py::arg("run_oracle") = true);
    m.def("scan", &py_scan, py::arg("field_json"), py::arg("pmin"), py::arg("pmax"),
          py::arg("precision") = 40, "Table of (p, kappa, v_p(#R), nu) over a prime range.");
    m.def("oracle", &py_oracle, py::arg("field_json"), py::arg("p"), py::arg("c"),
          py::arg("n_max") = 2, py::arg("coeff_bound") = 0, py::arg("precision") = 40,
          "Brute-force membership verdict at a given c.");
    m.def("snf_divisors", &py_snf, py::arg("rows"), py::arg("p"), py::arg("precision") = 40,
          "Elementary divisor p-exponents of an integer matrix over Z_p.");
    m.def("narrow_class_group", &py_narrow_class_group, py::arg("D"),
          "Narrow class group of a fundamental quadratic discriminant.");
    m.def("fundamental_unit", &py_fundamental_unit, py::arg("d"),
          "Fundamental unit of Q(sqrt d) as power-basis coordinates.");
    m.def("selftest", &py_selftest, "Run the acceptance matrix; returns True on success.");

    m.attr("__version__") = "0.1.0";
}
