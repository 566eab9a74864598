#pragma once

#include <optional>
#include <vector>

#include "klreg/padic.hpp"

namespace klreg {

// Rectangular matrix over Z/p^prec; all entries share one (p, prec).
class PadicMatrix {
public:
    PadicMatrix(Int p, long prec, long rows, long cols);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    const Int& prime() const { return p_; }
    long precision() const { return prec_; }

    const PadicScalar& at(long i, long j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }
    void set(long i, long j, const PadicScalar& v);
    void set_int(long i, long j, const Int& v);

    static PadicMatrix identity(const Int& p, long prec, long n);
    static PadicMatrix from_int_rows(const Int& p, long prec,
                                     const std::vector<std::vector<Int>>& rows);

private:
    Int p_;
    long prec_;
    long rows_, cols_;
    std::vector<PadicScalar> data_;
};

/*
 * Elementary divisors of the cokernel of M as a map of free Z_p-modules,
 * at the matrix's working precision. Pivots whose valuation reaches
 * prec - safety_margin are indistinguishable from 0 and counted as free_rank;
 * the finite divisor exponents are reported in ascending order.
 */
struct SNFResult {
    std::vector<long> divisor_exponents;  // ascending
    long free_rank = 0;                   // of the min(rows, cols) slots
    bool certified = false;
    long threshold = 0;                   // valuation cutoff used

    long max_exponent() const { return divisor_exponents.empty() ? 0 : divisor_exponents.back(); }
    long exponent_sum() const {
        long s = 0;
        for (long d : divisor_exponents) s += d;
        return s;
    }
};

SNFResult snf(const PadicMatrix& M, long safety_margin);

// Number of pivots with valuation < prec - safety_margin. Certifies
// rank >= result; finite precision can never refute a rank.
long matrix_rank_at_precision(const PadicMatrix& M, long safety_margin);

// Solve B x = v by Gauss-Jordan with minimal-valuation pivoting. Throws
// PrecisionError if B is not invertible at precision or x is not p-integral.
std::vector<PadicScalar> solve_square(const PadicMatrix& B, const std::vector<PadicScalar>& v,
                                      long safety_margin);

// v_p(det B); nullopt when an apparent-zero pivot makes it uncertifiable.
std::optional<long> det_valuation(const PadicMatrix& B, long safety_margin);

/*
 * Column reduction of G: extracts a Z_p-basis of the column span together
 * with, for each basis column, the exponent vector expressing it as an
 * integral combination of the original columns (exponents lifted mod p^prec).
 */
struct ColumnReduction {
    PadicMatrix basis;                      // rows x rank
    std::vector<std::vector<Int>> combos;   // one per basis column, length = original cols
    std::vector<long> pivot_vals;
    std::vector<long> pivot_cols;           // original column index per pivot
    long rank_certified = 0;
};

ColumnReduction column_reduce(const PadicMatrix& G, long safety_margin);

} // namespace klreg
