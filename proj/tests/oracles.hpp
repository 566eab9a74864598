#pragma once

// Independent brute-force oracles used by the test suites. These deliberately
// avoid the library's own code paths for the quantities they check.

#include <optional>
#include <vector>

#include "klreg/bigint.hpp"

namespace klreg::testing {

// Elementary divisors of an integer matrix over Z (textbook Smith reduction,
// exact arithmetic). Nonzero diagonal entries, unsorted.
std::vector<Int> integer_snf_divisors(std::vector<std::vector<Int>> M);

// Sorted p-exponents of the nonzero elementary divisors.
std::vector<long> integer_snf_p_exponents(const std::vector<std::vector<Int>>& M, const Int& p);

// Minimal solution of x^2 - d y^2 = +-1 by brute scan over y; also reports
// the half-integer fundamental solution of x^2 - d y^2 = +-4 when smaller
// (d = 1 mod 4). Returns coordinates (x, y, halved).
struct PellSolution {
    Int x, y;
    bool halved = false;
};
std::optional<PellSolution> pell_fundamental(long d, long y_bound);

// Kronecker symbol (a | n).
int kronecker_symbol(Int a, Int n);

// Number of reduced primitive positive-definite forms of discriminant D < 0.
long count_reduced_forms_negative(const Int& D);

// log(1 + x) in Z_p as an exact rational partial sum reduced mod p^N.
Int log_partial_sum_oracle(const Int& p, long N, const Int& x);

} // namespace klreg::testing
