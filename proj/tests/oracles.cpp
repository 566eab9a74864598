#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace klreg::testing {

std::vector<Int> integer_snf_divisors(std::vector<std::vector<Int>> M) {
    long rows = static_cast<long>(M.size());
    long cols = rows ? static_cast<long>(M[0].size()) : 0;
    std::vector<Int> divisors;
    long top = 0;
    while (top < std::min(rows, cols)) {
        long bi = -1, bj = -1;
        Int best = 0;
        for (long i = top; i < rows; ++i)
            for (long j = top; j < cols; ++j) {
                Int a = abs(M[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                if (a != 0 && (bi < 0 || a < best)) {
                    best = a;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        std::swap(M[static_cast<size_t>(top)], M[static_cast<size_t>(bi)]);
        for (long i = 0; i < rows; ++i)
            std::swap(M[static_cast<size_t>(i)][static_cast<size_t>(top)],
                      M[static_cast<size_t>(i)][static_cast<size_t>(bj)]);
        bool clean = true;
        for (long i = top + 1; i < rows; ++i) {
            Int q = M[static_cast<size_t>(i)][static_cast<size_t>(top)] /
                    M[static_cast<size_t>(top)][static_cast<size_t>(top)];
            if (q != 0)
                for (long j = top; j < cols; ++j)
                    M[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
                        q * M[static_cast<size_t>(top)][static_cast<size_t>(j)];
            if (M[static_cast<size_t>(i)][static_cast<size_t>(top)] != 0) clean = false;
        }
        for (long j = top + 1; j < cols; ++j) {
            Int q = M[static_cast<size_t>(top)][static_cast<size_t>(j)] /
                    M[static_cast<size_t>(top)][static_cast<size_t>(top)];
            if (q != 0)
                for (long i = top; i < rows; ++i)
                    M[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
                        q * M[static_cast<size_t>(i)][static_cast<size_t>(top)];
            if (M[static_cast<size_t>(top)][static_cast<size_t>(j)] != 0) clean = false;
        }
        if (!clean) continue;
        divisors.push_back(abs(M[static_cast<size_t>(top)][static_cast<size_t>(top)]));
        ++top;
    }
    return divisors;
}

std::vector<long> integer_snf_p_exponents(const std::vector<std::vector<Int>>& M, const Int& p) {
    std::vector<long> out;
    for (const auto& d : integer_snf_divisors(M)) out.push_back(valuation(d, p));
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<PellSolution> pell_fundamental(long d, long y_bound) {
    Int D(d);
    // half-integer solutions (x, y odd) of x^2 - d y^2 = +-4 come first when
    // they exist; scan both families by increasing y.
    for (Int y = 1; y <= y_bound; ++y) {
        if (d % 4 == 1) {
            Int t2 = D * y * y - 4;
            if (t2 > 0) {
                Int x = isqrt_floor(t2);
                if (x * x == t2 && mpz_odd_p(x.get_mpz_t()) && mpz_odd_p(y.get_mpz_t()))
                    return PellSolution{x, y, true};
            }
            t2 = D * y * y + 4;
            Int x = isqrt_floor(t2);
            if (x * x == t2 && mpz_odd_p(x.get_mpz_t()) && mpz_odd_p(y.get_mpz_t()))
                return PellSolution{x, y, true};
        }
        Int t2 = D * y * y - 1;
        if (t2 > 0) {
            Int x = isqrt_floor(t2);
            if (x * x == t2) return PellSolution{x, y, false};
        }
        t2 = D * y * y + 1;
        Int x = isqrt_floor(t2);
        if (x * x == t2) return PellSolution{x, y, false};
    }
    return std::nullopt;
}

int kronecker_symbol(Int a, Int n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    long v = 0;
    while (mpz_even_p(n.get_mpz_t())) {
        n /= 2;
        ++v;
    }
    if (v % 2 == 1) {
        Int am8 = mod_pos(a, 8);
        if (am8 == 3 || am8 == 5) sign = -sign;
        if (am8 == 0 || am8 == 2 || am8 == 4 || am8 == 6) return 0;
    }
    a = mod_pos(a, n);
    while (a != 0) {
        long va = 0;
        while (mpz_even_p(a.get_mpz_t())) {
            a /= 2;
            ++va;
        }
        if (va % 2 == 1) {
            Int nm8 = mod_pos(n, 8);
            if (nm8 == 3 || nm8 == 5) sign = -sign;
        }
        // quadratic reciprocity
        if (mod_pos(a, 4) == 3 && mod_pos(n, 4) == 3) sign = -sign;
        Int t = n;
        n = a;
        a = mod_pos(t, a);
    }
    return n == 1 ? sign : 0;
}

long count_reduced_forms_negative(const Int& D) {
    if (D >= 0) throw UsageError("count_reduced_forms_negative: D must be < 0");
    long count = 0;
    Int A = abs(D) / 3;
    for (Int a = 1; a * a <= A; ++a) {
        for (Int b = -a; b <= a; ++b) {
            if (mod_pos(b - D, 2) != 0) continue;
            Int num = b * b - D;
            Int fourA = 4 * a;
            if (!mpz_divisible_p(num.get_mpz_t(), fourA.get_mpz_t())) continue;
            Int c = num / fourA;
            if (c < a) continue;
            Int g = int_gcd(int_gcd(a, b), c);
            if (g != 1) continue;
            if ((a == c || b == -a) && b < 0) continue;
            ++count;
        }
    }
    return count;
}

Int log_partial_sum_oracle(const Int& p, long N, const Int& x) {
    long vx = valuation(x, p);
    double lp = std::log(mpz_get_d(p.get_mpz_t()));
    long T = 1;
    for (long i = 1; i <= 200000; ++i) {
        double bound = static_cast<double>(i) * vx - std::log(static_cast<double>(i)) / lp;
        if (bound < static_cast<double>(N)) T = i;
        if (bound >= static_cast<double>(N) + 8 && i > 2 * N) break;
    }
    Rat sum(0), pw(1), xr{Rat(x)};
    for (long i = 1; i <= T; ++i) {
        pw *= xr;
        Rat term = pw / Rat(i);
        sum += (i % 2 == 0) ? -term : term;
    }
    sum.canonicalize();
    Int pn = ipow(p, static_cast<unsigned long>(N));
    Int den = sum.get_den();
    if (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t()))
        throw UsageError("log oracle: denominator not prime to p");
    return mod_pos(sum.get_num() * invmod(den, pn), pn);
}

} // namespace klreg::testing
