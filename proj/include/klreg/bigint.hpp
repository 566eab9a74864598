#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "klreg/errors.hpp"

namespace klreg {

using Int = mpz_class;
using Rat = mpq_class;

inline Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Representative of a mod m in [0, m).
inline Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline Int invmod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw UsageError("invmod: element not invertible");
    return r;
}

// v_p(a) for a != 0.
inline long valuation(const Int& a, const Int& p) {
    if (a == 0) throw UsageError("valuation of zero");
    Int unit;
    return static_cast<long>(mpz_remove(unit.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()));
}

// a = p^v * u with p coprime to u; returns (v, u). a != 0.
inline std::pair<long, Int> split_p_part(const Int& a, const Int& p) {
    if (a == 0) throw UsageError("split_p_part of zero");
    Int unit;
    long v = static_cast<long>(mpz_remove(unit.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()));
    return {v, unit};
}

inline bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline Int isqrt_floor(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int int_gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int int_lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// g = gcd(a,b) = x*a + y*b.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

long long to_long(const Int& a);

// Prime factorization by trial division + Pollard rho; n >= 1.
std::vector<std::pair<Int, int>> factor_integer(Int n);

// Multiplicative order of a modulo m, given that a^group_order == 1.
Int multiplicative_order(const Int& a, const Int& m, const Int& group_order);

// Rational reconstruction of x mod m with |num|, den <= bound; den coprime to m.
bool rational_reconstruct(const Int& x, const Int& m, const Int& bound, Rat& out);

} // namespace klreg
