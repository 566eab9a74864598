#include "klreg/bigint.hpp"

#include <algorithm>
#include <map>

namespace klreg {

long long to_long(const Int& a) {
    if (!a.fits_slong_p()) throw UsageError("integer too large for machine word");
    return a.get_si();
}

namespace {

Int pollard_rho(const Int& n) {
    // Brent's variant with deterministic restarts.
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        auto step = [&](const Int& v) { return mod_pos(v * v + Int(c), n); };
        int guard = 0;
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            d = int_gcd(mod_pos(x - y, n), n);
            if (++guard > 1 << 22) break;
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(Int n, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    for (long q = 2; q < 100000; ++q) {
        if (n % q == 0) {
            while (n % q == 0) {
                out[Int(q)] += 1;
                n /= q;
            }
            factor_rec(n, out);
            return;
        }
        if (Int(q) * q > n) break;
    }
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

std::vector<std::pair<Int, int>> factor_integer(Int n) {
    if (n < 1) throw UsageError("factor_integer: n must be >= 1");
    std::map<Int, int> m;
    factor_rec(n, m);
    return {m.begin(), m.end()};
}

Int multiplicative_order(const Int& a, const Int& m, const Int& group_order) {
    Int red = mod_pos(a, m);
    Int chk;
    mpz_powm(chk.get_mpz_t(), red.get_mpz_t(), group_order.get_mpz_t(), m.get_mpz_t());
    if (chk != 1) throw UsageError("multiplicative_order: group order does not annihilate");
    Int o = group_order;
    for (const auto& [q, e] : factor_integer(group_order)) {
        (void)e;
        while (o % q == 0) {
            Int cand = o / q;
            Int t;
            mpz_powm(t.get_mpz_t(), red.get_mpz_t(), cand.get_mpz_t(), m.get_mpz_t());
            if (t == 1)
                o = cand;
            else
                break;
        }
    }
    return o;
}

bool rational_reconstruct(const Int& x, const Int& m, const Int& bound, Rat& out) {
    // Standard half-extended Euclid: find (r, t) on the remainder sequence of
    // (m, x) with |r| <= bound, |t| <= bound; candidate x == r/t (mod m).
    Int r0 = m, r1 = mod_pos(x, m);
    Int t0 = 0, t1 = 1;
    while (r1 != 0 && r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r1 == 0) {
        if (r0 <= bound) { out = Rat(0); return r0 != 0 && mod_pos(x, m) == 0; }
        return false;
    }
    Int den = t1;
    Int num = r1;
    if (den < 0) { den = -den; num = -num; }
    if (den == 0 || den > bound) return false;
    if (int_gcd(den, m) != 1) return false;
    out = Rat(num, den);
    out.canonicalize();
    return true;
}

} // namespace klreg
