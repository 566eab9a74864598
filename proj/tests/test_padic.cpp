#include <random>

#include "doctest.h"
#include "klreg/padic.hpp"

using namespace klreg;

TEST_CASE("scalar arithmetic matches the worked examples") {
    // (p=5, N=3): inverse of 2 is 63
    PadicScalar two(Int(5), 2, 3);
    CHECK(two.inv().lift() == 63);
    CHECK(two.inv().mul(two).lift() == 1);

    // (p=5, N=3): 10/5 has value 2 at precision 2
    PadicScalar ten(Int(5), 10, 3);
    PadicScalar five(Int(5), 5, 3);
    PadicScalar q = ten.div(five);
    CHECK(q.lift() == 2);
    CHECK(q.precision() == 2);

    // (p=2, N=6): 3 * 21 = 63 = -1 mod 64
    PadicScalar a(Int(2), 3, 6), b(Int(2), 21, 6);
    CHECK(a.mul(b).lift() == 63);
    CHECK(a.mul(b).same_residue(PadicScalar(Int(2), -1, 6)));
}

TEST_CASE("division error paths") {
    PadicScalar one(Int(5), 1, 3);
    PadicScalar zero = PadicScalar::zero(Int(5), 3);
    CHECK_THROWS_AS(one.div(zero), PrecisionError);
    PadicScalar other(Int(7), 1, 3);
    CHECK_THROWS_AS(one.add(other), UsageError);
    // non-integral quotient
    PadicScalar eleven(Int(5), 11, 3);
    PadicScalar five(Int(5), 5, 3);
    CHECK_THROWS_AS(eleven.div(five), PrecisionError);
    // divisor valuation must stay below the dividend's precision
    PadicScalar p2(Int(5), 25, 2);
    CHECK_THROWS_AS(one.with_precision(2).div(p2), PrecisionError);
}

TEST_CASE("apparent zeros are tracked, never exact") {
    PadicScalar z(Int(3), 27, 3);
    CHECK(z.apparent_zero());
    CHECK(z.valuation_lb() == 3);
    PadicScalar w = z.add(PadicScalar::one(Int(3), 3));
    CHECK(w.lift() == 1);
}

TEST_CASE("scalar arithmetic agrees with exact rationals mod p^N") {
    std::mt19937_64 rng(12345);
    const long primes[] = {2, 3, 5, 7, 11, 13};
    for (int trial = 0; trial < 1000; ++trial) {
        long p = primes[rng() % 6];
        long N = 10 + static_cast<long>(rng() % 20);
        Int pn = ipow(Int(p), static_cast<unsigned long>(N));
        // rationals with denominators prime to p
        auto rand_rat = [&]() {
            Int num(static_cast<long>(rng() % 20001) - 10000);
            Int den(1 + static_cast<long>(rng() % 50));
            while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) den += 1;
            return Rat(num, den);
        };
        Rat x = rand_rat(), y = rand_rat();
        auto to_scalar = [&](const Rat& r) {
            Rat c = r;
            c.canonicalize();
            return PadicScalar(Int(p), c.get_num() * invmod(c.get_den(), pn), N);
        };
        PadicScalar xs = to_scalar(x), ys = to_scalar(y);
        int op = static_cast<int>(rng() % 3);
        Rat expect = op == 0 ? x + y : op == 1 ? x - y : x * y;
        PadicScalar got = op == 0 ? xs.add(ys) : op == 1 ? xs.sub(ys) : xs.mul(ys);
        PadicScalar want = to_scalar(expect);
        CHECK(got.same_residue(want.with_precision(got.precision() < N ? got.precision() : N)));
    }
}

TEST_CASE("hensel lifting of roots") {
    // x^2 - 2 over Z_7 from x0 = 3: root 108 mod 343
    {
        Int p(7);
        long N = 3;
        std::vector<PadicScalar> f = {PadicScalar(p, -2, N), PadicScalar(p, 0, N),
                                      PadicScalar(p, 1, N)};
        auto r = hensel_lift_root(f, PadicScalar(p, 3, N));
        REQUIRE(r.has_value());
        CHECK(r->lift() == 108);
    }
    // x^2 + 1 over Z_2: no lift from any start
    {
        Int p(2);
        long N = 8;
        std::vector<PadicScalar> f = {PadicScalar(p, 1, N), PadicScalar(p, 0, N),
                                      PadicScalar(p, 1, N)};
        for (long x0 = 0; x0 < 8; ++x0)
            CHECK_FALSE(hensel_lift_root(f, PadicScalar(p, x0, N)).has_value());
    }
    // x - 1 from x0 = 1: identity
    {
        Int p(5);
        long N = 6;
        std::vector<PadicScalar> f = {PadicScalar(p, -1, N), PadicScalar(p, 1, N)};
        auto r = hensel_lift_root(f, PadicScalar(p, 1, N));
        REQUIRE(r.has_value());
        CHECK(r->lift() == 1);
    }
}

TEST_CASE("hensel-lifted roots satisfy f(x) = 0 mod p^N") {
    std::mt19937_64 rng(777);
    int lifted = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const long primes[] = {3, 5, 7, 11};
        Int p(primes[rng() % 4]);
        long N = 12;
        // f = (x - a)(x - b) with distinct roots mod p
        Int a(static_cast<long>(rng() % 100)), b(static_cast<long>(rng() % 100));
        if (mod_pos(a - b, p) == 0) continue;
        std::vector<PadicScalar> f = {PadicScalar(p, a * b, N), PadicScalar(p, -(a + b), N),
                                      PadicScalar(p, 1, N)};
        auto r = hensel_lift_root(f, PadicScalar(p, a, N));
        REQUIRE(r.has_value());
        CHECK(eval_poly(f, *r).apparent_zero());
        ++lifted;
    }
    CHECK(lifted > 100);
}
