#include <random>

#include "doctest.h"
#include "klreg/poly.hpp"

using namespace klreg;

TEST_CASE("cyclotomic polynomials") {
    CHECK(intpoly::cyclotomic(1) == IntPoly{-1, 1});
    CHECK(intpoly::cyclotomic(2) == IntPoly{1, 1});
    CHECK(intpoly::cyclotomic(5) == IntPoly{1, 1, 1, 1, 1});
    CHECK(intpoly::cyclotomic(12) == IntPoly{1, 0, -1, 0, 1});
    CHECK(intpoly::cyclotomic(8) == IntPoly{1, 0, 0, 0, 1});
}

TEST_CASE("resultant and discriminant") {
    // disc(x^2 - d) = 4d
    for (long d : {2L, 3L, -7L, 10L}) {
        IntPoly f = {Int(-d), 0, 1};
        CHECK(intpoly::discriminant(f) == 4 * Int(d));
    }
    // disc(x^3 - x - 1) = -23
    CHECK(intpoly::discriminant(IntPoly{-1, -1, 0, 1}) == -23);
    // disc(Phi_5) = 125
    CHECK(intpoly::discriminant(intpoly::cyclotomic(5)) == 125);
}

TEST_CASE("shift") {
    // (x+1)^2 - (x+1) = x^2 + x
    IntPoly f = {0, -1, 1};
    CHECK(intpoly::shift(f, 1) == IntPoly{0, 1, 1});
}

TEST_CASE("real root counting") {
    CHECK(intpoly::count_real_roots(IntPoly{-2, 0, 1}) == 2);   // x^2 - 2
    CHECK(intpoly::count_real_roots(IntPoly{2, 0, 1}) == 0);    // x^2 + 2
    CHECK(intpoly::count_real_roots(IntPoly{-1, -1, 0, 1}) == 1);  // x^3 - x - 1
    CHECK(intpoly::count_real_roots(intpoly::cyclotomic(5)) == 0);
}

TEST_CASE("Fp factorization reassembles the input") {
    std::mt19937_64 rng(5150);
    const long primes[] = {2, 3, 5, 7, 13};
    for (int trial = 0; trial < 200; ++trial) {
        long p = primes[rng() % 5];
        long deg = 1 + static_cast<long>(rng() % 8);
        std::vector<long> c;
        for (long i = 0; i < deg; ++i) c.push_back(static_cast<long>(rng() % static_cast<unsigned long>(p)));
        c.push_back(1);
        FpPoly f = fp::make(p, c);
        auto factors = fp::factor(f);
        FpPoly prod{p, {1}};
        for (const auto& [h, mult] : factors)
            for (int t = 0; t < mult; ++t) prod = fp::mul(prod, h);
        CHECK(fp::equal(prod, fp::make_monic(f)));
        // factors are irreducible: no proper gcd with x^{p^d} - x for d < deg h
        for (const auto& [h, mult] : factors) {
            (void)mult;
            FpPoly x{p, {0, 1}};
            FpPoly r = x;
            for (long d = 1; 2 * d <= h.deg(); ++d) {
                r = fp::powmod(r, Int(p), h);
                FpPoly g = fp::gcd(fp::sub(r, x), h);
                CHECK(g.deg() == 0);
            }
        }
    }
}

TEST_CASE("multifactor Hensel lift") {
    // x^2 - 2 = (x - 3)(x + 3) mod 7, lifted to 7^6
    IntPoly f = {-2, 0, 1};
    ZpCtx ctx(Int(7), 6);
    std::vector<FpPoly> clusters = {fp::make(7, {-3, 1}), fp::make(7, {3, 1})};
    auto lifted = zp::lift_factorization(f, clusters, ctx);
    REQUIRE(lifted.size() == 2);
    IntPoly prod = zp::mul(lifted[0], lifted[1], ctx);
    CHECK(prod == zp::reduce(f, ctx));
    // each factor is monic linear with a square root of 2
    for (const auto& g : lifted) {
        CHECK(intpoly::deg(g) == 1);
        Int root = mod_pos(-g[0], ctx.pN);
        CHECK(mod_pos(root * root - 2, ctx.pN) == 0);
    }
}

TEST_CASE("irreducibility certification") {
    CHECK(intpoly::is_irreducible_monic(IntPoly{-2, 0, 1}));          // x^2 - 2
    CHECK(intpoly::is_irreducible_monic(IntPoly{1, 0, 0, 0, 1}));     // x^4 + 1 (reducible mod all p)
    CHECK(intpoly::is_irreducible_monic(IntPoly{-1, -1, 0, 1}));      // x^3 - x - 1
    CHECK(intpoly::is_irreducible_monic(intpoly::cyclotomic(12)));
    CHECK_FALSE(intpoly::is_irreducible_monic(IntPoly{4, 0, 0, 0, 1}));  // x^4 + 4 splits
    CHECK_FALSE(intpoly::is_irreducible_monic(IntPoly{-1, 0, 1}));       // x^2 - 1
    CHECK_FALSE(intpoly::is_irreducible_monic(IntPoly{1, 2, 1}));        // (x+1)^2
}
