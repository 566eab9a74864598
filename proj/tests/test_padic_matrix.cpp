#include <random>

#include "doctest.h"
#include "klreg/padic_matrix.hpp"
#include "oracles.hpp"

using namespace klreg;

TEST_CASE("snf worked examples") {
    SUBCASE("identity 3x3") {
        SNFResult s = snf(PadicMatrix::identity(Int(5), 20, 3), 5);
        CHECK(s.divisor_exponents == std::vector<long>{0, 0, 0});
        CHECK(s.free_rank == 0);
        CHECK(s.certified);
    }
    SUBCASE("[[2,4],[6,8]] at p = 2") {
        auto M = PadicMatrix::from_int_rows(Int(2), 8, {{2, 4}, {6, 8}});
        SNFResult s = snf(M, 2);
        CHECK(s.divisor_exponents == std::vector<long>{1, 2});
        CHECK(s.free_rank == 0);
    }
    SUBCASE("2x3 zero matrix") {
        PadicMatrix M(Int(3), 20, 2, 3);
        SNFResult s = snf(M, 5);
        CHECK(s.divisor_exponents.empty());
        CHECK(s.free_rank == 2);
    }
}

TEST_CASE("rank at precision") {
    CHECK(matrix_rank_at_precision(PadicMatrix::identity(Int(7), 20, 2), 5) == 2);
    CHECK(matrix_rank_at_precision(PadicMatrix(Int(7), 20, 3, 3), 5) == 0);
}

TEST_CASE("snf agrees with the exact integer oracle") {
    std::mt19937_64 rng(424242);
    const long primes[] = {2, 3, 5, 7, 11, 13};
    int agreed = 0;
    for (int trial = 0; trial < 500; ++trial) {
        long p = primes[rng() % 6];
        long rows = 1 + static_cast<long>(rng() % 5);
        long cols = 1 + static_cast<long>(rng() % 5);
        std::vector<std::vector<Int>> M(static_cast<size_t>(rows),
                                        std::vector<Int>(static_cast<size_t>(cols)));
        for (auto& r : M)
            for (auto& x : r) x = Int(static_cast<long>(rng() % 101) - 50);
        SNFResult got = snf(PadicMatrix::from_int_rows(Int(p), 30, M), 5);
        if (!got.certified) continue;
        auto expect = testing::integer_snf_p_exponents(M, Int(p));
        long exact_rank = static_cast<long>(expect.size());
        CHECK(got.divisor_exponents == expect);
        CHECK(got.free_rank == std::min(rows, cols) - exact_rank);
        ++agreed;
    }
    CHECK(agreed >= 490);
}

TEST_CASE("snf divisors are invariant under unimodular transforms") {
    std::mt19937_64 rng(9898);
    for (int trial = 0; trial < 50; ++trial) {
        long p = trial % 2 ? 3 : 2;
        long n = 3;
        std::vector<std::vector<Int>> M(3, std::vector<Int>(3));
        for (auto& r : M)
            for (auto& x : r) x = Int(static_cast<long>(rng() % 41) - 20);
        // random unimodular: product of elementary row/col operations
        auto elem = [&](std::vector<std::vector<Int>>& A, bool row) {
            long i = static_cast<long>(rng() % n), j = static_cast<long>(rng() % n);
            if (i == j) return;
            Int c(static_cast<long>(rng() % 7) - 3);
            for (long k = 0; k < n; ++k) {
                if (row)
                    A[static_cast<size_t>(i)][static_cast<size_t>(k)] += c * A[static_cast<size_t>(j)][static_cast<size_t>(k)];
                else
                    A[static_cast<size_t>(k)][static_cast<size_t>(i)] += c * A[static_cast<size_t>(k)][static_cast<size_t>(j)];
            }
        };
        auto N = M;
        for (int t = 0; t < 8; ++t) elem(N, rng() % 2 == 0);
        SNFResult a = snf(PadicMatrix::from_int_rows(Int(p), 30, M), 5);
        SNFResult b = snf(PadicMatrix::from_int_rows(Int(p), 30, N), 5);
        if (a.certified && b.certified) {
            CHECK(a.divisor_exponents == b.divisor_exponents);
            CHECK(a.free_rank == b.free_rank);
        }
    }
}

TEST_CASE("solve_square recovers known solutions") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        long p = trial % 2 ? 5 : 2;
        long n = 1 + static_cast<long>(rng() % 4);
        long N = 25;
        // B = random with unit determinant-ish: identity plus strictly mixed noise
        std::vector<std::vector<Int>> B(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), Int(0)));
        for (long i = 0; i < n; ++i) {
            B[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
            for (long j = 0; j < n; ++j)
                if (i != j) B[static_cast<size_t>(i)][static_cast<size_t>(j)] = Int(p) * Int(static_cast<long>(rng() % 9) - 4);
        }
        PadicMatrix Bm = PadicMatrix::from_int_rows(Int(p), N, B);
        std::vector<PadicScalar> x;
        for (long i = 0; i < n; ++i) x.emplace_back(Int(p), Int(static_cast<long>(rng() % 1000)), N);
        std::vector<PadicScalar> v;
        for (long i = 0; i < n; ++i) {
            PadicScalar acc = PadicScalar::zero(Int(p), N);
            for (long j = 0; j < n; ++j) acc = acc.add(Bm.at(i, j).mul(x[static_cast<size_t>(j)]));
            v.push_back(acc);
        }
        auto got = solve_square(Bm, v, 5);
        for (long i = 0; i < n; ++i) CHECK(got[static_cast<size_t>(i)].same_residue(x[static_cast<size_t>(i)]));
    }
}

TEST_CASE("column_reduce extracts a basis with preimage combos") {
    // two generators of the same rank-1 lattice over Z_5
    auto G = PadicMatrix::from_int_rows(Int(5), 20, {{5, 10}, {0, 0}});
    ColumnReduction red = column_reduce(G, 5);
    CHECK(red.rank_certified == 1);
    CHECK(red.pivot_vals == std::vector<long>{1});
    REQUIRE(red.combos.size() == 1);
    // basis column = 1*g0 + 0*g1 or a combination; verify it reproduces
    Int pn = ipow(Int(5), 20);
    Int recon = mod_pos(red.combos[0][0] * 5 + red.combos[0][1] * 10, pn);
    CHECK(recon == red.basis.at(0, 0).lift());
}
