#include <random>

#include "doctest.h"
#include "klreg/local_field.hpp"
#include "oracles.hpp"

using namespace klreg;

namespace {

// Rank-one completion Q_p at precision N.
LocalFieldPtr make_qp(long p, long N) {
    auto F = std::make_shared<LocalField>(Int(p), N);
    F->g = {Int(0), Int(1)};
    F->e = 1;
    F->f = 1;
    F->residue_poly = fp::make(p, {0, 1});
    F->uniformizer = {Int(p)};
    F->n0 = 1 / (p - 1) + 1;
    F->log_scale = 0;
    return F;
}

LocalFieldPtr ramified_block(const FieldSpec& K, long p, long N) {
    PrimeSplitting s = factor_p(K, Int(p), N);
    REQUIRE(s.primes.size() == 1);
    return s.primes[0];
}

} // namespace

TEST_CASE("local arithmetic basics") {
    auto F = ramified_block(make_cyclotomic(5), 5, 30);
    LocalElement z = lf::from_poly(F, IntPoly{0, 1}, 30);  // zeta_5
    CHECK(lf::same_residue(lf::pow(z, 5), lf::one(F)));
    LocalElement zi = lf::inv(z);
    CHECK(lf::same_residue(lf::mul(z, zi), lf::one(F)));
    // v(zeta - 1) = 1 in the totally ramified block
    ValLB v = lf::valuation(lf::sub(z, lf::one(F)));
    CHECK(v.exact);
    CHECK(v.v == 1);
    // v(5) = e = 4
    ValLB v5 = lf::valuation(lf::from_int(F, 5));
    CHECK(v5.exact);
    CHECK(v5.v == 4);
}

TEST_CASE("padic_log examples") {
    SUBCASE("log(1) = 0") {
        auto F = make_qp(5, 20);
        auto lg = lf::padic_log(lf::one(F));
        for (const auto& c : lg) CHECK(c.apparent_zero());
    }
    SUBCASE("log(6) = 55 mod 5^3 in Q_5") {
        auto F = make_qp(5, 20);
        auto lg = lf::padic_log(lf::from_int(F, 6));
        REQUIRE(lg.size() == 1);
        CHECK(mod_pos(lg[0].lift(), ipow(Int(5), 3)) == 55);
    }
    SUBCASE("matches the exact partial-sum oracle") {
        std::mt19937_64 rng(99);
        const long primes[] = {2, 3, 5, 7, 11, 13};
        int agreed = 0;
        for (int trial = 0; trial < 500; ++trial) {
            long p = primes[rng() % 6];
            long N = 25;
            auto F = make_qp(p, N);
            Int x = Int(p) * Int(1 + static_cast<long>(rng() % 2000));
            Int expect = testing::log_partial_sum_oracle(Int(p), N, x);
            auto lg = lf::padic_log(lf::make(F, {1 + x}, N));
            long prec = lg[0].precision();
            CHECK(mod_pos(expect - lg[0].lift(), ipow(Int(p), static_cast<unsigned long>(prec))) == 0);
            ++agreed;
        }
        CHECK(agreed == 500);
    }
    SUBCASE("log(u^p) = p log(u)") {
        std::mt19937_64 rng(123);
        auto F = ramified_block(make_quadratic(3), 2, 30);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Int> c = {1 + 2 * Int(static_cast<long>(rng() % 500)),
                                  2 * Int(static_cast<long>(rng() % 500))};
            LocalElement u = lf::make(F, c, 30);
            ValLB vu = lf::valuation(lf::sub(u, lf::one(F)));
            if (!vu.exact || vu.v < 1) continue;
            auto a = lf::padic_log(lf::pow(u, Int(2)));
            auto b = lf::padic_log(u);
            for (size_t i = 0; i < a.size(); ++i) {
                PadicScalar delta = a[i].sub(b[i].mul_int(2));
                CHECK(delta.valuation_lb() >= std::min(a[i].precision(), b[i].precision()) - 1);
            }
        }
    }
    SUBCASE("non-principal input is rejected") {
        auto F = make_qp(5, 20);
        CHECK_THROWS_AS(lf::padic_log(lf::from_int(F, 2)), UsageError);
    }
}

TEST_CASE("local roots of unity") {
    SUBCASE("Q_5: trivial p-part") {
        auto t = local_root_of_unity_p_part(make_qp(5, 30), 5);
        CHECK(t.order_exponent == 0);
    }
    SUBCASE("Q_2: only +-1") {
        auto t = local_root_of_unity_p_part(make_qp(2, 30), 5);
        CHECK(t.order_exponent == 1);
        REQUIRE(t.generator.has_value());
        CHECK(lf::same_residue(*t.generator, lf::from_int(make_qp(2, 30), -1)));
    }
    SUBCASE("Q_5(zeta_5): k = 1, not 2") {
        auto F = ramified_block(make_cyclotomic(5), 5, 30);
        auto t = local_root_of_unity_p_part(F, 5);
        CHECK(t.order_exponent == 1);
        REQUIRE(t.generator.has_value());
        CHECK(lf::same_residue(lf::pow(*t.generator, Int(5)), lf::one(F)));
        CHECK_FALSE(lf::same_residue(*t.generator, lf::one(F)));
    }
    SUBCASE("Q_2(i): k = 2") {
        auto F = ramified_block(make_quadratic(-1), 2, 30);
        auto t = local_root_of_unity_p_part(F, 5);
        CHECK(t.order_exponent == 2);
        REQUIRE(t.generator.has_value());
        CHECK(lf::same_residue(lf::pow(*t.generator, Int(4)), lf::one(F)));
        CHECK_FALSE(lf::same_residue(lf::pow(*t.generator, Int(2)), lf::one(F)));
    }
    SUBCASE("Q_2(sqrt3): k = 1 (i is not there)") {
        auto F = ramified_block(make_quadratic(3), 2, 30);
        auto t = local_root_of_unity_p_part(F, 5);
        CHECK(t.order_exponent == 1);
    }
    SUBCASE("kernel of log") {
        for (auto F : {ramified_block(make_cyclotomic(5), 5, 30),
                       ramified_block(make_quadratic(-1), 2, 30)}) {
            auto t = local_root_of_unity_p_part(F, 5);
            REQUIRE(t.generator.has_value());
            for (const auto& c : lf::padic_log(*t.generator)) CHECK(c.apparent_zero());
        }
    }
}

TEST_CASE("local unit log lattices") {
    SUBCASE("Q_p, p odd: lattice p Z_p") {
        auto lat = local_unit_log_lattice(make_qp(5, 30), 5);
        CHECK(lat.log_basis.rows() == 1);
        CHECK(lat.pivot_vals == std::vector<long>{1});
    }
    SUBCASE("Q_2: lattice 4 Z_2 from generators 3, 5") {
        auto lat = local_unit_log_lattice(make_qp(2, 30), 5);
        CHECK(lat.pivot_vals == std::vector<long>{2});
    }
    SUBCASE("Q_5(zeta_5): rank 4, contains pi^2 O") {
        auto F = ramified_block(make_cyclotomic(5), 5, 30);
        CHECK(F->n0 == 2);
        auto lat = local_unit_log_lattice(F, 5);
        CHECK(lat.log_basis.rows() == 4);
        CHECK(lat.log_basis.cols() == 4);
        // pi^2 O inside the lattice: solve for the generators of pi^2 O
        LocalElement pi = lf::from_poly(F, F->uniformizer, F->N);
        auto tors = local_root_of_unity_p_part(F, 5);
        for (long t = 0; t < 4; ++t) {
            std::vector<Int> xt(static_cast<size_t>(t + 1), Int(0));
            xt[static_cast<size_t>(t)] = 1;
            LocalElement target = lf::mul(lf::mul(pi, pi), lf::make(F, xt, F->N));
            // coordinates of target in the basis must be p-integral: solve succeeds
            std::vector<PadicScalar> rhs;
            long prec = lat.log_basis.precision();
            for (long i = 0; i < 4; ++i) rhs.push_back(target.coords[static_cast<size_t>(i)].with_precision(prec));
            CHECK_NOTHROW(solve_square(lat.log_basis, rhs, 5));
        }
        (void)tors;
    }
}

TEST_CASE("p-power membership") {
    SUBCASE("u = 1 is a p^m-th power for any m") {
        auto F = make_qp(5, 30);
        auto lat = local_unit_log_lattice(F, 5);
        auto tors = local_root_of_unity_p_part(F, 5);
        for (long m : {0L, 1L, 2L, 3L}) CHECK(is_pm_power(lf::one(F), m, lat, tors, 5));
    }
    SUBCASE("26 is a 5th power in Q_5") {
        auto F = make_qp(5, 30);
        auto lat = local_unit_log_lattice(F, 5);
        auto tors = local_root_of_unity_p_part(F, 5);
        CHECK(is_pm_power(lf::from_int(F, 26), 1, lat, tors, 5));
        CHECK_FALSE(is_pm_power(lf::from_int(F, 6), 1, lat, tors, 5));
    }
    SUBCASE("-1 is not a square in Q_2") {
        auto F = make_qp(2, 30);
        auto lat = local_unit_log_lattice(F, 5);
        auto tors = local_root_of_unity_p_part(F, 5);
        CHECK_FALSE(is_pm_power(lf::from_int(F, -1), 1, lat, tors, 5));
        CHECK(is_pm_power(lf::from_int(F, -1), 0, lat, tors, 5));
        CHECK(is_pm_power(lf::from_int(F, 17), 3, lat, tors, 5));  // 17 = 1 mod 16
        CHECK_FALSE(is_pm_power(lf::from_int(F, 17), 4, lat, tors, 5));
    }
    SUBCASE("is_pm_power(u^{p^m}, m) over several fields") {
        std::mt19937_64 rng(555);
        std::vector<LocalFieldPtr> fields = {make_qp(3, 35), make_qp(2, 35),
                                             ramified_block(make_cyclotomic(5), 5, 35),
                                             ramified_block(make_quadratic(3), 2, 35)};
        for (const auto& F : fields) {
            auto lat = local_unit_log_lattice(F, 5);
            auto tors = local_root_of_unity_p_part(F, 5);
            long p = static_cast<long>(F->p.get_si());
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<Int> c;
                for (long i = 0; i < F->degree(); ++i)
                    c.push_back((i == 0 ? 1 : 0) + Int(p) * Int(static_cast<long>(rng() % 200)));
                LocalElement u = lf::make(F, c, F->N);
                long m = 1 + static_cast<long>(rng() % 3);
                LocalElement upm = lf::pow(u, ipow(Int(p), static_cast<unsigned long>(m)));
                CHECK(is_pm_power(upm, m, lat, tors, 5));
                // filtration monotonicity
                if (is_pm_power(u, 2, lat, tors, 5)) CHECK(is_pm_power(u, 1, lat, tors, 5));
            }
        }
    }
}
