#include <random>

#include "doctest.h"
#include "klreg/quadratic_forms.hpp"
#include "oracles.hpp"

using namespace klreg;

TEST_CASE("narrow class numbers, worked examples") {
    CHECK(narrow_class_group_quadratic(Int(-23)).narrow_h == 3);
    CHECK(narrow_class_group_quadratic(Int(8)).narrow_h == 1);    // 1 + sqrt2 has norm -1
    CHECK(narrow_class_group_quadratic(Int(12)).narrow_h == 2);   // norm(2+sqrt3) = +1
    CHECK(narrow_class_group_quadratic(Int(-4)).narrow_h == 1);
    CHECK(narrow_class_group_quadratic(Int(-3)).narrow_h == 1);
}

TEST_CASE("known class numbers and structures, definite case") {
    CHECK(narrow_class_group_quadratic(Int(-47)).narrow_h == 5);
    CHECK(narrow_class_group_quadratic(Int(-71)).narrow_h == 7);
    auto g56 = narrow_class_group_quadratic(Int(-56));
    CHECK(g56.narrow_h == 4);
    CHECK(g56.cycle_structure == std::vector<long>{4});  // cyclic
    auto g84 = narrow_class_group_quadratic(Int(-84));
    CHECK(g84.narrow_h == 4);
    CHECK(g84.cycle_structure == std::vector<long>{2, 2});  // idoneal: Klein four
}

TEST_CASE("narrow class numbers, indefinite case") {
    CHECK(narrow_class_group_quadratic(Int(5)).narrow_h == 1);    // norm -1 unit
    CHECK(narrow_class_group_quadratic(Int(40)).narrow_h == 2);   // Q(sqrt10)
    CHECK(narrow_class_group_quadratic(Int(44)).narrow_h == 2);   // Q(sqrt11): narrow doubles
    CHECK(narrow_class_group_quadratic(Int(316)).narrow_h == 6);  // Q(sqrt79): h = 3, norm +1
}

TEST_CASE("counting matches the enumeration oracle for D < 0") {
    for (long D = -3; D >= -200; --D) {
        Int d(D);
        Int m4 = mod_pos(d, 4);
        if (m4 != 0 && m4 != 1) continue;
        try {
            auto g = narrow_class_group_quadratic(d);
            CHECK(g.narrow_h == testing::count_reduced_forms_negative(d));
        } catch (const UsageError&) {
            // non-fundamental discriminants are rejected
        }
    }
}

TEST_CASE("group laws on the composition table") {
    for (long D : {-23L, -47L, -84L, 40L, 316L}) {
        NarrowClassGroup G{Int(D)};
        long h = G.size();
        long e = G.identity();
        for (long x = 0; x < h; ++x) {
            CHECK(G.compose(e, x) == x);
            CHECK(G.compose(x, G.inverse_of(x)) == e);
            for (long y = 0; y < h; ++y)
                for (long z = 0; z < std::min<long>(h, 4); ++z)
                    CHECK(G.compose(G.compose(x, y), z) == G.compose(x, G.compose(y, z)));
        }
        long prod = 1;
        for (long dv : G.data().cycle_structure) prod *= dv;
        CHECK(prod == h);
    }
}

TEST_CASE("S-class quotient ranks") {
    // D = 12, p = 2: the ramified prime class generates the narrow group
    NarrowClassGroup G12{Int(12)};
    CHECK(G12.quotient_p_rank({G12.class_of_prime_above(Int(2))}, Int(2)) == 0);
    // D = -23, p = 2 splits; Cl = Z/3: quotient by a class of order 3 or 1
    NarrowClassGroup G23{Int(-23)};
    long rk3 = G23.quotient_p_rank({G23.class_of_prime_above(Int(2))}, Int(3));
    CHECK(rk3 == 0);  // the prime above 2 generates Cl(-23)
    CHECK(G23.quotient_p_rank({}, Int(3)) == 1);
}

TEST_CASE("minkowski certificate") {
    CHECK(minkowski_certifies_h1(2, 0, Int(8)));     // Q(sqrt2)
    CHECK(minkowski_certifies_h1(2, 0, Int(12)));    // Q(sqrt3)
    CHECK(minkowski_certifies_h1(2, 1, Int(7)));     // Q(sqrt-7)
    CHECK(minkowski_certifies_h1(4, 2, Int(125)));   // Q(zeta_5)
    CHECK_FALSE(minkowski_certifies_h1(2, 1, Int(23)));  // h(-23) = 3
}

TEST_CASE("out-of-range and invalid discriminants") {
    CHECK_THROWS_AS(narrow_class_group_quadratic(Int(13), 10), UsageError);  // bound
    CHECK_THROWS_AS(narrow_class_group_quadratic(Int(-20)), UsageError);     // not fundamental
    CHECK_THROWS_AS(narrow_class_group_quadratic(Int(7)), UsageError);       // 7 = 3 mod 4
}
