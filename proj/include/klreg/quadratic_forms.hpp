#pragma once

#include <vector>

#include "klreg/bigint.hpp"

namespace klreg {

// Primitive integral binary quadratic form a x^2 + b xy + c y^2.
struct QuadForm {
    Int a, b, c;
    Int disc() const { return b * b - 4 * a * c; }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

struct NarrowClassGroupData {
    Int discriminant;
    long narrow_h = 0;
    std::vector<long> cycle_structure;  // elementary divisors d_1 | d_2 | ...
};

/*
 * Narrow (restricted-sense) class group of the quadratic order of fundamental
 * discriminant D. Negative D: reduced forms under Gauss composition.
 * Positive D: cycles of reduced indefinite forms; classes = rho-cycles.
 */
class NarrowClassGroup {
public:
    explicit NarrowClassGroup(const Int& D, long enumeration_bound = 4000000);

    const NarrowClassGroupData& data() const { return data_; }
    long size() const { return data_.narrow_h; }
    long identity() const { return identity_; }
    long compose(long x, long y) const { return table_[static_cast<size_t>(x)][static_cast<size_t>(y)]; }
    long class_of(const QuadForm& f) const;
    long inverse_of(long x) const;
    long order_of(long x) const;

    // Class of a prime ideal above p (form (p, b, *)); p must not be inert.
    long class_of_prime_above(const Int& p) const;

    // p-rank of the quotient by the subgroup generated by the given classes.
    long quotient_p_rank(const std::vector<long>& gens, const Int& p) const;

private:
    Int D_;
    NarrowClassGroupData data_;
    std::vector<QuadForm> reps_;                 // canonical representative per class
    std::vector<std::vector<QuadForm>> cycles_;  // D > 0 only
    std::vector<std::vector<long>> table_;
    long identity_ = 0;

    QuadForm reduce(QuadForm f) const;
    long locate(const QuadForm& reduced) const;
};

NarrowClassGroupData narrow_class_group_quadratic(const Int& D, long enumeration_bound = 4000000);

// True when the Minkowski bound certifies class number 1 (bound < 2),
// using rational over-estimates only.
bool minkowski_certifies_h1(long degree, long r2, const Int& abs_disc);

} // namespace klreg
