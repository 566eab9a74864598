#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klreg/bigint.hpp"

namespace klreg {

/*
 * Element of Z/p^prec with tracked valuation. `prec` is the absolute
 * precision: the represented p-adic integer is known modulo p^prec, no more.
 * The valuation is exact whenever the residue is nonzero; an apparent zero
 * (residue 0 mod p^prec) only carries the lower bound v >= prec and is never
 * treated as an exact zero.
 */
class PadicScalar {
public:
    PadicScalar(Int p, Int value, long prec);

    static PadicScalar zero(const Int& p, long prec) { return PadicScalar(p, 0, prec); }
    static PadicScalar one(const Int& p, long prec) { return PadicScalar(p, 1, prec); }

    const Int& prime() const { return p_; }
    long precision() const { return prec_; }
    const Int& lift() const { return value_; }        // representative in [0, p^prec)
    Int lift_signed() const;                          // representative in (-p^prec/2, p^prec/2]
    const Int& modulus() const { return pn_; }

    // min(v_p(value), prec); equals prec for an apparent zero.
    long valuation_lb() const { return val_; }
    bool apparent_zero() const { return value_ == 0; }
    bool is_unit() const { return val_ == 0; }

    PadicScalar add(const PadicScalar& b) const;
    PadicScalar sub(const PadicScalar& b) const;
    PadicScalar mul(const PadicScalar& b) const;
    PadicScalar div(const PadicScalar& b) const;      // loses v(b) digits of precision
    PadicScalar neg() const;
    PadicScalar inv() const;                          // unit argument only
    PadicScalar pow(const Int& e) const;              // e >= 0, or unit base for e < 0
    PadicScalar mul_int(const Int& c) const;

    // Exact division by p^v; throws PrecisionError if the residue is not divisible.
    PadicScalar shift_down(long v) const;
    // Multiplication by p^v (gains v digits of absolute precision).
    PadicScalar shift_up(long v) const;

    PadicScalar with_precision(long prec) const;      // reduce (prec <= precision())

    // Values agree modulo p^min(precisions).
    bool same_residue(const PadicScalar& b) const;

    std::string str() const;

private:
    Int p_;
    long prec_;
    Int pn_;      // p^prec
    Int value_;   // in [0, p^prec)
    long val_;    // min(v_p(value_), prec_)

    void check_same_prime(const PadicScalar& b) const;
};

// Root of f near x0 by Newton iteration; requires v(f(x0)) > 2*v(f'(x0))
// at the working precision, otherwise returns nullopt ("no-lift").
std::optional<PadicScalar> hensel_lift_root(const std::vector<PadicScalar>& f,
                                            const PadicScalar& x0);

PadicScalar eval_poly(const std::vector<PadicScalar>& f, const PadicScalar& x);

} // namespace klreg
