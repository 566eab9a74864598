#pragma once

#include <optional>
#include <vector>

#include "klreg/bigint.hpp"

namespace klreg {

// Dense polynomials, coefficient of x^i at index i; normalized form has a
// nonzero leading coefficient (empty vector = zero polynomial).
using IntPoly = std::vector<Int>;
using RatPoly = std::vector<Rat>;

namespace intpoly {

long deg(const IntPoly& f);  // -1 for zero
void normalize(IntPoly& f);
IntPoly add(const IntPoly& a, const IntPoly& b);
IntPoly sub(const IntPoly& a, const IntPoly& b);
IntPoly mul(const IntPoly& a, const IntPoly& b);
IntPoly derivative(const IntPoly& f);
Int eval(const IntPoly& f, const Int& x);
// Division by a monic divisor, exact coefficients over Z.
std::pair<IntPoly, IntPoly> divrem_monic(const IntPoly& f, const IntPoly& g);
bool is_monic(const IntPoly& f);

Int resultant(const IntPoly& f, const IntPoly& g);
Int discriminant(const IntPoly& f);  // monic f

IntPoly cyclotomic(long m);
IntPoly shift(const IntPoly& f, const Int& r);  // f(x + r)

// Number of real roots (f squarefree), by Sturm chains over Q.
long count_real_roots(const IntPoly& f);

// Certified irreducibility over Q for a monic squarefree polynomial; small
// Zassenhaus with a subset budget. Throws BudgetError when undecidable.
bool is_irreducible_monic(const IntPoly& f);

} // namespace intpoly

namespace ratpoly {

long deg(const RatPoly& f);
void normalize(RatPoly& f);
RatPoly add(const RatPoly& a, const RatPoly& b);
RatPoly sub(const RatPoly& a, const RatPoly& b);
RatPoly mul(const RatPoly& a, const RatPoly& b);
RatPoly rem(const RatPoly& f, const RatPoly& g);
RatPoly from_int(const IntPoly& f);
Rat eval(const RatPoly& f, const Rat& x);

} // namespace ratpoly

// Polynomials over F_p, p a machine-word prime (p < 2^20 guard).
struct FpPoly {
    long p = 0;
    std::vector<long> c;  // normalized

    long deg() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

namespace fp {

FpPoly make(long p, std::vector<long> coeffs);
FpPoly from_int(const IntPoly& f, long p);
FpPoly add(const FpPoly& a, const FpPoly& b);
FpPoly sub(const FpPoly& a, const FpPoly& b);
FpPoly mul(const FpPoly& a, const FpPoly& b);
std::pair<FpPoly, FpPoly> divrem(const FpPoly& a, const FpPoly& b);
FpPoly gcd(FpPoly a, FpPoly b);  // monic result
FpPoly make_monic(const FpPoly& a);
FpPoly powmod(const FpPoly& base, const Int& e, const FpPoly& mod);
FpPoly derivative(const FpPoly& a);
bool equal(const FpPoly& a, const FpPoly& b);

// sg + th = 1 for coprime monic g, h.
void bezout(const FpPoly& g, const FpPoly& h, FpPoly& s, FpPoly& t);

// Monic irreducible factors with multiplicities, deterministic order.
std::vector<std::pair<FpPoly, int>> factor(const FpPoly& f);

} // namespace fp

// Polynomials with coefficients in Z/p^N (plain Int residues).
struct ZpCtx {
    Int p;
    long N;
    Int pN;
    ZpCtx(Int prime, long prec) : p(std::move(prime)), N(prec), pN(ipow(p, static_cast<unsigned long>(prec))) {}
};

namespace zp {

IntPoly reduce(const IntPoly& f, const ZpCtx& ctx);
IntPoly mul(const IntPoly& a, const IntPoly& b, const ZpCtx& ctx);
std::pair<IntPoly, IntPoly> divrem_monic(const IntPoly& f, const IntPoly& g, const ZpCtx& ctx);
IntPoly mulmod(const IntPoly& a, const IntPoly& b, const IntPoly& mod, const ZpCtx& ctx);

// Lift f = prod(clusters) from mod p to mod p^N; clusters pairwise coprime
// monic mod p, f monic. Returns monic lifts whose product is f mod p^N.
std::vector<IntPoly> lift_factorization(const IntPoly& f, const std::vector<FpPoly>& clusters,
                                        const ZpCtx& ctx);

} // namespace zp

} // namespace klreg
