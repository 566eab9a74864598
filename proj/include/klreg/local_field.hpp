#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "klreg/number_field.hpp"
#include "klreg/padic_matrix.hpp"

namespace klreg {

struct LocalField;
using LocalFieldPtr = std::shared_ptr<const LocalField>;

/*
 * A completion K_p = Q_p[x]/(g) at working precision p^N, where g is one
 * irreducible factor of the field's min_poly over Z_p. The global generator
 * theta maps to the class of x, so embedding is coefficient reduction.
 * Valuation v is normalized with v(pi) = 1, v(p) = e.
 */
struct LocalField {
    Int p;
    long N;
    ZpCtx ctx;
    IntPoly g;             // monic, degree e*f, coefficients mod p^N
    long e = 1, f = 1;
    FpPoly residue_poly;   // the irreducible h with g = h^e (mod p)
    IntPoly uniformizer;   // coords of pi; (p) itself when e = 1
    long n0 = 1;           // floor(e/(p-1)) + 1, the log isometry cutoff
    long log_scale = 0;    // s >= 0: stored logs are p^s * log

    long degree() const { return e * f; }
    LocalField(Int prime, long prec) : p(std::move(prime)), N(prec), ctx(p, N) {}
};

struct LocalElement {
    LocalFieldPtr F;
    std::vector<PadicScalar> coords;  // over the power basis of x, uniform precision

    long precision() const;
};

// Lower bound on the pi-adic valuation; exact unless the element is an
// apparent zero at working precision.
struct ValLB {
    long v = 0;
    bool exact = true;
};

namespace lf {

LocalElement make(const LocalFieldPtr& F, std::vector<Int> coords, long prec);
LocalElement zero(const LocalFieldPtr& F);
LocalElement one(const LocalFieldPtr& F);
LocalElement from_int(const LocalFieldPtr& F, const Int& n);
LocalElement from_poly(const LocalFieldPtr& F, const IntPoly& poly, long prec);

LocalElement add(const LocalElement& a, const LocalElement& b);
LocalElement sub(const LocalElement& a, const LocalElement& b);
LocalElement mul(const LocalElement& a, const LocalElement& b);
LocalElement neg(const LocalElement& a);
LocalElement inv(const LocalElement& a);                 // unit argument
LocalElement pow(const LocalElement& a, const Int& k);   // unit argument for k < 0
bool same_residue(const LocalElement& a, const LocalElement& b);
bool is_one_at(const LocalElement& a, long pi_valuation);  // v(a - 1) >= bound

ValLB valuation(const LocalElement& a);
std::vector<long> residue_image(const LocalElement& a);  // in F_p[x]/(residue_poly)
PadicScalar trace(const LocalElement& a);

LocalElement eval_int_poly(const IntPoly& poly, const LocalElement& x);

// p^log_scale * log(u) for a principal unit u (v(u - 1) >= 1), by direct
// series summation with a certified truncation index.
std::vector<PadicScalar> padic_log(const LocalElement& u);

} // namespace lf

struct LocalTorsion {
    long order_exponent = 0;               // k: p-part of mu(K_p) is Z/p^k
    std::optional<LocalElement> generator; // root of Phi_{p^k}; empty when k = 0
};

// Largest k with a root of Phi_{p^k} in K_p: ramification-degree necessary
// condition phi(p^k) | e, then a digit-refinement root search finished by
// Hensel lifting.
LocalTorsion local_root_of_unity_p_part(const LocalFieldPtr& F, long safety_margin);

struct LocalUnitLattice {
    LocalFieldPtr F;
    PadicMatrix log_basis;                    // (e f) x (e f), certified Z_p-basis of p^s log(U)
    std::vector<LocalElement> basis_preimage; // G_i with p^s log(G_i) = column i
    std::vector<long> pivot_vals;
    LocalUnitLattice() : log_basis(Int(2), 1, 0, 0) {}
};

// Lattice log(U_p) from generators {1 + x^t pi^j : 1 <= j <= n0}; the rank
// must equal e*f at certified precision or the run is precision-unstable.
LocalUnitLattice local_unit_log_lattice(const LocalFieldPtr& F, long safety_margin);

// Coordinates of log(u) in the lattice basis plus the discrete log of the
// torsion leftover u * (prod G_i^{c_i})^{-1} against the torsion generator.
struct UnitDecomposition {
    std::vector<PadicScalar> lattice_coords;
    long torsion_dlog = 0;  // in [0, p^k)
};

UnitDecomposition local_decompose(const LocalElement& u, const LocalUnitLattice& lat,
                                  const LocalTorsion& tors, long safety_margin);

// u in U_p^{p^m}? Lattice-coordinate divisibility by p^m plus torsion-part
// membership in mu^{p^m} (dlog divisibility in the cyclic p-group).
bool is_pm_power(const LocalElement& u, long m, const LocalUnitLattice& lat,
                 const LocalTorsion& tors, long safety_margin);

// Root of poly among principal units (used for Phi_{p^k}); digit refinement
// with a tie-keeping frontier, then Newton. nullopt when no root exists
// within the budget.
std::optional<LocalElement> find_principal_root(const LocalFieldPtr& F, const IntPoly& poly,
                                                long safety_margin);

struct PrimeSplitting {
    Int p;
    long N = 0;
    std::vector<LocalFieldPtr> primes;  // deterministic order
};

// Factor p in K via Hensel factorization of min_poly over Z_p, with a
// dedicated Eisenstein branch for the ramified part.
PrimeSplitting factor_p(const FieldSpec& K, const Int& p, long N);

// Image of x under generator -> class of x in the completion.
LocalElement embed(const FieldSpec& K, const FieldElement& x, const LocalFieldPtr& F);

} // namespace klreg
