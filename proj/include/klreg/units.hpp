#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klreg/local_field.hpp"

namespace klreg {

/*
 * The unit system feeding the engine: torsion mu_K plus unit_rank() many
 * independent units, p-principalized. Units are stored as base elements
 * together with the principalization exponent t (prime to p); the effective
 * unit is base^t, applied locally to keep coefficient growth bounded.
 */
struct UnitSystem {
    std::vector<FieldElement> units;  // base units, exact norm +-1
    Int principalization_exponent = 1;
    long mu_order_exponent = 0;               // k with p-part of mu_K = Z/p^k
    std::optional<FieldElement> mu_generator; // zeta_{p^k}
    std::string provenance;                   // continued-fraction | cyclotomic-units | user | none
    std::vector<std::string> assumptions;
};

// Fundamental unit of Q(sqrt d), d squarefree > 1, by the continued fraction
// of sqrt d plus the half-integer (index 3) correction for d = 1 mod 4.
// Exact integer arithmetic throughout; norm verified +-1.
FieldElement fundamental_unit_real_quadratic(const FieldSpec& K, long cf_bound = 100000);

// (1 - zeta^a)/(1 - zeta) = 1 + zeta + ... + zeta^{a-1} for a = 2..m-2 prime
// to m; units only for prime-power m.
std::vector<FieldElement> cyclotomic_units(const FieldSpec& K);

// Largest k with zeta_{p^k} in K and a generator. Structural for the built-in
// kinds; custom fields use local roots + rational reconstruction + exact check.
std::pair<long, std::optional<FieldElement>> global_mu_p_part(const FieldSpec& K, const Int& p);

// Smallest t prime to p with eps^t = 1 mod every prime above p, over all units.
Int p_principalization_exponent(const FieldSpec& K, const std::vector<FieldElement>& units,
                                const PrimeSplitting& split);

// Assemble units for K at p: user units override built-ins; norms checked
// exactly; principalization exponent computed against the splitting.
UnitSystem assemble_unit_system(const FieldSpec& K, const Int& p, const PrimeSplitting& split);

// Local image of base^t at one prime.
LocalElement embed_effective_unit(const FieldSpec& K, const FieldElement& base, const Int& t,
                                  const LocalFieldPtr& F);

} // namespace klreg
