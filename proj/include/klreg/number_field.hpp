#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klreg/poly.hpp"

namespace klreg {

enum class FieldKind { Quadratic, Cyclotomic, Custom };

/*
 * A number field K = Q[x]/(min_poly). Coordinates of elements are always
 * taken over the power basis of the canonical generator theta:
 *   quadratic d:  theta = (1+sqrt d)/2 when d = 1 mod 4, else sqrt d
 *   cyclotomic m: theta = zeta_m
 *   custom:       the root of the supplied min_poly
 * For the built-in kinds Z[theta] is the maximal order; custom fields declare
 * their integral basis over the power basis and are only used at primes not
 * dividing its index.
 */
struct FieldSpec {
    FieldKind kind = FieldKind::Custom;
    long d = 0;  // quadratic
    long m = 0;  // cyclotomic
    IntPoly min_poly;
    long degree = 0;
    long r1 = 0, r2 = 0;
    Int discriminant = 0;
    std::vector<std::vector<Rat>> integral_basis;  // rows over the power basis
    std::vector<std::vector<Rat>> user_units;      // over the integral basis
    std::string label;

    long unit_rank() const { return r1 + r2 - 1; }
    bool totally_real() const { return r2 == 0; }
};

struct FieldElement {
    std::vector<Rat> coords;  // over the power basis, length = degree
};

FieldSpec make_quadratic(long d);
FieldSpec make_cyclotomic(long m);
FieldSpec make_custom(const IntPoly& min_poly, std::vector<std::vector<Rat>> integral_basis,
                      std::vector<std::vector<Rat>> units);

// JSON field description; rejects unknown keys. See README for the schema.
FieldSpec build_field(const std::string& json_text);
FieldSpec build_field_from_file(const std::string& path);

namespace nf {

FieldElement element_one(const FieldSpec& K);
FieldElement element_int(const FieldSpec& K, const Int& n);
FieldElement element_gen(const FieldSpec& K);  // theta
FieldElement from_coords(const FieldSpec& K, std::vector<Rat> coords);
FieldElement from_integral_basis_coords(const FieldSpec& K, const std::vector<Rat>& coords);

FieldElement add(const FieldSpec& K, const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldSpec& K, const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldSpec& K, const FieldElement& a, const FieldElement& b);
FieldElement pow(const FieldSpec& K, const FieldElement& a, const Int& e);  // e >= 0
FieldElement neg(const FieldElement& a);
bool equal(const FieldElement& a, const FieldElement& b);
bool is_one(const FieldElement& a);

Rat norm(const FieldSpec& K, const FieldElement& a);
Rat trace(const FieldSpec& K, const FieldElement& a);
FieldElement inverse(const FieldSpec& K, const FieldElement& a);

std::string to_string(const FieldSpec& K, const FieldElement& a);

} // namespace nf

} // namespace klreg
