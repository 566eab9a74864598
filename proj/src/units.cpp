#include "klreg/units.hpp"

#include <algorithm>
#include <numeric>

#include "klreg/quadratic_forms.hpp"

namespace klreg {

namespace {

// Convert u = x + y*sqrt(d) (exact integers) to power-basis coordinates.
FieldElement quad_from_sqrt(const FieldSpec& K, const Rat& x, const Rat& y) {
    long dm4 = ((K.d % 4) + 4) % 4;
    if (dm4 == 1) {
        // theta = (1+sqrt d)/2, sqrt d = 2 theta - 1
        return nf::from_coords(K, {x - y, 2 * y});
    }
    return nf::from_coords(K, {x, y});
}

} // namespace

FieldElement fundamental_unit_real_quadratic(const FieldSpec& K, long cf_bound) {
    if (K.kind != FieldKind::Quadratic || K.d <= 1)
        throw UsageError("fundamental unit: needs a real quadratic field");
    long d = K.d;
    Int D(d);
    Int a0 = isqrt_floor(D);
    if (a0 * a0 == D) throw UsageError("fundamental unit: d is a square");

    // continued fraction of sqrt d: x_k = (m + sqrt d)/q
    Int m = 0, q = 1, a = a0;
    Int h0 = 1, h1 = a0;  // convergent numerators
    Int k0 = 0, k1 = 1;   // denominators
    Int xprev = a0, yprev = 1;
    for (long step = 1; step <= cf_bound; ++step) {
        m = a * q - m;
        q = (D - m * m) / q;
        a = (a0 + m) / q;
        if (q == 1) {
            // period closed: (h1, k1) solves x^2 - d y^2 = +-1
            xprev = h1;
            yprev = k1;
            break;
        }
        Int h2 = a * h1 + h0;
        Int k2 = a * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (step == cf_bound) throw BudgetError("fundamental unit: continued fraction bound exceeded");
    }
    Int x = xprev, y = yprev;
    Int n0 = x * x - D * y * y;
    if (n0 != 1 && n0 != -1) throw UsageError("fundamental unit: Pell bookkeeping failed");

    FieldElement u = quad_from_sqrt(K, Rat(x), Rat(y));
    if (((d % 4) + 4) % 4 == 1) {
        // The unit of Z[sqrt d] can be the cube of a half-integer unit:
        // trace t of the cube root solves t^3 - 3 n1 t = 2x with n1 = n0.
        Int twox = 2 * x;
        Int lo = 0, hi = abs(twox) + 2;
        // integer cube-root window scan
        for (Int t = -hi; t <= hi; ++t) {
            if (abs(t) > 4 + isqrt_floor(abs(twox)) * 2 && t * t * t - 3 * n0 * t > twox && t > 0) break;
            if (t * t * t - 3 * n0 * t != twox) continue;
            Int num = t * t - 4 * n0;
            if (num <= 0) continue;
            if (!mpz_divisible_p(num.get_mpz_t(), D.get_mpz_t())) continue;
            Int b2 = num / D;
            Int b = isqrt_floor(b2);
            if (b * b != b2) continue;
            FieldElement eps = quad_from_sqrt(K, Rat(t, 2), Rat(b, 2));
            if (nf::equal(nf::pow(K, eps, 3), u)) {
                u = eps;
                break;
            }
        }
        (void)lo;
    }
    Rat nrm = nf::norm(K, u);
    if (nrm != 1 && nrm != -1) throw UsageError("fundamental unit: norm check failed");
    return u;
}

std::vector<FieldElement> cyclotomic_units(const FieldSpec& K) {
    if (K.kind != FieldKind::Cyclotomic) throw UsageError("cyclotomic units: needs Q(zeta_m)");
    long m = K.m;
    {
        long mm = m;
        long q = 2;
        while (mm % q != 0) ++q;
        long core = 1;
        while (mm % q == 0) {
            mm /= q;
            core *= q;
        }
        if (mm != 1) throw UsageError("cyclotomic units: m must be a prime power");
    }
    std::vector<FieldElement> out;
    for (long a = 2; a <= m - 2; ++a) {
        if (std::gcd(a, m) != 1) continue;
        // (1 - zeta^a)/(1 - zeta) = 1 + zeta + ... + zeta^{a-1}
        RatPoly poly(static_cast<size_t>(a), Rat(1));
        RatPoly red = ratpoly::rem(poly, ratpoly::from_int(K.min_poly));
        std::vector<Rat> coords(static_cast<size_t>(K.degree), Rat(0));
        for (size_t i = 0; i < red.size(); ++i) coords[i] = red[i];
        FieldElement u = nf::from_coords(K, std::move(coords));
        Rat nrm = nf::norm(K, u);
        if (nrm != 1 && nrm != -1) throw UsageError("cyclotomic units: norm check failed");
        out.push_back(u);
    }
    return out;
}

namespace {

std::pair<long, std::optional<FieldElement>> mu_quadratic(const FieldSpec& K, const Int& p) {
    long d = K.d;
    if (p == 2) {
        if (d == -1) return {2, nf::element_gen(K)};  // i = theta
        return {1, nf::element_int(K, -1)};
    }
    if (p == 3 && d == -3) {
        // zeta_3 = (-1+sqrt(-3))/2 = theta - 1
        return {1, nf::from_coords(K, {Rat(-1), Rat(1)})};
    }
    return {0, std::nullopt};
}

std::pair<long, std::optional<FieldElement>> mu_cyclotomic(const FieldSpec& K, const Int& p) {
    long m = K.m;
    long pl = static_cast<long>(p.get_si());
    long a = 0, mm = m;
    while (mm % pl == 0) {
        mm /= pl;
        ++a;
    }
    if (pl == 2 && a == 0) return {1, nf::element_int(K, -1)};
    if (a == 0) return {0, std::nullopt};
    long pk = 1;
    for (long i = 0; i < a; ++i) pk *= pl;
    FieldElement z = nf::pow(K, nf::element_gen(K), Int(m / pk));
    return {a, z};
}

// Custom fields: find a local root of Phi_{p^k} in the first completion,
// reconstruct rational coordinates, and verify exactly over Q.
std::pair<long, std::optional<FieldElement>> mu_custom(const FieldSpec& K, const Int& p) {
    if (K.r1 == K.degree) {
        // totally real: only +-1
        if (p == 2) return {1, nf::element_int(K, -1)};
        return {0, std::nullopt};
    }
    long pl = static_cast<long>(p.get_si());
    long best_k = (pl == 2) ? 1 : 0;
    std::optional<FieldElement> gen =
        best_k ? std::optional<FieldElement>(nf::element_int(K, -1)) : std::nullopt;
    long N = 40;
    PrimeSplitting split = factor_p(K, p, N);
    const LocalFieldPtr& F = split.primes[0];
    RatPoly minp = ratpoly::from_int(K.min_poly);
    for (long k = best_k + 1;; ++k) {
        long phi = 1;
        for (long i = 1; i < k; ++i) phi *= pl;
        phi *= (pl - 1);
        if (K.degree % phi != 0 || F->e % phi != 0) break;
        long pk = 1;
        for (long i = 0; i < k; ++i) pk *= pl;
        auto root = find_principal_root(F, intpoly::cyclotomic(pk), 5);
        if (!root) break;
        // try primitive powers z^j and reconstruct
        bool found = false;
        Int bound = ipow(p, static_cast<unsigned long>(N / 2 - 2));
        for (long j = 1; j < pk && !found; ++j) {
            if (j % pl == 0) continue;
            LocalElement cand = lf::pow(*root, Int(j));
            if (F->degree() != K.degree) break;  // reconstruction needs a single prime
            std::vector<Rat> coords;
            bool ok = true;
            for (const auto& c : cand.coords) {
                Rat r;
                if (!rational_reconstruct(c.lift(), c.modulus(), bound, r)) {
                    ok = false;
                    break;
                }
                coords.push_back(r);
            }
            if (!ok) continue;
            FieldElement y = nf::from_coords(K, coords);
            // exact verification: Phi_{p^k}(y) == 0 in K
            RatPoly phipoly = ratpoly::from_int(intpoly::cyclotomic(pk));
            RatPoly ypoly(y.coords.begin(), y.coords.end());
            ratpoly::normalize(ypoly);
            RatPoly acc = {Rat(0)};
            for (auto it = phipoly.rbegin(); it != phipoly.rend(); ++it) {
                acc = ratpoly::rem(ratpoly::mul(acc, ypoly), minp);
                if (acc.empty()) acc = {Rat(0)};
                acc[0] += *it;
                ratpoly::normalize(acc);
            }
            if (ratpoly::deg(acc) < 0) {
                best_k = k;
                gen = y;
                found = true;
            }
        }
        if (!found) break;
    }
    return {best_k, gen};
}

} // namespace

std::pair<long, std::optional<FieldElement>> global_mu_p_part(const FieldSpec& K, const Int& p) {
    switch (K.kind) {
        case FieldKind::Quadratic: return mu_quadratic(K, p);
        case FieldKind::Cyclotomic: return mu_cyclotomic(K, p);
        case FieldKind::Custom: return mu_custom(K, p);
    }
    throw UsageError("global_mu_p_part: unknown field kind");
}

Int p_principalization_exponent(const FieldSpec& K, const std::vector<FieldElement>& units,
                                const PrimeSplitting& split) {
    Int t = 1;
    for (const auto& u : units) {
        for (const auto& F : split.primes) {
            LocalElement img = embed(K, u, F);
            std::vector<long> res = lf::residue_image(img);
            // order in F_q^x via the factored group order
            long pl = static_cast<long>(F->p.get_si());
            FpPoly val{pl, res};
            while (!val.c.empty() && val.c.back() == 0) val.c.pop_back();
            if (val.is_zero()) throw UsageError("p_principalize: unit reduces to zero mod p");
            Int q = ipow(F->p, static_cast<unsigned long>(F->f));
            Int group = q - 1;
            Int o = 1;
            FpPoly cur = val;
            auto is_one = [](const FpPoly& g) { return g.deg() == 0 && g.c[0] == 1; };
            // brute-force order, capped by the group order
            while (!is_one(cur)) {
                cur = fp::divrem(fp::mul(cur, val), F->residue_poly).second;
                ++o;
                if (o > group) throw UsageError("p_principalize: order search failed");
            }
            t = int_lcm(t, o);
        }
    }
    if (mpz_divisible_p(t.get_mpz_t(), split.p.get_mpz_t()))
        throw UsageError("p_principalize: exponent not prime to p");
    return t;
}

UnitSystem assemble_unit_system(const FieldSpec& K, const Int& p, const PrimeSplitting& split) {
    UnitSystem sys;
    long r = K.unit_rank();
    if (!K.user_units.empty()) {
        sys.provenance = "user";
        for (const auto& row : K.user_units)
            sys.units.push_back(nf::from_integral_basis_coords(K, row));
        sys.assumptions.push_back(
            "user units are assumed to generate a finite-index subgroup of the unit group "
            "with index prime to p (unverified)");
    } else if (K.kind == FieldKind::Quadratic && K.d > 1) {
        sys.provenance = "continued-fraction";
        sys.units.push_back(fundamental_unit_real_quadratic(K));
    } else if (K.kind == FieldKind::Cyclotomic && r > 0) {
        sys.provenance = "cyclotomic-units";
        sys.units = cyclotomic_units(K);
        sys.assumptions.push_back(
            "cyclotomic units have index h+ in the full unit group; valid for kappa "
            "when that index is prime to p");
        if (minkowski_certifies_h1(K.degree, K.r2, abs(K.discriminant)))
            sys.assumptions.back() += " [discharged: Minkowski bound certifies h = 1]";
    } else if (r == 0) {
        sys.provenance = "none";
    } else {
        throw UsageError("unit system: this field kind needs user-supplied units");
    }

    for (const auto& u : sys.units) {
        Rat nrm = nf::norm(K, u);
        if (nrm != 1 && nrm != -1) throw UsageError("unit system: unit has norm != +-1");
    }
    auto [k, gen] = global_mu_p_part(K, p);
    sys.mu_order_exponent = k;
    sys.mu_generator = gen;
    if (!sys.units.empty()) sys.principalization_exponent = p_principalization_exponent(K, sys.units, split);
    return sys;
}

LocalElement embed_effective_unit(const FieldSpec& K, const FieldElement& base, const Int& t,
                                  const LocalFieldPtr& F) {
    return lf::pow(embed(K, base, F), t);
}

} // namespace klreg
