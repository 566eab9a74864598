#include <algorithm>
#include <numeric>

#include "klreg/local_field.hpp"

namespace klreg {

namespace {

long euler_phi_long(long m) {
    long r = m;
    for (long q = 2; q * q <= m; ++q) {
        if (m % q) continue;
        r -= r / q;
        while (m % q == 0) m /= q;
    }
    if (m > 1) r -= r / m;
    return r;
}

long ord_mod(long a, long m) {
    if (m == 1) return 1;
    long x = ((a % m) + m) % m;
    if (std::gcd(x, m) != 1) throw UsageError("ord_mod: not a unit");
    long o = 1, cur = x;
    while (cur != 1) {
        cur = (cur * x) % m;
        if (++o > m) throw UsageError("ord_mod: overflow");
    }
    return o;
}

// s = ceil(max(0, max_j (e*j - p^j)) / e): scale making p^s log(1 + pi O) integral.
long compute_log_scale(long e, const Int& p) {
    Int worst = 0;
    Int pj = 1;
    for (long j = 1; j < 64; ++j) {
        pj *= p;
        Int def = Int(e) * j - pj;
        if (def > worst) worst = def;
        if (pj > Int(e) * 64) break;
    }
    if (worst <= 0) return 0;
    Int s = (worst + e - 1) / e;
    return static_cast<long>(s.get_si());
}

std::shared_ptr<LocalField> build_local_field(const FieldSpec& K, const Int& p, long N,
                                              const IntPoly& cluster, const FpPoly& h) {
    auto F = std::make_shared<LocalField>(p, N);
    F->g = cluster;
    F->f = h.deg();
    F->e = intpoly::deg(cluster) / F->f;
    F->residue_poly = h;
    F->n0 = F->e / (static_cast<long>(p.get_si()) - 1) + 1;
    F->log_scale = compute_log_scale(F->e, p);

    if (F->e == 1) {
        F->uniformizer = {p};
    } else if (F->f == 1) {
        // Eisenstein branch: shift by the residue root and check the Newton slope.
        Int r = mod_pos(Int(-h.c[0]), p);
        IntPoly shifted = zp::reduce(intpoly::shift(cluster, r), F->ctx);
        if (shifted.empty() || shifted[0] == 0 || valuation(shifted[0], p) != 1)
            throw UsageError("factor_p: ramified cluster is not Eisenstein after shift");
        for (long i = 1; i < F->e; ++i)
            if (shifted[static_cast<size_t>(i)] != 0 && valuation(shifted[static_cast<size_t>(i)], p) < 1)
                throw UsageError("factor_p: ramified cluster is not Eisenstein after shift");
        F->uniformizer = {-r, Int(1)};  // x - r
    } else if (K.kind == FieldKind::Cyclotomic) {
        // zeta_m^{m'} is a primitive p^a-th root; zeta_{p^a} - 1 uniformizes.
        long m = K.m;
        long mp = m;
        long a = 0;
        long pl = static_cast<long>(p.get_si());
        while (mp % pl == 0) {
            mp /= pl;
            ++a;
        }
        if (F->e != euler_phi_long(m) / euler_phi_long(mp) || F->f != ord_mod(pl, mp))
            throw UsageError("factor_p: cyclotomic ramification bookkeeping failed");
        IntPoly xm(static_cast<size_t>(mp + 1), Int(0));
        xm[static_cast<size_t>(mp)] = 1;
        xm[0] = -1;
        F->uniformizer = zp::divrem_monic(xm, cluster, F->ctx).second;
    } else {
        throw UsageError("factor_p: mixed ramified cluster unsupported for this field kind");
    }
    return F;
}

void verify_uniformizer(const LocalFieldPtr& F) {
    LocalElement pi = lf::from_poly(F, F->uniformizer, F->N);
    ValLB v = lf::valuation(pi);
    long expect = F->e == 1 ? F->e : 1;
    if (!v.exact || v.v != expect)
        throw PrecisionError("factor_p: uniformizer valuation check failed");
}

PrimeSplitting factor_p_once(const FieldSpec& K, const Int& p, long N) {
    if (!is_prime(p)) throw UsageError("factor_p: p must be prime");
    if (K.kind == FieldKind::Custom) {
        // p must not divide the index of the declared basis (looked up via the
        // denominator of det(integral_basis) = 1/index).
        Rat det(1);
        {
            std::vector<std::vector<Rat>> rows = K.integral_basis;
            long n = K.degree;
            Rat d(1);
            for (long k = 0; k < n; ++k) {
                long piv = -1;
                for (long i = k; i < n; ++i)
                    if (rows[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { piv = i; break; }
                if (piv < 0) throw UsageError("factor_p: singular integral basis");
                std::swap(rows[static_cast<size_t>(piv)], rows[static_cast<size_t>(k)]);
                d *= rows[static_cast<size_t>(k)][static_cast<size_t>(k)];
                for (long i = k + 1; i < n; ++i) {
                    Rat fct = rows[static_cast<size_t>(i)][static_cast<size_t>(k)] / rows[static_cast<size_t>(k)][static_cast<size_t>(k)];
                    for (long j = k; j < n; ++j)
                        rows[static_cast<size_t>(i)][static_cast<size_t>(j)] -= fct * rows[static_cast<size_t>(k)][static_cast<size_t>(j)];
                }
            }
            det = d;
        }
        Int den = det.get_den();
        if (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t()))
            throw UsageError("factor_p: p divides the index of the declared integral basis");
    }

    long pl = static_cast<long>(p.get_si());
    FpPoly fbar = fp::from_int(K.min_poly, pl);
    if (fbar.deg() != K.degree)
        throw UsageError("factor_p: leading coefficient vanishes mod p");
    auto factors = fp::factor(fbar);

    // pairwise coprime clusters h_i^{e_i}
    std::vector<FpPoly> clusters;
    for (const auto& [h, mult] : factors) {
        FpPoly c = h;
        for (int t = 1; t < mult; ++t) c = fp::mul(c, h);
        clusters.push_back(c);
    }
    ZpCtx ctx(p, N);
    auto lifted = zp::lift_factorization(zp::reduce(K.min_poly, ctx), clusters, ctx);

    PrimeSplitting out;
    out.p = p;
    out.N = N;
    long total = 0;
    for (size_t i = 0; i < lifted.size(); ++i) {
        auto F = build_local_field(K, p, N, lifted[i], factors[i].first);
        verify_uniformizer(F);
        total += F->degree();
        out.primes.push_back(F);
    }
    if (total != K.degree) throw UsageError("factor_p: sum e_i f_i != degree");
    // deterministic order: by (f, e, residue poly)
    std::sort(out.primes.begin(), out.primes.end(), [](const LocalFieldPtr& a, const LocalFieldPtr& b) {
        if (a->f != b->f) return a->f < b->f;
        if (a->e != b->e) return a->e < b->e;
        return a->residue_poly.c < b->residue_poly.c;
    });
    return out;
}

} // namespace

PrimeSplitting factor_p(const FieldSpec& K, const Int& p, long N) {
    try {
        return factor_p_once(K, p, N);
    } catch (const PrecisionError&) {
        return factor_p_once(K, p, 2 * N);  // retry with doubled precision, then fail loudly
    }
}

LocalElement embed(const FieldSpec& K, const FieldElement& x, const LocalFieldPtr& F) {
    if (static_cast<long>(x.coords.size()) != K.degree)
        throw UsageError("embed: wrong coordinate count");
    Int pn = ipow(F->p, static_cast<unsigned long>(F->N));
    IntPoly num;
    for (const auto& c : x.coords) {
        Int den = c.get_den();
        if (mpz_divisible_p(den.get_mpz_t(), F->p.get_mpz_t()))
            throw UsageError("embed: coordinate denominator divisible by p");
        num.push_back(mod_pos(c.get_num() * invmod(den, pn), pn));
    }
    intpoly::normalize(num);
    return lf::from_poly(F, num, F->N);
}

} // namespace klreg
