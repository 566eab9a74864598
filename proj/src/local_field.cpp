#include "klreg/local_field.hpp"

#include <algorithm>
#include <cmath>

namespace klreg {

long LocalElement::precision() const {
    long m = coords.empty() ? 0 : coords[0].precision();
    for (const auto& c : coords) m = std::min(m, c.precision());
    return m;
}

namespace lf {

namespace {

std::vector<Int> lifts(const LocalElement& a) {
    std::vector<Int> v;
    v.reserve(a.coords.size());
    for (const auto& c : a.coords) v.push_back(c.lift());
    return v;
}

LocalElement wrap(const LocalFieldPtr& F, const std::vector<Int>& coords, long prec) {
    LocalElement e;
    e.F = F;
    Int pn = ipow(F->p, static_cast<unsigned long>(prec));
    for (long i = 0; i < F->degree(); ++i) {
        Int c = i < static_cast<long>(coords.size()) ? mod_pos(coords[static_cast<size_t>(i)], pn) : Int(0);
        e.coords.emplace_back(F->p, c, prec);
    }
    return e;
}

void check_host(const LocalElement& a, const LocalElement& b) {
    if (a.F.get() != b.F.get()) throw UsageError("LocalElement: mixed local fields");
}

} // namespace

LocalElement make(const LocalFieldPtr& F, std::vector<Int> coords, long prec) {
    if (static_cast<long>(coords.size()) > F->degree())
        throw UsageError("LocalElement: too many coordinates");
    return wrap(F, coords, prec);
}

LocalElement zero(const LocalFieldPtr& F) { return wrap(F, {}, F->N); }

LocalElement one(const LocalFieldPtr& F) { return wrap(F, {Int(1)}, F->N); }

LocalElement from_int(const LocalFieldPtr& F, const Int& n) { return wrap(F, {n}, F->N); }

LocalElement from_poly(const LocalFieldPtr& F, const IntPoly& poly, long prec) {
    ZpCtx ctx(F->p, prec);
    IntPoly red = zp::divrem_monic(zp::reduce(poly, ctx), F->g, ctx).second;
    return wrap(F, red, prec);
}

LocalElement add(const LocalElement& a, const LocalElement& b) {
    check_host(a, b);
    long prec = std::min(a.precision(), b.precision());
    std::vector<Int> c;
    for (long i = 0; i < a.F->degree(); ++i)
        c.push_back(a.coords[static_cast<size_t>(i)].lift() + b.coords[static_cast<size_t>(i)].lift());
    return wrap(a.F, c, prec);
}

LocalElement sub(const LocalElement& a, const LocalElement& b) {
    check_host(a, b);
    long prec = std::min(a.precision(), b.precision());
    std::vector<Int> c;
    for (long i = 0; i < a.F->degree(); ++i)
        c.push_back(a.coords[static_cast<size_t>(i)].lift() - b.coords[static_cast<size_t>(i)].lift());
    return wrap(a.F, c, prec);
}

LocalElement neg(const LocalElement& a) {
    std::vector<Int> c;
    for (const auto& x : a.coords) c.push_back(-x.lift());
    return wrap(a.F, c, a.precision());
}

LocalElement mul(const LocalElement& a, const LocalElement& b) {
    check_host(a, b);
    long prec = std::min(a.precision(), b.precision());
    ZpCtx ctx(a.F->p, prec);
    IntPoly pa = lifts(a), pb = lifts(b);
    intpoly::normalize(pa);
    intpoly::normalize(pb);
    IntPoly prod = zp::mulmod(pa, pb, a.F->g, ctx);
    return wrap(a.F, prod, prec);
}

namespace {

// Multiplication-by-a matrix on the power basis, at the element's precision.
PadicMatrix mult_matrix(const LocalElement& a) {
    long n = a.F->degree();
    long prec = a.precision();
    PadicMatrix M(a.F->p, prec, n, n);
    LocalElement cur = a;
    IntPoly xpoly = {Int(0), Int(1)};
    LocalElement x = from_poly(a.F, xpoly, prec);
    for (long j = 0; j < n; ++j) {
        for (long i = 0; i < n; ++i) M.set(i, j, cur.coords[static_cast<size_t>(i)].with_precision(prec));
        if (j + 1 < n) cur = mul(cur, x);
    }
    return M;
}

} // namespace

LocalElement inv(const LocalElement& a) {
    long n = a.F->degree();
    PadicMatrix M = mult_matrix(a);
    std::vector<PadicScalar> rhs(static_cast<size_t>(n), PadicScalar::zero(a.F->p, a.precision()));
    rhs[0] = PadicScalar::one(a.F->p, a.precision());
    auto x = solve_square(M, rhs, 0);
    std::vector<Int> c;
    long prec = a.precision();
    for (const auto& v : x) {
        c.push_back(v.lift());
        prec = std::min(prec, v.precision());
    }
    return wrap(a.F, c, prec);
}

LocalElement pow(const LocalElement& a, const Int& k) {
    if (k < 0) return pow(inv(a), -k);
    LocalElement acc = wrap(a.F, {Int(1)}, a.precision());
    LocalElement base = a;
    Int e = k;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    return acc;
}

bool same_residue(const LocalElement& a, const LocalElement& b) {
    check_host(a, b);
    for (size_t i = 0; i < a.coords.size(); ++i)
        if (!a.coords[i].same_residue(b.coords[i])) return false;
    return true;
}

bool is_one_at(const LocalElement& a, long pi_valuation) {
    LocalElement d = sub(a, one(a.F));
    ValLB v = valuation(d);
    return v.v >= pi_valuation;
}

ValLB valuation(const LocalElement& a) {
    long prec = a.precision();
    long minc = prec;
    bool all_zero = true;
    for (const auto& c : a.coords) {
        if (!c.apparent_zero()) {
            all_zero = false;
            minc = std::min(minc, c.valuation_lb());
        }
    }
    if (all_zero) return {a.F->e * prec, false};
    if (a.F->e == 1) return {minc, true};
    // v_p(N(a)) = f * v(a), so v(a) = v_p(det M_a) / f
    auto dv = det_valuation(mult_matrix(a), 0);
    if (!dv) return {a.F->e * minc, false};
    if (*dv % a.F->f != 0) throw PrecisionError("local valuation: norm bookkeeping failed");
    return {*dv / a.F->f, true};
}

std::vector<long> residue_image(const LocalElement& a) {
    long p = static_cast<long>(a.F->p.get_si());
    IntPoly li = lifts(a);
    intpoly::normalize(li);
    FpPoly red = fp::divrem(fp::from_int(li, p), a.F->residue_poly).second;
    std::vector<long> out(static_cast<size_t>(a.F->f), 0);
    for (size_t i = 0; i < red.c.size(); ++i) out[i] = red.c[i];
    return out;
}

PadicScalar trace(const LocalElement& a) {
    // Newton power sums of g give Tr(x^j).
    long n = a.F->degree();
    long prec = a.precision();
    Int pn = ipow(a.F->p, static_cast<unsigned long>(prec));
    // g = x^n + g_{n-1} x^{n-1} + ... + g_0
    std::vector<Int> ps(static_cast<size_t>(n), Int(0));  // ps[j] = Tr(x^j)
    ps[0] = n;
    for (long j = 1; j < n; ++j) {
        // p_j + g_{n-1} p_{j-1} + ... + g_{n-j+1} p_1 + j g_{n-j} = 0
        Int acc = Int(j) * a.F->g[static_cast<size_t>(n - j)];
        for (long i = 1; i < j; ++i)
            acc += a.F->g[static_cast<size_t>(n - i)] * ps[static_cast<size_t>(j - i)];
        ps[static_cast<size_t>(j)] = mod_pos(-acc, pn);
    }
    Int t = 0;
    for (long j = 0; j < n; ++j) t += a.coords[static_cast<size_t>(j)].lift() * ps[static_cast<size_t>(j)];
    return PadicScalar(a.F->p, t, prec);
}

LocalElement eval_int_poly(const IntPoly& poly, const LocalElement& x) {
    LocalElement acc = wrap(x.F, {}, x.precision());
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        acc = mul(acc, x);
        acc = add(acc, wrap(x.F, {*it}, x.precision()));
    }
    return acc;
}

std::vector<PadicScalar> padic_log(const LocalElement& u) {
    const LocalFieldPtr& F = u.F;
    long N = u.precision();
    long e = F->e;
    long s = F->log_scale;
    LocalElement x = sub(u, one(F));
    ValLB vx = valuation(x);
    if (!vx.exact) {
        // u = 1 at working precision: log is 0 at full precision
        std::vector<PadicScalar> out;
        for (long i = 0; i < F->degree(); ++i) out.push_back(PadicScalar::zero(F->p, N));
        return out;
    }
    if (vx.v < 1) throw UsageError("padic_log: argument is not a principal unit");

    // truncation index: all omitted terms have v(p^s x^i / i) >= e*N
    double logp = 1.0;
    {
        double pp = mpz_get_d(F->p.get_mpz_t());
        logp = std::log(pp);
    }
    long target = e * (N - s);
    long T = 1;
    for (long i = 1; i <= 400000; ++i) {
        double bound = static_cast<double>(i) * static_cast<double>(vx.v) -
                       static_cast<double>(e) * (std::log(static_cast<double>(i)) / logp);
        if (bound < static_cast<double>(target)) T = i;
        if (bound >= static_cast<double>(target) + 4 * e + 8 && i > 2 * target) break;
    }

    std::vector<PadicScalar> acc(static_cast<size_t>(F->degree()), PadicScalar::zero(F->p, N + s));
    LocalElement pw = one(F);
    for (long i = 1; i <= T; ++i) {
        pw = mul(pw, x);
        PadicScalar denom(F->p, Int(i), N);
        for (long t = 0; t < F->degree(); ++t) {
            PadicScalar term = pw.coords[static_cast<size_t>(t)].shift_up(s).div(denom);
            if (i % 2 == 0) term = term.neg();
            acc[static_cast<size_t>(t)] = acc[static_cast<size_t>(t)].add(term);
        }
    }
    return acc;
}

} // namespace lf

namespace {

long euler_phi_pk(long p, long k) {
    long r = 1;
    for (long i = 1; i < k; ++i) r *= p;
    return r * (p - 1);
}

// Residue-system digits: lifts of F_p[x]/(h) elements, degree < f.
std::vector<LocalElement> residue_digits(const LocalFieldPtr& F) {
    long p = static_cast<long>(F->p.get_si());
    long f = F->f;
    std::vector<LocalElement> out;
    std::vector<long> a(static_cast<size_t>(f), 0);
    while (true) {
        std::vector<Int> coords;
        for (long t = 0; t < f; ++t) coords.push_back(Int(a[static_cast<size_t>(t)]));
        out.push_back(lf::make(F, coords, F->N));
        long t = 0;
        while (t < f) {
            if (++a[static_cast<size_t>(t)] < p) break;
            a[static_cast<size_t>(t)] = 0;
            ++t;
        }
        if (t == f) break;
    }
    return out;
}

} // namespace

std::optional<LocalElement> find_principal_root(const LocalFieldPtr& F, const IntPoly& poly,
                                                long safety_margin) {
    const long e = F->e;
    const long target_val = e * (F->N - safety_margin);
    IntPoly dpoly = intpoly::derivative(poly);
    LocalElement pi = lf::from_poly(F, F->uniformizer, F->N);

    auto try_newton = [&](LocalElement y) -> std::optional<LocalElement> {
        ValLB fv = lf::valuation(lf::eval_int_poly(poly, y));
        ValLB dv = lf::valuation(lf::eval_int_poly(dpoly, y));
        if (!dv.exact) return std::nullopt;
        if (fv.exact && fv.v <= 2 * dv.v) return std::nullopt;
        for (int iter = 0; iter < 200; ++iter) {
            LocalElement fy = lf::eval_int_poly(poly, y);
            ValLB v = lf::valuation(fy);
            if (!v.exact || v.v >= target_val) return y;
            LocalElement dfy = lf::eval_int_poly(dpoly, y);
            // delta = fy / dfy via the multiplication matrix of dfy
            long n = F->degree();
            PadicMatrix M(F->p, fy.precision(), n, n);
            {
                LocalElement cur = dfy;
                LocalElement x = lf::from_poly(F, IntPoly{Int(0), Int(1)}, fy.precision());
                for (long j = 0; j < n; ++j) {
                    for (long i = 0; i < n; ++i)
                        M.set(i, j, cur.coords[static_cast<size_t>(i)].with_precision(fy.precision()));
                    if (j + 1 < n) cur = lf::mul(cur, x);
                }
            }
            auto delta = solve_square(M, fy.coords, safety_margin);
            std::vector<Int> c;
            long prec = fy.precision();
            for (const auto& d : delta) {
                c.push_back(d.lift());
                prec = std::min(prec, d.precision());
            }
            y = lf::sub(y, lf::make(F, c, prec));
        }
        return std::nullopt;
    };

    // Frontier of partial pi-adic expansions starting at 1.
    std::vector<LocalElement> digits = residue_digits(F);
    struct Cand {
        LocalElement y;
        long val;
    };
    std::vector<Cand> frontier;
    {
        LocalElement y0 = lf::one(F);
        ValLB v0 = lf::valuation(lf::eval_int_poly(poly, y0));
        if (!v0.exact || v0.v >= target_val) return y0;
        frontier.push_back({y0, v0.v});
    }
    LocalElement pij = pi;  // pi^depth
    long max_depth = 4 * e * (intpoly::deg(poly) / std::max<long>(1, e) + 2) + 8;
    long stall = 0;
    long best_seen = -1;
    for (long depth = 1; depth <= max_depth; ++depth) {
        std::vector<Cand> next;
        long best = -1;
        for (const auto& cand : frontier) {
            for (const auto& d : digits) {
                LocalElement y = lf::add(cand.y, lf::mul(d, pij));
                ValLB v = lf::valuation(lf::eval_int_poly(poly, y));
                long val = v.exact ? v.v : target_val;
                if (val > best) {
                    best = val;
                    next.clear();
                }
                if (val == best && next.size() < 128) next.push_back({y, val});
            }
        }
        for (auto& cand : next) {
            if (cand.val >= target_val) return cand.y;
            auto hit = try_newton(cand.y);
            if (hit) return hit;
        }
        frontier = std::move(next);
        if (best <= best_seen) {
            if (++stall > 2 * e + 4) return std::nullopt;
        } else {
            stall = 0;
            best_seen = best;
        }
        pij = lf::mul(pij, pi);
    }
    return std::nullopt;
}

LocalTorsion local_root_of_unity_p_part(const LocalFieldPtr& F, long safety_margin) {
    LocalTorsion out;
    long p = static_cast<long>(F->p.get_si());
    if (p == 2) {
        out.order_exponent = 1;
        out.generator = lf::from_int(F, Int(-1));
    }
    for (long k = out.order_exponent + 1;; ++k) {
        if (F->e % euler_phi_pk(p, k) != 0) break;
        Int pk = ipow(F->p, static_cast<unsigned long>(k));
        auto root = find_principal_root(F, intpoly::cyclotomic(static_cast<long>(pk.get_si())),
                                        safety_margin);
        if (!root) break;
        out.order_exponent = k;
        out.generator = *root;
    }
    return out;
}

LocalUnitLattice local_unit_log_lattice(const LocalFieldPtr& F, long safety_margin) {
    long n = F->degree();
    LocalElement pi = lf::from_poly(F, F->uniformizer, F->N);

    // generators 1 + x^t pi^j, j = 1..n0, t = 0..n-1
    std::vector<LocalElement> gens;
    LocalElement pij = pi;
    for (long j = 1; j <= F->n0; ++j) {
        for (long t = 0; t < n; ++t) {
            std::vector<Int> xt(static_cast<size_t>(t + 1), Int(0));
            xt[static_cast<size_t>(t)] = 1;
            LocalElement g = lf::add(lf::one(F), lf::mul(lf::make(F, xt, F->N), pij));
            gens.push_back(g);
        }
        pij = lf::mul(pij, pi);
    }

    std::vector<std::vector<PadicScalar>> logs;
    long prec = F->N;
    for (const auto& g : gens) {
        logs.push_back(lf::padic_log(g));
        for (const auto& c : logs.back()) prec = std::min(prec, c.precision());
    }
    PadicMatrix G(F->p, prec, n, static_cast<long>(gens.size()));
    for (long j = 0; j < static_cast<long>(gens.size()); ++j)
        for (long i = 0; i < n; ++i)
            G.set(i, j, logs[static_cast<size_t>(j)][static_cast<size_t>(i)].with_precision(prec));

    ColumnReduction red = column_reduce(G, safety_margin);
    if (red.rank_certified != n)
        throw PrecisionError("local unit lattice: rank defect at working precision");

    LocalUnitLattice lat;
    lat.F = F;
    lat.log_basis = red.basis;
    lat.pivot_vals = red.pivot_vals;
    for (long c = 0; c < n; ++c) {
        LocalElement G_c = lf::one(F);
        const auto& combo = red.combos[static_cast<size_t>(c)];
        for (size_t t = 0; t < gens.size(); ++t) {
            if (combo[t] == 0) continue;
            G_c = lf::mul(G_c, lf::pow(gens[t], combo[t]));
        }
        lat.basis_preimage.push_back(G_c);
    }
    return lat;
}

UnitDecomposition local_decompose(const LocalElement& u, const LocalUnitLattice& lat,
                                  const LocalTorsion& tors, long safety_margin) {
    const LocalFieldPtr& F = u.F;
    ValLB vu = lf::valuation(lf::sub(u, lf::one(F)));
    if (vu.exact && vu.v < 1) throw UsageError("local_decompose: not a principal unit");

    auto lu = lf::padic_log(u);
    long prec = lat.log_basis.precision();
    for (const auto& c : lu) prec = std::min(prec, c.precision());
    PadicMatrix B(F->p, prec, F->degree(), F->degree());
    for (long i = 0; i < F->degree(); ++i)
        for (long j = 0; j < F->degree(); ++j)
            B.set(i, j, lat.log_basis.at(i, j).with_precision(prec));
    std::vector<PadicScalar> rhs;
    for (const auto& c : lu) rhs.push_back(c.with_precision(prec));
    auto coords = solve_square(B, rhs, safety_margin);

    // torsion leftover: u * prod G_i^{-c_i}
    LocalElement xi = u;
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].apparent_zero()) continue;
        xi = lf::mul(xi, lf::pow(lat.basis_preimage[i], -coords[i].lift()));
    }
    UnitDecomposition out;
    out.lattice_coords = coords;

    long k = tors.order_exponent;
    long match_thr = 2 * F->e + 1;
    if (k == 0) {
        if (!lf::is_one_at(xi, match_thr))
            throw PrecisionError("local_decompose: torsion residual unresolved");
        out.torsion_dlog = 0;
        return out;
    }
    Int pk = ipow(F->p, static_cast<unsigned long>(k));
    LocalElement pw = lf::one(F);
    long found = -1;
    for (Int a = 0; a < pk; ++a) {
        ValLB v = lf::valuation(lf::sub(xi, pw));
        if (v.v >= match_thr) {
            if (found >= 0) throw PrecisionError("local_decompose: ambiguous torsion match");
            found = static_cast<long>(a.get_si());
        }
        pw = lf::mul(pw, *tors.generator);
    }
    if (found < 0) throw PrecisionError("local_decompose: torsion residual unresolved");
    out.torsion_dlog = found;
    return out;
}

bool is_pm_power(const LocalElement& u, long m, const LocalUnitLattice& lat,
                 const LocalTorsion& tors, long safety_margin) {
    if (m < 0) throw UsageError("is_pm_power: m must be >= 0");
    if (m == 0) return true;
    if (m + safety_margin >= u.F->N)
        throw PrecisionError("is_pm_power: exponent exhausts working precision");
    UnitDecomposition dec = local_decompose(u, lat, tors, safety_margin);
    for (const auto& c : dec.lattice_coords) {
        if (c.precision() <= m)
            throw PrecisionError("is_pm_power: coordinate precision exhausted");
        if (c.valuation_lb() < m) return false;
    }
    long k = tors.order_exponent;
    long need = std::min<long>(m, k);
    if (need == 0) return true;
    Int pn = ipow(u.F->p, static_cast<unsigned long>(need));
    return mod_pos(Int(dec.torsion_dlog), pn) == 0;
}

} // namespace klreg
