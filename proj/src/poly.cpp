#include "klreg/poly.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace klreg {

namespace intpoly {

long deg(const IntPoly& f) { return static_cast<long>(f.size()) - 1; }

void normalize(IntPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

IntPoly add(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    normalize(r);
    return r;
}

IntPoly sub(const IntPoly& a, const IntPoly& b) {
    IntPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    normalize(r);
    return r;
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    normalize(r);
    return r;
}

IntPoly derivative(const IntPoly& f) {
    IntPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * Int(static_cast<long>(i)));
    normalize(r);
    return r;
}

Int eval(const IntPoly& f, const Int& x) {
    Int acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

bool is_monic(const IntPoly& f) { return !f.empty() && f.back() == 1; }

std::pair<IntPoly, IntPoly> divrem_monic(const IntPoly& f, const IntPoly& g) {
    if (!is_monic(g)) throw UsageError("divrem_monic: divisor not monic");
    IntPoly r = f, q;
    long dg = deg(g);
    while (deg(r) >= dg) {
        long k = deg(r) - dg;
        Int c = r.back();
        if (static_cast<long>(q.size()) < k + 1) q.resize(static_cast<size_t>(k + 1), Int(0));
        q[static_cast<size_t>(k)] += c;
        for (long i = 0; i <= dg; ++i) r[static_cast<size_t>(i + k)] -= c * g[static_cast<size_t>(i)];
        normalize(r);
    }
    normalize(q);
    return {q, r};
}

Int resultant(const IntPoly& f, const IntPoly& g) {
    long n = deg(f), m = deg(g);
    if (n < 0 || m < 0) return 0;
    if (n == 0) return ipow(f[0], static_cast<unsigned long>(m));
    if (m == 0) return ipow(g[0], static_cast<unsigned long>(n));
    // Sylvester matrix, fraction-free Bareiss determinant.
    long sz = n + m;
    std::vector<std::vector<Int>> M(static_cast<size_t>(sz),
                                    std::vector<Int>(static_cast<size_t>(sz), Int(0)));
    for (long i = 0; i < m; ++i)
        for (long j = 0; j <= n; ++j) M[static_cast<size_t>(i)][static_cast<size_t>(i + j)] = f[static_cast<size_t>(n - j)];
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= m; ++j) M[static_cast<size_t>(m + i)][static_cast<size_t>(i + j)] = g[static_cast<size_t>(m - j)];

    Int denom = 1;
    int sign = 1;
    for (long k = 0; k < sz - 1; ++k) {
        if (M[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            long swap_i = -1;
            for (long i = k + 1; i < sz; ++i)
                if (M[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { swap_i = i; break; }
            if (swap_i < 0) return 0;
            std::swap(M[static_cast<size_t>(k)], M[static_cast<size_t>(swap_i)]);
            sign = -sign;
        }
        for (long i = k + 1; i < sz; ++i)
            for (long j = k + 1; j < sz; ++j) {
                Int t = M[static_cast<size_t>(i)][static_cast<size_t>(j)] * M[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                        M[static_cast<size_t>(i)][static_cast<size_t>(k)] * M[static_cast<size_t>(k)][static_cast<size_t>(j)];
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] = t / denom;
            }
        denom = M[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    return Int(sign) * M[static_cast<size_t>(sz - 1)][static_cast<size_t>(sz - 1)];
}

Int discriminant(const IntPoly& f) {
    if (!is_monic(f)) throw UsageError("discriminant: polynomial must be monic");
    long n = deg(f);
    Int res = resultant(f, derivative(f));
    long s = (n * (n - 1)) / 2;
    return (s % 2 == 0) ? res : -res;
}

IntPoly cyclotomic(long m) {
    if (m < 1) throw UsageError("cyclotomic: m >= 1");
    // x^m - 1 divided by all lower cyclotomics.
    IntPoly num(static_cast<size_t>(m + 1), Int(0));
    num[0] = -1;
    num[static_cast<size_t>(m)] = 1;
    for (long d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        auto [q, r] = divrem_monic(num, cyclotomic(d));
        if (deg(r) >= 0) throw UsageError("cyclotomic: internal division error");
        num = q;
    }
    return num;
}

IntPoly shift(const IntPoly& f, const Int& r) {
    // Horner on x -> x + r.
    IntPoly acc;
    IntPoly xr = {r, Int(1)};
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        acc = mul(acc, xr);
        if (acc.empty()) acc.push_back(*it);
        else acc[0] += *it;
        normalize(acc);
    }
    return acc;
}

namespace {
int sign_of(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }
}

long count_real_roots(const IntPoly& f) {
    // Sturm chain; counts sign variations at -inf and +inf.
    RatPoly p0 = ratpoly::from_int(f);
    RatPoly p1 = ratpoly::from_int(derivative(f));
    std::vector<RatPoly> chain = {p0, p1};
    while (ratpoly::deg(chain.back()) > 0) {
        RatPoly r = ratpoly::rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (ratpoly::deg(r) < 0) break;
        chain.push_back(r);
    }
    auto variations = [&](int at_infinity) {
        int prev = 0;
        long var = 0;
        for (const auto& q : chain) {
            long d = ratpoly::deg(q);
            if (d < 0) continue;
            int s = sign_of(q.back());
            if (at_infinity < 0 && d % 2 == 1) s = -s;
            if (prev != 0 && s != 0 && s != prev) ++var;
            if (s != 0) prev = s;
        }
        return var;
    };
    return variations(-1) - variations(+1);
}

namespace {

// Upper bound on |coefficients| of any monic factor of monic f (Mignotte-ish).
Int factor_coeff_bound(const IntPoly& f) {
    Int norm = 0;
    for (const auto& c : f) norm += abs(c);
    long n = deg(f);
    Int binom = 1;
    for (long i = 0; i < n / 2 + 1; ++i) binom *= 2;  // 2^(n/2+1) crude binomial bound
    return binom * norm * 2 + 2;
}

} // namespace

bool is_irreducible_monic(const IntPoly& f) {
    long n = deg(f);
    if (n <= 0) throw UsageError("is_irreducible_monic: constant polynomial");
    if (n == 1) return true;
    Int disc = discriminant(f);
    if (disc == 0) return false;  // repeated factors

    static const long probe[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101};
    // Degree-pattern sieve across good primes.
    std::vector<bool> possible(static_cast<size_t>(n + 1), true);
    long best_p = 0;
    size_t best_count = SIZE_MAX;
    for (long p : probe) {
        if (mpz_divisible_ui_p(disc.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        FpPoly fp_f = fp::from_int(f, p);
        auto factors = fp::factor(fp_f);
        if (factors.size() == 1 && factors[0].second == 1) return true;
        std::vector<bool> reach(static_cast<size_t>(n + 1), false);
        reach[0] = true;
        for (const auto& [h, mult] : factors)
            for (int t = 0; t < mult; ++t) {
                for (long d = n; d >= h.deg(); --d)
                    if (reach[static_cast<size_t>(d - h.deg())]) reach[static_cast<size_t>(d)] = true;
            }
        for (long d = 0; d <= n; ++d)
            if (!reach[static_cast<size_t>(d)]) possible[static_cast<size_t>(d)] = false;
        size_t cnt = 0;
        for (const auto& [h, mult] : factors) cnt += static_cast<size_t>(mult);
        if (cnt < best_count) { best_count = cnt; best_p = p; }
        bool any_proper = false;
        for (long d = 1; d < n; ++d) any_proper |= possible[static_cast<size_t>(d)];
        if (!any_proper) return true;
    }
    if (best_p == 0) throw BudgetError("is_irreducible_monic: no good reduction prime");

    // Zassenhaus: lift the factorization mod best_p and test factor subsets.
    if (best_count > 20) throw BudgetError("is_irreducible_monic: too many modular factors");
    FpPoly fp_f = fp::from_int(f, best_p);
    auto factors = fp::factor(fp_f);
    std::vector<FpPoly> irr;
    for (const auto& [h, mult] : factors)
        for (int t = 0; t < mult; ++t) irr.push_back(h);
    Int bound = factor_coeff_bound(f);
    long N = 1;
    Int pN = best_p;
    while (pN < 2 * bound) { pN *= best_p; ++N; }
    ZpCtx ctx(Int(best_p), N);
    auto lifted = zp::lift_factorization(f, irr, ctx);

    size_t k = lifted.size();
    for (size_t mask = 1; mask + 1 < (size_t{1} << k); ++mask) {
        long dsum = 0;
        for (size_t i = 0; i < k; ++i)
            if (mask & (size_t{1} << i)) dsum += intpoly::deg(lifted[i]);
        if (dsum == 0 || dsum > n / 2 || !possible[static_cast<size_t>(dsum)]) continue;
        IntPoly cand = {Int(1)};
        for (size_t i = 0; i < k; ++i)
            if (mask & (size_t{1} << i)) cand = zp::mul(cand, lifted[i], ctx);
        // symmetric lifts
        for (auto& c : cand) {
            c = mod_pos(c, ctx.pN);
            if (c * 2 > ctx.pN) c -= ctx.pN;
        }
        auto [q, r] = divrem_monic(f, cand);
        (void)q;
        if (deg(r) < 0) return false;
    }
    return true;
}

} // namespace intpoly

namespace ratpoly {

long deg(const RatPoly& f) { return static_cast<long>(f.size()) - 1; }

void normalize(RatPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

RatPoly add(const RatPoly& a, const RatPoly& b) {
    RatPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    normalize(r);
    return r;
}

RatPoly sub(const RatPoly& a, const RatPoly& b) {
    RatPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    normalize(r);
    return r;
}

RatPoly mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    normalize(r);
    return r;
}

RatPoly rem(const RatPoly& f, const RatPoly& g) {
    if (deg(g) < 0) throw UsageError("ratpoly::rem: division by zero");
    RatPoly r = f;
    long dg = deg(g);
    while (deg(r) >= dg) {
        Rat c = r.back() / g.back();
        long k = deg(r) - dg;
        for (long i = 0; i <= dg; ++i) r[static_cast<size_t>(i + k)] -= c * g[static_cast<size_t>(i)];
        normalize(r);
    }
    return r;
}

RatPoly from_int(const IntPoly& f) {
    RatPoly r;
    for (const auto& c : f) r.push_back(Rat(c));
    return r;
}

Rat eval(const RatPoly& f, const Rat& x) {
    Rat acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

} // namespace ratpoly

namespace fp {

namespace {
long mulp(long a, long b, long p) {
    return static_cast<long>((static_cast<__int128>(a) * b) % p);
}
long invp(long a, long p) {
    Int r = invmod(Int(a), Int(p));
    return static_cast<long>(r.get_si());
}
void trim(FpPoly& f) {
    while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
}
} // namespace

FpPoly make(long p, std::vector<long> coeffs) {
    if (p < 2 || p >= (1L << 20)) throw UsageError("FpPoly: prime out of range");
    FpPoly f{p, std::move(coeffs)};
    for (auto& x : f.c) x = ((x % p) + p) % p;
    trim(f);
    return f;
}

FpPoly from_int(const IntPoly& f, long p) {
    std::vector<long> c;
    Int P(p);
    for (const auto& x : f) c.push_back(static_cast<long>(mod_pos(x, P).get_si()));
    return make(p, std::move(c));
}

FpPoly add(const FpPoly& a, const FpPoly& b) {
    FpPoly r{a.p, std::vector<long>(std::max(a.c.size(), b.c.size()), 0)};
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = (r.c[i] + b.c[i]) % a.p;
    trim(r);
    return r;
}

FpPoly sub(const FpPoly& a, const FpPoly& b) {
    FpPoly r{a.p, std::vector<long>(std::max(a.c.size(), b.c.size()), 0)};
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = ((r.c[i] - b.c[i]) % a.p + a.p) % a.p;
    trim(r);
    return r;
}

FpPoly mul(const FpPoly& a, const FpPoly& b) {
    if (a.c.empty() || b.c.empty()) return FpPoly{a.p, {}};
    FpPoly r{a.p, std::vector<long>(a.c.size() + b.c.size() - 1, 0)};
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = (r.c[i + j] + mulp(a.c[i], b.c[j], a.p)) % a.p;
    trim(r);
    return r;
}

std::pair<FpPoly, FpPoly> divrem(const FpPoly& a, const FpPoly& b) {
    if (b.is_zero()) throw UsageError("FpPoly: division by zero");
    FpPoly r = a, q{a.p, {}};
    long db = b.deg();
    long binv = invp(b.c.back(), a.p);
    while (r.deg() >= db) {
        long k = r.deg() - db;
        long c = mulp(r.c.back(), binv, a.p);
        if (static_cast<long>(q.c.size()) < k + 1) q.c.resize(static_cast<size_t>(k + 1), 0);
        q.c[static_cast<size_t>(k)] = (q.c[static_cast<size_t>(k)] + c) % a.p;
        for (long i = 0; i <= db; ++i) {
            auto& x = r.c[static_cast<size_t>(i + k)];
            x = ((x - mulp(c, b.c[static_cast<size_t>(i)], a.p)) % a.p + a.p) % a.p;
        }
        trim(r);
    }
    trim(q);
    return {q, r};
}

FpPoly make_monic(const FpPoly& a) {
    if (a.is_zero()) return a;
    long inv = invp(a.c.back(), a.p);
    FpPoly r = a;
    for (auto& x : r.c) x = mulp(x, inv, a.p);
    return r;
}

FpPoly gcd(FpPoly a, FpPoly b) {
    while (!b.is_zero()) {
        FpPoly r = divrem(a, b).second;
        a = b;
        b = r;
    }
    return make_monic(a);
}

FpPoly powmod(const FpPoly& base, const Int& e, const FpPoly& mod) {
    FpPoly acc{base.p, {1}};
    FpPoly b = divrem(base, mod).second;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = divrem(mul(acc, b), mod).second;
        k >>= 1;
        if (k > 0) b = divrem(mul(b, b), mod).second;
    }
    return acc;
}

FpPoly derivative(const FpPoly& a) {
    FpPoly r{a.p, {}};
    for (size_t i = 1; i < a.c.size(); ++i)
        r.c.push_back(mulp(a.c[i], static_cast<long>(i % static_cast<size_t>(a.p)), a.p));
    trim(r);
    return r;
}

bool equal(const FpPoly& a, const FpPoly& b) { return a.p == b.p && a.c == b.c; }

void bezout(const FpPoly& g, const FpPoly& h, FpPoly& s, FpPoly& t) {
    // extended Euclid
    FpPoly r0 = g, r1 = h;
    FpPoly s0{g.p, {1}}, s1{g.p, {}};
    FpPoly t0{g.p, {}}, t1{g.p, {1}};
    while (!r1.is_zero()) {
        auto [q, r2] = divrem(r0, r1);
        FpPoly s2 = sub(s0, mul(q, s1));
        FpPoly t2 = sub(t0, mul(q, t1));
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (r0.deg() != 0) throw UsageError("bezout: polynomials not coprime");
    long inv = invp(r0.c[0], g.p);
    for (auto& x : s0.c) x = mulp(x, inv, g.p);
    for (auto& x : t0.c) x = mulp(x, inv, g.p);
    s = s0;
    t = t0;
}

namespace {

// f(x) = g(x^p) with g recovered coefficientwise (Frobenius is identity on F_p).
FpPoly pth_root(const FpPoly& f) {
    FpPoly g{f.p, {}};
    for (size_t i = 0; i < f.c.size(); i += static_cast<size_t>(f.p)) g.c.push_back(f.c[i]);
    trim(g);
    return g;
}

std::vector<FpPoly> equal_degree_split(const FpPoly& f, long d, std::mt19937_64& rng) {
    if (f.deg() == d) return {make_monic(f)};
    long p = f.p;
    Int q = ipow(Int(p), static_cast<unsigned long>(d));
    for (int attempt = 0; attempt < 256; ++attempt) {
        FpPoly a{p, {}};
        for (long i = 0; i < f.deg(); ++i) a.c.push_back(static_cast<long>(rng() % static_cast<unsigned long>(p)));
        trim(a);
        if (a.deg() < 1) continue;
        FpPoly t;
        if (p == 2) {
            FpPoly acc = a, s = a;
            for (long i = 1; i < d; ++i) {
                acc = divrem(mul(acc, acc), f).second;
                s = add(s, acc);
            }
            t = s;
        } else {
            FpPoly b = powmod(a, (q - 1) / 2, f);
            t = sub(b, FpPoly{p, {1}});
        }
        FpPoly g = gcd(t, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            auto left = equal_degree_split(g, d, rng);
            auto right = equal_degree_split(divrem(f, g).first, d, rng);
            left.insert(left.end(), right.begin(), right.end());
            return left;
        }
    }
    throw BudgetError("equal_degree_split: attempts exhausted");
}

// Distinct irreducible factors of a squarefree monic f.
std::vector<FpPoly> factor_squarefree(FpPoly f, std::mt19937_64& rng) {
    std::vector<FpPoly> out;
    FpPoly x{f.p, {0, 1}};
    FpPoly h = x;
    long d = 0;
    while (f.deg() > 0 && 2 * (d + 1) <= f.deg()) {
        ++d;
        h = powmod(h, Int(f.p), f);
        FpPoly g = gcd(sub(h, x), f);
        if (g.deg() > 0) {
            auto split = equal_degree_split(g, d, rng);
            out.insert(out.end(), split.begin(), split.end());
            f = divrem(f, g).first;
            h = divrem(h, f).second;
        }
    }
    if (f.deg() > 0) out.push_back(make_monic(f));
    return out;
}

} // namespace

std::vector<std::pair<FpPoly, int>> factor(const FpPoly& f_in) {
    if (f_in.is_zero()) throw UsageError("fp::factor: zero polynomial");
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    FpPoly f = make_monic(f_in);

    // Distinct irreducible factors first (handling p-th powers), then count.
    std::vector<FpPoly> distinct;
    FpPoly g = f;
    while (g.deg() > 0) {
        FpPoly d = derivative(g);
        if (d.is_zero()) {
            g = pth_root(g);
            continue;
        }
        FpPoly w = divrem(g, gcd(g, d)).first;  // product of distinct factors, mult prime to p
        for (const auto& h : factor_squarefree(w, rng)) {
            bool seen = false;
            for (const auto& e : distinct) seen |= equal(e, h);
            if (!seen) distinct.push_back(h);
        }
        // strip all copies of the found factors
        for (const auto& h : distinct) {
            while (true) {
                auto [q, r] = divrem(g, h);
                if (!r.is_zero()) break;
                g = q;
            }
        }
    }
    std::vector<std::pair<FpPoly, int>> out;
    for (const auto& h : distinct) {
        int mult = 0;
        FpPoly t = f;
        while (true) {
            auto [q, r] = divrem(t, h);
            if (!r.is_zero()) break;
            t = q;
            ++mult;
        }
        out.emplace_back(h, mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        return a.first.c < b.first.c;
    });
    return out;
}

} // namespace fp

namespace zp {

IntPoly reduce(const IntPoly& f, const ZpCtx& ctx) {
    IntPoly r = f;
    for (auto& c : r) c = mod_pos(c, ctx.pN);
    intpoly::normalize(r);
    return r;
}

IntPoly mul(const IntPoly& a, const IntPoly& b, const ZpCtx& ctx) {
    return reduce(intpoly::mul(a, b), ctx);
}

std::pair<IntPoly, IntPoly> divrem_monic(const IntPoly& f, const IntPoly& g, const ZpCtx& ctx) {
    if (!intpoly::is_monic(g)) throw UsageError("zp::divrem_monic: divisor not monic");
    IntPoly r = reduce(f, ctx), q;
    long dg = intpoly::deg(g);
    while (intpoly::deg(r) >= dg) {
        long k = intpoly::deg(r) - dg;
        Int c = r.back();
        if (static_cast<long>(q.size()) < k + 1) q.resize(static_cast<size_t>(k + 1), Int(0));
        q[static_cast<size_t>(k)] = mod_pos(q[static_cast<size_t>(k)] + c, ctx.pN);
        for (long i = 0; i <= dg; ++i)
            r[static_cast<size_t>(i + k)] = mod_pos(r[static_cast<size_t>(i + k)] - c * g[static_cast<size_t>(i)], ctx.pN);
        intpoly::normalize(r);
    }
    intpoly::normalize(q);
    return {q, r};
}

IntPoly mulmod(const IntPoly& a, const IntPoly& b, const IntPoly& mod, const ZpCtx& ctx) {
    return divrem_monic(mul(a, b, ctx), mod, ctx).second;
}

namespace {

// One quadratic-free linear Hensel step chain: f = G*H mod p^N from
// coprime monic gbar, hbar with f = gbar*hbar mod p.
std::pair<IntPoly, IntPoly> two_factor_lift(const IntPoly& f, const FpPoly& gbar,
                                            const FpPoly& hbar, const ZpCtx& ctx) {
    long p = static_cast<long>(ctx.p.get_si());
    FpPoly s, t;
    fp::bezout(gbar, hbar, s, t);  // s*gbar + t*hbar = 1

    auto lift_fp = [&](const FpPoly& a) {
        IntPoly r;
        for (long c : a.c) r.push_back(Int(c));
        intpoly::normalize(r);
        return r;
    };
    IntPoly G = lift_fp(gbar), H = lift_fp(hbar);
    Int pk = ctx.p;
    for (long k = 1; k < ctx.N; ++k, pk *= ctx.p) {
        IntPoly e = intpoly::sub(f, intpoly::mul(G, H));
        // d = e / p^k mod p
        FpPoly d{p, {}};
        bool all_zero = true;
        for (const auto& c : e) {
            Int q = c / pk;
            if (!mpz_divisible_p(c.get_mpz_t(), pk.get_mpz_t()))
                throw UsageError("two_factor_lift: inconsistent residue");
            long cm = static_cast<long>(mod_pos(q, ctx.p).get_si());
            d.c.push_back(cm);
            all_zero &= (cm == 0);
        }
        if (all_zero) { d.c.clear(); }
        while (!d.c.empty() && d.c.back() == 0) d.c.pop_back();
        if (d.is_zero()) continue;
        auto [qq, a] = fp::divrem(fp::mul(t, d), gbar);
        (void)qq;
        // b = (d - a*hbar) / gbar exactly over F_p
        auto [b, rem] = fp::divrem(fp::sub(d, fp::mul(a, hbar)), gbar);
        if (!rem.is_zero()) throw UsageError("two_factor_lift: lift division failed");
        IntPoly A = lift_fp(a), B = lift_fp(b);
        for (size_t i = 0; i < A.size(); ++i) A[i] *= pk;
        for (size_t i = 0; i < B.size(); ++i) B[i] *= pk;
        G = reduce(intpoly::add(G, A), ZpCtx(ctx.p, k + 1));
        H = reduce(intpoly::add(H, B), ZpCtx(ctx.p, k + 1));
    }
    return {reduce(G, ctx), reduce(H, ctx)};
}

} // namespace

std::vector<IntPoly> lift_factorization(const IntPoly& f, const std::vector<FpPoly>& clusters,
                                        const ZpCtx& ctx) {
    if (clusters.empty()) throw UsageError("lift_factorization: no clusters");
    if (clusters.size() == 1) return {reduce(f, ctx)};
    FpPoly rest{clusters[0].p, {1}};
    for (size_t i = 1; i < clusters.size(); ++i) rest = fp::mul(rest, clusters[i]);
    auto [G, H] = two_factor_lift(reduce(f, ctx), clusters[0], rest, ctx);
    std::vector<FpPoly> tail(clusters.begin() + 1, clusters.end());
    auto rest_lifted = lift_factorization(H, tail, ctx);
    std::vector<IntPoly> out = {G};
    out.insert(out.end(), rest_lifted.begin(), rest_lifted.end());
    return out;
}

} // namespace zp

} // namespace klreg
