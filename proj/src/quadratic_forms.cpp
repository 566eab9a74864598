#include "klreg/quadratic_forms.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace klreg {

namespace {

bool is_fundamental(const Int& D) {
    if (D == 0 || D == 1) return false;
    Int m4 = mod_pos(D, 4);
    auto squarefree = [](Int n) {
        if (n < 0) n = -n;
        for (Int q = 2; q * q <= n; ++q)
            if (mpz_divisible_p(n.get_mpz_t(), Int(q * q).get_mpz_t())) return false;
        return true;
    };
    if (m4 == 1) return squarefree(D);
    if (m4 == 0) {
        Int m = D / 4;
        Int mm4 = mod_pos(m, 4);
        return (mm4 == 2 || mm4 == 3) && squarefree(m);
    }
    return false;
}

Int form_gcd(const QuadForm& f) { return int_gcd(int_gcd(f.a, f.b), f.c); }

} // namespace

QuadForm NarrowClassGroup::reduce(QuadForm f) const {
    if (D_ < 0) {
        // standard positive-definite reduction
        for (int guard = 0; guard < 100000; ++guard) {
            // normalize: -a < b <= a
            Int t = f.b + f.a - 1;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), Int(2 * f.a).get_mpz_t());
            if (q != 0) {
                f.c = f.c - q * f.b + q * q * f.a;
                f.b = f.b - 2 * q * f.a;
            }
            if (f.a > f.c) {
                std::swap(f.a, f.c);
                f.b = -f.b;
                continue;
            }
            break;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        return f;
    }
    // indefinite: apply rho until reduced
    Int s = isqrt_floor(D_);
    auto reduced = [&](const QuadForm& g) {
        if (g.b <= 0) return false;
        if (g.b * g.b >= D_) return false;
        Int two_a = 2 * abs(g.a);
        if (D_ >= (g.b + two_a) * (g.b + two_a)) return false;
        if (two_a > g.b && (two_a - g.b) * (two_a - g.b) >= D_) return false;
        return true;
    };
    for (int guard = 0; guard < 100000 && !reduced(f); ++guard) {
        Int ac = abs(f.c);
        Int t = 2 * ac;
        Int r;
        if (ac > s) {
            r = mod_pos(-f.b, t);
            if (r > ac) r -= t;
        } else {
            r = s - mod_pos(s + f.b, t);
        }
        QuadForm g;
        g.a = f.c;
        g.b = r;
        g.c = (r * r - D_) / (4 * f.c);
        f = g;
    }
    return f;
}

long NarrowClassGroup::locate(const QuadForm& f) const {
    if (D_ < 0) {
        for (size_t i = 0; i < reps_.size(); ++i)
            if (reps_[i] == f) return static_cast<long>(i);
    } else {
        for (size_t i = 0; i < cycles_.size(); ++i)
            for (const auto& g : cycles_[i])
                if (g == f) return static_cast<long>(i);
    }
    throw UsageError("NarrowClassGroup: form not located (non-fundamental input?)");
}

long NarrowClassGroup::class_of(const QuadForm& f) const {
    if (f.disc() != D_) throw UsageError("NarrowClassGroup: discriminant mismatch");
    if (form_gcd(f) != 1) throw UsageError("NarrowClassGroup: form not primitive");
    return locate(reduce(f));
}

NarrowClassGroup::NarrowClassGroup(const Int& D, long enumeration_bound) : D_(D) {
    if (!is_fundamental(D)) throw UsageError("NarrowClassGroup: discriminant not fundamental");
    if (abs(D) > enumeration_bound) throw UsageError("NarrowClassGroup: |D| out of desk-scale range");
    data_.discriminant = D;

    std::vector<QuadForm> all;
    if (D < 0) {
        Int A = abs(D) / 3;
        for (Int a = 1; a * a <= A; ++a) {
            for (Int b = -a; b <= a; ++b) {
                if (mod_pos(b - D, 2) != 0) continue;
                Int num = b * b - D;
                if (!mpz_divisible_p(num.get_mpz_t(), Int(4 * a).get_mpz_t())) continue;
                Int c = num / (4 * a);
                if (c < a) continue;
                QuadForm f{a, b, c};
                if (form_gcd(f) != 1) continue;
                if ((a == c || b == -a) && b < 0) continue;  // boundary duplicates
                all.push_back(f);
            }
        }
        std::sort(all.begin(), all.end());
        reps_ = all;
        data_.narrow_h = static_cast<long>(all.size());
    } else {
        Int s = isqrt_floor(D);
        if (s * s == D) throw UsageError("NarrowClassGroup: square discriminant");
        for (Int b = 1; b <= s; ++b) {
            if (mod_pos(b - D, 2) != 0) continue;
            Int n = (D - b * b) / 4;
            for (Int a1 = 1; a1 * a1 <= n; ++a1) {
                if (!mpz_divisible_p(n.get_mpz_t(), a1.get_mpz_t())) continue;
                for (const Int& aa : {Int(a1), Int(n / a1)}) {
                    Int cc = n / aa;
                    for (int sign = 0; sign < 2; ++sign) {
                        QuadForm f{sign ? -aa : aa, b, sign ? cc : -cc};
                        Int two_a = 2 * abs(f.a);
                        if (D >= (f.b + two_a) * (f.b + two_a)) continue;
                        if (two_a > f.b && (two_a - f.b) * (two_a - f.b) >= D) continue;
                        if (form_gcd(f) != 1) continue;
                        all.push_back(f);
                    }
                    if (a1 * a1 == n) break;
                }
            }
        }
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        // partition into rho-cycles
        std::set<QuadForm> seen;
        for (const auto& f : all) {
            if (seen.count(f)) continue;
            std::vector<QuadForm> cycle;
            QuadForm g = f;
            for (int guard = 0; guard < 100000; ++guard) {
                cycle.push_back(g);
                seen.insert(g);
                // rho on a reduced form
                Int ac = abs(g.c);
                Int t = 2 * ac;
                Int r = s - mod_pos(s + g.b, t);
                QuadForm h{g.c, r, (r * r - D) / (4 * g.c)};
                if (h == f) break;
                g = h;
                if (seen.count(g) && !(g == f)) break;  // should not happen
            }
            std::sort(cycle.begin(), cycle.end());
            cycles_.push_back(cycle);
        }
        std::sort(cycles_.begin(), cycles_.end(),
                  [](const auto& x, const auto& y) { return x.front() < y.front(); });
        for (const auto& c : cycles_) reps_.push_back(c.front());
        data_.narrow_h = static_cast<long>(cycles_.size());
    }

    // composition table
    long h = data_.narrow_h;
    table_.assign(static_cast<size_t>(h), std::vector<long>(static_cast<size_t>(h), 0));
    auto composable_rep = [&](long i) -> QuadForm {
        if (D_ < 0) return reps_[static_cast<size_t>(i)];
        for (const auto& g : cycles_[static_cast<size_t>(i)])
            if (g.a > 0) return g;
        throw UsageError("NarrowClassGroup: cycle without positive leading coefficient");
    };
    for (long i = 0; i < h; ++i) {
        QuadForm f1 = composable_rep(i);
        for (long j = i; j < h; ++j) {
            QuadForm f2 = composable_rep(j);
            // Gauss composition (Cohen, Algorithm 5.4.7)
            QuadForm g1 = f1, g2 = f2;
            if (g1.a > g2.a) std::swap(g1, g2);
            Int sg = (g1.b + g2.b) / 2;
            Int n = g2.b - sg;
            Int y1, d;
            if (mpz_divisible_p(g2.a.get_mpz_t(), g1.a.get_mpz_t())) {
                y1 = 0;
                d = g1.a;
            } else {
                Int u, v;
                d = ext_gcd(g2.a, g1.a, u, v);
                y1 = u;
            }
            Int x2, y2, d1;
            if (mpz_divisible_p(sg.get_mpz_t(), d.get_mpz_t())) {
                y2 = -1;
                x2 = 0;
                d1 = d;
            } else {
                Int u, v;
                d1 = ext_gcd(sg, d, u, v);
                x2 = u;
                y2 = -v;
            }
            Int v1 = g1.a / d1, v2 = g2.a / d1;
            Int r = mod_pos(y1 * y2 * n - x2 * g2.c, v1);
            QuadForm f3;
            f3.a = v1 * v2;
            f3.b = g2.b + 2 * v2 * r;
            f3.c = (g2.c * d1 + r * (g2.b + v2 * r)) / v1;
            long k = locate(reduce(f3));
            table_[static_cast<size_t>(i)][static_cast<size_t>(j)] = k;
            table_[static_cast<size_t>(j)][static_cast<size_t>(i)] = k;
        }
    }
    // identity class: the principal form
    QuadForm principal;
    if (D_ < 0) {
        Int b0 = mod_pos(D_, 2);
        principal = QuadForm{1, b0, (b0 * b0 - D_) / 4};
    } else {
        Int s = isqrt_floor(D_);
        Int b0 = s - mod_pos(s - D_, 2);
        principal = QuadForm{1, b0, (b0 * b0 - D_) / 4};
    }
    identity_ = locate(reduce(principal));

    // elementary divisors from order statistics
    std::vector<long> ord(static_cast<size_t>(h), 0);
    for (long i = 0; i < h; ++i) ord[static_cast<size_t>(i)] = order_of(i);
    std::map<long, std::vector<long>> partitions;  // prime -> lambda desc
    for (const auto& [q, e] : factor_integer(Int(h))) {
        (void)e;
        long ql = static_cast<long>(q.get_si());
        std::vector<long> counts;  // counts[j] = #{x : x^{q^j} = 1}
        counts.push_back(1);
        for (int j = 1;; ++j) {
            Int qj = ipow(q, static_cast<unsigned long>(j));
            long c = 0;
            for (long i = 0; i < h; ++i) {
                if (mpz_divisible_p(qj.get_mpz_t(), Int(ord[static_cast<size_t>(i)]).get_mpz_t())) ++c;
            }
            counts.push_back(c);
            if (c == counts[static_cast<size_t>(j - 1)]) break;
        }
        std::vector<long> lambda;
        for (size_t j = 1; j < counts.size(); ++j) {
            long parts = 0;
            long ratio = counts[j] / counts[j - 1];
            while (ratio > 1) {
                ratio /= ql;
                ++parts;
            }
            if (parts == 0) break;
            lambda.push_back(parts);  // lambda[j-1] = #parts >= j
        }
        // conjugate: number of parts >= j  ->  part sizes
        std::vector<long> sizes;
        for (long i = 0; i < (lambda.empty() ? 0 : lambda[0]); ++i) {
            long sz = 0;
            for (long v : lambda)
                if (v > i) ++sz;
            sizes.push_back(sz);
        }
        partitions[ql] = sizes;  // descending
    }
    size_t max_parts = 0;
    for (const auto& [q, sizes] : partitions) max_parts = std::max(max_parts, sizes.size());
    std::vector<long> divisors(max_parts, 1);
    for (const auto& [q, sizes] : partitions)
        for (size_t i = 0; i < sizes.size(); ++i)
            for (long t = 0; t < sizes[i]; ++t) divisors[i] *= q;
    std::sort(divisors.begin(), divisors.end());
    data_.cycle_structure = divisors;
    // sanity: product equals h
    long prod = 1;
    for (long dv : divisors) prod *= dv;
    if (prod != h) throw UsageError("NarrowClassGroup: structure bookkeeping failed");
}

long NarrowClassGroup::order_of(long x) const {
    long o = 1;
    long cur = x;
    while (cur != identity_) {
        cur = compose(cur, x);
        ++o;
        if (o > data_.narrow_h + 1) throw UsageError("NarrowClassGroup: order overflow");
    }
    return o;
}

long NarrowClassGroup::inverse_of(long x) const {
    for (long y = 0; y < data_.narrow_h; ++y)
        if (compose(x, y) == identity_) return y;
    throw UsageError("NarrowClassGroup: no inverse");
}

long NarrowClassGroup::class_of_prime_above(const Int& p) const {
    for (Int b = 0; b < 2 * p; ++b) {
        Int num = b * b - D_;
        if (!mpz_divisible_p(num.get_mpz_t(), Int(4 * p).get_mpz_t())) continue;
        QuadForm f{p, b, num / (4 * p)};
        if (form_gcd(f) != 1) continue;
        return class_of(f);
    }
    throw UsageError("NarrowClassGroup: no form represents p (inert prime?)");
}

long NarrowClassGroup::quotient_p_rank(const std::vector<long>& gens, const Int& p) const {
    long h = data_.narrow_h;
    // subgroup closure
    std::set<long> H = {identity_};
    std::vector<long> frontier = {identity_};
    for (long g : gens) {
        if (!H.count(g)) {
            H.insert(g);
            frontier.push_back(g);
        }
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<long> cur(H.begin(), H.end());
        for (long x : cur)
            for (long y : cur) {
                long z = compose(x, y);
                if (!H.insert(z).second) continue;
                grew = true;
            }
    }
    // count x with x^p in H
    long pl = static_cast<long>(mod_pos(p, Int(h == 0 ? 1 : h)).get_si());
    (void)pl;
    long count = 0;
    for (long x = 0; x < h; ++x) {
        // x^p by square-and-multiply on class indices
        long acc = identity_, base = x;
        Int e = p;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = compose(acc, base);
            e >>= 1;
            if (e > 0) base = compose(base, base);
        }
        if (H.count(acc)) ++count;
    }
    long ratio = count / static_cast<long>(H.size());
    long rank = 0;
    long pp = static_cast<long>(p.get_si());
    while (ratio > 1) {
        ratio /= pp;
        ++rank;
    }
    return rank;
}

NarrowClassGroupData narrow_class_group_quadratic(const Int& D, long enumeration_bound) {
    return NarrowClassGroup(D, enumeration_bound).data();
}

bool minkowski_certifies_h1(long degree, long r2, const Int& abs_disc) {
    // (n!/n^n) (4/pi)^{r2} sqrt|D| < 2, with rational over-estimates.
    Rat bound(1);
    for (long i = 2; i <= degree; ++i) bound *= Rat(i);
    bound /= Rat(ipow(Int(degree), static_cast<unsigned long>(degree)));
    for (long i = 0; i < r2; ++i) bound *= Rat(400000, 314159);
    Int s = isqrt_floor(abs_disc * Int(1000000));
    bound *= Rat(s + 1, 1000);
    return bound < 2;
}

} // namespace klreg
