#include "klreg/padic_matrix.hpp"

#include <algorithm>

namespace klreg {

PadicMatrix::PadicMatrix(Int p, long prec, long rows, long cols)
    : p_(std::move(p)), prec_(prec), rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw UsageError("PadicMatrix: negative dimension");
    data_.assign(static_cast<size_t>(rows * cols), PadicScalar::zero(p_, prec_));
}

void PadicMatrix::set(long i, long j, const PadicScalar& v) {
    if (v.prime() != p_) throw UsageError("PadicMatrix: mixed primes");
    PadicScalar w = v.precision() > prec_ ? v.with_precision(prec_) : v;
    if (w.precision() < prec_)
        throw UsageError("PadicMatrix: entry precision below matrix precision");
    data_[static_cast<size_t>(i * cols_ + j)] = w;
}

void PadicMatrix::set_int(long i, long j, const Int& v) {
    data_[static_cast<size_t>(i * cols_ + j)] = PadicScalar(p_, v, prec_);
}

PadicMatrix PadicMatrix::identity(const Int& p, long prec, long n) {
    PadicMatrix M(p, prec, n, n);
    for (long i = 0; i < n; ++i) M.set_int(i, i, 1);
    return M;
}

PadicMatrix PadicMatrix::from_int_rows(const Int& p, long prec,
                                       const std::vector<std::vector<Int>>& rows) {
    long r = static_cast<long>(rows.size());
    long c = r == 0 ? 0 : static_cast<long>(rows[0].size());
    PadicMatrix M(p, prec, r, c);
    for (long i = 0; i < r; ++i) {
        if (static_cast<long>(rows[i].size()) != c) throw UsageError("ragged matrix");
        for (long j = 0; j < c; ++j) M.set_int(i, j, rows[i][j]);
    }
    return M;
}

namespace {

// Shared elimination core; mutates a working copy held as plain Int residues.
struct Work {
    Int p, pn;
    long prec;
    long rows, cols;
    std::vector<Int> a;  // row-major, in [0, pn)

    explicit Work(const PadicMatrix& M)
        : p(M.prime()), prec(M.precision()), rows(M.rows()), cols(M.cols()) {
        pn = ipow(p, static_cast<unsigned long>(prec));
        a.resize(static_cast<size_t>(rows * cols));
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j) a[idx(i, j)] = M.at(i, j).lift();
    }

    size_t idx(long i, long j) const { return static_cast<size_t>(i * cols + j); }

    long val(long i, long j) const {
        const Int& v = a[idx(i, j)];
        if (v == 0) return prec;
        return std::min<long>(valuation(v, p), prec);
    }

    // a[i][*] -= q * a[k][*] over the given columns.
    void row_axpy(long i, long k, const Int& q, const std::vector<long>& cols_active) {
        for (long j : cols_active) a[idx(i, j)] = mod_pos(a[idx(i, j)] - q * a[idx(k, j)], pn);
    }
    void col_axpy(long j, long k, const Int& q, const std::vector<long>& rows_active) {
        for (long i : rows_active) a[idx(i, j)] = mod_pos(a[idx(i, j)] - q * a[idx(i, k)], pn);
    }

    // Quotient a[i][j] / a[k][l] (divisor valuation must not exceed dividend's).
    Int quot(long i, long j, long k, long l) const {
        const Int& num = a[idx(i, j)];
        const Int& den = a[idx(k, l)];
        auto [dv, du] = split_p_part(den, p);
        Int pv = ipow(p, static_cast<unsigned long>(dv));
        if (!mpz_divisible_p(num.get_mpz_t(), pv.get_mpz_t()))
            throw PrecisionError("elimination: non-integral quotient");
        return mod_pos((num / pv) * invmod(du, pn), pn);
    }
};

} // namespace

SNFResult snf(const PadicMatrix& M, long safety_margin) {
    Work w(M);
    SNFResult res;
    res.threshold = std::max<long>(1, w.prec - safety_margin);
    long k = std::min(w.rows, w.cols);

    std::vector<long> ra, ca;
    for (long i = 0; i < w.rows; ++i) ra.push_back(i);
    for (long j = 0; j < w.cols; ++j) ca.push_back(j);

    while (static_cast<long>(res.divisor_exponents.size()) < k) {
        long best = w.prec + 1, bi = -1, bj = -1;
        for (long i : ra)
            for (long j : ca) {
                long v = w.val(i, j);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best >= res.threshold) {
            res.free_rank = k - static_cast<long>(res.divisor_exponents.size());
            break;
        }
        res.divisor_exponents.push_back(best);
        for (long i : ra)
            if (i != bi && w.a[w.idx(i, bj)] != 0) w.row_axpy(i, bi, w.quot(i, bj, bi, bj), ca);
        for (long j : ca)
            if (j != bj && w.a[w.idx(bi, j)] != 0) w.col_axpy(j, bj, w.quot(bi, j, bi, bj), ra);
        ra.erase(std::find(ra.begin(), ra.end(), bi));
        ca.erase(std::find(ca.begin(), ca.end(), bj));
    }
    std::sort(res.divisor_exponents.begin(), res.divisor_exponents.end());
    res.certified = res.divisor_exponents.empty() ||
                    res.divisor_exponents.back() < res.threshold;
    return res;
}

long matrix_rank_at_precision(const PadicMatrix& M, long safety_margin) {
    SNFResult r = snf(M, safety_margin);
    return static_cast<long>(r.divisor_exponents.size());
}

std::vector<PadicScalar> solve_square(const PadicMatrix& B, const std::vector<PadicScalar>& v,
                                      long safety_margin) {
    if (B.rows() != B.cols()) throw UsageError("solve_square: matrix not square");
    long n = B.rows();
    if (static_cast<long>(v.size()) != n) throw UsageError("solve_square: size mismatch");
    long thr = std::max<long>(1, B.precision() - safety_margin);

    // Augmented Gauss-Jordan on PadicScalars so precision losses are tracked.
    std::vector<std::vector<PadicScalar>> a;
    for (long i = 0; i < n; ++i) {
        std::vector<PadicScalar> row;
        for (long j = 0; j < n; ++j) row.push_back(B.at(i, j));
        row.push_back(v[static_cast<size_t>(i)]);
        a.push_back(std::move(row));
    }
    std::vector<long> pivot_row_of_col(n, -1);
    std::vector<bool> row_used(n, false);
    for (long step = 0; step < n; ++step) {
        long best = B.precision() + 1, bi = -1, bj = -1;
        for (long i = 0; i < n; ++i) {
            if (row_used[i]) continue;
            for (long j = 0; j < n; ++j) {
                if (pivot_row_of_col[j] >= 0) continue;
                long val = a[i][j].valuation_lb();
                if (val < best) {
                    best = val;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0 || best >= thr)
            throw PrecisionError("solve_square: basis not invertible at precision");
        for (long i = 0; i < n; ++i) {
            if (i == bi || a[i][bj].apparent_zero()) continue;
            PadicScalar q = a[i][bj].div(a[bi][bj]);
            for (long j = 0; j <= n; ++j) a[i][j] = a[i][j].sub(q.mul(a[bi][j]));
        }
        pivot_row_of_col[bj] = bi;
        row_used[bi] = true;
    }
    std::vector<PadicScalar> x;
    x.reserve(n);
    for (long j = 0; j < n; ++j) {
        long i = pivot_row_of_col[j];
        x.push_back(a[i][n].div(a[i][j]));
    }
    return x;
}

std::optional<long> det_valuation(const PadicMatrix& B, long safety_margin) {
    if (B.rows() != B.cols()) throw UsageError("det_valuation: matrix not square");
    SNFResult r = snf(B, safety_margin);
    if (r.free_rank > 0) return std::nullopt;
    return r.exponent_sum();
}

ColumnReduction column_reduce(const PadicMatrix& G, long safety_margin) {
    Work w(G);
    long thr = std::max<long>(1, w.prec - safety_margin);
    long n = w.rows, m = w.cols;

    std::vector<std::vector<Int>> combo(static_cast<size_t>(m));
    for (long j = 0; j < m; ++j) {
        combo[static_cast<size_t>(j)].assign(static_cast<size_t>(m), 0);
        combo[static_cast<size_t>(j)][static_cast<size_t>(j)] = 1;
    }

    std::vector<long> ra, ca;
    for (long i = 0; i < n; ++i) ra.push_back(i);
    for (long j = 0; j < m; ++j) ca.push_back(j);

    ColumnReduction out{PadicMatrix(w.p, w.prec, n, 0), {}, {}, {}, 0};
    std::vector<long> pivots_j, pivots_i;

    while (!ra.empty() && !ca.empty()) {
        long best = w.prec + 1, bi = -1, bj = -1;
        for (long i : ra)
            for (long j : ca) {
                long v = w.val(i, j);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best >= thr) break;
        for (long j : ca) {
            if (j == bj || w.a[w.idx(bi, j)] == 0) continue;
            Int q = w.quot(bi, j, bi, bj);
            // whole column: rows already pivoted stay (apparently) zero
            std::vector<long> all_rows;
            for (long i = 0; i < n; ++i) all_rows.push_back(i);
            w.col_axpy(j, bj, q, all_rows);
            auto& cj = combo[static_cast<size_t>(j)];
            const auto& cb = combo[static_cast<size_t>(bj)];
            for (long t = 0; t < m; ++t)
                cj[static_cast<size_t>(t)] =
                    mod_pos(cj[static_cast<size_t>(t)] - q * cb[static_cast<size_t>(t)], w.pn);
        }
        pivots_i.push_back(bi);
        pivots_j.push_back(bj);
        out.pivot_vals.push_back(best);
        ra.erase(std::find(ra.begin(), ra.end(), bi));
        ca.erase(std::find(ca.begin(), ca.end(), bj));
    }

    long rank = static_cast<long>(pivots_j.size());
    out.rank_certified = rank;
    out.basis = PadicMatrix(w.p, w.prec, n, rank);
    for (long c = 0; c < rank; ++c) {
        long j = pivots_j[static_cast<size_t>(c)];
        for (long i = 0; i < n; ++i) out.basis.set_int(i, c, w.a[w.idx(i, j)]);
        out.combos.push_back(combo[static_cast<size_t>(j)]);
        out.pivot_cols.push_back(j);
    }
    return out;
}

} // namespace klreg
