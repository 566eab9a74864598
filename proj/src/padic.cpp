#include "klreg/padic.hpp"

#include <algorithm>
#include <sstream>

namespace klreg {

PadicScalar::PadicScalar(Int p, Int value, long prec) : p_(std::move(p)), prec_(prec) {
    if (p_ < 2) throw UsageError("PadicScalar: prime must be >= 2");
    if (prec_ < 1) throw UsageError("PadicScalar: precision must be >= 1");
    pn_ = ipow(p_, static_cast<unsigned long>(prec_));
    value_ = mod_pos(value, pn_);
    val_ = (value_ == 0) ? prec_ : std::min<long>(valuation(value_, p_), prec_);
}

Int PadicScalar::lift_signed() const {
    Int half = pn_ / 2;
    if (value_ > half) return value_ - pn_;
    return value_;
}

void PadicScalar::check_same_prime(const PadicScalar& b) const {
    if (p_ != b.p_) throw UsageError("PadicScalar: mixed primes");
}

PadicScalar PadicScalar::add(const PadicScalar& b) const {
    check_same_prime(b);
    long prec = std::min(prec_, b.prec_);
    return PadicScalar(p_, value_ + b.value_, prec);
}

PadicScalar PadicScalar::sub(const PadicScalar& b) const {
    check_same_prime(b);
    long prec = std::min(prec_, b.prec_);
    return PadicScalar(p_, value_ - b.value_, prec);
}

PadicScalar PadicScalar::mul(const PadicScalar& b) const {
    check_same_prime(b);
    // a = a0 + O(p^pa), b = b0 + O(p^pb): error term has v >= min(pa+vb, pb+va).
    long prec = std::min(prec_ + b.val_, b.prec_ + val_);
    return PadicScalar(p_, value_ * b.value_, prec);
}

PadicScalar PadicScalar::mul_int(const Int& c) const {
    return PadicScalar(p_, value_ * c, prec_);
}

PadicScalar PadicScalar::neg() const {
    return PadicScalar(p_, -value_, prec_);
}

PadicScalar PadicScalar::inv() const {
    if (apparent_zero()) throw PrecisionError("PadicScalar: inverse of apparent zero");
    if (val_ != 0) throw UsageError("PadicScalar: inverse of non-unit");
    return PadicScalar(p_, invmod(value_, pn_), prec_);
}

PadicScalar PadicScalar::div(const PadicScalar& b) const {
    check_same_prime(b);
    if (b.apparent_zero()) throw PrecisionError("PadicScalar: division by apparent zero");
    long vb = b.val_;
    if (vb >= prec_) throw PrecisionError("PadicScalar: divisor valuation exhausts precision");
    if (vb == 0) {
        long prec = std::min(prec_, b.prec_);
        return PadicScalar(p_, value_ * invmod(b.value_, pn_), prec);
    }
    Int pv = ipow(p_, static_cast<unsigned long>(vb));
    if (!mpz_divisible_p(value_.get_mpz_t(), pv.get_mpz_t()))
        throw PrecisionError("PadicScalar: quotient is not p-integral");
    Int unit = b.value_ / pv;
    long prec = std::min(prec_, b.prec_) - vb;
    return PadicScalar(p_, (value_ / pv) * invmod(unit, pn_), prec);
}

PadicScalar PadicScalar::pow(const Int& e) const {
    if (e < 0) return inv().pow(-e);
    PadicScalar acc = PadicScalar::one(p_, prec_);
    PadicScalar base = *this;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = acc.mul(base);
        k >>= 1;
        if (k > 0) base = base.mul(base);
    }
    return acc;
}

PadicScalar PadicScalar::shift_down(long v) const {
    if (v == 0) return *this;
    if (v < 0) return shift_up(-v);
    if (v >= prec_) throw PrecisionError("PadicScalar: shift_down exhausts precision");
    Int pv = ipow(p_, static_cast<unsigned long>(v));
    if (!mpz_divisible_p(value_.get_mpz_t(), pv.get_mpz_t()))
        throw PrecisionError("PadicScalar: shift_down of non-divisible value");
    return PadicScalar(p_, value_ / pv, prec_ - v);
}

PadicScalar PadicScalar::shift_up(long v) const {
    if (v == 0) return *this;
    if (v < 0) return shift_down(-v);
    Int pv = ipow(p_, static_cast<unsigned long>(v));
    return PadicScalar(p_, value_ * pv, prec_ + v);
}

PadicScalar PadicScalar::with_precision(long prec) const {
    if (prec > prec_) throw UsageError("PadicScalar: cannot raise precision");
    return PadicScalar(p_, value_, prec);
}

bool PadicScalar::same_residue(const PadicScalar& b) const {
    check_same_prime(b);
    long prec = std::min(prec_, b.prec_);
    Int pn = ipow(p_, static_cast<unsigned long>(prec));
    return mod_pos(value_ - b.value_, pn) == 0;
}

std::string PadicScalar::str() const {
    std::ostringstream os;
    os << value_ << " + O(" << p_ << "^" << prec_ << ")";
    return os.str();
}

PadicScalar eval_poly(const std::vector<PadicScalar>& f, const PadicScalar& x) {
    PadicScalar acc = PadicScalar::zero(x.prime(), x.precision());
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc.mul(x).add(*it);
    return acc;
}

static std::vector<PadicScalar> derivative(const std::vector<PadicScalar>& f) {
    std::vector<PadicScalar> d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i].mul_int(Int(static_cast<long>(i))));
    if (d.empty() && !f.empty()) d.push_back(PadicScalar::zero(f[0].prime(), f[0].precision()));
    return d;
}

std::optional<PadicScalar> hensel_lift_root(const std::vector<PadicScalar>& f,
                                            const PadicScalar& x0) {
    if (f.empty()) throw UsageError("hensel_lift_root: empty polynomial");
    const Int& p = x0.prime();
    long N = x0.precision();
    auto fd = derivative(f);

    PadicScalar x = x0;
    PadicScalar fx = eval_poly(f, x);
    if (fx.apparent_zero()) return x;
    PadicScalar dfx = eval_poly(fd, x);
    if (dfx.apparent_zero()) return std::nullopt;
    long d = dfx.valuation_lb();
    if (fx.valuation_lb() <= 2 * d) return std::nullopt;

    for (int iter = 0; iter < 200; ++iter) {
        long before = fx.valuation_lb();
        PadicScalar delta = fx.div(dfx);
        x = PadicScalar(p, x.lift() - delta.lift(), N);
        fx = eval_poly(f, x);
        if (fx.apparent_zero()) return x;
        dfx = eval_poly(fd, x);
        if (fx.valuation_lb() <= before) return std::nullopt;  // no quadratic progress
    }
    return std::nullopt;
}

} // namespace klreg
