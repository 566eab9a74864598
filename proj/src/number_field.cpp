#include "klreg/number_field.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace klreg {

namespace {

bool is_squarefree_small(long d) {
    long a = d < 0 ? -d : d;
    for (long q = 2; q * q <= a; ++q)
        if (a % (q * q) == 0) return false;
    return true;
}

long euler_phi(long m) {
    long r = m;
    for (long q = 2; q * q <= m; ++q) {
        if (m % q) continue;
        r -= r / q;
        while (m % q == 0) m /= q;
    }
    if (m > 1) r -= r / m;
    return r;
}

std::vector<std::vector<Rat>> identity_basis(long n) {
    std::vector<std::vector<Rat>> b(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
    for (long i = 0; i < n; ++i) b[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    return b;
}

Rat det_rat(std::vector<std::vector<Rat>> a) {
    long n = static_cast<long>(a.size());
    Rat det = 1;
    for (long k = 0; k < n; ++k) {
        long piv = -1;
        for (long i = k; i < n; ++i)
            if (a[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { piv = i; break; }
        if (piv < 0) return Rat(0);
        if (piv != k) {
            std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(k)]);
            det = -det;
        }
        det *= a[static_cast<size_t>(k)][static_cast<size_t>(k)];
        for (long i = k + 1; i < n; ++i) {
            Rat f = a[static_cast<size_t>(i)][static_cast<size_t>(k)] / a[static_cast<size_t>(k)][static_cast<size_t>(k)];
            for (long j = k; j < n; ++j)
                a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(k)][static_cast<size_t>(j)];
        }
    }
    return det;
}

} // namespace

FieldSpec make_quadratic(long d) {
    if (d == 0 || d == 1) throw UsageError("quadratic field: d must not be 0 or 1");
    if (!is_squarefree_small(d)) throw UsageError("quadratic field: d must be squarefree");
    FieldSpec K;
    K.kind = FieldKind::Quadratic;
    K.d = d;
    K.degree = 2;
    long dm4 = ((d % 4) + 4) % 4;
    if (dm4 == 1) {
        // theta = (1 + sqrt d)/2, x^2 - x + (1-d)/4
        K.min_poly = {Int((1 - d) / 4), Int(-1), Int(1)};
        K.discriminant = d;
    } else {
        K.min_poly = {Int(-d), Int(0), Int(1)};
        K.discriminant = 4 * Int(d);
    }
    K.r1 = d > 0 ? 2 : 0;
    K.r2 = d > 0 ? 0 : 1;
    K.integral_basis = identity_basis(2);
    std::ostringstream lbl;
    lbl << "Q(sqrt(" << d << "))";
    K.label = lbl.str();
    return K;
}

FieldSpec make_cyclotomic(long m) {
    if (m < 3) throw UsageError("cyclotomic field: m must be >= 3");
    if (m % 4 == 2) throw UsageError("cyclotomic field: m = 2 mod 4 duplicates Q(zeta_{m/2}); use m/2");
    if (m > 25) throw UsageError("cyclotomic field: m > 25 not supported");
    FieldSpec K;
    K.kind = FieldKind::Cyclotomic;
    K.m = m;
    K.min_poly = intpoly::cyclotomic(m);
    K.degree = euler_phi(m);
    K.r1 = 0;
    K.r2 = K.degree / 2;
    // disc = (-1)^{phi/2} m^phi / prod_{q | m} q^{phi/(q-1)}
    Int D = ipow(Int(m), static_cast<unsigned long>(K.degree));
    long mm = m;
    for (long q = 2; q <= mm; ++q) {
        if (mm % q) continue;
        D /= ipow(Int(q), static_cast<unsigned long>(K.degree / (q - 1)));
        while (mm % q == 0) mm /= q;
    }
    if ((K.degree / 2) % 2 == 1) D = -D;
    K.discriminant = D;
    K.integral_basis = identity_basis(K.degree);
    std::ostringstream lbl;
    lbl << "Q(zeta_" << m << ")";
    K.label = lbl.str();
    return K;
}

FieldSpec make_custom(const IntPoly& min_poly, std::vector<std::vector<Rat>> integral_basis,
                      std::vector<std::vector<Rat>> units) {
    FieldSpec K;
    K.kind = FieldKind::Custom;
    K.min_poly = min_poly;
    intpoly::normalize(K.min_poly);
    long n = intpoly::deg(K.min_poly);
    if (n < 2) throw UsageError("custom field: degree must be >= 2");
    if (!intpoly::is_monic(K.min_poly)) throw UsageError("custom field: min_poly must be monic");
    if (!intpoly::is_irreducible_monic(K.min_poly))
        throw UsageError("custom field: min_poly is reducible over Q");
    K.degree = n;
    K.r1 = intpoly::count_real_roots(K.min_poly);
    if ((n - K.r1) % 2 != 0) throw UsageError("custom field: signature bookkeeping failed");
    K.r2 = (n - K.r1) / 2;

    if (integral_basis.empty()) integral_basis = identity_basis(n);
    if (static_cast<long>(integral_basis.size()) != n)
        throw UsageError("custom field: integral basis must have degree-many rows");
    for (const auto& row : integral_basis)
        if (static_cast<long>(row.size()) != n)
            throw UsageError("custom field: ragged integral basis");
    Rat det = det_rat(integral_basis);
    if (det == 0) throw UsageError("custom field: integral basis is singular");
    Int disc_poly = intpoly::discriminant(K.min_poly);
    Rat D = Rat(disc_poly) * det * det;
    if (D.get_den() != 1) throw UsageError("custom field: declared basis gives non-integral discriminant");
    K.discriminant = D.get_num();
    K.integral_basis = std::move(integral_basis);
    K.user_units = std::move(units);
    std::ostringstream lbl;
    lbl << "custom(deg " << n << ", disc " << K.discriminant << ")";
    K.label = lbl.str();
    return K;
}

namespace {

Rat parse_rat(const nlohmann::json& v, const char* what) {
    if (v.is_number_integer()) return Rat(Int(v.get<long>()));
    if (v.is_string()) {
        Rat r;
        if (r.set_str(v.get<std::string>(), 10) != 0)
            throw UsageError(std::string("field file: bad rational in ") + what);
        r.canonicalize();
        return r;
    }
    throw UsageError(std::string("field file: expected integer or \"a/b\" string in ") + what);
}

std::vector<std::vector<Rat>> parse_rat_matrix(const nlohmann::json& v, const char* what) {
    std::vector<std::vector<Rat>> out;
    if (!v.is_array()) throw UsageError(std::string("field file: expected array for ") + what);
    for (const auto& row : v) {
        if (!row.is_array()) throw UsageError(std::string("field file: expected array rows in ") + what);
        std::vector<Rat> r;
        for (const auto& x : row) r.push_back(parse_rat(x, what));
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

FieldSpec build_field(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw UsageError(std::string("field file: JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind")) throw UsageError("field file: missing \"kind\"");
    std::string kind = j["kind"].get<std::string>();
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* k : allowed) ok |= (it.key() == k);
            if (!ok) throw UsageError("field file: unknown key \"" + it.key() + "\"");
        }
    };
    if (kind == "quadratic") {
        check_keys({"kind", "d"});
        if (!j.contains("d")) throw UsageError("field file: quadratic needs \"d\"");
        return make_quadratic(j["d"].get<long>());
    }
    if (kind == "cyclotomic") {
        check_keys({"kind", "m"});
        if (!j.contains("m")) throw UsageError("field file: cyclotomic needs \"m\"");
        return make_cyclotomic(j["m"].get<long>());
    }
    if (kind == "custom") {
        check_keys({"kind", "min_poly", "integral_basis", "units"});
        if (!j.contains("min_poly")) throw UsageError("field file: custom needs \"min_poly\"");
        IntPoly f;
        for (const auto& c : j["min_poly"]) {
            if (c.is_number_integer()) f.push_back(Int(c.get<long>()));
            else if (c.is_string()) f.push_back(Int(c.get<std::string>()));
            else throw UsageError("field file: min_poly entries must be integers");
        }
        std::vector<std::vector<Rat>> basis, units;
        if (j.contains("integral_basis")) basis = parse_rat_matrix(j["integral_basis"], "integral_basis");
        if (j.contains("units")) units = parse_rat_matrix(j["units"], "units");
        return make_custom(f, std::move(basis), std::move(units));
    }
    throw UsageError("field file: kind must be quadratic, cyclotomic or custom");
}

FieldSpec build_field_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open field file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return build_field(ss.str());
}

namespace nf {

FieldElement element_one(const FieldSpec& K) { return element_int(K, 1); }

FieldElement element_int(const FieldSpec& K, const Int& n) {
    FieldElement e;
    e.coords.assign(static_cast<size_t>(K.degree), Rat(0));
    e.coords[0] = Rat(n);
    return e;
}

FieldElement element_gen(const FieldSpec& K) {
    FieldElement e;
    e.coords.assign(static_cast<size_t>(K.degree), Rat(0));
    e.coords[1] = 1;
    return e;
}

FieldElement from_coords(const FieldSpec& K, std::vector<Rat> coords) {
    if (static_cast<long>(coords.size()) != K.degree)
        throw UsageError("field element: wrong coordinate count");
    FieldElement e;
    e.coords = std::move(coords);
    return e;
}

FieldElement from_integral_basis_coords(const FieldSpec& K, const std::vector<Rat>& coords) {
    if (static_cast<long>(coords.size()) != K.degree)
        throw UsageError("field element: wrong coordinate count");
    std::vector<Rat> power(static_cast<size_t>(K.degree), Rat(0));
    for (long i = 0; i < K.degree; ++i)
        for (long j = 0; j < K.degree; ++j)
            power[static_cast<size_t>(j)] +=
                coords[static_cast<size_t>(i)] * K.integral_basis[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return from_coords(K, std::move(power));
}

FieldElement add(const FieldSpec& K, const FieldElement& a, const FieldElement& b) {
    FieldElement r = a;
    for (long i = 0; i < K.degree; ++i) r.coords[static_cast<size_t>(i)] += b.coords[static_cast<size_t>(i)];
    return r;
}

FieldElement sub(const FieldSpec& K, const FieldElement& a, const FieldElement& b) {
    FieldElement r = a;
    for (long i = 0; i < K.degree; ++i) r.coords[static_cast<size_t>(i)] -= b.coords[static_cast<size_t>(i)];
    return r;
}

FieldElement neg(const FieldElement& a) {
    FieldElement r = a;
    for (auto& c : r.coords) c = -c;
    return r;
}

FieldElement mul(const FieldSpec& K, const FieldElement& a, const FieldElement& b) {
    RatPoly pa(a.coords.begin(), a.coords.end());
    RatPoly pb(b.coords.begin(), b.coords.end());
    ratpoly::normalize(pa);
    ratpoly::normalize(pb);
    RatPoly prod = ratpoly::mul(pa, pb);
    RatPoly red = ratpoly::rem(prod, ratpoly::from_int(K.min_poly));
    std::vector<Rat> coords(static_cast<size_t>(K.degree), Rat(0));
    for (size_t i = 0; i < red.size(); ++i) coords[i] = red[i];
    return from_coords(K, std::move(coords));
}

FieldElement pow(const FieldSpec& K, const FieldElement& a, const Int& e) {
    if (e < 0) throw UsageError("field element pow: negative exponent (invert first)");
    FieldElement acc = element_one(K);
    FieldElement base = a;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = mul(K, acc, base);
        k >>= 1;
        if (k > 0) base = mul(K, base, base);
    }
    return acc;
}

bool equal(const FieldElement& a, const FieldElement& b) { return a.coords == b.coords; }

bool is_one(const FieldElement& a) {
    if (a.coords.empty() || a.coords[0] != 1) return false;
    for (size_t i = 1; i < a.coords.size(); ++i)
        if (a.coords[i] != 0) return false;
    return true;
}

namespace {

// Columns are coordinates of a * theta^j.
std::vector<std::vector<Rat>> mult_matrix(const FieldSpec& K, const FieldElement& a) {
    long n = K.degree;
    std::vector<std::vector<Rat>> M(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
    FieldElement cur = a;
    for (long j = 0; j < n; ++j) {
        for (long i = 0; i < n; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(j)] = cur.coords[static_cast<size_t>(i)];
        if (j + 1 < n) cur = mul(K, cur, element_gen(K));
    }
    return M;
}

} // namespace

Rat norm(const FieldSpec& K, const FieldElement& a) { return det_rat(mult_matrix(K, a)); }

Rat trace(const FieldSpec& K, const FieldElement& a) {
    auto M = mult_matrix(K, a);
    Rat t = 0;
    for (long i = 0; i < K.degree; ++i) t += M[static_cast<size_t>(i)][static_cast<size_t>(i)];
    return t;
}

FieldElement inverse(const FieldSpec& K, const FieldElement& a) {
    // Solve a * x = 1 by Gaussian elimination on the multiplication matrix.
    long n = K.degree;
    auto M = mult_matrix(K, a);
    std::vector<Rat> rhs(static_cast<size_t>(n), Rat(0));
    rhs[0] = 1;
    for (long k = 0; k < n; ++k) {
        long piv = -1;
        for (long i = k; i < n; ++i)
            if (M[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { piv = i; break; }
        if (piv < 0) throw UsageError("field element inverse: element is zero");
        std::swap(M[static_cast<size_t>(piv)], M[static_cast<size_t>(k)]);
        std::swap(rhs[static_cast<size_t>(piv)], rhs[static_cast<size_t>(k)]);
        for (long i = 0; i < n; ++i) {
            if (i == k || M[static_cast<size_t>(i)][static_cast<size_t>(k)] == 0) continue;
            Rat f = M[static_cast<size_t>(i)][static_cast<size_t>(k)] / M[static_cast<size_t>(k)][static_cast<size_t>(k)];
            for (long j = k; j < n; ++j)
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * M[static_cast<size_t>(k)][static_cast<size_t>(j)];
            rhs[static_cast<size_t>(i)] -= f * rhs[static_cast<size_t>(k)];
        }
    }
    std::vector<Rat> x(static_cast<size_t>(n));
    for (long k = 0; k < n; ++k) x[static_cast<size_t>(k)] = rhs[static_cast<size_t>(k)] / M[static_cast<size_t>(k)][static_cast<size_t>(k)];
    return from_coords(K, std::move(x));
}

std::string to_string(const FieldSpec& K, const FieldElement& a) {
    (void)K;
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < a.coords.size(); ++i) {
        if (i) os << ", ";
        os << a.coords[i].get_str();
    }
    os << "]";
    return os.str();
}

} // namespace nf

} // namespace klreg
