#include "ecl/ec.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_set>

#include "ecl/modring.hpp"

namespace ecl {

// ---------------------------------------------------------------- curves over Q

RationalCurve::RationalCurve(const std::array<mpq_class, 5>& a) : a_(a) {
    const auto& [a1, a2, a3, a4, a6] = a_;
    b2 = a1 * a1 + 4 * a2;
    b4 = 2 * a4 + a1 * a3;
    b6 = a3 * a3 + 4 * a6;
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4 = b2 * b2 - 24 * b4;
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    if (disc == 0) throw SingularCurve("singular model " + str());
    j = c4 * c4 * c4 / disc;
}

RationalCurve RationalCurve::from_coeffs(const std::array<mpq_class, 5>& a) { return RationalCurve(a); }

RationalCurve RationalCurve::short_form(const mpq_class& A, const mpq_class& B) {
    return RationalCurve({mpq_class(0), mpq_class(0), mpq_class(0), A, B});
}

RationalCurve RationalCurve::parse(std::string_view text) {
    std::vector<mpq_class> parts;
    std::string s(text);
    std::stringstream in(s);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        piece.erase(std::remove_if(piece.begin(), piece.end(), [](char c) { return c == ' ' || c == '[' || c == ']'; }),
                    piece.end());
        parts.push_back(parse_rational(piece));
    }
    if (parts.size() == 2) return short_form(parts[0], parts[1]);
    if (parts.size() == 5) return from_coeffs({parts[0], parts[1], parts[2], parts[3], parts[4]});
    throw std::invalid_argument("curve needs 5 coefficients or the short form A,B: '" + s + "'");
}

bool RationalCurve::is_integral() const {
    return std::all_of(a_.begin(), a_.end(), [](const mpq_class& q) { return q.get_den() == 1; });
}

bool RationalCurve::has_good_reduction(std::uint64_t ell) const {
    for (const auto& q : a_) {
        if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), ell)) return false;
    }
    return !mpz_divisible_ui_p(disc.get_num().get_mpz_t(), ell);
}

std::string RationalCurve::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (i > 0) out += ",";
        out += a_[i].get_str();
    }
    return out + "]";
}

RationalCurve quadratic_twist(const RationalCurve& e, const mpz_class& d) {
    if (d == 0) throw std::invalid_argument("twist by zero");
    const mpq_class dq(d);
    return RationalCurve::short_form(-27 * e.c4 * dq * dq, -54 * e.c6 * dq * dq * dq);
}

namespace {

std::optional<mpq_class> rational_root_k(const mpq_class& q, unsigned k) {
    if (q == 0) return mpq_class(0);
    if (q < 0 && k % 2 == 0) return std::nullopt;
    mpz_class num = abs(q.get_num()), den = q.get_den(), rn, rd;
    if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) == 0) return std::nullopt;
    if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k) == 0) return std::nullopt;
    mpq_class r(rn, rd);
    r.canonicalize();
    return q < 0 ? mpq_class(-r) : r;
}

}  // namespace

bool q_isomorphic(const RationalCurve& x, const RationalCurve& y) {
    if (x.j != y.j) return false;
    if (x.c4 == 0) {  // j = 0: c6' = u^6 c6
        return rational_root_k(y.c6 / x.c6, 6).has_value();
    }
    if (x.c6 == 0) {  // j = 1728: c4' = u^4 c4
        return rational_root_k(y.c4 / x.c4, 4).has_value();
    }
    const mpq_class u2 = (y.c6 / x.c6) / (y.c4 / x.c4);
    if (!is_rational_square(u2)) return false;
    return y.c4 == u2 * u2 * x.c4 && y.c6 == u2 * u2 * u2 * x.c6;
}

// ---------------------------------------------------------------- points over Q

std::string RationalPoint::str() const {
    if (infinity) return "O";
    return "(" + x.get_str() + "," + y.get_str() + ")";
}

bool on_curve(const RationalCurve& e, const RationalPoint& p) {
    if (p.infinity) return true;
    const auto& x = p.x;
    const auto& y = p.y;
    return y * y + e.a1() * x * y + e.a3() * y == x * x * x + e.a2() * x * x + e.a4() * x + e.a6();
}

RationalPoint negate(const RationalCurve& e, const RationalPoint& p) {
    if (p.infinity) return p;
    return {p.x, -p.y - e.a1() * p.x - e.a3(), false};
}

RationalPoint add(const RationalCurve& e, const RationalPoint& p, const RationalPoint& q) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    mpq_class lambda, nu;
    if (p.x == q.x) {
        if (p.y + q.y + e.a1() * q.x + e.a3() == 0) return RationalPoint::zero();
        const mpq_class den = 2 * p.y + e.a1() * p.x + e.a3();
        lambda = (3 * p.x * p.x + 2 * e.a2() * p.x + e.a4() - e.a1() * p.y) / den;
        nu = (-p.x * p.x * p.x + e.a4() * p.x + 2 * e.a6() - e.a3() * p.y) / den;
    } else {
        lambda = (q.y - p.y) / (q.x - p.x);
        nu = (p.y * q.x - q.y * p.x) / (q.x - p.x);
    }
    RationalPoint r;
    r.x = lambda * lambda + e.a1() * lambda - e.a2() - p.x - q.x;
    r.y = -(lambda + e.a1()) * r.x - nu - e.a3();
    return r;
}

unsigned point_order(const RationalCurve& e, const RationalPoint& p, unsigned cap) {
    RationalPoint acc = p;
    for (unsigned k = 1; k <= cap; ++k) {
        if (acc.infinity) return k;
        acc = add(e, acc, p);
    }
    return 0;
}

// ---------------------------------------------------------------- reduction mod ell

BadReduction::BadReduction(std::uint64_t p)
    : std::runtime_error("bad reduction at " + std::to_string(p)), ell(p) {}

namespace {

using i64 = std::int64_t;

i64 mod_of(const mpq_class& q, i64 ell) {
    const auto num = static_cast<i64>(mpz_fdiv_ui(q.get_num().get_mpz_t(), static_cast<unsigned long>(ell)));
    const auto den = static_cast<i64>(mpz_fdiv_ui(q.get_den().get_mpz_t(), static_cast<unsigned long>(ell)));
    return num * *inverse_mod(den, ell) % ell;
}

i64 powmod(i64 b, i64 e, i64 m) {
    i64 r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// Square root of a quadratic residue mod an odd prime (Tonelli-Shanks).
i64 sqrt_mod(i64 a, i64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        i64 i = 0, t2 = t;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        i64 b = c;
        for (i64 k = 0; k < m - i - 1; ++k) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

struct FpPoint {
    i64 x = 0, y = 0;
    bool inf = true;
};

struct CurveFp {
    i64 p;
    i64 a1, a2, a3, a4, a6;

    i64 inv(i64 v) const { return *inverse_mod(v, p); }
    i64 md(i64 v) const { return floor_mod(v, p); }

    FpPoint add(const FpPoint& P, const FpPoint& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        i64 lambda, nu;
        if (P.x == Q.x) {
            const i64 den = md(2 * P.y + a1 * P.x + a3);
            if (md(P.y + Q.y + a1 * Q.x + a3) == 0) return {};
            const i64 di = inv(den);
            lambda = md(md(3 * P.x % p * P.x + 2 * a2 * P.x + a4 - a1 * P.y) * di);
            nu = md(md(-P.x * P.x % p * P.x + a4 * P.x + 2 * a6 - a3 * P.y) * di);
        } else {
            const i64 di = inv(md(Q.x - P.x));
            lambda = md(md(Q.y - P.y) * di);
            nu = md(md(P.y * Q.x - Q.y * P.x) * di);
        }
        FpPoint r;
        r.inf = false;
        r.x = md(lambda * lambda + a1 * lambda - a2 - P.x - Q.x);
        r.y = md(-(lambda + a1) % p * r.x - nu - a3);
        return r;
    }

    FpPoint mul(FpPoint P, std::uint64_t k) const {
        FpPoint acc;
        while (k > 0) {
            if (k & 1U) acc = add(acc, P);
            k >>= 1U;
            if (k > 0) P = add(P, P);
        }
        return acc;
    }

    std::vector<FpPoint> all_points() const {
        std::vector<FpPoint> out{FpPoint{}};
        for (i64 x = 0; x < p; ++x) {
            for (i64 y = 0; y < p; ++y) {
                if (md(y * y + a1 * x * y + a3 * y - (x * x % p * x + a2 * x * x + a4 * x + a6)) == 0) {
                    out.push_back({x, y, false});
                }
            }
        }
        return out;
    }

    // 4x^3 + b2 x^2 + 2 b4 x + b6 = (2y + a1 x + a3)^2
    i64 rhs(i64 x, i64 b2, i64 b4, i64 b6) const {
        return md(((4 * x + b2) % p * x % p + 2 * b4) % p * x + b6);
    }

    FpPoint random_point(std::mt19937_64& rng) const {
        if (p == 2) {
            const auto pts = all_points();
            return pts[rng() % pts.size()];
        }
        const i64 b2 = md(a1 * a1 + 4 * a2), b4 = md(2 * a4 + a1 * a3), b6 = md(a3 * a3 + 4 * a6);
        const i64 half = inv(2);
        while (true) {
            const i64 x = static_cast<i64>(rng() % static_cast<std::uint64_t>(p));
            const i64 f = rhs(x, b2, b4, b6);
            if (f != 0 && powmod(f, (p - 1) / 2, p) != 1) continue;
            i64 s = sqrt_mod(f, p);
            if (rng() & 1U) s = md(-s);
            return {x, md((s - a1 * x - a3) % p * half), false};
        }
    }

    std::uint64_t encode(const FpPoint& P) const {
        return P.inf ? ~std::uint64_t{0} : static_cast<std::uint64_t>(P.x * p + P.y);
    }
    FpPoint decode(std::uint64_t c) const {
        if (c == ~std::uint64_t{0}) return {};
        return {static_cast<i64>(c / static_cast<std::uint64_t>(p)), static_cast<i64>(c % static_cast<std::uint64_t>(p)),
                false};
    }
};

CurveFp reduce_curve(const RationalCurve& e, std::uint64_t ell) {
    const i64 p = static_cast<i64>(ell);
    return {p, mod_of(e.a1(), p), mod_of(e.a2(), p), mod_of(e.a3(), p), mod_of(e.a4(), p), mod_of(e.a6(), p)};
}

std::uint64_t count_points(const CurveFp& c) {
    if (c.p == 2) return c.all_points().size();
    const i64 p = c.p;
    thread_local std::vector<signed char> chi;
    chi.assign(static_cast<std::size_t>(p), -1);
    chi[0] = 0;
    for (i64 y = 1; y <= p / 2; ++y) chi[static_cast<std::size_t>(y * y % p)] = 1;
    const i64 b2 = c.md(c.a1 * c.a1 + 4 * c.a2), b4 = c.md(2 * c.a4 + c.a1 * c.a3), b6 = c.md(c.a3 * c.a3 + 4 * c.a6);
    i64 sum = 0;
    for (i64 x = 0; x < p; ++x) sum += chi[static_cast<std::size_t>(c.rhs(x, b2, b4, b6))];
    return static_cast<std::uint64_t>(p + 1 + sum);
}

// (a, b) with the p-Sylow subgroup of E(F_ell) isomorphic to Z/p^a x Z/p^b.
std::pair<int, int> sylow_structure(const CurveFp& c, std::uint64_t n_points, std::uint64_t prime, int e,
                                    std::mt19937_64& rng) {
    const std::uint64_t target = ipow(prime, static_cast<unsigned>(e));
    const std::uint64_t cof = n_points / target;
    std::vector<std::uint64_t> elems{c.encode(FpPoint{})};
    std::unordered_set<std::uint64_t> members(elems.begin(), elems.end());
    int exponent = 0;
    while (elems.size() < target) {
        const FpPoint r = c.mul(c.random_point(rng), cof);
        if (members.count(c.encode(r))) continue;
        int k = 0;
        for (FpPoint t = r; !t.inf; t = c.mul(t, prime)) ++k;
        exponent = std::max(exponent, k);
        const std::size_t base = elems.size();
        FpPoint shift = r;
        while (!members.count(c.encode(shift))) {
            for (std::size_t i = 0; i < base; ++i) {
                const auto code = c.encode(c.add(shift, c.decode(elems[i])));
                if (members.insert(code).second) elems.push_back(code);
            }
            shift = c.add(shift, r);
        }
    }
    return {exponent, e - exponent};
}

}  // namespace

FrobData frobenius_data(const RationalCurve& e, std::uint64_t ell, bool want_structure, std::uint64_t seed) {
    if (!is_prime(ell)) throw std::invalid_argument(std::to_string(ell) + " is not prime");
    if (ell > kCountingBound) throw std::invalid_argument("prime above the naive counting bound");
    if (!e.has_good_reduction(ell)) throw BadReduction(ell);
    const CurveFp c = reduce_curve(e, ell);
    FrobData out;
    out.ell = ell;
    out.points = count_points(c);
    out.trace = static_cast<std::int64_t>(ell) + 1 - static_cast<std::int64_t>(out.points);
    if (want_structure) attach_structure(e, out, seed);
    return out;
}

void attach_structure(const RationalCurve& e, FrobData& data, std::uint64_t seed) {
    if (data.structure) return;
    const std::uint64_t ell = data.ell;
    const CurveFp c = reduce_curve(e, ell);
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::mt19937_64 rng(seed ^ (ell * 0x9e3779b97f4a7c15ULL) ^ static_cast<std::uint64_t>(attempt));
        std::uint64_t d1 = 1;
        for (const auto& [q, k] : factorize(data.points)) {
            if (k < 2 || (ell - 1) % q != 0) continue;
            const auto [a, b] = sylow_structure(c, data.points, q, k, rng);
            d1 *= ipow(q, static_cast<unsigned>(b));
        }
        const std::uint64_t d2 = data.points / d1;
        if (d2 % d1 == 0 && (ell - 1) % d1 == 0) {
            data.structure = std::make_pair(d1, d2);
            return;
        }
    }
    throw std::logic_error("group structure failed validation at " + std::to_string(ell));
}

// ---------------------------------------------------------------- division polynomials

QPoly division_polynomial(const RationalCurve& e, int n) {
    if (n < 2 || n > 16) throw std::invalid_argument("division polynomial level must be in 2..16");
    const QPoly x = QPoly::x();
    const auto k = [](const mpq_class& c) { return QPoly::constant(c); };
    const QPoly F = k(4) * x.pow(3) + k(e.b2) * x.pow(2) + k(2 * e.b4) * x + k(e.b6);
    const QPoly F2 = F * F;
    // g_m = psi_m for odd m and psi_m / psi_2 for even m.
    std::vector<QPoly> g(static_cast<std::size_t>(std::max(n, 4) + 3));
    g[0] = QPoly();
    g[1] = k(1);
    g[2] = k(1);
    g[3] = k(3) * x.pow(4) + k(e.b2) * x.pow(3) + k(3 * e.b4) * x.pow(2) + k(3 * e.b6) * x + k(e.b8);
    g[4] = k(2) * x.pow(6) + k(e.b2) * x.pow(5) + k(5 * e.b4) * x.pow(4) + k(10 * e.b6) * x.pow(3) +
           k(10 * e.b8) * x.pow(2) + k(e.b2 * e.b8 - e.b4 * e.b6) * x + k(e.b4 * e.b8 - e.b6 * e.b6);
    for (int i = 5; i <= n; ++i) {
        const auto idx = [](int v) { return static_cast<std::size_t>(v); };
        const int mm = i / 2;
        if (i % 2 == 1) {
            const QPoly& up = g[idx(mm + 2)];
            const QPoly& mid = g[idx(mm)];
            const QPoly& lo = g[idx(mm - 1)];
            const QPoly& hi = g[idx(mm + 1)];
            if (mm % 2 == 0) {
                g[idx(i)] = F2 * up * mid.pow(3) - lo * hi.pow(3);
            } else {
                g[idx(i)] = up * mid.pow(3) - F2 * lo * hi.pow(3);
            }
        } else {
            g[idx(i)] = g[idx(mm)] * (g[idx(mm + 2)] * g[idx(mm - 1)].pow(2) - g[idx(mm - 2)] * g[idx(mm + 1)].pow(2));
        }
    }
    const QPoly& gn = g[static_cast<std::size_t>(n)];
    return n % 2 == 1 ? gn : F * gn;
}

// ---------------------------------------------------------------- torsion over Q

TorsionSubgroup rational_torsion(const RationalCurve& e) {
    // Multiple of the torsion order from point counts at good odd primes.
    mpz_class bound = 0;
    int used = 0;
    for (std::uint64_t ell = 3; ell < 5000; ell += 2) {
        if (!is_prime(ell) || !e.has_good_reduction(ell)) continue;
        bound = gcd(bound, mpz_class(static_cast<unsigned long>(frobenius_data(e, ell, false).points)));
        if (++used >= 25 && bound <= 16) break;
    }
    TorsionSubgroup out;
    std::vector<RationalPoint> pts{RationalPoint::zero()};
    const unsigned t = static_cast<unsigned>(bound.get_ui());
    if (t > 1) {
        // Integral short model Y^2 = X^3 - 27 u^4 c4 X - 54 u^6 c6 where torsion is integral.
        const mpz_class u = lcm(e.c4.get_den(), e.c6.get_den());
        const mpq_class uq(u);
        const mpq_class A = -27 * e.c4 * uq * uq * uq * uq;
        const mpq_class B = -54 * e.c6 * uq * uq * uq * uq * uq * uq;
        const RationalCurve s = RationalCurve::short_form(A, B);
        for (const auto& X : integer_roots(division_polynomial(s, static_cast<int>(t)).primitive_integer())) {
            const mpq_class Xq(X);
            const auto Y = rational_sqrt(Xq * Xq * Xq + A * Xq + B);
            if (!Y) continue;
            for (const mpq_class& Yv : {*Y, mpq_class(-*Y)}) {
                const mpq_class x = (Xq / (uq * uq) - 3 * e.b2) / 36;
                const mpq_class y = (Yv / (108 * uq * uq * uq) - e.a1() * x - e.a3()) / 2;
                RationalPoint p{x, y, false};
                if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
            }
        }
    }
    std::sort(pts.begin(), pts.end(), [](const RationalPoint& a, const RationalPoint& b) {
        if (a.infinity != b.infinity) return a.infinity;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    std::vector<unsigned> orders;
    for (const auto& p : pts) orders.push_back(point_order(e, p, 16));
    const auto max_it = std::max_element(orders.begin(), orders.end());
    const std::size_t gi = static_cast<std::size_t>(max_it - orders.begin());
    const unsigned max_order = *max_it;
    std::vector<std::uint64_t> cyclic{max_order};
    if (max_order > 1) out.generators.push_back(pts[gi]);
    if (pts.size() > max_order) {
        // Z/2 x Z/2m: a 2-torsion point outside <generator>.
        std::vector<RationalPoint> span{RationalPoint::zero()};
        for (unsigned i = 1; i < max_order; ++i) span.push_back(add(e, span.back(), pts[gi]));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (orders[i] == 2 && std::find(span.begin(), span.end(), pts[i]) == span.end()) {
                out.generators.push_back(pts[i]);
                cyclic.push_back(2);
                break;
            }
        }
    }
    out.structure = AbelianInvariants::from_cyclic_orders(cyclic);
    out.points = std::move(pts);
    return out;
}

}  // namespace ecl
