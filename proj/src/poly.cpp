#include "ecl/poly.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "ecl/modring.hpp"

namespace ecl {

mpq_class parse_rational(std::string_view text) {
    const auto first = text.find_first_not_of(" \t");
    const auto last = text.find_last_not_of(" \t");
    std::string s(first == std::string_view::npos ? std::string_view{} : text.substr(first, last - first + 1));
    auto valid = [](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size()) return false;
        return std::all_of(part.begin() + static_cast<long>(i), part.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    const auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+') {
        throw std::invalid_argument("not a rational number: '" + s + "'");
    }
    if (num[0] == '+') num.erase(0, 1);
    mpq_class q{mpz_class(num), mpz_class(den)};
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const mpq_class& q) { return q.get_str(); }
std::string to_string(const mpz_class& z) { return z.get_str(); }

// ---------------------------------------------------------------- factoring

namespace {

mpz_class pollard_brent(const mpz_class& n, std::mt19937_64& rng) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    while (true) {
        mpz_class y = rng() % n, c = rng() % (n - 1) + 1, g = 1, q = 1, x, ys;
        const unsigned long m = 128;
        unsigned long r = 1;
        auto step = [&](mpz_class& v) {
            v = (v * v + c) % n;
        };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) step(y);
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    step(y);
                    q = (q * abs(x - y)) % n;
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                step(ys);
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(const mpz_class& n, std::vector<mpz_class>& primes, std::mt19937_64& rng) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
        primes.push_back(n);
        return;
    }
    const mpz_class d = pollard_brent(n, rng);
    factor_into(d, primes, rng);
    factor_into(n / d, primes, rng);
}

}  // namespace

std::vector<std::pair<mpz_class, unsigned>> factor_integer(const mpz_class& n) {
    if (n == 0) throw std::invalid_argument("factor_integer: zero");
    mpz_class rest = abs(n);
    std::vector<mpz_class> primes;
    for (unsigned long p = 2; p < 10'000 && rest > 1; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            primes.emplace_back(p);
            rest /= p;
        }
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    factor_into(rest, primes, rng);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<mpz_class, unsigned>> out;
    for (const auto& p : primes) {
        if (!out.empty() && out.back().first == p) {
            ++out.back().second;
        } else {
            out.emplace_back(p, 1);
        }
    }
    return out;
}

std::vector<mpz_class> divisors_of(const mpz_class& n, std::size_t limit) {
    const auto fac = factor_integer(n);
    std::size_t count = 1;
    for (const auto& [p, e] : fac) {
        count *= e + 1;
        if (count > limit) throw std::runtime_error("too many divisors of " + n.get_str());
    }
    std::vector<mpz_class> out{1};
    for (const auto& [p, e] : fac) {
        const std::size_t base = out.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    const mpz_class& a = q.get_num();
    const mpz_class& b = q.get_den();
    if (!mpz_perfect_square_p(a.get_mpz_t()) || !mpz_perfect_square_p(b.get_mpz_t())) {
        return std::nullopt;
    }
    return mpq_class(sqrt(a), sqrt(b));
}

bool is_rational_square(const mpq_class& q) { return rational_sqrt(q).has_value(); }

// ---------------------------------------------------------------- QPoly

QPoly::QPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly QPoly::constant(const mpq_class& c) { return QPoly({c}); }
QPoly QPoly::x() { return QPoly({mpq_class(0), mpq_class(1)}); }

QPoly QPoly::from_descending(const std::vector<long long>& coeffs) {
    std::vector<mpq_class> c;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) c.emplace_back(mpz_class(std::to_string(*it)));
    return QPoly(std::move(c));
}

void QPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class QPoly::coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : mpq_class(0);
}

mpq_class QPoly::leading() const { return c_.empty() ? mpq_class(0) : c_.back(); }

mpq_class QPoly::operator()(const mpq_class& t) const {
    mpq_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

QPoly QPoly::derivative() const {
    std::vector<mpq_class> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
    return QPoly(std::move(d));
}

QPoly QPoly::pow(unsigned e) const {
    QPoly result = constant(1), base = *this;
    while (e > 0) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e > 0) base *= base;
    }
    return result;
}

std::vector<mpz_class> QPoly::primitive_integer() const {
    if (c_.empty()) return {};
    mpz_class den = 1;
    for (const auto& a : c_) den = lcm(den, a.get_den());
    std::vector<mpz_class> out;
    mpz_class content = 0;
    for (const auto& a : c_) {
        mpq_class scaled = a * den;
        out.push_back(scaled.get_num());
        content = gcd(content, scaled.get_num());
    }
    if (out.back() < 0) content = -content;
    for (auto& a : out) a /= content;
    return out;
}

std::string QPoly::str(char var) const {
    if (c_.empty()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const mpq_class& a = c_[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        const bool neg = a < 0;
        const mpq_class mag = abs(a);
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        const bool unit = mag == 1;
        if (!unit || i == 0) out += mag.get_str();
        if (i > 0) {
            if (!unit) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

QPoly& QPoly::operator+=(const QPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

QPoly& QPoly::operator*=(const QPoly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<mpq_class> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(r);
    trim();
    return *this;
}

QPoly& QPoly::operator*=(const mpq_class& s) {
    for (auto& a : c_) a *= s;
    trim();
    return *this;
}

// ---------------------------------------------------------------- roots

namespace {

std::int64_t eval_mod(const std::vector<std::int64_t>& f, std::int64_t x, std::int64_t p) {
    std::int64_t acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * x + *it) % p;
    return acc;
}

mpz_class eval_exact(const std::vector<mpz_class>& f, const mpz_class& x) {
    mpz_class acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Quotient and remainder of polynomial division over Q (low degree first).
std::pair<std::vector<mpq_class>, std::vector<mpq_class>> divmod(std::vector<mpq_class> a, const std::vector<mpq_class>& b) {
    std::vector<mpq_class> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (!a.empty() && a.size() >= b.size()) {
        const mpq_class c = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return {q, a};
}

// f / gcd(f, f'), same roots each with multiplicity one.
std::vector<mpz_class> squarefree_part(const std::vector<mpz_class>& f) {
    std::vector<mpq_class> a(f.begin(), f.end()), b;
    for (std::size_t i = 1; i < f.size(); ++i) b.emplace_back(f[i] * static_cast<long>(i));
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.size() <= 1) return f;
    return QPoly(divmod(std::vector<mpq_class>(f.begin(), f.end()), a).first).primitive_integer();
}

}  // namespace

std::vector<mpz_class> integer_roots(const std::vector<mpz_class>& poly_in) {
    std::vector<mpz_class> f = poly_in;
    while (!f.empty() && f.back() == 0) f.pop_back();
    if (f.empty()) throw std::invalid_argument("integer_roots: zero polynomial");
    std::vector<mpz_class> roots;
    // Strip the root 0 first.
    std::size_t shift = 0;
    while (shift < f.size() && f[shift] == 0) ++shift;
    if (shift > 0) {
        roots.emplace_back(0);
        f.erase(f.begin(), f.begin() + static_cast<long>(shift));
    }
    if (f.size() <= 1) return roots;
    f = squarefree_part(f);

    // Cauchy bound on |root|.
    mpz_class bound = 0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) { const mpz_class a = abs(f[i]); if (a > bound) bound = a; }
    bound = bound / abs(f.back()) + 2;

    std::vector<mpz_class> df;
    for (std::size_t i = 1; i < f.size(); ++i) df.push_back(f[i] * static_cast<long>(i));

    // Find a prime where the leading coefficient survives and every root mod p is simple.
    for (std::int64_t p = 3; p < 1'000'000; p += 2) {
        if (!is_prime(p)) continue;
        if (mpz_divisible_ui_p(f.back().get_mpz_t(), static_cast<unsigned long>(p))) continue;
        std::vector<std::int64_t> fp, dfp;
        for (const auto& a : f) fp.push_back(mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(p)));
        for (const auto& a : df) dfp.push_back(mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(p)));
        std::vector<std::int64_t> residues;
        bool simple = true;
        for (std::int64_t r = 0; r < p && simple; ++r) {
            if (eval_mod(fp, r, p) != 0) continue;
            if (eval_mod(dfp, r, p) == 0) simple = false;
            residues.push_back(r);
        }
        if (!simple) continue;
        // Hensel lift each simple root until the modulus exceeds twice the bound.
        mpz_class modulus = p;
        std::vector<mpz_class> lifted(residues.begin(), residues.end());
        while (modulus <= 2 * bound) {
            const mpz_class next = modulus * modulus;
            for (auto& r : lifted) {
                const mpz_class fr = eval_exact(f, r);
                const mpz_class dfr = eval_exact(df, r);
                mpz_class inv;
                mpz_invert(inv.get_mpz_t(), dfr.get_mpz_t(), next.get_mpz_t());
                r = r - fr * inv;
                mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), next.get_mpz_t());
            }
            modulus = next;
        }
        for (auto r : lifted) {
            if (2 * r > modulus) r -= modulus;
            if (eval_exact(f, r) == 0) roots.push_back(r);
        }
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    throw std::runtime_error("integer_roots: no suitable prime below 10^6");
}

RationalRootSearch rational_roots(const std::vector<mpz_class>& poly_in, std::size_t divisor_limit) {
    std::vector<mpz_class> f = poly_in;
    while (!f.empty() && f.back() == 0) f.pop_back();
    if (f.empty()) throw std::invalid_argument("rational_roots: zero polynomial");
    RationalRootSearch out;
    std::size_t shift = 0;
    while (shift < f.size() && f[shift] == 0) ++shift;
    if (shift > 0) {
        out.roots.emplace_back(0);
        f.erase(f.begin(), f.begin() + static_cast<long>(shift));
    }
    if (f.size() <= 1) return out;

    const auto nums = divisors_of(f.front(), divisor_limit);
    const auto dens = divisors_of(f.back(), divisor_limit);
    // Cheap modular filter before exact evaluation.
    constexpr unsigned long kFilter[] = {1'000'003UL, 998'244'353UL};
    std::vector<std::vector<unsigned long>> fmods;
    for (unsigned long m : kFilter) {
        std::vector<unsigned long> fm;
        for (const auto& a : f) fm.push_back(mpz_fdiv_ui(a.get_mpz_t(), m));
        fmods.push_back(std::move(fm));
    }
    auto passes_filter = [&](const mpz_class& a, const mpz_class& b) {
        for (std::size_t k = 0; k < fmods.size(); ++k) {
            const unsigned long m = kFilter[k];
            const unsigned long bm = mpz_fdiv_ui(b.get_mpz_t(), m);
            if (bm == 0) continue;
            const unsigned long am = mpz_fdiv_ui(a.get_mpz_t(), m);
            // Homogenized evaluation: sum f_i a^i b^(n-i).
            const std::size_t n = fmods[k].size() - 1;
            unsigned __int128 total = 0, apow = 1;
            std::vector<unsigned __int128> bpow(n + 1, 1);
            for (std::size_t i = 1; i <= n; ++i) bpow[i] = bpow[i - 1] * bm % m;
            for (std::size_t i = 0; i <= n; ++i) {
                total = (total + static_cast<unsigned __int128>(fmods[k][i]) * apow % m * bpow[n - i]) % m;
                apow = apow * am % m;
            }
            if (total != 0) return false;
        }
        return true;
    };
    const std::size_t deg = f.size() - 1;
    for (const auto& b : dens) {
        for (const auto& a0 : nums) {
            if (gcd(a0, b) != 1) continue;
            for (int sign : {1, -1}) {
                const mpz_class a = sign * a0;
                ++out.candidates_tested;
                if (!passes_filter(a, b)) continue;
                // Exact homogenized evaluation.
                mpz_class total = 0, apow = 1, bpow;
                mpz_pow_ui(bpow.get_mpz_t(), b.get_mpz_t(), deg);
                for (std::size_t i = 0; i <= deg; ++i) {
                    total += f[i] * apow * bpow;
                    apow *= a;
                    if (i < deg) bpow /= b;
                }
                if (total == 0) out.roots.emplace_back(a, b);
            }
        }
    }
    for (auto& r : out.roots) r.canonicalize();
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
    return out;
}

}  // namespace ecl
