#include "ecl/modring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace ecl {

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t n) {
    std::int64_t r0 = n, r1 = floor_mod(a, n), s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
    }
    if (r0 != 1) {
        return n == 1 ? std::optional<std::int64_t>{0} : std::nullopt;
    }
    return floor_mod(s0, n);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        if (n % p == 0) return n == p;
    }
    for (std::uint64_t d = 17; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t base = out.size();
        std::uint64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

std::uint64_t gl2_order(int modulus) {
    std::uint64_t order = 1;
    for (auto [p, k] : factorize(static_cast<std::uint64_t>(modulus))) {
        order *= p * (p - 1) * (p * p - 1) * ipow(p, 4 * (k - 1));
    }
    return order;
}

std::vector<int> unit_residues(int n) {
    std::vector<int> out;
    for (int r = 0; r < n; ++r) {
        if (std::gcd(r, n) == 1) out.push_back(r);
    }
    if (n == 1) out.push_back(0);
    return out;
}

namespace {

void check_modulus(int modulus) {
    if (modulus < 2 || modulus > kModulusCeiling) {
        throw std::invalid_argument("modulus " + std::to_string(modulus) + " outside [2, " +
                                    std::to_string(kModulusCeiling) + "]");
    }
}

}  // namespace

GL2Element::GL2Element(int modulus, std::int64_t a, std::int64_t b, std::int64_t c,
                       std::int64_t d) {
    check_modulus(modulus);
    n_ = static_cast<std::int16_t>(modulus);
    a_ = static_cast<std::int16_t>(floor_mod(a, modulus));
    b_ = static_cast<std::int16_t>(floor_mod(b, modulus));
    c_ = static_cast<std::int16_t>(floor_mod(c, modulus));
    d_ = static_cast<std::int16_t>(floor_mod(d, modulus));
    if (std::gcd(det(), modulus) != 1) {
        throw std::invalid_argument("matrix " + str() + " is not invertible mod " +
                                    std::to_string(modulus));
    }
}

GL2Element GL2Element::identity(int modulus) { return GL2Element(modulus, 1, 0, 0, 1); }

GL2Element GL2Element::scalar(int modulus, std::int64_t s) {
    return GL2Element(modulus, s, 0, 0, s);
}

GL2Element GL2Element::parse(std::string_view text, int modulus) {
    std::string compact;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
    }
    std::int64_t v[4];
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        const char* first = compact.data() + pos;
        const char* last = compact.data() + compact.size();
        if (first < last && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v[i]);
        if (ec != std::errc{}) {
            throw std::invalid_argument("bad matrix text '" + std::string(text) + "'");
        }
        pos = static_cast<std::size_t>(ptr - compact.data());
        const char expected = i == 0 || i == 2 ? ',' : (i == 1 ? ';' : '\0');
        if (expected == '\0') {
            if (pos != compact.size()) {
                throw std::invalid_argument("trailing text in matrix '" + std::string(text) + "'");
            }
        } else {
            if (pos >= compact.size() || compact[pos] != expected) {
                throw std::invalid_argument("bad matrix text '" + std::string(text) +
                                            "', expected a,b;c,d");
            }
            ++pos;
        }
    }
    return GL2Element(modulus, v[0], v[1], v[2], v[3]);
}

GL2Element GL2Element::from_key(int modulus, std::uint32_t key) {
    const std::uint32_t n = static_cast<std::uint32_t>(modulus);
    const int d = static_cast<int>(key % n);
    key /= n;
    const int c = static_cast<int>(key % n);
    key /= n;
    const int b = static_cast<int>(key % n);
    key /= n;
    return GL2Element(modulus, key, b, c, d);
}

int GL2Element::det() const {
    return static_cast<int>(floor_mod(static_cast<std::int64_t>(a_) * d_ - b_ * c_, n_));
}

int GL2Element::trace() const { return (a_ + d_) % n_; }

std::string GL2Element::str() const {
    return std::to_string(a_) + "," + std::to_string(b_) + ";" + std::to_string(c_) + "," +
           std::to_string(d_);
}

GL2Element compose(const GL2Element& x, const GL2Element& y) {
    if (x.n_ != y.n_) {
        throw std::invalid_argument("modulus mismatch: " + std::to_string(x.n_) + " vs " +
                                    std::to_string(y.n_));
    }
    const int n = x.n_;
    return GL2Element(GL2Element::Unchecked{}, n, (x.a_ * y.a_ + x.b_ * y.c_) % n,
                      (x.a_ * y.b_ + x.b_ * y.d_) % n, (x.c_ * y.a_ + x.d_ * y.c_) % n,
                      (x.c_ * y.b_ + x.d_ * y.d_) % n);
}

GL2Element inverse(const GL2Element& g) {
    const int n = g.n_;
    const int di = static_cast<int>(*inverse_mod(g.det(), n));
    return GL2Element(GL2Element::Unchecked{}, n, g.d_ * di % n, (n - g.b_) % n * di % n,
                      (n - g.c_) % n * di % n, g.a_ * di % n);
}

GL2Element power(const GL2Element& g, std::int64_t e) {
    GL2Element base = e < 0 ? inverse(g) : g;
    std::uint64_t k = static_cast<std::uint64_t>(e < 0 ? -e : e);
    GL2Element acc = GL2Element::identity(g.modulus());
    while (k > 0) {
        if (k & 1U) acc = acc * base;
        base = base * base;
        k >>= 1U;
    }
    return acc;
}

GL2Element commutator(const GL2Element& x, const GL2Element& y) {
    return x * y * inverse(x) * inverse(y);
}

std::uint64_t element_order(const GL2Element& g) {
    std::uint64_t order = gl2_order(g.modulus());
    for (auto [p, e] : factorize(order)) {
        for (int i = 0; i < e; ++i) {
            if (!power(g, static_cast<std::int64_t>(order / p)).is_identity()) break;
            order /= p;
        }
    }
    return order;
}

CharPoly charpoly(const GL2Element& g) { return {g.modulus(), g.trace(), g.det()}; }

GL2Element reduce(const GL2Element& g, int m) {
    if (m < 2 || g.n_ % m != 0) {
        throw std::invalid_argument(std::to_string(m) + " does not divide modulus " +
                                    std::to_string(g.n_));
    }
    return GL2Element(GL2Element::Unchecked{}, m, g.a_ % m, g.b_ % m, g.c_ % m, g.d_ % m);
}

std::vector<GL2Element> crt_decompose(const GL2Element& g) {
    std::vector<GL2Element> out;
    for (auto [p, k] : factorize(static_cast<std::uint64_t>(g.modulus()))) {
        out.push_back(reduce(g, static_cast<int>(ipow(p, k))));
    }
    return out;
}

GL2Element crt_combine(const std::vector<GL2Element>& parts) {
    if (parts.empty()) throw std::invalid_argument("crt_combine needs at least one part");
    std::int64_t n = 1;
    for (const auto& x : parts) {
        if (std::gcd(n, static_cast<std::int64_t>(x.modulus())) != 1) {
            throw std::invalid_argument("crt_combine needs coprime moduli");
        }
        n *= x.modulus();
    }
    std::int64_t e[4] = {0, 0, 0, 0};
    for (const auto& x : parts) {
        const std::int64_t m = x.modulus();
        const std::int64_t rest = n / m;
        const std::int64_t lift = rest * *inverse_mod(rest % m, m);
        const int entries[4] = {x.a(), x.b(), x.c(), x.d()};
        for (int i = 0; i < 4; ++i) e[i] = (e[i] + entries[i] * lift) % n;
    }
    return GL2Element(static_cast<int>(n), e[0], e[1], e[2], e[3]);
}

std::vector<GL2Element> all_elements(int modulus) {
    check_modulus(modulus);
    std::vector<GL2Element> out;
    out.reserve(gl2_order(modulus));
    for (int a = 0; a < modulus; ++a)
        for (int b = 0; b < modulus; ++b)
            for (int c = 0; c < modulus; ++c)
                for (int d = 0; d < modulus; ++d) {
                    if (std::gcd(floor_mod(static_cast<std::int64_t>(a) * d - b * c, modulus),
                                 static_cast<std::int64_t>(modulus)) == 1) {
                        out.push_back(GL2Element(modulus, a, b, c, d));
                    }
                }
    return out;
}

}  // namespace ecl
