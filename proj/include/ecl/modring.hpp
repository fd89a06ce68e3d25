#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#ifndef ECL_MODULUS_CEILING
#define ECL_MODULUS_CEILING 64
#endif

namespace ecl {

inline constexpr int kModulusCeiling = ECL_MODULUS_CEILING;
static_assert(kModulusCeiling >= 2 && kModulusCeiling <= 255, "element keys need N^4 < 2^32");

// Integer helpers used across the library.
std::int64_t floor_mod(std::int64_t a, std::int64_t n);
std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t n);
bool is_prime(std::uint64_t n);
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
std::uint64_t ipow(std::uint64_t base, unsigned exp);

// |GL(2, Z/NZ)|.
std::uint64_t gl2_order(int modulus);

// Residues that are units modulo n, ascending.
std::vector<int> unit_residues(int n);

class GL2Element {
public:
    // Entries are reduced into [0, N); throws std::invalid_argument when the
    // determinant is not a unit or the modulus is out of range.
    GL2Element(int modulus, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

    static GL2Element identity(int modulus);
    static GL2Element scalar(int modulus, std::int64_t s);
    // "a,b;c,d", whitespace ignored.
    static GL2Element parse(std::string_view text, int modulus);
    static GL2Element from_key(int modulus, std::uint32_t key);

    int modulus() const { return n_; }
    int a() const { return a_; }
    int b() const { return b_; }
    int c() const { return c_; }
    int d() const { return d_; }

    int det() const;
    int trace() const;
    bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }
    bool is_scalar() const { return b_ == 0 && c_ == 0 && a_ == d_; }

    // Mixed-radix packing of the entries; dense in [0, N^4).
    std::uint32_t key() const {
        return ((static_cast<std::uint32_t>(a_) * n_ + b_) * n_ + c_) * n_ + d_;
    }

    std::string str() const;

    friend bool operator==(const GL2Element&, const GL2Element&) = default;
    friend auto operator<=>(const GL2Element&, const GL2Element&) = default;

private:
    struct Unchecked {};
    GL2Element(Unchecked, int modulus, int a, int b, int c, int d)
        : n_(static_cast<std::int16_t>(modulus)), a_(static_cast<std::int16_t>(a)),
          b_(static_cast<std::int16_t>(b)), c_(static_cast<std::int16_t>(c)),
          d_(static_cast<std::int16_t>(d)) {}

    friend GL2Element compose(const GL2Element& x, const GL2Element& y);
    friend GL2Element inverse(const GL2Element& g);
    friend GL2Element reduce(const GL2Element& g, int m);

    std::int16_t n_, a_, b_, c_, d_;
};

struct CharPoly {
    int modulus;
    int trace;
    int det;

    friend bool operator==(const CharPoly&, const CharPoly&) = default;
    friend auto operator<=>(const CharPoly&, const CharPoly&) = default;
};

GL2Element compose(const GL2Element& x, const GL2Element& y);
inline GL2Element operator*(const GL2Element& x, const GL2Element& y) { return compose(x, y); }
GL2Element inverse(const GL2Element& g);
GL2Element power(const GL2Element& g, std::int64_t e);
GL2Element commutator(const GL2Element& x, const GL2Element& y);

std::uint64_t element_order(const GL2Element& g);
CharPoly charpoly(const GL2Element& g);

// Entrywise reduction to a divisor m >= 2 of the modulus.
GL2Element reduce(const GL2Element& g, int m);

// One reduction per maximal prime power dividing the modulus, by increasing prime.
std::vector<GL2Element> crt_decompose(const GL2Element& g);
// Inverse of crt_decompose for pairwise coprime component moduli.
GL2Element crt_combine(const std::vector<GL2Element>& parts);

// Every element of GL(2, Z/NZ) in key order.
std::vector<GL2Element> all_elements(int modulus);

}  // namespace ecl
