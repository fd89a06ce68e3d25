// Randomized property checks, 1000 cases each with a fixed seed.
#include <doctest.h>

#include <cmath>
#include <random>

#include "ecl/ec.hpp"
#include "ecl/menagerie.hpp"
#include "ecl/probe.hpp"
#include "oracles.hpp"

using namespace ecl;

namespace {

constexpr int kCases = 1000;

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (auto p = lo; p <= hi; ++p) {
        if (is_prime(p)) out.push_back(p);
    }
    return out;
}

// Nonsingular short Weierstrass curve with small coefficients.
RationalCurve random_curve(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-60, 60);
    for (;;) {
        const int a = coef(rng), b = coef(rng);
        if (4 * a * a * a + 27 * b * b != 0) return RationalCurve::parse(std::to_string(a) + "," + std::to_string(b));
    }
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

GL2Element random_element(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> entry(0, n - 1);
    for (;;) {
        const int a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
        if (std::gcd(floor_mod(static_cast<std::int64_t>(a) * d - static_cast<std::int64_t>(b) * c, n), std::int64_t{n}) == 1) {
            return GL2Element(n, a, b, c, d);
        }
    }
}

}  // namespace

TEST_SUITE("properties") {
    TEST_CASE("Hasse bound") {
        std::mt19937_64 rng(101);
        const auto primes = primes_between(5, 5000);
        int checked = 0;
        while (checked < kCases) {
            const auto e = random_curve(rng);
            const auto ell = pick(rng, primes);
            if (!e.has_good_reduction(ell)) continue;
            const auto f = frobenius_data(e, ell, false);
            CAPTURE(e.str());
            CAPTURE(ell);
            REQUIRE(static_cast<double>(f.trace * f.trace) <= 4.0 * static_cast<double>(ell));
            REQUIRE(f.points + static_cast<std::uint64_t>(f.trace) == ell + 1);
            if (ell < 300) {
                REQUIRE(oracle::points(oracle::reduce_curve(e, static_cast<long>(ell))).size() == f.points);
            }
            ++checked;
        }
    }

    TEST_CASE("group structure d1 | d2 and d1 | ell - 1") {
        std::mt19937_64 rng(202);
        const auto primes = primes_between(5, 3000);
        int checked = 0;
        while (checked < kCases) {
            const auto e = random_curve(rng);
            const auto ell = pick(rng, primes);
            if (!e.has_good_reduction(ell)) continue;
            const auto f = frobenius_data(e, ell, true, rng());
            REQUIRE(f.structure.has_value());
            const auto [d1, d2] = *f.structure;
            CAPTURE(e.str());
            CAPTURE(ell);
            REQUIRE(d2 % d1 == 0);
            REQUIRE(d1 * d2 == f.points);
            REQUIRE((ell - 1) % d1 == 0);
            if (ell < 150) {
                const auto c = oracle::reduce_curve(e, static_cast<long>(ell));
                REQUIRE(oracle::group_exponent(c, oracle::points(c)) == static_cast<long>(d2));
            }
            ++checked;
        }
    }

    TEST_CASE("reduction is a homomorphism") {
        std::mt19937_64 rng(303);
        const std::vector<int> moduli{4, 6, 8, 9, 10, 12, 15, 16, 18, 20, 24, 25, 27, 30, 32, 36, 48, 60, 64};
        for (int i = 0; i < kCases; ++i) {
            const int n = pick(rng, moduli);
            std::vector<int> ds;
            for (int d = 2; d < n; ++d) {
                if (n % d == 0) ds.push_back(d);
            }
            const int m = pick(rng, ds);
            const auto x = random_element(rng, n), y = random_element(rng, n);
            REQUIRE(reduce(x * y, m) == reduce(x, m) * reduce(y, m));
            REQUIRE(reduce(inverse(x), m) == inverse(reduce(x, m)));
            REQUIRE(crt_combine(crt_decompose(x)) == x);
        }
    }

    TEST_CASE("Frobenius determinant is ell") {
        std::mt19937_64 rng(404);
        ProbeOptions o;
        o.bound = 1500;
        o.enumeration.cache_dir = resolve_cache_dir(std::nullopt);
        int checked = 0;
        while (checked < kCases) {
            const auto e = random_curve(rng);
            const int n = pick(rng, std::vector<int>{3, 4, 5});
            const auto img = probe_image(e, n, o);
            for (const auto& [sig, primes] : img.observed) {
                for (auto ell : primes) {
                    CAPTURE(e.str());
                    CAPTURE(ell);
                    REQUIRE(sig.det == static_cast<int>(ell % static_cast<std::uint64_t>(n)));
                    const auto f = frobenius_data(e, ell, false);
                    REQUIRE(sig.trace == static_cast<int>(floor_mod(f.trace, n)));
                    ++checked;
                }
            }
        }
    }

    TEST_CASE("classification is invariant under conjugation") {
        std::mt19937_64 rng(505);
        const std::vector<int> primes{2, 3, 5, 7};
        for (int i = 0; i < kCases; ++i) {
            const int p = pick(rng, primes);
            const int gens = std::uniform_int_distribution<int>(1, 2)(rng);
            std::vector<GL2Element> g;
            for (int k = 0; k < gens; ++k) g.push_back(random_element(rng, p));
            const auto h = generate_subgroup(p, g);
            const auto w = random_element(rng, p);
            const auto c = conjugate(h, w);
            CAPTURE(p);
            REQUIRE(c.order() == h.order());
            REQUIRE(classify_subgroup(c) == classify_subgroup(h));
            REQUIRE(is_admissible(c) == is_admissible(h));
        }
    }
}
