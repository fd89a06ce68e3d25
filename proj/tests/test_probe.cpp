#include <doctest.h>

#include <algorithm>

#include "ecl/menagerie.hpp"
#include "ecl/probe.hpp"
#include "oracles.hpp"

using namespace ecl;

namespace {

ProbeOptions opts(std::uint64_t bound) {
    ProbeOptions o;
    o.bound = bound;
    o.enumeration.cache_dir = resolve_cache_dir(std::nullopt);
    return o;
}

// Good primes ell <= bound, ell not dividing n, where all n^2 points of E[n]
// are F_ell-rational, by naive enumeration.
std::vector<std::uint64_t> split_brute(const RationalCurve& e, long n, std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t ell = 3; ell <= bound; ++ell) {
        if (!is_prime(ell) || n % static_cast<long>(ell) == 0 || !e.has_good_reduction(ell)) continue;
        const auto c = oracle::reduce_curve(e, static_cast<long>(ell));
        if (oracle::torsion_count(c, oracle::points(c), n) == n * n) out.push_back(ell);
    }
    return out;
}

}  // namespace

TEST_SUITE("probe") {
    TEST_CASE("split sets agree with naive torsion counts") {
        struct Row {
            const char* curve;
            int n;
        };
        for (const auto& r : {Row{"0,0,0,13,-34", 2}, Row{"0,0,0,13,-34", 4}, Row{"0,0,1,-1,0", 2},
                              Row{"0,0,1,-1,0", 3}, Row{"0,0,0,405,-9882", 3}, Row{"1,0,1,4,-6", 6}}) {
            CAPTURE(r.curve);
            CAPTURE(r.n);
            const auto e = RationalCurve::parse(r.curve);
            const auto s = split_set(e, r.n, opts(400));
            CHECK(s.primes == split_brute(e, r.n, 400));
            for (auto ell : s.primes) CHECK(ell % r.n == 1);
        }
    }

    TEST_CASE("level 1 keeps every good prime") {
        const auto e = RationalCurve::parse("0,0,1,-1,0");
        const auto s = split_set(e, 1, opts(500));
        std::vector<std::uint64_t> good;
        for (std::uint64_t ell = 2; ell <= 500; ++ell) {
            if (is_prime(ell) && e.has_good_reduction(ell)) good.push_back(ell);
        }
        CHECK(s.primes == good);
        CHECK(s.bad == std::vector<std::uint64_t>{37});
    }

    TEST_CASE("split primes of 32a3 at level 4 are 1 mod 8") {
        const auto s = split_set(RationalCurve::parse("0,0,0,-11,-14"), 4, opts(10'000));
        CHECK(s.primes.size() >= 5);
        for (auto ell : s.primes) CHECK(ell % 8 == 1);
    }

    TEST_CASE("40a4: level-4 split set is the level-2 set cut to 1 mod 4") {
        const auto e = RationalCurve::parse("0,0,0,13,-34");
        const auto s4 = split_set(e, 4, opts(10'000));
        auto s2 = split_set(e, 2, opts(10'000)).primes;
        std::erase_if(s2, [](std::uint64_t ell) { return ell % 4 != 1; });
        CHECK(s4.primes == s2);
    }

    TEST_CASE("40a4 mod-4 image") {
        const auto img = probe_image(RationalCurve::parse("0,0,0,13,-34"), 4, opts(10'000));
        REQUIRE_FALSE(img.minimal_survivors.empty());
        CHECK(img.minimal_survivors.front().order() == 2);
        const auto h = named_group({NamedKind::Mod4H});
        const bool found = std::any_of(img.minimal_survivors.begin(), img.minimal_survivors.end(),
                                       [&](const Subgroup& s) { return are_conjugate(s, h).has_value(); });
        CHECK(found);
        for (const auto& [sig, primes] : img.observed) {
            for (auto ell : primes) REQUIRE(sig.det == static_cast<int>(ell % 4));
        }
    }

    TEST_CASE("generic curve mod 2 has the full image") {
        const auto img = probe_image(RationalCurve::parse("0,0,1,-1,0"), 2, opts(1000));
        REQUIRE(img.survivors.size() == 1);
        CHECK(img.survivors.front().order() == 6);
    }

    TEST_CASE("bound too small for any prime") {
        CHECK_THROWS_AS(probe_image(RationalCurve::parse("0,0,0,13,-34"), 4, opts(0)), std::invalid_argument);
    }

    TEST_CASE("coincidence witness is a genuine split-set difference") {
        const auto e = RationalCurve::parse("0,0,1,-1,0");
        const auto v = coincide_heuristic(e, 2, 3, opts(10'000));
        CHECK(v.verdict == Verdict::UnequalWithWitness);
        REQUIRE(v.witness.has_value());
        const long ell = static_cast<long>(*v.witness);
        const auto c = oracle::reduce_curve(e, ell);
        const auto pts = oracle::points(c);
        CHECK((oracle::torsion_count(c, pts, 2) == 4) != (oracle::torsion_count(c, pts, 3) == 9));
    }

    TEST_CASE("small bound gives an inconclusive verdict") {
        const auto v = coincide_heuristic(RationalCurve::parse("0,0,0,13,-34"), 2, 4, opts(20));
        CHECK(v.verdict == Verdict::Inconclusive);
        CHECK_THROWS(coincide_heuristic(RationalCurve::parse("0,0,0,13,-34"), 4, 4, opts(100)));
    }

    TEST_CASE("cyclotomic containment failure carries a checkable prime") {
        const auto e = RationalCurve::parse("0,0,1,-1,0");
        const auto r = cyclotomic_containment(e, 3, 5, opts(10'000));
        CHECK(r.outcome == CyclotomicResult::Outcome::Fail);
        REQUIRE(r.counterexample.has_value());
        const long ell = static_cast<long>(*r.counterexample);
        CHECK(ell % 5 != 1);
        const auto c = oracle::reduce_curve(e, ell);
        CHECK(oracle::torsion_count(c, oracle::points(c), 3) == 9);
    }

    TEST_CASE("signatures") {
        const auto s = element_signature(GL2Element(4, 1, 1, 0, 3));
        CHECK(s.trace == 0);
        CHECK(s.det == 3);
        // ker(g - 1) = {(x, 0)}.
        CHECK(s.fixed == 4);
        CHECK(element_signature(GL2Element::identity(6)).fixed == 36);
    }

    TEST_CASE("cyclotomic bound and obstruction arithmetic") {
        CHECK(cyclotomic_bound(2, 1, 3) == 2);
        CHECK(cyclotomic_bound(3, 1, 5) == 1);
        CHECK_THROWS(cyclotomic_bound(2, 1, 2));
        for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
            for (std::uint64_t q : {5, 7, 11, 13, 17, 19, 23}) {
                if (p >= q) continue;
                const auto b = cyclotomic_bound(p, 1, q);
                // For p < q the bound is 0 or 1; q - 1 | p (p-1)^2 (p+1) decides which.
                const std::uint64_t x = p * (p - 1) * (p - 1) * (p + 1);
                CHECK((b > 0) == (x % (q - 1) == 0));
                if (b > 0) CHECK(b == 1);
            }
        }
        const auto o = coincidence_obstruction(3, 10);
        REQUIRE(o.has_value());
        CHECK(o->q == 5);
        CHECK(o->exponent == 1);
        CHECK_FALSE(coincidence_obstruction(7, 9).has_value());
        const auto two = coincidence_obstruction(2, 3);
        REQUIRE(two.has_value());
        CHECK(two->q == 3);
    }
}
