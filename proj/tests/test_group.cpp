#include <doctest.h>

#include <filesystem>

#include "ecl/group.hpp"
#include "ecl/menagerie.hpp"
#include "oracles.hpp"

using namespace ecl;

namespace {

EnumerationOptions test_cache() {
    EnumerationOptions o;
    o.cache_dir = resolve_cache_dir(std::nullopt);
    return o;
}

std::set<oracle::Mat> as_set(const Subgroup& g) {
    std::set<oracle::Mat> out;
    for (const auto& x : g.elements()) out.insert(oracle::as_mat(x));
    return out;
}

// Every subgroup of a small group by closing all subsets of its elements of
// size at most two (enough for groups whose subgroups are 2-generated).
std::set<std::set<oracle::Mat>> all_subgroups_brute(long n) {
    std::vector<oracle::Mat> elems;
    for (const auto& g : all_elements(static_cast<int>(n))) elems.push_back(oracle::as_mat(g));
    std::set<std::set<oracle::Mat>> out;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = i; j < elems.size(); ++j) out.insert(oracle::closure(std::vector<oracle::Mat>{elems[i], elems[j]}, n));
    }
    out.insert(oracle::closure(std::vector<oracle::Mat>{}, n));
    return out;
}

}  // namespace

TEST_SUITE("group") {
    TEST_CASE("generate_subgroup matches the naive closure") {
        CHECK(generate_subgroup(4, {}).order() == 1);
        CHECK(generate_subgroup(4, {GL2Element(4, 1, 1, 0, 3)}).order() == 2);
        const std::vector<std::pair<int, std::vector<GL2Element>>> cases{
            {5, {GL2Element(5, 1, 4, 1, 1), GL2Element(5, 1, 0, 0, 2)}},
            {8, {GL2Element(8, -1, 0, 0, 1), GL2Element(8, 5, 0, 0, 5), GL2Element(8, -1, -1, 4, -1)}},
            {6, {GL2Element(6, 5, 5, 0, 1), GL2Element(6, 2, 5, 1, 3)}},
            {9, {GL2Element(9, 1, 1, 0, 1), GL2Element(9, 2, 0, 0, 1)}},
        };
        for (const auto& [n, gens] : cases) {
            const auto g = generate_subgroup(n, gens);
            CHECK(as_set(g) == oracle::closure(gens, n));
        }
        CHECK_THROWS_AS(generate_subgroup(4, {GL2Element::identity(8)}), std::invalid_argument);
    }

    TEST_CASE("H5 has projective image of order 24") {
        const auto h5 = generate_subgroup(5, {GL2Element(5, 1, 4, 1, 1), GL2Element(5, 1, 0, 0, 2)});
        CHECK(projective_order(h5) == 24);
        CHECK(h5.order() == oracle::closure(h5.generators(), 5).size());
    }

    TEST_CASE("commutator subgroups match the naive derived group") {
        const auto gl5 = full_gl2(5);
        CHECK(commutator_subgroup(gl5).order() == 120);  // |SL(2, F_5)|
        const auto h5 = named_group({NamedKind::H5});
        const auto d = commutator_subgroup(h5);
        CHECK(as_set(d) == oracle::derived(as_set(h5), 5));
        CHECK(h5.order() / d.order() == 4);
        const auto cyclic = generate_subgroup(7, {GL2Element(7, 3, 0, 0, 1)});
        CHECK(commutator_subgroup(cyclic).order() == 1);
        for (int n : {2, 3, 4}) {
            const auto g = full_gl2(n);
            CHECK(as_set(commutator_subgroup(g)) == oracle::derived(as_set(g), n));
        }
    }

    TEST_CASE("abelian invariants") {
        CHECK(abelian_invariants(named_group({NamedKind::H5})).str() == "[4]");
        CHECK(abelian_invariants(named_group({NamedKind::H13})).str() == "[12]");
        CHECK(abelian_invariants(full_gl2(9)).str() == "[6]");
        // An abelian group with trivial normal subgroup reproduces itself.
        const auto klein = generate_subgroup(3, {GL2Element(3, 2, 0, 0, 1), GL2Element(3, 1, 0, 0, 2)});
        const auto trivial = generate_subgroup(3, {});
        CHECK(abelian_invariants(klein, trivial).str() == "[2,2]");
        CHECK(abelian_invariants(klein, trivial).order() == klein.order());
        CHECK_THROWS_AS(abelian_invariants(full_gl2(3), trivial), NonAbelianQuotient);

        CHECK(AbelianInvariants::from_cyclic_orders({4, 6}).str() == "[2,12]");
        CHECK(AbelianInvariants::from_cyclic_orders({1, 1}).str() == "[]");
        CHECK(AbelianInvariants::parse("[2,6]") == AbelianInvariants::from_cyclic_orders({2, 6}));
        CHECK_THROWS(AbelianInvariants::parse("[4,2]"));
    }

    TEST_CASE("conjugacy") {
        const auto gl2 = full_gl2(2);
        std::vector<Subgroup> transpositions;
        for (const auto& g : gl2.elements()) {
            if (element_order(g) == 2) transpositions.push_back(generate_subgroup(2, {g}));
        }
        REQUIRE(transpositions.size() == 3);
        for (const auto& a : transpositions) {
            for (const auto& b : transpositions) {
                const auto w = are_conjugate(a, b);
                REQUIRE(w.has_value());
                CHECK(conjugate(a, *w) == b);
            }
        }
        const auto cs3 = named_group({NamedKind::SplitCartan, 3});
        CHECK(are_conjugate(cs3, cs3) == GL2Element::identity(3));
        for (const auto& w : all_elements(3)) {
            REQUIRE(are_conjugate(cs3, conjugate(cs3, w)).has_value());
        }
        CHECK_FALSE(are_conjugate(named_group({NamedKind::Borel, 3}), named_group({NamedKind::SplitCartanNormalizer, 3})));
    }

    TEST_CASE("isomorphism") {
        const auto h1 = named_group({NamedKind::Mod6H1});
        const auto h2 = named_group({NamedKind::Mod6H2});
        CHECK(h1.order() == 6);
        CHECK(h2.order() == 6);
        CHECK_FALSE(h1.is_abelian());
        CHECK(are_isomorphic(h1, h2));
        CHECK(are_isomorphic(h1, reduction_image(h1, 2)));
        const auto c4 = generate_subgroup(5, {GL2Element(5, 2, 0, 0, 1)});
        const auto v4 = generate_subgroup(5, {GL2Element(5, 4, 0, 0, 1), GL2Element(5, 1, 0, 0, 4)});
        CHECK_FALSE(are_isomorphic(c4, v4));
        // Dihedral of order 8 against the quaternion group.
        const auto d4 = named_group({NamedKind::SplitCartanNormalizer, 3});
        const auto q8 = generate_subgroup(3, {GL2Element(3, 0, 1, 2, 0), GL2Element(3, 1, 1, 1, 2)});
        REQUIRE(q8.order() == 8);
        CHECK_FALSE(are_isomorphic(d4, q8));
        CHECK(are_isomorphic(d4, named_group({NamedKind::Mod12H1pi4})));
    }

    TEST_CASE("reduction images") {
        const auto g = named_group({NamedKind::Mod4G});
        CHECK(reduction_image(g, 2).order() == g.order());
        CHECK(reduction_image(g, 4) == g);
        CHECK(reduction_image(full_gl2(4), 2).order() == 6);
        CHECK(reduction_kernel(full_gl2(4), 2).order() == 16);
        CHECK_THROWS_AS(reduction_image(g, 3), std::invalid_argument);
    }

    TEST_CASE("enumeration at level 2 agrees with brute force") {
        const auto classes = enumerate_subgroups(2, SubgroupFilter{}, test_cache());
        std::vector<std::uint64_t> orders;
        for (const auto& c : classes) orders.push_back(c.order());
        CHECK(orders == std::vector<std::uint64_t>{1, 2, 3, 6});
        // Class sizes add up to the number of subgroups.
        std::size_t total = 0;
        for (const auto& c : classes) {
            std::set<std::vector<std::uint32_t>> conj;
            for (const auto& w : all_elements(2)) conj.insert(conjugate(c, w).keys());
            total += conj.size();
        }
        CHECK(total == all_subgroups_brute(2).size());
    }

    TEST_CASE("enumeration at level 3 agrees with brute force") {
        const auto classes = enumerate_subgroups(3, SubgroupFilter{}, test_cache());
        std::set<std::set<oracle::Mat>> from_classes;
        for (const auto& c : classes) {
            for (const auto& w : all_elements(3)) from_classes.insert(as_set(conjugate(c, w)));
        }
        CHECK(from_classes == all_subgroups_brute(3));
        CHECK(classes.size() == 16);
    }

    TEST_CASE("enumeration refuses moduli above the ceiling") {
        EnumerationOptions o;
        o.ceiling = 100;
        CHECK_THROWS_AS(enumerate_subgroups(5, SubgroupFilter{}, o), EnumerationRefused);
    }

    TEST_CASE("cache round trip gives identical classes") {
        const auto dir = std::filesystem::temp_directory_path() / "ecl-test-cache-roundtrip";
        std::filesystem::remove_all(dir);
        EnumerationOptions o;
        o.cache_dir = dir;
        EnumerationStats s1, s2;
        const auto first = enumerate_subgroups(6, SubgroupFilter::admissible(), o, &s1);
        const auto second = enumerate_subgroups(6, SubgroupFilter::admissible(), o, &s2);
        CHECK_FALSE(s1.cache_hit);
        CHECK(s2.cache_hit);
        REQUIRE(first.size() == second.size());
        for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i] == second[i]);
        EnumerationOptions none;
        const auto uncached = enumerate_subgroups(6, SubgroupFilter::admissible(), none);
        CHECK(uncached.size() == first.size());
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("level-9 and level-4 abelianization sets") {
        auto collect = [](int n) {
            std::set<std::string> out;
            for (const auto& g : enumerate_subgroups(n, SubgroupFilter::admissible(), test_cache())) {
                if (!g.is_abelian()) out.insert(abelian_invariants(g).str());
            }
            return out;
        };
        CHECK(collect(9) == std::set<std::string>{"[6]", "[2,6]", "[3,6]", "[6,6]"});
        CHECK(collect(4) == std::set<std::string>{"[2]", "[2,2]", "[2,2,2]", "[2,4]", "[6]", "[2,6]"});
    }

    TEST_CASE("isomorphism graphs over coprime moduli") {
        const auto ns3 = named_group({NamedKind::SplitCartanNormalizer, 3});
        const auto h1 = named_group({NamedKind::Mod12H1pi4});
        const auto graphs = isomorphism_graphs(ns3, h1);
        CHECK(graphs.size() == 8);
        for (const auto& s : graphs) {
            CHECK(s.modulus() == 12);
            CHECK(s.order() == 8);
            CHECK(reduction_image(s, 3) == ns3);
            CHECK(reduction_image(s, 4) == h1);
        }
        const auto prod = direct_product(ns3, h1);
        CHECK(prod.order() == 64);
    }
}
