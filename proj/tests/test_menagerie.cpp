#include <doctest.h>

#include "ecl/menagerie.hpp"
#include "oracles.hpp"

using namespace ecl;

TEST_SUITE("menagerie") {
    TEST_CASE("named group orders") {
        struct Row {
            const char* id;
            int modulus;
            std::uint64_t order;
        };
        const Row rows[] = {
            {"B3", 3, 12},          {"SplitCartanNormalizer(3)", 3, 8}, {"Curve32a3Level(3)", 8, 32},
            {"H5", 5, 96},          {"H13", 13, 288},                   {"Nns3", 3, 16},
            {"Cns2", 2, 3},         {"Mod4G", 4, 6},                    {"Mod4H", 4, 2},
            {"Mod6H1", 6, 6},       {"Mod6H2", 6, 6},                   {"Mod12H1pi4", 4, 8},
            {"Mod12H2pi4", 4, 8},   {"Mod12Htilde_pi4", 4, 16},         {"Borel(7)", 7, 252},
            {"SplitCartan(5)", 5, 16}, {"NonsplitCartan(5)", 5, 24},    {"NonsplitCartanNormalizer(5)", 5, 48},
        };
        for (const auto& r : rows) {
            CAPTURE(r.id);
            const auto g = named_group(NamedGroupId::parse(r.id));
            CHECK(g.modulus() == r.modulus);
            CHECK(g.order() == r.order);
            CHECK(g.order() == oracle::closure(g.generators(), r.modulus).size());
        }
        // |G mod 2^n| = 2^(2n-1).
        for (int n = 2; n <= 6; ++n) {
            CHECK(named_group({NamedKind::Curve32a3Level, n}).order() == (1ULL << (2 * n - 1)));
        }
    }

    TEST_CASE("id parsing") {
        CHECK(NamedGroupId::parse("NonsplitCartan(7,3)").eps == 3);
        CHECK(NamedGroupId::parse("Borel(5)").str() == "Borel(5)");
        CHECK_THROWS(named_group(NamedGroupId::parse("Borel(6)")));
        CHECK_THROWS(NamedGroupId::parse("Nope"));
        CHECK_THROWS(named_group(NamedGroupId::parse("Borel(4)")));
        CHECK_FALSE(NamedGroupId::spellings().empty());
    }

    TEST_CASE("nonsplit Cartan elements have the (a, eps b; b, a) shape") {
        const auto c = named_group({NamedKind::NonsplitCartan, 7});
        CHECK(c.order() == 48);
        const int eps = least_nonresidue(7);
        CHECK(eps == 3);
        for (const auto& x : c.elements()) {
            REQUIRE(x.a() == x.d());
            REQUIRE(x.b() == floor_mod(static_cast<std::int64_t>(eps) * x.c(), 7));
        }
        CHECK(c.is_abelian());
        CHECK_FALSE(has_cc_element(c));
    }

    TEST_CASE("classification") {
        CHECK(classify_subgroup(full_gl2(3)) == GroupClass::FullGL2);
        CHECK(classify_subgroup(named_group({NamedKind::B3})) == GroupClass::BorelContained);
        CHECK(classify_subgroup(named_group({NamedKind::H5})) == GroupClass::Exceptional);
        CHECK(classify_subgroup(named_group({NamedKind::H13})) == GroupClass::Exceptional);
        CHECK(classify_subgroup(named_group({NamedKind::NonsplitCartanNormalizer, 5})) ==
              GroupClass::NonsplitNormalizerContained);
        CHECK(classify_subgroup(named_group({NamedKind::SplitCartanNormalizer, 7})) ==
              GroupClass::SplitNormalizerContained);
        CHECK_THROWS_AS(classify_subgroup(full_gl2(4)), std::invalid_argument);
    }

    TEST_CASE("admissibility") {
        CHECK(is_admissible(full_gl2(5)));
        CHECK(is_admissible(named_group({NamedKind::B3})));
        CHECK_FALSE(is_admissible(named_group({NamedKind::NonsplitCartan, 3})));
        CHECK(is_admissible(named_group({NamedKind::Mod4G})));
    }

    TEST_CASE("full preimages") {
        const auto lift = full_preimage(named_group({NamedKind::Mod4G}), 32);
        CHECK(lift.order() == 6 * (1ULL << 12));
        CHECK(reduction_image(lift, 4) == named_group({NamedKind::Mod4G}));
        CHECK(full_preimage(full_gl2(3), 9).order() == gl2_order(9));
        CHECK_THROWS(full_preimage(full_gl2(3), 8));
    }
}
