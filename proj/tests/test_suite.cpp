#include <doctest.h>

#include <algorithm>

#include "ecl/groupfile.hpp"
#include "ecl/menagerie.hpp"
#include "ecl/suite.hpp"

using namespace ecl;

namespace {

EnumerationOptions enum_opts() {
    EnumerationOptions o;
    o.cache_dir = resolve_cache_dir(std::nullopt);
    return o;
}

std::string finding(const VerificationReport& r, const std::string& key) {
    for (const auto& [k, v] : r.findings) {
        if (k == key) return v;
    }
    return {};
}

void require_pass(const VerificationReport& r) {
    CAPTURE(r.claim);
    CAPTURE(r.counterexample.value_or(""));
    CHECK(r.pass);
}

GroupFile bundled(const char* name) { return GroupFile::load(std::filesystem::path(ECL_TEST_DATA_DIR) / name); }

}  // namespace

TEST_SUITE("suite") {
    TEST_CASE("prime-power order facts") {
        for (auto [p, n] : {std::pair{2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
            CAPTURE(p);
            CAPTURE(n);
            require_pass(verify_max_ppower_order(p, n));
            require_pass(verify_kernel_order(p, n));
        }
        for (auto [p, n] : {std::pair{3, 1}, {3, 2}, {5, 1}}) require_pass(verify_det_square(p, n));
        CHECK_THROWS_AS(verify_kernel_order(4, 1), std::invalid_argument);
        CHECK_THROWS_AS(verify_max_ppower_order(2, 7), std::invalid_argument);
    }

    TEST_CASE("Cartan and exceptional structure") {
        for (int p : {3, 5, 7}) require_pass(verify_split_cartan_structure(p));
        for (int p : {3, 5}) require_pass(verify_nonsplit_structure(p));
        require_pass(verify_exceptional());
    }

    TEST_CASE("abelian quotient comparison") {
        const auto a = AbelianInvariants::parse("[2,6]");
        CHECK(is_quotient_of(a, AbelianInvariants::parse("[6]")));
        CHECK(is_quotient_of(a, AbelianInvariants::parse("[2,2]")));
        CHECK_FALSE(is_quotient_of(a, AbelianInvariants::parse("[4]")));
        CHECK_FALSE(is_quotient_of(a, AbelianInvariants::parse("[2,2,2]")));
        CHECK(is_quotient_of(a, AbelianInvariants{}));
    }

    TEST_CASE("conjugate containment") {
        const auto b = named_group({NamedKind::Borel, 5});
        const auto c = named_group({NamedKind::SplitCartan, 5});
        CHECK(conjugate_inside(c, b));
        CHECK_FALSE(conjugate_inside(named_group({NamedKind::NonsplitCartan, 5}), b));
    }

    TEST_CASE("level 9 against level 4") { require_pass(verify_level9_level4_exclusion(enum_opts())); }

    TEST_CASE("abelian reference table") {
        require_pass(verify_abelian_table());
        CHECK(abelian_reference_table().count(2) == 1);
    }

    TEST_CASE("pair scan without and with mod-7 data") {
        const auto open = scan_pairs(10, std::nullopt, enum_opts());
        CHECK(open.external == std::vector<std::pair<int, int>>{{6, 7}});
        CHECK(open.not_excluded.size() == 9);
        const auto mod7 = bundled("mod7-images.groups");
        const auto closed = scan_pairs(10, mod7, enum_opts());
        CHECK(closed.external.empty());
        CHECK(closed.not_excluded.size() == 8);
        CHECK(std::find(closed.not_excluded.begin(), closed.not_excluded.end(), std::pair{6, 7}) ==
              closed.not_excluded.end());
        require_pass(verify_pairs(10, std::nullopt, enum_opts()));
        require_pass(verify_pairs(10, mod7, enum_opts()));
        // (3,10) is excluded by the prime-power rule, (2,5) by ramification.
        CHECK(closed.reasons.count({3, 10}) == 1);
    }

    TEST_CASE("2-adic image of 32a3") {
        require_pass(verify_32a3({2, 3, 4, 5, 6}));
        CHECK_THROWS(verify_32a3({7}));
    }

    TEST_CASE("vertical coincidence scan") {
        const auto file = bundled("rzb-sample.groups");
        require_pass(rzb_scan_with_expectations(file));
        const auto levels = rzb_levels(file);
        REQUIRE(levels.size() == 4);
        CHECK(levels[0].coincidence_levels == std::vector<int>{1});
        CHECK(levels[2].coincidence_levels.empty());
        CHECK(levels[2].level_orders == std::vector<std::uint64_t>{6, 96, 1536, 24576, 393216});

        // A wrong expectation is reported, not ignored.
        auto wrong = file;
        for (auto& [k, v] : wrong.meta) {
            if (k == "expect" && v == "GL2-32 none") v = "GL2-32 2";
        }
        CHECK_FALSE(rzb_scan_with_expectations(wrong).pass);

        GroupFile mixed;
        mixed.modulus = 12;
        mixed.groups.push_back({"X", {GL2Element::identity(12)}, std::nullopt});
        CHECK_THROWS(rzb_levels(mixed));
    }

    TEST_CASE("mod 6 and mod 12 images") {
        require_pass(verify_mod6_images(enum_opts()));
        const auto r = verify_mod12_groups(enum_opts());
        require_pass(r);
    }

    TEST_CASE("CM exclusion report") {
        const auto r = verify_cm_exclusion();
        require_pass(r);
        CHECK(finding(r, "control j=-36") == "root t=1 found");
    }
}
