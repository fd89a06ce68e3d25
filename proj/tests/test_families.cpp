#include <doctest.h>

#include "ecl/families.hpp"

using namespace ecl;

namespace {

// Horner evaluation of descending integer coefficients, typed in separately
// from the library's tables.
mpq_class horner(const std::vector<long long>& descending, const mpq_class& t) {
    mpq_class acc = 0;
    for (long long c : descending) acc = acc * t + mpq_class(mpz_class(std::to_string(c)));
    return acc;
}

const std::vector<long long> kS3A{-27, 648, -4212, -2376, 60102, 79704, -105732, -235224, -107811};
const std::vector<long long> kS3B{54,        -1944,     24300,      -97848,     -251262,    1722384, 4821768,
                                  -8697456,  -64323558, -140447736, -157012020, -90561240,  -21346578};

}  // namespace

TEST_SUITE("families") {
    TEST_CASE("transcription checksums") {
        const auto s3 = curve_family(FamilyId::TwoFourS3);
        CHECK(s3.a.degree() == 8);
        CHECK(s3.a.leading() == -27);
        CHECK(s3.a.coeff(0) == -107811);
        CHECK(s3.b.degree() == 12);
        CHECK(s3.b.leading() == 54);
        CHECK(s3.b.coeff(0) == -21346578);

        const auto ab = curve_family(FamilyId::TwoFourAbelian);
        CHECK(ab.a.degree() == 8);
        CHECK(ab.a.leading() == -432);
        CHECK(ab.a.coeff(0) == -27);
        CHECK(ab.b.degree() == 12);
        CHECK(ab.b.leading() == 3456);
        CHECK(ab.b.coeff(0) == -54);

        // -3 t^9 (t^3-2)(t^3+2)^3(t^3+4): degree 9+3+9+3, leading -3, no constant term.
        const auto two3 = curve_family(FamilyId::TwoThree);
        CHECK(two3.a.degree() == 24);
        CHECK(two3.a.leading() == -3);
        CHECK(two3.a.coeff(0) == 0);
        CHECK(two3.b.degree() == 36);
        CHECK(two3.b.leading() == -2);

        const auto jg = j_map(FamilyId::Mod4GJLine);
        CHECK(jg.num.degree() == 8);
        CHECK(jg.num.leading() == -4);
        CHECK(jg.num.coeff(0) == -1188);
        CHECK(jg.den == QPoly::from_descending({1, 4, 6, 4, 1}));

        const auto sc = j_map(FamilyId::SplitCartan3J);
        CHECK(sc.num.degree() == 36);
        CHECK(sc.den.degree() == 33);
        CHECK(sc.num.leading() == -1);
    }

    TEST_CASE("instantiation against independent evaluation") {
        for (const mpq_class t : {mpq_class(0), mpq_class(1), mpq_class(2), mpq_class(1, 2), mpq_class(-3, 7)}) {
            const auto e = instantiate(FamilyId::TwoFourS3, t);
            CHECK(e.a4() == horner(kS3A, t));
            CHECK(e.a6() == horner(kS3B, t));
        }
        const auto e0 = instantiate(FamilyId::TwoFourS3, 0);
        CHECK(e0.str() == "[0,0,0,-107811,-21346578]");
        // The (2,3) family at t = 1 is the curve y^2 = x^3 + 405x - 9882.
        CHECK(instantiate(FamilyId::TwoThree, 1).str() == "[0,0,0,405,-9882]");
        const mpq_class t(2);
        const mpq_class t3 = t * t * t;
        const mpq_class a = -3 * t3 * t3 * t3 * (t3 - 2) * (t3 + 2) * (t3 + 2) * (t3 + 2) * (t3 + 4);
        CHECK(instantiate(FamilyId::TwoThree, 2).a4() == a);
    }

    TEST_CASE("singular parameters are reported") {
        // t = 0 in the abelian family gives x^3 - 27x - 54 = (x+3)^2 (x-6).
        const auto f = curve_family(FamilyId::TwoFourAbelian);
        CHECK(f.a(mpq_class(0)) == -27);
        CHECK(f.b(mpq_class(0)) == -54);
        CHECK_THROWS_WITH_AS(instantiate(FamilyId::TwoFourAbelian, 0), "TwoFourAbelian is singular at t = 0",
                             FamilyError);
        CHECK_THROWS_AS(instantiate(FamilyId::TwoThree, -1), FamilyError);
        CHECK_THROWS_AS(instantiate(FamilyId::TwoThree, 0), FamilyError);
        CHECK_THROWS_AS(instantiate(FamilyId::Mod4GJLine, 1), std::invalid_argument);
    }

    TEST_CASE("j-values") {
        CHECK(j_value(FamilyId::SplitCartan3J, 1) == mpq_class(9938375, 21952));
        CHECK_THROWS_AS(j_value(FamilyId::SplitCartan3J, 0), FamilyError);
        CHECK_THROWS_AS(j_value(FamilyId::Mod4GJLine, -1), FamilyError);
        CHECK(j_value(FamilyId::Mod4GJLine, 1) == -36);
        for (auto id : {FamilyId::TwoFourS3, FamilyId::TwoThree, FamilyId::TwoFourAbelian}) {
            for (const mpq_class t : {mpq_class(1), mpq_class(2), mpq_class(1, 2)}) {
                const auto e = instantiate(id, t);
                CHECK(j_value(id, t) == e.j);
                const auto m = j_map(id);
                CHECK(m.num(t) / m.den(t) == e.j);
            }
        }
    }

    TEST_CASE("names") {
        for (auto id : all_families()) CHECK(parse_family(to_string(id)) == id);
        CHECK_THROWS(parse_family("Thm13"));
        CHECK(cm_j_invariants().size() == 13);
    }

    TEST_CASE("CM exclusion") {
        for (const auto& r : cm_exclusion_scan()) {
            CAPTURE(r.j0.get_str());
            CHECK(r.roots.empty());
        }
        const auto control = rational_preimages(FamilyId::Mod4GJLine, j_value(FamilyId::Mod4GJLine, 1));
        CHECK(std::find(control.roots.begin(), control.roots.end(), mpq_class(1)) != control.roots.end());
        for (const auto& r : control.roots) CHECK(j_value(FamilyId::Mod4GJLine, r) == -36);
    }
}
