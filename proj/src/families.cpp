#include "ecl/families.hpp"

#include <stdexcept>

namespace ecl {

namespace {

QPoly poly(const std::vector<long long>& descending) { return QPoly::from_descending(descending); }

QPoly t_pow(unsigned k) { return QPoly::x().pow(k); }

CurveFamily two_four_s3() {
    return {poly({-27, 648, -4212, -2376, 60102, 79704, -105732, -235224, -107811}),
            poly({54, -1944, 24300, -97848, -251262, 1722384, 4821768, -8697456, -64323558, -140447736,
                  -157012020, -90561240, -21346578})};
}

CurveFamily two_three() {
    const QPoly t3m2 = poly({1, 0, 0, -2}), t3p2 = poly({1, 0, 0, 2}), t3p4 = poly({1, 0, 0, 4});
    QPoly a = t_pow(9) * t3m2 * t3p2.pow(3) * t3p4 * mpq_class(-3);
    QPoly b = t_pow(12) * t3p2.pow(4) * poly({1, -2, 0, 4, -2}) * poly({1, 2, 4, 8, 10, 8, 16, 8, 4}) * mpq_class(-2);
    return {a, b};
}

CurveFamily two_four_abelian() {
    return {poly({-432, 0, 0, 0, 1512, 0, 0, 0, -27}),
            poly({3456, 0, 0, 0, 28512, 0, 0, 0, -7128, 0, 0, 0, -54})};
}

JMap split_cartan3() {
    const QPoly p = poly({1, -3, -9, -9}) * poly({1, 3, 3, -3}) * poly({1, 12, 81, 216, 243, 108, 27});
    const QPoly q = QPoly::x() * poly({1, 1}).pow(2) * poly({1, 3}).pow(2) * poly({1, 0, 3}).pow(2) * poly({1, 3, 3});
    return {-p.pow(3), q.pow(3)};
}

JMap mod4g_line() {
    return {poly({-4, 32, 80, -288, -504, 864, 1296, -864, -1188}), poly({1, 4, 6, 4, 1})};
}

struct Entry {
    FamilyId id;
    std::string_view name;
};
constexpr Entry kNames[] = {
    {FamilyId::TwoFourS3, "TwoFourS3"},
    {FamilyId::TwoThree, "TwoThree"},
    {FamilyId::TwoFourAbelian, "TwoFourAbelian"},
    {FamilyId::SplitCartan3J, "SplitCartan3J"},
    {FamilyId::Mod4GJLine, "Mod4GJLine"},
};

std::string t_text(const mpq_class& t) { return t.get_str(); }

}  // namespace

std::string_view to_string(FamilyId id) {
    for (const auto& e : kNames) {
        if (e.id == id) return e.name;
    }
    return "?";
}

FamilyId parse_family(std::string_view text) {
    for (const auto& e : kNames) {
        if (e.name == text) return e.id;
    }
    throw std::invalid_argument("unknown family '" + std::string(text) + "'");
}

std::vector<FamilyId> all_families() {
    std::vector<FamilyId> out;
    for (const auto& e : kNames) out.push_back(e.id);
    return out;
}

bool has_curve(FamilyId id) {
    return id == FamilyId::TwoFourS3 || id == FamilyId::TwoThree || id == FamilyId::TwoFourAbelian;
}

CurveFamily curve_family(FamilyId id) {
    switch (id) {
        case FamilyId::TwoFourS3: return two_four_s3();
        case FamilyId::TwoThree: return two_three();
        case FamilyId::TwoFourAbelian: return two_four_abelian();
        default: throw std::invalid_argument(std::string(to_string(id)) + " is a j-map, not a curve family");
    }
}

JMap j_map(FamilyId id) {
    if (id == FamilyId::SplitCartan3J) return split_cartan3();
    if (id == FamilyId::Mod4GJLine) return mod4g_line();
    // j = 1728 * 4A^3 / (4A^3 + 27B^2) for y^2 = x^3 + Ax + B.
    const auto f = curve_family(id);
    const QPoly a3 = f.a.pow(3) * mpq_class(4);
    return {a3 * mpq_class(1728), a3 + f.b.pow(2) * mpq_class(27)};
}

RationalCurve instantiate(FamilyId id, const mpq_class& t) {
    const auto f = curve_family(id);
    try {
        return RationalCurve::short_form(f.a(t), f.b(t));
    } catch (const SingularCurve&) {
        throw FamilyError(std::string(to_string(id)) + " is singular at t = " + t_text(t));
    }
}

mpq_class j_value(FamilyId id, const mpq_class& t) {
    if (has_curve(id)) return instantiate(id, t).j;
    const auto m = j_map(id);
    const mpq_class den = m.den(t);
    if (den == 0) throw FamilyError(std::string(to_string(id)) + " has a pole at t = " + t_text(t));
    return m.num(t) / den;
}

const std::array<mpz_class, 13>& cm_j_invariants() {
    static const std::array<mpz_class, 13> list{
        mpz_class(0),           mpz_class(54000),       mpz_class(-12288000),     mpz_class(1728),
        mpz_class(287496),      mpz_class(-3375),       mpz_class(16581375),      mpz_class(8000),
        mpz_class(-32768),      mpz_class(-884736),     mpz_class(-884736000),    mpz_class("-147197952000"),
        mpz_class("-262537412640768000"),
    };
    return list;
}

JPreimage rational_preimages(FamilyId id, const mpq_class& j0) {
    const auto m = j_map(id);
    const QPoly diff = m.num - m.den * j0;
    JPreimage out;
    out.j0 = j0;
    if (diff.is_zero()) throw std::invalid_argument("j-map is constant");
    const auto search = rational_roots(diff.primitive_integer());
    out.candidates_tested = search.candidates_tested;
    for (const auto& r : search.roots) {
        if (m.den(r) != 0) out.roots.push_back(r);
    }
    return out;
}

std::vector<JPreimage> cm_exclusion_scan(FamilyId id) {
    std::vector<JPreimage> out;
    for (const auto& j0 : cm_j_invariants()) out.push_back(rational_preimages(id, mpq_class(j0)));
    return out;
}

}  // namespace ecl
