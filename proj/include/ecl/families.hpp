#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ecl/ec.hpp"
#include "ecl/poly.hpp"

namespace ecl {

// Curve families y^2 = x^3 + A(t)x + B(t) and j-maps num(t)/den(t).
//   TwoFourS3       Q(E[2]) = Q(E[4]) with S3 image mod 2
//   TwoThree        Q(E[2]) = Q(E[3])
//   TwoFourAbelian  Q(E[2]) = Q(E[4]) = Q(i)
//   SplitCartan3J   j-map of the split Cartan normalizer mod 3
//   Mod4GJLine      j-map of the modular curve of Mod4G
enum class FamilyId { TwoFourS3, TwoThree, TwoFourAbelian, SplitCartan3J, Mod4GJLine };

std::string_view to_string(FamilyId id);
FamilyId parse_family(std::string_view text);
std::vector<FamilyId> all_families();

bool has_curve(FamilyId id);

struct CurveFamily {
    QPoly a, b;
};
struct JMap {
    QPoly num, den;
};

// Throws std::invalid_argument for j-map-only ids.
CurveFamily curve_family(FamilyId id);
// Curve families map to c4^3 / disc of the generic member.
JMap j_map(FamilyId id);

class FamilyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

RationalCurve instantiate(FamilyId id, const mpq_class& t);
mpq_class j_value(FamilyId id, const mpq_class& t);

// The 13 rational j-invariants with complex multiplication.
const std::array<mpz_class, 13>& cm_j_invariants();

struct JPreimage {
    mpq_class j0;
    std::vector<mpq_class> roots;  // rational t with j(t) = j0, poles removed
    std::size_t candidates_tested = 0;
};
// Rational solutions of j(t) = j0 via the numerator of j(t) - j0.
JPreimage rational_preimages(FamilyId id, const mpq_class& j0);

std::vector<JPreimage> cm_exclusion_scan(FamilyId id = FamilyId::Mod4GJLine);

}  // namespace ecl
