#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ecl/group.hpp"
#include "ecl/poly.hpp"

namespace ecl {

class SingularCurve : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q. The model is kept as
// given; nothing is minimalized.
class RationalCurve {
public:
    static RationalCurve from_coeffs(const std::array<mpq_class, 5>& a);
    static RationalCurve short_form(const mpq_class& A, const mpq_class& B);
    // "a1,a2,a3,a4,a6" or "A,B".
    static RationalCurve parse(std::string_view text);

    const mpq_class& a1() const { return a_[0]; }
    const mpq_class& a2() const { return a_[1]; }
    const mpq_class& a3() const { return a_[2]; }
    const mpq_class& a4() const { return a_[3]; }
    const mpq_class& a6() const { return a_[4]; }
    const std::array<mpq_class, 5>& coeffs() const { return a_; }

    mpq_class b2, b4, b6, b8, c4, c6, disc, j;

    bool is_short() const { return a_[0] == 0 && a_[1] == 0 && a_[2] == 0; }
    bool is_integral() const;
    // ell is a prime where the given model reduces to a nonsingular curve.
    bool has_good_reduction(std::uint64_t ell) const;
    std::string str() const;  // "[a1,a2,a3,a4,a6]"

    friend bool operator==(const RationalCurve& x, const RationalCurve& y) { return x.a_ == y.a_; }

private:
    explicit RationalCurve(const std::array<mpq_class, 5>& a);
    std::array<mpq_class, 5> a_;
};

// y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3.
RationalCurve quadratic_twist(const RationalCurve& e, const mpz_class& d);
bool q_isomorphic(const RationalCurve& x, const RationalCurve& y);

struct RationalPoint {
    mpq_class x, y;
    bool infinity = false;

    static RationalPoint zero() { return {0, 0, true}; }
    std::string str() const;  // "(7,-20)" or "O"
    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

bool on_curve(const RationalCurve& e, const RationalPoint& p);
RationalPoint add(const RationalCurve& e, const RationalPoint& p, const RationalPoint& q);
RationalPoint negate(const RationalCurve& e, const RationalPoint& p);
// 0 when the order exceeds `cap`.
unsigned point_order(const RationalCurve& e, const RationalPoint& p, unsigned cap = 16);

class BadReduction : public std::runtime_error {
public:
    BadReduction(std::uint64_t ell);
    std::uint64_t ell;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr std::uint64_t kCountingBound = 1'000'000;

struct FrobData {
    std::uint64_t ell = 0;
    std::int64_t trace = 0;     // a_ell
    std::uint64_t points = 0;   // ell + 1 - a_ell
    // E(F_ell) = Z/d1 x Z/d2 with d1 | d2.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> structure;
};

// Exhaustive count; the structure comes from generating each Sylow subgroup
// with seeded random points. Throws BadReduction.
FrobData frobenius_data(const RationalCurve& e, std::uint64_t ell, bool want_structure,
                        std::uint64_t seed = kDefaultSeed);
// Fills in `structure` for data already counted by frobenius_data.
void attach_structure(const RationalCurve& e, FrobData& data, std::uint64_t seed = kDefaultSeed);

// Roots are the x-coordinates of E[n] minus O. Odd n: psi_n. Even n:
// (4x^3 + b2 x^2 + 2 b4 x + b6) * psi_n / psi_2, so f_4 leads with 8 on a
// short model.
QPoly division_polynomial(const RationalCurve& e, int n);

struct TorsionSubgroup {
    AbelianInvariants structure;
    std::vector<RationalPoint> generators;
    std::vector<RationalPoint> points;  // all of them including O, sorted
};
TorsionSubgroup rational_torsion(const RationalCurve& e);

}  // namespace ecl
