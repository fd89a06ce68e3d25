#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ecl {

// "p/q" or an integer; throws std::invalid_argument otherwise.
mpq_class parse_rational(std::string_view text);
std::string to_string(const mpq_class& q);
std::string to_string(const mpz_class& z);

// Prime factorization of |n| (n != 0) with multiplicities, ascending primes.
// Trial division, then Miller-Rabin and Pollard-Brent for the cofactor.
std::vector<std::pair<mpz_class, unsigned>> factor_integer(const mpz_class& n);
// Positive divisors of |n|; throws when there would be more than `limit`.
std::vector<mpz_class> divisors_of(const mpz_class& n, std::size_t limit = 2'000'000);

bool is_rational_square(const mpq_class& q);
std::optional<mpq_class> rational_sqrt(const mpq_class& q);

// Dense univariate polynomial over Q, coefficients low degree first.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<mpq_class> coeffs);
    static QPoly constant(const mpq_class& c);
    static QPoly x();  // the monomial x
    // Coefficients listed from the leading term down, as usually written.
    static QPoly from_descending(const std::vector<long long>& coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    mpq_class coeff(int i) const;
    mpq_class leading() const;

    mpq_class operator()(const mpq_class& t) const;
    QPoly derivative() const;
    QPoly pow(unsigned e) const;
    // Scaled to integer coefficients with content 1 and positive leading term.
    std::vector<mpz_class> primitive_integer() const;

    std::string str(char var = 'x') const;

    QPoly& operator+=(const QPoly& o);
    QPoly& operator-=(const QPoly& o);
    QPoly& operator*=(const QPoly& o);
    QPoly& operator*=(const mpq_class& s);
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator*(QPoly a, const QPoly& b) { return a *= b; }
    friend QPoly operator*(QPoly a, const mpq_class& s) { return a *= s; }
    friend QPoly operator-(QPoly a) { return a *= mpq_class(-1); }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

private:
    void trim();
    std::vector<mpq_class> c_;
};

// Integer roots of a nonzero integer polynomial (low degree first), ascending.
// Roots are found modulo a prime where they are simple and lifted p-adically.
std::vector<mpz_class> integer_roots(const std::vector<mpz_class>& poly);

struct RationalRootSearch {
    std::vector<mpq_class> roots;  // ascending
    std::size_t candidates_tested = 0;
};
// Rational-root theorem: every root is +-(divisor of a0)/(divisor of an).
// x = 0 is checked separately, so a0 = 0 is allowed.
RationalRootSearch rational_roots(const std::vector<mpz_class>& poly,
                                  std::size_t divisor_limit = 2'000'000);

}  // namespace ecl
