#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ecl/ec.hpp"
#include "ecl/group.hpp"

namespace ecl {

struct ProbeOptions {
    std::uint64_t bound = 10'000;
    std::uint64_t seed = kDefaultSeed;
    unsigned jobs = 1;
    std::size_t witness_threshold = 5;
    // Compare minimal probe survivors at both levels before calling two
    // division fields equal.
    bool cross_check = true;
    EnumerationOptions enumeration;
};

// Good primes ell <= bound with ell not dividing `exclude` for which
// `wanted(ell)` holds, with point counts; primes of bad reduction are listed.
struct PrimeScan {
    std::vector<FrobData> data;
    std::vector<std::uint64_t> bad;
    std::vector<std::uint64_t> excluded;
};

struct SplitSet {
    int level = 1;
    std::uint64_t bound = 0;
    std::vector<std::uint64_t> primes;
    std::vector<std::uint64_t> bad;
    std::vector<std::uint64_t> excluded;  // divide the level or the extra modulus
    std::uint64_t good_examined = 0;
};

// Good primes ell <= bound, ell not dividing level * extra_exclude, with
// E[level] inside E(F_ell).
SplitSet split_set(const RationalCurve& e, int level, const ProbeOptions& options,
                   std::uint64_t extra_exclude = 1);

// Frobenius signature mod n: trace, determinant and |ker(Frob - 1)| on the
// n-torsion.
struct FrobSignature {
    int trace;
    int det;
    std::uint64_t fixed;

    friend bool operator==(const FrobSignature&, const FrobSignature&) = default;
    friend auto operator<=>(const FrobSignature&, const FrobSignature&) = default;
};
FrobSignature element_signature(const GL2Element& g);

struct ProbableImage {
    int modulus = 0;
    std::vector<Subgroup> survivors;          // every surviving candidate class
    std::vector<Subgroup> minimal_survivors;  // those of least order
    std::map<FrobSignature, std::vector<std::uint64_t>> observed;
    std::uint64_t primes_used = 0;
    std::vector<std::uint64_t> bad;
    std::vector<std::uint64_t> excluded;
    bool insufficient_sampling = false;  // observed dets miss part of (Z/nZ)^x
};

// Sieves the admissible classes mod n: a class survives when every observed
// signature is realized by one of its elements.
ProbableImage probe_image(const RationalCurve& e, int n, const ProbeOptions& options);

enum class Verdict { HeuristicallyEqual, UnequalWithWitness, Inconclusive };
std::string_view to_string(Verdict v);

struct CoincidenceVerdict {
    int m = 0, n = 0;
    std::uint64_t bound = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<std::uint64_t> witness;
    int witness_split_level = 0;  // the level at which the witness splits
    std::size_t split_m = 0, split_n = 0, common = 0;
    std::vector<std::uint64_t> bad;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> survivor_orders;
    std::string note;
};

CoincidenceVerdict coincide_heuristic(const RationalCurve& e, int m, int n, const ProbeOptions& options);

struct CyclotomicResult {
    enum class Outcome { Pass, Fail, Inconclusive } outcome = Outcome::Inconclusive;
    int level = 0;
    std::uint64_t root = 0;  // q^k
    std::vector<std::uint64_t> witnesses;
    std::optional<std::uint64_t> counterexample;
    std::vector<std::uint64_t> bad;
};
std::string_view to_string(CyclotomicResult::Outcome o);

// Every split prime of E[level] should be 1 mod q^k when Q(zeta_{q^k}) lies
// in Q(E[level]).
CyclotomicResult cyclotomic_containment(const RationalCurve& e, int level, std::uint64_t root,
                                        const ProbeOptions& options);

// Largest m >= 0 with q^(m-1)(q-1) dividing p^(4(n-1)+1) (p-1)^2 (p+1).
unsigned cyclotomic_bound(std::uint64_t p, unsigned n, std::uint64_t q);

struct Obstruction {
    std::uint64_t q = 0;
    unsigned exponent = 0;
};
// First odd prime power q^k exactly dividing m with phi(q^k) not dividing p - 1.
std::optional<Obstruction> coincidence_obstruction(std::uint64_t p, std::uint64_t m);

}  // namespace ecl
