#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecl/group.hpp"
#include "ecl/groupfile.hpp"

namespace ecl {

struct VerificationReport {
    std::string claim;
    std::vector<std::pair<std::string, std::string>> parameters;
    bool pass = true;
    std::vector<std::pair<std::string, std::string>> findings;
    std::optional<std::string> counterexample;
    double elapsed_seconds = 0;

    void note(std::string key, std::string value) { findings.emplace_back(std::move(key), std::move(value)); }
    // Marks the report failed; the first counterexample is kept.
    void fail(const std::string& what);
};

// Default cap on |GL(2, Z/p^n)| for the exhaustive element scans.
inline constexpr std::uint64_t kExhaustionCeiling = 1'000'000;

// Elements of p-power order in GL(2, Z/p^n) have order at most p^n, and
// (1, p^(n-k); 0, 1) has order p^k for each 1 <= k <= n.
VerificationReport verify_max_ppower_order(int p, int n);
// The kernel of reduction mod p has p^(4(n-1)) elements of order dividing p^(n-1).
VerificationReport verify_kernel_order(int p, int n);
// Elements whose order is divisible by p^n (p - 1) have square determinant mod p.
VerificationReport verify_det_square(int p, int n);

// Abelianizations of det-surjective non-abelian subgroups of N_s(p).
VerificationReport verify_split_cartan_structure(int p);
// Same inside N_ns(p), plus the coset structure G = <H, tau>.
VerificationReport verify_nonsplit_structure(int p);
// H5 and H13: abelianizations [4] and [12], projective image like S4.
VerificationReport verify_exceptional();

// Admissible non-abelian abelianization sets at levels 9 and 4, the
// containments that follow and the empty matching scan.
VerificationReport verify_level9_level4_exclusion(const EnumerationOptions& options);

// Level -> allowed Galois groups of Q(E[n]) when that field is abelian.
const std::map<int, std::vector<AbelianInvariants>>& abelian_reference_table();
VerificationReport verify_abelian_table();

struct PairScan {
    std::vector<std::pair<int, int>> not_excluded;
    std::vector<std::pair<int, int>> external;  // left open for lack of mod-7 data
    std::map<std::pair<int, int>, std::string> reasons;
};
PairScan scan_pairs(int max_level, const std::optional<GroupFile>& mod7_images,
                    const EnumerationOptions& options, VerificationReport* report = nullptr);
VerificationReport verify_pairs(int max_level, const std::optional<GroupFile>& mod7_images,
                                const EnumerationOptions& options);

// Relations, orders and the quotient by <B C^-2> for the 2-adic image
// generated by A, B, C, at each level 2^n.
VerificationReport verify_32a3(const std::vector<int>& levels);

struct RzbEntry {
    std::string label;
    std::vector<std::uint64_t> level_orders;  // |G mod p^k| for k = 1..K
    std::vector<int> coincidence_levels;      // k with G mod p^(k+1) ~ G mod p^k
};
std::vector<RzbEntry> rzb_levels(const GroupFile& file);
VerificationReport rzb_scan(const GroupFile& file);
// Expected coincidence levels from "meta expect <label> k,k" or "... none" lines.
VerificationReport rzb_scan_with_expectations(const GroupFile& file);

// Maximal det-surjective subgroups of GL(2, Z/6) on which both reductions
// are injective: the classes of Mod6H1 and Mod6H2.
VerificationReport verify_mod6_images(const EnumerationOptions& options);
// Non-abelian admissible subgroups of GL(2, Z/12) with both reductions
// injective; the maximal ones are the two D4 groups H1, H2.
VerificationReport verify_mod12_groups(const EnumerationOptions& options);

VerificationReport verify_cm_exclusion();

// Whether some conjugate of g lies inside `target` (same modulus).
bool conjugate_inside(const Subgroup& g, const Subgroup& target);
// Whether b is a quotient (equivalently a subgroup) of a.
bool is_quotient_of(const AbelianInvariants& a, const AbelianInvariants& b);

}  // namespace ecl
