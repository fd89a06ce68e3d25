#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ecl/modring.hpp"

namespace ecl {

// Invariant factors d1 | d2 | ... | dk, each >= 2; empty means trivial.
struct AbelianInvariants {
    std::vector<std::uint64_t> factors;

    std::uint64_t order() const;
    std::string str() const;  // "[2,6]"
    // Accepts only normal form: "[2,6]" parses, "[6,2]" throws.
    static AbelianInvariants parse(std::string_view text);
    // Normal form from an arbitrary list of cyclic orders.
    static AbelianInvariants from_cyclic_orders(const std::vector<std::uint64_t>& orders);

    friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
    friend auto operator<=>(const AbelianInvariants&, const AbelianInvariants&) = default;
};

// A subgroup of GL(2, Z/NZ) stored as its sorted element keys.
class Subgroup {
public:
    Subgroup(int modulus, std::vector<GL2Element> generators, std::vector<std::uint32_t> keys);

    int modulus() const { return modulus_; }
    const std::vector<GL2Element>& generators() const { return gens_; }
    const std::vector<std::uint32_t>& keys() const { return keys_; }
    std::uint64_t order() const { return keys_.size(); }
    GL2Element element(std::size_t i) const { return GL2Element::from_key(modulus_, keys_[i]); }
    std::vector<GL2Element> elements() const;

    bool contains(const GL2Element& g) const;
    bool contains(const Subgroup& other) const;
    // Position of g in keys(), or -1.
    std::int64_t index_of(const GL2Element& g) const;
    bool is_abelian() const;

    // Same modulus and same element set; generators are not compared.
    friend bool operator==(const Subgroup& x, const Subgroup& y) {
        return x.modulus_ == y.modulus_ && x.keys_ == y.keys_;
    }

private:
    int modulus_;
    std::vector<GL2Element> gens_;
    std::vector<std::uint32_t> keys_;
};

struct GroupFingerprint {
    std::uint64_t order = 0;
    std::map<std::uint64_t, std::uint64_t> order_histogram;
    AbelianInvariants abelianization;
    std::uint64_t center_order = 0;
    std::uint64_t derived_order = 0;

    friend bool operator==(const GroupFingerprint&, const GroupFingerprint&) = default;
};

class NonAbelianQuotient : public std::runtime_error {
public:
    NonAbelianQuotient(GL2Element x, GL2Element y);
    GL2Element first, second;
};

Subgroup generate_subgroup(int modulus, const std::vector<GL2Element>& gens);
Subgroup full_gl2(int modulus);
Subgroup commutator_subgroup(const Subgroup& g);
Subgroup center(const Subgroup& g);
// Smallest normal subgroup of g containing the given elements.
Subgroup normal_closure(const Subgroup& g, const std::vector<GL2Element>& elems);

// Invariants of g / normal; normal defaults to the commutator subgroup.
AbelianInvariants abelian_invariants(const Subgroup& g,
                                     const std::optional<Subgroup>& normal = std::nullopt);

GroupFingerprint fingerprint(const Subgroup& g);
std::map<std::uint64_t, std::uint64_t> order_histogram(const Subgroup& g);

// Witness w with w^-1 h w = k when the subgroups are conjugate in GL(2, Z/NZ).
std::optional<GL2Element> are_conjugate(const Subgroup& h, const Subgroup& k);
// Same search restricted to conjugators drawn from `within`.
std::optional<GL2Element> are_conjugate_in(const Subgroup& h, const Subgroup& k,
                                           const Subgroup& within);
Subgroup conjugate(const Subgroup& g, const GL2Element& w);  // w^-1 g w

bool are_isomorphic(const Subgroup& h, const Subgroup& k);

Subgroup reduction_image(const Subgroup& g, int m);
// Kernel of reduction mod m restricted to g.
Subgroup reduction_kernel(const Subgroup& g, int m);

std::vector<int> det_image(const Subgroup& g);
bool det_surjective(const Subgroup& g);
// Some element with trace 0 and determinant -1.
std::optional<GL2Element> cc_element(const Subgroup& g);
inline bool has_cc_element(const Subgroup& g) { return cc_element(g).has_value(); }

// For coprime moduli m (of a) and n (of b): every subgroup of GL(2, Z/mnZ)
// whose reductions are a and b and on which both reductions are injective,
// i.e. the graphs of isomorphisms a -> b. Sorted by element keys.
std::vector<Subgroup> isomorphism_graphs(const Subgroup& a, const Subgroup& b);
// The full preimage of (a, b) in GL(2, Z/mnZ) for coprime moduli.
Subgroup direct_product(const Subgroup& a, const Subgroup& b);

// Scalar matrices of g and |g / scalars|.
Subgroup scalar_subgroup(const Subgroup& g);
std::uint64_t projective_order(const Subgroup& g);
// Element-order histogram of g / scalars.
std::map<std::uint64_t, std::uint64_t> projective_order_histogram(const Subgroup& g);

// --- enumeration ---------------------------------------------------------

struct SubgroupFilter {
    bool det_surjective = false;
    bool cc_element = false;
    bool non_abelian = false;
    std::uint64_t min_order = 0;
    std::uint64_t max_order = 0;  // 0 means unbounded
    std::optional<Subgroup> container;
    std::string container_label;

    static SubgroupFilter admissible();
    bool accepts(const Subgroup& g) const;
    // Canonical text naming the filter; stable across runs.
    std::string descriptor() const;
    std::string hash_hex() const;
};

struct EnumerationOptions {
    std::uint64_t ceiling = 5000;
    // Empty disables the on-disk cache.
    std::optional<std::filesystem::path> cache_dir;
};

struct EnumerationStats {
    bool cache_hit = false;
    std::uint64_t classes_total = 0;
};

class EnumerationRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One representative per GL(2, Z/NZ)-conjugacy class of subgroups passing the
// filter, ordered by (order, element keys).
std::vector<Subgroup> enumerate_subgroups(int modulus, const SubgroupFilter& filter,
                                          const EnumerationOptions& options = {},
                                          EnumerationStats* stats = nullptr);

// All subgroups of `ambient` up to conjugacy inside `ambient`.
std::vector<Subgroup> subgroup_classes(const Subgroup& ambient);

// Flag, then ECL_CACHE_DIR, then the per-user cache directory.
std::filesystem::path resolve_cache_dir(const std::optional<std::filesystem::path>& flag);

}  // namespace ecl
