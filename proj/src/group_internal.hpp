#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ecl/group.hpp"

namespace ecl::detail {

std::uint64_t order_in_group(const GL2Element& g, std::uint64_t group_order,
                             const std::vector<std::pair<std::uint64_t, int>>& factors);

// Subgroup with exactly these elements, generated greedily in the given order.
Subgroup from_elements(int modulus, const std::vector<GL2Element>& elems);

// Drops generators already implied by earlier ones.
std::vector<GL2Element> small_generating_set(const Subgroup& g);

}  // namespace ecl::detail
