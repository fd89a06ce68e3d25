#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ecl/group.hpp"

namespace ecl {

enum class NamedKind {
    Borel,
    SplitCartan,
    SplitCartanNormalizer,
    NonsplitCartan,
    NonsplitCartanNormalizer,
    H5,
    H13,
    B3,
    Nns3,
    Cns2,
    Mod4G,
    Mod4H,
    Mod6H1,
    Mod6H2,
    Mod12H1pi4,
    Mod12H2pi4,
    Mod12Htilde_pi4,
    Curve32a3Level,
};

// Text form: "Borel(5)", "NonsplitCartan(7)", "NonsplitCartan(7,3)", "H5",
// "Curve32a3Level(4)". The parameter is the prime for the Cartan/Borel
// families and the 2-adic exponent for Curve32a3Level.
struct NamedGroupId {
    NamedKind kind;
    int param = 0;
    int eps = 0;  // non-split Cartans only; 0 picks the least non-residue

    static NamedGroupId parse(std::string_view text);
    std::string str() const;
    static std::vector<std::string> spellings();
};

Subgroup named_group(const NamedGroupId& id);

int least_nonresidue(int p);
int primitive_root(int p);

enum class GroupClass {
    FullGL2,
    BorelContained,
    SplitNormalizerContained,
    NonsplitNormalizerContained,
    Exceptional,
    Unclassified,
};
std::string_view to_string(GroupClass c);

// Maximal-subgroup type of a subgroup of GL(2, Z/pZ), first match in the
// order of the enumerators above.
GroupClass classify_subgroup(const Subgroup& g);

// Surjective determinant and an element of trace 0, determinant -1.
bool is_admissible(const Subgroup& g);

// Full preimage in GL(2, Z/MZ) of a subgroup mod m, where m | M.
Subgroup full_preimage(const Subgroup& g, int big_modulus);

}  // namespace ecl
