#include "ecl/menagerie.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <stdexcept>

namespace ecl {

namespace {

struct KindInfo {
    NamedKind kind;
    std::string_view name;
    bool takes_param;
};

constexpr std::array kKinds{
    KindInfo{NamedKind::Borel, "Borel", true},
    KindInfo{NamedKind::SplitCartan, "SplitCartan", true},
    KindInfo{NamedKind::SplitCartanNormalizer, "SplitCartanNormalizer", true},
    KindInfo{NamedKind::NonsplitCartan, "NonsplitCartan", true},
    KindInfo{NamedKind::NonsplitCartanNormalizer, "NonsplitCartanNormalizer", true},
    KindInfo{NamedKind::H5, "H5", false},
    KindInfo{NamedKind::H13, "H13", false},
    KindInfo{NamedKind::B3, "B3", false},
    KindInfo{NamedKind::Nns3, "Nns3", false},
    KindInfo{NamedKind::Cns2, "Cns2", false},
    KindInfo{NamedKind::Mod4G, "Mod4G", false},
    KindInfo{NamedKind::Mod4H, "Mod4H", false},
    KindInfo{NamedKind::Mod6H1, "Mod6H1", false},
    KindInfo{NamedKind::Mod6H2, "Mod6H2", false},
    KindInfo{NamedKind::Mod12H1pi4, "Mod12H1pi4", false},
    KindInfo{NamedKind::Mod12H2pi4, "Mod12H2pi4", false},
    KindInfo{NamedKind::Mod12Htilde_pi4, "Mod12Htilde_pi4", false},
    KindInfo{NamedKind::Curve32a3Level, "Curve32a3Level", true},
};

const KindInfo& info(NamedKind k) {
    for (const auto& i : kKinds) {
        if (i.kind == k) return i;
    }
    throw std::logic_error("unknown NamedKind");
}

int parse_int(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    }
    return v;
}

GL2Element m(int n, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return GL2Element(n, a, b, c, d);
}

Subgroup gen(int n, std::vector<GL2Element> gens) {
    if (gens.empty()) gens.push_back(GL2Element::identity(n));
    return generate_subgroup(n, gens);
}

void require_prime(int p) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
        throw std::invalid_argument(std::to_string(p) + " is not prime");
    }
    if (p > kModulusCeiling) {
        throw std::invalid_argument("modulus " + std::to_string(p) + " above the compiled ceiling");
    }
}

bool is_square_mod(int a, int p) {
    a = static_cast<int>(floor_mod(a, p));
    for (int x = 0; x < p; ++x) {
        if (x * x % p == a) return true;
    }
    return false;
}

int resolve_eps(const NamedGroupId& id) {
    const int p = id.param;
    if (p == 2) throw std::invalid_argument("non-split Cartan at 2: use Cns2");
    if (id.eps == 0) return least_nonresidue(p);
    const int eps = static_cast<int>(floor_mod(id.eps, p));
    if (eps == 0 || is_square_mod(eps, p)) {
        throw std::invalid_argument(std::to_string(id.eps) + " is not a non-residue mod " + std::to_string(p));
    }
    return eps;
}

Subgroup nonsplit_cartan(int p, int eps) {
    // A generator of the cyclic group {(a, eps b; b, a)} of order p^2 - 1.
    const std::uint64_t target = static_cast<std::uint64_t>(p) * p - 1;
    for (int a = 0; a < p; ++a) {
        for (int b = 1; b < p; ++b) {
            const auto g = m(p, a, static_cast<std::int64_t>(eps) * b, b, a);
            if (element_order(g) == target) return gen(p, {g});
        }
    }
    throw std::logic_error("no generator for the non-split Cartan");
}

}  // namespace

int least_nonresidue(int p) {
    require_prime(p);
    if (p == 2) throw std::invalid_argument("no quadratic non-residue mod 2");
    for (int e = 2; e < p; ++e) {
        if (!is_square_mod(e, p)) return e;
    }
    throw std::logic_error("no non-residue found");
}

int primitive_root(int p) {
    require_prime(p);
    if (p == 2) return 1;
    const auto fac = factorize(static_cast<std::uint64_t>(p - 1));
    for (int g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& [q, e] : fac) {
            std::int64_t acc = 1;
            for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(p - 1) / q; ++i) acc = acc * g % p;
            if (acc == 1) ok = false;
        }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root");
}

NamedGroupId NamedGroupId::parse(std::string_view text) {
    std::string_view name = text;
    std::vector<int> args;
    if (auto open = text.find('('); open != std::string_view::npos) {
        if (text.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + std::string(text) + "'");
        name = text.substr(0, open);
        std::string_view inner = text.substr(open + 1, text.size() - open - 2);
        while (!inner.empty()) {
            const auto comma = inner.find(',');
            args.push_back(parse_int(inner.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            inner.remove_prefix(comma + 1);
        }
    }
    for (const auto& i : kKinds) {
        if (i.name != name) continue;
        NamedGroupId id{i.kind};
        const std::size_t max_args = i.kind == NamedKind::NonsplitCartan ||
                                             i.kind == NamedKind::NonsplitCartanNormalizer
                                         ? 2
                                         : (i.takes_param ? 1 : 0);
        if (args.size() > max_args || (i.takes_param && args.empty())) {
            throw std::invalid_argument("wrong number of parameters for " + std::string(name));
        }
        if (!args.empty()) id.param = args[0];
        if (args.size() > 1) id.eps = args[1];
        return id;
    }
    throw std::invalid_argument("unknown group id '" + std::string(text) + "'");
}

std::string NamedGroupId::str() const {
    const auto& i = info(kind);
    std::string out(i.name);
    if (i.takes_param) {
        out += "(" + std::to_string(param);
        if (eps != 0) out += "," + std::to_string(eps);
        out += ")";
    }
    return out;
}

std::vector<std::string> NamedGroupId::spellings() {
    std::vector<std::string> out;
    for (const auto& i : kKinds) out.emplace_back(std::string(i.name) + (i.takes_param ? "(p)" : ""));
    out.back() = "Curve32a3Level(n)";
    return out;
}

Subgroup named_group(const NamedGroupId& id) {
    const int p = id.param;
    switch (id.kind) {
        case NamedKind::Borel: {
            require_prime(p);
            const int g = primitive_root(p);
            if (p == 2) return gen(2, {m(2, 1, 1, 0, 1)});
            return gen(p, {m(p, 1, 1, 0, 1), m(p, g, 0, 0, 1), m(p, 1, 0, 0, g)});
        }
        case NamedKind::SplitCartan: {
            require_prime(p);
            const int g = primitive_root(p);
            if (p == 2) return gen(2, {});
            return gen(p, {m(p, g, 0, 0, 1), m(p, 1, 0, 0, g)});
        }
        case NamedKind::SplitCartanNormalizer: {
            require_prime(p);
            const int g = primitive_root(p);
            if (p == 2) return gen(2, {m(2, 0, 1, 1, 0)});
            return gen(p, {m(p, g, 0, 0, 1), m(p, 1, 0, 0, g), m(p, 0, 1, 1, 0)});
        }
        case NamedKind::NonsplitCartan:
            require_prime(p);
            return nonsplit_cartan(p, resolve_eps(id));
        case NamedKind::NonsplitCartanNormalizer: {
            require_prime(p);
            auto gens = nonsplit_cartan(p, resolve_eps(id)).generators();
            gens.push_back(m(p, -1, 0, 0, 1));
            return gen(p, gens);
        }
        case NamedKind::H5:
            return gen(5, {m(5, 1, 4, 1, 1), m(5, 1, 0, 0, 2)});
        case NamedKind::H13:
            return gen(13, {m(13, 1, 12, 1, 1), m(13, 1, 0, 0, 8)});
        case NamedKind::B3:
            return gen(3, {m(3, 1, 1, 0, 1), m(3, 2, 0, 0, 1), m(3, 1, 0, 0, 2)});
        case NamedKind::Nns3:
            return gen(3, {m(3, 1, 0, 0, 2), m(3, 2, 1, 2, 2)});
        case NamedKind::Cns2:
            return gen(2, {m(2, 0, 1, 1, 1)});
        case NamedKind::Mod4G:
            return gen(4, {m(4, 1, 0, 3, 3), m(4, 3, 3, 1, 0)});
        case NamedKind::Mod4H:
            return gen(4, {m(4, 1, 1, 0, 3)});
        case NamedKind::Mod6H1:
            return gen(6, {m(6, 5, 5, 0, 1), m(6, 2, 5, 1, 3)});
        case NamedKind::Mod6H2:
            return gen(6, {m(6, 1, 1, 0, 5), m(6, 2, 5, 1, 3)});
        case NamedKind::Mod12H1pi4:
            return gen(4, {m(4, 3, 3, 0, 1), m(4, 1, 3, 2, 1)});
        case NamedKind::Mod12H2pi4:
            return gen(4, {m(4, 1, 1, 0, 3), m(4, 1, 3, 2, 1)});
        case NamedKind::Mod12Htilde_pi4:
            return gen(4, {m(4, -1, 0, 0, -1), m(4, 3, 3, 0, 1), m(4, 1, 3, 2, 1)});
        case NamedKind::Curve32a3Level: {
            if (p < 1 || (1 << p) > kModulusCeiling) {
                throw std::invalid_argument("Curve32a3Level needs 1 <= n with 2^n within the modulus ceiling");
            }
            const int n = 1 << p;
            return gen(n, {m(n, -1, 0, 0, 1), m(n, 5, 0, 0, 5), m(n, -1, -1, 4, -1)});
        }
    }
    throw std::logic_error("unhandled NamedKind");
}

std::string_view to_string(GroupClass c) {
    switch (c) {
        case GroupClass::FullGL2: return "FullGL2";
        case GroupClass::BorelContained: return "BorelContained";
        case GroupClass::SplitNormalizerContained: return "SplitNormalizerContained";
        case GroupClass::NonsplitNormalizerContained: return "NonsplitNormalizerContained";
        case GroupClass::Exceptional: return "Exceptional";
        case GroupClass::Unclassified: return "Unclassified";
    }
    return "?";
}

namespace {

// Lines of F_p^2 as primitive vectors (1, t) and (0, 1).
std::vector<std::pair<int, int>> lines(int p) {
    std::vector<std::pair<int, int>> out;
    for (int t = 0; t < p; ++t) out.emplace_back(1, t);
    out.emplace_back(0, 1);
    return out;
}

int line_index(int p, std::int64_t x, std::int64_t y) {
    x = floor_mod(x, p);
    y = floor_mod(y, p);
    if (x == 0) return p;
    return static_cast<int>(floor_mod(y * *inverse_mod(x, p), p));
}

int image_line(const GL2Element& g, int p, const std::pair<int, int>& v) {
    return line_index(p, static_cast<std::int64_t>(g.a()) * v.first + static_cast<std::int64_t>(g.b()) * v.second,
                      static_cast<std::int64_t>(g.c()) * v.first + static_cast<std::int64_t>(g.d()) * v.second);
}

bool fixes_a_line(const Subgroup& g, int p) {
    const auto ls = lines(p);
    for (std::size_t i = 0; i < ls.size(); ++i) {
        bool fixed = true;
        for (const auto& x : g.generators()) {
            if (image_line(x, p, ls[i]) != static_cast<int>(i)) {
                fixed = false;
                break;
            }
        }
        if (fixed) return true;
    }
    return false;
}

bool preserves_a_line_pair(const Subgroup& g, int p) {
    const auto ls = lines(p);
    for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t j = i + 1; j < ls.size(); ++j) {
            bool ok = true;
            for (const auto& x : g.generators()) {
                const int a = image_line(x, p, ls[i]), b = image_line(x, p, ls[j]);
                const bool same = (a == static_cast<int>(i) && b == static_cast<int>(j)) ||
                                  (a == static_cast<int>(j) && b == static_cast<int>(i));
                if (!same) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
    }
    return false;
}

bool in_some_conjugate(const Subgroup& g, const Subgroup& target) {
    for (const auto& w : all_elements(g.modulus())) {
        const auto wi = inverse(w);
        bool inside = true;
        for (const auto& x : g.generators()) {
            if (!target.contains(wi * x * w)) {
                inside = false;
                break;
            }
        }
        if (inside) return true;
    }
    return false;
}

}  // namespace

GroupClass classify_subgroup(const Subgroup& g) {
    const int p = g.modulus();
    if (!is_prime(static_cast<std::uint64_t>(p))) {
        throw std::invalid_argument("classify_subgroup needs a prime modulus, got " + std::to_string(p));
    }
    if (g.order() == gl2_order(p)) return GroupClass::FullGL2;
    if (fixes_a_line(g, p)) return GroupClass::BorelContained;
    if (preserves_a_line_pair(g, p)) return GroupClass::SplitNormalizerContained;
    if (p == 2) {
        // The non-split normalizer mod 2 is all of GL(2, Z/2).
        return GroupClass::NonsplitNormalizerContained;
    }
    if (in_some_conjugate(g, named_group({NamedKind::NonsplitCartanNormalizer, p}))) {
        return GroupClass::NonsplitNormalizerContained;
    }
    if (projective_order(g) == 24) {
        const std::map<std::uint64_t, std::uint64_t> s4{{1, 1}, {2, 9}, {3, 8}, {4, 6}};
        if (projective_order_histogram(g) == s4) return GroupClass::Exceptional;
    }
    return GroupClass::Unclassified;
}

bool is_admissible(const Subgroup& g) { return det_surjective(g) && has_cc_element(g); }

Subgroup full_preimage(const Subgroup& g, int big_modulus) {
    const int small = g.modulus();
    if (big_modulus % small != 0) throw std::invalid_argument("full_preimage: modulus does not divide");
    for (const auto& [q, e] : factorize(static_cast<std::uint64_t>(big_modulus))) {
        if (small % static_cast<int>(q) != 0) {
            throw std::invalid_argument("full_preimage: new primes in the larger modulus");
        }
    }
    std::vector<GL2Element> gens;
    for (const auto& x : g.generators()) gens.push_back(GL2Element(big_modulus, x.a(), x.b(), x.c(), x.d()));
    gens.push_back(GL2Element(big_modulus, 1 + small, 0, 0, 1));
    gens.push_back(GL2Element(big_modulus, 1, 0, 0, 1 + small));
    gens.push_back(GL2Element(big_modulus, 1, small, 0, 1));
    gens.push_back(GL2Element(big_modulus, 1, 0, small, 1));
    Subgroup out = generate_subgroup(big_modulus, gens);
    if (out.order() != g.order() * (gl2_order(big_modulus) / gl2_order(small))) {
        throw std::logic_error("full_preimage: kernel generators fell short");
    }
    return out;
}

}  // namespace ecl
