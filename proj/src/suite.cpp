#include "ecl/suite.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ecl/families.hpp"
#include "ecl/menagerie.hpp"

namespace ecl {

void VerificationReport::fail(const std::string& what) {
    if (pass) counterexample = what;
    pass = false;
}

namespace {

class Stopwatch {
public:
    explicit Stopwatch(VerificationReport& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() {
        report_.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    VerificationReport& report_;
    std::chrono::steady_clock::time_point start_;
};

VerificationReport start(std::string claim, std::vector<std::pair<std::string, std::string>> params = {}) {
    VerificationReport r;
    r.claim = std::move(claim);
    r.parameters = std::move(params);
    return r;
}

int prime_power_modulus(int p, int n) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (n < 1) throw std::invalid_argument("exponent must be at least 1");
    const std::uint64_t big = ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(n));
    if (big > static_cast<std::uint64_t>(kModulusCeiling)) {
        throw std::invalid_argument(std::to_string(p) + "^" + std::to_string(n) + " exceeds the modulus ceiling");
    }
    if (gl2_order(static_cast<int>(big)) > kExhaustionCeiling) {
        throw std::invalid_argument("|GL(2, Z/" + std::to_string(big) + ")| exceeds the exhaustion ceiling");
    }
    return static_cast<int>(big);
}

bool is_power_of(std::uint64_t value, std::uint64_t p) {
    while (value % p == 0) value /= p;
    return value == 1;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string invariant_set_text(const std::set<AbelianInvariants>& s) {
    std::vector<std::string> parts;
    for (const auto& a : s) parts.push_back(a.str());
    return "{" + join(parts, ",") + "}";
}

AbelianInvariants inv(std::vector<std::uint64_t> orders) { return AbelianInvariants::from_cyclic_orders(orders); }

std::vector<Subgroup> maximal_up_to_conjugacy(const std::vector<Subgroup>& groups) {
    std::vector<Subgroup> out;
    for (const auto& g : groups) {
        bool maximal = true;
        for (const auto& k : groups) {
            if (k.order() > g.order() && k.order() % g.order() == 0 && conjugate_inside(g, k)) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(g);
    }
    return out;
}

std::size_t involutions(const Subgroup& g) {
    std::size_t n = 0;
    for (const auto& x : g.elements()) n += element_order(x) == 2;
    return n;
}

std::string gens_text(const Subgroup& g) { return format_generator_list(g.generators()); }

}  // namespace

bool conjugate_inside(const Subgroup& g, const Subgroup& target) {
    if (g.modulus() != target.modulus()) throw std::invalid_argument("conjugate_inside: moduli differ");
    if (target.order() % g.order() != 0) return false;
    for (const auto& w : all_elements(g.modulus())) {
        const auto wi = inverse(w);
        const bool inside = std::all_of(g.generators().begin(), g.generators().end(),
                                        [&](const GL2Element& x) { return target.contains(wi * x * w); });
        if (inside) return true;
    }
    return false;
}

bool is_quotient_of(const AbelianInvariants& a, const AbelianInvariants& b) {
    // Compare the p-parts as partitions, largest cyclic factor first.
    std::set<std::uint64_t> primes;
    for (auto f : a.factors) for (const auto& [q, e] : factorize(f)) primes.insert(q);
    for (auto f : b.factors) for (const auto& [q, e] : factorize(f)) primes.insert(q);
    auto partition = [](const AbelianInvariants& x, std::uint64_t q) {
        std::vector<int> parts;
        for (auto f : x.factors) {
            int e = 0;
            while (f % q == 0) {
                f /= q;
                ++e;
            }
            if (e > 0) parts.push_back(e);
        }
        std::sort(parts.rbegin(), parts.rend());
        return parts;
    };
    for (auto q : primes) {
        const auto pa = partition(a, q), pb = partition(b, q);
        if (pb.size() > pa.size()) return false;
        for (std::size_t i = 0; i < pb.size(); ++i) {
            if (pb[i] > pa[i]) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- element scans

VerificationReport verify_max_ppower_order(int p, int n) {
    auto r = start("max-ppower-order", {{"p", std::to_string(p)}, {"n", std::to_string(n)}});
    Stopwatch sw(r);
    const int big = prime_power_modulus(p, n);
    const auto pu = static_cast<std::uint64_t>(p);
    std::uint64_t scanned = 0, prime_power_elements = 0, largest = 1;
    for (const auto& g : all_elements(big)) {
        ++scanned;
        const std::uint64_t o = element_order(g);
        if (!is_power_of(o, pu)) continue;
        ++prime_power_elements;
        largest = std::max(largest, o);
        if (o > static_cast<std::uint64_t>(big)) r.fail(g.str() + " has order " + std::to_string(o));
    }
    for (int k = 1; k <= n; ++k) {
        const auto w = GL2Element(big, 1, static_cast<std::int64_t>(ipow(pu, static_cast<unsigned>(n - k))), 0, 1);
        const auto want = ipow(pu, static_cast<unsigned>(k));
        if (element_order(w) != want) {
            r.fail("witness " + w.str() + " does not have order " + std::to_string(want));
        }
        r.note("witness-order-" + std::to_string(want), w.str());
    }
    r.note("elements-scanned", std::to_string(scanned));
    r.note("prime-power-order-elements", std::to_string(prime_power_elements));
    r.note("largest-prime-power-order", std::to_string(largest));
    return r;
}

VerificationReport verify_kernel_order(int p, int n) {
    auto r = start("kernel-order", {{"p", std::to_string(p)}, {"n", std::to_string(n)}});
    Stopwatch sw(r);
    const int big = prime_power_modulus(p, n);
    const int steps = big / p;
    const auto bound = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(n - 1)));
    std::uint64_t count = 0;
    for (int i = 0; i < steps; ++i)
        for (int j = 0; j < steps; ++j)
            for (int k = 0; k < steps; ++k)
                for (int l = 0; l < steps; ++l) {
                    const GL2Element g(big, 1 + p * i, p * j, p * k, 1 + p * l);
                    ++count;
                    if (!power(g, bound).is_identity()) {
                        r.fail(g.str() + " has order " + std::to_string(element_order(g)));
                    }
                }
    const auto expected = ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(4 * (n - 1)));
    if (count != expected) r.fail("kernel has " + std::to_string(count) + " elements");
    // Cross-check the kernel count against the group orders.
    if (gl2_order(big) / (p == big ? gl2_order(p) : gl2_order(p)) != expected) {
        r.fail("index of the kernel disagrees with |GL(2, Z/p^n)| / |GL(2, Z/p)|");
    }
    r.note("kernel-size", std::to_string(count));
    r.note("order-bound", std::to_string(bound));
    return r;
}

VerificationReport verify_det_square(int p, int n) {
    auto r = start("det-square", {{"p", std::to_string(p)}, {"n", std::to_string(n)}});
    Stopwatch sw(r);
    if (p == 2) throw std::invalid_argument("det-square needs an odd prime");
    const int big = prime_power_modulus(p, n);
    const std::uint64_t threshold = static_cast<std::uint64_t>(big) * static_cast<std::uint64_t>(p - 1);
    std::set<int> squares;
    for (int x = 1; x < p; ++x) squares.insert(x * x % p);
    std::uint64_t hits = 0;
    for (const auto& g : all_elements(big)) {
        if (element_order(g) % threshold != 0) continue;
        ++hits;
        if (!squares.count(g.det() % p)) {
            r.fail(g.str() + " has order divisible by " + std::to_string(threshold) + " and det " +
                   std::to_string(g.det()));
        }
    }
    r.note("order-multiple", std::to_string(threshold));
    r.note("elements-checked", std::to_string(hits));
    if (hits == 0) r.note("remark", "no element reaches the order threshold");
    return r;
}

// ---------------------------------------------------------------- Cartan and exceptional structure

VerificationReport verify_split_cartan_structure(int p) {
    auto r = start("split-cartan", {{"p", std::to_string(p)}});
    Stopwatch sw(r);
    if (p == 2) throw std::invalid_argument("split-cartan needs an odd prime");
    const auto ns = named_group({NamedKind::SplitCartanNormalizer, p});
    const auto u = static_cast<std::uint64_t>(p - 1);
    const AbelianInvariants plain = inv({u}), with_two = inv({u, 2}), doubled = inv({2 * u});
    std::map<std::string, int> tally;
    std::size_t considered = 0;
    for (const auto& g : subgroup_classes(ns)) {
        if (!det_surjective(g) || g.is_abelian()) continue;
        ++considered;
        const auto a = abelian_invariants(g);
        ++tally[a.str() + (has_cc_element(g) ? "+cc" : "")];
        if (a != plain && a != with_two && a != doubled) {
            r.fail("subgroup " + gens_text(g) + " has abelianization " + a.str());
        } else if (a == doubled && a != with_two && has_cc_element(g)) {
            r.fail("subgroup " + gens_text(g) + " has a trace-0 det -1 element and abelianization " + a.str());
        }
    }
    r.note("normalizer-order", std::to_string(ns.order()));
    r.note("subgroups-considered", std::to_string(considered));
    for (const auto& [k, v] : tally) r.note("abelianization " + k, std::to_string(v));
    if (considered == 0) r.fail("no det-surjective non-abelian subgroups found");
    return r;
}

VerificationReport verify_nonsplit_structure(int p) {
    auto r = start("nonsplit-cartan", {{"p", std::to_string(p)}});
    Stopwatch sw(r);
    if (p == 2) throw std::invalid_argument("nonsplit-cartan needs an odd prime");
    const auto nns = named_group({NamedKind::NonsplitCartanNormalizer, p});
    const auto cns = named_group({NamedKind::NonsplitCartan, p});
    const AbelianInvariants expected = inv({2, static_cast<std::uint64_t>(p - 1)});
    std::set<std::uint32_t> norms;  // {c^(p+1)}
    for (const auto& c : cns.elements()) norms.insert(power(c, p + 1).key());

    // Conjugation by the non-Cartan coset raises Cartan elements to the p-th power.
    std::size_t pairs = 0;
    for (const auto& tau : nns.elements()) {
        if (cns.contains(tau)) continue;
        const auto ti = inverse(tau);
        for (const auto& h : cns.elements()) {
            ++pairs;
            if (tau * h * ti != power(h, p)) {
                r.fail("tau = " + tau.str() + ", h = " + h.str() + ": tau h tau^-1 != h^p");
            }
        }
    }
    r.note("conjugation-rule-pairs", std::to_string(pairs));

    std::size_t considered = 0;
    for (const auto& g : subgroup_classes(nns)) {
        if (!det_surjective(g) || g.is_abelian() || !has_cc_element(g)) continue;
        ++considered;
        const auto a = abelian_invariants(g);
        if (a != expected) r.fail("subgroup " + gens_text(g) + " has abelianization " + a.str());
        std::vector<GL2Element> in_cartan;
        for (const auto& x : g.elements()) {
            if (cns.contains(x)) in_cartan.push_back(x);
        }
        const auto tau = *cc_element(g);
        if (cns.contains(tau)) r.fail("trace-0 det -1 element " + tau.str() + " lies in the Cartan");
        if (g.order() != 2 * in_cartan.size()) {
            r.fail("subgroup " + gens_text(g) + ": |G| != 2 |G cap C_ns|");
        }
        auto gens = in_cartan;
        gens.push_back(tau);
        if (!(generate_subgroup(p, gens) == g)) r.fail("subgroup " + gens_text(g) + " is not <H, tau>");
        for (const auto& x : g.elements()) {
            if (cns.contains(x)) continue;
            const auto sq = x * x;
            if (!norms.count(sq.key()) || !g.contains(sq)) {
                r.fail("coset element " + x.str() + " squares outside C_ns^(p+1) cap H");
            }
        }
    }
    r.note("normalizer-order", std::to_string(nns.order()));
    r.note("subgroups-considered", std::to_string(considered));
    r.note("expected-abelianization", expected.str());
    if (considered == 0) r.fail("no qualifying subgroups found");
    return r;
}

VerificationReport verify_exceptional() {
    auto r = start("exceptional");
    Stopwatch sw(r);
    const std::map<std::uint64_t, std::uint64_t> s4{{1, 1}, {2, 9}, {3, 8}, {4, 6}};
    for (const auto& [kind, p, want] : {std::tuple{NamedKind::H5, 5, inv({4})}, std::tuple{NamedKind::H13, 13, inv({12})}}) {
        const auto g = named_group({kind});
        const std::string name = "H" + std::to_string(p);
        const auto a = abelian_invariants(g);
        r.note(name + "-abelianization", a.str());
        r.note(name + "-projective-order", std::to_string(projective_order(g)));
        if (a != want) r.fail(name + " abelianization " + a.str() + ", expected " + want.str());
        if (projective_order(g) != 24) r.fail(name + " projective order " + std::to_string(projective_order(g)));
        if (projective_order_histogram(g) != s4) r.fail(name + " projective element orders differ from S4");
        if (classify_subgroup(g) != GroupClass::Exceptional) r.fail(name + " not classified as exceptional");
    }
    return r;
}

// ---------------------------------------------------------------- level 9 versus level 4

VerificationReport verify_level9_level4_exclusion(const EnumerationOptions& options) {
    auto r = start("level9-level4");
    Stopwatch sw(r);
    const auto a9 = enumerate_subgroups(9, SubgroupFilter::admissible(), options);
    const auto a4 = enumerate_subgroups(4, SubgroupFilter::admissible(), options);
    const std::set<AbelianInvariants> s_expected{inv({6}), inv({2, 6}), inv({3, 6}), inv({6, 6})};
    const std::set<AbelianInvariants> t_expected{inv({2}), inv({2, 2}), inv({2, 2, 2}), inv({2, 4}), inv({6}), inv({2, 6})};
    std::set<AbelianInvariants> s_found, t_found;
    std::map<AbelianInvariants, int> s_count, t_count;
    for (const auto& g : a9) {
        if (g.is_abelian()) continue;
        const auto a = abelian_invariants(g);
        s_found.insert(a);
        ++s_count[a];
    }
    for (const auto& g : a4) {
        if (g.is_abelian()) continue;
        const auto a = abelian_invariants(g);
        t_found.insert(a);
        ++t_count[a];
    }
    r.note("level9-set", invariant_set_text(s_found));
    r.note("level4-set", invariant_set_text(t_found));
    for (const auto& [a, c] : s_count) r.note("level9-classes " + a.str(), std::to_string(c));
    for (const auto& [a, c] : t_count) r.note("level4-classes " + a.str(), std::to_string(c));
    if (s_found != s_expected) r.fail("level-9 abelianizations " + invariant_set_text(s_found));
    if (t_found != t_expected) r.fail("level-4 abelianizations " + invariant_set_text(t_found));

    // Q(i, zeta_9) has group Z/2 x Z/6, which must be a quotient on both sides.
    const auto target = inv({2, 6});
    std::set<AbelianInvariants> both;
    for (const auto& a : s_found) {
        if (t_found.count(a) && is_quotient_of(a, target)) both.insert(a);
    }
    r.note("shared-with-cyclotomic-quotient", invariant_set_text(both));
    if (both != std::set<AbelianInvariants>{target}) r.fail("shared abelianizations " + invariant_set_text(both));

    const auto cns2_lift = full_preimage(named_group({NamedKind::Cns2}), 4);
    const auto b3 = named_group({NamedKind::B3});
    const auto nns3 = named_group({NamedKind::Nns3});
    std::vector<Subgroup> g4s, g9s;
    for (const auto& g : a4) {
        if (!g.is_abelian() && abelian_invariants(g) == target) g4s.push_back(g);
    }
    for (const auto& g : a9) {
        if (!g.is_abelian() && abelian_invariants(g) == target) g9s.push_back(g);
    }
    for (const auto& g : g4s) {
        if (!conjugate_inside(g, cns2_lift)) r.fail("level-4 group " + gens_text(g) + " escapes the lift of C_ns(2)");
    }
    std::size_t in_borel = 0, in_nonsplit = 0;
    for (const auto& g : g9s) {
        const auto mod3 = reduction_image(g, 3);
        const bool bo = conjugate_inside(mod3, b3), ns = conjugate_inside(mod3, nns3);
        in_borel += bo;
        in_nonsplit += ns;
        if (!bo && !ns) r.fail("level-9 group " + gens_text(g) + " escapes both lifts");
    }
    r.note("level4-candidates", std::to_string(g4s.size()));
    r.note("level9-candidates", std::to_string(g9s.size()));
    r.note("level9-in-borel-lift", std::to_string(in_borel));
    r.note("level9-in-nonsplit-lift", std::to_string(in_nonsplit));
    std::size_t matches = 0;
    for (const auto& g : g4s) {
        for (const auto& h : g9s) {
            if (g.order() == h.order() && are_isomorphic(g, h)) {
                ++matches;
                r.fail("isomorphic pair " + gens_text(g) + " mod 4 and " + gens_text(h) + " mod 9");
            }
        }
    }
    r.note("isomorphic-pairs", std::to_string(matches));
    return r;
}

// ---------------------------------------------------------------- abelian table and pair scan

const std::map<int, std::vector<AbelianInvariants>>& abelian_reference_table() {
    static const std::map<int, std::vector<AbelianInvariants>> table{
        {2, {inv({}), inv({2}), inv({3})}},
        {3, {inv({2}), inv({2, 2})}},
        {4, {inv({2}), inv({2, 2}), inv({2, 2, 2}), inv({2, 2, 2, 2})}},
        {5, {inv({4}), inv({2, 4}), inv({4, 4})}},
        {6, {inv({2, 2}), inv({2, 2, 2})}},
        {8, {inv({2, 2, 2, 2}), inv({2, 2, 2, 2, 2}), inv({2, 2, 2, 2, 2, 2})}},
    };
    return table;
}

VerificationReport verify_abelian_table() {
    auto r = start("abelian-table");
    Stopwatch sw(r);
    for (const auto& [n, groups] : abelian_reference_table()) {
        std::vector<std::string> parts;
        for (const auto& g : groups) {
            parts.push_back(g.str());
            // Each abelian Galois group contains Gal(Q(zeta_n)/Q).
            const auto units = AbelianInvariants::from_cyclic_orders([&] {
                std::vector<std::uint64_t> o;
                for (const auto& [q, e] : factorize(static_cast<std::uint64_t>(n))) {
                    if (q == 2 && e >= 3) {
                        o.push_back(2);
                        o.push_back(ipow(2, e - 2));
                    } else if (q == 2) {
                        if (e == 2) o.push_back(2);
                    } else {
                        o.push_back(ipow(q, e - 1) * (q - 1));
                    }
                }
                return o;
            }());
            if (!is_quotient_of(g, units)) r.fail("level " + std::to_string(n) + ": " + g.str() + " lacks (Z/nZ)^x");
        }
        r.note("level " + std::to_string(n), "{" + join(parts, ",") + "}");
    }
    return r;
}

namespace {

bool is_prime_power(int n, int* prime = nullptr) {
    const auto f = factorize(static_cast<std::uint64_t>(n));
    if (f.size() != 1) return false;
    if (prime) *prime = static_cast<int>(f[0].first);
    return true;
}

bool allowed_by_table(int level, const AbelianInvariants& a) {
    const auto& t = abelian_reference_table();
    const auto it = t.find(level);
    if (it == t.end()) return true;
    return std::find(it->second.begin(), it->second.end(), a) != it->second.end();
}

}  // namespace

PairScan scan_pairs(int max_level, const std::optional<GroupFile>& mod7_images, const EnumerationOptions& options,
                    VerificationReport* report) {
    if (max_level < 3) throw std::invalid_argument("pair scan needs a maximum level of at least 3");
    PairScan out;
    std::map<int, std::vector<Subgroup>> adm;
    std::map<int, std::vector<GroupFingerprint>> prints;
    auto admissible = [&](int n) -> const std::vector<Subgroup>& {
        auto it = adm.find(n);
        if (it == adm.end()) {
            it = adm.emplace(n, enumerate_subgroups(n, SubgroupFilter::admissible(), options)).first;
            auto& fp = prints[n];
            for (const auto& g : it->second) fp.push_back(fingerprint(g));
        }
        return it->second;
    };
    std::optional<std::vector<Subgroup>> mod7;
    if (mod7_images) {
        if (mod7_images->modulus != 7) throw std::invalid_argument("mod-7 image file has modulus " + std::to_string(mod7_images->modulus));
        mod7.emplace();
        for (const auto& e : mod7_images->groups) {
            auto g = generate_subgroup(7, e.generators);
            if (e.order && *e.order != g.order()) {
                throw std::invalid_argument("mod-7 image '" + e.label + "' has order " + std::to_string(g.order()) +
                                            ", file says " + std::to_string(*e.order));
            }
            mod7->push_back(std::move(g));
        }
    }
    auto say = [&](const std::string& k, const std::string& v) {
        if (report) report->note(k, v);
    };

    for (int m = 2; m <= max_level; ++m) {
        for (int n = m + 1; n <= max_level; ++n) {
            const auto key = std::make_pair(m, n);
            const std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
            int pm = 0, pn = 0;
            if (is_prime_power(m, &pm) && is_prime_power(n, &pn)) {
                const bool allowed = pm != pn ? key == std::make_pair(2, 3) : key == std::make_pair(2, 4);
                if (!allowed) {
                    out.reasons[key] = "excluded: prime-power rule";
                    say(tag, out.reasons[key]);
                    continue;
                }
            }
            const auto& gm = admissible(m);
            const auto& gn = admissible(n);
            std::vector<std::pair<std::size_t, std::size_t>> matches;
            for (std::size_t i = 0; i < gm.size(); ++i) {
                for (std::size_t j = 0; j < gn.size(); ++j) {
                    if (!(prints[m][i] == prints[n][j])) continue;
                    if (are_isomorphic(gm[i], gn[j])) matches.emplace_back(i, j);
                }
            }
            const std::size_t all_matches = matches.size();
            if (matches.empty()) {
                out.reasons[key] = "excluded: no isomorphic admissible images";
                say(tag, out.reasons[key]);
                continue;
            }
            std::erase_if(matches, [&](const auto& ij) {
                const auto& g = gm[ij.first];
                if (!g.is_abelian()) return false;
                const auto a = abelian_invariants(g);
                return !allowed_by_table(m, a) || !allowed_by_table(n, a);
            });
            if (matches.empty()) {
                out.reasons[key] = "excluded: every match is abelian and outside the reference table (" +
                                   std::to_string(all_matches) + " matches)";
                say(tag, out.reasons[key]);
                continue;
            }
            if (n == 7 || m == 7) {
                const int other = m == 7 ? n : m;
                const bool seven_first = m == 7;
                if (!mod7) {
                    // Annotate with the fiber-product count without acting on it.
                    std::size_t admissible_graphs = 0;
                    if (7 * other <= kModulusCeiling && std::gcd(7, other) == 1) {
                        for (const auto& [i, j] : matches) {
                            const auto& g7 = seven_first ? gm[i] : gn[j];
                            const auto& go = seven_first ? gn[j] : gm[i];
                            for (const auto& s : isomorphism_graphs(go, g7)) admissible_graphs += is_admissible(s);
                        }
                    }
                    out.external.push_back(key);
                    out.not_excluded.push_back(key);
                    out.reasons[key] = "external data required: " + std::to_string(matches.size()) +
                                       " non-abelian matches; level-" + std::to_string(7 * other) +
                                       " admissible graphs found: " + std::to_string(admissible_graphs);
                    say(tag, out.reasons[key]);
                    continue;
                }
                std::size_t dropped_by_data = 0, dropped_by_graph = 0;
                std::erase_if(matches, [&](const auto& ij) {
                    const auto& g7 = seven_first ? gm[ij.first] : gn[ij.second];
                    const auto& go = seven_first ? gn[ij.second] : gm[ij.first];
                    const bool listed = std::any_of(mod7->begin(), mod7->end(), [&](const Subgroup& h) {
                        return h.order() == g7.order() && are_conjugate(g7, h).has_value();
                    });
                    if (!listed) {
                        ++dropped_by_data;
                        return true;
                    }
                    if (7 * other > kModulusCeiling || std::gcd(7, other) != 1) return false;
                    for (const auto& s : isomorphism_graphs(go, g7)) {
                        if (is_admissible(s)) return false;
                    }
                    ++dropped_by_graph;
                    return true;
                });
                if (matches.empty()) {
                    out.reasons[key] = "excluded: mod-7 data (" + std::to_string(dropped_by_data) +
                                       " unlisted) and no admissible level-" + std::to_string(7 * other) +
                                       " graph (" + std::to_string(dropped_by_graph) + ")";
                    say(tag, out.reasons[key]);
                    continue;
                }
            }
            out.not_excluded.push_back(key);
            out.reasons[key] = "not excluded: " + std::to_string(matches.size()) + " matching admissible pairs";
            say(tag, out.reasons[key]);
        }
    }
    return out;
}

VerificationReport verify_pairs(int max_level, const std::optional<GroupFile>& mod7_images,
                                const EnumerationOptions& options) {
    auto r = start("pairs", {{"max", std::to_string(max_level)}, {"mod7-data", mod7_images ? "supplied" : "absent"}});
    Stopwatch sw(r);
    const auto scan = scan_pairs(max_level, mod7_images, options, &r);
    std::vector<std::string> listed;
    for (const auto& [m, n] : scan.not_excluded) listed.push_back("(" + std::to_string(m) + "," + std::to_string(n) + ")");
    r.note("not-excluded", join(listed, " "));
    if (max_level == 10) {
        std::vector<std::pair<int, int>> expected{{2, 3}, {2, 4}, {2, 6}, {3, 6}, {4, 6}, {5, 10}, {6, 8}, {6, 9}};
        std::vector<std::pair<int, int>> expected_external;
        if (!mod7_images) {
            expected.emplace_back(6, 7);
            expected_external.emplace_back(6, 7);
        }
        std::sort(expected.begin(), expected.end());
        auto got = scan.not_excluded;
        std::sort(got.begin(), got.end());
        if (got != expected) r.fail("not-excluded pairs " + join(listed, " "));
        if (scan.external != expected_external) r.fail("unexpected external-data flags");
    }
    return r;
}

// ---------------------------------------------------------------- 2-adic checks

VerificationReport verify_32a3(const std::vector<int>& levels) {
    auto r = start("2adic-32a3");
    {
        std::vector<std::string> ls;
        for (int n : levels) ls.push_back(std::to_string(n));
        r.parameters.emplace_back("levels", join(ls, ","));
    }
    Stopwatch sw(r);
    for (int n : levels) {
        if (n < 2 || (1 << std::min(n, 20)) > kModulusCeiling) {
            throw std::invalid_argument("level 2^" + std::to_string(n) + " outside 4.." + std::to_string(kModulusCeiling));
        }
        const int big = 1 << n;
        const std::string at = "n=" + std::to_string(n) + ": ";
        const GL2Element a(big, -1, 0, 0, 1), b(big, 5, 0, 0, 5), c(big, -1, -1, 4, -1);
        const auto ci = inverse(c);
        if (b * c != c * b) r.fail(at + "BC != CB");
        if (a * b != b * a) r.fail(at + "AB != BA");
        if (a * c * a != b * ci) r.fail(at + "ACA != BC^-1");
        if (!power(b, 1LL << (n - 2)).is_identity()) r.fail(at + "B^(2^(n-2)) != Id");
        if (!power(c, 1LL << n).is_identity()) r.fail(at + "C^(2^n) != Id");
        const auto g = named_group({NamedKind::Curve32a3Level, n});
        const std::uint64_t want = 1ULL << (2 * n - 1);
        if (g.order() != want) r.fail(at + "order " + std::to_string(g.order()) + " != " + std::to_string(want));
        const auto d = b * ci * ci;
        const auto dsub = generate_subgroup(big, {d});
        if (!(normal_closure(g, {d}) == dsub)) r.fail(at + "<D> is not normal");
        const auto q = abelian_invariants(g, dsub);
        const auto q_want = inv({2, 1ULL << (n - 1)});
        if (q != q_want) r.fail(at + "quotient " + q.str() + " != " + q_want.str());
        r.note(at + "order", std::to_string(g.order()));
        r.note(at + "quotient-by-D", q.str());
    }
    return r;
}

std::vector<RzbEntry> rzb_levels(const GroupFile& file) {
    int p = 0;
    if (!is_prime_power(file.modulus, &p)) {
        throw std::invalid_argument("group file modulus " + std::to_string(file.modulus) + " is not a prime power");
    }
    std::vector<RzbEntry> out;
    for (const auto& e : file.groups) {
        if (e.generators.empty()) throw std::invalid_argument("group '" + e.label + "' has no generators");
        const auto g = generate_subgroup(file.modulus, e.generators);
        if (e.order && *e.order != g.order()) {
            throw std::invalid_argument("group '" + e.label + "' has order " + std::to_string(g.order()) +
                                        ", file says " + std::to_string(*e.order));
        }
        RzbEntry entry{e.label, {}, {}};
        for (int k = p; k <= file.modulus; k *= p) entry.level_orders.push_back(reduction_image(g, k).order());
        for (std::size_t k = 0; k + 1 < entry.level_orders.size(); ++k) {
            if (entry.level_orders[k] == entry.level_orders[k + 1]) entry.coincidence_levels.push_back(static_cast<int>(k + 1));
        }
        out.push_back(std::move(entry));
    }
    return out;
}

namespace {

std::string levels_text(const std::vector<int>& ks) {
    if (ks.empty()) return "none";
    std::vector<std::string> parts;
    for (int k : ks) parts.push_back(std::to_string(k));
    return join(parts, ",");
}

}  // namespace

VerificationReport rzb_scan(const GroupFile& file) {
    auto r = start("rzb-scan", {{"modulus", std::to_string(file.modulus)}, {"groups", std::to_string(file.groups.size())}});
    Stopwatch sw(r);
    for (const auto& e : rzb_levels(file)) {
        std::vector<std::string> orders;
        for (auto o : e.level_orders) orders.push_back(std::to_string(o));
        r.note(e.label + " level-orders", join(orders, ","));
        r.note(e.label + " coincidence-levels", levels_text(e.coincidence_levels));
    }
    return r;
}

VerificationReport rzb_scan_with_expectations(const GroupFile& file) {
    auto r = rzb_scan(file);
    std::map<std::string, std::string> expected;
    for (const auto& [k, v] : file.meta) {
        if (k != "expect") continue;
        const auto sp = v.find(' ');
        if (sp == std::string::npos) throw std::invalid_argument("meta expect needs '<label> <levels>'");
        expected[v.substr(0, sp)] = v.substr(sp + 1);
    }
    for (const auto& e : rzb_levels(file)) {
        const auto it = expected.find(e.label);
        if (it == expected.end()) continue;
        if (it->second != levels_text(e.coincidence_levels)) {
            r.fail(e.label + ": coincidence levels " + levels_text(e.coincidence_levels) + ", expected " + it->second);
        }
    }
    r.note("expectations-checked", std::to_string(expected.size()));
    return r;
}

// ---------------------------------------------------------------- level 6 and level 12 searches

VerificationReport verify_mod6_images(const EnumerationOptions& options) {
    auto r = start("mod6-images");
    Stopwatch sw(r);
    SubgroupFilter f;
    f.det_surjective = true;
    std::vector<Subgroup> both;
    for (const auto& g : enumerate_subgroups(6, f, options)) {
        if (reduction_image(g, 2).order() == g.order() && reduction_image(g, 3).order() == g.order()) both.push_back(g);
    }
    const auto top = maximal_up_to_conjugacy(both);
    r.note("det-surjective-with-injective-reductions", std::to_string(both.size()));
    r.note("maximal-classes", std::to_string(top.size()));
    const auto h1 = named_group({NamedKind::Mod6H1});
    const auto h2 = named_group({NamedKind::Mod6H2});
    if (top.size() != 2) r.fail(std::to_string(top.size()) + " maximal classes instead of 2");
    std::size_t hit1 = 0, hit2 = 0;
    for (const auto& g : top) {
        hit1 += are_conjugate(g, h1).has_value();
        hit2 += are_conjugate(g, h2).has_value();
        r.note("maximal " + gens_text(g), "order " + std::to_string(g.order()));
    }
    if (hit1 != 1 || hit2 != 1) r.fail("maximal classes do not match Mod6H1 and Mod6H2");
    if (are_conjugate(h1, h2)) r.fail("Mod6H1 and Mod6H2 are conjugate");
    const auto h1_mod3 = reduction_image(h1, 3);
    r.note("Mod6H1-mod3-order", std::to_string(h1_mod3.order()));
    if (h1_mod3.order() != 6) r.fail("Mod6H1 mod 3 has order " + std::to_string(h1_mod3.order()));
    for (const auto& h : {h1, h2}) {
        if (!det_surjective(h)) r.fail(gens_text(h) + " lacks surjective determinant");
    }
    return r;
}

VerificationReport verify_mod12_groups(const EnumerationOptions& options) {
    auto r = start("mod12-groups");
    Stopwatch sw(r);
    std::vector<Subgroup> both;
    for (const auto& g : enumerate_subgroups(12, SubgroupFilter::admissible(), options)) {
        if (g.is_abelian()) continue;
        if (reduction_image(g, 3).order() == g.order() && reduction_image(g, 4).order() == g.order()) both.push_back(g);
    }
    const auto top = maximal_up_to_conjugacy(both);
    r.note("non-abelian-admissible-with-injective-reductions", std::to_string(both.size()));
    r.note("maximal-classes", std::to_string(top.size()));
    if (top.size() != 2) r.fail(std::to_string(top.size()) + " maximal classes instead of 2");
    const auto ns3 = named_group({NamedKind::SplitCartanNormalizer, 3});
    const auto pi4_h1 = named_group({NamedKind::Mod12H1pi4});
    const auto pi4_h2 = named_group({NamedKind::Mod12H2pi4});
    const auto htilde = direct_product(ns3, named_group({NamedKind::Mod12Htilde_pi4}));
    std::size_t hit1 = 0, hit2 = 0;
    for (const auto& g : top) {
        const auto m3 = reduction_image(g, 3), m4 = reduction_image(g, 4);
        if (!are_conjugate(m3, ns3)) r.fail("maximal " + gens_text(g) + " mod 3 is not N_s(3)");
        const bool c1 = are_conjugate(m4, pi4_h1).has_value(), c2 = are_conjugate(m4, pi4_h2).has_value();
        hit1 += c1;
        hit2 += c2;
        if (g.order() != 8 || g.is_abelian() || involutions(g) != 5) r.fail("maximal " + gens_text(g) + " is not dihedral of order 8");
        if (!conjugate_inside(g, htilde)) r.fail("maximal " + gens_text(g) + " is not inside the fiber product");
        r.note("maximal " + gens_text(g), std::string("mod-4 image ") + (c1 ? "Mod12H1pi4" : c2 ? "Mod12H2pi4" : "other"));
    }
    if (hit1 != 1 || hit2 != 1) r.fail("mod-4 images do not match Mod12H1pi4 and Mod12H2pi4 once each");
    // Rebuild both groups as graphs of isomorphisms N_s(3) -> pi4(H_i).
    for (const auto& [name, target] : {std::pair{"Mod12H1pi4", pi4_h1}, std::pair{"Mod12H2pi4", pi4_h2}}) {
        std::size_t graphs = 0, admissible = 0, matching = 0;
        for (const auto& s : isomorphism_graphs(ns3, target)) {
            ++graphs;
            if (!is_admissible(s)) continue;
            ++admissible;
            matching += std::any_of(top.begin(), top.end(), [&](const Subgroup& t) { return are_conjugate(s, t).has_value(); });
        }
        r.note(std::string(name) + " graphs", std::to_string(graphs) + " (" + std::to_string(admissible) + " admissible)");
        if (admissible == 0 || matching != admissible) r.fail(std::string(name) + ": admissible graphs outside the maximal classes");
    }
    r.note("fiber-product-order", std::to_string(htilde.order()));
    return r;
}

VerificationReport verify_cm_exclusion() {
    auto r = start("cm-exclusion");
    Stopwatch sw(r);
    for (const auto& e : cm_exclusion_scan(FamilyId::Mod4GJLine)) {
        r.note("j=" + e.j0.get_str(), e.roots.empty() ? "no rational root (" + std::to_string(e.candidates_tested) + " candidates)"
                                                     : "rational root " + e.roots.front().get_str());
        if (!e.roots.empty()) r.fail("t = " + e.roots.front().get_str() + " maps to CM j = " + e.j0.get_str());
    }
    const auto control_j = j_value(FamilyId::Mod4GJLine, 1);
    const auto control = rational_preimages(FamilyId::Mod4GJLine, control_j);
    const bool found = std::find(control.roots.begin(), control.roots.end(), mpq_class(1)) != control.roots.end();
    r.note("control j=" + control_j.get_str(), found ? "root t=1 found" : "root t=1 missed");
    if (!found) r.fail("planted root t=1 not recovered for j = " + control_j.get_str());
    return r;
}

}  // namespace ecl
