// One line per acceptance criterion; nonzero exit when any of them fails.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "ecl/families.hpp"
#include "ecl/menagerie.hpp"
#include "ecl/probe.hpp"
#include "ecl/suite.hpp"

using namespace ecl;

namespace {

constexpr std::uint64_t kBound = 100'000;
constexpr std::size_t kWitnesses = 5;

struct Outcome {
    bool pass = true;
    std::vector<std::string> problems;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            problems.push_back(what);
        }
    }
    void expect(const VerificationReport& r) { expect(r.pass, r.claim + ": " + r.counterexample.value_or("failed")); }
};

EnumerationOptions enum_opts() {
    EnumerationOptions o;
    o.cache_dir = resolve_cache_dir(std::nullopt);
    return o;
}

ProbeOptions probe_opts() {
    ProbeOptions o;
    o.bound = kBound;
    o.witness_threshold = kWitnesses;
    o.enumeration = enum_opts();
    return o;
}

std::string finding(const VerificationReport& r, const std::string& key) {
    for (const auto& [k, v] : r.findings) {
        if (k == key) return v;
    }
    return {};
}

// "{[6],[2,6]}" -> set of invariants.
std::set<AbelianInvariants> invariant_set(const std::string& text) {
    std::set<AbelianInvariants> out;
    std::size_t pos = 0;
    while ((pos = text.find('[', pos)) != std::string::npos) {
        const auto end = text.find(']', pos);
        out.insert(AbelianInvariants::parse(text.substr(pos, end - pos + 1)));
        pos = end;
    }
    return out;
}

std::set<AbelianInvariants> invariant_set(std::initializer_list<const char*> items) {
    std::set<AbelianInvariants> out;
    for (const char* s : items) out.insert(AbelianInvariants::parse(s));
    return out;
}

std::string pair_text(int m, int n) { return "(" + std::to_string(m) + "," + std::to_string(n) + ")"; }

void check_equal(Outcome& out, const std::string& what, const RationalCurve& e, int m, int n) {
    const auto v = coincide_heuristic(e, m, n, probe_opts());
    out.expect(v.verdict == Verdict::HeuristicallyEqual,
               what + " " + pair_text(m, n) + " verdict " + std::string(to_string(v.verdict)) +
                   (v.witness ? " witness " + std::to_string(*v.witness) : ""));
    out.expect(v.common >= kWitnesses, what + " " + pair_text(m, n) + " only " + std::to_string(v.common) + " witnesses");
}

// ---------------------------------------------------------------- criteria

Outcome prime_power_facts() {
    Outcome out;
    for (auto [p, n] : {std::pair{2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
        out.expect(verify_max_ppower_order(p, n));
        out.expect(verify_kernel_order(p, n));
    }
    for (auto [p, n] : {std::pair{3, 1}, {3, 2}, {5, 1}}) out.expect(verify_det_square(p, n));
    return out;
}

Outcome cartan_structure() {
    Outcome out;
    for (int p : {3, 5, 7}) out.expect(verify_split_cartan_structure(p));
    for (int p : {3, 5}) out.expect(verify_nonsplit_structure(p));
    const auto ex = verify_exceptional();
    out.expect(ex);
    out.expect(finding(ex, "H5-abelianization") == "[4]", "H5 abelianization " + finding(ex, "H5-abelianization"));
    out.expect(finding(ex, "H13-abelianization") == "[12]", "H13 abelianization " + finding(ex, "H13-abelianization"));
    return out;
}

Outcome level9_level4() {
    Outcome out;
    const auto r = verify_level9_level4_exclusion(enum_opts());
    out.expect(r);
    out.expect(invariant_set(finding(r, "level9-set")) == invariant_set({"[6]", "[2,6]", "[3,6]", "[6,6]"}),
               "S = " + finding(r, "level9-set"));
    out.expect(invariant_set(finding(r, "level4-set")) ==
                   invariant_set({"[2]", "[2,2]", "[2,2,2]", "[2,4]", "[6]", "[2,6]"}),
               "T = " + finding(r, "level4-set"));
    out.expect(finding(r, "isomorphic-pairs") == "0", "isomorphic pairs " + finding(r, "isomorphic-pairs"));
    return out;
}

Outcome pairs() {
    Outcome out;
    using Pairs = std::vector<std::pair<int, int>>;
    Pairs eight{{2, 3}, {2, 4}, {2, 6}, {3, 6}, {4, 6}, {5, 10}, {6, 8}, {6, 9}};
    auto open = scan_pairs(10, std::nullopt, enum_opts());
    std::sort(open.not_excluded.begin(), open.not_excluded.end());
    Pairs nine = eight;
    nine.emplace_back(6, 7);
    std::sort(nine.begin(), nine.end());
    out.expect(open.not_excluded == nine, "without mod-7 data: unexpected pair list");
    out.expect(open.external == Pairs{{6, 7}}, "without mod-7 data: (6,7) not the only external pair");

    const auto mod7 = GroupFile::load(std::filesystem::path(ECL_TEST_DATA_DIR) / "mod7-images.groups");
    auto closed = scan_pairs(10, mod7, enum_opts());
    std::sort(closed.not_excluded.begin(), closed.not_excluded.end());
    out.expect(closed.not_excluded == eight, "with mod-7 data: unexpected pair list");
    out.expect(closed.external.empty(), "with mod-7 data: external pairs remain");
    return out;
}

Outcome two_adic_32a3() {
    Outcome out;
    out.expect(verify_32a3({2, 3, 4, 5, 6}));
    return out;
}

Outcome cm_exclusion() {
    Outcome out;
    const auto scan = cm_exclusion_scan();
    out.expect(scan.size() == 13, "scanned " + std::to_string(scan.size()) + " CM j-invariants");
    for (const auto& e : scan) out.expect(e.roots.empty(), "rational root over j = " + e.j0.get_str());
    out.expect(verify_cm_exclusion());
    return out;
}

Outcome curve_examples() {
    Outcome out;
    const auto e40 = RationalCurve::parse("0,0,0,13,-34");
    const auto e486 = RationalCurve::parse("0,0,0,405,-9882");
    const auto e162 = RationalCurve::parse("1,-1,1,4,-1");
    check_equal(out, "40a4", e40, 2, 4);
    check_equal(out, "486d2", e486, 2, 3);
    check_equal(out, "486d2", e486, 3, 6);
    check_equal(out, "162d1", e162, 2, 4);
    const auto img = probe_image(e40, 4, probe_opts());
    out.expect(!img.minimal_survivors.empty() && img.minimal_survivors.front().order() == 2,
               "40a4 mod-4 minimal survivor order " +
                   (img.minimal_survivors.empty() ? std::string("none")
                                                  : std::to_string(img.minimal_survivors.front().order())));
    return out;
}

Outcome cyclotomic() {
    Outcome out;
    struct Row {
        const char* label;
        const char* curve;
        int level;
        std::uint64_t root;
    };
    for (const auto& r : {Row{"32a3", "0,0,0,-11,-14", 4, 8}, Row{"32a3", "0,0,0,-11,-14", 8, 16},
                          Row{"405d1", "1,-1,1,-2,-26", 7, 9}}) {
        const auto c = cyclotomic_containment(RationalCurve::parse(r.curve), r.level, r.root, probe_opts());
        const std::string tag = std::string(r.label) + " level " + std::to_string(r.level) + " root " + std::to_string(r.root);
        out.expect(c.outcome == CyclotomicResult::Outcome::Pass, tag + " " + std::string(to_string(c.outcome)));
        out.expect(c.witnesses.size() >= kWitnesses, tag + " has " + std::to_string(c.witnesses.size()) + " witnesses");
    }
    const auto s = split_set(RationalCurve::parse("0,-1,0,-4319,100435"), 5, probe_opts());
    std::set<std::uint64_t> generated{1};
    for (bool grew = true; grew;) {
        grew = false;
        for (auto ell : s.primes) {
            for (auto x : std::set<std::uint64_t>(generated)) grew |= generated.insert(x * (ell % 16) % 16).second;
        }
    }
    out.expect(s.primes.size() >= kWitnesses, "18176r2 has " + std::to_string(s.primes.size()) + " split primes at level 5");
    out.expect(generated.size() <= 2, "18176r2 residues mod 16 generate a subgroup of order " + std::to_string(generated.size()));
    return out;
}

Outcome families() {
    Outcome out;
    for (const mpq_class t : {mpq_class(1), mpq_class(2), mpq_class(1, 2)}) {
        const auto e = instantiate(FamilyId::TwoFourAbelian, t);
        check_equal(out, "TwoFourAbelian t=" + t.get_str(), e, 2, 4);
        for (auto ell : split_set(e, 2, probe_opts()).primes) {
            if (ell % 4 != 1) {
                out.expect(false, "TwoFourAbelian t=" + t.get_str() + " splits mod 2 at " + std::to_string(ell));
                break;
            }
        }
    }
    for (const mpq_class t : {mpq_class(1), mpq_class(2)}) check_equal(out, "TwoThree t=" + t.get_str(), instantiate(FamilyId::TwoThree, t), 2, 3);
    for (const mpq_class t : {mpq_class(0), mpq_class(1)}) check_equal(out, "TwoFourS3 t=" + t.get_str(), instantiate(FamilyId::TwoFourS3, t), 2, 4);
    const auto j = j_value(FamilyId::SplitCartan3J, 1);
    out.expect(j == mpq_class(9938375, 21952), "SplitCartan3J(1) = " + j.get_str());
    return out;
}

Outcome properties() {
    Outcome out;
    doctest::Context ctx;
    ctx.setOption("test-suite", "properties");
    ctx.setOption("minimal", true);
    const int rc = ctx.run();
    out.expect(rc == 0, "property suites reported failures");
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* description;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"prime-power order, kernel order and square-determinant checks", prime_power_facts},
        {"Cartan normalizer and exceptional abelianizations", cartan_structure},
        {"level-9 and level-4 abelianization sets, empty isomorphism scan", level9_level4},
        {"coincidence pairs up to 10, with and without mod-7 data", pairs},
        {"2-adic image of 32a3 at levels 4..64", two_adic_32a3},
        {"no CM j-invariant on the Mod4G j-line", cm_exclusion},
        {"curve examples 40a4, 486d2, 162d1", curve_examples},
        {"cyclotomic containments and 18176r2 mod 16", cyclotomic},
        {"family instances and the split Cartan j-value", families},
        {"randomized property suites", properties},
    };
    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o.expect(false, std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line << "criterion " << index << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.description << "  ("
             << static_cast<int>(secs * 10) / 10.0 << " s)";
        std::cout << line.str() << std::endl;
        for (const auto& p : o.problems) std::cout << "    " << p << "\n";
        failures += !o.pass;
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
