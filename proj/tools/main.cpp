// ecl: command-line front end for the division-field toolkit.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecl/ec.hpp"
#include "ecl/families.hpp"
#include "ecl/groupfile.hpp"
#include "ecl/menagerie.hpp"
#include "ecl/probe.hpp"
#include "ecl/suite.hpp"
#include "ecl/version.hpp"
#include "report.hpp"

#ifndef ECL_DEFAULT_DATA_DIR
#define ECL_DEFAULT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace ecl;
using ecl::cli::Report;
using ecl::cli::Section;

namespace {

// Bad input discovered after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = kDefaultSeed;
    unsigned jobs = 1;
    std::string out;
    std::string cache_dir;
};

fs::path data_dir() {
    if (const char* env = std::getenv("ECL_DATA_DIR"); env && *env) return env;
    return ECL_DEFAULT_DATA_DIR;
}

EnumerationOptions enumeration(const Globals& g) {
    EnumerationOptions o;
    o.cache_dir = resolve_cache_dir(g.cache_dir.empty() ? std::nullopt : std::optional<fs::path>(g.cache_dir));
    return o;
}

ProbeOptions probe_options(const Globals& g, std::uint64_t bound) {
    if (bound < 2) throw UsageError("--bound " + std::to_string(bound) + " leaves no primes to examine");
    ProbeOptions o;
    o.bound = bound;
    o.seed = g.seed;
    o.jobs = std::max(1u, g.jobs);
    o.enumeration = enumeration(g);
    return o;
}

std::string join_numbers(const std::vector<std::uint64_t>& xs, std::size_t limit = 40) {
    std::string out;
    for (std::size_t i = 0; i < xs.size() && i < limit; ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    if (xs.size() > limit) out += ",... (" + std::to_string(xs.size()) + " total)";
    return out.empty() ? "none" : out;
}

std::string command_echo(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if (i == 0) a = fs::path(a).filename().string();
        if (a.find_first_of(" \t|;") != std::string::npos) a = "'" + a + "'";
        out += (i ? " " : "") + a;
    }
    return out;
}

bool is_pass(const std::string& status) {
    return status == "pass" || status == "ok" || status == "heuristically-equal";
}

// ------------------------------------------------------------------ verify

const std::vector<std::string> kClaims{
    "max-ppower-order", "kernel-order", "det-square",  "split-cartan", "nonsplit-cartan",
    "exceptional",      "level9-level4", "pairs",      "2adic-32a3",   "rzb-scan",
    "mod6-images",      "mod12-groups", "cm-exclusion", "abelian-table",
};

struct VerifyArgs {
    std::vector<std::string> claims;
    bool all = false;
    std::optional<int> p, n;
    int max_level = 10;
    std::string mod7;
    std::string file;
    std::vector<int> levels;
};

std::optional<GroupFile> load_optional(const std::string& path) {
    if (path.empty() || path == "none") return std::nullopt;
    return GroupFile::load(path);
}

void run_claim(const std::string& claim, const VerifyArgs& a, const Globals& g, Report& report) {
    auto add = [&](const VerificationReport& r) { report.sections.push_back(cli::from_verification(r)); };
    auto need = [&](const std::optional<int>& v, const char* flag) {
        if (!v) throw UsageError("claim " + claim + " needs " + flag);
        return *v;
    };
    const auto opts = enumeration(g);
    if (claim == "max-ppower-order") {
        add(verify_max_ppower_order(need(a.p, "--p"), need(a.n, "--n")));
    } else if (claim == "kernel-order") {
        add(verify_kernel_order(need(a.p, "--p"), need(a.n, "--n")));
    } else if (claim == "det-square") {
        add(verify_det_square(need(a.p, "--p"), need(a.n, "--n")));
    } else if (claim == "split-cartan") {
        add(verify_split_cartan_structure(need(a.p, "--p")));
    } else if (claim == "nonsplit-cartan") {
        add(verify_nonsplit_structure(need(a.p, "--p")));
    } else if (claim == "exceptional") {
        add(verify_exceptional());
    } else if (claim == "level9-level4") {
        add(verify_level9_level4_exclusion(opts));
    } else if (claim == "pairs") {
        add(verify_pairs(a.max_level, load_optional(a.mod7), opts));
    } else if (claim == "2adic-32a3") {
        add(verify_32a3(a.levels.empty() ? std::vector<int>{2, 3, 4, 5, 6} : a.levels));
    } else if (claim == "rzb-scan") {
        const fs::path file = a.file.empty() ? data_dir() / "rzb-sample.groups" : fs::path(a.file);
        add(rzb_scan_with_expectations(GroupFile::load(file)));
    } else if (claim == "mod6-images") {
        add(verify_mod6_images(opts));
    } else if (claim == "mod12-groups") {
        add(verify_mod12_groups(opts));
    } else if (claim == "cm-exclusion") {
        add(verify_cm_exclusion());
    } else if (claim == "abelian-table") {
        add(verify_abelian_table());
    } else {
        throw UsageError("unknown claim '" + claim + "'");
    }
}

void run_all(const Globals& g, Report& report) {
    auto add = [&](const VerificationReport& r) { report.sections.push_back(cli::from_verification(r)); };
    const auto opts = enumeration(g);
    for (auto [p, n] : {std::pair{2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
        add(verify_max_ppower_order(p, n));
        add(verify_kernel_order(p, n));
    }
    for (auto [p, n] : {std::pair{3, 1}, {3, 2}, {5, 1}}) add(verify_det_square(p, n));
    for (int p : {3, 5, 7}) add(verify_split_cartan_structure(p));
    for (int p : {3, 5}) add(verify_nonsplit_structure(p));
    add(verify_exceptional());
    add(verify_level9_level4_exclusion(opts));
    add(verify_abelian_table());
    add(verify_pairs(10, std::nullopt, opts));
    add(verify_pairs(10, GroupFile::load(data_dir() / "mod7-images.groups"), opts));
    add(verify_32a3({2, 3, 4, 5, 6}));
    add(rzb_scan_with_expectations(GroupFile::load(data_dir() / "rzb-sample.groups")));
    add(verify_mod6_images(opts));
    add(verify_mod12_groups(opts));
    add(verify_cm_exclusion());
}

// ------------------------------------------------------------------ groups

Section describe_group(const std::string& name, const Subgroup& g) {
    Section s{name, "ok", {}, 0};
    s.add("modulus", std::to_string(g.modulus()));
    s.add("order", std::to_string(g.order()));
    s.add("generators", format_generator_list(g.generators()));
    s.add("abelian", g.is_abelian() ? "yes" : "no");
    s.add("abelianization", abelian_invariants(g).str());
    s.add("det-surjective", det_surjective(g) ? "yes" : "no");
    s.add("admissible", is_admissible(g) ? "yes" : "no");
    if (is_prime(static_cast<std::uint64_t>(g.modulus()))) s.add("class", std::string(to_string(classify_subgroup(g))));
    return s;
}

// ------------------------------------------------------------------ curves

Section probe_section(const RationalCurve& e, int modulus, const ProbeOptions& o) {
    const auto img = probe_image(e, modulus, o);
    Section s{"image-probe", "ok", {}, 0};
    s.add("curve", e.str());
    s.add("modulus", std::to_string(modulus));
    s.add("primes-used", std::to_string(img.primes_used));
    s.add("bad-primes", join_numbers(img.bad));
    s.add("distinct-signatures", std::to_string(img.observed.size()));
    s.add("survivors", std::to_string(img.survivors.size()));
    s.add("minimal-survivors", std::to_string(img.minimal_survivors.size()));
    if (!img.minimal_survivors.empty()) s.add("minimal-order", std::to_string(img.minimal_survivors.front().order()));
    for (std::size_t i = 0; i < img.minimal_survivors.size(); ++i) {
        s.add("minimal-survivor " + std::to_string(i + 1), format_generator_list(img.minimal_survivors[i].generators()));
    }
    if (img.insufficient_sampling) s.add("warning", "observed determinants miss part of the unit group");
    return s;
}

Section coincide_section(const RationalCurve& e, int m, int n, const ProbeOptions& o) {
    const auto v = coincide_heuristic(e, m, n, o);
    Section s{"coincide", std::string(to_string(v.verdict)), {}, 0};
    s.add("curve", e.str());
    s.add("levels", std::to_string(v.m) + "," + std::to_string(v.n));
    s.add("bound", std::to_string(v.bound));
    s.add("split-primes-m", std::to_string(v.split_m));
    s.add("split-primes-n", std::to_string(v.split_n));
    s.add("common", std::to_string(v.common));
    if (v.witness) {
        s.add("witness", std::to_string(*v.witness));
        s.add("witness-splits-at", std::to_string(v.witness_split_level));
    }
    if (v.survivor_orders) {
        s.add("survivor-orders", std::to_string(v.survivor_orders->first) + "," + std::to_string(v.survivor_orders->second));
    }
    s.add("bad-primes", join_numbers(v.bad));
    if (!v.note.empty()) s.add("note", v.note);
    return s;
}

Section cyclotomic_section(const RationalCurve& e, int level, std::uint64_t root, const ProbeOptions& o) {
    const auto c = cyclotomic_containment(e, level, root, o);
    Section s{"cyclotomic", std::string(to_string(c.outcome)), {}, 0};
    s.add("curve", e.str());
    s.add("level", std::to_string(c.level));
    s.add("root", std::to_string(c.root));
    s.add("witnesses", std::to_string(c.witnesses.size()));
    s.add("first-witnesses", join_numbers(c.witnesses, 10));
    if (c.counterexample) s.add("counterexample", std::to_string(*c.counterexample));
    return s;
}

Section torsion_section(const RationalCurve& e) {
    Section s{"curve", "ok", {}, 0};
    s.add("model", e.str());
    s.add("discriminant", e.disc.get_str());
    s.add("j-invariant", e.j.get_str());
    const auto t = rational_torsion(e);
    s.add("torsion", t.structure.str());
    std::string gens;
    for (const auto& p : t.generators) gens += (gens.empty() ? "" : " ") + p.str();
    s.add("torsion-generators", gens.empty() ? "none" : gens);
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ecl: division fields of elliptic curves over Q and subgroups of GL(2, Z/N)"};
    app.set_version_flag("--version", std::string(kCodeVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "seed for point sampling")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "write the structured report here");
    app.add_option("--cache-dir", g.cache_dir, "enumeration cache directory");

    Report report;
    report.command = command_echo(argc, argv);
    std::function<void()> action;

    // verify
    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run exhaustive claim checks");
    verify->add_option("--claim", va.claims, "claim anchor; repeatable")->check(CLI::IsMember(kClaims));
    verify->add_flag("--all", va.all, "run every claim with its standard parameters");
    verify->add_option("--p", va.p, "prime");
    verify->add_option("--n", va.n, "exponent");
    verify->add_option("--max", va.max_level, "largest level for the pair scan")->capture_default_str();
    verify->add_option("--mod7", va.mod7, "mod-7 image file for the pair scan");
    verify->add_option("--file", va.file, "group file for rzb-scan");
    verify->add_option("--levels", va.levels, "2-adic exponents for 2adic-32a3")->delimiter(',');
    verify->callback([&] {
        action = [&] {
            if (va.all == !va.claims.empty()) throw UsageError("give either --all or --claim");
            if (va.p) report.parameters.emplace_back("p", std::to_string(*va.p));
            if (va.n) report.parameters.emplace_back("n", std::to_string(*va.n));
            if (va.all) {
                run_all(g, report);
            } else {
                for (const auto& c : va.claims) run_claim(c, va, g, report);
            }
        };
    });

    // groups
    std::string group_id, group_gens;
    int group_modulus = 0;
    bool admissible_only = false;
    auto* groups = app.add_subcommand("groups", "named groups and subgroup enumeration");
    groups->require_subcommand(1);
    auto* named = groups->add_subcommand("named", "describe a named group");
    named->add_option("--id", group_id, "e.g. Borel(5), H13, Curve32a3Level(4)")->required();
    named->callback([&] {
        action = [&] {
            report.parameters.emplace_back("id", group_id);
            report.sections.push_back(describe_group(group_id, named_group(NamedGroupId::parse(group_id))));
        };
    });
    auto* generated = groups->add_subcommand("generate", "describe the group generated by matrices");
    generated->add_option("--modulus", group_modulus)->required();
    generated->add_option("--gens", group_gens, "a,b;c,d | ...")->required();
    generated->callback([&] {
        action = [&] {
            report.parameters.emplace_back("modulus", std::to_string(group_modulus));
            report.parameters.emplace_back("gens", group_gens);
            const auto sub = generate_subgroup(group_modulus, parse_generator_list(group_gens, group_modulus));
            report.sections.push_back(describe_group("generated", sub));
        };
    });
    auto* enumerate = groups->add_subcommand("enumerate", "count subgroup classes of GL(2, Z/N)");
    enumerate->add_option("--modulus", group_modulus)->required();
    enumerate->add_flag("--admissible", admissible_only, "keep only admissible classes");
    enumerate->callback([&] {
        action = [&] {
            report.parameters.emplace_back("modulus", std::to_string(group_modulus));
            report.parameters.emplace_back("admissible", admissible_only ? "yes" : "no");
            EnumerationStats stats;
            const auto classes = enumerate_subgroups(
                group_modulus, admissible_only ? SubgroupFilter::admissible() : SubgroupFilter{}, enumeration(g), &stats);
            Section s{"enumerate", "ok", {}, 0};
            s.add("classes", std::to_string(classes.size()));
            std::map<std::uint64_t, int> by_order;
            for (const auto& c : classes) ++by_order[c.order()];
            for (const auto& [o, k] : by_order) s.add("order " + std::to_string(o), std::to_string(k));
            report.sections.push_back(std::move(s));
            report.cache_notes.push_back(stats.cache_hit ? "hit" : "miss");
        };
    });

    // image probe
    std::string curve_text;
    int modulus = 0;
    std::uint64_t bound = 10'000;
    auto* image = app.add_subcommand("image", "Galois image probes");
    image->require_subcommand(1);
    auto* probe = image->add_subcommand("probe", "sieve candidate mod-N images by Frobenius data");
    probe->add_option("--curve", curve_text, "a1,a2,a3,a4,a6 or A,B")->required();
    probe->add_option("--modulus", modulus)->required()->check(CLI::Range(2, kModulusCeiling));
    probe->add_option("--bound", bound)->capture_default_str();
    probe->callback([&] {
        action = [&] {
            const auto e = RationalCurve::parse(curve_text);
            report.parameters = {{"curve", e.str()}, {"modulus", std::to_string(modulus)}, {"bound", std::to_string(bound)}};
            report.sections.push_back(probe_section(e, modulus, probe_options(g, bound)));
        };
    });

    // coincide
    int level_m = 0, level_n = 0;
    std::size_t threshold = 5;
    auto* coincide = app.add_subcommand("coincide", "compare the split primes of E[m] and E[n]");
    coincide->add_option("--curve", curve_text)->required();
    coincide->add_option("-m", level_m)->required()->check(CLI::Range(2, kModulusCeiling));
    coincide->add_option("-n", level_n)->required()->check(CLI::Range(2, kModulusCeiling));
    coincide->add_option("--bound", bound)->capture_default_str();
    coincide->add_option("--threshold", threshold, "common split primes needed")->capture_default_str();
    coincide->callback([&] {
        action = [&] {
            const auto e = RationalCurve::parse(curve_text);
            report.parameters = {{"curve", e.str()}, {"m", std::to_string(level_m)}, {"n", std::to_string(level_n)},
                                 {"bound", std::to_string(bound)}, {"seed", std::to_string(g.seed)}};
            auto o = probe_options(g, bound);
            o.witness_threshold = threshold;
            report.sections.push_back(coincide_section(e, level_m, level_n, o));
        };
    });

    // cyclotomic
    int level = 0;
    std::uint64_t root = 0;
    auto* cyclo = app.add_subcommand("cyclotomic", "test Q(zeta_r) inside Q(E[level]) on split primes");
    cyclo->add_option("--curve", curve_text)->required();
    cyclo->add_option("--level", level)->required()->check(CLI::Range(2, kModulusCeiling));
    cyclo->add_option("--root", root)->required()->check(CLI::Range(2, 1 << 20));
    cyclo->add_option("--bound", bound)->capture_default_str();
    cyclo->callback([&] {
        action = [&] {
            const auto e = RationalCurve::parse(curve_text);
            report.parameters = {{"curve", e.str()}, {"level", std::to_string(level)}, {"root", std::to_string(root)},
                                 {"bound", std::to_string(bound)}};
            report.sections.push_back(cyclotomic_section(e, level, root, probe_options(g, bound)));
        };
    });

    // curve
    auto* curve = app.add_subcommand("curve", "invariants and rational torsion of a curve");
    curve->add_option("--curve", curve_text)->required();
    curve->callback([&] {
        action = [&] {
            const auto e = RationalCurve::parse(curve_text);
            report.parameters = {{"curve", e.str()}};
            report.sections.push_back(torsion_section(e));
        };
    });

    // family
    std::string family_id, t_text;
    auto* family = app.add_subcommand("family", "one-parameter families and j-maps");
    family->require_subcommand(1);
    auto* instantiate_cmd = family->add_subcommand("instantiate", "the curve at parameter t");
    auto* j_cmd = family->add_subcommand("j", "the j-invariant at parameter t");
    for (auto* sub : {instantiate_cmd, j_cmd}) {
        std::vector<std::string> names;
        for (auto id : all_families()) names.emplace_back(to_string(id));
        sub->add_option("--id", family_id)->required()->check(CLI::IsMember(names));
        sub->add_option("--t", t_text, "rational p/q")->required();
    }
    instantiate_cmd->callback([&] {
        action = [&] {
            report.parameters = {{"id", family_id}, {"t", t_text}};
            const auto id = parse_family(family_id);
            if (!has_curve(id)) throw UsageError(family_id + " is a j-map; use 'family j'");
            const auto e = instantiate(id, parse_rational(t_text));
            Section s{"family-instance", "ok", {}, 0};
            s.add("curve", e.str());
            s.add("j-invariant", e.j.get_str());
            s.add("discriminant", e.disc.get_str());
            report.sections.push_back(std::move(s));
        };
    });
    j_cmd->callback([&] {
        action = [&] {
            report.parameters = {{"id", family_id}, {"t", t_text}};
            Section s{"family-j", "ok", {}, 0};
            s.add("j", j_value(parse_family(family_id), parse_rational(t_text)).get_str());
            report.sections.push_back(std::move(s));
        };
    });
    auto* cm_cmd = family->add_subcommand("cm-exclusion", "rational preimages of the CM j-invariants");
    cm_cmd->callback([&] { action = [&] { report.sections.push_back(cli::from_verification(verify_cm_exclusion())); }; });

    // pairs
    int pairs_max = 10;
    std::string mod7_file;
    auto* pairs = app.add_subcommand("pairs", "decide which level pairs (m,n) survive the group-theoretic tests");
    pairs->add_option("--max", pairs_max)->capture_default_str()->check(CLI::Range(3, 12));
    pairs->add_option("--mod7", mod7_file, "mod-7 image file");
    pairs->callback([&] {
        action = [&] {
            report.parameters = {{"max", std::to_string(pairs_max)}, {"mod7", mod7_file.empty() ? "none" : mod7_file}};
            report.sections.push_back(cli::from_verification(verify_pairs(pairs_max, load_optional(mod7_file), enumeration(g))));
        };
    });

    // rzb
    std::string rzb_file;
    auto* rzb = app.add_subcommand("rzb", "levels k with G mod p^(k+1) isomorphic to G mod p^k");
    rzb->add_option("--file", rzb_file)->required();
    rzb->callback([&] {
        action = [&] {
            report.parameters = {{"file", rzb_file}};
            report.sections.push_back(cli::from_verification(rzb_scan_with_expectations(GroupFile::load(rzb_file))));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        action();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const GroupFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    report.print_text(std::cout);
    if (!g.out.empty()) {
        std::ofstream out(g.out, std::ios::binary);
        if (!out || !(out << report.structured())) {
            std::cerr << "error: cannot write " << g.out << "\n";
            return 2;
        }
    }
    const bool ok = std::all_of(report.sections.begin(), report.sections.end(),
                                [](const Section& s) { return is_pass(s.status); });
    return ok ? 0 : 1;
}
