#include "ecl/probe.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace ecl {

namespace {

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    if (bound > kCountingBound) throw std::invalid_argument("prime bound above the naive counting bound");
    std::vector<std::uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t k = i * i; k <= bound; k += i) composite[k] = true;
    }
    return out;
}

// Runs fn(i) for every i in [0, count) on up to `jobs` threads. Each index is
// handled exactly once, so results written by index are independent of jobs.
template <class Fn>
void parallel_indices(std::size_t count, unsigned jobs, Fn fn) {
    const unsigned workers = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

}  // namespace

SplitSet split_set(const RationalCurve& e, int level, const ProbeOptions& options, std::uint64_t extra_exclude) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    SplitSet out;
    out.level = level;
    out.bound = options.bound;
    const std::uint64_t n = static_cast<std::uint64_t>(level);
    const std::uint64_t exclude = n * extra_exclude;
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t ell : primes_up_to(options.bound)) {
        if (exclude % ell == 0) {
            out.excluded.push_back(ell);
        } else if (!e.has_good_reduction(ell)) {
            out.bad.push_back(ell);
        } else {
            ++out.good_examined;
            if ((ell - 1) % n == 0) candidates.push_back(ell);
        }
    }
    std::vector<char> split(candidates.size(), 0);
    parallel_indices(candidates.size(), options.jobs, [&](std::size_t i) {
        FrobData d = frobenius_data(e, candidates[i], false, options.seed);
        if (d.points % (n * n) != 0) return;
        if (n == 1) {
            split[i] = 1;
            return;
        }
        attach_structure(e, d, options.seed);
        split[i] = d.structure->first % n == 0;
    });
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (split[i]) out.primes.push_back(candidates[i]);
    }
    return out;
}

FrobSignature element_signature(const GL2Element& g) {
    const int n = g.modulus();
    std::uint64_t fixed = 0;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if ((static_cast<std::int64_t>(g.a() - 1) * x + static_cast<std::int64_t>(g.b()) * y) % n == 0 &&
                (static_cast<std::int64_t>(g.c()) * x + static_cast<std::int64_t>(g.d() - 1) * y) % n == 0) {
                ++fixed;
            }
        }
    }
    return {g.trace(), g.det(), fixed};
}

ProbableImage probe_image(const RationalCurve& e, int n, const ProbeOptions& options) {
    if (n < 2) throw std::invalid_argument("probe modulus must be at least 2");
    ProbableImage out;
    out.modulus = n;
    const std::uint64_t nu = static_cast<std::uint64_t>(n);
    std::vector<std::uint64_t> good;
    for (std::uint64_t ell : primes_up_to(options.bound)) {
        if (nu % ell == 0) {
            out.excluded.push_back(ell);
        } else if (!e.has_good_reduction(ell)) {
            out.bad.push_back(ell);
        } else {
            good.push_back(ell);
        }
    }
    if (good.empty()) throw std::invalid_argument("no good primes below the bound");
    // Candidates first so an over-ceiling modulus fails before the scan.
    const auto candidates = enumerate_subgroups(n, SubgroupFilter::admissible(), options.enumeration);

    std::vector<FrobSignature> sigs(good.size());
    parallel_indices(good.size(), options.jobs, [&](std::size_t i) {
        FrobData d = frobenius_data(e, good[i], true, options.seed);
        const auto [d1, d2] = *d.structure;
        const int t = static_cast<int>(floor_mod(d.trace, n));
        const int det = static_cast<int>(good[i] % nu);
        sigs[i] = {t, det, gcd_u(nu, d1) * gcd_u(nu, d2)};
    });
    for (std::size_t i = 0; i < good.size(); ++i) out.observed[sigs[i]].push_back(good[i]);
    out.primes_used = good.size();

    std::set<int> dets{1 % n};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& [sig, primes] : out.observed) {
            for (int d : std::vector<int>(dets.begin(), dets.end())) {
                grew |= dets.insert(static_cast<int>(static_cast<std::int64_t>(d) * sig.det % n)).second;
            }
        }
    }
    out.insufficient_sampling = dets.size() != unit_residues(n).size();

    std::unordered_map<std::uint32_t, FrobSignature> memo;
    for (const auto& h : candidates) {
        std::set<FrobSignature> realized;
        for (const auto key : h.keys()) {
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, element_signature(GL2Element::from_key(n, key))).first;
            realized.insert(it->second);
        }
        const bool ok = std::all_of(out.observed.begin(), out.observed.end(),
                                    [&](const auto& kv) { return realized.count(kv.first) > 0; });
        if (ok) out.survivors.push_back(h);
    }
    if (!out.survivors.empty()) {
        std::uint64_t least = out.survivors.front().order();
        for (const auto& h : out.survivors) least = std::min(least, h.order());
        for (const auto& h : out.survivors) {
            if (h.order() == least) out.minimal_survivors.push_back(h);
        }
    }
    return out;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::HeuristicallyEqual: return "heuristically-equal";
        case Verdict::UnequalWithWitness: return "unequal-with-witness";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string_view to_string(CyclotomicResult::Outcome o) {
    switch (o) {
        case CyclotomicResult::Outcome::Pass: return "pass";
        case CyclotomicResult::Outcome::Fail: return "fail";
        case CyclotomicResult::Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

CoincidenceVerdict coincide_heuristic(const RationalCurve& e, int m, int n, const ProbeOptions& options) {
    if (m == n) throw std::invalid_argument("coincidence levels must differ");
    if (m < 2 || n < 2) throw std::invalid_argument("coincidence levels must be at least 2");
    CoincidenceVerdict out;
    out.m = m;
    out.n = n;
    out.bound = options.bound;
    const auto sm = split_set(e, m, options, static_cast<std::uint64_t>(n));
    const auto sn = split_set(e, n, options, static_cast<std::uint64_t>(m));
    out.split_m = sm.primes.size();
    out.split_n = sn.primes.size();
    out.bad = sm.bad;
    std::vector<std::uint64_t> only_m, only_n, common;
    std::set_difference(sm.primes.begin(), sm.primes.end(), sn.primes.begin(), sn.primes.end(),
                        std::back_inserter(only_m));
    std::set_difference(sn.primes.begin(), sn.primes.end(), sm.primes.begin(), sm.primes.end(),
                        std::back_inserter(only_n));
    std::set_intersection(sm.primes.begin(), sm.primes.end(), sn.primes.begin(), sn.primes.end(),
                          std::back_inserter(common));
    out.common = common.size();
    if (!only_m.empty() || !only_n.empty()) {
        const bool from_m = !only_m.empty() && (only_n.empty() || only_m.front() < only_n.front());
        out.verdict = Verdict::UnequalWithWitness;
        out.witness = from_m ? only_m.front() : only_n.front();
        out.witness_split_level = from_m ? m : n;
        out.note = "prime " + std::to_string(*out.witness) + " splits completely at level " +
                   std::to_string(out.witness_split_level) + " only";
        return out;
    }
    if (common.size() < options.witness_threshold) {
        out.verdict = Verdict::Inconclusive;
        out.note = "only " + std::to_string(common.size()) + " common split primes";
        return out;
    }
    out.verdict = Verdict::HeuristicallyEqual;
    out.note = "split sets agree on " + std::to_string(common.size()) + " primes (heuristic)";
    if (options.cross_check && gl2_order(m) <= options.enumeration.ceiling &&
        gl2_order(n) <= options.enumeration.ceiling) {
        ProbeOptions probe = options;
        probe.bound = std::min<std::uint64_t>(options.bound, 10'000);
        const auto pm = probe_image(e, m, probe);
        const auto pn = probe_image(e, n, probe);
        const std::uint64_t om = pm.minimal_survivors.empty() ? 0 : pm.minimal_survivors.front().order();
        const std::uint64_t on = pn.minimal_survivors.empty() ? 0 : pn.minimal_survivors.front().order();
        out.survivor_orders = std::make_pair(om, on);
        if (om != on || om == 0) {
            out.verdict = Verdict::Inconclusive;
            out.note = "split sets agree but least probe survivors have orders " + std::to_string(om) + " and " +
                       std::to_string(on);
        }
    }
    return out;
}

CyclotomicResult cyclotomic_containment(const RationalCurve& e, int level, std::uint64_t root,
                                        const ProbeOptions& options) {
    if (root < 2) throw std::invalid_argument("root of unity order must be at least 2");
    const auto fac = factorize(root);
    if (fac.size() != 1) throw std::invalid_argument(std::to_string(root) + " is not a prime power");
    CyclotomicResult out;
    out.level = level;
    out.root = root;
    const auto s = split_set(e, level, options, root);
    out.bad = s.bad;
    for (std::uint64_t ell : s.primes) {
        if ((ell - 1) % root != 0) {
            out.counterexample = ell;
            out.outcome = CyclotomicResult::Outcome::Fail;
            return out;
        }
        out.witnesses.push_back(ell);
    }
    out.outcome = out.witnesses.size() >= options.witness_threshold ? CyclotomicResult::Outcome::Pass
                                                                    : CyclotomicResult::Outcome::Inconclusive;
    return out;
}

unsigned cyclotomic_bound(std::uint64_t p, unsigned n, std::uint64_t q) {
    if (!is_prime(p) || !is_prime(q)) throw std::invalid_argument("cyclotomic_bound needs primes");
    if (p == q) throw std::invalid_argument("cyclotomic_bound needs p != q");
    if (n < 1) throw std::invalid_argument("cyclotomic_bound needs n >= 1");
    mpz_class x;
    mpz_ui_pow_ui(x.get_mpz_t(), p, 4 * (n - 1) + 1);
    x *= mpz_class(static_cast<unsigned long>(p - 1)) * static_cast<unsigned long>(p - 1) *
         static_cast<unsigned long>(p + 1);
    if (!mpz_divisible_ui_p(x.get_mpz_t(), q - 1)) return 0;
    unsigned v = 0;
    while (mpz_divisible_ui_p(x.get_mpz_t(), q)) {
        x /= static_cast<unsigned long>(q);
        ++v;
    }
    return v + 1;
}

std::optional<Obstruction> coincidence_obstruction(std::uint64_t p, std::uint64_t m) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (m < 2) throw std::invalid_argument("level must be at least 2");
    for (const auto& [q, k] : factorize(m)) {
        if (q == 2) continue;
        const std::uint64_t phi = ipow(q, static_cast<unsigned>(k - 1)) * (q - 1);
        if ((p - 1) % phi != 0) return Obstruction{q, static_cast<unsigned>(k)};
    }
    return std::nullopt;
}

}  // namespace ecl
