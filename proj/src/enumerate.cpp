// Subgroup classes by cyclic extension over a multiplication table.
#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

#include "ecl/group.hpp"
#include "ecl/groupfile.hpp"
#include "ecl/version.hpp"
#include "group_internal.hpp"

namespace ecl {

namespace {

using Index = std::uint16_t;

class Bits {
public:
    explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    std::uint64_t hash() const {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (std::uint64_t w : words_) {
            h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
            h *= 0xBF58476D1CE4E5B9ULL;
            h ^= h >> 31;
        }
        return h;
    }
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int b = std::countr_zero(bits);
                f(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }
    friend bool operator==(const Bits&, const Bits&) = default;

private:
    std::vector<std::uint64_t> words_;
};

class TableGroup {
public:
    explicit TableGroup(const Subgroup& ambient) : ambient_(ambient), elems_(ambient.elements()) {
        n_ = elems_.size();
        if (n_ > 65535) throw EnumerationRefused("ambient group too large for a table");
        const std::uint64_t space = ipow(static_cast<std::uint64_t>(ambient.modulus()), 4);
        dense_.assign(space, -1);
        for (std::size_t i = 0; i < n_; ++i) dense_[elems_[i].key()] = static_cast<std::int32_t>(i);
        table_.resize(n_ * n_);
        inv_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                table_[i * n_ + j] = static_cast<Index>(dense_[(elems_[i] * elems_[j]).key()]);
            }
            inv_[i] = static_cast<Index>(dense_[inverse(elems_[i]).key()]);
        }
        identity_ = index(GL2Element::identity(ambient.modulus()));
        for (const auto& g : ambient.generators()) gens_.push_back(index(g));
    }

    std::size_t size() const { return n_; }
    Index mul(Index i, Index j) const { return table_[static_cast<std::size_t>(i) * n_ + j]; }
    Index inv(Index i) const { return inv_[i]; }
    Index conj(Index c, Index x) const { return mul(mul(inv(c), x), c); }  // c^-1 x c
    Index identity() const { return identity_; }
    Index index(const GL2Element& g) const { return static_cast<Index>(dense_[g.key()]); }
    const GL2Element& elem(Index i) const { return elems_[i]; }
    const std::vector<Index>& gens() const { return gens_; }
    const Subgroup& ambient() const { return ambient_; }

private:
    const Subgroup& ambient_;
    std::vector<GL2Element> elems_;
    std::size_t n_ = 0;
    std::vector<std::int32_t> dense_;
    std::vector<Index> table_;
    std::vector<Index> inv_;
    std::vector<Index> gens_;
    Index identity_ = 0;
};

struct ClassRecord {
    Bits bits;
    std::vector<Index> elems;
    std::vector<Index> gens;
};

class Enumerator {
public:
    explicit Enumerator(const TableGroup& t) : t_(t) {}

    std::vector<ClassRecord> run() {
        build_cyclics();
        Bits trivial(t_.size());
        trivial.set(t_.identity());
        register_class(std::move(trivial), {t_.identity()}, {});
        for (std::size_t c = 0; c < classes_.size(); ++c) extend(c);
        return std::move(classes_);
    }

private:
    void build_cyclics() {
        const std::size_t n = t_.size();
        cyc_of_.assign(n, -1);
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;
        for (std::size_t x = 0; x < n; ++x) {
            Bits b(n);
            Index y = t_.identity();
            do {
                b.set(y);
                y = t_.mul(y, static_cast<Index>(x));
            } while (y != t_.identity());
            const std::uint64_t h = b.hash();
            std::int64_t found = -1;
            for (std::size_t id : by_hash[h]) {
                if (cyc_bits_[id] == b) found = static_cast<std::int64_t>(id);
            }
            if (found < 0) {
                found = static_cast<std::int64_t>(cyc_gen_.size());
                cyc_gen_.push_back(static_cast<Index>(x));
                cyc_bits_.push_back(b);
                by_hash[h].push_back(static_cast<std::size_t>(found));
            }
            cyc_of_[x] = found;
        }
    }

    std::vector<Index> members(const Bits& b) const {
        std::vector<Index> out;
        b.for_each([&](std::size_t i) { out.push_back(static_cast<Index>(i)); });
        return out;
    }

    // Existing class whose representative conjugates onto k, or -1.
    std::int64_t lookup(const Bits& k, std::size_t order) const {
        auto it = seen_.find(k.hash());
        if (it == seen_.end()) return -1;
        for (auto [cls, conj] : it->second) {
            const auto& rec = classes_[cls];
            if (rec.elems.size() != order) continue;
            bool ok = std::all_of(rec.gens.begin(), rec.gens.end(),
                                  [&](Index g) { return k.test(t_.conj(conj, g)); });
            if (ok) return static_cast<std::int64_t>(cls);
        }
        return -1;
    }

    void register_class(Bits bits, std::vector<Index> elems, std::vector<Index> gens) {
        const std::uint32_t cls = static_cast<std::uint32_t>(classes_.size());
        classes_.push_back({bits, elems, gens});
        struct State {
            Bits bits;
            std::vector<Index> elems;
            Index conj;
        };
        std::vector<State> queue;
        seen_[bits.hash()].emplace_back(cls, t_.identity());
        queue.push_back({std::move(bits), std::move(elems), t_.identity()});
        const std::size_t n = t_.size();
        for (std::size_t q = 0; q < queue.size(); ++q) {
            for (Index s : t_.gens()) {
                Bits nb(n);
                std::vector<Index> ne;
                ne.reserve(queue[q].elems.size());
                for (Index x : queue[q].elems) {
                    const Index y = t_.conj(s, x);
                    nb.set(y);
                    ne.push_back(y);
                }
                const Index nc = t_.mul(queue[q].conj, s);
                auto& bucket = seen_[nb.hash()];
                const auto& rec = classes_[cls];
                bool dup = std::any_of(bucket.begin(), bucket.end(), [&](auto entry) {
                    if (entry.first != cls) return false;
                    return std::all_of(rec.gens.begin(), rec.gens.end(),
                                       [&](Index g) { return nb.test(t_.conj(entry.second, g)); });
                });
                if (dup) continue;
                bucket.emplace_back(cls, nc);
                queue.push_back({std::move(nb), std::move(ne), nc});
            }
        }
    }

    void extend(std::size_t c) {
        const std::size_t n = t_.size();
        // Copies: registering new classes may reallocate classes_.
        const Bits hbits = classes_[c].bits;
        const std::vector<Index> helems = classes_[c].elems;
        const std::vector<Index> hgens = classes_[c].gens;

        std::vector<Index> normalizer;
        for (std::size_t a = 0; a < n; ++a) {
            bool ok = std::all_of(hgens.begin(), hgens.end(), [&](Index g) {
                return hbits.test(t_.conj(static_cast<Index>(a), g));
            });
            if (ok) normalizer.push_back(static_cast<Index>(a));
        }

        std::vector<bool> done(cyc_gen_.size(), false);
        for (std::size_t cid = 0; cid < cyc_gen_.size(); ++cid) {
            if (done[cid]) continue;
            const Index g = cyc_gen_[cid];
            for (Index a : normalizer) done[static_cast<std::size_t>(cyc_of_[t_.conj(a, g)])] = true;
            if (hbits.test(g)) continue;

            Bits kbits = hbits;
            std::vector<Index> kelems = helems;
            std::vector<Index> kgens = hgens;
            kgens.push_back(g);
            std::vector<Index> reps{t_.identity()};
            for (std::size_t r = 0; r < reps.size(); ++r) {
                for (Index s : kgens) {
                    const Index y = t_.mul(reps[r], s);
                    if (kbits.test(y)) continue;
                    for (Index h : helems) {
                        const Index z = t_.mul(h, y);
                        kbits.set(z);
                        kelems.push_back(z);
                    }
                    reps.push_back(y);
                }
            }
            if (lookup(kbits, kelems.size()) >= 0) continue;
            std::sort(kelems.begin(), kelems.end());
            register_class(std::move(kbits), std::move(kelems), std::move(kgens));
        }
    }

    const TableGroup& t_;
    std::vector<ClassRecord> classes_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, Index>>> seen_;
    std::vector<Index> cyc_gen_;
    std::vector<Bits> cyc_bits_;
    std::vector<std::int64_t> cyc_of_;
};

Subgroup to_subgroup(const TableGroup& t, const ClassRecord& rec) {
    const int m = t.ambient().modulus();
    std::vector<std::uint32_t> keys;
    keys.reserve(rec.elems.size());
    for (Index i : rec.elems) keys.push_back(t.elem(i).key());
    std::sort(keys.begin(), keys.end());
    std::vector<GL2Element> gens;
    for (Index i : rec.gens) gens.push_back(t.elem(i));
    Subgroup s(m, gens, std::move(keys));
    return Subgroup(m, detail::small_generating_set(s), s.keys());
}

bool subgroup_less(const Subgroup& x, const Subgroup& y) {
    if (x.order() != y.order()) return x.order() < y.order();
    return x.keys() < y.keys();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 15U];
        v >>= 4;
    }
    return out;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, int modulus,
                                 const SubgroupFilter& filter) {
    return dir / ("gl2-n" + std::to_string(modulus) + "-" + filter.hash_hex() + ".groups");
}

std::optional<std::vector<Subgroup>> load_cache(const std::filesystem::path& path, int modulus,
                                                const SubgroupFilter& filter) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    try {
        GroupFile file = GroupFile::load(path);
        if (file.modulus != modulus) return std::nullopt;
        if (file.meta_value("code-version") != std::to_string(kCacheFormatVersion)) return std::nullopt;
        if (file.meta_value("filter") != filter.descriptor()) return std::nullopt;
        std::vector<Subgroup> out;
        for (const auto& g : file.groups) {
            Subgroup s = generate_subgroup(modulus, g.generators);
            if (g.order && *g.order != s.order()) return std::nullopt;
            out.push_back(std::move(s));
        }
        return out;
    } catch (const std::exception&) {
        return std::nullopt;  // advisory cache: a bad file only costs a rebuild
    }
}

void store_cache(const std::filesystem::path& path, int modulus, const SubgroupFilter& filter,
                 const std::vector<Subgroup>& groups) {
    GroupFile file;
    file.modulus = modulus;
    file.meta = {{"code-version", std::to_string(kCacheFormatVersion)},
                 {"filter", filter.descriptor()},
                 {"classes", std::to_string(groups.size())}};
    for (std::size_t i = 0; i < groups.size(); ++i) {
        file.groups.push_back({"C" + std::to_string(i + 1), groups[i].generators(), groups[i].order()});
    }
    try {
        file.save_atomic(path);
    } catch (const std::exception&) {
        // read-only cache locations are tolerated
    }
}

}  // namespace

std::vector<Subgroup> subgroup_classes(const Subgroup& ambient) {
    TableGroup table(ambient);
    Enumerator en(table);
    auto records = en.run();
    std::vector<Subgroup> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(to_subgroup(table, r));
    std::sort(out.begin(), out.end(), subgroup_less);
    return out;
}

SubgroupFilter SubgroupFilter::admissible() {
    SubgroupFilter f;
    f.det_surjective = true;
    f.cc_element = true;
    return f;
}

bool SubgroupFilter::accepts(const Subgroup& g) const {
    if (min_order != 0 && g.order() < min_order) return false;
    if (max_order != 0 && g.order() > max_order) return false;
    if (container && !container->contains(g)) return false;
    if (non_abelian && g.is_abelian()) return false;
    if (det_surjective && !ecl::det_surjective(g)) return false;
    if (cc_element && !has_cc_element(g)) return false;
    return true;
}

std::string SubgroupFilter::descriptor() const {
    std::vector<std::string> parts;
    if (det_surjective) parts.emplace_back("det-surjective");
    if (cc_element) parts.emplace_back("cc-element");
    if (non_abelian) parts.emplace_back("non-abelian");
    if (min_order != 0) parts.push_back("order>=" + std::to_string(min_order));
    if (max_order != 0) parts.push_back("order<=" + std::to_string(max_order));
    if (container) {
        std::string keys;
        for (auto k : container->keys()) keys += std::to_string(k) + ",";
        parts.push_back("within=" + (container_label.empty() ? "group" : container_label) + ":" +
                        hex64(fnv1a(keys)));
    }
    if (parts.empty()) return "all";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += "+" + parts[i];
    return out;
}

std::string SubgroupFilter::hash_hex() const { return hex64(fnv1a(descriptor())); }

std::filesystem::path resolve_cache_dir(const std::optional<std::filesystem::path>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("ECL_CACHE_DIR"); env != nullptr && *env != '\0') return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
        return std::filesystem::path(xdg) / "ecl";
    }
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        return std::filesystem::path(home) / ".cache" / "ecl";
    }
    return std::filesystem::temp_directory_path() / "ecl-cache";
}

std::vector<Subgroup> enumerate_subgroups(int modulus, const SubgroupFilter& filter,
                                          const EnumerationOptions& options,
                                          EnumerationStats* stats) {
    const std::uint64_t order = gl2_order(modulus);
    if (order > options.ceiling) {
        throw EnumerationRefused("|GL(2,Z/" + std::to_string(modulus) + "Z)| = " +
                                 std::to_string(order) + " exceeds the enumeration ceiling " +
                                 std::to_string(options.ceiling));
    }
    if (filter.container && filter.container->modulus() != modulus) {
        throw std::invalid_argument("container modulus differs from the enumeration modulus");
    }
    if (stats) *stats = {};
    if (options.cache_dir) {
        if (auto hit = load_cache(cache_path(*options.cache_dir, modulus, filter), modulus, filter)) {
            if (stats) {
                stats->cache_hit = true;
                stats->classes_total = hit->size();
            }
            return *hit;
        }
    }

    std::vector<Subgroup> result;
    if (filter.container) {
        // Classes inside the container, then merged under GL(2)-conjugacy.
        std::vector<Subgroup> inner = subgroup_classes(*filter.container);
        if (stats) stats->classes_total = inner.size();
        for (auto& g : inner) {
            if (!filter.accepts(g)) continue;
            bool dup = std::any_of(result.begin(), result.end(), [&](const Subgroup& r) {
                return are_conjugate(r, g).has_value();
            });
            if (!dup) result.push_back(std::move(g));
        }
    } else {
        const SubgroupFilter everything;
        std::optional<std::vector<Subgroup>> all;
        if (options.cache_dir) all = load_cache(cache_path(*options.cache_dir, modulus, everything), modulus, everything);
        if (!all) {
            all = subgroup_classes(full_gl2(modulus));
            if (options.cache_dir) store_cache(cache_path(*options.cache_dir, modulus, everything), modulus, everything, *all);
        }
        if (stats) stats->classes_total = all->size();
        for (auto& g : *all) {
            if (filter.accepts(g)) result.push_back(std::move(g));
        }
    }
    if (options.cache_dir) store_cache(cache_path(*options.cache_dir, modulus, filter), modulus, filter, result);
    return result;
}

}  // namespace ecl
