#include "ecl/group.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "group_internal.hpp"

namespace ecl {

// --- AbelianInvariants ---------------------------------------------------

std::uint64_t AbelianInvariants::order() const {
    return std::accumulate(factors.begin(), factors.end(), std::uint64_t{1},
                           std::multiplies<>());
}

std::string AbelianInvariants::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(factors[i]);
    }
    return out + "]";
}

AbelianInvariants AbelianInvariants::parse(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (ch != ' ' && ch != '[' && ch != ']') s.push_back(ch == ',' ? ' ' : ch);
    }
    std::istringstream in(s);
    std::vector<std::uint64_t> orders;
    std::uint64_t v = 0;
    while (in >> v) orders.push_back(v);
    if (!in.eof()) throw std::invalid_argument("bad invariant list '" + std::string(text) + "'");
    // Text must already be in invariant-factor form.
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 2 || (i > 0 && orders[i] % orders[i - 1] != 0)) {
            throw std::invalid_argument("'" + std::string(text) + "' is not a list d1 | d2 | ... of factors >= 2");
        }
    }
    return AbelianInvariants{orders};
}

AbelianInvariants AbelianInvariants::from_cyclic_orders(const std::vector<std::uint64_t>& orders) {
    std::map<std::uint64_t, std::vector<std::uint64_t>> primary;
    for (std::uint64_t n : orders) {
        for (auto [p, e] : factorize(n)) primary[p].push_back(ipow(p, e));
    }
    std::size_t rank = 0;
    for (auto& [p, powers] : primary) {
        std::sort(powers.rbegin(), powers.rend());
        rank = std::max(rank, powers.size());
    }
    std::vector<std::uint64_t> f(rank, 1);
    for (auto& [p, powers] : primary) {
        for (std::size_t i = 0; i < powers.size(); ++i) f[rank - 1 - i] *= powers[i];
    }
    return AbelianInvariants{f};
}

// --- Subgroup ------------------------------------------------------------

Subgroup::Subgroup(int modulus, std::vector<GL2Element> generators,
                   std::vector<std::uint32_t> keys)
    : modulus_(modulus), gens_(std::move(generators)), keys_(std::move(keys)) {}

std::vector<GL2Element> Subgroup::elements() const {
    std::vector<GL2Element> out;
    out.reserve(keys_.size());
    for (auto k : keys_) out.push_back(GL2Element::from_key(modulus_, k));
    return out;
}

bool Subgroup::contains(const GL2Element& g) const {
    return g.modulus() == modulus_ && std::binary_search(keys_.begin(), keys_.end(), g.key());
}

bool Subgroup::contains(const Subgroup& other) const {
    if (other.modulus_ != modulus_) return false;
    return std::includes(keys_.begin(), keys_.end(), other.keys_.begin(), other.keys_.end());
}

std::int64_t Subgroup::index_of(const GL2Element& g) const {
    if (g.modulus() != modulus_) return -1;
    auto it = std::lower_bound(keys_.begin(), keys_.end(), g.key());
    if (it == keys_.end() || *it != g.key()) return -1;
    return it - keys_.begin();
}

bool Subgroup::is_abelian() const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        for (std::size_t j = i + 1; j < gens_.size(); ++j)
            if (gens_[i] * gens_[j] != gens_[j] * gens_[i]) return false;
    return true;
}

NonAbelianQuotient::NonAbelianQuotient(GL2Element x, GL2Element y)
    : std::runtime_error("quotient is not abelian: cosets of " + x.str() + " and " + y.str() +
                         " do not commute"),
      first(x), second(y) {}

// --- generation ----------------------------------------------------------

namespace detail {

std::uint64_t order_in_group(const GL2Element& g, std::uint64_t group_order,
                             const std::vector<std::pair<std::uint64_t, int>>& factors) {
    std::uint64_t order = group_order;
    for (auto [p, e] : factors) {
        for (int i = 0; i < e; ++i) {
            if (!power(g, static_cast<std::int64_t>(order / p)).is_identity()) break;
            order /= p;
        }
    }
    return order;
}

Subgroup from_elements(int modulus, const std::vector<GL2Element>& elems) {
    std::vector<GL2Element> gens;
    Subgroup current = generate_subgroup(modulus, {});
    for (const auto& g : elems) {
        if (current.contains(g)) continue;
        gens.push_back(g);
        current = generate_subgroup(modulus, gens);
        if (current.order() == elems.size()) break;
    }
    return current;
}

std::vector<GL2Element> small_generating_set(const Subgroup& g) {
    std::vector<GL2Element> kept;
    Subgroup current = generate_subgroup(g.modulus(), {});
    for (const auto& x : g.generators()) {
        if (current.contains(x)) continue;
        kept.push_back(x);
        current = generate_subgroup(g.modulus(), kept);
    }
    return kept;
}

}  // namespace detail

Subgroup generate_subgroup(int modulus, const std::vector<GL2Element>& gens) {
    for (const auto& g : gens) {
        if (g.modulus() != modulus) {
            throw std::invalid_argument("generator " + g.str() + " has modulus " +
                                        std::to_string(g.modulus()) + ", expected " +
                                        std::to_string(modulus));
        }
    }
    const GL2Element id = GL2Element::identity(modulus);
    const std::uint64_t space = ipow(static_cast<std::uint64_t>(modulus), 4);
    std::vector<bool> seen(space, false);
    std::vector<GL2Element> elems{id};
    seen[id.key()] = true;
    std::vector<GL2Element> steps;
    for (const auto& g : gens) {
        if (!g.is_identity() && std::find(steps.begin(), steps.end(), g) == steps.end()) {
            steps.push_back(g);
        }
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (const auto& s : steps) {
            GL2Element y = elems[i] * s;
            if (!seen[y.key()]) {
                seen[y.key()] = true;
                elems.push_back(y);
            }
        }
    }
    std::vector<std::uint32_t> keys;
    keys.reserve(elems.size());
    for (const auto& e : elems) keys.push_back(e.key());
    std::sort(keys.begin(), keys.end());
    return Subgroup(modulus, steps, std::move(keys));
}

Subgroup full_gl2(int modulus) {
    std::vector<GL2Element> gens{GL2Element(modulus, 1, 1, 0, 1), GL2Element(modulus, 1, 0, 1, 1)};
    // A generating set for the units, greedily.
    std::vector<int> unit_gens;
    std::set<int> reached{1 % modulus};
    for (int u : unit_residues(modulus)) {
        if (reached.count(u)) continue;
        unit_gens.push_back(u);
        std::vector<int> frontier(reached.begin(), reached.end());
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            for (int g : unit_gens) {
                int y = static_cast<int>(static_cast<std::int64_t>(frontier[i]) * g % modulus);
                if (reached.insert(y).second) frontier.push_back(y);
            }
        }
    }
    for (int u : unit_gens) gens.emplace_back(modulus, u, 0, 0, 1);
    return generate_subgroup(modulus, gens);
}

Subgroup normal_closure(const Subgroup& g, const std::vector<GL2Element>& elems) {
    Subgroup k = generate_subgroup(g.modulus(), elems);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& x : g.generators()) {
            const GL2Element xi = inverse(x);
            for (const auto& h : k.generators()) {
                GL2Element c = xi * h * x;
                if (!k.contains(c)) {
                    auto gens = k.generators();
                    gens.push_back(c);
                    k = generate_subgroup(g.modulus(), gens);
                    changed = true;
                    break;
                }
            }
            if (changed) break;
        }
    }
    return k;
}

Subgroup commutator_subgroup(const Subgroup& g) {
    const auto& gens = g.generators();
    std::vector<GL2Element> comms;
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            GL2Element c = commutator(gens[i], gens[j]);
            if (!c.is_identity()) comms.push_back(c);
        }
    return normal_closure(g, comms);
}

Subgroup center(const Subgroup& g) {
    std::vector<GL2Element> central;
    for (const auto& z : g.elements()) {
        bool ok = std::all_of(g.generators().begin(), g.generators().end(),
                              [&](const GL2Element& x) { return x * z == z * x; });
        if (ok) central.push_back(z);
    }
    return detail::from_elements(g.modulus(), central);
}

AbelianInvariants abelian_invariants(const Subgroup& g, const std::optional<Subgroup>& normal) {
    Subgroup n = normal ? *normal : commutator_subgroup(g);
    if (!g.contains(n)) throw std::invalid_argument("normal subgroup is not contained in G");
    const auto& gens = g.generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (!n.contains(commutator(gens[i], gens[j]))) {
                throw NonAbelianQuotient(gens[i], gens[j]);
            }

    std::vector<std::uint64_t> extracted;
    const auto elems = g.elements();
    while (g.order() / n.order() > 1) {
        const std::uint64_t q = g.order() / n.order();
        const auto qf = factorize(q);
        std::uint64_t best = 0;
        const GL2Element* best_elem = nullptr;
        for (const auto& x : elems) {
            if (n.contains(x)) continue;
            std::uint64_t ord = q;
            for (auto [p, e] : qf) {
                for (int i = 0; i < e; ++i) {
                    if (!n.contains(power(x, static_cast<std::int64_t>(ord / p)))) break;
                    ord /= p;
                }
            }
            if (ord > best) {
                best = ord;
                best_elem = &x;
                if (best == q) break;
            }
        }
        extracted.push_back(best);
        auto ngens = n.generators();
        ngens.push_back(*best_elem);
        n = generate_subgroup(g.modulus(), ngens);
    }
    std::reverse(extracted.begin(), extracted.end());
    return AbelianInvariants{extracted};
}

std::map<std::uint64_t, std::uint64_t> order_histogram(const Subgroup& g) {
    const auto f = factorize(g.order());
    std::map<std::uint64_t, std::uint64_t> hist;
    for (const auto& x : g.elements()) ++hist[detail::order_in_group(x, g.order(), f)];
    return hist;
}

GroupFingerprint fingerprint(const Subgroup& g) {
    GroupFingerprint fp;
    fp.order = g.order();
    fp.order_histogram = order_histogram(g);
    Subgroup derived = commutator_subgroup(g);
    fp.derived_order = derived.order();
    fp.abelianization = abelian_invariants(g, derived);
    fp.center_order = center(g).order();
    return fp;
}

// --- conjugacy -------------------------------------------------------------

Subgroup conjugate(const Subgroup& g, const GL2Element& w) {
    const GL2Element wi = inverse(w);
    std::vector<std::uint32_t> keys;
    keys.reserve(g.order());
    for (const auto& x : g.elements()) keys.push_back((wi * x * w).key());
    std::sort(keys.begin(), keys.end());
    std::vector<GL2Element> gens;
    for (const auto& x : g.generators()) gens.push_back(wi * x * w);
    return Subgroup(g.modulus(), std::move(gens), std::move(keys));
}

namespace {

std::map<std::pair<int, int>, std::uint64_t> charpoly_histogram(const Subgroup& g) {
    std::map<std::pair<int, int>, std::uint64_t> hist;
    for (const auto& x : g.elements()) ++hist[{x.trace(), x.det()}];
    return hist;
}

bool conjugates_into(const Subgroup& h, const Subgroup& k, const GL2Element& w) {
    const GL2Element wi = inverse(w);
    for (const auto& x : h.generators()) {
        if (!k.contains(wi * x * w)) return false;
    }
    return true;
}

}  // namespace

std::optional<GL2Element> are_conjugate(const Subgroup& h, const Subgroup& k) {
    if (h.modulus() != k.modulus() || h.order() != k.order()) return std::nullopt;
    const int n = h.modulus();
    const GL2Element id = GL2Element::identity(n);
    if (h == k) return id;
    if (charpoly_histogram(h) != charpoly_histogram(k)) return std::nullopt;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    if (std::gcd(floor_mod(static_cast<std::int64_t>(a) * d - b * c, n),
                                 static_cast<std::int64_t>(n)) != 1) {
                        continue;
                    }
                    GL2Element w(n, a, b, c, d);
                    if (conjugates_into(h, k, w)) return w;
                }
    return std::nullopt;
}

std::optional<GL2Element> are_conjugate_in(const Subgroup& h, const Subgroup& k,
                                           const Subgroup& within) {
    if (h.modulus() != k.modulus() || h.order() != k.order()) return std::nullopt;
    if (h == k) return GL2Element::identity(h.modulus());
    for (const auto& w : within.elements()) {
        if (conjugates_into(h, k, w)) return w;
    }
    return std::nullopt;
}

// --- isomorphism -------------------------------------------------------------

namespace {

struct IndexedGroup {
    const Subgroup* g;
    std::vector<GL2Element> elems;
    std::vector<std::uint32_t> orders;

    explicit IndexedGroup(const Subgroup& s) : g(&s), elems(s.elements()) {
        const auto f = factorize(s.order());
        orders.reserve(elems.size());
        for (const auto& x : elems) {
            orders.push_back(static_cast<std::uint32_t>(detail::order_in_group(x, s.order(), f)));
        }
    }
    std::size_t index(const GL2Element& x) const { return static_cast<std::size_t>(g->index_of(x)); }
    std::uint32_t order_of(const GL2Element& x) const { return orders[index(x)]; }
};

std::vector<std::size_t> greedy_generators(const IndexedGroup& h) {
    std::vector<std::size_t> idx(h.elems.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return h.orders[x] > h.orders[y]; });
    std::vector<std::size_t> chosen;
    std::vector<GL2Element> gens;
    Subgroup current = generate_subgroup(h.g->modulus(), {});
    for (std::size_t i : idx) {
        if (current.order() == h.g->order()) break;
        if (current.contains(h.elems[i])) continue;
        chosen.push_back(i);
        gens.push_back(h.elems[i]);
        current = generate_subgroup(h.g->modulus(), gens);
    }
    return chosen;
}

// Representatives of the conjugacy classes of k.
std::vector<std::size_t> class_representatives(const IndexedGroup& k) {
    std::vector<bool> seen(k.elems.size(), false);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < k.elems.size(); ++i) {
        if (seen[i]) continue;
        reps.push_back(i);
        std::vector<std::size_t> queue{i};
        seen[i] = true;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            for (const auto& s : k.g->generators()) {
                std::size_t j = k.index(inverse(s) * k.elems[queue[q]] * s);
                if (!seen[j]) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    return reps;
}

bool extends_to_isomorphism(const IndexedGroup& h, const IndexedGroup& k,
                            const std::vector<GL2Element>& hg, const std::vector<GL2Element>& kg) {
    const std::size_t n = h.elems.size();
    std::vector<std::int64_t> image(n, -1);
    std::vector<bool> used(n, false);
    const std::size_t id_h = h.index(GL2Element::identity(h.g->modulus()));
    const std::size_t id_k = k.index(GL2Element::identity(k.g->modulus()));
    image[id_h] = static_cast<std::int64_t>(id_k);
    used[id_k] = true;
    std::vector<std::size_t> queue{id_h};
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::size_t x = queue[q];
        const GL2Element& kx = k.elems[static_cast<std::size_t>(image[x])];
        for (std::size_t i = 0; i < hg.size(); ++i) {
            const std::size_t y = h.index(h.elems[x] * hg[i]);
            const std::size_t ky = k.index(kx * kg[i]);
            if (image[y] < 0) {
                if (used[ky]) return false;
                image[y] = static_cast<std::int64_t>(ky);
                used[ky] = true;
                queue.push_back(y);
            } else if (static_cast<std::size_t>(image[y]) != ky) {
                return false;
            }
        }
    }
    return queue.size() == n;
}

}  // namespace

bool are_isomorphic(const Subgroup& h, const Subgroup& k) {
    if (h.order() != k.order()) return false;
    if (h.order() == 1) return true;
    if (!(fingerprint(h) == fingerprint(k))) return false;

    IndexedGroup hi(h), ki(k);
    const auto gen_idx = greedy_generators(hi);
    std::vector<GL2Element> hg;
    for (auto i : gen_idx) hg.push_back(hi.elems[i]);
    const std::size_t r = hg.size();

    // Orders of pairwise products constrain the images.
    std::vector<std::vector<std::uint32_t>> prod_order(r, std::vector<std::uint32_t>(r, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j) prod_order[i][j] = hi.order_of(hg[i] * hg[j]);

    std::vector<std::vector<std::size_t>> candidates(r);
    const auto reps = class_representatives(ki);
    for (std::size_t i = 0; i < r; ++i) {
        const std::uint32_t want = hi.orders[gen_idx[i]];
        if (i == 0) {
            for (auto j : reps)
                if (ki.orders[j] == want) candidates[i].push_back(j);
        } else {
            for (std::size_t j = 0; j < ki.elems.size(); ++j)
                if (ki.orders[j] == want) candidates[i].push_back(j);
        }
    }

    std::vector<GL2Element> kg(r, GL2Element::identity(k.modulus()));
    std::function<bool(std::size_t)> search = [&](std::size_t depth) -> bool {
        if (depth == r) return extends_to_isomorphism(hi, ki, hg, kg);
        for (std::size_t c : candidates[depth]) {
            kg[depth] = ki.elems[c];
            bool ok = true;
            for (std::size_t j = 0; j < depth && ok; ++j) {
                ok = ki.order_of(kg[depth] * kg[j]) == prod_order[depth][j];
            }
            if (ok && search(depth + 1)) return true;
        }
        return false;
    };
    return search(0);
}

// --- reduction, determinant, scalars -------------------------------------

Subgroup reduction_image(const Subgroup& g, int m) {
    if (m == g.modulus()) return g;
    if (m < 2 || g.modulus() % m != 0) {
        throw std::invalid_argument(std::to_string(m) + " does not divide modulus " +
                                    std::to_string(g.modulus()));
    }
    std::vector<GL2Element> gens;
    for (const auto& x : g.generators()) gens.push_back(reduce(x, m));
    return generate_subgroup(m, gens);
}

Subgroup reduction_kernel(const Subgroup& g, int m) {
    std::vector<GL2Element> kernel;
    for (const auto& x : g.elements()) {
        if (reduce(x, m).is_identity()) kernel.push_back(x);
    }
    return detail::from_elements(g.modulus(), kernel);
}

std::vector<int> det_image(const Subgroup& g) {
    const int n = g.modulus();
    std::set<int> reached{1 % n};
    std::vector<int> frontier{1 % n};
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        for (const auto& x : g.generators()) {
            int y = static_cast<int>(static_cast<std::int64_t>(frontier[i]) * x.det() % n);
            if (reached.insert(y).second) frontier.push_back(y);
        }
    }
    return {reached.begin(), reached.end()};
}

bool det_surjective(const Subgroup& g) {
    return det_image(g).size() == euler_phi(static_cast<std::uint64_t>(g.modulus()));
}

std::optional<GL2Element> cc_element(const Subgroup& g) {
    const int n = g.modulus();
    for (const auto& x : g.elements()) {
        if (x.trace() == 0 && x.det() == n - 1) return x;
    }
    return std::nullopt;
}

Subgroup scalar_subgroup(const Subgroup& g) {
    std::vector<GL2Element> scalars;
    for (const auto& x : g.elements()) {
        if (x.is_scalar()) scalars.push_back(x);
    }
    return detail::from_elements(g.modulus(), scalars);
}

std::uint64_t projective_order(const Subgroup& g) { return g.order() / scalar_subgroup(g).order(); }

std::map<std::uint64_t, std::uint64_t> projective_order_histogram(const Subgroup& g) {
    const std::uint64_t z = scalar_subgroup(g).order();
    std::map<std::uint64_t, std::uint64_t> hist;
    for (const auto& x : g.elements()) {
        std::uint64_t k = 1;
        GL2Element y = x;
        while (!y.is_scalar()) {
            y = y * x;
            ++k;
        }
        ++hist[k];
    }
    for (auto& [k, count] : hist) count /= z;
    return hist;
}

}  // namespace ecl

namespace ecl {

std::vector<Subgroup> isomorphism_graphs(const Subgroup& a, const Subgroup& b) {
    const int m = a.modulus(), n = b.modulus();
    if (std::gcd(m, n) != 1) throw std::invalid_argument("isomorphism_graphs: moduli not coprime");
    if (m * n > kModulusCeiling) throw std::invalid_argument("isomorphism_graphs: product modulus too large");
    std::vector<Subgroup> out;
    if (a.order() != b.order()) return out;
    const auto gens = detail::small_generating_set(a);
    const auto targets = b.elements();
    std::vector<std::uint64_t> gen_orders;
    for (const auto& g : gens) gen_orders.push_back(element_order(g));
    std::vector<GL2Element> images;
    std::vector<std::vector<std::uint32_t>> seen;
    auto visit = [&](auto&& self, std::size_t i) -> void {
        if (i == gens.size()) {
            std::vector<GL2Element> combined;
            for (std::size_t j = 0; j < gens.size(); ++j) combined.push_back(crt_combine({gens[j], images[j]}));
            Subgroup s = generate_subgroup(m * n, combined);
            if (s.order() != a.order() || reduction_image(s, n).order() != b.order()) return;
            if (std::find(seen.begin(), seen.end(), s.keys()) != seen.end()) return;
            seen.push_back(s.keys());
            out.push_back(std::move(s));
            return;
        }
        for (const auto& x : targets) {
            if (element_order(x) != gen_orders[i]) continue;
            images.push_back(x);
            self(self, i + 1);
            images.pop_back();
        }
    };
    visit(visit, 0);
    std::sort(out.begin(), out.end(), [](const Subgroup& x, const Subgroup& y) { return x.keys() < y.keys(); });
    return out;
}

Subgroup direct_product(const Subgroup& a, const Subgroup& b) {
    const int m = a.modulus(), n = b.modulus();
    if (std::gcd(m, n) != 1) throw std::invalid_argument("direct_product: moduli not coprime");
    std::vector<GL2Element> gens;
    for (const auto& g : a.generators()) gens.push_back(crt_combine({g, GL2Element::identity(n)}));
    for (const auto& g : b.generators()) gens.push_back(crt_combine({GL2Element::identity(m), g}));
    return generate_subgroup(m * n, gens);
}

}  // namespace ecl
