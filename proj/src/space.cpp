#include "locus/space.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "locus/budget.hpp"
#include "locus/error.hpp"

namespace locus {

namespace {

constexpr int kMaxPoints = 64;
constexpr std::size_t kMaxSections = 4096;

std::vector<std::uint16_t> to_u16(const std::vector<int>& v) {
    return std::vector<std::uint16_t>(v.begin(), v.end());
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<std::string> point_names, std::vector<PointSet> opens)
    : names_(std::move(point_names)), min_open_(std::move(opens)) {
    const int n = size();
    if (n > kMaxPoints) throw InvalidParameter("finite spaces are limited to 64 points");
    if (min_open_.size() != names_.size()) throw InvalidParameter("one minimal open per point required");
    std::set<std::string> seen(names_.begin(), names_.end());
    if (static_cast<int>(seen.size()) != n) throw InvalidParameter("point names must be distinct");
    for (int x = 0; x < n; ++x) {
        PointSet u = min_open(x);
        if (!contains(u, x)) throw InvalidParameter("minimal open of " + name(x) + " does not contain it");
        if ((u & ~all()) != 0) throw InvalidParameter("minimal open of " + name(x) + " has unknown points");
        for (int y = 0; y < n; ++y)
            if (contains(u, y) && (min_open(y) & ~u) != 0)
                throw InvalidParameter("minimal opens are not transitive at " + name(x));
    }
}

PointSet FiniteSpace::all() const {
    return size() == 64 ? ~PointSet{0} : (PointSet{1} << size()) - 1;
}

int FiniteSpace::index_of(const std::string& n) const {
    for (int x = 0; x < size(); ++x)
        if (names_[static_cast<std::size_t>(x)] == n) return x;
    throw InvalidParameter("unknown point " + n);
}

bool FiniteSpace::is_open(PointSet u) const {
    for (int x = 0; x < size(); ++x)
        if (contains(u, x) && (min_open(x) & ~u) != 0) return false;
    return (u & ~all()) == 0;
}

PointSet FiniteSpace::open_hull(PointSet s) const {
    PointSet u = 0;
    for (int x = 0; x < size(); ++x)
        if (contains(s, x)) u |= min_open(x);
    return u;
}

std::vector<int> FiniteSpace::points_of(PointSet s) const {
    std::vector<int> out;
    for (int x = 0; x < size(); ++x)
        if (contains(s, x)) out.push_back(x);
    return out;
}

StructuredSpace::StructuredSpace(FiniteSpace space, std::vector<Algebra> stalks,
                                 std::map<std::pair<int, int>, AlgebraMap> res, bool monoid_kind)
    : space_(std::move(space)), stalks_(std::move(stalks)), res_(std::move(res)), monoid_kind_(monoid_kind) {}

AlgebraMap StructuredSpace::res(int x, int y) const {
    if (x == y) return AlgebraMap::identity(stalk(x));
    auto it = res_.find({x, y});
    if (it == res_.end())
        throw ValidationError("no generization map " + space_.name(x) + "->" + space_.name(y));
    return it->second;
}

void StructuredSpace::validate() const {
    const int n = size();
    if (static_cast<int>(stalks_.size()) != n) throw ValidationError("one stalk per point required");
    for (const auto& s : stalks_)
        if (s.is_monoid() != monoid_kind_) throw ValidationError("stalk kinds disagree with the space kind");
    for (const auto& [key, map] : res_) {
        auto [x, y] = key;
        if (x < 0 || y < 0 || x >= n || y >= n || x == y || !contains(space_.min_open(x), y))
            throw ValidationError("generization map between unrelated points");
        if (!map.source().same(stalk(x)) || !map.target().same(stalk(y)))
            throw ValidationError("generization map " + space_.name(x) + "->" + space_.name(y) + " has wrong ends");
        if (!map.is_homomorphism())
            throw ValidationError("generization map " + space_.name(x) + "->" + space_.name(y) + " is not a homomorphism");
    }
    for (int x = 0; x < n; ++x)
        for (int y : space_.points_of(space_.min_open(x))) {
            if (y != x && !res_.count({x, y}))
                throw ValidationError("missing generization map " + space_.name(x) + "->" + space_.name(y));
        }
    for (int x = 0; x < n; ++x)
        for (int y : space_.points_of(space_.min_open(x)))
            for (int z : space_.points_of(space_.min_open(y)))
                if (compose(res(y, z), res(x, y)) != res(x, z))
                    throw ValidationError("generization maps are not functorial at " + space_.name(x) + "->" +
                                          space_.name(y) + "->" + space_.name(z));
}

SpacePtr make_space(StructuredSpace s) {
    s.validate();
    return std::make_shared<const StructuredSpace>(std::move(s));
}

SpacePtr punctual(const Algebra& a, const std::string& name) {
    return make_space(StructuredSpace(FiniteSpace({name}, {1}), {a}, {}, a.is_monoid()));
}

SpacePtr empty_space(bool monoid_kind) {
    return make_space(StructuredSpace(FiniteSpace({}, {}), {}, {}, monoid_kind));
}

SpacePtr subspace(const SpacePtr& x, PointSet points) {
    const auto pts = x->space().points_of(points);
    std::vector<int> pos(static_cast<std::size_t>(x->size()), -1);
    for (std::size_t i = 0; i < pts.size(); ++i) pos[static_cast<std::size_t>(pts[i])] = static_cast<int>(i);
    std::vector<std::string> names;
    std::vector<PointSet> opens;
    std::vector<Algebra> stalks;
    std::map<std::pair<int, int>, AlgebraMap> res;
    for (int p : pts) {
        names.push_back(x->space().name(p));
        PointSet u = 0;
        for (int q : x->space().points_of(x->space().min_open(p) & points)) {
            u |= singleton(pos[static_cast<std::size_t>(q)]);
            if (q != p) res.emplace(std::make_pair(pos[static_cast<std::size_t>(p)], pos[static_cast<std::size_t>(q)]), x->res(p, q));
        }
        opens.push_back(u);
        stalks.push_back(x->stalk(p));
    }
    StructuredSpace s(FiniteSpace(std::move(names), std::move(opens)), std::move(stalks), std::move(res), x->monoid_kind());
    if (x->provenance().is_array()) {
        nlohmann::json prov = nlohmann::json::array();
        for (int p : pts) prov.push_back(x->provenance()[static_cast<std::size_t>(p)]);
        s.set_provenance(std::move(prov));
    }
    return make_space(std::move(s));
}

bool is_local_space(const StructuredSpace& x) {
    return std::all_of(x.stalks().begin(), x.stalks().end(), [](const Algebra& a) { return a.is_local(); });
}

bool SpaceMorphism::operator==(const SpaceMorphism& other) const {
    if (point_map != other.point_map || stalk_maps.size() != other.stalk_maps.size()) return false;
    for (std::size_t i = 0; i < stalk_maps.size(); ++i)
        if (stalk_maps[i] != other.stalk_maps[i]) return false;
    return true;
}

SpaceMorphism identity_morphism(const SpacePtr& x) {
    SpaceMorphism f{x, x, {}, {}};
    for (int p = 0; p < x->size(); ++p) {
        f.point_map.push_back(p);
        f.stalk_maps.push_back(AlgebraMap::identity(x->stalk(p)));
    }
    return f;
}

SpaceMorphism compose(const SpaceMorphism& g, const SpaceMorphism& f) {
    if (f.target->size() != g.source->size()) throw NotAMap("morphisms are not composable");
    SpaceMorphism h{f.source, g.target, {}, {}};
    for (int x = 0; x < f.source->size(); ++x) {
        int y = f.point_map[static_cast<std::size_t>(x)];
        h.point_map.push_back(g.point_map[static_cast<std::size_t>(y)]);
        h.stalk_maps.push_back(compose(f.stalk_maps[static_cast<std::size_t>(x)], g.stalk_maps[static_cast<std::size_t>(y)]));
    }
    return h;
}

SpaceMorphism inclusion(const SpacePtr& sub, const SpacePtr& x, const std::vector<int>& point_map) {
    SpaceMorphism f{sub, x, point_map, {}};
    for (int p = 0; p < sub->size(); ++p) {
        const Algebra& a = x->stalk(point_map[static_cast<std::size_t>(p)]);
        if (!a.same(sub->stalk(p))) throw NotAMap("inclusion between different stalks");
        f.stalk_maps.push_back(AlgebraMap::identity(a));
    }
    return f;
}

bool is_continuous(const SpaceMorphism& f) {
    const auto& xs = f.source->space();
    const auto& ys = f.target->space();
    for (int x = 0; x < xs.size(); ++x)
        for (int x2 : xs.points_of(xs.min_open(x)))
            if (!contains(ys.min_open(f.point_map[static_cast<std::size_t>(x)]), f.point_map[static_cast<std::size_t>(x2)]))
                return false;
    return true;
}

bool is_natural(const SpaceMorphism& f) {
    const auto& xs = f.source->space();
    for (int x = 0; x < xs.size(); ++x)
        for (int x2 : xs.points_of(xs.min_open(x))) {
            if (x2 == x) continue;
            int y = f.point_map[static_cast<std::size_t>(x)], y2 = f.point_map[static_cast<std::size_t>(x2)];
            AlgebraMap rx = f.source->res(x, x2);
            AlgebraMap ry = f.target->res(y, y2);
            for (const auto& t : f.target->stalk(y).generators())
                if (rx.apply(f.stalk_maps[static_cast<std::size_t>(x)].apply(t)) !=
                    f.stalk_maps[static_cast<std::size_t>(x2)].apply(ry.apply(t)))
                    return false;
        }
    return true;
}

bool is_rs_morphism(const SpaceMorphism& f) {
    const int n = f.source->size();
    if (static_cast<int>(f.point_map.size()) != n || static_cast<int>(f.stalk_maps.size()) != n) return false;
    for (int x = 0; x < n; ++x) {
        int y = f.point_map[static_cast<std::size_t>(x)];
        if (y < 0 || y >= f.target->size()) return false;
        const auto& m = f.stalk_maps[static_cast<std::size_t>(x)];
        if (!m.source().same(f.target->stalk(y)) || !m.target().same(f.source->stalk(x))) return false;
        if (!m.is_homomorphism()) return false;
    }
    return is_continuous(f) && is_natural(f);
}

bool is_lrs_morphism(const SpaceMorphism& f) {
    if (!is_rs_morphism(f)) return false;
    for (const auto& m : f.stalk_maps) {
        if (!m.source().is_local() || !m.target().is_local()) return false;
        if (!is_local_hom(m)) return false;
    }
    return true;
}

PrimeSystem local_prime_system(const StructuredSpace& x) {
    PrimeSystem m;
    for (const auto& s : x.stalks()) m.primes.push_back({s.maximal_prime()});
    return m;
}

PrimeSystem terminal_prime_system(const StructuredSpace& x) {
    PrimeSystem m;
    for (const auto& s : x.stalks()) {
        std::vector<int> all(s.primes().size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        m.primes.push_back(std::move(all));
    }
    return m;
}

PrimeSystem intersect(const std::vector<PrimeSystem>& systems) {
    if (systems.empty()) throw InvalidParameter("intersection of no prime systems");
    PrimeSystem out = systems.front();
    for (std::size_t i = 1; i < systems.size(); ++i) {
        if (systems[i].primes.size() != out.primes.size()) throw InvalidParameter("prime systems on different spaces");
        for (std::size_t x = 0; x < out.primes.size(); ++x) {
            std::vector<int> keep;
            std::set_intersection(out.primes[x].begin(), out.primes[x].end(), systems[i].primes[x].begin(),
                                  systems[i].primes[x].end(), std::back_inserter(keep));
            out.primes[x] = std::move(keep);
        }
    }
    return out;
}

bool is_subsystem(const PrimeSystem& m, const PrimeSystem& n) {
    if (m.primes.size() != n.primes.size()) return false;
    for (std::size_t x = 0; x < m.primes.size(); ++x)
        if (!std::includes(n.primes[x].begin(), n.primes[x].end(), m.primes[x].begin(), m.primes[x].end())) return false;
    return true;
}

PrimeSystem pullback_prime_system(const SpaceMorphism& f, const PrimeSystem& n) {
    PrimeSystem out;
    for (int x = 0; x < f.source->size(); ++x) {
        const auto& fx = f.stalk_maps[static_cast<std::size_t>(x)];
        const auto& ny = n.primes.at(static_cast<std::size_t>(f.point_map[static_cast<std::size_t>(x)]));
        std::vector<int> keep;
        for (int p = 0; p < static_cast<int>(f.source->stalk(x).primes().size()); ++p)
            if (std::binary_search(ny.begin(), ny.end(), preimage_prime(fx, p))) keep.push_back(p);
        out.primes.push_back(std::move(keep));
    }
    return out;
}

bool is_prs_morphism(const SpaceMorphism& f, const PrimeSystem& m, const PrimeSystem& n) {
    return is_subsystem(m, pullback_prime_system(f, n));
}

void check_prime_system(const StructuredSpace& x, const PrimeSystem& m) {
    if (static_cast<int>(m.primes.size()) != x.size()) throw ValidationError("prime system has wrong number of points");
    for (int p = 0; p < x.size(); ++p) {
        const auto& ps = m.primes[static_cast<std::size_t>(p)];
        if (!std::is_sorted(ps.begin(), ps.end()) || std::adjacent_find(ps.begin(), ps.end()) != ps.end())
            throw ValidationError("prime system entries must be sorted and distinct");
        for (int i : ps)
            if (i < 0 || i >= static_cast<int>(x.stalk(p).primes().size()))
                throw UnknownPrime("prime index " + std::to_string(i) + " at " + x.space().name(p));
    }
}

bool is_compatible_family(const StructuredSpace& x, PointSet u, const std::vector<Elem>& family) {
    const auto pts = x.space().points_of(u);
    if (family.size() != pts.size()) return false;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j && contains(x.space().min_open(pts[i]), pts[j]) &&
                x.res(pts[i], pts[j]).apply(family[i]) != x.stalk(pts[j]).normalize(family[j]))
                return false;
    return true;
}

std::optional<Sections> sections_via_point(const StructuredSpace& x, PointSet u) {
    for (int p : x.space().points_of(u)) {
        if (x.space().min_open(p) != u) continue;
        Sections s{x.stalk(p), x.space().points_of(u), {}};
        for (int q : s.points) s.projections.push_back(x.res(p, q));
        return s;
    }
    return std::nullopt;
}

Sections sections(const StructuredSpace& x, PointSet u) {
    if (!x.space().is_open(u)) throw InvalidParameter("sections need an open set");
    if (u == 0) {
        Algebra t = x.monoid_kind() ? trivial_monoid() : zero_ring();
        return {t, {}, {}};
    }
    if (x.monoid_kind()) {
        if (auto s = sections_via_point(x, u)) return *s;
        throw GeneratorExtractionFailed("monoid sections over an open that is not a minimal open");
    }
    const auto pts = x.space().points_of(u);
    const std::size_t k = pts.size();
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::popcount(x.space().min_open(pts[a])) > std::popcount(x.space().min_open(pts[b]));
    });
    std::vector<int> fam(k, -1);
    std::vector<std::vector<int>> families;
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == k) {
            families.push_back(fam);
            if (families.size() > kMaxSections) throw EnumerationBudgetExceeded("more than 4096 sections");
            return;
        }
        const std::size_t i = order[depth];
        for (int v = 0; v < x.stalk(pts[i]).ring().size(); ++v) {
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                const std::size_t j = order[d];
                if (contains(x.space().min_open(pts[i]), pts[j]) && x.res(pts[i], pts[j]).apply(v) != fam[j]) ok = false;
                if (ok && contains(x.space().min_open(pts[j]), pts[i]) && x.res(pts[j], pts[i]).apply(fam[j]) != v)
                    ok = false;
            }
            if (!ok) continue;
            fam[i] = v;
            self(self, depth + 1);
            fam[i] = -1;
        }
    };
    rec(rec, 0);
    std::sort(families.begin(), families.end());
    const int n = static_cast<int>(families.size());
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < n; ++i) index[families[static_cast<std::size_t>(i)]] = i;
    std::vector<int> add(static_cast<std::size_t>(n * n)), mul(add.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<int> s(k), p(k);
            for (std::size_t i = 0; i < k; ++i) {
                const auto& r = x.stalk(pts[i]).ring();
                s[i] = r.add(families[static_cast<std::size_t>(a)][i], families[static_cast<std::size_t>(b)][i]);
                p[i] = r.mul(families[static_cast<std::size_t>(a)][i], families[static_cast<std::size_t>(b)][i]);
            }
            add[static_cast<std::size_t>(a * n + b)] = index.at(s);
            mul[static_cast<std::size_t>(a * n + b)] = index.at(p);
        }
    std::vector<int> one(k);
    for (std::size_t i = 0; i < k; ++i) one[i] = x.stalk(pts[i]).ring().one();
    Algebra obj(FiniteRing(n, index.at(one), to_u16(add), to_u16(mul), nlohmann::json(), "Gamma"));
    Sections out{obj, pts, {}};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<int> t;
        for (const auto& f : families) t.push_back(f[i]);
        out.projections.emplace_back(obj, x.stalk(pts[i]), std::move(t));
    }
    return out;
}

namespace {

struct StalkCandidates {
    std::map<std::pair<int, int>, std::vector<AlgebraMap>> cache;
};

bool natural_pair(const SpaceMorphism& f, int x, int x2) {
    int y = f.point_map[static_cast<std::size_t>(x)], y2 = f.point_map[static_cast<std::size_t>(x2)];
    AlgebraMap rx = f.source->res(x, x2);
    AlgebraMap ry = f.target->res(y, y2);
    for (const auto& t : f.target->stalk(y).generators())
        if (rx.apply(f.stalk_maps[static_cast<std::size_t>(x)].apply(t)) !=
            f.stalk_maps[static_cast<std::size_t>(x2)].apply(ry.apply(t)))
            return false;
    return true;
}

// Backtracking over point maps, then stalk maps, shared by morphism and
// isomorphism enumeration.
template <typename PointOk, typename Candidates>
std::vector<SpaceMorphism> search(const SpacePtr& x, const SpacePtr& y, PointOk point_ok, Candidates candidates,
                                  bool first_only) {
    const int nx = x->size(), ny = y->size();
    const std::size_t limit = budget().morphism_candidates;
    std::size_t nodes = 0;
    std::vector<SpaceMorphism> out;
    SpaceMorphism f{x, y, std::vector<int>(static_cast<std::size_t>(nx), -1), {}};
    const auto& xs = x->space();
    auto tick = [&] {
        if (++nodes > limit) throw EnumerationBudgetExceeded("morphism enumeration exceeds the candidate budget");
    };
    std::vector<AlgebraMap> maps;
    auto rec_stalks = [&](auto&& self, int i) -> void {
        if (first_only && !out.empty()) return;
        if (i == nx) {
            f.stalk_maps = maps;
            out.push_back(f);
            return;
        }
        const auto& cands = candidates(f.point_map[static_cast<std::size_t>(i)], i);
        for (const auto& c : cands) {
            tick();
            maps.push_back(c);
            f.stalk_maps = maps;
            bool ok = true;
            for (int j = 0; j < i && ok; ++j) {
                if (contains(xs.min_open(i), j) && !natural_pair(f, i, j)) ok = false;
                if (ok && contains(xs.min_open(j), i) && !natural_pair(f, j, i)) ok = false;
            }
            if (ok) self(self, i + 1);
            maps.pop_back();
        }
    };
    auto rec_points = [&](auto&& self, int i) -> void {
        if (first_only && !out.empty()) return;
        if (i == nx) {
            rec_stalks(rec_stalks, 0);
            return;
        }
        for (int p = 0; p < ny; ++p) {
            tick();
            f.point_map[static_cast<std::size_t>(i)] = p;
            if (point_ok(f.point_map, i)) self(self, i + 1);
        }
        f.point_map[static_cast<std::size_t>(i)] = -1;
    };
    rec_points(rec_points, 0);
    return out;
}

}  // namespace

std::vector<SpaceMorphism> enumerate_morphisms(const SpacePtr& x, const SpacePtr& y, Flavor flavor,
                                               const PrimeSystem* m, const PrimeSystem* n) {
    if (x->monoid_kind() != y->monoid_kind()) return {};
    if (flavor == Flavor::PRS && (!m || !n)) throw InvalidParameter("PRS enumeration needs both prime systems");
    const auto& xs = x->space();
    const auto& ys = y->space();
    auto point_ok = [&](const std::vector<int>& pm, int i) {
        for (int j = 0; j <= i; ++j) {
            if (contains(xs.min_open(i), j) &&
                !contains(ys.min_open(pm[static_cast<std::size_t>(i)]), pm[static_cast<std::size_t>(j)]))
                return false;
            if (contains(xs.min_open(j), i) &&
                !contains(ys.min_open(pm[static_cast<std::size_t>(j)]), pm[static_cast<std::size_t>(i)]))
                return false;
        }
        return true;
    };
    std::map<std::pair<int, int>, std::vector<AlgebraMap>> cache;
    auto candidates = [&](int py, int px) -> const std::vector<AlgebraMap>& {
        auto key = std::make_pair(py, px);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::vector<AlgebraMap> keep;
        for (auto& h : hom_set(y->stalk(py), x->stalk(px))) {
            if (flavor == Flavor::LRS) {
                if (!h.source().is_local() || !h.target().is_local() || !is_local_hom(h)) continue;
            } else if (flavor == Flavor::PRS) {
                const auto& ny_ = n->primes[static_cast<std::size_t>(py)];
                bool ok = true;
                for (int p : m->primes[static_cast<std::size_t>(px)])
                    if (!std::binary_search(ny_.begin(), ny_.end(), preimage_prime(h, p))) ok = false;
                if (!ok) continue;
            }
            keep.push_back(std::move(h));
        }
        return cache.emplace(key, std::move(keep)).first->second;
    };
    return search(x, y, point_ok, candidates, false);
}

std::vector<SpaceMorphism> enumerate_isomorphisms(const SpacePtr& x, const SpacePtr& y, bool first_only) {
    if (x->monoid_kind() != y->monoid_kind() || x->size() != y->size()) return {};
    const auto& xs = x->space();
    const auto& ys = y->space();
    auto point_ok = [&](const std::vector<int>& pm, int i) {
        for (int j = 0; j < i; ++j)
            if (pm[static_cast<std::size_t>(j)] == pm[static_cast<std::size_t>(i)]) return false;
        for (int j = 0; j <= i; ++j) {
            int a = pm[static_cast<std::size_t>(i)], b = pm[static_cast<std::size_t>(j)];
            if (contains(xs.min_open(i), j) != contains(ys.min_open(a), b)) return false;
            if (contains(xs.min_open(j), i) != contains(ys.min_open(b), a)) return false;
        }
        return true;
    };
    if (first_only) {
        // structurally equal stalks usually admit an identity-only isomorphism;
        // try that before paying for full hom enumeration
        std::map<std::pair<int, int>, std::vector<AlgebraMap>> cheap;
        auto identities = [&](int py, int px) -> const std::vector<AlgebraMap>& {
            auto key = std::make_pair(py, px);
            auto it = cheap.find(key);
            if (it != cheap.end()) return it->second;
            std::vector<AlgebraMap> keep;
            if (y->stalk(py).same(x->stalk(px))) keep.push_back(AlgebraMap::identity(y->stalk(py)));
            return cheap.emplace(key, std::move(keep)).first->second;
        };
        auto found = search(x, y, point_ok, identities, true);
        if (!found.empty()) return found;
    }
    if (first_only) {
        // structurally equal stalks usually admit an identity-only isomorphism;
        // try that before paying for full hom enumeration
        std::map<std::pair<int, int>, std::vector<AlgebraMap>> cheap;
        auto identities = [&](int py, int px) -> const std::vector<AlgebraMap>& {
            auto key = std::make_pair(py, px);
            auto it = cheap.find(key);
            if (it != cheap.end()) return it->second;
            std::vector<AlgebraMap> keep;
            if (y->stalk(py).same(x->stalk(px))) keep.push_back(AlgebraMap::identity(y->stalk(py)));
            return cheap.emplace(key, std::move(keep)).first->second;
        };
        auto found = search(x, y, point_ok, identities, true);
        if (!found.empty()) return found;
    }
    std::map<std::pair<int, int>, std::vector<AlgebraMap>> cache;
    auto candidates = [&](int py, int px) -> const std::vector<AlgebraMap>& {
        auto key = std::make_pair(py, px);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::vector<AlgebraMap> keep;
        const Algebra& a = y->stalk(py);
        const Algebra& b = x->stalk(px);
        if (a.same(b)) {
            keep.push_back(AlgebraMap::identity(a));
        }
        bool comparable = a.is_ring() ? a.ring().size() == b.ring().size() : a.primes().size() == b.primes().size();
        if (comparable)
            for (auto& h : hom_set(a, b))
                if (inverse_map(h) && !(a.same(b) && h == keep.front())) keep.push_back(std::move(h));
        return cache.emplace(key, std::move(keep)).first->second;
    };
    return search(x, y, point_ok, candidates, first_only);
}

std::optional<SpaceMorphism> find_space_isomorphism(const SpacePtr& x, const SpacePtr& y) {
    auto all = enumerate_isomorphisms(x, y, true);
    if (all.empty()) return std::nullopt;
    return all.front();
}

std::optional<SpaceMorphism> find_isomorphism_over(const SpaceMorphism& p, const SpaceMorphism& q) {
    for (auto& phi : enumerate_isomorphisms(p.source, q.source))
        if (compose(q, phi) == p) return phi;
    return std::nullopt;
}

std::optional<SpaceMorphism> inverse_morphism(const SpaceMorphism& f) {
    const int n = f.source->size();
    if (f.target->size() != n) return std::nullopt;
    std::vector<int> inv(static_cast<std::size_t>(n), -1);
    for (int x = 0; x < n; ++x) {
        int y = f.point_map[static_cast<std::size_t>(x)];
        if (inv[static_cast<std::size_t>(y)] >= 0) return std::nullopt;
        inv[static_cast<std::size_t>(y)] = x;
    }
    SpaceMorphism g{f.target, f.source, inv, {}};
    for (int y = 0; y < n; ++y) {
        auto h = inverse_map(f.stalk_maps[static_cast<std::size_t>(inv[static_cast<std::size_t>(y)])]);
        if (!h) return std::nullopt;
        g.stalk_maps.push_back(*h);
    }
    if (!is_continuous(g)) return std::nullopt;
    return g;
}

}  // namespace locus
