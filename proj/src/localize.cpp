#include "locus/localize.hpp"

#include <algorithm>

#include "locus/error.hpp"

namespace locus {

int LocalizedSpace::point_of(int x, int z) const {
    for (std::size_t i = 0; i < provenance.size(); ++i)
        if (provenance[i] == std::make_pair(x, z)) return static_cast<int>(i);
    return -1;
}

namespace {

PointSet basic_open_raw(const StructuredSpace& base, const std::vector<std::pair<int, int>>& prov, int x,
                        const Elem& s) {
    PointSet out = 0;
    for (std::size_t i = 0; i < prov.size(); ++i) {
        auto [x2, z2] = prov[i];
        if (!contains(base.space().min_open(x), x2)) continue;
        if (!base.stalk(x2).in_prime(z2, base.res(x, x2).apply(s))) out |= singleton(static_cast<int>(i));
    }
    return out;
}

}  // namespace

LocalizedSpace localize(const SpacePtr& x, const PrimeSystem& m) {
    check_prime_system(*x, m);
    LocalizedSpace l;
    l.base = x;
    l.primes = m;
    std::vector<std::string> names;
    std::vector<Algebra> stalks;
    nlohmann::json prov = nlohmann::json::array();
    for (int p = 0; p < x->size(); ++p)
        for (int z : m.primes[static_cast<std::size_t>(p)]) {
            l.provenance.emplace_back(p, z);
            l.localizations.push_back(localize_at_prime(x->stalk(p), z));
            names.push_back("(" + x->space().name(p) + "," + std::to_string(z) + ")");
            stalks.push_back(l.localizations.back().object);
            prov.push_back({{"point", x->space().name(p)}, {"prime", z}});
        }
    const int n = static_cast<int>(l.provenance.size());
    if (n > 64) throw EnumerationBudgetExceeded("localization has more than 64 points");

    std::vector<PointSet> opens;
    for (int i = 0; i < n; ++i) {
        auto [p, z] = l.provenance[static_cast<std::size_t>(i)];
        const Algebra& a = x->stalk(p);
        PointSet u = basic_open_raw(*x, l.provenance, p, a.unit());
        if (a.is_ring()) {
            for (int s = 0; s < a.ring().size(); ++s)
                if (!a.in_prime(z, {s})) u &= basic_open_raw(*x, l.provenance, p, {s});
        } else {
            const std::uint64_t face = a.primes()[static_cast<std::size_t>(z)].face;
            for (int g = 0; g < a.monoid().ngens(); ++g)
                if ((face >> g) & 1) u &= basic_open_raw(*x, l.provenance, p, a.monoid().generator(g));
        }
        opens.push_back(u);
    }

    std::map<std::pair<int, int>, AlgebraMap> res;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !contains(opens[static_cast<std::size_t>(i)], j)) continue;
            int p = l.provenance[static_cast<std::size_t>(i)].first;
            int q = l.provenance[static_cast<std::size_t>(j)].first;
            AlgebraMap g = compose(l.localizations[static_cast<std::size_t>(j)].map, x->res(p, q));
            res.emplace(std::make_pair(i, j), lift_through_localization(l.localizations[static_cast<std::size_t>(i)], g));
        }
    StructuredSpace s(FiniteSpace(std::move(names), std::move(opens)), std::move(stalks), std::move(res), x->monoid_kind());
    s.set_provenance(std::move(prov));
    l.space = make_space(std::move(s));

    l.pi = SpaceMorphism{l.space, x, {}, {}};
    for (int i = 0; i < n; ++i) {
        l.pi.point_map.push_back(l.provenance[static_cast<std::size_t>(i)].first);
        l.pi.stalk_maps.push_back(l.localizations[static_cast<std::size_t>(i)].map);
    }
    return l;
}

PointSet basic_open(const LocalizedSpace& l, int x, const Elem& s) {
    return basic_open_raw(*l.base, l.provenance, x, l.base->stalk(x).normalize(s));
}

PointSet basic_open(const LocalizedSpace& l, PointSet u, const std::vector<Elem>& s) {
    if (!is_compatible_family(*l.base, u, s)) throw InvalidParameter("not a section over the open");
    const auto pts = l.base->space().points_of(u);
    PointSet out = 0;
    for (std::size_t i = 0; i < l.provenance.size(); ++i) {
        auto [x, z] = l.provenance[i];
        auto it = std::find(pts.begin(), pts.end(), x);
        if (it == pts.end()) continue;
        const Elem& sx = s[static_cast<std::size_t>(it - pts.begin())];
        if (!l.base->stalk(x).in_prime(z, l.base->stalk(x).normalize(sx))) out |= singleton(static_cast<int>(i));
    }
    return out;
}

SpaceMorphism lift_morphism(const SpaceMorphism& f, const LocalizedSpace& lx, const LocalizedSpace& ly) {
    if (!is_prs_morphism(f, lx.primes, ly.primes)) throw NotPRS("morphism does not map M into N");
    SpaceMorphism out{lx.space, ly.space, {}, {}};
    for (std::size_t i = 0; i < lx.provenance.size(); ++i) {
        auto [x, z] = lx.provenance[i];
        const int y = f.point_map[static_cast<std::size_t>(x)];
        const AlgebraMap& fx = f.stalk_maps[static_cast<std::size_t>(x)];
        const int w = preimage_prime(fx, z);
        const int target = ly.point_of(y, w);
        if (target < 0) throw NotPRS("preimage prime is not in the target system");
        out.point_map.push_back(target);
        AlgebraMap g = compose(lx.localizations[i].map, fx);
        out.stalk_maps.push_back(lift_through_localization(ly.localizations[static_cast<std::size_t>(target)], g));
    }
    return out;
}

SpaceMorphism lift_to_localization(const SpaceMorphism& g, const LocalizedSpace& lx) {
    SpaceMorphism out{g.source, lx.space, {}, {}};
    for (int y = 0; y < g.source->size(); ++y) {
        const int x = g.point_map[static_cast<std::size_t>(y)];
        const AlgebraMap& gy = g.stalk_maps[static_cast<std::size_t>(y)];
        const int z = preimage_prime(gy, g.source->stalk(y).maximal_prime());
        const int target = lx.point_of(x, z);
        if (target < 0) throw NotPRS("pulled back maximal ideal is not in the prime system");
        out.point_map.push_back(target);
        out.stalk_maps.push_back(lift_through_localization(lx.localizations[static_cast<std::size_t>(target)], gy));
    }
    return out;
}

AdjunctionReport check_localization_adjunction(const SpacePtr& y, const LocalizedSpace& lx, bool chevalley) {
    AdjunctionReport r;
    const auto left = enumerate_morphisms(y, lx.space, Flavor::LRS);
    const PrimeSystem my = local_prime_system(*y);
    const auto right = chevalley ? enumerate_morphisms(y, lx.base, Flavor::RS)
                                 : enumerate_morphisms(y, lx.base, Flavor::PRS, &my, &lx.primes);
    r.left = left.size();
    r.right = right.size();
    auto in_right = [&](const SpaceMorphism& g) { return std::find(right.begin(), right.end(), g) != right.end(); };
    r.round_trip_left = std::all_of(left.begin(), left.end(), [&](const SpaceMorphism& h) {
        SpaceMorphism g = compose(lx.pi, h);
        return in_right(g) && lift_to_localization(g, lx) == h;
    });
    r.round_trip_right = std::all_of(right.begin(), right.end(), [&](const SpaceMorphism& g) {
        SpaceMorphism h = lift_to_localization(g, lx);
        return std::find(left.begin(), left.end(), h) != left.end() && compose(lx.pi, h) == g;
    });
    return r;
}

}  // namespace locus
