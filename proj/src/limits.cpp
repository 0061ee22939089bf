#include "locus/limits.hpp"

#include <algorithm>

#include "locus/error.hpp"

namespace locus {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

std::vector<int> fiber_of(const LocalizedSpace& loc, int base_point) {
    std::vector<int> out;
    for (std::size_t i = 0; i < loc.provenance.size(); ++i)
        if (loc.provenance[i].first == base_point) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace

void FiniteDiagram::validate() const {
    if (objects.empty()) throw ValidationError("diagram has no objects");
    if (!primes.empty() && primes.size() != objects.size()) throw ValidationError("one prime system slot per object");
    const bool kind = objects.front()->monoid_kind();
    for (const auto& o : objects)
        if (o->monoid_kind() != kind) throw ValidationError("diagram mixes ring and monoid spaces");
    for (const auto& e : arrows) {
        if (e.src < 0 || e.dst < 0 || at(e.src) >= objects.size() || at(e.dst) >= objects.size())
            throw ValidationError("diagram arrow index out of range");
        if (e.map.source != objects[at(e.src)] || e.map.target != objects[at(e.dst)])
            throw ValidationError("diagram arrow endpoints do not match its objects");
        if (!is_rs_morphism(e.map)) throw ValidationError("diagram arrow is not a morphism of ringed spaces");
    }
}

FiniteDiagram cospan(const SpaceMorphism& f1, const SpaceMorphism& f2) {
    if (f1.target != f2.target) throw ValidationError("cospan legs have different targets");
    FiniteDiagram d;
    d.objects = {f1.source, f2.source, f1.target};
    d.arrows = {{0, 2, f1}, {1, 2, f2}};
    return d;
}

FiniteDiagram parallel_pair(const SpaceMorphism& f, const SpaceMorphism& g) {
    if (f.source != g.source || f.target != g.target) throw ValidationError("parallel pair endpoints differ");
    FiniteDiagram d;
    d.objects = {f.source, f.target};
    d.arrows = {{0, 1, f}, {0, 1, g}};
    return d;
}

RsLimit rs_limit(const FiniteDiagram& d) {
    d.validate();
    const int n = static_cast<int>(d.objects.size());
    // arrows become checkable once both endpoints are chosen
    std::vector<std::vector<const DiagramEdge*>> due(at(n));
    for (const auto& e : d.arrows) due[at(std::max(e.src, e.dst))].push_back(&e);

    RsLimit l;
    std::vector<int> t(at(n));
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            if (l.tuples.size() >= 64) throw EnumerationBudgetExceeded("limit has more than 64 points");
            l.tuples.push_back(t);
            return;
        }
        for (int p = 0; p < d.objects[at(i)]->size(); ++p) {
            t[at(i)] = p;
            bool ok = std::all_of(due[at(i)].begin(), due[at(i)].end(), [&](const DiagramEdge* e) {
                return e->map.point_map[at(t[at(e->src)])] == t[at(e->dst)];
            });
            if (ok) self(self, i + 1);
        }
    };
    rec(rec, 0);

    const int m = static_cast<int>(l.tuples.size());
    std::vector<std::string> names;
    std::vector<PointSet> opens;
    std::vector<Colimit> colims;
    for (const auto& tup : l.tuples) {
        std::string name = "(";
        for (int i = 0; i < n; ++i) name += (i ? "," : "") + d.objects[at(i)]->space().name(tup[at(i)]);
        names.push_back(name + ")");
        PointSet u = 0;
        for (int s = 0; s < m; ++s) {
            bool inside = true;
            for (int i = 0; i < n && inside; ++i)
                inside = contains(d.objects[at(i)]->space().min_open(tup[at(i)]), l.tuples[at(s)][at(i)]);
            if (inside) u |= singleton(s);
        }
        opens.push_back(u);
        std::vector<Algebra> objs;
        for (int i = 0; i < n; ++i) objs.push_back(d.objects[at(i)]->stalk(tup[at(i)]));
        std::vector<DiagramArrow> arrows;
        for (const auto& e : d.arrows) arrows.push_back({e.dst, e.src, e.map.stalk_maps[at(tup[at(e.src)])]});
        colims.push_back(colimit(objs, arrows));
    }

    std::vector<Algebra> stalks;
    for (const auto& c : colims) stalks.push_back(c.object);
    std::map<std::pair<int, int>, AlgebraMap> res;
    for (int s = 0; s < m; ++s)
        for (int r = 0; r < m; ++r) {
            if (r == s || !contains(opens[at(s)], r)) continue;
            std::vector<AlgebraMap> cocone;
            for (int i = 0; i < n; ++i)
                cocone.push_back(compose(colims[at(r)].insertions[at(i)],
                                         d.objects[at(i)]->res(l.tuples[at(s)][at(i)], l.tuples[at(r)][at(i)])));
            auto h = mediating_map(colims[at(s)].object, colims[at(s)].insertions, cocone);
            if (!h) throw ValidationError("limit stalks admit no generization map");
            res.emplace(std::make_pair(s, r), std::move(*h));
        }
    l.space = make_space(StructuredSpace(FiniteSpace(std::move(names), std::move(opens)), std::move(stalks),
                                         std::move(res), d.objects.front()->monoid_kind()));
    for (int i = 0; i < n; ++i) {
        SpaceMorphism p{l.space, d.objects[at(i)], {}, {}};
        for (int s = 0; s < m; ++s) {
            p.point_map.push_back(l.tuples[at(s)][at(i)]);
            p.stalk_maps.push_back(colims[at(s)].insertions[at(i)]);
        }
        l.projections.push_back(std::move(p));
    }
    return l;
}

PrsLimit prs_limit(const FiniteDiagram& d) {
    if (d.primes.size() != d.objects.size()) throw InvalidParameter("prime systems are required for every object");
    PrsLimit out{rs_limit(d), {}};
    std::vector<PrimeSystem> pulled;
    for (std::size_t i = 0; i < d.objects.size(); ++i) {
        if (!d.primes[i]) throw InvalidParameter("prime systems are required for every object");
        check_prime_system(*d.objects[i], *d.primes[i]);
        pulled.push_back(pullback_prime_system(out.rs.projections[i], *d.primes[i]));
    }
    out.primes = intersect(pulled);
    return out;
}

LrsLimit lrs_limit(const FiniteDiagram& d) {
    FiniteDiagram dm = d;
    dm.primes.clear();
    for (const auto& o : d.objects) dm.primes.emplace_back(local_prime_system(*o));
    for (const auto& e : d.arrows)
        if (!is_lrs_morphism(e.map)) throw ValidationError("diagram arrow is not a local morphism");
    LrsLimit out{prs_limit(dm), {}, {}, {}};
    out.loc = localize(out.prs.rs.space, out.prs.primes);
    out.space = out.loc.space;
    for (const auto& p : out.prs.rs.projections) out.projections.push_back(compose(p, out.loc.pi));
    return out;
}

SpaceMorphism rs_mediating(const RsLimit& l, const std::vector<SpaceMorphism>& cone) {
    if (cone.size() != l.projections.size()) throw InvalidParameter("one cone leg per diagram object");
    const SpacePtr& y = cone.front().source;
    SpaceMorphism h{y, l.space, {}, {}};
    for (int p = 0; p < y->size(); ++p) {
        std::vector<int> tup;
        for (const auto& leg : cone) tup.push_back(leg.point_map[at(p)]);
        auto it = std::find(l.tuples.begin(), l.tuples.end(), tup);
        if (it == l.tuples.end()) throw InvalidParameter("cone legs do not commute with the diagram");
        const int s = static_cast<int>(it - l.tuples.begin());
        std::vector<AlgebraMap> ins, legs;
        for (std::size_t i = 0; i < cone.size(); ++i) {
            ins.push_back(l.projections[i].stalk_maps[at(s)]);
            legs.push_back(cone[i].stalk_maps[at(p)]);
        }
        auto m = mediating_map(l.space->stalk(s), ins, legs);
        if (!m) throw InvalidParameter("cone stalk maps do not commute with the diagram");
        h.point_map.push_back(s);
        h.stalk_maps.push_back(std::move(*m));
    }
    return h;
}

SpaceMorphism lrs_mediating(const LrsLimit& l, const std::vector<SpaceMorphism>& cone) {
    return lift_to_localization(rs_mediating(l.prs.rs, cone), l.loc);
}

namespace {

template <class Mediate>
UniversalReport check_cones(const SpacePtr& lim, const std::vector<SpaceMorphism>& projections,
                            const FiniteDiagram& d, const SpacePtr& y, Flavor flavor, Mediate mediate) {
    UniversalReport r;
    std::vector<std::vector<SpaceMorphism>> legs;
    for (const auto& o : d.objects) legs.push_back(enumerate_morphisms(y, o, flavor));
    const auto into = enumerate_morphisms(y, lim, flavor);
    const int n = static_cast<int>(d.objects.size());
    std::vector<SpaceMorphism> cone;
    auto fail = [&](const std::string& why) {
        if (r.failures++ == 0) r.first_failure = why;
    };
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            ++r.cones;
            std::size_t hits = 0;
            const SpaceMorphism* hit = nullptr;
            for (const auto& h : into) {
                bool ok = true;
                for (int k = 0; k < n && ok; ++k) ok = compose(projections[at(k)], h) == cone[at(k)];
                if (ok) {
                    ++hits;
                    hit = &h;
                }
            }
            if (hits != 1) {
                fail("cone " + std::to_string(r.cones) + " has " + std::to_string(hits) + " factorizations");
                return;
            }
            if (mediate(cone) != *hit) fail("cone " + std::to_string(r.cones) + " mediating morphism differs");
            return;
        }
        for (const auto& g : legs[at(i)]) {
            cone.push_back(g);
            bool ok = true;
            for (const auto& e : d.arrows)
                if (std::max(e.src, e.dst) == i && compose(e.map, cone[at(e.src)]) != cone[at(e.dst)]) ok = false;
            if (ok) self(self, i + 1);
            cone.pop_back();
        }
    };
    rec(rec, 0);
    return r;
}

}  // namespace

UniversalReport check_universal_property(const RsLimit& l, const FiniteDiagram& d, const SpacePtr& y) {
    return check_cones(l.space, l.projections, d, y, Flavor::RS,
                       [&](const std::vector<SpaceMorphism>& c) { return rs_mediating(l, c); });
}

UniversalReport check_universal_property(const LrsLimit& l, const FiniteDiagram& d, const SpacePtr& y) {
    return check_cones(l.space, l.projections, d, y, Flavor::LRS,
                       [&](const std::vector<SpaceMorphism>& c) { return lrs_mediating(l, c); });
}

SSet s_set(const AlgebraMap& f1, const AlgebraMap& f2) {
    if (!is_local_hom(f1) || !is_local_hom(f2)) throw NotLocal("S-set needs local maps");
    SSet s{pushout(f1, f2), {}, false, std::nullopt};
    const Algebra& p = s.tensor.object;
    const int m1 = f1.target().maximal_prime();
    const int m2 = f2.target().maximal_prime();
    const auto& primes = p.primes();
    for (int q = 0; q < static_cast<int>(primes.size()); ++q)
        if (preimage_prime(s.tensor.i1, q) == m1 && preimage_prime(s.tensor.i2, q) == m2) s.primes.push_back(q);

    auto contains_prime = [&](int big, int small) {
        const Prime& a = primes[at(big)];
        const Prime& b = primes[at(small)];
        if (p.is_monoid()) return (a.face & ~b.face) == 0;
        return std::all_of(b.members.begin(), b.members.end(), [&](int x) { return a.member_mask[at(x)] != 0; });
    };
    s.closed = true;
    for (int q : s.primes)
        for (int r = 0; r < static_cast<int>(primes.size()); ++r)
            if (contains_prime(r, q) && std::find(s.primes.begin(), s.primes.end(), r) == s.primes.end())
                s.closed = false;

    if (p.is_ring()) {
        Quotient q1 = residue(f1.target());
        Quotient q2 = residue(f2.target());
        Pushout k = pushout(residue_map(f1), residue_map(f2));
        auto phi = mediating_map(p, {s.tensor.i1, s.tensor.i2},
                                 {compose(k.i1, q1.projection), compose(k.i2, q2.projection)});
        if (!phi) throw ValidationError("tensor of residue fields is not a cocone");
        std::vector<int> image;
        for (int q = 0; q < static_cast<int>(k.object.primes().size()); ++q) image.push_back(preimage_prime(*phi, q));
        std::sort(image.begin(), image.end());
        s.residue_match = image == s.primes;
    }
    return s;
}

SSet s_set(const Algebra& a, const Algebra& b1, const Algebra& b2) {
    const auto h1 = hom_set(a, b1);
    const auto h2 = hom_set(a, b2);
    if (h1.empty() || h2.empty()) throw NotAMap("no structure map from the base algebra");
    return s_set(h1.front(), h2.front());
}

ComparisonMap comparison(const SpaceMorphism& f1, const SpaceMorphism& f2) {
    ComparisonMap c{f1, f2, lrs_limit(cospan(f1, f2)), {}, {}, false, false, false};
    const LocalizedSpace& loc = c.lrs.loc;
    const RsLimit& rs = c.lrs.prs.rs;
    c.eta = loc.pi;
    c.surjective = true;
    for (int t = 0; t < rs.space->size(); ++t) {
        FiberRow row{t, fiber_of(loc, t), 0, false};
        const auto& tup = rs.tuples[at(t)];
        row.s_size = s_set(f1.stalk_maps[at(tup[0])], f2.stalk_maps[at(tup[1])]).primes.size();
        PointSet mask = 0;
        for (int z : row.fiber) mask |= singleton(z);
        const SpacePtr fiber = subspace(loc.space, mask);
        const SpacePtr spec = localize(punctual(rs.space->stalk(t)), PrimeSystem{{c.lrs.prs.primes.primes[at(t)]}}).space;
        row.matches_spec_subset = row.fiber.size() == row.s_size && find_space_isomorphism(fiber, spec).has_value();
        if (row.fiber.empty()) c.surjective = false;
        c.fibers.push_back(std::move(row));
    }
    c.stalks_are_localizations = std::all_of(c.eta.stalk_maps.begin(), c.eta.stalk_maps.end(),
                                             [](const AlgebraMap& m) { return is_localization_map(m).holds; });
    c.isomorphism = inverse_morphism(c.eta).has_value();
    return c;
}

bool is_rational(const SpaceMorphism& f, int x) {
    if (f.source->monoid_kind()) throw MonoidUnsupported("rational points need residue fields");
    return inverse_map(residue_map(f.stalk_maps.at(at(x)))).has_value();
}

RationalReport rational_fiber_checks(const ComparisonMap& c) {
    if (c.lrs.space->monoid_kind()) throw MonoidUnsupported("rational points need residue fields");
    RationalReport r;
    const LocalizedSpace& loc = c.lrs.loc;
    const auto& to_base = c.lrs.projections[2];
    for (int z = 0; z < c.lrs.space->size(); ++z) {
        if (!is_rational(to_base, z)) continue;
        ++r.part1_checked;
        if (fiber_of(loc, loc.provenance[at(z)].first).size() != 1) ++r.part1_failures;
    }

    const RsLimit& rs = c.lrs.prs.rs;
    for (int t = 0; t < rs.space->size(); ++t) {
        const auto& tup = rs.tuples[at(t)];
        const AlgebraMap& f1 = c.f1.stalk_maps[at(tup[0])];
        const AlgebraMap& f2 = c.f2.stalk_maps[at(tup[1])];
        const Quotient q1 = residue(f1.target());
        const Quotient q2 = residue(f2.target());
        const AlgebraMap r1 = residue_map(f1);
        const AlgebraMap r2 = residue_map(f2);
        std::optional<AlgebraMap> emb;
        for (const auto& i : hom_set(q2.object, q1.object))
            if (compose(i, r2) == r1) {
                emb = i;
                break;
            }
        if (!emb) {
            r.part2_skipped.push_back(t);
            continue;
        }
        ++r.part2_checked;
        // Spec k(x1) -> X1, X2, Y as a cone; its point in the LRS product
        const SpacePtr pt = punctual(q1.object);
        SpaceMorphism leg1{pt, c.f1.source, {tup[0]}, {q1.projection}};
        SpaceMorphism leg2{pt, c.f2.source, {tup[1]}, {compose(*emb, q2.projection)}};
        SpaceMorphism legy{pt, c.f1.target, {tup[2]}, {compose(q1.projection, f1)}};
        const SpaceMorphism g = lrs_mediating(c.lrs, {leg1, leg2, legy});
        const int z = g.point_map[0];
        const bool ok = c.lrs.projections[0].point_map[at(z)] == tup[0] &&
                        c.lrs.projections[1].point_map[at(z)] == tup[1] && is_rational(c.lrs.projections[0], z);
        if (!ok) ++r.part2_failures;
    }
    return r;
}

}  // namespace locus
