#include "locus/spec_functors.hpp"

#include <algorithm>
#include <map>

#include "locus/error.hpp"

namespace locus {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

std::map<std::vector<int>, int> family_index(const Sections& s) {
    std::map<std::vector<int>, int> out;
    for (int e = 0; e < s.object.ring().size(); ++e) {
        std::vector<int> fam;
        for (const auto& p : s.projections) fam.push_back(p.apply(e));
        out.emplace(std::move(fam), e);
    }
    return out;
}

int full_point(const StructuredSpace& x) {
    for (int p = 0; p < x.size(); ++p)
        if (x.space().min_open(p) == x.space().all()) return p;
    throw GeneratorExtractionFailed("monoid sections over a space without a closed point");
}

AlgebraMap to_gamma_with(const SpaceMorphism& h, const LocalizedSpace& spec_a, const Sections& g) {
    const SpaceMorphism down = compose(spec_a.pi, h);
    const Algebra& a = spec_a.base->stalk(0);
    if (a.is_monoid()) {
        if (g.points.empty()) return AlgebraMap(a, g.object, std::vector<Word>(at(a.monoid().ngens()), Word{}));
        return down.stalk_maps[at(full_point(*h.source))];
    }
    const auto index = family_index(g);
    std::vector<int> table;
    for (int e = 0; e < a.ring().size(); ++e) {
        std::vector<int> fam;
        for (int p : g.points) fam.push_back(down.stalk_maps[at(p)].apply(e));
        table.push_back(index.at(fam));
    }
    return AlgebraMap(a, g.object, std::move(table));
}

SpaceMorphism from_gamma_with(const AlgebraMap& phi, const SpacePtr& x, const LocalizedSpace& spec_a,
                              const Sections& g) {
    SpaceMorphism down{x, spec_a.base, {}, {}};
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        down.point_map.push_back(0);
        down.stalk_maps.push_back(compose(g.projections[i], phi));
    }
    return lift_to_localization(down, spec_a);
}

IsoReport iso_over(const SpaceMorphism& p, const SpaceMorphism& q, const std::string& what) {
    IsoReport r;
    r.holds = find_isomorphism_over(p, q).has_value();
    r.detail = what + (r.holds ? ": isomorphic over the base" : ": no isomorphism over the base");
    return r;
}

}  // namespace

LocalizedSpace global_spec(const Algebra& a) {
    SpacePtr p = punctual(a);
    return localize(p, terminal_prime_system(*p));
}

SpacePtr spec_subset(const Algebra& a, const std::vector<int>& primes) {
    LocalizedSpace l = global_spec(a);
    PointSet mask = 0;
    for (int z : primes) {
        const int p = l.point_of(0, z);
        if (p < 0) throw UnknownPrime("prime index " + std::to_string(z) + " is not a prime of " + a.summary());
        mask |= singleton(p);
    }
    return subspace(l.space, mask);
}

Algebra gamma(const StructuredSpace& x) { return sections(x, x.space().all()).object; }

SpaceMorphism spec_morphism(const AlgebraMap& f, const LocalizedSpace& spec_b, const LocalizedSpace& spec_a) {
    SpaceMorphism down{spec_b.space, spec_a.base, {}, {}};
    for (const auto& loc : spec_b.localizations) {
        down.point_map.push_back(0);
        down.stalk_maps.push_back(compose(loc.map, f));
    }
    return lift_to_localization(down, spec_a);
}

AlgebraMap to_gamma(const SpaceMorphism& h, const LocalizedSpace& spec_a) {
    return to_gamma_with(h, spec_a, sections(*h.source, h.source->space().all()));
}

SpaceMorphism from_gamma(const AlgebraMap& phi, const SpacePtr& x, const LocalizedSpace& spec_a) {
    return from_gamma_with(phi, x, spec_a, sections(*x, x->space().all()));
}

SpecGammaReport spec_gamma_adjunction(const SpacePtr& x, const Algebra& a) {
    if (!is_local_space(*x)) throw NotLocal("adjunction needs a local space");
    SpecGammaReport r;
    const LocalizedSpace sa = global_spec(a);
    const Sections g = sections(*x, x->space().all());
    const auto left = enumerate_morphisms(x, sa.space, Flavor::LRS);
    const auto right = hom_set(a, g.object);
    r.left = left.size();
    r.right = right.size();
    r.round_trip_left = std::all_of(left.begin(), left.end(), [&](const SpaceMorphism& h) {
        AlgebraMap phi = to_gamma_with(h, sa, g);
        return std::find(right.begin(), right.end(), phi) != right.end() && from_gamma_with(phi, x, sa, g) == h;
    });
    r.round_trip_right = std::all_of(right.begin(), right.end(), [&](const AlgebraMap& phi) {
        SpaceMorphism h = from_gamma_with(phi, x, sa, g);
        return std::find(left.begin(), left.end(), h) != left.end() && to_gamma_with(h, sa, g) == phi;
    });
    return r;
}

void AlgebraOverSheaf::validate() const {
    if (!base || !sheaf) throw ValidationError("algebra over a missing space");
    if (sheaf->space().names() != base->space().names()) throw ValidationError("algebra lives on a different space");
    for (int p = 0; p < base->size(); ++p)
        if (sheaf->space().min_open(p) != base->space().min_open(p))
            throw ValidationError("algebra lives on a different topology");
    if (structure.source != sheaf || structure.target != base) throw ValidationError("structure map endpoints differ");
    for (int p = 0; p < base->size(); ++p)
        if (structure.point_map.at(at(p)) != p) throw ValidationError("structure map moves points");
    if (!is_natural(structure)) throw ValidationError("structure maps do not commute with generization");
}

AlgebraOverSheaf structure_sheaf(const SpacePtr& x) { return {x, x, identity_morphism(x)}; }

AlgebraOverSheaf make_algebra_over(const SpacePtr& x, std::vector<Algebra> stalks,
                                   std::map<std::pair<int, int>, AlgebraMap> res, std::vector<AlgebraMap> structure) {
    SpacePtr sheaf = make_space(StructuredSpace(x->space(), std::move(stalks), std::move(res), x->monoid_kind()));
    std::vector<int> pm;
    for (int p = 0; p < x->size(); ++p) pm.push_back(p);
    AlgebraOverSheaf a{x, sheaf, SpaceMorphism{sheaf, x, std::move(pm), std::move(structure)}};
    a.validate();
    return a;
}

RelativeSpec relative_spec(const AlgebraOverSheaf& a) {
    a.validate();
    const PrimeSystem m = pullback_prime_system(a.structure, local_prime_system(*a.base));
    RelativeSpec r{localize(a.sheaf, m), {}};
    r.to_base = compose(a.structure, r.loc.pi);
    return r;
}

AlgebraColimit colimit_over(const std::vector<AlgebraOverSheaf>& algebras) {
    if (algebras.empty()) throw InvalidParameter("colimit of no algebras");
    const SpacePtr& x = algebras.front().base;
    for (const auto& a : algebras) {
        if (a.base != x) throw ValidationError("algebras over different spaces");
        a.validate();
    }
    const int n = static_cast<int>(algebras.size());
    std::vector<Colimit> cols;
    for (int p = 0; p < x->size(); ++p) {
        std::vector<Algebra> objs{x->stalk(p)};
        std::vector<DiagramArrow> arrows;
        for (int i = 0; i < n; ++i) {
            objs.push_back(algebras[at(i)].sheaf->stalk(p));
            arrows.push_back({0, i + 1, algebras[at(i)].structure.stalk_maps[at(p)]});
        }
        cols.push_back(colimit(objs, arrows));
    }
    std::vector<Algebra> stalks;
    std::vector<AlgebraMap> structure;
    for (const auto& c : cols) {
        stalks.push_back(c.object);
        structure.push_back(c.insertions[0]);
    }
    std::map<std::pair<int, int>, AlgebraMap> res;
    for (int p = 0; p < x->size(); ++p)
        for (int q : x->space().points_of(x->space().min_open(p))) {
            if (q == p) continue;
            std::vector<AlgebraMap> cocone{compose(cols[at(q)].insertions[0], x->res(p, q))};
            for (int i = 0; i < n; ++i)
                cocone.push_back(compose(cols[at(q)].insertions[at(i + 1)], algebras[at(i)].sheaf->res(p, q)));
            auto h = mediating_map(cols[at(p)].object, cols[at(p)].insertions, cocone);
            if (!h) throw ValidationError("colimit stalks admit no generization map");
            res.emplace(std::make_pair(p, q), std::move(*h));
        }
    AlgebraColimit out{make_algebra_over(x, std::move(stalks), std::move(res), std::move(structure)), {}};
    for (int i = 0; i < n; ++i) {
        SpaceMorphism ins{out.object.sheaf, algebras[at(i)].sheaf, {}, {}};
        for (int p = 0; p < x->size(); ++p) {
            ins.point_map.push_back(p);
            ins.stalk_maps.push_back(cols[at(p)].insertions[at(i + 1)]);
        }
        out.insertions.push_back(std::move(ins));
    }
    return out;
}

AlgebraOverSheaf base_change(const SpaceMorphism& g, const AlgebraOverSheaf& a) {
    a.validate();
    if (g.target != a.base) throw ValidationError("base change along a map to a different space");
    const SpacePtr& x = g.source;
    std::vector<Pushout> pos;
    for (int p = 0; p < x->size(); ++p) {
        const int y = g.point_map[at(p)];
        pos.push_back(pushout(a.structure.stalk_maps[at(y)], g.stalk_maps[at(p)]));
    }
    std::vector<Algebra> stalks;
    std::vector<AlgebraMap> structure;
    for (const auto& po : pos) {
        stalks.push_back(po.object);
        structure.push_back(po.i2);
    }
    std::map<std::pair<int, int>, AlgebraMap> res;
    for (int p = 0; p < x->size(); ++p)
        for (int q : x->space().points_of(x->space().min_open(p))) {
            if (q == p) continue;
            const int y = g.point_map[at(p)], y2 = g.point_map[at(q)];
            auto h = mediating_map(pos[at(p)].object, {pos[at(p)].i1, pos[at(p)].i2},
                                   {compose(pos[at(q)].i1, a.sheaf->res(y, y2)), compose(pos[at(q)].i2, x->res(p, q))});
            if (!h) throw ValidationError("base change stalks admit no generization map");
            res.emplace(std::make_pair(p, q), std::move(*h));
        }
    return make_algebra_over(x, std::move(stalks), std::move(res), std::move(structure));
}

AlgebraOverSheaf pushforward(const SpaceMorphism& f) {
    const SpacePtr& x = f.source;
    const SpacePtr& y = f.target;
    if (y->monoid_kind()) throw MonoidUnsupported("pushforward needs sections over arbitrary opens");
    std::vector<Sections> secs;
    std::vector<std::map<std::vector<int>, int>> index;
    for (int q = 0; q < y->size(); ++q) {
        PointSet v = 0;
        for (int p = 0; p < x->size(); ++p)
            if (contains(y->space().min_open(q), f.point_map[at(p)])) v |= singleton(p);
        secs.push_back(sections(*x, v));
        index.push_back(family_index(secs.back()));
    }
    std::vector<Algebra> stalks;
    std::vector<AlgebraMap> structure;
    for (int q = 0; q < y->size(); ++q) {
        const Sections& s = secs[at(q)];
        stalks.push_back(s.object);
        std::vector<int> table;
        for (int e = 0; e < y->stalk(q).ring().size(); ++e) {
            std::vector<int> fam;
            for (int p : s.points) {
                const int img = y->res(q, f.point_map[at(p)]).apply(e);
                fam.push_back(f.stalk_maps[at(p)].apply(img));
            }
            table.push_back(index[at(q)].at(fam));
        }
        structure.emplace_back(y->stalk(q), s.object, std::move(table));
    }
    std::map<std::pair<int, int>, AlgebraMap> res;
    for (int q = 0; q < y->size(); ++q)
        for (int q2 : y->space().points_of(y->space().min_open(q))) {
            if (q2 == q) continue;
            const Sections& s = secs[at(q)];
            const Sections& s2 = secs[at(q2)];
            std::vector<int> table;
            for (int e = 0; e < s.object.ring().size(); ++e) {
                std::vector<int> fam;
                for (int p : s2.points) {
                    auto it = std::find(s.points.begin(), s.points.end(), p);
                    fam.push_back(s.projections[at(static_cast<int>(it - s.points.begin()))].apply(e));
                }
                table.push_back(index[at(q2)].at(fam));
            }
            res.emplace(std::make_pair(q, q2), AlgebraMap(s.object, s2.object, std::move(table)));
        }
    return make_algebra_over(y, std::move(stalks), std::move(res), std::move(structure));
}

IsoReport relspec_limits_check(const std::vector<AlgebraOverSheaf>& algebras) {
    const RelativeSpec left = relative_spec(colimit_over(algebras).object);
    FiniteDiagram d;
    std::vector<RelativeSpec> parts;
    for (const auto& a : algebras) parts.push_back(relative_spec(a));
    const int n = static_cast<int>(parts.size());
    for (int i = 0; i < n; ++i) d.objects.push_back(parts[at(i)].loc.space);
    d.objects.push_back(algebras.front().base);
    for (int i = 0; i < n; ++i) d.arrows.push_back({i, n, parts[at(i)].to_base});
    const LrsLimit right = lrs_limit(d);
    return iso_over(left.to_base, right.projections[at(n)], "relative spectrum of the colimit");
}

IsoReport base_change_check(const SpaceMorphism& g, const AlgebraOverSheaf& a) {
    const RelativeSpec left = relative_spec(base_change(g, a));
    const RelativeSpec over_y = relative_spec(a);
    const LrsLimit right = lrs_limit(cospan(g, over_y.to_base));
    return iso_over(left.to_base, right.projections[0], "base change");
}

IsoReport affine_agreement_check(const AlgebraMap& f) {
    const LocalizedSpace sa = global_spec(f.source());
    const LocalizedSpace sb = global_spec(f.target());
    const SpaceMorphism phi = spec_morphism(f, sb, sa);
    const RelativeSpec r = relative_spec(pushforward(phi));
    return iso_over(r.to_base, phi, "pushforward spectrum");
}

LemmaChainReport spec_lemma_chain(const Algebra& a) {
    LemmaChainReport r;
    const LocalizedSpace sa = global_spec(a);
    const SpacePtr& x = sa.space;
    const PrimeSystem m = local_prime_system(*x);
    r.retraction = inverse_morphism(localize(x, m).pi).has_value();

    std::vector<Algebra> stalks(at(x->size()), a);
    std::map<std::pair<int, int>, AlgebraMap> res;
    for (int p = 0; p < x->size(); ++p)
        for (int q : x->space().points_of(x->space().min_open(p)))
            if (q != p) res.emplace(std::make_pair(p, q), AlgebraMap::identity(a));
    SpacePtr constant = make_space(StructuredSpace(x->space(), std::move(stalks), std::move(res), x->monoid_kind()));
    SpaceMorphism to_constant{x, constant, {}, {}};
    PrimeSystem n;
    for (int p = 0; p < x->size(); ++p) {
        to_constant.point_map.push_back(p);
        to_constant.stalk_maps.push_back(sa.localizations[at(p)].map);
        n.primes.push_back({sa.provenance[at(p)].second});
    }
    r.local_system_pullback = is_rs_morphism(to_constant) && pullback_prime_system(to_constant, n) == m;
    r.constant_sheaf = find_space_isomorphism(localize(constant, n).space, x).has_value();
    return r;
}

}  // namespace locus
