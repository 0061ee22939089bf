#include <catch_amalgamated.hpp>

#include "locus/error.hpp"
#include "locus/limits.hpp"
#include "support.hpp"

using namespace support;

namespace {

/// Skyscraper at the closed point of Spec N with stalk `b` and structure map
/// N -> b; the generic stalk is the trivial monoid.
AlgebraOverSheaf skyscraper(const LocalizedSpace& sn, const Algebra& b, const AlgebraMap& structure) {
    const Algebra zero(build_trivial_monoid());
    const int generic = sn.point_of(0, 0), closed = sn.point_of(0, 1);
    std::vector<Algebra> stalks(2, zero);
    stalks[at(closed)] = b;
    std::vector<AlgebraMap> maps(2, first_hom(sn.space->stalk(generic), zero));
    maps[at(closed)] = structure;
    std::map<std::pair<int, int>, AlgebraMap> res;
    res.emplace(std::make_pair(closed, generic), first_hom(b, zero));
    return make_algebra_over(sn.space, std::move(stalks), std::move(res), std::move(maps));
}

}  // namespace

TEST_CASE("global spectra") {
    const LocalizedSpace s6 = global_spec(zmod(6));
    REQUIRE(s6.space->size() == 2);
    CHECK(s6.space->space().min_open(0) == singleton(0));
    CHECK(oracle_ring_iso(s6.space->stalk(0).ring(), build_zmod(2)));
    CHECK(oracle_ring_iso(s6.space->stalk(1).ring(), build_zmod(3)));
    CHECK(global_spec(zmod(1)).space->size() == 0);
    const LocalizedSpace sn = global_spec(nat());
    REQUIRE(sn.space->size() == 2);
    CHECK(std::popcount(sn.space->space().min_open(sn.point_of(0, 0))) == 1);
}

TEST_CASE("global spectra are local with points the primes") {
    std::vector<Algebra> all = ring_pool();
    for (const auto& m : monoid_pool()) all.push_back(m);
    for (const auto& a : all) {
        const LocalizedSpace s = global_spec(a);
        CHECK(is_local_space(*s.space));
        CHECK(s.space->size() == static_cast<int>(a.primes().size()));
        std::set<int> seen;
        for (const auto& [x, z] : s.provenance) seen.insert(z);
        CHECK(seen.size() == a.primes().size());
    }
}

TEST_CASE("spectra of prime subsets") {
    const Algebra z6 = zmod(6);
    CHECK(find_space_isomorphism(spec_subset(z6, {0, 1}), global_spec(z6).space).has_value());
    const SpacePtr p = spec_subset(z6, {0});
    REQUIRE(p->size() == 1);
    CHECK(p->stalk(0).ring().size() == 2);
    const SpacePtr n = spec_subset(nat(), {1});
    REQUIRE(n->size() == 1);
    CHECK(find_isomorphism(n->stalk(0), nat()).has_value());
    CHECK_THROWS_AS(spec_subset(z6, {5}), UnknownPrime);
}

TEST_CASE("caveat: a closed prime subset is not the spectrum of the quotient") {
    const Algebra z12 = zmod(12);
    const Quotient q = quotient_by_ideal(z12, {2});
    const SpacePtr sub = spec_subset(z12, {0});  // the prime (2)
    const SpacePtr quo = global_spec(q.object).space;
    REQUIRE(sub->size() == quo->size());
    CHECK(sub->space().min_open(0) == quo->space().min_open(0));
    CHECK_FALSE(find_space_isomorphism(sub, quo).has_value());
    CHECK(sub->stalk(0).ring().size() == 4);
    CHECK(quo->stalk(0).ring().size() == 2);
}

TEST_CASE("Spec-Gamma adjunction") {
    const SpacePtr sf2 = global_spec(gf(2)).space;
    const SpecGammaReport r = spec_gamma_adjunction(sf2, zmod(6));
    CHECK(r.left == 1);
    CHECK(r.right == 1);
    CHECK(r.holds());
    for (const auto& a : {zmod(4), gf(4), zmod(6)}) {
        const LocalizedSpace s = global_spec(a);
        const SpecGammaReport self = spec_gamma_adjunction(s.space, a);
        CHECK(self.holds());
        CHECK(self.right == oracle_ring_hom_count(a.ring(), a.ring()));
        // the identity of Spec A corresponds to the canonical iso A -> Gamma(Spec A)
        const AlgebraMap unit = to_gamma(identity_morphism(s.space), s);
        CHECK(inverse_map(unit).has_value());
        CHECK(from_gamma(unit, s.space, s) == identity_morphism(s.space));
    }
    const LocalizedSpace sn = global_spec(nat());
    const SpecGammaReport rn = spec_gamma_adjunction(sn.space, nat());
    CHECK(rn.holds());
    CHECK(rn.left == hom_set(nat(), nat()).size());
}

TEST_CASE("relative Spec of the structure sheaf is the space") {
    for (const auto& a : {zmod(6), zmod(4), gf(4), nat(), nat2()}) {
        const SpacePtr x = global_spec(a).space;
        const RelativeSpec r = relative_spec(structure_sheaf(x));
        const auto inv = inverse_morphism(r.to_base);
        REQUIRE(inv);
        CHECK(compose(r.to_base, *inv) == identity_morphism(x));
    }
}

TEST_CASE("skyscraper pathologies over monoid models") {
    const Algebra n = nat();
    const Localization z = localize_at_prime(n, 0);

    // over the punctual base (*, N)
    const SpacePtr pn = punctual(n);
    const RelativeSpec punct = relative_spec(make_algebra_over(pn, {n}, {}, {AlgebraMap::identity(n)}));
    REQUIRE(punct.loc.space->size() == 1);
    CHECK(find_isomorphism(punct.loc.space->stalk(0), n).has_value());
    CHECK(relative_spec(make_algebra_over(pn, {z.object}, {}, {z.map})).loc.space->size() == 0);

    // over Spec N: the fiber over the closed point
    const LocalizedSpace sn = global_spec(n);
    const int closed = sn.point_of(0, 1);
    const RelativeSpec a = relative_spec(skyscraper(sn, n, AlgebraMap::identity(n)));
    int over_closed = 0;
    for (int t = 0; t < a.loc.space->size(); ++t)
        if (a.to_base.point_map[at(t)] == closed) {
            ++over_closed;
            CHECK(find_isomorphism(a.loc.space->stalk(t), n).has_value());
        }
    CHECK(over_closed == 1);
    const RelativeSpec e = relative_spec(skyscraper(sn, z.object, z.map));
    for (int t = 0; t < e.loc.space->size(); ++t) CHECK(e.to_base.point_map[at(t)] != closed);
}

TEST_CASE("relative Spec takes colimits of algebras to limits") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const SpacePtr s2 = global_spec(f2).space;
    const AlgebraOverSheaf a = make_algebra_over(s2, {f4}, {}, {first_hom(f2, f4)});
    const AlgebraOverSheaf b = make_algebra_over(s2, {gf(8)}, {}, {first_hom(f2, gf(8))});
    CHECK(relspec_limits_check({a, a}).holds);
    CHECK(relspec_limits_check({a, b}).holds);
    CHECK(relspec_limits_check({a}).holds);
    const SpacePtr s6 = global_spec(zmod(6)).space;
    CHECK(relspec_limits_check({structure_sheaf(s6), structure_sheaf(s6)}).holds);
}

TEST_CASE("relative Spec commutes with base change") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const LocalizedSpace s2 = global_spec(f2), s4 = global_spec(f4), sz4 = global_spec(zmod(4));
    const AlgebraOverSheaf a = make_algebra_over(s2.space, {f4}, {}, {first_hom(f2, f4)});
    const SpaceMorphism g = spec_morphism(first_hom(f2, f4), s4, s2);
    CHECK(base_change_check(g, a).holds);
    CHECK(base_change_check(identity_morphism(s2.space), a).holds);
    const AlgebraOverSheaf b = make_algebra_over(sz4.space, {f4}, {}, {first_hom(zmod(4), f4)});
    const SpaceMorphism h = spec_morphism(first_hom(zmod(4), f2), s2, sz4);
    CHECK(base_change_check(h, b).holds);
}

TEST_CASE("affine morphisms are recovered from pushforwards") {
    CHECK(affine_agreement_check(AlgebraMap::identity(zmod(6))).holds);
    CHECK(affine_agreement_check(first_hom(gf(2), gf(4))).holds);
    CHECK(affine_agreement_check(first_hom(zmod(6), gf(2))).holds);
    CHECK(affine_agreement_check(first_hom(zmod(12), zmod(4))).holds);
}

TEST_CASE("lemma chain") {
    for (const auto& a : {zmod(6), gf(4), nat()}) {
        const LemmaChainReport r = spec_lemma_chain(a);
        CHECK(r.local_system_pullback);
        CHECK(r.retraction);
        CHECK(r.constant_sheaf);
    }
}

TEST_CASE("fiber law against spec_subset at the S-set") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const LocalizedSpace s2 = global_spec(f2), s4 = global_spec(f4);
    const SpaceMorphism f = spec_morphism(first_hom(f2, f4), s4, s2);
    const ComparisonMap c = comparison(f, f);
    REQUIRE(c.fibers.size() == 1);
    const auto& row = c.fibers[0];
    PointSet fiber = 0;
    for (int t : row.fiber) fiber |= singleton(t);
    const SSet s = s_set(f2, f4, f4);
    const SpacePtr rhs = spec_subset(c.lrs.prs.rs.space->stalk(row.rs_point), s.primes);
    CHECK(find_space_isomorphism(subspace(c.lrs.space, fiber), rhs).has_value());
}

TEST_CASE("gamma of spectra") {
    for (const auto& a : {zmod(6), zmod(12), gf(4), nat(), nat2()})
        CHECK(find_isomorphism(gamma(*global_spec(a).space), a).has_value());
    CHECK(gamma(*empty_space(false)).ring().is_zero_ring());
}
