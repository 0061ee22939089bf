#include <catch_amalgamated.hpp>

#include "locus/error.hpp"
#include "locus/limits.hpp"
#include "support.hpp"

using namespace support;

namespace {

struct Affine {
    LocalizedSpace a, b, c;
    SpaceMorphism fa, fb;
};

/// Spec A -> Spec C <- Spec B from ring maps C -> A, C -> B.
Affine affine_cospan(const AlgebraMap& ca, const AlgebraMap& cb) {
    Affine out{global_spec(ca.target()), global_spec(cb.target()), global_spec(ca.source()), {}, {}};
    out.fa = spec_morphism(ca, out.a, out.c);
    out.fb = spec_morphism(cb, out.b, out.c);
    return out;
}

std::vector<std::pair<AlgebraMap, AlgebraMap>> ring_triples() {
    const Algebra f2 = gf(2), f4 = gf(4), z4 = zmod(4), z6 = zmod(6), z12 = zmod(12);
    return {{first_hom(f2, f4), first_hom(f2, f4)},
            {first_hom(z4, f2), first_hom(z4, f2)},
            {first_hom(z6, f2), first_hom(z6, gf(3))},
            {first_hom(z12, z4), first_hom(z12, zmod(3))},
            {first_hom(z12, z4), first_hom(z12, z4)},
            {first_hom(f2, f4), first_hom(f2, gf(8))}};
}

}  // namespace

TEST_CASE("RS fiber product of punctual fields") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const SpacePtr p2 = punctual(f2), p4 = punctual(f4);
    const SpaceMorphism f{p4, p2, {0}, {first_hom(f2, f4)}};
    const RsLimit l = rs_limit(cospan(f, f));
    REQUIRE(l.space->size() == 1);
    CHECK(l.space->stalk(0).ring().size() == 16);
    for (const auto& p : l.projections) CHECK(is_rs_morphism(p));
}

TEST_CASE("trivial limits") {
    const SpacePtr x = global_spec(zmod(6)).space;
    FiniteDiagram one;
    one.objects = {x};
    const RsLimit l = rs_limit(one);
    CHECK(find_space_isomorphism(l.space, x).has_value());
    one.primes = {terminal_prime_system(*x)};
    const PrsLimit pl = prs_limit(one);
    CHECK(pl.primes == terminal_prime_system(*l.space));
    // diagonal: X x_X X = X
    const auto id = identity_morphism(x);
    const LrsLimit d = lrs_limit(cospan(id, id));
    CHECK(find_space_isomorphism(d.space, x).has_value());
}

TEST_CASE("prime systems of PRS limits") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const LocalizedSpace s2 = global_spec(f2), s4 = global_spec(f4);
    const SpaceMorphism f = spec_morphism(first_hom(f2, f4), s4, s2);
    FiniteDiagram d = cospan(f, f);
    d.primes = {terminal_prime_system(*s4.space), terminal_prime_system(*s4.space), terminal_prime_system(*s2.space)};
    const PrsLimit t = prs_limit(d);
    CHECK(t.primes == terminal_prime_system(*t.rs.space));
    d.primes = {local_prime_system(*s4.space), local_prime_system(*s4.space), local_prime_system(*s2.space)};
    const PrsLimit m = prs_limit(d);
    REQUIRE(m.primes.primes.size() == 1);
    CHECK(m.primes.primes[0].size() == 2);
    // localization of the PRS limit is the LRS limit
    const LrsLimit lrs = lrs_limit(d);
    CHECK(find_space_isomorphism(localize(m.rs.space, m.primes).space, lrs.space).has_value());
}

TEST_CASE("affine product law") {
    for (const auto& [ca, cb] : ring_triples()) {
        const Affine s = affine_cospan(ca, cb);
        const LrsLimit l = lrs_limit(cospan(s.fa, s.fb));
        const Pushout t = pushout(ca, cb);
        const LocalizedSpace spec_t = global_spec(t.object);
        INFO(ca.source().summary() << " -> " << ca.target().summary() << ", " << cb.target().summary());
        CHECK(find_space_isomorphism(l.space, spec_t.space).has_value());
        CHECK(l.space->size() == static_cast<int>(t.object.primes().size()));
    }
}

TEST_CASE("monoid product Spec N x Spec N") {
    const Algebra zero(build_trivial_monoid());
    const AlgebraMap i = first_hom(zero, nat());
    const Affine s = affine_cospan(i, i);
    const LrsLimit l = lrs_limit(cospan(s.fa, s.fb));
    REQUIRE(l.space->size() == 4);
    CHECK(find_space_isomorphism(l.space, global_spec(nat2()).space).has_value());
    CHECK(oracle_covering_edges(l.space->space()) == 4);
}

TEST_CASE("equalizer law") {
    const Algebra f4 = gf(4), f2 = gf(2), f2xf2 = prod({f2, f2});
    std::vector<std::pair<AlgebraMap, AlgebraMap>> pairs;
    const auto auts = hom_set(f4, f4);
    REQUIRE(auts.size() == 2);
    pairs.emplace_back(auts[0], auts[1]);
    const auto proj = hom_set(f2xf2, f2);
    REQUIRE(proj.size() == 2);
    pairs.emplace_back(proj[0], proj[1]);
    pairs.emplace_back(first_hom(f2, f4), first_hom(f2, f4));
    pairs.emplace_back(first_hom(zmod(12), zmod(4)), first_hom(zmod(12), zmod(4)));
    for (const auto& [f, g] : pairs) {
        const LocalizedSpace sa = global_spec(f.source()), sb = global_spec(f.target());
        const LrsLimit e = lrs_limit(parallel_pair(spec_morphism(f, sb, sa), spec_morphism(g, sb, sa)));
        const Colimit c = colimit({f.source(), f.target()}, {{0, 1, f}, {0, 1, g}});
        CHECK(find_space_isomorphism(e.space, global_spec(c.object).space).has_value());
    }
}

TEST_CASE("S-sets") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const SSet s = s_set(f2, f4, f4);
    CHECK(s.primes.size() == 2);
    CHECK(s.closed);
    REQUIRE(s.residue_match);
    CHECK(*s.residue_match);
    for (const auto& k : {gf(2), gf(3), gf(4)}) CHECK(s_set(k, k, k).primes.size() == 1);
    CHECK_THROWS_AS(s_set(f2, zmod(4), zmod(4)), NotAMap);
}

TEST_CASE("comparison map examples") {
    const Algebra f2 = gf(2), f4 = gf(4), z4 = zmod(4);
    const LocalizedSpace s2 = global_spec(f2), s4 = global_spec(f4), sz4 = global_spec(z4);
    const SpaceMorphism f = spec_morphism(first_hom(f2, f4), s4, s2);
    const ComparisonMap c = comparison(f, f);
    CHECK(c.lrs.space->size() == 2);
    CHECK(c.lrs.prs.rs.space->size() == 1);
    REQUIRE(c.fibers.size() == 1);
    CHECK(c.fibers[0].fiber.size() == 2);
    CHECK(c.fibers[0].s_size == 2);
    CHECK(c.fibers[0].matches_spec_subset);
    CHECK(c.surjective);
    CHECK(c.stalks_are_localizations);
    CHECK_FALSE(c.isomorphism);

    const SpaceMorphism g = spec_morphism(first_hom(z4, f2), s2, sz4);
    const ComparisonMap d = comparison(g, g);
    CHECK(d.isomorphism);
    CHECK(d.stalks_are_localizations);
}

TEST_CASE("eta is surjective and stalkwise a localization") {
    for (const auto& [ca, cb] : ring_triples()) {
        const Affine s = affine_cospan(ca, cb);
        const ComparisonMap c = comparison(s.fa, s.fb);
        CHECK(c.surjective);
        CHECK(c.stalks_are_localizations);
        for (const auto& m : c.eta.stalk_maps) CHECK(is_localization_map(m).holds);
        for (const auto& row : c.fibers) {
            CHECK(row.fiber.size() == row.s_size);
            CHECK(row.matches_spec_subset);
        }
    }
}

TEST_CASE("rationality") {
    const Algebra f2 = gf(2), f4 = gf(4), z4 = zmod(4);
    const LocalizedSpace s2 = global_spec(f2), s4 = global_spec(f4), sz4 = global_spec(z4);
    CHECK(is_rational(identity_morphism(s4.space), 0));
    CHECK_FALSE(is_rational(spec_morphism(first_hom(f2, f4), s4, s2), 0));
    CHECK(is_rational(spec_morphism(first_hom(z4, f2), s2, sz4), 0));
}

TEST_CASE("rational points have punctual fibers") {
    const Algebra f2 = gf(2), f4 = gf(4), f8 = gf(8);
    const LocalizedSpace s2 = global_spec(f2), s4 = global_spec(f4), s8 = global_spec(f8);
    // diagonal square
    const auto id = identity_morphism(s4.space);
    const RationalReport diag = rational_fiber_checks(comparison(id, id));
    CHECK(diag.holds());
    CHECK(diag.part1_checked == 1);
    const ComparisonMap c = comparison(id, id);
    for (const auto& row : c.fibers) CHECK(row.fiber.size() == 1);

    const SpaceMorphism f = spec_morphism(first_hom(f2, f4), s4, s2);
    const RationalReport sq = rational_fiber_checks(comparison(f, f));
    CHECK(sq.holds());
    CHECK(sq.part2_checked == 1);

    const SpaceMorphism g = spec_morphism(first_hom(f2, f8), s8, s2);
    const RationalReport skip = rational_fiber_checks(comparison(f, g));
    CHECK(skip.part2_skipped.size() == 1);
    CHECK(skip.holds());
}

TEST_CASE("universal property of computed limits") {
    const Algebra f2 = gf(2), f4 = gf(4), z4 = zmod(4);
    const LocalizedSpace s2 = global_spec(f2), s4 = global_spec(f4), sz4 = global_spec(z4);
    const SpaceMorphism f = spec_morphism(first_hom(f2, f4), s4, s2);
    const SpaceMorphism g = spec_morphism(first_hom(z4, f2), s2, sz4);
    for (const FiniteDiagram& d : {cospan(f, f), cospan(g, g), parallel_pair(f, f)})
        for (const SpacePtr& y : {s4.space, s2.space, global_spec(gf(16)).space}) {
            const UniversalReport lrs = check_universal_property(lrs_limit(d), d, y);
            INFO(lrs.first_failure);
            CHECK(lrs.holds());
            const UniversalReport rs = check_universal_property(rs_limit(d), d, y);
            INFO(rs.first_failure);
            CHECK(rs.holds());
        }
}

TEST_CASE("diagram validation") {
    const SpacePtr a = global_spec(gf(2)).space, b = global_spec(gf(4)).space;
    FiniteDiagram d;
    CHECK_THROWS(d.validate());
    d.objects = {a, b};
    d.arrows = {{0, 1, identity_morphism(a)}};
    CHECK_THROWS(d.validate());
}
