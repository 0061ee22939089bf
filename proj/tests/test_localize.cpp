#include <catch_amalgamated.hpp>

#include "locus/error.hpp"
#include "locus/serialize.hpp"
#include "support.hpp"

using namespace support;

namespace {

std::vector<SpacePtr> sample_local_spaces(unsigned seed, int count) {
    std::mt19937 rng(seed);
    std::vector<SpacePtr> out;
    for (int i = 0; i < count; ++i) out.push_back(random_local_space(rng, i % 3 == 2));
    return out;
}

PrimeSystem random_system(std::mt19937& rng, const StructuredSpace& x) {
    PrimeSystem m;
    for (int p = 0; p < x.size(); ++p) {
        std::vector<int> ps;
        const int np = static_cast<int>(x.stalk(p).primes().size());
        for (int z = 0; z < np; ++z)
            if (rng() % 2) ps.push_back(z);
        m.primes.push_back(ps);
    }
    return m;
}

}  // namespace

TEST_CASE("localize examples") {
    const LocalizedSpace l6 = localize(punctual(zmod(6)), terminal_prime_system(*punctual(zmod(6))));
    REQUIRE(l6.space->size() == 2);
    CHECK(l6.space->space().min_open(0) == singleton(0));
    CHECK(l6.space->space().min_open(1) == singleton(1));
    CHECK(oracle_ring_iso(l6.space->stalk(0).ring(), build_zmod(2)));
    CHECK(oracle_ring_iso(l6.space->stalk(1).ring(), build_zmod(3)));

    const SpacePtr pn = punctual(nat());
    const LocalizedSpace ln = localize(pn, terminal_prime_system(*pn));
    REQUIRE(ln.space->size() == 2);
    const int generic = ln.point_of(0, 0), closed = ln.point_of(0, 1);
    CHECK(ln.space->space().min_open(generic) == singleton(generic));
    CHECK(ln.space->space().min_open(closed) == (singleton(generic) | singleton(closed)));
    CHECK(find_isomorphism(ln.space->stalk(closed), nat()).has_value());
    CHECK(ln.space->stalk(generic).primes().size() == 1);
    CHECK(ln.space->space().name(generic) == "(*,0)");
}

TEST_CASE("localizing punctual N at the empty prime") {
    const SpacePtr pn = punctual(nat());
    const LocalizedSpace l = localize(pn, PrimeSystem{{{0}}});
    REQUIRE(l.space->size() == 1);
    CHECK(l.space->stalk(0).primes().size() == 1);  // a group
    CHECK(is_rs_morphism(l.pi));
    CHECK_FALSE(is_lrs_morphism(l.pi));
}

TEST_CASE("basic opens") {
    const SpacePtr pn = punctual(nat());
    const LocalizedSpace l = localize(pn, terminal_prime_system(*pn));
    CHECK(basic_open(l, 0, Elem{1}) == singleton(l.point_of(0, 0)));
    CHECK(basic_open(l, 0, Elem{0}) == l.space->space().all());
}

TEST_CASE("lift examples") {
    const SpacePtr p2 = punctual(gf(2)), p6 = punctual(zmod(6));
    const SpaceMorphism f{p2, p6, {0}, {first_hom(zmod(6), gf(2))}};
    REQUIRE(is_rs_morphism(f));
    const LocalizedSpace lx = localize(p2, local_prime_system(*p2));
    const LocalizedSpace ly = localize(p6, terminal_prime_system(*p6));
    const SpaceMorphism lf = lift_morphism(f, lx, ly);
    CHECK(lf.point_map == std::vector<int>{ly.point_of(0, 0)});  // the (2)-point
    CHECK(is_lrs_morphism(lf));

    const LocalizedSpace l6 = localize(p6, terminal_prime_system(*p6));
    CHECK(lift_morphism(identity_morphism(p6), l6, l6) == identity_morphism(l6.space));
    // T on the source is not contained in the pullback of M
    CHECK_THROWS_AS(lift_morphism(identity_morphism(p2), localize(p2, terminal_prime_system(*p2)),
                                  localize(p2, PrimeSystem{{{}}})),
                    NotPRS);
}

TEST_CASE("retraction on generated local spaces") {
    for (const auto& x : sample_local_spaces(11, 12)) {
        const LocalizedSpace l = localize(x, local_prime_system(*x));
        const auto inv = inverse_morphism(l.pi);
        REQUIRE(inv);
        CHECK(compose(l.pi, *inv) == identity_morphism(x));
        CHECK(compose(*inv, l.pi) == identity_morphism(l.space));
        CHECK(is_lrs_morphism(l.pi));
    }
}

TEST_CASE("localizing an open subspace is the preimage of the open") {
    std::mt19937 rng(3);
    for (const auto& x : sample_local_spaces(5, 8)) {
        const PrimeSystem m = random_system(rng, *x);
        const LocalizedSpace l = localize(x, m);
        for (int p = 0; p < x->size(); ++p) {
            const PointSet u = x->space().min_open(p);
            PrimeSystem mu;
            for (int q : x->space().points_of(u)) mu.primes.push_back(m.primes[at(q)]);
            const SpacePtr xu = subspace(x, u);
            const LocalizedSpace lu = localize(xu, mu);
            PointSet pre = 0;
            for (int t = 0; t < l.space->size(); ++t)
                if (contains(u, l.pi.point_map[at(t)])) pre |= singleton(t);
            const SpacePtr sub = subspace(l.space, pre);
            CHECK(find_space_isomorphism(lu.space, sub).has_value());
            CHECK(lu.space->size() == sub->size());
        }
    }
}

TEST_CASE("fibers of pi are spectra of stalks at M_x") {
    std::mt19937 rng(19);
    for (const auto& x : sample_local_spaces(23, 8)) {
        const PrimeSystem m = random_system(rng, *x);
        const LocalizedSpace l = localize(x, m);
        for (int p = 0; p < x->size(); ++p) {
            PointSet fiber = 0;
            for (int t = 0; t < l.space->size(); ++t)
                if (l.pi.point_map[at(t)] == p) fiber |= singleton(t);
            const SpacePtr lhs = subspace(l.space, fiber);
            const SpacePtr rhs = spec_subset(x->stalk(p), m.primes[at(p)]);
            CHECK(find_space_isomorphism(lhs, rhs).has_value());
        }
    }
}

TEST_CASE("lifts are functorial") {
    const Algebra f2 = gf(2), f4 = gf(4), z4 = zmod(4), z12 = zmod(12);
    const SpacePtr p4 = punctual(f4), p2 = punctual(f2), pz4 = punctual(z4), p12 = punctual(z12);
    const SpaceMorphism f{p4, p2, {0}, {first_hom(f2, f4)}};
    const SpaceMorphism g{p2, pz4, {0}, {first_hom(z4, f2)}};
    const SpaceMorphism h{pz4, p12, {0}, {first_hom(z12, z4)}};
    auto loc = [](const SpacePtr& x) { return localize(x, terminal_prime_system(*x)); };
    const LocalizedSpace l4 = loc(p4), l2 = loc(p2), lz4 = loc(pz4), l12 = loc(p12);
    CHECK(lift_morphism(compose(g, f), l4, lz4) == compose(lift_morphism(g, l2, lz4), lift_morphism(f, l4, l2)));
    CHECK(lift_morphism(compose(h, g), l2, l12) == compose(lift_morphism(h, lz4, l12), lift_morphism(g, l2, lz4)));
    CHECK(lift_morphism(identity_morphism(p12), l12, l12) == identity_morphism(l12.space));
}

TEST_CASE("lift is the unique commuting LRS morphism") {
    const Algebra f2 = gf(2), f4 = gf(4), z4 = zmod(4), z6 = zmod(6);
    const SpacePtr p4 = punctual(f4), p2 = punctual(f2), pz4 = punctual(z4), p6 = punctual(z6), p12 = punctual(zmod(12));
    std::vector<SpaceMorphism> maps{SpaceMorphism{p4, p2, {0}, {first_hom(f2, f4)}},
                                    SpaceMorphism{p2, pz4, {0}, {first_hom(z4, f2)}},
                                    SpaceMorphism{p2, p6, {0}, {first_hom(z6, f2)}},
                                    identity_morphism(p6), SpaceMorphism{pz4, p12, {0}, {first_hom(zmod(12), z4)}}};
    for (const auto& f : maps) {
        const LocalizedSpace lx = localize(f.source, terminal_prime_system(*f.source));
        const LocalizedSpace ly = localize(f.target, terminal_prime_system(*f.target));
        const SpaceMorphism lifted = lift_morphism(f, lx, ly);
        int hits = 0;
        for (const auto& h : enumerate_morphisms(lx.space, ly.space, Flavor::LRS))
            if (compose(ly.pi, h) == compose(f, lx.pi)) {
                ++hits;
                CHECK(h == lifted);
            }
        CHECK(hits == 1);
    }
}

TEST_CASE("localization is monotone in the prime system") {
    std::mt19937 rng(29);
    for (const auto& x : sample_local_spaces(31, 8)) {
        const PrimeSystem n = terminal_prime_system(*x);
        const PrimeSystem m = random_system(rng, *x);
        const LocalizedSpace lm = localize(x, m), ln = localize(x, n);
        CHECK(lm.space->size() <= ln.space->size());
        PointSet image = 0;
        for (int t = 0; t < lm.space->size(); ++t) {
            const auto [p, z] = lm.provenance[at(t)];
            const int s = ln.point_of(p, z);
            REQUIRE(s >= 0);
            image |= singleton(s);
        }
        CHECK(find_space_isomorphism(lm.space, subspace(ln.space, image)).has_value());
    }
}

TEST_CASE("adjunction for localization") {
    const SpacePtr sf2 = global_spec(gf(2)).space;
    const SpacePtr p6 = punctual(zmod(6));
    const LocalizedSpace l6 = localize(p6, terminal_prime_system(*p6));
    const AdjunctionReport r = check_localization_adjunction(sf2, l6);
    // Hom_RS(Spec F2, punctual Z/6) is Hom(Z/6, F2)
    CHECK(r.right == oracle_ring_hom_count(build_zmod(6), build_gf(2)));
    CHECK(r.holds());
    CHECK(check_localization_adjunction(sf2, l6, true).holds());

    const SpacePtr s4 = global_spec(zmod(4)).space;
    const LocalizedSpace ret = localize(s4, local_prime_system(*s4));
    const AdjunctionReport rr = check_localization_adjunction(s4, ret);
    CHECK(rr.holds());
    CHECK(rr.left == enumerate_morphisms(s4, s4, Flavor::LRS).size());
}

TEST_CASE("localized spaces serialize with provenance") {
    const SpacePtr p6 = punctual(zmod(6));
    const LocalizedSpace l = localize(p6, terminal_prime_system(*p6));
    const json j = space_to_json(*l.space);
    REQUIRE(j.contains("provenance"));
    CHECK(space_to_json(*space_from_json(j)) == j);
}
