#include <catch_amalgamated.hpp>

#include "locus/error.hpp"
#include "locus/serialize.hpp"
#include "support.hpp"

using namespace support;

namespace {

std::vector<std::vector<int>> prime_members(const Algebra& a) {
    std::vector<std::vector<int>> out;
    for (const auto& p : a.primes()) out.push_back(p.members);
    return out;
}

bool is_trivial_monoid(const Algebra& a) {
    return a.is_monoid() && a.monoid().elements_up_to(3) == std::vector<Word>{a.monoid().zero()};
}

}  // namespace

TEST_CASE("ring primes agree with the ideal-enumeration oracle") {
    for (const auto& a : ring_pool()) {
        if (a.ring().size() > 16) continue;
        INFO(a.summary());
        CHECK(prime_members(a) == oracle_primes(a.ring()));
    }
    CHECK(oracle_primes(build_zmod(6)).size() == 2);
}

TEST_CASE("prime enumeration examples") {
    const Algebra z6 = zmod(6);
    REQUIRE(z6.primes().size() == 2);
    // (2) = {0,2,4}, (3) = {0,3}
    CHECK(z6.primes()[0].members == std::vector<int>{0, 2, 4});
    CHECK(z6.primes()[1].members == std::vector<int>{0, 3});
    CHECK(gf(2).primes().size() == 1);
    CHECK(gf(2).primes()[0].members == std::vector<int>{0});
    const Algebra n = nat();
    REQUIRE(n.primes().size() == 2);
    CHECK(n.primes()[0].face == 1);  // prime empty, face N
    CHECK(n.primes()[1].face == 0);  // prime N+, face {0}
    CHECK(zmod(1).primes().empty());
    CHECK(gf(4).primes().size() == 1);
}

TEST_CASE("ring localizations match the fraction-counting oracle") {
    for (const auto& a : ring_pool())
        for (int z = 0; z < static_cast<int>(a.primes().size()); ++z) {
            INFO(a.summary() << " prime " << z);
            const Localization l = localize_at_prime(a, z);
            CHECK(l.object.ring().size() == oracle_localized_size(a.ring(), a.primes()[at(z)].members));
            CHECK(l.object.is_local());
            // every element outside z becomes a unit
            for (int e = 0; e < a.ring().size(); ++e)
                if (!a.in_prime(z, {e})) CHECK(l.object.ring().is_unit(l.map.apply(e)));
        }
}

TEST_CASE("localize_at_prime examples") {
    const Algebra z6 = zmod(6);
    const Localization l2 = localize_at_prime(z6, 0);
    CHECK(oracle_ring_iso(l2.object.ring(), build_zmod(2)));
    CHECK(l2.map.is_homomorphism());
    const Algebra f2 = gf(2);
    const Localization lf = localize_at_prime(f2, 0);
    CHECK(inverse_map(lf.map).has_value());
    // N at the empty prime is the group Z: every generator is a unit
    const Localization lz = localize_at_prime(nat(), 0);
    for (const auto& g : lz.object.generators()) CHECK(lz.object.is_unit(g));
    CHECK(lz.object.primes().size() == 1);
    // (N, {0}) keeps N; (N^2, N+0) inverts the first coordinate
    CHECK(inverse_map(localize_at_face(nat(), 0).map).has_value());
    const Localization l21 = localize_at_face(nat2(), 1);
    CHECK(l21.object.primes().size() == 2);
    CHECK(find_isomorphism(l21.object, affine(2, {{1, 0}, {-1, 0}, {0, 1}})).has_value());
}

TEST_CASE("localization is initial among maps inverting the complement") {
    const std::vector<Algebra> targets{gf(2), gf(4), zmod(4), zmod(3), zmod(9)};
    for (const auto& a : ring_pool()) {
        if (a.ring().size() > 12) continue;
        for (int z = 0; z < static_cast<int>(a.primes().size()); ++z) {
            const Localization l = localize_at_prime(a, z);
            for (const auto& c : targets)
                for (const auto& g : hom_set(a, c)) {
                    bool inverts = true;
                    for (int e = 0; e < a.ring().size(); ++e)
                        if (!a.in_prime(z, {e}) && !c.ring().is_unit(g.apply(e))) inverts = false;
                    if (!inverts) continue;
                    int factorizations = 0;
                    for (const auto& h : hom_set(l.object, c))
                        if (compose(h, l.map) == g) ++factorizations;
                    INFO(a.summary() << " -> " << c.summary());
                    CHECK(factorizations == 1);
                    CHECK(compose(lift_through_localization(l, g), l.map) == g);
                }
        }
    }
}

TEST_CASE("residue fields") {
    const Quotient r4 = residue(zmod(4));
    CHECK(oracle_ring_iso(r4.object.ring(), build_zmod(2)));
    CHECK(residue(gf(4)).object.ring().size() == 4);
    const Algebra z = localize_at_prime(nat(), 0).object;
    CHECK(is_trivial_monoid(residue(z).object));
    CHECK_THROWS_AS(residue(zmod(6)), NotLocal);
}

TEST_CASE("pushouts") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const AlgebraMap i = first_hom(f2, f4);
    const Pushout p = pushout(i, i);
    CHECK(p.object.ring().size() == 16);
    CHECK(oracle_primes(p.object.ring()).size() == 2);
    // F4 (x) F4 is F4 x F4
    CHECK(find_isomorphism(p.object, prod({f4, f4})).has_value());

    const Algebra z6 = zmod(6);
    const Pushout q = pushout(AlgebraMap::identity(z6), AlgebraMap::identity(z6));
    CHECK(inverse_map(q.i1).has_value());
    CHECK(q.i1 == q.i2);

    const Algebra zero = Algebra(build_trivial_monoid());
    const Pushout n = pushout(first_hom(zero, nat()), first_hom(zero, nat()));
    CHECK(find_isomorphism(n.object, nat2()).has_value());

    // Z/m (x) Z/n = Z/gcd
    for (int m : {2, 4, 6, 12})
        for (int k : {3, 4, 8, 9}) {
            const Pushout c = coproduct(zmod(m), zmod(k));
            CHECK(c.object.ring().size() == std::gcd(m, k));
        }
}

TEST_CASE("pushout universal property on finite targets") {
    const Algebra f2 = gf(2), f4 = gf(4), z4 = zmod(4);
    struct Triple {
        AlgebraMap f1, f2;
    };
    const std::vector<Triple> triples{{first_hom(f2, f4), first_hom(f2, f4)},
                                      {first_hom(z4, f2), first_hom(z4, f2)},
                                      {first_hom(zmod(2), zmod(2)), first_hom(zmod(2), f4)}};
    const std::vector<Algebra> targets{f4, prod({f4, f4}), gf(16), zmod(2)};
    for (const auto& t : triples) {
        const Pushout p = pushout(t.f1, t.f2);
        for (const auto& c : targets)
            for (const auto& g1 : hom_set(t.f1.target(), c))
                for (const auto& g2 : hom_set(t.f2.target(), c)) {
                    if (compose(g1, t.f1) != compose(g2, t.f2)) continue;
                    int mediating = 0;
                    for (const auto& h : hom_set(p.object, c))
                        if (compose(h, p.i1) == g1 && compose(h, p.i2) == g2) ++mediating;
                    CHECK(mediating == 1);
                }
    }
}

TEST_CASE("quotients") {
    const Algebra z4 = zmod(4);
    const Quotient q = quotient_by_ideal(z4, {2});
    CHECK(oracle_ring_iso(q.object.ring(), build_zmod(2)));
    const Quotient same = quotient_by_ideal(zmod(6), {});
    CHECK(inverse_map(same.projection).has_value());
    const Quotient diag = quotient_by_congruence(nat2(), {{{1, 0}, {0, 1}}});
    CHECK(find_isomorphism(diag.object, nat()).has_value());
}

TEST_CASE("hom sets agree with brute force") {
    const std::vector<Algebra> small{zmod(2), zmod(3), zmod(4), zmod(6), gf(4), prod({zmod(2), zmod(2)})};
    for (const auto& a : small)
        for (const auto& b : small) {
            double work = 1;
            for (int i = 0; i < a.ring().size(); ++i) work *= b.ring().size();
            if (work > 5e4) continue;
            INFO(a.summary() << " -> " << b.summary());
            CHECK(hom_set(a, b).size() == oracle_ring_hom_count(a.ring(), b.ring()));
        }
    CHECK(hom_set(zmod(6), gf(2)).size() == 1);
}

TEST_CASE("localization-map predicate") {
    const AlgebraMap crt = first_hom(zmod(6), zmod(2));
    const LocalizationWitness w = is_localization_map(crt);
    CHECK(w.holds);
    std::vector<char> expect{0, 1, 0, 1, 0, 1};
    CHECK(w.set == expect);
    for (const auto& a : ring_pool()) {
        const LocalizationWitness id = is_localization_map(AlgebraMap::identity(a));
        CHECK(id.holds);
        for (int e = 0; e < a.ring().size(); ++e) CHECK((id.set[at(e)] != 0) == a.ring().is_unit(e));
    }
    CHECK_FALSE(is_localization_map(first_hom(gf(2), gf(4))).holds);
    CHECK(is_localization_map(localize_at_prime(nat2(), 1).map).holds);
}

TEST_CASE("face test rejects the diagonal") {
    const Algebra n2 = nat2();
    CHECK_FALSE(is_face(n2, {{1, 1}}));
    CHECK(is_face(n2, {{1, 0}}));
    CHECK(is_face(n2, {}));
}

TEST_CASE("S-set primes match the residue tensor") {
    const Algebra f2 = gf(2), f4 = gf(4);
    const AlgebraMap i = first_hom(f2, f4);
    const Pushout p = pushout(i, i);
    const Algebra& t = p.object;
    const Pushout k = pushout(residue_map(i), residue_map(i));
    int pulled = 0;
    for (int z = 0; z < static_cast<int>(t.primes().size()); ++z)
        if (preimage_prime(p.i1, z) == f4.maximal_prime() && preimage_prime(p.i2, z) == f4.maximal_prime()) ++pulled;
    CHECK(pulled == static_cast<int>(k.object.primes().size()));
}

TEST_CASE("algebra JSON round trip is bit exact") {
    std::vector<Algebra> all = ring_pool();
    for (const auto& m : monoid_pool()) all.push_back(m);
    all.push_back(localize_at_prime(zmod(12), 0).object);
    all.push_back(localize_at_prime(nat2(), 1).object);
    for (const auto& a : all) {
        const json j = algebra_to_json(a);
        const Algebra b = algebra_from_json(j);
        CHECK(algebra_to_json(b) == j);
        CHECK(b.same(a));
    }
    CHECK_THROWS_AS(algebra_from_json(json{{"kind", "ring"}, {"backend", "nope"}}), ParseError);
    CHECK_THROWS_AS(algebra_from_json(json::parse("[1]")), ParseError);
}
