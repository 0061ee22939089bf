#include <catch_amalgamated.hpp>

#include "locus/error.hpp"
#include "locus/serialize.hpp"
#include "support.hpp"

using namespace support;

namespace {

/// Closed point c with generizations a, b: stalks Z/6 -> F2, F3.
SpacePtr v_space() {
    const Algebra z6 = zmod(6), f2 = gf(2), f3 = gf(3);
    FiniteSpace s({"a", "b", "c"}, {0b001, 0b010, 0b111});
    std::map<std::pair<int, int>, AlgebraMap> res;
    res.emplace(std::make_pair(2, 0), first_hom(z6, f2));
    res.emplace(std::make_pair(2, 1), first_hom(z6, f3));
    return make_space(StructuredSpace(s, {f2, f3, z6}, std::move(res), false));
}

/// Sierpinski space: closed point with stalk Z/4 specializing from F2.
SpacePtr sierpinski() {
    const Algebra z4 = zmod(4), f2 = gf(2);
    FiniteSpace s({"g", "c"}, {0b01, 0b11});
    std::map<std::pair<int, int>, AlgebraMap> res;
    res.emplace(std::make_pair(1, 0), first_hom(z4, f2));
    return make_space(StructuredSpace(s, {f2, z4}, std::move(res), false));
}

std::vector<PointSet> opens_of(const FiniteSpace& s) {
    std::vector<PointSet> out;
    for (PointSet u = 0; u <= s.all(); ++u)
        if (s.is_open(u)) out.push_back(u);
    return out;
}

}  // namespace

TEST_CASE("sections agree with the compatible-family oracle") {
    for (const SpacePtr& x : {v_space(), sierpinski(), global_spec(zmod(6)).space, global_spec(zmod(12)).space})
        for (PointSet u : opens_of(x->space())) {
            INFO("open " << u);
            CHECK(static_cast<std::size_t>(sections(*x, u).object.ring().size()) == oracle_section_count(*x, u));
        }
}

TEST_CASE("global sections examples") {
    const SpacePtr s6 = global_spec(zmod(6)).space;
    CHECK(find_isomorphism(sections(*s6, s6->space().all()).object, zmod(6)).has_value());
    CHECK(sections(*s6, 0).object.ring().is_zero_ring());
    const SpacePtr sn = global_spec(nat()).space;
    CHECK(find_isomorphism(sections(*sn, sn->space().all()).object, nat()).has_value());
    const Sections empty = sections(*sn, 0);
    CHECK(empty.object.is_monoid());
    CHECK(empty.object.monoid().elements_up_to(3).size() == 1);
    // {a, b} is open but not a minimal open
    const SpacePtr v = v_space();
    CHECK(sections(*v, 0b011).object.ring().size() == 6);
}

TEST_CASE("monoid sections off minimal opens are rejected") {
    const SpacePtr x = global_spec(nat2()).space;
    // the two height-one points together form an open that is no minimal open
    PointSet u = 0;
    for (int p = 0; p < x->size(); ++p)
        if (std::popcount(x->space().min_open(p)) == 2) u |= x->space().min_open(p);
    REQUIRE(x->space().is_open(u));
    CHECK_THROWS_AS(sections(*x, u), GeneratorExtractionFailed);
}

TEST_CASE("locality of spaces") {
    CHECK(is_local_space(*global_spec(zmod(4)).space));
    CHECK_FALSE(is_local_space(*punctual(zmod(6))));
    CHECK(is_local_space(*punctual(nat())));
    CHECK(is_local_space(*v_space()) == false);
}

TEST_CASE("standard prime systems") {
    const SpacePtr s4 = global_spec(zmod(4)).space;
    const PrimeSystem m = local_prime_system(*s4);
    for (const auto& ps : m.primes) CHECK(ps.size() == 1);
    const SpacePtr p6 = punctual(zmod(6));
    CHECK(terminal_prime_system(*p6).primes == std::vector<std::vector<int>>{{0, 1}});
    CHECK_THROWS_AS(check_prime_system(*p6, PrimeSystem{{{0, 7}}}), UnknownPrime);
    const auto id = identity_morphism(p6);
    const PrimeSystem t = terminal_prime_system(*p6);
    CHECK(pullback_prime_system(id, t) == t);
}

TEST_CASE("PRS legality is containment in the pullback") {
    const std::vector<SpacePtr> spaces{punctual(zmod(6)), punctual(zmod(4)), punctual(gf(2)), global_spec(zmod(6)).space,
                                       punctual(nat()), global_spec(nat()).space};
    auto systems = [](const SpacePtr& x) {
        std::vector<PrimeSystem> out{terminal_prime_system(*x)};
        if (is_local_space(*x)) out.push_back(local_prime_system(*x));
        return out;
    };
    for (const auto& x : spaces)
        for (const auto& y : spaces) {
            if (x->monoid_kind() != y->monoid_kind()) continue;
            for (const auto& f : enumerate_morphisms(x, y, Flavor::RS))
                for (const auto& m : systems(x)) {
                    if (std::any_of(m.primes.begin(), m.primes.end(), [](const auto& v) { return v.empty(); })) continue;
                    for (const auto& n : systems(y)) {
                        if (std::any_of(n.primes.begin(), n.primes.end(), [](const auto& v) { return v.empty(); })) continue;
                        CHECK(is_prs_morphism(f, m, n) == is_subsystem(m, pullback_prime_system(f, n)));
                    }
                }
        }
    // identity with M = T, N = M_X on punctual Z/6 is not PRS
    const SpacePtr p6 = punctual(zmod(6));
    const PrimeSystem t = terminal_prime_system(*p6);
    PrimeSystem one{{{0}}};
    CHECK_FALSE(is_prs_morphism(identity_morphism(p6), t, one));
}

TEST_CASE("LRS with local systems matches PRS") {
    const std::vector<SpacePtr> spaces{global_spec(zmod(4)).space, global_spec(zmod(6)).space, global_spec(gf(2)).space,
                                       global_spec(nat()).space, punctual(nat())};
    for (const auto& x : spaces)
        for (const auto& y : spaces) {
            if (x->monoid_kind() != y->monoid_kind()) continue;
            const PrimeSystem mx = local_prime_system(*x), my = local_prime_system(*y);
            for (const auto& f : enumerate_morphisms(x, y, Flavor::RS)) CHECK(is_lrs_morphism(f) == is_prs_morphism(f, mx, my));
        }
}

TEST_CASE("composition keeps legality and identities are legal") {
    const std::vector<SpacePtr> spaces{global_spec(zmod(4)).space, global_spec(zmod(6)).space, global_spec(gf(2)).space,
                                       v_space(), sierpinski()};
    for (const auto& x : spaces) {
        const auto id = identity_morphism(x);
        CHECK(is_rs_morphism(id));
        if (is_local_space(*x)) CHECK(is_lrs_morphism(id));
    }
    for (const auto& x : spaces)
        for (const auto& y : spaces)
            for (const auto& z : spaces)
                for (const auto& f : enumerate_morphisms(x, y, Flavor::RS))
                    for (const auto& g : enumerate_morphisms(y, z, Flavor::RS)) {
                        const auto gf_ = compose(g, f);
                        CHECK(is_rs_morphism(gf_));
                        if (is_local_space(*x) && is_local_space(*y) && is_local_space(*z) && is_lrs_morphism(f) &&
                            is_lrs_morphism(g))
                            CHECK(is_lrs_morphism(gf_));
                    }
}

TEST_CASE("morphism enumeration examples") {
    const SpacePtr f2 = global_spec(gf(2)).space, z6 = global_spec(zmod(6)).space;
    CHECK(enumerate_morphisms(f2, z6, Flavor::LRS).size() == 1);
    const SpacePtr f4 = global_spec(gf(4)).space;
    CHECK(enumerate_morphisms(f4, f4, Flavor::LRS).size() == 2);
    CHECK(enumerate_isomorphisms(f4, f4).size() == 2);
}

TEST_CASE("space and morphism JSON round trip") {
    std::mt19937 rng(7);
    std::vector<SpacePtr> spaces{v_space(), sierpinski(), empty_space(false), empty_space(true)};
    for (int i = 0; i < 8; ++i) spaces.push_back(random_local_space(rng, i % 2 == 1));
    for (const auto& x : spaces) {
        const json j = space_to_json(*x);
        const SpacePtr y = space_from_json(j);
        CHECK(space_to_json(*y) == j);
        const auto id = identity_morphism(x);
        CHECK(morphism_to_json(morphism_from_json(morphism_to_json(id), y, y)) == morphism_to_json(id));
    }
    CHECK_THROWS_AS(space_from_json(json{{"points", {"a"}}, {"min_open", {{"a", {"b"}}}}, {"stalks", json::object()}}),
                    ValidationError);
}

TEST_CASE("structured spaces reject broken sheaves") {
    const Algebra z6 = zmod(6), f2 = gf(2);
    FiniteSpace s({"g", "c"}, {0b01, 0b11});
    // missing generization map
    CHECK_THROWS(make_space(StructuredSpace(s, {f2, z6}, {}, false)));
    // non-transitive minimal opens
    CHECK_THROWS(FiniteSpace({"a", "b", "c"}, {0b001, 0b011, 0b110}));
}
