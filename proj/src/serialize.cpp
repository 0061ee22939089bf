#include "locus/serialize.hpp"

#include <algorithm>

#include "locus/error.hpp"

namespace locus {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

Algebra ring_from_json(const json& j, const std::string& backend) {
    if (backend == "zmod") return Algebra(build_zmod(field(j, "n").get<int>()));
    if (backend == "gf") return Algebra(build_gf(field(j, "q").get<int>()));
    if (backend == "product") {
        std::vector<FiniteRing> factors;
        for (const auto& f : field(j, "factors")) {
            Algebra a = algebra_from_json(f);
            if (!a.is_ring()) throw InvalidParameter("product factors must be rings");
            factors.push_back(a.ring());
        }
        return Algebra(build_product(factors));
    }
    if (backend == "table")
        return Algebra(build_table_ring(field(j, "n").get<int>(), field(j, "one").get<int>(),
                                        field(j, "add").get<std::vector<std::vector<int>>>(),
                                        field(j, "mul").get<std::vector<std::vector<int>>>()));
    throw ParseError("unknown ring backend \"" + backend + "\"");
}

Algebra monoid_from_json(const json& j, const std::string& backend) {
    if (backend == "affine")
        return Algebra(build_affine_monoid(field(j, "d").get<int>(),
                                           field(j, "gens").get<std::vector<std::vector<std::int64_t>>>()));
    if (backend == "presented") {
        const int n = field(j, "ngens").get<int>();
        std::vector<Relation> rels;
        for (const auto& r : field(j, "relations")) {
            if (!r.is_array() || r.size() != 2) throw ParseError("a relation is a pair of words");
            Relation rel{r[0].get<Word>(), r[1].get<Word>()};
            if (static_cast<int>(rel.lhs.size()) != n || static_cast<int>(rel.rhs.size()) != n)
                throw InvalidParameter("relation words must have one entry per generator");
            rels.push_back(std::move(rel));
        }
        std::vector<std::vector<std::int64_t>> emb;
        if (j.contains("embedding")) emb = j.at("embedding").get<std::vector<std::vector<std::int64_t>>>();
        return Algebra(build_presented_monoid(n, rels, emb));
    }
    if (backend == "table")
        return Algebra(build_table_monoid(field(j, "n").get<int>(), field(j, "op").get<std::vector<std::vector<int>>>(),
                                          field(j, "zero").get<int>()));
    throw ParseError("unknown monoid backend \"" + backend + "\"");
}

}  // namespace

json algebra_to_json(const Algebra& a) {
    if (!a.source().is_null()) return a.source();
    return a.is_ring() ? table_json(a.ring()) : presented_json(a.monoid());
}

Algebra algebra_from_json(const json& j) {
    return guarded("algebra", [&] {
        const std::string kind = field(j, "kind").get<std::string>();
        const std::string backend = field(j, "backend").get<std::string>();
        if (kind == "ring") return ring_from_json(j, backend);
        if (kind == "monoid") return monoid_from_json(j, backend);
        throw ParseError("unknown algebra kind \"" + kind + "\"");
    });
}

json element_to_json(const Algebra& a, const Elem& e) {
    if (a.is_ring()) return e.at(0);
    return e;
}

Elem element_from_json(const Algebra& a, const json& j) {
    return guarded("element", [&]() -> Elem {
        if (a.is_ring()) {
            const int v = j.get<int>();
            if (v < 0 || v >= a.ring().size()) throw InvalidParameter("ring element out of range");
            return {v};
        }
        Word w = j.get<Word>();
        if (static_cast<int>(w.size()) != a.monoid().ngens()) throw InvalidParameter("word has the wrong length");
        for (auto c : w)
            if (c < 0) throw InvalidParameter("word coefficients must be non-negative");
        return a.normalize(w);
    });
}

json map_to_json(const AlgebraMap& f) {
    if (f.source().is_ring()) return {{"table", f.table()}};
    return {{"images", f.images()}};
}

AlgebraMap map_from_json(const json& j, const Algebra& src, const Algebra& dst) {
    return guarded("map", [&] {
        if (src.is_ring() != dst.is_ring()) throw ValidationError("map between a ring and a monoid");
        std::optional<AlgebraMap> f;
        if (src.is_ring()) {
            auto t = field(j, "table").get<std::vector<int>>();
            if (static_cast<int>(t.size()) != src.ring().size()) throw ValidationError("map table has the wrong size");
            for (int v : t)
                if (v < 0 || v >= dst.ring().size()) throw ValidationError("map table entry out of range");
            f.emplace(src, dst, std::move(t));
        } else {
            std::vector<Word> imgs;
            for (const auto& w : field(j, "images")) imgs.push_back(element_from_json(dst, w));
            if (static_cast<int>(imgs.size()) != src.monoid().ngens()) throw ValidationError("one image per generator");
            f.emplace(src, dst, std::move(imgs));
        }
        if (!f->is_homomorphism()) throw ValidationError("map is not a homomorphism");
        return *f;
    });
}

json space_to_json(const StructuredSpace& x) {
    const auto& s = x.space();
    json j;
    j["kind"] = x.monoid_kind() ? "monoid" : "ring";
    j["points"] = s.names();
    j["min_open"] = json::object();
    j["stalks"] = json::object();
    j["res"] = json::object();
    for (int p = 0; p < x.size(); ++p) {
        json u = json::array();
        for (int q : s.points_of(s.min_open(p))) u.push_back(s.name(q));
        j["min_open"][s.name(p)] = u;
        j["stalks"][s.name(p)] = algebra_to_json(x.stalk(p));
    }
    for (const auto& [key, f] : x.restrictions()) j["res"][s.name(key.first) + "->" + s.name(key.second)] = map_to_json(f);
    if (!x.provenance().is_null()) j["provenance"] = x.provenance();
    return j;
}

SpacePtr space_from_json(const json& j) {
    return guarded("space", [&] {
        const auto names = field(j, "points").get<std::vector<std::string>>();
        bool monoid = false;
        if (j.contains("kind")) {
            const std::string kind = j.at("kind").get<std::string>();
            if (kind != "ring" && kind != "monoid") throw ParseError("unknown space kind \"" + kind + "\"");
            monoid = kind == "monoid";
        }
        auto index = [&](const std::string& n) {
            for (std::size_t i = 0; i < names.size(); ++i)
                if (names[i] == n) return static_cast<int>(i);
            throw ValidationError("unknown point \"" + n + "\"");
        };
        std::vector<PointSet> opens;
        std::vector<Algebra> stalks;
        const json& mo = field(j, "min_open");
        const json& st = field(j, "stalks");
        for (const auto& n : names) {
            if (!mo.contains(n)) throw ValidationError("no minimal open for point \"" + n + "\"");
            if (!st.contains(n)) throw ValidationError("no stalk for point \"" + n + "\"");
            PointSet u = 0;
            for (const auto& q : mo.at(n)) u |= singleton(index(q.get<std::string>()));
            opens.push_back(u);
            stalks.push_back(algebra_from_json(st.at(n)));
        }
        if (!j.contains("kind") && !stalks.empty()) monoid = stalks.front().is_monoid();
        std::map<std::pair<int, int>, AlgebraMap> res;
        if (j.contains("res"))
            for (const auto& [key, m] : j.at("res").items()) {
                const auto arrow = key.find("->");
                if (arrow == std::string::npos) throw ParseError("generization key \"" + key + "\" lacks \"->\"");
                const int a = index(key.substr(0, arrow));
                const int b = index(key.substr(arrow + 2));
                res.emplace(std::make_pair(a, b), map_from_json(m, stalks[at(a)], stalks[at(b)]));
            }
        StructuredSpace s(FiniteSpace(names, std::move(opens)), std::move(stalks), std::move(res), monoid);
        if (j.contains("provenance")) s.set_provenance(j.at("provenance"));
        return make_space(std::move(s));
    });
}

json morphism_to_json(const SpaceMorphism& f) {
    json pm = json::object();
    json sm = json::object();
    for (std::size_t p = 0; p < f.point_map.size(); ++p) {
        const std::string& n = f.source->space().name(static_cast<int>(p));
        pm[n] = f.target->space().name(f.point_map[p]);
        sm[n] = map_to_json(f.stalk_maps[p]);
    }
    return {{"point_map", pm}, {"stalk_maps", sm}};
}

SpaceMorphism morphism_from_json(const json& j, const SpacePtr& source, const SpacePtr& target) {
    return guarded("morphism", [&] {
        SpaceMorphism f{source, target, {}, {}};
        const json& pm = field(j, "point_map");
        const json& sm = field(j, "stalk_maps");
        for (int p = 0; p < source->size(); ++p) {
            const std::string& n = source->space().name(p);
            if (!pm.contains(n) || !sm.contains(n)) throw ValidationError("morphism misses point \"" + n + "\"");
            const int q = target->space().index_of(pm.at(n).get<std::string>());
            f.point_map.push_back(q);
            f.stalk_maps.push_back(map_from_json(sm.at(n), target->stalk(q), source->stalk(p)));
        }
        if (!is_rs_morphism(f)) throw ValidationError("morphism is not continuous or not natural");
        return f;
    });
}

json prime_system_to_json(const StructuredSpace& x, const PrimeSystem& m) {
    json j = json::object();
    for (int p = 0; p < x.size(); ++p) j[x.space().name(p)] = m.primes[at(p)];
    return j;
}

PrimeSystem prime_system_from_json(const json& j, const StructuredSpace& x) {
    return guarded("prime system", [&] {
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "terminal") return terminal_prime_system(x);
            if (s == "local") return local_prime_system(x);
            throw ParseError("unknown prime system \"" + s + "\"");
        }
        PrimeSystem m;
        for (int p = 0; p < x.size(); ++p) {
            const std::string& n = x.space().name(p);
            std::vector<int> ps;
            if (j.contains(n)) ps = j.at(n).get<std::vector<int>>();
            std::sort(ps.begin(), ps.end());
            ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
            m.primes.push_back(std::move(ps));
        }
        for (const auto& [key, v] : j.items()) {
            (void)v;
            x.space().index_of(key);
        }
        check_prime_system(x, m);
        return m;
    });
}

}  // namespace locus
