#include "locus/scene.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "locus/budget.hpp"
#include "locus/dot.hpp"
#include "locus/error.hpp"
#include "locus/serialize.hpp"
#include "locus/spec_functors.hpp"

namespace locus {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

std::string str(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
        throw ParseError(std::string("expected a string field \"") + key + "\"");
    return j.at(key).get<std::string>();
}

int integer(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_integer())
        throw ParseError(std::string("expected an integer field \"") + key + "\"");
    return j.at(key).get<int>();
}

std::vector<std::string> names(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_array())
        throw ParseError(std::string("expected a list field \"") + key + "\"");
    std::vector<std::string> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) throw ParseError(std::string("entries of \"") + key + "\" must be names");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Budget budget_from(const json& limits) {
    Budget b;
    if (!limits.is_null()) {
        if (!limits.is_object()) throw ParseError("\"limits\" must be an object");
        for (const auto& [k, v] : limits.items()) {
            if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError("limit \"" + k + "\" must be a positive integer");
            const auto n = v.get<std::size_t>();
            if (k == "hom_candidates")
                b.hom_candidates = n;
            else if (k == "morphism_candidates")
                b.morphism_candidates = n;
            else if (k == "monoid_normal_forms")
                b.monoid_normal_forms = n;
            else if (k == "monoid_hom_degree")
                b.monoid_hom_degree = static_cast<int>(n);
            else
                throw ParseError("unknown limit \"" + k + "\"");
        }
    }
    return b.scaled(env_budget_scale());
}

const char* kBlocks[] = {"algebras", "maps", "spaces", "prime_systems", "morphisms", "diagrams", "sheaves"};

struct LimitEntry {
    SpacePtr space;
    std::vector<SpaceMorphism> projections;
};

class Scene {
public:
    explicit Scene(const json& j) : j_(j) {
        if (!j_.is_object()) throw ParseError("a scene is a JSON object");
        for (const auto& [k, v] : j_.items()) {
            (void)v;
            if (k != "limits" && k != "tasks" && k != "name" &&
                std::find(std::begin(kBlocks), std::end(kBlocks), k) == std::end(kBlocks))
                throw ParseError("unknown scene block \"" + k + "\"");
        }
        for (const char* b : kBlocks)
            if (j_.contains(b) && !j_.at(b).is_object()) throw ParseError(std::string("\"") + b + "\" must be an object");
        if (j_.contains("tasks") && !j_.at("tasks").is_array()) throw ParseError("\"tasks\" must be a list");
    }

    void resolve_all() {
        for (const char* b : kBlocks) {
            if (!j_.contains(b)) continue;
            for (const auto& [name, v] : j_.at(b).items()) {
                (void)v;
                const std::string block = b;
                if (block == "algebras") algebra(name);
                if (block == "maps") map(name);
                if (block == "spaces") space(name);
                if (block == "prime_systems") prime_system(name);
                if (block == "morphisms") morphism(name);
                if (block == "diagrams") diagram(name);
                if (block == "sheaves") sheaf(name);
            }
        }
    }

    json run_task(const json& t, std::vector<std::pair<std::string, std::string>>& dots);

private:
    const json& def(const char* block, const std::string& name) {
        if (!j_.contains(block) || !j_.at(block).contains(name))
            throw ValidationError(std::string("unresolved reference \"") + name + "\" in " + block);
        return j_.at(block).at(name);
    }

    template <class T, class Build>
    const T& memo(std::map<std::string, T>& cache, const char* block, const std::string& name, Build build) {
        auto it = cache.find(name);
        if (it != cache.end()) return it->second;
        const std::string key = std::string(block) + ":" + name;
        if (!active_.insert(key).second) throw ValidationError("cyclic definition of \"" + name + "\"");
        T value = build(def(block, name));
        active_.erase(key);
        return cache.emplace(name, std::move(value)).first->second;
    }

    Algebra algebra_ref(const json& j) { return j.is_string() ? algebra(j.get<std::string>()) : algebra_from_json(j); }

    AlgebraMap map_ref(const json& j, const Algebra& src, const Algebra& dst) {
        if (!j.is_string()) return map_from_json(j, src, dst);
        const AlgebraMap& f = map(j.get<std::string>());
        if (!f.source().same(src) || !f.target().same(dst))
            throw ValidationError("map \"" + j.get<std::string>() + "\" has the wrong source or target");
        return f;
    }

    const Algebra& algebra(const std::string& name) {
        return memo(algebras_, "algebras", name, [&](const json& d) -> Algebra {
            if (d.is_object() && d.contains("kind")) return algebra_from_json(d);
            if (d.contains("residue")) return residue(algebra(str(d, "residue"))).object;
            if (d.contains("localize")) return localize_at_prime(algebra(str(d, "localize")), integer(d, "prime")).object;
            if (d.contains("pushout")) {
                auto legs = names(d, "pushout");
                if (legs.size() != 2) throw ParseError("a pushout takes two maps");
                return pushout(map(legs[0]), map(legs[1])).object;
            }
            if (d.contains("quotient")) {
                const Algebra& a = algebra(str(d, "quotient"));
                if (!a.is_ring()) throw ValidationError("ideal quotients need a ring");
                return quotient_by_ideal(a, d.at("ideal").get<std::vector<int>>()).object;
            }
            if (d.contains("gamma")) return gamma(*space(str(d, "gamma")));
            throw ParseError("cannot read algebra \"" + name + "\"");
        });
    }

    const AlgebraMap& map(const std::string& name) {
        return memo(maps_, "maps", name, [&](const json& d) -> AlgebraMap {
            if (d.contains("compose")) {
                auto parts = names(d, "compose");
                if (parts.size() != 2) throw ParseError("compose takes [g, f]");
                return compose(map(parts[0]), map(parts[1]));
            }
            if (d.contains("localization")) return localize_at_prime(algebra(str(d, "localization")), integer(d, "prime")).map;
            if (d.contains("residue")) return residue(algebra(str(d, "residue"))).projection;
            const Algebra& src = algebra(str(d, "source"));
            const Algebra& dst = algebra(str(d, "target"));
            if (d.contains("hom")) {
                const auto all = hom_set(src, dst);
                const int k = integer(d, "hom");
                if (k < 0 || at(k) >= all.size()) throw ValidationError("hom index out of range for \"" + name + "\"");
                return all[at(k)];
            }
            return map_from_json(d, src, dst);
        });
    }

    const SpacePtr& space(const std::string& name) {
        return memo(spaces_, "spaces", name, [&](const json& d) -> SpacePtr {
            if (d.contains("points")) return space_from_json(d);
            if (d.contains("spec")) return keep_localized(name, global_spec(algebra(str(d, "spec"))));
            if (d.contains("punctual"))
                return punctual(algebra(str(d, "punctual")), d.contains("point") ? str(d, "point") : "*");
            if (d.contains("localize")) {
                const SpacePtr& x = space(str(d, "localize"));
                if (!d.contains("primes")) throw ParseError("localize needs \"primes\"");
                return keep_localized(name, localize(x, primes_ref(d.at("primes"), x)));
            }
            if (d.contains("spec_subset"))
                return spec_subset(algebra(str(d, "spec_subset")), d.at("primes").get<std::vector<int>>());
            if (d.contains("subspace")) {
                const SpacePtr& x = space(str(d, "subspace"));
                PointSet u = 0;
                for (const auto& p : names(d, "points")) u |= singleton(x->space().index_of(p));
                return subspace(x, u);
            }
            if (d.contains("limit")) {
                const FiniteDiagram& dg = diagram(str(d, "limit"));
                const std::string flavor = d.contains("flavor") ? str(d, "flavor") : "lrs";
                LimitEntry e;
                if (flavor == "lrs") {
                    LrsLimit l = lrs_limit(dg);
                    e = {l.space, l.projections};
                } else if (flavor == "rs" || flavor == "prs") {
                    RsLimit l = rs_limit(dg);
                    e = {l.space, l.projections};
                } else {
                    throw ParseError("unknown limit flavor \"" + flavor + "\"");
                }
                limits_[name] = e;
                return e.space;
            }
            if (d.contains("relspec")) {
                RelativeSpec r = relative_spec(sheaf(str(d, "relspec")));
                to_base_.emplace(name, r.to_base);
                return keep_localized(name, std::move(r.loc));
            }
            if (d.contains("empty")) return empty_space(str(d, "empty") == "monoid");
            throw ParseError("cannot read space \"" + name + "\"");
        });
    }

    SpacePtr keep_localized(const std::string& name, LocalizedSpace l) {
        SpacePtr s = l.space;
        localized_.emplace(name, std::move(l));
        return s;
    }

    const LocalizedSpace& localized(const std::string& name) {
        space(name);
        auto it = localized_.find(name);
        if (it == localized_.end()) throw ValidationError("space \"" + name + "\" is not a localization");
        return it->second;
    }

    PrimeSystem primes_ref(const json& j, const SpacePtr& x) {
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "terminal" || s == "local") return prime_system_from_json(j, *x);
            const PrimeSystem& m = prime_system(s);
            if (ps_space_.at(s) != x) throw ValidationError("prime system \"" + s + "\" lives on another space");
            return m;
        }
        return prime_system_from_json(j, *x);
    }

    const PrimeSystem& prime_system(const std::string& name) {
        return memo(prime_systems_, "prime_systems", name, [&](const json& d) -> PrimeSystem {
            const SpacePtr& x = space(str(d, "space"));
            ps_space_[name] = x;
            if (!d.contains("primes")) throw ParseError("prime system needs \"primes\"");
            return prime_system_from_json(d.at("primes"), *x);
        });
    }

    const SpaceMorphism& morphism(const std::string& name) {
        return memo(morphisms_, "morphisms", name, [&](const json& d) -> SpaceMorphism {
            if (d.contains("identity")) return identity_morphism(space(str(d, "identity")));
            if (d.contains("compose")) {
                auto parts = names(d, "compose");
                if (parts.size() != 2) throw ParseError("compose takes [g, f]");
                const SpaceMorphism& g = morphism(parts[0]);
                const SpaceMorphism& f = morphism(parts[1]);
                if (f.target != g.source) throw ValidationError("morphisms \"" + parts[0] + "\" and \"" + parts[1] + "\" do not compose");
                return compose(g, f);
            }
            if (d.contains("pi")) {
                const std::string s = str(d, "pi");
                const LocalizedSpace& l = localized(s);
                auto it = to_base_.find(s);
                return it != to_base_.end() ? it->second : l.pi;
            }
            if (d.contains("projection")) {
                const std::string s = str(d, "projection");
                space(s);
                auto it = limits_.find(s);
                if (it == limits_.end()) throw ValidationError("space \"" + s + "\" is not a limit");
                const int k = integer(d, "index");
                if (k < 0 || at(k) >= it->second.projections.size()) throw ValidationError("projection index out of range");
                return it->second.projections[at(k)];
            }
            if (d.contains("spec_of")) {
                const AlgebraMap& f = map(str(d, "spec_of"));
                const LocalizedSpace& sb = localized(str(d, "source"));
                const LocalizedSpace& sa = localized(str(d, "target"));
                if (!sb.base->stalk(0).same(f.target()) || !sa.base->stalk(0).same(f.source()))
                    throw ValidationError("spectra do not match the map \"" + str(d, "spec_of") + "\"");
                return spec_morphism(f, sb, sa);
            }
            if (d.contains("lift")) {
                const SpaceMorphism& f = morphism(str(d, "lift"));
                const LocalizedSpace& lx = localized(str(d, "source"));
                const LocalizedSpace& ly = localized(str(d, "target"));
                if (lx.base != f.source || ly.base != f.target) throw ValidationError("lift endpoints do not match");
                return lift_morphism(f, lx, ly);
            }
            const SpacePtr& x = space(str(d, "source"));
            const SpacePtr& y = space(str(d, "target"));
            json m = d;
            if (m.contains("stalk_maps") && m.at("stalk_maps").is_object())
                for (auto& [pt, v] : m.at("stalk_maps").items())
                    if (v.is_string()) {
                        const int p = x->space().index_of(pt);
                        const int q = y->space().index_of(str(d.at("point_map"), pt.c_str()));
                        v = map_to_json(map_ref(v, y->stalk(q), x->stalk(p)));
                    }
            return morphism_from_json(m, x, y);
        });
    }

    const FiniteDiagram& diagram(const std::string& name) {
        return memo(diagrams_, "diagrams", name, [&](const json& d) -> FiniteDiagram {
            if (d.contains("cospan")) {
                auto legs = names(d, "cospan");
                if (legs.size() != 2) throw ParseError("a cospan takes two morphisms");
                return cospan(morphism(legs[0]), morphism(legs[1]));
            }
            if (d.contains("parallel")) {
                auto legs = names(d, "parallel");
                if (legs.size() != 2) throw ParseError("a parallel pair takes two morphisms");
                return parallel_pair(morphism(legs[0]), morphism(legs[1]));
            }
            FiniteDiagram dg;
            std::vector<std::string> keys;
            if (!d.contains("objects") || !d.at("objects").is_object()) throw ParseError("diagram needs \"objects\"");
            for (const auto& [k, v] : d.at("objects").items()) {
                if (!v.is_string()) throw ParseError("diagram objects are space names");
                keys.push_back(k);
                dg.objects.push_back(space(v.get<std::string>()));
            }
            auto index = [&](const std::string& k) {
                auto it = std::find(keys.begin(), keys.end(), k);
                if (it == keys.end()) throw ValidationError("unknown diagram object \"" + k + "\"");
                return static_cast<int>(it - keys.begin());
            };
            if (d.contains("arrows"))
                for (const auto& [k, v] : d.at("arrows").items()) {
                    (void)k;
                    dg.arrows.push_back({index(str(v, "from")), index(str(v, "to")), morphism(str(v, "morphism"))});
                }
            if (d.contains("prime_systems")) {
                dg.primes.assign(keys.size(), std::nullopt);
                for (const auto& [k, v] : d.at("prime_systems").items()) {
                    const int i = index(k);
                    dg.primes[at(i)] = primes_ref(v, dg.objects[at(i)]);
                }
            }
            dg.validate();
            return dg;
        });
    }

    const AlgebraOverSheaf& sheaf(const std::string& name) {
        return memo(sheaves_, "sheaves", name, [&](const json& d) -> AlgebraOverSheaf {
            if (d.contains("structure_sheaf")) return structure_sheaf(space(str(d, "structure_sheaf")));
            if (d.contains("pushforward")) return pushforward(morphism(str(d, "pushforward")));
            if (d.contains("base_change")) return base_change(morphism(str(d, "along")), sheaf(str(d, "base_change")));
            if (d.contains("colimit")) {
                std::vector<AlgebraOverSheaf> parts;
                for (const auto& n : names(d, "colimit")) parts.push_back(sheaf(n));
                return colimit_over(parts).object;
            }
            const SpacePtr& x = space(str(d, "base"));
            const auto& sp = x->space();
            std::vector<Algebra> stalks;
            std::vector<AlgebraMap> structure;
            for (int p = 0; p < x->size(); ++p) {
                const std::string& n = sp.name(p);
                if (!d.at("stalks").contains(n) || !d.at("structure").contains(n))
                    throw ValidationError("sheaf \"" + name + "\" misses point \"" + n + "\"");
                stalks.push_back(algebra_ref(d.at("stalks").at(n)));
                structure.push_back(map_ref(d.at("structure").at(n), x->stalk(p), stalks.back()));
            }
            std::map<std::pair<int, int>, AlgebraMap> res;
            if (d.contains("res"))
                for (const auto& [key, v] : d.at("res").items()) {
                    const auto arrow = key.find("->");
                    if (arrow == std::string::npos) throw ParseError("generization key \"" + key + "\" lacks \"->\"");
                    const int a = sp.index_of(key.substr(0, arrow));
                    const int b = sp.index_of(key.substr(arrow + 2));
                    res.emplace(std::make_pair(a, b), map_ref(v, stalks[at(a)], stalks[at(b)]));
                }
            return make_algebra_over(x, std::move(stalks), std::move(res), std::move(structure));
        });
    }

    json space_result(const StructuredSpace& x, json& checks) {
        json j = space_to_json(x);
        checks["json_round_trip"] = space_to_json(*space_from_json(j)) == j;
        return {{"space", j}, {"points", x.size()}};
    }

    json run_check(const json& t, json& checks);

    const json& j_;
    std::set<std::string> active_;
    std::map<std::string, Algebra> algebras_;
    std::map<std::string, AlgebraMap> maps_;
    std::map<std::string, SpacePtr> spaces_;
    std::map<std::string, LocalizedSpace> localized_;
    std::map<std::string, SpaceMorphism> to_base_;
    std::map<std::string, LimitEntry> limits_;
    std::map<std::string, PrimeSystem> prime_systems_;
    std::map<std::string, SpacePtr> ps_space_;
    std::map<std::string, SpaceMorphism> morphisms_;
    std::map<std::string, FiniteDiagram> diagrams_;
    std::map<std::string, AlgebraOverSheaf> sheaves_;
};

bool all_localizations(const SpaceMorphism& f) {
    return std::all_of(f.stalk_maps.begin(), f.stalk_maps.end(),
                       [](const AlgebraMap& m) { return is_localization_map(m).holds; });
}

json Scene::run_task(const json& t, std::vector<std::pair<std::string, std::string>>& dots) {
    const std::string op = str(t, "op");
    json result = json::object();
    json checks = json::object();
    if (op == "spec") {
        const Algebra& a = algebra(str(t, "algebra"));
        LocalizedSpace l = global_spec(a);
        result = space_result(*l.space, checks);
        checks["local"] = is_local_space(*l.space);
        checks["points_match_primes"] = l.space->size() == static_cast<int>(a.primes().size());
        bool order = true;
        for (int p = 0; p < l.space->size(); ++p)
            for (int q = 0; q < l.space->size(); ++q) {
                // q generizes p iff prime(q) is contained in prime(p)
                const Prime& zp = a.primes()[at(l.provenance[at(p)].second)];
                const Prime& zq = a.primes()[at(l.provenance[at(q)].second)];
                const bool sub = a.is_monoid() ? (zp.face & ~zq.face) == 0
                                               : std::all_of(zq.members.begin(), zq.members.end(),
                                                             [&](int e) { return zp.member_mask[at(e)] != 0; });
                if (contains(l.space->space().min_open(p), q) != sub) order = false;
            }
        checks["specialization_matches_containment"] = order;
        checks["pi_localization"] = all_localizations(l.pi);
    } else if (op == "localize") {
        const SpacePtr& x = space(str(t, "space"));
        if (!t.contains("primes")) throw ParseError("localize needs \"primes\"");
        LocalizedSpace l = localize(x, primes_ref(t.at("primes"), x));
        result = space_result(*l.space, checks);
        checks["local"] = is_local_space(*l.space);
        checks["pi_localization"] = all_localizations(l.pi);
        result["pi_lrs"] = is_lrs_morphism(l.pi);
        if (is_local_space(*x) && l.primes == local_prime_system(*x)) checks["retraction"] = inverse_morphism(l.pi).has_value();
    } else if (op == "limit") {
        const FiniteDiagram& d = diagram(str(t, "diagram"));
        const std::string flavor = t.contains("flavor") ? str(t, "flavor") : "lrs";
        std::optional<SpacePtr> test;
        if (t.contains("test_space")) test = space(str(t, "test_space"));
        if (flavor == "lrs") {
            LrsLimit l = lrs_limit(d);
            result = space_result(*l.space, checks);
            bool legal = true;
            json proj = json::array();
            for (const auto& p : l.projections) {
                legal = legal && is_lrs_morphism(p);
                proj.push_back(morphism_to_json(p));
            }
            result["projections"] = proj;
            checks["projections_lrs"] = legal;
            checks["local"] = is_local_space(*l.space);
            if (test) checks["universal_property"] = check_universal_property(l, d, *test).holds();
        } else if (flavor == "rs" || flavor == "prs") {
            RsLimit l = rs_limit(d);
            result = space_result(*l.space, checks);
            bool legal = true;
            json proj = json::array();
            for (const auto& p : l.projections) {
                legal = legal && is_rs_morphism(p);
                proj.push_back(morphism_to_json(p));
            }
            result["projections"] = proj;
            checks["projections_rs"] = legal;
            if (flavor == "prs") {
                // objects without a prime system get their local one
                FiniteDiagram dp = d;
                dp.primes.resize(dp.objects.size());
                for (std::size_t i = 0; i < dp.objects.size(); ++i)
                    if (!dp.primes[i]) dp.primes[i] = local_prime_system(*dp.objects[i]);
                result["prime_system"] = prime_system_to_json(*l.space, prs_limit(dp).primes);
            }
            if (test) checks["universal_property"] = check_universal_property(l, d, *test).holds();
        } else {
            throw ParseError("unknown limit flavor \"" + flavor + "\"");
        }
    } else if (op == "eta") {
        ComparisonMap c = comparison(morphism(str(t, "f1")), morphism(str(t, "f2")));
        const auto& rs = c.lrs.prs.rs.space->space();
        json table = json::object();
        bool fibers = true;
        for (const auto& row : c.fibers) {
            table[rs.name(row.rs_point)] = row.fiber.size();
            fibers = fibers && row.matches_spec_subset;
        }
        result["fiber_table"] = table;
        result["rs_points"] = rs.size();
        result["lrs_points"] = c.lrs.space->size();
        result["isomorphism"] = c.isomorphism;
        checks["surjective"] = c.surjective;
        checks["stalks_are_localizations"] = c.stalks_are_localizations;
        checks["fiber_law"] = fibers;
        if (t.contains("expect_isomorphism")) checks["expected_isomorphism"] = c.isomorphism == t.at("expect_isomorphism").get<bool>();
        if (!c.lrs.space->monoid_kind() && t.value("rational_checks", false)) {
            RationalReport r = rational_fiber_checks(c);
            result["rational"] = {{"part1_checked", r.part1_checked},
                                  {"part2_checked", r.part2_checked},
                                  {"part2_skipped", r.part2_skipped.size()}};
            checks["rational_fibers"] = r.holds();
        }
    } else if (op == "relspec") {
        RelativeSpec r = relative_spec(sheaf(str(t, "sheaf")));
        result = space_result(*r.loc.space, checks);
        checks["local"] = is_local_space(*r.loc.space);
        checks["to_base_lrs"] = is_lrs_morphism(r.to_base);
        checks["pi_localization"] = all_localizations(r.loc.pi);
    } else if (op == "gamma") {
        Algebra g = gamma(*space(str(t, "space")));
        result["algebra"] = algebra_to_json(g);
        result["summary"] = g.summary();
        if (t.contains("expect")) checks["expected_isomorphism"] = find_isomorphism(g, algebra(str(t, "expect"))).has_value();
    } else if (op == "homs") {
        const auto hs = hom_set(algebra(str(t, "source")), algebra(str(t, "target")));
        json list = json::array();
        for (const auto& h : hs) list.push_back(map_to_json(h));
        result["count"] = hs.size();
        result["maps"] = list;
        if (t.contains("expect")) checks["expected_count"] = hs.size() == t.at("expect").get<std::size_t>();
    } else if (op == "dot") {
        const std::string s = str(t, "space");
        std::string text = emit_dot(*space(s), s);
        result["dot"] = text;
        dots.emplace_back(t.value("name", s), std::move(text));
    } else if (op == "check") {
        result = run_check(t, checks);
    } else {
        throw ParseError("unknown task op \"" + op + "\"");
    }
    if (t.contains("expect_points")) {
        if (!result.contains("points")) throw ValidationError("task \"" + op + "\" has no point count to compare");
        checks["expected_points"] = result.at("points") == t.at("expect_points");
    }
    bool pass = true;
    for (const auto& [k, v] : checks.items()) {
        (void)k;
        pass = pass && v.get<bool>();
    }
    return {{"op", op}, {"result", result}, {"checks", checks}, {"status", pass ? "pass" : "fail"}};
}

json Scene::run_check(const json& t, json& checks) {
    const std::string kind = str(t, "check");
    json result = json::object();
    if (kind == "adjunction" || kind == "chevalley") {
        const SpacePtr& y = space(str(t, "space"));
        const LocalizedSpace& lx = localized(str(t, "localized"));
        AdjunctionReport r = check_localization_adjunction(y, lx, kind == "chevalley");
        result = {{"left", r.left}, {"right", r.right}};
        checks["bijection"] = r.holds();
    } else if (kind == "spec_gamma") {
        SpecGammaReport r = spec_gamma_adjunction(space(str(t, "space")), algebra(str(t, "algebra")));
        result = {{"left", r.left}, {"right", r.right}};
        checks["bijection"] = r.holds();
    } else if (kind == "retraction") {
        const SpacePtr& x = space(str(t, "space"));
        LocalizedSpace l = localize(x, local_prime_system(*x));
        checks["pi_isomorphism"] = inverse_morphism(l.pi).has_value();
    } else if (kind == "unique_lift") {
        const SpaceMorphism& f = morphism(str(t, "morphism"));
        const LocalizedSpace& lx = localized(str(t, "source"));
        const LocalizedSpace& ly = localized(str(t, "target"));
        if (lx.base != f.source || ly.base != f.target) throw ValidationError("lift endpoints do not match");
        SpaceMorphism lifted = lift_morphism(f, lx, ly);
        std::size_t hits = 0;
        bool found = false;
        for (const auto& h : enumerate_morphisms(lx.space, ly.space, Flavor::LRS))
            if (compose(ly.pi, h) == compose(f, lx.pi)) {
                ++hits;
                found = found || h == lifted;
            }
        result["commuting_lrs_morphisms"] = hits;
        checks["unique"] = hits == 1 && found;
    } else if (kind == "is_localization") {
        LocalizationWitness w = is_localization_map(map(str(t, "map")));
        result["holds"] = w.holds;
        if (!w.holds) result["reason"] = w.reason;
        if (t.contains("expect")) checks["expected"] = w.holds == t.at("expect").get<bool>();
    } else if (kind == "universal") {
        const FiniteDiagram& d = diagram(str(t, "diagram"));
        const SpacePtr& y = space(str(t, "test_space"));
        const std::string flavor = t.contains("flavor") ? str(t, "flavor") : "lrs";
        UniversalReport r = flavor == "rs" ? check_universal_property(rs_limit(d), d, y)
                                           : check_universal_property(lrs_limit(d), d, y);
        result["cones"] = r.cones;
        if (!r.holds()) result["failure"] = r.first_failure;
        checks["universal_property"] = r.holds();
    } else if (kind == "relspec_limits") {
        std::vector<AlgebraOverSheaf> parts;
        for (const auto& n : names(t, "sheaves")) parts.push_back(sheaf(n));
        IsoReport r = relspec_limits_check(parts);
        result["detail"] = r.detail;
        checks["isomorphic"] = r.holds;
    } else if (kind == "base_change") {
        IsoReport r = base_change_check(morphism(str(t, "morphism")), sheaf(str(t, "sheaf")));
        result["detail"] = r.detail;
        checks["isomorphic"] = r.holds;
    } else if (kind == "affine_agreement") {
        IsoReport r = affine_agreement_check(map(str(t, "map")));
        result["detail"] = r.detail;
        checks["isomorphic"] = r.holds;
    } else if (kind == "lemma_chain") {
        LemmaChainReport r = spec_lemma_chain(algebra(str(t, "algebra")));
        checks["local_system_pullback"] = r.local_system_pullback;
        checks["retraction"] = r.retraction;
        checks["constant_sheaf"] = r.constant_sheaf;
    } else if (kind == "rational") {
        const SpaceMorphism& f = morphism(str(t, "morphism"));
        const bool r = is_rational(f, f.source->space().index_of(str(t, "point")));
        result["rational"] = r;
        if (t.contains("expect")) checks["expected"] = r == t.at("expect").get<bool>();
    } else if (kind == "s_set") {
        SSet s = s_set(algebra(str(t, "base")), algebra(str(t, "left")), algebra(str(t, "right")));
        result["size"] = s.primes.size();
        checks["closed"] = s.closed;
        if (s.residue_match) checks["residue_match"] = *s.residue_match;
        if (t.contains("expect")) checks["expected_size"] = s.primes.size() == t.at("expect").get<std::size_t>();
    } else if (kind == "isomorphic") {
        const bool r = find_space_isomorphism(space(str(t, "left")), space(str(t, "right"))).has_value();
        result["isomorphic"] = r;
        checks["expected"] = r == t.value("expect", true);
    } else if (kind == "lrs") {
        const bool r = is_lrs_morphism(morphism(str(t, "morphism")));
        result["lrs"] = r;
        if (t.contains("expect")) checks["expected"] = r == t.at("expect").get<bool>();
    } else {
        throw ParseError("unknown check \"" + kind + "\"");
    }
    return result;
}

int exit_code_of(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const EnumerationBudgetExceeded*>(&e) || dynamic_cast<const WordProblemBudgetExceeded*>(&e))
        return kExitBudget;
    return kExitValidation;
}

std::string error_kind(int code) {
    switch (code) {
        case kExitParse:
            return "ParseError";
        case kExitBudget:
            return "BudgetExceeded";
        default:
            return "ValidationError";
    }
}

}  // namespace

SceneResult run_scene(const json& scene, const std::optional<std::string>& only_task) {
    SceneResult out;
    json tasks = json::array();
    auto fail = [&](const std::exception& e) {
        out.exit_code = exit_code_of(e);
        out.report["error"] = {{"kind", error_kind(out.exit_code)}, {"message", e.what()}};
    };
    try {
        ScopedBudget guard(budget_from(scene.is_object() && scene.contains("limits") ? scene.at("limits") : json()));
        Scene s(scene);
        s.resolve_all();
        bool matched = !only_task;
        if (scene.contains("tasks"))
            for (std::size_t i = 0; i < scene.at("tasks").size(); ++i) {
                const json& t = scene.at("tasks")[i];
                const std::string name = t.is_object() && t.contains("name") && t.at("name").is_string()
                                             ? t.at("name").get<std::string>()
                                             : "task" + std::to_string(i);
                if (only_task && *only_task != name) continue;
                matched = true;
                json entry = s.run_task(t, out.dots);
                entry["name"] = name;
                if (entry["status"] != "pass") out.exit_code = kExitCheckFailed;
                tasks.push_back(std::move(entry));
            }
        if (!matched) throw ValidationError("no task named \"" + *only_task + "\"");
    } catch (const Error& e) {
        fail(e);
    } catch (const json::exception& e) {
        fail(ParseError(e.what()));
    }
    out.report["tasks"] = std::move(tasks);
    if (scene.is_object() && scene.contains("name")) out.report["scene"] = scene.at("name");
    out.report["status"] = out.exit_code == kExitOk ? "pass" : "fail";
    out.report["exit_code"] = out.exit_code;
    return out;
}

SceneResult run_scene_text(const std::string& text, const std::optional<std::string>& only_task) {
    json scene;
    try {
        scene = json::parse(text);
    } catch (const json::parse_error& e) {
        SceneResult out;
        out.exit_code = kExitParse;
        out.report = {{"error", {{"kind", "ParseError"}, {"message", e.what()}}},
                      {"tasks", json::array()},
                      {"status", "fail"},
                      {"exit_code", kExitParse}};
        return out;
    }
    return run_scene(scene, only_task);
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace locus
