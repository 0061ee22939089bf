#include <algorithm>
#include <map>

#include "locus/algebra.hpp"
#include "locus/budget.hpp"
#include "locus/error.hpp"

namespace locus {

namespace {

std::optional<std::vector<int>> extend_ring(const FiniteRing& a, const FiniteRing& b, const std::vector<int>& gens,
                                            const std::vector<int>& imgs) {
    const int n = a.size();
    std::vector<int> table(static_cast<std::size_t>(n), -1);
    std::vector<int> known;
    auto assign = [&](int x, int y) {
        int& t = table[static_cast<std::size_t>(x)];
        if (t < 0) {
            t = y;
            known.push_back(x);
            return true;
        }
        return t == y;
    };
    if (!assign(0, 0) || !assign(a.one(), b.one())) return std::nullopt;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!assign(gens[i], imgs[i])) return std::nullopt;
    for (std::size_t i = 0; i < known.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            int x = known[i], y = known[j];
            int tx = table[static_cast<std::size_t>(x)], ty = table[static_cast<std::size_t>(y)];
            if (!assign(a.add(x, y), b.add(tx, ty))) return std::nullopt;
            if (!assign(a.mul(x, y), b.mul(tx, ty))) return std::nullopt;
        }
    if (static_cast<int>(known.size()) != n) return std::nullopt;
    return table;
}

std::vector<AlgebraMap> ring_homs(const Algebra& a, const Algebra& b) {
    const auto& ra = a.ring();
    const auto& rb = b.ring();
    const std::vector<int> gens = ring_generators(ra);
    const std::size_t limit = budget().hom_candidates;
    std::vector<AlgebraMap> out;
    std::vector<int> imgs(gens.size(), 0);
    std::size_t candidates = 0;
    while (true) {
        if (++candidates > limit) throw EnumerationBudgetExceeded("ring hom enumeration exceeds the candidate budget");
        if (auto t = extend_ring(ra, rb, gens, imgs)) out.emplace_back(a, b, std::move(*t));
        std::size_t k = gens.size();
        while (k > 0) {
            --k;
            if (++imgs[k] < rb.size()) break;
            imgs[k] = 0;
            if (k == 0) return out;
        }
        if (gens.empty()) return out;
    }
}

std::vector<AlgebraMap> monoid_homs(const Algebra& a, const Algebra& b) {
    const auto& ma = a.monoid();
    const auto& mb = b.monoid();
    const std::vector<Word> cands = mb.elements_up_to(budget().monoid_hom_degree);
    const int n = ma.ngens();
    // relations become checkable once their largest generator is assigned
    std::vector<std::vector<const Relation*>> due(static_cast<std::size_t>(std::max(n, 1)));
    for (const auto& r : ma.relations()) {
        std::uint64_t s = support(r.lhs) | support(r.rhs);
        if (s == 0) continue;
        int top = 63 - __builtin_clzll(s);
        due[static_cast<std::size_t>(top)].push_back(&r);
    }
    const std::size_t limit = budget().hom_candidates;
    std::size_t nodes = 0;
    std::vector<AlgebraMap> out;
    std::vector<Word> imgs(static_cast<std::size_t>(n));
    auto image = [&](const Word& w) {
        Word acc = mb.zero();
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] != 0)
                for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w[i] * imgs[i][k];
        return mb.normal_form(std::move(acc));
    };
    auto rec = [&](auto&& self, int g) -> void {
        if (g == n) {
            out.emplace_back(a, b, imgs);
            return;
        }
        for (const auto& c : cands) {
            if (++nodes > limit) throw EnumerationBudgetExceeded("monoid hom enumeration exceeds the candidate budget");
            imgs[static_cast<std::size_t>(g)] = c;
            bool ok = true;
            for (const Relation* r : due[static_cast<std::size_t>(g)])
                if (image(r->lhs) != image(r->rhs)) {
                    ok = false;
                    break;
                }
            if (ok) self(self, g + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

std::vector<AlgebraMap> hom_set(const Algebra& a, const Algebra& b) {
    if (a.is_ring() != b.is_ring()) return {};
    return a.is_ring() ? ring_homs(a, b) : monoid_homs(a, b);
}

std::optional<AlgebraMap> extend_hom(const Algebra& a, const std::vector<Elem>& gens, const std::vector<Elem>& images,
                                     const Algebra& b) {
    if (gens.size() != images.size()) throw InvalidParameter("one image per generator required");
    if (a.is_ring()) {
        std::vector<int> g, im;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            g.push_back(static_cast<int>(gens[i].at(0)));
            im.push_back(static_cast<int>(images[i].at(0)));
        }
        auto t = extend_ring(a.ring(), b.ring(), g, im);
        if (!t) return std::nullopt;
        return AlgebraMap(a, b, std::move(*t));
    }
    if (static_cast<int>(gens.size()) != a.monoid().ngens()) throw InvalidParameter("monoid maps are given on generators");
    std::vector<Word> imgs(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i] != a.monoid().generator(static_cast<int>(i)))
            throw InvalidParameter("monoid maps are given on generators");
        imgs[i] = images[i];
    }
    AlgebraMap f(a, b, std::move(imgs));
    if (!f.is_homomorphism()) return std::nullopt;
    return f;
}

std::optional<AlgebraMap> inverse_map(const AlgebraMap& f) {
    const Algebra& a = f.source();
    const Algebra& b = f.target();
    if (a.is_ring()) {
        const int n = a.ring().size();
        if (b.ring().size() != n) return std::nullopt;
        std::vector<int> inv(static_cast<std::size_t>(n), -1);
        for (int x = 0; x < n; ++x) {
            int y = f.apply(x);
            if (inv[static_cast<std::size_t>(y)] >= 0) return std::nullopt;
            inv[static_cast<std::size_t>(y)] = x;
        }
        return AlgebraMap(b, a, std::move(inv));
    }
    const AlgebraMap id_a = AlgebraMap::identity(a);
    if (f == id_a) return id_a;
    if (a.primes().size() != b.primes().size()) return std::nullopt;
    // preimages of the target generators among short source words
    std::map<Word, Word> pre;
    for (const auto& w : a.monoid().elements_up_to(budget().monoid_hom_degree)) pre.emplace(f.apply_word(w), w);
    std::vector<Word> imgs;
    for (int g = 0; g < b.monoid().ngens(); ++g) {
        auto it = pre.find(b.monoid().normal_form(b.monoid().generator(g)));
        if (it == pre.end()) return std::nullopt;
        imgs.push_back(it->second);
    }
    AlgebraMap g(b, a, std::move(imgs));
    if (!g.is_homomorphism() || compose(g, f) != id_a || compose(f, g) != AlgebraMap::identity(b)) return std::nullopt;
    return g;
}

std::optional<AlgebraMap> find_isomorphism(const Algebra& a, const Algebra& b) {
    if (a.is_ring() != b.is_ring()) return std::nullopt;
    if (a.same(b)) return AlgebraMap::identity(a);
    if (a.is_ring() && a.ring().size() != b.ring().size()) return std::nullopt;
    if (a.is_monoid() && a.primes().size() != b.primes().size()) return std::nullopt;
    for (const auto& f : hom_set(a, b))
        if (auto g = inverse_map(f)) return f;
    return std::nullopt;
}

LocalizationWitness is_localization_map(const AlgebraMap& f) {
    const Algebra& a = f.source();
    const Algebra& b = f.target();
    LocalizationWitness w;
    if (a.is_ring()) {
        const auto& ra = a.ring();
        const auto& rb = b.ring();
        const int n = ra.size();
        w.set.assign(static_cast<std::size_t>(n), 0);
        std::vector<int> s;
        for (int x = 0; x < n; ++x)
            if (rb.is_unit(f.apply(x))) {
                w.set[static_cast<std::size_t>(x)] = 1;
                s.push_back(x);
            }
        for (int y = 0; y < rb.size(); ++y) {
            bool hit = false;
            for (int t : s) {
                int lhs = rb.mul(y, f.apply(t));
                for (int x = 0; x < n && !hit; ++x)
                    if (f.apply(x) == lhs) hit = true;
                if (hit) break;
            }
            if (!hit) {
                w.reason = "element " + std::to_string(y) + " of the target is not a fraction";
                return w;
            }
        }
        for (int x = 0; x < n; ++x) {
            if (f.apply(x) != 0) continue;
            bool killed = std::any_of(s.begin(), s.end(), [&](int t) { return ra.mul(t, x) == 0; });
            if (!killed) {
                w.reason = "kernel element " + std::to_string(x) + " is not annihilated by the set";
                return w;
            }
        }
        w.holds = true;
        return w;
    }
    for (std::size_t g = 0; g < f.images().size(); ++g)
        if (b.monoid().is_unit(f.images()[g])) w.face |= std::uint64_t{1} << g;
    const auto& faces = a.monoid().faces();
    if (std::find(faces.begin(), faces.end(), w.face) == faces.end()) {
        w.reason = "preimage of the units is not a face";
        return w;
    }
    Localization loc = localize_at_face(a, w.face);
    AlgebraMap h = lift_through_localization(loc, f);
    if (!inverse_map(h)) {
        w.reason = "induced map from the localization is not an isomorphism";
        return w;
    }
    w.holds = true;
    return w;
}

AlgebraMap lift_through_quotient(const Quotient& q, const AlgebraMap& g) {
    const Algebra& a = q.projection.source();
    if (!g.source().same(a)) throw NotAMap("map does not start at the quotiented algebra");
    if (a.is_ring()) {
        std::vector<int> table(static_cast<std::size_t>(q.object.ring().size()), -1);
        for (int x = 0; x < a.ring().size(); ++x) {
            int& t = table[static_cast<std::size_t>(q.projection.apply(x))];
            if (t >= 0 && t != g.apply(x)) throw NotAMap("map is not constant on cosets");
            t = g.apply(x);
        }
        return AlgebraMap(q.object, g.target(), std::move(table));
    }
    AlgebraMap h(q.object, g.target(), g.images());
    if (!h.is_homomorphism()) throw NotAMap("map does not respect the congruence");
    return h;
}

AlgebraMap residue_map(const AlgebraMap& f) {
    if (!is_local_hom(f)) throw NotLocal("residue map of a non-local homomorphism");
    Quotient qa = residue(f.source());
    Quotient qb = residue(f.target());
    return lift_through_quotient(qa, compose(qb.projection, f));
}

std::optional<AlgebraMap> mediating_map(const Algebra& colim, const std::vector<AlgebraMap>& insertions,
                                        const std::vector<AlgebraMap>& cocone) {
    if (insertions.size() != cocone.size() || cocone.empty()) throw InvalidParameter("one cocone leg per insertion");
    const Algebra& c = cocone.front().target();
    if (colim.is_ring()) {
        std::vector<Elem> gens, imgs;
        std::vector<char> seen(static_cast<std::size_t>(colim.ring().size()), 0);
        for (std::size_t i = 0; i < insertions.size(); ++i)
            for (int x = 0; x < insertions[i].source().ring().size(); ++x) {
                const int y = insertions[i].apply(x);
                const int img = cocone[i].apply(x);
                if (seen[static_cast<std::size_t>(y)]) {
                    for (std::size_t k = 0; k < gens.size(); ++k)
                        if (gens[k][0] == y && imgs[k][0] != img) return std::nullopt;
                    continue;
                }
                seen[static_cast<std::size_t>(y)] = 1;
                gens.push_back({y});
                imgs.push_back({img});
            }
        return extend_hom(colim, gens, imgs, c);
    }
    const auto& m = colim.monoid();
    std::vector<Word> imgs;
    for (int g = 0; g < m.ngens(); ++g) {
        const Word target = m.normal_form(m.generator(g));
        std::optional<Word> img;
        for (std::size_t i = 0; i < insertions.size() && !img; ++i) {
            const auto& src = insertions[i].source().monoid();
            for (int h = 0; h < src.ngens(); ++h)
                if (insertions[i].images()[static_cast<std::size_t>(h)] == target) {
                    img = cocone[i].images()[static_cast<std::size_t>(h)];
                    break;
                }
        }
        if (!img) throw GeneratorExtractionFailed("colimit generator is not the image of a generator");
        imgs.push_back(*img);
    }
    AlgebraMap h(colim, c, std::move(imgs));
    if (!h.is_homomorphism()) return std::nullopt;
    for (std::size_t i = 0; i < insertions.size(); ++i)
        if (compose(h, insertions[i]) != cocone[i]) return std::nullopt;
    return h;
}

}  // namespace locus
