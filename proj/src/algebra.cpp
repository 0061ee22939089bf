#include "locus/algebra.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "locus/budget.hpp"
#include "locus/error.hpp"

namespace locus {

namespace {

bool is_nilpotent(const FiniteRing& r, int x) {
    int p = x;
    for (int i = 0; i <= r.size(); ++i) {
        if (p == 0) return true;
        p = r.mul(p, x);
    }
    return false;
}

std::vector<Prime> ring_primes(const FiniteRing& r) {
    std::vector<int> idempotents;
    for (int e = 1; e < r.size(); ++e)
        if (r.mul(e, e) == e) idempotents.push_back(e);
    std::vector<char> nil(static_cast<std::size_t>(r.size()));
    for (int x = 0; x < r.size(); ++x) nil[static_cast<std::size_t>(x)] = is_nilpotent(r, x);
    std::vector<Prime> primes;
    for (int e : idempotents) {
        bool primitive = true;
        for (int f : idempotents)
            if (f != e && r.mul(f, e) == f) primitive = false;
        if (!primitive) continue;
        Prime p;
        p.member_mask.assign(static_cast<std::size_t>(r.size()), 0);
        for (int a = 0; a < r.size(); ++a)
            if (nil[static_cast<std::size_t>(r.mul(a, e))]) {
                p.member_mask[static_cast<std::size_t>(a)] = 1;
                p.members.push_back(a);
            }
        primes.push_back(std::move(p));
    }
    std::sort(primes.begin(), primes.end(), [](const Prime& a, const Prime& b) { return a.members < b.members; });
    return primes;
}

std::vector<Prime> monoid_primes(const Monoid& m) {
    std::vector<Prime> primes;
    for (auto f : m.faces()) {
        Prime p;
        p.face = f;
        primes.push_back(std::move(p));
    }
    return primes;
}

std::vector<int> subring_closure(const FiniteRing& r, std::vector<char>& in) {
    std::vector<int> elems;
    for (int x = 0; x < r.size(); ++x)
        if (in[static_cast<std::size_t>(x)]) elems.push_back(x);
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            int x = elems[i], y = elems[j];
            for (int z : {r.add(x, y), r.mul(x, y)})
                if (!in[static_cast<std::size_t>(z)]) {
                    in[static_cast<std::size_t>(z)] = 1;
                    elems.push_back(z);
                }
        }
    return elems;
}

int ring_index(const Elem& e) { return static_cast<int>(e.at(0)); }

}  // namespace

std::vector<int> ring_generators(const FiniteRing& r) {
    std::vector<char> in(static_cast<std::size_t>(r.size()), 0);
    in[0] = 1;
    in[static_cast<std::size_t>(r.one())] = 1;
    subring_closure(r, in);
    std::vector<int> gens;
    for (int x = 0; x < r.size(); ++x) {
        if (in[static_cast<std::size_t>(x)]) continue;
        gens.push_back(x);
        in[static_cast<std::size_t>(x)] = 1;
        subring_closure(r, in);
    }
    return gens;
}

Algebra::Algebra(FiniteRing r) : ring_(std::make_shared<const FiniteRing>(std::move(r))) {
    primes_ = std::make_shared<const std::vector<Prime>>(ring_primes(*ring_));
    std::vector<Elem> gens;
    for (int g : ring_generators(*ring_)) gens.push_back({g});
    generators_ = std::make_shared<const std::vector<Elem>>(std::move(gens));
}

Algebra::Algebra(Monoid m) : monoid_(std::make_shared<const Monoid>(std::move(m))) {
    primes_ = std::make_shared<const std::vector<Prime>>(monoid_primes(*monoid_));
    std::vector<Elem> gens;
    for (int i = 0; i < monoid_->ngens(); ++i) gens.push_back(monoid_->generator(i));
    generators_ = std::make_shared<const std::vector<Elem>>(std::move(gens));
}

const FiniteRing& Algebra::ring() const {
    if (!ring_) throw UnsupportedAlgebra("algebra is not a ring");
    return *ring_;
}

const Monoid& Algebra::monoid() const {
    if (!monoid_) throw UnsupportedAlgebra("algebra is not a monoid");
    return *monoid_;
}

const std::string& Algebra::name() const { return ring_ ? ring_->name() : monoid_->name(); }

const nlohmann::json& Algebra::source() const { return ring_ ? ring_->source() : monoid_->source(); }

bool Algebra::same(const Algebra& other) const {
    if (ring_ && other.ring_) return ring_ == other.ring_ || ring_->same_tables(*other.ring_);
    if (monoid_ && other.monoid_) return monoid_ == other.monoid_ || monoid_->same_presentation(*other.monoid_);
    return false;
}

bool Algebra::is_local() const { return monoid_ ? true : primes_->size() == 1; }

int Algebra::maximal_prime() const {
    if (!is_local()) throw NotLocal(name() + " is not local");
    return static_cast<int>(primes_->size()) - 1;
}

int Algebra::find_prime(const Prime& p) const {
    for (std::size_t i = 0; i < primes_->size(); ++i) {
        const auto& q = (*primes_)[i];
        if (ring_ ? q.members == p.members : q.face == p.face) return static_cast<int>(i);
    }
    throw UnknownPrime("not a prime of " + name());
}

bool Algebra::in_prime(int prime, const Elem& e) const {
    const auto& p = primes_->at(static_cast<std::size_t>(prime));
    if (ring_) return p.member_mask[static_cast<std::size_t>(ring_index(e))] != 0;
    return (support(e) & ~p.face) != 0;
}

Elem Algebra::unit() const {
    if (ring_) return {ring_->one()};
    return monoid_->zero();
}

Elem Algebra::op(const Elem& a, const Elem& b) const {
    if (ring_) return {ring_->mul(ring_index(a), ring_index(b))};
    return monoid_->add(a, b);
}

bool Algebra::is_unit(const Elem& e) const {
    if (ring_) return ring_->is_unit(ring_index(e));
    return monoid_->is_unit(e);
}

Elem Algebra::normalize(const Elem& e) const {
    if (ring_) {
        if (e.size() != 1 || e[0] < 0 || e[0] >= ring_->size()) throw InvalidParameter("ring element out of range");
        return e;
    }
    return monoid_->normal_form(e);
}

std::string Algebra::format(const Elem& e) const {
    if (ring_) return std::to_string(e.at(0));
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (e[i] != 1) s += std::to_string(e[i]);
        s += "g" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

std::string Algebra::summary() const {
    if (ring_) return ring_->name() + " (" + std::to_string(ring_->size()) + ")";
    return monoid_->name();
}

std::vector<Elem> Algebra::sample_elements() const {
    std::vector<Elem> out;
    if (ring_) {
        for (int x = 0; x < ring_->size(); ++x) out.push_back({x});
        return out;
    }
    for (auto& w : monoid_->elements_up_to(budget().monoid_hom_degree)) out.push_back(std::move(w));
    return out;
}

Algebra zero_ring() { return Algebra(build_zmod(1)); }

Algebra trivial_monoid() { return Algebra(build_trivial_monoid()); }

Algebra terminal_like(const Algebra& a) { return a.is_ring() ? zero_ring() : trivial_monoid(); }

AlgebraMap::AlgebraMap(Algebra src, Algebra dst, std::vector<int> table)
    : src_(std::move(src)), dst_(std::move(dst)), table_(std::move(table)) {
    if (!src_.is_ring() || !dst_.is_ring()) throw NotAMap("table maps need ring source and target");
    if (static_cast<int>(table_.size()) != src_.ring().size()) throw NotAMap("map table has wrong size");
    for (int v : table_)
        if (v < 0 || v >= dst_.ring().size()) throw NotAMap("map table entry out of range");
}

AlgebraMap::AlgebraMap(Algebra src, Algebra dst, std::vector<Word> images)
    : src_(std::move(src)), dst_(std::move(dst)), images_(std::move(images)) {
    if (!src_.is_monoid() || !dst_.is_monoid()) throw NotAMap("generator maps need monoid source and target");
    if (static_cast<int>(images_.size()) != src_.monoid().ngens()) throw NotAMap("one image per generator required");
    for (auto& w : images_) w = dst_.monoid().normal_form(w);
}

AlgebraMap AlgebraMap::identity(const Algebra& a) {
    if (a.is_ring()) {
        std::vector<int> t(static_cast<std::size_t>(a.ring().size()));
        for (int i = 0; i < a.ring().size(); ++i) t[static_cast<std::size_t>(i)] = i;
        return AlgebraMap(a, a, std::move(t));
    }
    std::vector<Word> imgs;
    for (int i = 0; i < a.monoid().ngens(); ++i) imgs.push_back(a.monoid().generator(i));
    return AlgebraMap(a, a, std::move(imgs));
}

Elem AlgebraMap::apply(const Elem& e) const {
    if (src_.is_ring()) return {table_.at(static_cast<std::size_t>(e.at(0)))};
    return apply_word(e);
}

Word AlgebraMap::apply_word(const Word& w) const {
    const auto& m = dst_.monoid();
    Word acc = m.zero();
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0)
            for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w[i] * images_[i][k];
    return m.normal_form(std::move(acc));
}

bool AlgebraMap::is_homomorphism() const {
    if (src_.is_ring()) {
        const auto& a = src_.ring();
        const auto& b = dst_.ring();
        if (apply(a.one()) != b.one() || apply(0) != 0) return false;
        for (int x = 0; x < a.size(); ++x)
            for (int y = 0; y < a.size(); ++y) {
                if (apply(a.add(x, y)) != b.add(apply(x), apply(y))) return false;
                if (apply(a.mul(x, y)) != b.mul(apply(x), apply(y))) return false;
            }
        return true;
    }
    for (const auto& r : src_.monoid().relations())
        if (apply_word(r.lhs) != apply_word(r.rhs)) return false;
    return true;
}

bool AlgebraMap::operator==(const AlgebraMap& other) const {
    return src_.same(other.src_) && dst_.same(other.dst_) && table_ == other.table_ && images_ == other.images_;
}

AlgebraMap compose(const AlgebraMap& g, const AlgebraMap& f) {
    if (!f.target().same(g.source())) throw NotAMap("maps are not composable");
    if (f.source().is_ring()) {
        std::vector<int> t(f.table().size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = g.apply(f.table()[i]);
        return AlgebraMap(f.source(), g.target(), std::move(t));
    }
    std::vector<Word> imgs;
    for (const auto& w : f.images()) imgs.push_back(g.apply_word(w));
    return AlgebraMap(f.source(), g.target(), std::move(imgs));
}

int preimage_prime(const AlgebraMap& f, int prime) {
    const auto& q = f.target().primes().at(static_cast<std::size_t>(prime));
    Prime p;
    if (f.source().is_ring()) {
        const int n = f.source().ring().size();
        p.member_mask.assign(static_cast<std::size_t>(n), 0);
        for (int a = 0; a < n; ++a)
            if (q.member_mask[static_cast<std::size_t>(f.apply(a))]) {
                p.member_mask[static_cast<std::size_t>(a)] = 1;
                p.members.push_back(a);
            }
    } else {
        for (std::size_t g = 0; g < f.images().size(); ++g)
            if ((support(f.images()[g]) & ~q.face) == 0) p.face |= std::uint64_t{1} << g;
    }
    return f.source().find_prime(p);
}

bool is_local_hom(const AlgebraMap& f) {
    return preimage_prime(f, f.target().maximal_prime()) == f.source().maximal_prime();
}

Localization localize_ring(const Algebra& a, const std::vector<char>& s) {
    const auto& r = a.ring();
    const int n = r.size();
    if (static_cast<int>(s.size()) != n) throw InvalidParameter("multiplicative set mask has wrong size");
    bool all_units = true;
    for (int x = 0; x < n; ++x)
        if (s[static_cast<std::size_t>(x)] && !r.is_unit(x)) all_units = false;
    if (all_units) {
        std::vector<std::pair<int, int>> fr;
        for (int x = 0; x < n; ++x) fr.emplace_back(x, r.one());
        return {a, AlgebraMap::identity(a), std::move(fr), {}};
    }
    std::vector<int> denominators{r.one()};
    int ustar = r.one();
    for (int x = 0; x < n; ++x)
        if (s[static_cast<std::size_t>(x)]) {
            ustar = r.mul(ustar, x);
            if (x != r.one()) denominators.push_back(x);
        }
    auto equivalent = [&](std::pair<int, int> p, std::pair<int, int> q) {
        int diff = r.sub(r.mul(p.first, q.second), r.mul(q.first, p.second));
        return r.mul(ustar, diff) == 0;
    };
    std::vector<std::pair<int, int>> reps;
    std::map<std::pair<int, int>, int> cls;
    for (int d : denominators)
        for (int x = 0; x < n; ++x) {
            std::pair<int, int> p{x, d};
            int found = -1;
            for (std::size_t c = 0; c < reps.size(); ++c)
                if (equivalent(p, reps[c])) {
                    found = static_cast<int>(c);
                    break;
                }
            if (found < 0) {
                found = static_cast<int>(reps.size());
                reps.push_back(p);
            }
            cls[p] = found;
        }
    const int m = static_cast<int>(reps.size());
    auto class_of = [&](int num, int den) {
        // den is a product of elements of S; find an equivalent stored pair
        auto it = cls.find({num, den});
        if (it != cls.end()) return it->second;
        for (int c = 0; c < m; ++c)
            if (equivalent({num, den}, reps[static_cast<std::size_t>(c)])) return c;
        throw InvalidParameter("fraction outside the localization");
    };
    std::vector<std::vector<int>> add(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
    auto mul = add;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            auto [a1, s1] = reps[static_cast<std::size_t>(i)];
            auto [a2, s2] = reps[static_cast<std::size_t>(j)];
            int den = r.mul(s1, s2);
            add[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                class_of(r.add(r.mul(a1, s2), r.mul(a2, s1)), den);
            mul[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = class_of(r.mul(a1, a2), den);
        }
    Algebra target(build_table_ring(m, class_of(r.one(), r.one()), add, mul));
    std::vector<int> table(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) table[static_cast<std::size_t>(x)] = class_of(x, r.one());
    return {target, AlgebraMap(a, target, std::move(table)), std::move(reps), {}};
}

Localization localize_at_face(const Algebra& a, std::uint64_t face) {
    const auto& m = a.monoid();
    const int n = m.ngens();
    std::vector<int> inverted;
    for (int g = 0; g < n; ++g)
        if (((face >> g) & 1) && !((m.unit_face() >> g) & 1)) inverted.push_back(g);
    if (inverted.empty()) return {a, AlgebraMap::identity(a), {}, {}};
    const int total = n + static_cast<int>(inverted.size());
    auto widen = [&](const Word& w) {
        Word x(static_cast<std::size_t>(total), 0);
        std::copy(w.begin(), w.end(), x.begin());
        return x;
    };
    std::vector<Relation> rels;
    for (const auto& r : m.relations()) rels.push_back({widen(r.lhs), widen(r.rhs)});
    for (std::size_t j = 0; j < inverted.size(); ++j) {
        Word lhs(static_cast<std::size_t>(total), 0);
        lhs[static_cast<std::size_t>(inverted[j])] = 1;
        lhs[static_cast<std::size_t>(n) + j] = 1;
        rels.push_back({lhs, Word(static_cast<std::size_t>(total), 0)});
    }
    std::vector<std::vector<std::int64_t>> emb;
    if (!m.embedding().empty()) {
        emb = m.embedding();
        for (int g : inverted) {
            auto v = m.embedding()[static_cast<std::size_t>(g)];
            for (auto& c : v) c = -c;
            emb.push_back(v);
        }
    }
    Algebra target(build_presented_monoid(total, rels, emb));
    std::vector<Word> imgs;
    for (int g = 0; g < n; ++g) imgs.push_back(target.monoid().generator(g));
    return {target, AlgebraMap(a, target, std::move(imgs)), {}, std::move(inverted)};
}

Localization localize_at_prime(const Algebra& a, int prime) {
    const auto& p = a.primes().at(static_cast<std::size_t>(prime));
    if (a.is_monoid()) return localize_at_face(a, p.face);
    std::vector<char> s(p.member_mask.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = !p.member_mask[i];
    return localize_ring(a, s);
}

AlgebraMap lift_through_localization(const Localization& loc, const AlgebraMap& g) {
    if (!g.source().same(loc.map.source())) throw NotAMap("map does not start at the localized algebra");
    const Algebra& c = g.target();
    if (loc.object.is_ring()) {
        const auto& r = c.ring();
        std::vector<int> table;
        for (auto [num, den] : loc.fractions) {
            int inv = r.inverse(g.apply(den));
            if (inv < 0) throw NotAMap("map does not invert the multiplicative set");
            table.push_back(r.mul(g.apply(num), inv));
        }
        AlgebraMap h(loc.object, c, std::move(table));
        if (!h.is_homomorphism()) throw NotAMap("induced map is not a homomorphism");
        return h;
    }
    std::vector<Word> imgs = g.images();
    for (int src_gen : loc.inverted) {
        const Word& w = g.images()[static_cast<std::size_t>(src_gen)];
        if (!c.monoid().is_unit(w)) throw NotAMap("map does not invert the face");
        imgs.push_back(c.monoid().inverse(w));
    }
    return AlgebraMap(loc.object, c, std::move(imgs));
}

Quotient quotient_by_ideal(const Algebra& a, const std::vector<int>& generators) {
    const auto& r = a.ring();
    const int n = r.size();
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    std::vector<int> ideal{0};
    in[0] = 1;
    for (int g : generators)
        for (int x = 0; x < n; ++x) {
            int y = r.mul(x, g);
            if (!in[static_cast<std::size_t>(y)]) {
                in[static_cast<std::size_t>(y)] = 1;
                ideal.push_back(y);
            }
        }
    for (std::size_t i = 0; i < ideal.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            int y = r.add(ideal[i], ideal[j]);
            if (!in[static_cast<std::size_t>(y)]) {
                in[static_cast<std::size_t>(y)] = 1;
                ideal.push_back(y);
            }
        }
    if (ideal.size() == 1) return {a, AlgebraMap::identity(a)};
    std::vector<int> cls(static_cast<std::size_t>(n), -1);
    std::vector<int> reps;
    for (int x = 0; x < n; ++x) {
        if (cls[static_cast<std::size_t>(x)] >= 0) continue;
        for (int i : ideal) cls[static_cast<std::size_t>(r.add(x, i))] = static_cast<int>(reps.size());
        reps.push_back(x);
    }
    const int m = static_cast<int>(reps.size());
    std::vector<std::vector<int>> add(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m)));
    auto mul = add;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int x = reps[static_cast<std::size_t>(i)], y = reps[static_cast<std::size_t>(j)];
            add[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cls[static_cast<std::size_t>(r.add(x, y))];
            mul[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cls[static_cast<std::size_t>(r.mul(x, y))];
        }
    Algebra q(build_table_ring(m, cls[static_cast<std::size_t>(r.one())], add, mul));
    return {q, AlgebraMap(a, q, cls)};
}

Quotient quotient_by_congruence(const Algebra& a, const std::vector<std::pair<Word, Word>>& pairs) {
    const auto& m = a.monoid();
    std::vector<Relation> rels = m.relations();
    bool changed = false;
    for (const auto& [u, v] : pairs)
        if (!m.equal(u, v)) {
            rels.push_back({u, v});
            changed = true;
        }
    if (!changed) return {a, AlgebraMap::identity(a)};
    Algebra q(build_presented_monoid(m.ngens(), rels));
    std::vector<Word> imgs;
    for (int g = 0; g < m.ngens(); ++g) imgs.push_back(q.monoid().generator(g));
    return {q, AlgebraMap(a, q, std::move(imgs))};
}

Quotient residue(const Algebra& a) {
    if (a.is_ring()) return quotient_by_ideal(a, a.primes().at(static_cast<std::size_t>(a.maximal_prime())).members);
    const auto& m = a.monoid();
    std::vector<std::pair<Word, Word>> pairs;
    for (int g = 0; g < m.ngens(); ++g)
        if ((m.unit_face() >> g) & 1) pairs.emplace_back(m.generator(g), m.zero());
    return quotient_by_congruence(a, pairs);
}

bool is_face(const Algebra& a, const std::vector<Word>& words) {
    const auto& m = a.monoid();
    std::uint64_t g = 0;
    for (const auto& w : words) g |= support(m.normal_form(w));
    // Smallest face containing these generators.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : m.relations()) {
            std::uint64_t su = support(r.lhs), sv = support(r.rhs);
            if ((su & ~g) == 0 && (sv & ~g) != 0) {
                g |= sv;
                changed = true;
            }
            if ((sv & ~g) == 0 && (su & ~g) != 0) {
                g |= su;
                changed = true;
            }
        }
    }
    // The submonoid is that face iff it contains each of the face's generators.
    std::vector<Word> gens;
    for (const auto& w : words) gens.push_back(m.normal_form(w));
    const int bound = std::max(4, budget().monoid_hom_degree * 2);
    for (int x = 0; x < m.ngens(); ++x) {
        if (!((g >> x) & 1)) continue;
        const Word target = m.generator(x);
        std::set<Word> seen{m.zero()};
        std::vector<Word> frontier{m.zero()};
        bool found = false;
        for (int depth = 0; depth < bound && !found && !frontier.empty(); ++depth) {
            std::vector<Word> next;
            for (const auto& w : frontier)
                for (const auto& s : gens) {
                    Word y = m.add(w, s);
                    if (y == m.normal_form(target)) found = true;
                    if (seen.insert(y).second) next.push_back(y);
                }
            frontier = std::move(next);
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace locus
