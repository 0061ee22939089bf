#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "locus/algebra.hpp"
#include "locus/error.hpp"

namespace locus {

namespace {

constexpr std::int64_t kMaxTensorSize = 4096;

using IVec = std::vector<std::int64_t>;

std::int64_t mod(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    std::int64_t x1 = 0, y1 = 0;
    std::int64_t g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Additive generators of a finite ring with a coefficient vector for each
// element and generators of the relation lattice.
struct AdditiveBasis {
    std::vector<int> gens;
    std::vector<IVec> rep;
    std::vector<IVec> relations;
};

AdditiveBasis additive_basis(const FiniteRing& r) {
    const int n = r.size();
    AdditiveBasis b;
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    in[0] = 1;
    for (int x = 0; x < n; ++x) {
        if (in[static_cast<std::size_t>(x)]) continue;
        b.gens.push_back(x);
        std::vector<int> frontier;
        for (int y = 0; y < n; ++y)
            if (in[static_cast<std::size_t>(y)]) frontier.push_back(y);
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            int z = r.add(frontier[i], x);
            if (!in[static_cast<std::size_t>(z)]) {
                in[static_cast<std::size_t>(z)] = 1;
                frontier.push_back(z);
            }
        }
    }
    const std::size_t k = b.gens.size();
    b.rep.assign(static_cast<std::size_t>(n), IVec());
    b.rep[0] = IVec(k, 0);
    std::vector<int> order{0};
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t g = 0; g < k; ++g) {
            int z = r.add(order[i], b.gens[g]);
            if (b.rep[static_cast<std::size_t>(z)].empty()) {
                b.rep[static_cast<std::size_t>(z)] = b.rep[static_cast<std::size_t>(order[i])];
                b.rep[static_cast<std::size_t>(z)][g] += 1;
                order.push_back(z);
            }
        }
    for (int x = 0; x < n; ++x)
        for (std::size_t g = 0; g < k; ++g) {
            IVec v = b.rep[static_cast<std::size_t>(x)];
            v[g] += 1;
            const IVec& w = b.rep[static_cast<std::size_t>(r.add(x, b.gens[g]))];
            for (std::size_t i = 0; i < k; ++i) v[i] -= w[i];
            if (std::any_of(v.begin(), v.end(), [](std::int64_t c) { return c != 0; })) b.relations.push_back(v);
        }
    return b;
}

// Echelon form of a submodule of (Z/m)^N that also records annihilator rows,
// so that reduction gives canonical coset representatives.
class ModularEchelon {
public:
    ModularEchelon(std::size_t n, std::int64_t m) : n_(n), m_(m), rows_(n) {}

    void insert(IVec v) {
        std::vector<IVec> work{std::move(v)};
        while (!work.empty()) {
            IVec x = std::move(work.back());
            work.pop_back();
            for (auto& c : x) c = mod(c, m_);
            std::size_t k = 0;
            while (k < n_ && x[k] == 0) ++k;
            if (k == n_) continue;
            if (!rows_[k]) {
                normalize(x, k);
                rows_[k] = x;
                push_annihilator(x, k, work);
                continue;
            }
            IVec& row = *rows_[k];
            std::int64_t h = row[k], a = x[k], s = 0, t = 0;
            std::int64_t g = egcd(h, a, s, t);
            IVec combined(n_), rest(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                combined[i] = mod(s * row[i] + t * x[i], m_);
                rest[i] = mod((a / g) * row[i] - (h / g) * x[i], m_);
            }
            normalize(combined, k);
            row = combined;
            push_annihilator(row, k, work);
            work.push_back(std::move(rest));
        }
    }

    IVec reduce(IVec x) const {
        for (auto& c : x) c = mod(c, m_);
        for (std::size_t k = 0; k < n_; ++k) {
            if (!rows_[k]) continue;
            const IVec& row = *rows_[k];
            std::int64_t q = x[k] / row[k];
            if (q == 0) continue;
            for (std::size_t i = k; i < n_; ++i) x[i] = mod(x[i] - q * row[i], m_);
        }
        return x;
    }

    std::int64_t bound(std::size_t k) const { return rows_[k] ? (*rows_[k])[k] : m_; }

private:
    void normalize(IVec& x, std::size_t k) const {
        std::int64_t a = x[k];
        std::int64_t g = std::gcd(a, m_);
        std::int64_t mg = m_ / g;
        if (a == g) return;
        std::int64_t inv = 0, dummy = 0;
        egcd(mod(a / g, mg), mg, inv, dummy);
        std::int64_t u = mod(inv, mg);
        if (mg == 1) u = 1;
        while (std::gcd(u, m_) != 1) u += mg;
        for (auto& c : x) c = mod(c * u, m_);
    }

    void push_annihilator(const IVec& x, std::size_t k, std::vector<IVec>& work) const {
        std::int64_t f = m_ / x[k];
        IVec y(n_);
        bool nonzero = false;
        for (std::size_t i = 0; i < n_; ++i) {
            y[i] = mod(f * x[i], m_);
            if (y[i] != 0) nonzero = true;
        }
        if (nonzero) work.push_back(std::move(y));
    }

    std::size_t n_;
    std::int64_t m_;
    std::vector<std::optional<IVec>> rows_;
};

struct TensorResult {
    FiniteRing ring;
    std::vector<int> i1;
    std::vector<int> i2;
};

// B1 (x) B2 modulo (f1(a) b) (x) c = b (x) (f2(a) c) for the listed pairs (f1(a), f2(a)).
TensorResult tensor_rings(const FiniteRing& b1, const FiniteRing& b2, const std::vector<std::pair<int, int>>& balance) {
    const AdditiveBasis ab1 = additive_basis(b1), ab2 = additive_basis(b2);
    const std::size_t r1 = ab1.gens.size(), r2 = ab2.gens.size();
    const std::size_t n = r1 * r2;
    const std::int64_t m = std::gcd<std::int64_t>(b1.characteristic(), b2.characteristic());
    auto sym = [&](std::size_t i, std::size_t j) { return i * r2 + j; };

    if (n == 0 || m == 1) {
        return {FiniteRing(1, 0, {0}, {0}, nlohmann::json(), "0"), std::vector<int>(static_cast<std::size_t>(b1.size()), 0),
                std::vector<int>(static_cast<std::size_t>(b2.size()), 0)};
    }

    ModularEchelon ech(n, m);
    for (const auto& c : ab1.relations)
        for (std::size_t j = 0; j < r2; ++j) {
            IVec v(n, 0);
            for (std::size_t k = 0; k < r1; ++k) v[sym(k, j)] += c[k];
            ech.insert(std::move(v));
        }
    for (const auto& d : ab2.relations)
        for (std::size_t i = 0; i < r1; ++i) {
            IVec v(n, 0);
            for (std::size_t l = 0; l < r2; ++l) v[sym(i, l)] += d[l];
            ech.insert(std::move(v));
        }
    for (auto [x1, x2] : balance)
        for (std::size_t i = 0; i < r1; ++i)
            for (std::size_t j = 0; j < r2; ++j) {
                IVec v(n, 0);
                const IVec& c = ab1.rep[static_cast<std::size_t>(b1.mul(x1, ab1.gens[i]))];
                const IVec& d = ab2.rep[static_cast<std::size_t>(b2.mul(x2, ab2.gens[j]))];
                for (std::size_t k = 0; k < r1; ++k) v[sym(k, j)] += c[k];
                for (std::size_t l = 0; l < r2; ++l) v[sym(i, l)] -= d[l];
                ech.insert(std::move(v));
            }

    std::int64_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        total *= ech.bound(k);
        if (total > kMaxTensorSize) throw EnumerationBudgetExceeded("tensor product has more than 4096 elements");
    }
    std::vector<IVec> elems;
    std::map<IVec, int> index;
    IVec cur(n, 0);
    for (std::int64_t e = 0; e < total; ++e) {
        index[cur] = static_cast<int>(elems.size());
        elems.push_back(cur);
        for (std::size_t k = n; k-- > 0;) {
            if (++cur[k] < ech.bound(k)) break;
            cur[k] = 0;
        }
    }
    auto lookup = [&](IVec v) { return index.at(ech.reduce(std::move(v))); };

    // structure constants s_ij * s_kl
    std::vector<IVec> sc(n * n);
    for (std::size_t i = 0; i < r1; ++i)
        for (std::size_t j = 0; j < r2; ++j)
            for (std::size_t k = 0; k < r1; ++k)
                for (std::size_t l = 0; l < r2; ++l) {
                    const IVec& c = ab1.rep[static_cast<std::size_t>(b1.mul(ab1.gens[i], ab1.gens[k]))];
                    const IVec& d = ab2.rep[static_cast<std::size_t>(b2.mul(ab2.gens[j], ab2.gens[l]))];
                    IVec v(n, 0);
                    for (std::size_t p = 0; p < r1; ++p)
                        for (std::size_t q = 0; q < r2; ++q) v[sym(p, q)] = c[p] * d[q];
                    sc[sym(i, j) * n + sym(k, l)] = std::move(v);
                }

    const int size = static_cast<int>(total);
    std::vector<std::uint16_t> add(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
    std::vector<std::uint16_t> mul(add.size());
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b) {
            const IVec& x = elems[static_cast<std::size_t>(a)];
            const IVec& y = elems[static_cast<std::size_t>(b)];
            IVec s(n), p(n, 0);
            for (std::size_t k = 0; k < n; ++k) s[k] = x[k] + y[k];
            for (std::size_t u = 0; u < n; ++u) {
                if (x[u] == 0) continue;
                for (std::size_t w = 0; w < n; ++w) {
                    if (y[w] == 0) continue;
                    const IVec& c = sc[u * n + w];
                    std::int64_t f = x[u] * y[w] % m;
                    for (std::size_t k = 0; k < n; ++k) p[k] = (p[k] + f * c[k]) % m;
                }
            }
            add[static_cast<std::size_t>(a * size + b)] = static_cast<std::uint16_t>(lookup(std::move(s)));
            mul[static_cast<std::size_t>(a * size + b)] = static_cast<std::uint16_t>(lookup(std::move(p)));
        }

    auto insert1 = [&](int b) {
        IVec v(n, 0);
        const IVec& c = ab1.rep[static_cast<std::size_t>(b)];
        const IVec& d = ab2.rep[static_cast<std::size_t>(b2.one())];
        for (std::size_t i = 0; i < r1; ++i)
            for (std::size_t j = 0; j < r2; ++j) v[sym(i, j)] = c[i] * d[j];
        return lookup(std::move(v));
    };
    auto insert2 = [&](int b) {
        IVec v(n, 0);
        const IVec& c = ab1.rep[static_cast<std::size_t>(b1.one())];
        const IVec& d = ab2.rep[static_cast<std::size_t>(b)];
        for (std::size_t i = 0; i < r1; ++i)
            for (std::size_t j = 0; j < r2; ++j) v[sym(i, j)] = c[i] * d[j];
        return lookup(std::move(v));
    };
    std::vector<int> i1, i2;
    for (int b = 0; b < b1.size(); ++b) i1.push_back(insert1(b));
    for (int b = 0; b < b2.size(); ++b) i2.push_back(insert2(b));
    const int one = i1[static_cast<std::size_t>(b1.one())];
    FiniteRing t(size, one, std::move(add), std::move(mul), nlohmann::json(), b1.name() + "(x)" + b2.name());
    return {std::move(t), std::move(i1), std::move(i2)};
}

bool is_identity_map(const AlgebraMap& f) {
    return f.source().same(f.target()) && f == AlgebraMap::identity(f.source());
}

Word shifted(const Word& w, std::size_t offset, std::size_t total) {
    Word x(total, 0);
    for (std::size_t i = 0; i < w.size(); ++i) x[offset + i] = w[i];
    return x;
}

Pushout monoid_sum(const Algebra& a, const Algebra& b, const std::vector<std::pair<Word, Word>>& glue) {
    const auto& m1 = a.monoid();
    const auto& m2 = b.monoid();
    const std::size_t n1 = static_cast<std::size_t>(m1.ngens()), n2 = static_cast<std::size_t>(m2.ngens());
    const std::size_t total = n1 + n2;
    std::vector<Relation> rels;
    for (const auto& r : m1.relations()) rels.push_back({shifted(r.lhs, 0, total), shifted(r.rhs, 0, total)});
    for (const auto& r : m2.relations()) rels.push_back({shifted(r.lhs, n1, total), shifted(r.rhs, n1, total)});
    for (const auto& [u, v] : glue)
        if (shifted(u, 0, total) != shifted(v, n1, total)) rels.push_back({shifted(u, 0, total), shifted(v, n1, total)});
    std::vector<std::vector<std::int64_t>> emb;
    if (glue.empty() && m1.has_embedding() && m2.has_embedding()) {
        std::size_t d1 = n1 ? m1.embedding()[0].size() : 0, d2 = n2 ? m2.embedding()[0].size() : 0;
        for (std::size_t i = 0; i < n1; ++i) {
            auto v = m1.embedding()[i];
            v.resize(d1 + d2, 0);
            emb.push_back(v);
        }
        for (std::size_t j = 0; j < n2; ++j) {
            std::vector<std::int64_t> v(d1, 0);
            v.insert(v.end(), m2.embedding()[j].begin(), m2.embedding()[j].end());
            emb.push_back(v);
        }
        if (total == 0) emb.clear();
    }
    Algebra p(build_presented_monoid(static_cast<int>(total), rels, emb));
    std::vector<Word> img1, img2;
    for (std::size_t i = 0; i < n1; ++i) img1.push_back(p.monoid().generator(static_cast<int>(i)));
    for (std::size_t j = 0; j < n2; ++j) img2.push_back(p.monoid().generator(static_cast<int>(n1 + j)));
    return {p, AlgebraMap(a, p, std::move(img1)), AlgebraMap(b, p, std::move(img2))};
}

}  // namespace

Pushout coproduct(const Algebra& a, const Algebra& b) {
    if (a.is_ring() != b.is_ring()) throw UnsupportedAlgebra("coproduct of a ring and a monoid");
    if (a.is_monoid()) return monoid_sum(a, b, {});
    TensorResult t = tensor_rings(a.ring(), b.ring(), {});
    Algebra p(std::move(t.ring));
    return {p, AlgebraMap(a, p, std::move(t.i1)), AlgebraMap(b, p, std::move(t.i2))};
}

Pushout pushout(const AlgebraMap& f1, const AlgebraMap& f2) {
    if (!f1.source().same(f2.source())) throw NotAMap("pushout legs need a common source");
    if (is_identity_map(f1)) return {f2.target(), f2, AlgebraMap::identity(f2.target())};
    if (is_identity_map(f2)) return {f1.target(), AlgebraMap::identity(f1.target()), f1};
    const Algebra& a = f1.source();
    if (a.is_monoid()) {
        std::vector<std::pair<Word, Word>> glue;
        for (int g = 0; g < a.monoid().ngens(); ++g) glue.emplace_back(f1.images()[static_cast<std::size_t>(g)], f2.images()[static_cast<std::size_t>(g)]);
        return monoid_sum(f1.target(), f2.target(), glue);
    }
    std::vector<std::pair<int, int>> balance;
    for (int g : ring_generators(a.ring())) balance.emplace_back(f1.apply(g), f2.apply(g));
    TensorResult t = tensor_rings(f1.target().ring(), f2.target().ring(), balance);
    Algebra p(std::move(t.ring));
    return {p, AlgebraMap(f1.target(), p, std::move(t.i1)), AlgebraMap(f2.target(), p, std::move(t.i2))};
}

Colimit colimit(const std::vector<Algebra>& objects, const std::vector<DiagramArrow>& arrows) {
    const std::size_t n = objects.size();
    if (n == 0) throw InvalidParameter("colimit of an empty diagram");
    for (const auto& a : arrows) {
        if (a.src < 0 || a.dst < 0 || static_cast<std::size_t>(a.src) >= n || static_cast<std::size_t>(a.dst) >= n)
            throw InvalidParameter("diagram arrow index out of range");
        if (!a.map.source().same(objects[static_cast<std::size_t>(a.src)]) ||
            !a.map.target().same(objects[static_cast<std::size_t>(a.dst)]))
            throw NotAMap("diagram arrow does not match its objects");
    }

    // Objects routed through an outgoing arrow need no coproduct factor.
    std::vector<int> via(n, -1);
    std::vector<char> sink(n, 0), resolved(n, 0);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        bool outgoing = false;
        for (const auto& a : arrows)
            if (static_cast<std::size_t>(a.src) == i) outgoing = true;
        if (!outgoing) {
            sink[i] = resolved[i] = 1;
            order.push_back(i);
        }
    }
    while (order.size() < n) {
        bool progress = false;
        for (std::size_t k = 0; k < arrows.size(); ++k) {
            auto s = static_cast<std::size_t>(arrows[k].src), d = static_cast<std::size_t>(arrows[k].dst);
            if (!resolved[s] && resolved[d]) {
                resolved[s] = 1;
                via[s] = static_cast<int>(k);
                order.push_back(s);
                progress = true;
            }
        }
        if (!progress)
            for (std::size_t i = 0; i < n; ++i)
                if (!resolved[i]) {
                    sink[i] = resolved[i] = 1;
                    order.push_back(i);
                    break;
                }
    }

    std::optional<Algebra> c;
    std::vector<std::optional<AlgebraMap>> ins(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!sink[i]) continue;
        if (!c) {
            c = objects[i];
            ins[i] = AlgebraMap::identity(objects[i]);
            continue;
        }
        Pushout p = coproduct(*c, objects[i]);
        for (auto& m : ins)
            if (m) m = compose(p.i1, *m);
        ins[i] = p.i2;
        c = p.object;
    }
    for (std::size_t i : order)
        if (!sink[i]) {
            const auto& a = arrows[static_cast<std::size_t>(via[i])];
            ins[i] = compose(*ins[static_cast<std::size_t>(a.dst)], a.map);
        }

    const Algebra& obj = *c;
    std::optional<Quotient> q;
    if (obj.is_ring()) {
        std::vector<int> ideal;
        for (std::size_t k = 0; k < arrows.size(); ++k) {
            const auto& a = arrows[k];
            if (via[static_cast<std::size_t>(a.src)] == static_cast<int>(k)) continue;
            const auto& lhs = *ins[static_cast<std::size_t>(a.dst)];
            const auto& rhs = *ins[static_cast<std::size_t>(a.src)];
            for (int g : ring_generators(objects[static_cast<std::size_t>(a.src)].ring())) {
                int diff = obj.ring().sub(lhs.apply(a.map.apply(g)), rhs.apply(g));
                if (diff != 0) ideal.push_back(diff);
            }
        }
        q = quotient_by_ideal(obj, ideal);
    } else {
        std::vector<std::pair<Word, Word>> pairs;
        for (std::size_t k = 0; k < arrows.size(); ++k) {
            const auto& a = arrows[k];
            if (via[static_cast<std::size_t>(a.src)] == static_cast<int>(k)) continue;
            const auto& lhs = *ins[static_cast<std::size_t>(a.dst)];
            const auto& rhs = *ins[static_cast<std::size_t>(a.src)];
            for (const auto& g : objects[static_cast<std::size_t>(a.src)].generators())
                pairs.emplace_back(lhs.apply_word(a.map.apply_word(g)), rhs.apply_word(g));
        }
        q = quotient_by_congruence(obj, pairs);
    }
    Colimit out{q->object, {}};
    for (auto& m : ins) out.insertions.push_back(compose(q->projection, *m));
    return out;
}

}  // namespace locus
