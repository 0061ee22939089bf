#pragma once
// Shared helpers for the test binaries: algebra builders, random generators
// and brute-force oracles. The oracles only read raw tables, stalks and
// generization maps; they never call the library's own searches.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "locus/algebra.hpp"
#include "locus/localize.hpp"
#include "locus/space.hpp"
#include "locus/spec_functors.hpp"

namespace support {

using namespace locus;

inline Algebra zmod(int n) { return Algebra(build_zmod(n)); }
inline Algebra gf(int q) { return Algebra(build_gf(q)); }
inline Algebra prod(std::vector<Algebra> fs) {
    std::vector<FiniteRing> rs;
    for (const auto& f : fs) rs.push_back(f.ring());
    return Algebra(build_product(rs));
}
inline Algebra affine(int d, std::vector<std::vector<std::int64_t>> gens) {
    return Algebra(build_affine_monoid(d, std::move(gens)));
}
inline Algebra nat() { return affine(1, {{1}}); }
inline Algebra nat2() { return affine(2, {{1, 0}, {0, 1}}); }

inline std::size_t at(int i) { return static_cast<std::size_t>(i); }

/// First ring hom A -> B found by the library (for fixing structure maps).
inline AlgebraMap first_hom(const Algebra& a, const Algebra& b) { return hom_set(a, b).at(0); }

// ---- ring oracles ------------------------------------------------------

/// Ideals of R by exhaustion over subsets; only for |R| <= 16.
inline std::vector<std::vector<int>> oracle_ideals(const FiniteRing& r) {
    const int n = r.size();
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (!(mask & 1u)) continue;  // must contain 0
        auto in = [&](int e) { return (mask >> e) & 1u; };
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) {
            if (!in(a)) continue;
            for (int b = 0; b < n && ok; ++b) {
                if (in(b) && !in(r.add(a, b))) ok = false;
                if (!in(r.mul(a, b))) ok = false;
            }
            if (!in(r.neg(a))) ok = false;
        }
        if (!ok) continue;
        std::vector<int> members;
        for (int e = 0; e < n; ++e)
            if (in(e)) members.push_back(e);
        out.push_back(members);
    }
    return out;
}

/// Prime ideals by the definition, sorted by member list.
inline std::vector<std::vector<int>> oracle_primes(const FiniteRing& r) {
    std::vector<std::vector<int>> out;
    for (const auto& ideal : oracle_ideals(r)) {
        if (static_cast<int>(ideal.size()) == r.size()) continue;
        std::vector<char> in(at(r.size()), 0);
        for (int e : ideal) in[at(e)] = 1;
        bool prime = true;
        for (int a = 0; a < r.size() && prime; ++a)
            for (int b = 0; b < r.size() && prime; ++b)
                if (in[at(r.mul(a, b))] && !in[at(a)] && !in[at(b)]) prime = false;
        if (prime) out.push_back(ideal);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every function A -> B checked against the ring axioms; only when |B|^|A|
/// is small.
inline std::size_t oracle_ring_hom_count(const FiniteRing& a, const FiniteRing& b) {
    std::vector<int> f(at(a.size()), 0);
    std::size_t count = 0;
    while (true) {
        bool ok = f[at(a.one())] == b.one() && f[0] == 0;
        for (int x = 0; x < a.size() && ok; ++x)
            for (int y = 0; y < a.size() && ok; ++y)
                ok = f[at(a.add(x, y))] == b.add(f[at(x)], f[at(y)]) && f[at(a.mul(x, y))] == b.mul(f[at(x)], f[at(y)]);
        if (ok) ++count;
        std::size_t i = 0;
        while (i < f.size() && ++f[i] == b.size()) f[i++] = 0;
        if (i == f.size()) break;
    }
    return count;
}

/// Whether two finite rings are isomorphic, by trying every bijection.
/// Only for |R| <= 8.
inline bool oracle_ring_iso(const FiniteRing& a, const FiniteRing& b) {
    if (a.size() != b.size()) return false;
    std::vector<int> p(at(a.size()));
    std::iota(p.begin(), p.end(), 0);
    do {
        bool ok = p[at(a.one())] == b.one() && p[0] == 0;
        for (int x = 0; x < a.size() && ok; ++x)
            for (int y = 0; y < a.size() && ok; ++y)
                ok = p[at(a.add(x, y))] == b.add(p[at(x)], p[at(y)]) && p[at(a.mul(x, y))] == b.mul(p[at(x)], p[at(y)]);
        if (ok) return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

/// Size of A localized at the prime z: the elements a/s up to the usual
/// equivalence, counted directly.
inline int oracle_localized_size(const FiniteRing& r, const std::vector<int>& prime) {
    std::vector<char> in(at(r.size()), 0);
    for (int e : prime) in[at(e)] = 1;
    std::vector<int> s;
    for (int e = 0; e < r.size(); ++e)
        if (!in[at(e)]) s.push_back(e);
    // (a, s) ~ (b, t) iff u(at - bs) = 0 for some u in S
    std::vector<std::pair<int, int>> reps;
    for (int a = 0; a < r.size(); ++a)
        for (int d : s) {
            bool fresh = true;
            for (const auto& [b, t] : reps) {
                const int diff = r.sub(r.mul(a, t), r.mul(b, d));
                for (int u : s)
                    if (r.mul(u, diff) == 0) {
                        fresh = false;
                        break;
                    }
                if (!fresh) break;
            }
            if (fresh) reps.emplace_back(a, d);
        }
    return static_cast<int>(reps.size());
}

// ---- monoid oracles ----------------------------------------------------

/// Faces of the affine monoid generated by `gens` in Z^d, as generator masks:
/// a subset F of generators spans a face iff no relation sum(c_i g_i) with
/// small non-negative c mixes F with a generator outside F on one side while
/// the other side lies in F. Checked on coefficient vectors up to `bound`.
inline std::set<std::uint64_t> oracle_faces(const std::vector<std::vector<std::int64_t>>& gens, int bound = 3) {
    const int k = static_cast<int>(gens.size());
    const int d = static_cast<int>(gens.front().size());
    std::vector<std::vector<int>> coeffs{{}};
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& c : coeffs)
            for (int v = 0; v <= bound; ++v) {
                auto e = c;
                e.push_back(v);
                next.push_back(e);
            }
        coeffs = std::move(next);
    }
    auto value = [&](const std::vector<int>& c) {
        std::vector<std::int64_t> v(at(d), 0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < d; ++j) v[at(j)] += c[at(i)] * gens[at(i)][at(j)];
        return v;
    };
    std::set<std::uint64_t> faces;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        // the submonoid spanned by mask: values of coefficient vectors supported in mask
        std::set<std::vector<std::int64_t>> inside;
        for (const auto& c : coeffs) {
            bool ok = true;
            for (int i = 0; i < k; ++i)
                if (c[at(i)] && !((mask >> i) & 1u)) ok = false;
            if (ok) inside.insert(value(c));
        }
        bool face = true;
        // generators outside mask must not be summands of an element of the span
        for (const auto& c : coeffs) {
            bool outside = false;
            for (int i = 0; i < k; ++i)
                if (c[at(i)] && !((mask >> i) & 1u)) outside = true;
            if (outside && inside.count(value(c))) {
                face = false;
                break;
            }
        }
        // a generator is in the face iff its value lies in the span
        if (face) {
            for (int i = 0; i < k; ++i)
                if (!((mask >> i) & 1u) && inside.count(gens[at(i)])) face = false;
        }
        if (face) faces.insert(mask);
    }
    return faces;
}

// ---- space oracles -----------------------------------------------------

/// Number of compatible families over the open U of a ring space, enumerated
/// point by point from the stalks and generization maps.
inline std::size_t oracle_section_count(const StructuredSpace& x, PointSet u) {
    const auto pts = x.space().points_of(u);
    std::vector<int> choice(pts.size(), 0);
    std::size_t count = 0;
    if (pts.empty()) return 1;
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < pts.size() && ok; ++i)
            for (std::size_t j = 0; j < pts.size() && ok; ++j) {
                if (i == j || !contains(x.space().min_open(pts[i]), pts[j])) continue;
                ok = x.res(pts[i], pts[j]).apply(choice[i]) == choice[j];
            }
        if (ok) ++count;
        std::size_t i = 0;
        while (i < pts.size() && ++choice[i] == x.stalk(pts[i]).ring().size()) choice[i++] = 0;
        if (i == pts.size()) break;
    }
    return count;
}

/// Number of generization-covering pairs (Hasse edges of the preorder on a T0 space).
inline int oracle_covering_edges(const FiniteSpace& s) {
    int edges = 0;
    for (int p = 0; p < s.size(); ++p)
        for (int y = 0; y < s.size(); ++y) {
            if (y == p || !contains(s.min_open(p), y)) continue;
            bool cover = true;
            for (int m = 0; m < s.size(); ++m)
                if (m != p && m != y && contains(s.min_open(p), m) && contains(s.min_open(m), y)) cover = false;
            if (cover) ++edges;
        }
    return edges;
}

// ---- generators --------------------------------------------------------

inline std::vector<Algebra> ring_pool() {
    return {zmod(2), zmod(3), zmod(4), zmod(6), zmod(8), zmod(9), zmod(10), zmod(12),
            gf(4), gf(8), prod({zmod(2), zmod(2)}), prod({gf(4), zmod(3)}), prod({zmod(4), zmod(3)})};
}

inline std::vector<Algebra> monoid_pool() {
    return {nat(), nat2(), affine(2, {{1, 0}, {1, 1}, {1, 2}}), affine(1, {{2}, {3}}),
            affine(2, {{1, 0}, {0, 1}, {1, 1}})};
}

/// A random local space with at most `max_points` points: Spec of a random
/// algebra, localized at a random prime system, then cut down to an open.
inline SpacePtr random_local_space(std::mt19937& rng, bool monoid, int max_points = 6) {
    const auto pool = monoid ? monoid_pool() : ring_pool();
    for (;;) {
        const Algebra a = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        SpacePtr x = global_spec(a).space;
        if (x->size() == 0) continue;
        PrimeSystem m;
        for (int p = 0; p < x->size(); ++p) {
            const int np = static_cast<int>(x->stalk(p).primes().size());
            std::vector<int> ps;
            for (int z = 0; z < np; ++z)
                if (rng() % 2) ps.push_back(z);
            if (ps.empty()) ps.push_back(np - 1);
            m.primes.push_back(ps);
        }
        SpacePtr l = localize(x, m).space;
        if (l->size() == 0) continue;
        if (rng() % 2) {
            const int p = std::uniform_int_distribution<int>(0, l->size() - 1)(rng);
            l = subspace(l, l->space().min_open(p));
        }
        if (l->size() <= max_points) return l;
    }
}

}  // namespace support
