#include "locus/monoid.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>
#include <set>

#include "locus/budget.hpp"
#include "locus/error.hpp"

namespace locus {

namespace {

constexpr int kMaxGenerators = 24;
constexpr int kInverseSearchDepth = 6;
constexpr std::size_t kInverseSearchElements = 4000;

std::int64_t dot(const Word& a, const Word& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

int compare_terms(const Word& a, const Word& b, const Word& weight) {
    std::int64_t wa = dot(a, weight), wb = dot(b, weight);
    if (wa != wb) return wa < wb ? -1 : 1;
    std::int64_t da = degree(a), db = degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

bool divides(const Word& d, const Word& w) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > w[i]) return false;
    return true;
}

Word reduce(Word w, const std::vector<Relation>& rules) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : rules) {
            if (!divides(r.lhs, w)) continue;
            // apply the rule as many times as it fits
            std::int64_t times = INT64_MAX;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (r.lhs[i] > 0) times = std::min(times, w[i] / r.lhs[i]);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] += times * (r.rhs[i] - r.lhs[i]);
            changed = true;
        }
    }
    return w;
}

void check_word(const Word& w, int n) {
    if (static_cast<int>(w.size()) != n) throw InvalidParameter("word has wrong length");
    for (auto c : w)
        if (c < 0) throw InvalidParameter("word has a negative exponent");
}

std::string vector_name(const std::vector<std::int64_t>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

}  // namespace

std::uint64_t support(const Word& w) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0) m |= std::uint64_t{1} << i;
    return m;
}

std::int64_t degree(const Word& w) { return std::accumulate(w.begin(), w.end(), std::int64_t{0}); }

bool word_less(const Word& a, const Word& b) {
    auto da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a < b;
}

std::vector<Relation> complete_presentation(int ngens, const std::vector<Relation>& relations,
                                            const Word& weight) {
    const std::size_t limit = budget().monoid_normal_forms;
    std::vector<Relation> rules;
    std::deque<Relation> pending(relations.begin(), relations.end());
    std::size_t steps = 0;
    while (!pending.empty()) {
        Relation rel = std::move(pending.front());
        pending.pop_front();
        Word u = reduce(std::move(rel.lhs), rules);
        Word v = reduce(std::move(rel.rhs), rules);
        if (u == v) continue;
        if (compare_terms(u, v, weight) < 0) std::swap(u, v);
        if (++steps > 50 * limit) throw WordProblemBudgetExceeded("monoid completion did not terminate in budget");

        for (auto it = rules.begin(); it != rules.end();) {
            if (divides(u, it->lhs)) {
                pending.push_back(*it);
                it = rules.erase(it);
            } else {
                ++it;
            }
        }
        const std::uint64_t su = support(u);
        for (const auto& r : rules) {
            if ((support(r.lhs) & su) == 0) continue;
            Word l(static_cast<std::size_t>(ngens));
            for (std::size_t i = 0; i < l.size(); ++i) l[i] = std::max(u[i], r.lhs[i]);
            Word a = l, b = l;
            for (std::size_t i = 0; i < l.size(); ++i) {
                a[i] += v[i] - u[i];
                b[i] += r.rhs[i] - r.lhs[i];
            }
            pending.push_back({std::move(a), std::move(b)});
        }
        rules.push_back({std::move(u), std::move(v)});
        if (rules.size() > limit) throw WordProblemBudgetExceeded("monoid presentation exceeds the rule budget");
    }
    for (auto& r : rules) r.rhs = reduce(r.rhs, rules);
    std::sort(rules.begin(), rules.end(),
              [](const Relation& a, const Relation& b) { return word_less(a.lhs, b.lhs); });
    return rules;
}

std::vector<std::vector<std::int64_t>> integer_kernel(int d, const std::vector<std::vector<std::int64_t>>& gens) {
    const std::size_t n = gens.size();
    const std::size_t width = static_cast<std::size_t>(d) + n;
    std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(width, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < static_cast<std::size_t>(d); ++c) a[i][c] = gens[i][c];
        a[i][static_cast<std::size_t>(d) + i] = 1;
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(d) && r < n; ++c) {
        while (true) {
            std::size_t best = n;
            for (std::size_t p = r; p < n; ++p)
                if (a[p][c] != 0 && (best == n || std::llabs(a[p][c]) < std::llabs(a[best][c]))) best = p;
            if (best == n) break;
            std::swap(a[r], a[best]);
            bool clean = true;
            for (std::size_t q = r + 1; q < n; ++q) {
                if (a[q][c] == 0) continue;
                std::int64_t f = a[q][c] / a[r][c];
                for (std::size_t k = 0; k < width; ++k) a[q][k] -= f * a[r][k];
                if (a[q][c] != 0) clean = false;
            }
            if (clean) {
                ++r;
                break;
            }
        }
    }
    std::vector<std::vector<std::int64_t>> kernel;
    for (std::size_t i = r; i < n; ++i)
        kernel.emplace_back(a[i].begin() + d, a[i].end());
    return kernel;
}

Monoid::Monoid(int ngens, std::vector<Relation> relations, std::vector<std::vector<std::int64_t>> embedding,
               nlohmann::json source, std::string name)
    : n_(ngens), relations_(std::move(relations)), embedding_(std::move(embedding)), source_(std::move(source)),
      name_(std::move(name)) {
    if (n_ < 0 || n_ > kMaxGenerators) throw InvalidParameter("monoid generator count out of range");
    for (const auto& r : relations_) {
        check_word(r.lhs, n_);
        check_word(r.rhs, n_);
    }
    if (!embedding_.empty() && static_cast<int>(embedding_.size()) != n_)
        throw InvalidParameter("embedding needs one vector per generator");
    rules_ = complete_presentation(n_, relations_, zero());

    const std::uint64_t full = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    for (std::uint64_t g = 0;; ++g) {
        bool face = true;
        for (const auto& r : relations_) {
            bool lu = (support(r.lhs) & ~g) == 0;
            bool lv = (support(r.rhs) & ~g) == 0;
            if (lu != lv) {
                face = false;
                break;
            }
        }
        if (face) faces_.push_back(g);
        if (g == full) break;
    }
    std::sort(faces_.begin(), faces_.end(), [](std::uint64_t a, std::uint64_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa > pb : a < b;
    });
    unit_face_ = full;
    for (auto f : faces_) unit_face_ &= f;

    // Inverses of unit generators, searched inside the group generated by them.
    generator_inverse_.assign(static_cast<std::size_t>(n_), std::nullopt);
    if (unit_face_ != 0) {
        std::set<Word> seen{zero()};
        std::vector<Word> frontier{zero()};
        for (int depth = 0; depth < kInverseSearchDepth && !frontier.empty(); ++depth) {
            std::vector<Word> next;
            for (const auto& w : frontier)
                for (int g = 0; g < n_; ++g) {
                    if (!((unit_face_ >> g) & 1)) continue;
                    Word x = normal_form(add(w, generator(g)));
                    if (seen.insert(x).second) next.push_back(x);
                }
            frontier = std::move(next);
            if (seen.size() > kInverseSearchElements) break;
        }
        for (int g = 0; g < n_; ++g) {
            if (!((unit_face_ >> g) & 1)) continue;
            for (const auto& h : seen)
                if (normal_form(add(generator(g), h)) == zero()) {
                    generator_inverse_[static_cast<std::size_t>(g)] = h;
                    break;
                }
        }
    }
}

Word Monoid::generator(int i) const {
    if (i < 0 || i >= n_) throw InvalidParameter("generator index out of range");
    Word w = zero();
    w[static_cast<std::size_t>(i)] = 1;
    return w;
}

Word Monoid::normal_form(Word w) const {
    check_word(w, n_);
    return reduce(std::move(w), rules_);
}

Word Monoid::add(const Word& a, const Word& b) const {
    Word s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
    return normal_form(std::move(s));
}

Word Monoid::multiple(const Word& a, std::int64_t k) const {
    if (k < 0) return multiple(inverse(a), -k);
    Word s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] * k;
    return normal_form(std::move(s));
}

bool Monoid::is_unit(const Word& w) const { return (support(w) & ~unit_face_) == 0; }

Word Monoid::inverse(const Word& w) const {
    if (!is_unit(w)) throw InvalidParameter("element is not a unit");
    Word acc = zero();
    for (int g = 0; g < n_; ++g) {
        auto k = w[static_cast<std::size_t>(g)];
        if (k == 0) continue;
        const auto& inv = generator_inverse_[static_cast<std::size_t>(g)];
        if (!inv) throw MonoidUnsupported("inverse of a unit generator not found by bounded search");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += k * (*inv)[i];
    }
    return normal_form(std::move(acc));
}

std::vector<Word> Monoid::elements_up_to(int d) const {
    std::set<Word> seen{zero()};
    std::vector<Word> frontier{zero()};
    for (int depth = 0; depth < d; ++depth) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (int g = 0; g < n_; ++g) {
                Word x = add(w, generator(g));
                if (seen.insert(x).second) next.push_back(x);
            }
        frontier = std::move(next);
    }
    std::vector<Word> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), word_less);
    return out;
}

bool Monoid::same_presentation(const Monoid& other) const {
    if (n_ != other.n_ || relations_.size() != other.relations_.size()) return false;
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].lhs != other.relations_[i].lhs || relations_[i].rhs != other.relations_[i].rhs)
            return false;
    return true;
}

Monoid build_affine_monoid(int d, const std::vector<std::vector<std::int64_t>>& gens) {
    if (d < 0) throw InvalidParameter("affine dimension must be non-negative");
    for (const auto& g : gens)
        if (static_cast<int>(g.size()) != d) throw InvalidParameter("affine generator has wrong dimension");
    const int n = static_cast<int>(gens.size());
    if (n > kMaxGenerators) throw InvalidParameter("too many affine generators");

    std::vector<Relation> relations;
    auto kernel = integer_kernel(d, gens);
    if (!kernel.empty()) {
        // Saturate the lattice ideal: adjoin t with t + x_1 + ... + x_n = 0 and eliminate t.
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        std::vector<Relation> rels;
        for (const auto& k : kernel) {
            Word plus(m, 0), minus(m, 0);
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (k[i] > 0) plus[i] = k[i];
                if (k[i] < 0) minus[i] = -k[i];
            }
            rels.push_back({plus, minus});
        }
        rels.push_back({Word(m, 1), Word(m, 0)});
        Word weight(m, 0);
        weight[m - 1] = 1;
        for (auto& r : complete_presentation(static_cast<int>(m), rels, weight)) {
            if (r.lhs[m - 1] != 0 || r.rhs[m - 1] != 0) continue;
            r.lhs.pop_back();
            r.rhs.pop_back();
            relations.push_back(std::move(r));
        }
    }

    bool standard = n == d;
    for (int i = 0; i < n && standard; ++i)
        for (int j = 0; j < d; ++j)
            if (gens[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != (i == j ? 1 : 0)) standard = false;
    std::string name;
    if (n == 0)
        name = "0";
    else if (standard)
        name = d == 1 ? "N" : "N^" + std::to_string(d);
    else {
        name = "<";
        for (int i = 0; i < n; ++i) name += (i ? "," : "") + vector_name(gens[static_cast<std::size_t>(i)]);
        name += ">";
    }
    nlohmann::json src = {{"kind", "monoid"}, {"backend", "affine"}, {"d", d}, {"gens", gens}};
    return Monoid(n, std::move(relations), gens, std::move(src), name);
}

Monoid build_presented_monoid(int ngens, const std::vector<Relation>& relations,
                              const std::vector<std::vector<std::int64_t>>& embedding) {
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& r : relations) rels.push_back({r.lhs, r.rhs});
    nlohmann::json src = {{"kind", "monoid"}, {"backend", "presented"}, {"ngens", ngens}, {"relations", rels}};
    if (!embedding.empty()) src["embedding"] = embedding;
    return Monoid(ngens, relations, embedding, std::move(src), "monoid[" + std::to_string(ngens) + "]");
}

Monoid build_table_monoid(int n, const std::vector<std::vector<int>>& op, int zero) {
    if (n < 1 || n > kMaxGenerators + 1) throw InvalidParameter("table monoid size out of range");
    if (zero < 0 || zero >= n) throw InvalidParameter("table monoid identity out of range");
    if (static_cast<int>(op.size()) != n) throw InvalidParameter("table monoid table must be n x n");
    for (const auto& row : op) {
        if (static_cast<int>(row.size()) != n) throw InvalidParameter("table monoid table must be n x n");
        for (int v : row)
            if (v < 0 || v >= n) throw InvalidParameter("table monoid entry out of range");
    }
    auto at = [&](int a, int b) { return op[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };
    for (int a = 0; a < n; ++a) {
        if (at(zero, a) != a) throw InvalidParameter("table monoid identity does not act trivially");
        for (int b = 0; b < n; ++b) {
            if (at(a, b) != at(b, a)) throw InvalidParameter("table monoid is not commutative");
            for (int c = 0; c < n; ++c)
                if (at(at(a, b), c) != at(a, at(b, c))) throw InvalidParameter("table monoid is not associative");
        }
    }
    const int ngens = n - 1;
    auto word_of = [&](int a) {
        Word w(static_cast<std::size_t>(ngens), 0);
        if (a != zero) w[static_cast<std::size_t>(a < zero ? a : a - 1)] = 1;
        return w;
    };
    std::vector<Relation> relations;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            if (a == zero || b == zero) continue;
            Word lhs = word_of(a);
            lhs[static_cast<std::size_t>(b < zero ? b : b - 1)] += 1;
            relations.push_back({lhs, word_of(at(a, b))});
        }
    nlohmann::json src = {{"kind", "monoid"}, {"backend", "table"}, {"n", n}, {"op", op}, {"zero", zero}};
    return Monoid(ngens, std::move(relations), {}, std::move(src), "monoid{" + std::to_string(n) + "}");
}

Monoid build_free_monoid(int n) {
    std::vector<std::vector<std::int64_t>> gens(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) gens[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return build_affine_monoid(n, gens);
}

Monoid build_trivial_monoid() { return build_affine_monoid(0, {}); }

nlohmann::json presented_json(const Monoid& m) {
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& r : m.relations()) rels.push_back({r.lhs, r.rhs});
    nlohmann::json j = {{"kind", "monoid"}, {"backend", "presented"}, {"ngens", m.ngens()}, {"relations", rels}};
    if (!m.embedding().empty()) j["embedding"] = m.embedding();
    return j;
}

}  // namespace locus
