#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace locus {

/// Exponent vector over the generators; the monoid is written additively.
using Word = std::vector<std::int64_t>;

struct Relation {
    Word lhs;
    Word rhs;
};

/// A finitely presented commutative monoid <x_1..x_n | u = v>, with a
/// completed rewriting system deciding the word problem.
class Monoid {
public:
    /// `embedding`, when non-empty, gives one integer vector per generator such
    /// that two words are equal iff their images agree (affine monoids).
    Monoid(int ngens, std::vector<Relation> relations, std::vector<std::vector<std::int64_t>> embedding,
           nlohmann::json source, std::string name);

    int ngens() const { return n_; }
    const std::vector<Relation>& relations() const { return relations_; }
    const std::vector<Relation>& rules() const { return rules_; }
    bool has_embedding() const { return !embedding_.empty() || n_ == 0; }
    const std::vector<std::vector<std::int64_t>>& embedding() const { return embedding_; }

    Word zero() const { return Word(static_cast<std::size_t>(n_), 0); }
    Word generator(int i) const;
    Word normal_form(Word w) const;
    Word add(const Word& a, const Word& b) const;
    Word multiple(const Word& a, std::int64_t k) const;
    bool equal(const Word& a, const Word& b) const { return normal_form(a) == normal_form(b); }

    /// Faces as generator masks: largest first, then by mask.
    const std::vector<std::uint64_t>& faces() const { return faces_; }
    /// Generators that are units (the smallest face).
    std::uint64_t unit_face() const { return unit_face_; }
    bool is_unit(const Word& w) const;
    /// Inverse of a unit; throws MonoidUnsupported if the bounded search failed.
    Word inverse(const Word& w) const;

    /// Distinct normal forms of total degree <= d, in canonical order.
    std::vector<Word> elements_up_to(int d) const;

    const nlohmann::json& source() const { return source_; }
    const std::string& name() const { return name_; }
    bool same_presentation(const Monoid& other) const;

private:
    int n_;
    std::vector<Relation> relations_;
    std::vector<Relation> rules_;
    std::vector<std::vector<std::int64_t>> embedding_;
    std::vector<std::uint64_t> faces_;
    std::uint64_t unit_face_ = 0;
    std::vector<std::optional<Word>> generator_inverse_;
    nlohmann::json source_;
    std::string name_;
};

std::uint64_t support(const Word& w);
std::int64_t degree(const Word& w);
/// Canonical element order: total degree, then lexicographic.
bool word_less(const Word& a, const Word& b);

/// Completes a presentation into a confluent rewriting system. The term order
/// compares `weight` first, then total degree, then lexicographically.
/// Throws WordProblemBudgetExceeded past the configured rule budget.
std::vector<Relation> complete_presentation(int ngens, const std::vector<Relation>& relations,
                                            const Word& weight);

/// Integer basis of {k : G k = 0}, G given column-wise by `gens`.
std::vector<std::vector<std::int64_t>> integer_kernel(int d, const std::vector<std::vector<std::int64_t>>& gens);

Monoid build_affine_monoid(int d, const std::vector<std::vector<std::int64_t>>& gens);
Monoid build_presented_monoid(int ngens, const std::vector<Relation>& relations,
                              const std::vector<std::vector<std::int64_t>>& embedding = {});
/// Finite monoid from its operation table; `zero` is the identity index.
Monoid build_table_monoid(int n, const std::vector<std::vector<int>>& op, int zero);
Monoid build_free_monoid(int n);
Monoid build_trivial_monoid();

/// Presented-form json for any monoid (keeps the embedding if there is one).
nlohmann::json presented_json(const Monoid& m);

}  // namespace locus
