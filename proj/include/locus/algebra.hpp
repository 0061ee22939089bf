#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "locus/finite_ring.hpp"
#include "locus/monoid.hpp"

namespace locus {

/// Ring elements are {index}; monoid elements are normal-form words.
using Elem = std::vector<std::int64_t>;

/// A prime ideal. For rings the explicit member set; for monoids the face
/// (generator mask) whose complement is the prime.
struct Prime {
    std::vector<int> members;
    std::vector<char> member_mask;
    std::uint64_t face = 0;
};

/// An effective commutative algebra: a finite ring or a presented monoid.
/// Cheap to copy; the underlying structure is shared and immutable.
class Algebra {
public:
    explicit Algebra(FiniteRing r);
    explicit Algebra(Monoid m);

    bool is_ring() const { return ring_ != nullptr; }
    bool is_monoid() const { return monoid_ != nullptr; }
    const FiniteRing& ring() const;
    const Monoid& monoid() const;

    const std::string& name() const;
    const nlohmann::json& source() const;
    /// Structural identity (same tables or same presentation).
    bool same(const Algebra& other) const;

    /// All primes in canonical order: rings by sorted member list, monoids
    /// from the largest face down (so the maximal ideal comes last).
    const std::vector<Prime>& primes() const { return *primes_; }
    bool is_local() const;
    /// Index of the maximal ideal; throws NotLocal.
    int maximal_prime() const;
    int find_prime(const Prime& p) const;
    bool in_prime(int prime, const Elem& e) const;

    /// Ring generators (beyond the prime subring) or monoid generators.
    const std::vector<Elem>& generators() const { return *generators_; }
    /// Identity of the multiplicative operation (ring 1, monoid 0).
    Elem unit() const;
    Elem op(const Elem& a, const Elem& b) const;
    bool is_unit(const Elem& e) const;
    Elem normalize(const Elem& e) const;
    std::string format(const Elem& e) const;
    /// Short human summary, e.g. "Z/6" or "monoid[3]".
    std::string summary() const;
    /// Finite rings: all elements; monoids: elements up to the hom degree bound.
    std::vector<Elem> sample_elements() const;

private:
    std::shared_ptr<const FiniteRing> ring_;
    std::shared_ptr<const Monoid> monoid_;
    std::shared_ptr<const std::vector<Prime>> primes_;
    std::shared_ptr<const std::vector<Elem>> generators_;
};

Algebra zero_ring();
Algebra trivial_monoid();
/// The terminal algebra of the same kind as `a`.
Algebra terminal_like(const Algebra& a);

class AlgebraMap {
public:
    AlgebraMap(Algebra src, Algebra dst, std::vector<int> table);
    AlgebraMap(Algebra src, Algebra dst, std::vector<Word> images);
    static AlgebraMap identity(const Algebra& a);

    const Algebra& source() const { return src_; }
    const Algebra& target() const { return dst_; }
    const std::vector<int>& table() const { return table_; }
    const std::vector<Word>& images() const { return images_; }

    Elem apply(const Elem& e) const;
    int apply(int ring_elem) const { return table_[static_cast<std::size_t>(ring_elem)]; }
    Word apply_word(const Word& w) const;

    /// Checks operations and identities are preserved.
    bool is_homomorphism() const;
    bool operator==(const AlgebraMap& other) const;
    bool operator!=(const AlgebraMap& other) const { return !(*this == other); }

private:
    Algebra src_;
    Algebra dst_;
    std::vector<int> table_;
    std::vector<Word> images_;
};

/// g after f.
AlgebraMap compose(const AlgebraMap& g, const AlgebraMap& f);
/// Index (in the source's prime list) of f^{-1}(p).
int preimage_prime(const AlgebraMap& f, int prime);
/// f^{-1}(m_target) = m_source; throws NotLocal if either side is not local.
bool is_local_hom(const AlgebraMap& f);

struct Localization {
    Algebra object;
    AlgebraMap map;
    /// Rings: (numerator, denominator) representative of each element.
    std::vector<std::pair<int, int>> fractions;
    /// Monoids: target generator ngens(source)+j inverts source generator inverted[j].
    std::vector<int> inverted;
};

/// Rings: S given by a membership mask over the elements.
Localization localize_ring(const Algebra& a, const std::vector<char>& s);
/// Monoids: invert the generators in `face`.
Localization localize_at_face(const Algebra& a, std::uint64_t face);
Localization localize_at_prime(const Algebra& a, int prime);
/// The unique map S^{-1}A -> C through which g factors; throws NotAMap if g
/// does not send S to units.
AlgebraMap lift_through_localization(const Localization& loc, const AlgebraMap& g);

struct Quotient {
    Algebra object;
    AlgebraMap projection;
};

Quotient quotient_by_ideal(const Algebra& a, const std::vector<int>& generators);
Quotient quotient_by_congruence(const Algebra& a, const std::vector<std::pair<Word, Word>>& pairs);
/// Rings: A/m; monoids: sharpening A/A*.
Quotient residue(const Algebra& a);
/// The map A/~ -> C induced by g: A -> C; throws NotAMap if g is not constant
/// on classes.
AlgebraMap lift_through_quotient(const Quotient& q, const AlgebraMap& g);
/// k(A) -> k(B) induced by a local map f: A -> B.
AlgebraMap residue_map(const AlgebraMap& f);

struct Pushout {
    Algebra object;
    AlgebraMap i1;
    AlgebraMap i2;
};

Pushout pushout(const AlgebraMap& f1, const AlgebraMap& f2);
/// Coproduct (tensor over Z, or free sum of monoids).
Pushout coproduct(const Algebra& a, const Algebra& b);

struct DiagramArrow {
    int src;
    int dst;
    AlgebraMap map;
};

struct Colimit {
    Algebra object;
    std::vector<AlgebraMap> insertions;
};

Colimit colimit(const std::vector<Algebra>& objects, const std::vector<DiagramArrow>& arrows);

/// The map h: colim -> C with h . insertions[i] = cocone[i] for all i, if the
/// cocone is consistent.
std::optional<AlgebraMap> mediating_map(const Algebra& colim, const std::vector<AlgebraMap>& insertions,
                                        const std::vector<AlgebraMap>& cocone);

/// All homomorphisms A -> B in canonical order. Monoid images are bounded by
/// the configured hom degree.
std::vector<AlgebraMap> hom_set(const Algebra& a, const Algebra& b);
/// The homomorphism determined by images of `gens`, if consistent.
std::optional<AlgebraMap> extend_hom(const Algebra& a, const std::vector<Elem>& gens, const std::vector<Elem>& images,
                                     const Algebra& b);
std::optional<AlgebraMap> find_isomorphism(const Algebra& a, const Algebra& b);
/// Inverse of f if f is an isomorphism.
std::optional<AlgebraMap> inverse_map(const AlgebraMap& f);

struct LocalizationWitness {
    bool holds = false;
    /// The saturated set f^{-1}(B*): element mask (rings) or face (monoids).
    std::vector<char> set;
    std::uint64_t face = 0;
    std::string reason;
};

LocalizationWitness is_localization_map(const AlgebraMap& f);

/// Whether the submonoid generated by `words` is a face.
bool is_face(const Algebra& a, const std::vector<Word>& words);

/// Greedy ring generators beyond the prime subring.
std::vector<int> ring_generators(const FiniteRing& r);

}  // namespace locus
