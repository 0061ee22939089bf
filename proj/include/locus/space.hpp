#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "locus/algebra.hpp"

namespace locus {

using PointSet = std::uint64_t;

inline bool contains(PointSet s, int x) { return (s >> x) & 1; }
inline PointSet singleton(int x) { return PointSet{1} << x; }

/// A finite space given by minimal open neighbourhoods. y in U_x means y is
/// a generization of x (x lies in the closure of y).
class FiniteSpace {
public:
    FiniteSpace() = default;
    FiniteSpace(std::vector<std::string> names, std::vector<PointSet> min_open);

    int size() const { return static_cast<int>(names_.size()); }
    PointSet all() const;
    const std::string& name(int x) const { return names_.at(static_cast<std::size_t>(x)); }
    const std::vector<std::string>& names() const { return names_; }
    PointSet min_open(int x) const { return min_open_.at(static_cast<std::size_t>(x)); }
    int index_of(const std::string& name) const;

    bool is_open(PointSet u) const;
    /// Smallest open containing `s`.
    PointSet open_hull(PointSet s) const;
    std::vector<int> points_of(PointSet s) const;

private:
    std::vector<std::string> names_;
    std::vector<PointSet> min_open_;
};

/// A finite space with a sheaf of rings or monoids, stored as stalks plus
/// generization maps res(x, y): O_x -> O_y for y in U_x.
class StructuredSpace {
public:
    StructuredSpace(FiniteSpace space, std::vector<Algebra> stalks,
                    std::map<std::pair<int, int>, AlgebraMap> res, bool monoid_kind);

    const FiniteSpace& space() const { return space_; }
    int size() const { return space_.size(); }
    bool monoid_kind() const { return monoid_kind_; }
    const Algebra& stalk(int x) const { return stalks_.at(static_cast<std::size_t>(x)); }
    const std::vector<Algebra>& stalks() const { return stalks_; }
    /// Identity when x == y.
    AlgebraMap res(int x, int y) const;
    const std::map<std::pair<int, int>, AlgebraMap>& restrictions() const { return res_; }

    /// Optional per-point (base point, prime) labels of a localization.
    const nlohmann::json& provenance() const { return provenance_; }
    void set_provenance(nlohmann::json p) { provenance_ = std::move(p); }

    /// Checks stalk kinds, map endpoints and functoriality; throws ValidationError.
    void validate() const;

private:
    FiniteSpace space_;
    std::vector<Algebra> stalks_;
    std::map<std::pair<int, int>, AlgebraMap> res_;
    bool monoid_kind_;
    nlohmann::json provenance_;
};

using SpacePtr = std::shared_ptr<const StructuredSpace>;

SpacePtr make_space(StructuredSpace s);
/// One point with stalk A.
SpacePtr punctual(const Algebra& a, const std::string& name = "*");
SpacePtr empty_space(bool monoid_kind);
/// Subspace on `points` with the induced topology and the same stalks.
SpacePtr subspace(const SpacePtr& x, PointSet points);

bool is_local_space(const StructuredSpace& x);

struct SpaceMorphism {
    SpacePtr source;
    SpacePtr target;
    std::vector<int> point_map;
    /// f_x : O_{target, f(x)} -> O_{source, x}
    std::vector<AlgebraMap> stalk_maps;

    bool operator==(const SpaceMorphism& other) const;
    bool operator!=(const SpaceMorphism& other) const { return !(*this == other); }
};

SpaceMorphism identity_morphism(const SpacePtr& x);
/// g after f.
SpaceMorphism compose(const SpaceMorphism& g, const SpaceMorphism& f);
SpaceMorphism inclusion(const SpacePtr& sub, const SpacePtr& x, const std::vector<int>& point_map);

bool is_continuous(const SpaceMorphism& f);
/// Stalk maps commute with generization maps (checked on generators).
bool is_natural(const SpaceMorphism& f);
bool is_rs_morphism(const SpaceMorphism& f);
bool is_lrs_morphism(const SpaceMorphism& f);

/// Per-point sets of prime indices (sorted).
struct PrimeSystem {
    std::vector<std::vector<int>> primes;
    bool operator==(const PrimeSystem& o) const { return primes == o.primes; }
    bool operator!=(const PrimeSystem& o) const { return primes != o.primes; }
};

PrimeSystem local_prime_system(const StructuredSpace& x);
PrimeSystem terminal_prime_system(const StructuredSpace& x);
PrimeSystem intersect(const std::vector<PrimeSystem>& systems);
bool is_subsystem(const PrimeSystem& m, const PrimeSystem& n);
PrimeSystem pullback_prime_system(const SpaceMorphism& f, const PrimeSystem& n);
bool is_prs_morphism(const SpaceMorphism& f, const PrimeSystem& m, const PrimeSystem& n);
/// Checks every listed prime index is valid; throws UnknownPrime.
void check_prime_system(const StructuredSpace& x, const PrimeSystem& m);

struct Sections {
    Algebra object;
    std::vector<int> points;
    /// object -> O_x for each x in `points`
    std::vector<AlgebraMap> projections;
};

/// Sections over an open U. Rings: compatible families; monoids: only when U
/// is a minimal open (GeneratorExtractionFailed otherwise).
Sections sections(const StructuredSpace& x, PointSet u);
/// Sections computed as the stalk at a point whose minimal open is U.
std::optional<Sections> sections_via_point(const StructuredSpace& x, PointSet u);
/// Whether a family (one element per point of U) is compatible.
bool is_compatible_family(const StructuredSpace& x, PointSet u, const std::vector<Elem>& family);

enum class Flavor { RS, LRS, PRS };

struct PrimedSpace {
    SpacePtr space;
    PrimeSystem primes;
};

/// All morphisms X -> Y of the given flavor in canonical order. PRS needs the
/// prime systems M on X and N on Y.
std::vector<SpaceMorphism> enumerate_morphisms(const SpacePtr& x, const SpacePtr& y, Flavor flavor,
                                               const PrimeSystem* m = nullptr, const PrimeSystem* n = nullptr);

/// Isomorphisms X -> Y (as structured spaces).
std::vector<SpaceMorphism> enumerate_isomorphisms(const SpacePtr& x, const SpacePtr& y, bool first_only = false);
std::optional<SpaceMorphism> find_space_isomorphism(const SpacePtr& x, const SpacePtr& y);
/// An isomorphism phi: X -> X' with p' phi = p, if one exists.
std::optional<SpaceMorphism> find_isomorphism_over(const SpaceMorphism& p, const SpaceMorphism& q);
/// Inverse of an isomorphism.
std::optional<SpaceMorphism> inverse_morphism(const SpaceMorphism& f);

}  // namespace locus
