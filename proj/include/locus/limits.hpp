#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locus/localize.hpp"

namespace locus {

struct DiagramEdge {
    int src;
    int dst;
    SpaceMorphism map;
};

/// A finite diagram of structured spaces. Prime systems are only needed for
/// prs_limit.
struct FiniteDiagram {
    std::vector<SpacePtr> objects;
    std::vector<DiagramEdge> arrows;
    std::vector<std::optional<PrimeSystem>> primes;

    /// Checks endpoints and RS legality of every arrow; throws ValidationError.
    void validate() const;
};

/// X1 -> Y <- X2 as a diagram with objects (X1, X2, Y).
FiniteDiagram cospan(const SpaceMorphism& f1, const SpaceMorphism& f2);
/// The pair f, g: X => Y with objects (X, Y).
FiniteDiagram parallel_pair(const SpaceMorphism& f, const SpaceMorphism& g);

struct RsLimit {
    SpacePtr space;
    std::vector<SpaceMorphism> projections;
    /// Component point of each object for every limit point.
    std::vector<std::vector<int>> tuples;
};

RsLimit rs_limit(const FiniteDiagram& d);

struct PrsLimit {
    RsLimit rs;
    PrimeSystem primes;
};

PrsLimit prs_limit(const FiniteDiagram& d);

struct LrsLimit {
    PrsLimit prs;
    LocalizedSpace loc;
    SpacePtr space;
    std::vector<SpaceMorphism> projections;
};

/// Localization of prs_limit with every M_i the local prime system.
LrsLimit lrs_limit(const FiniteDiagram& d);

/// The morphism Y -> lim D induced by a cone (one leg per object).
SpaceMorphism rs_mediating(const RsLimit& l, const std::vector<SpaceMorphism>& cone);
SpaceMorphism lrs_mediating(const LrsLimit& l, const std::vector<SpaceMorphism>& cone);

struct UniversalReport {
    std::size_t cones = 0;
    std::size_t failures = 0;
    std::string first_failure;
    bool holds() const { return failures == 0; }
};

/// Enumerates every cone from `y` over the diagram and checks that exactly one
/// morphism into the limit commutes with it, and that it is the mediating one.
UniversalReport check_universal_property(const RsLimit& l, const FiniteDiagram& d, const SpacePtr& y);
UniversalReport check_universal_property(const LrsLimit& l, const FiniteDiagram& d, const SpacePtr& y);

/// Primes of B1 (x)_A B2 pulling back to both maximal ideals. The maps must be
/// local.
struct SSet {
    Pushout tensor;
    std::vector<int> primes;
    /// Specialization-closed inside Spec of the tensor.
    bool closed = false;
    /// Rings only: |S| matches Spec(k1 (x)_k k2) via the induced map.
    std::optional<bool> residue_match;
};

SSet s_set(const AlgebraMap& f1, const AlgebraMap& f2);
/// Uses the first structure maps A -> B1, A -> B2; throws NotAMap if none.
SSet s_set(const Algebra& a, const Algebra& b1, const Algebra& b2);

struct FiberRow {
    int rs_point;
    std::vector<int> fiber;
    std::size_t s_size;
    /// The fiber subspace is isomorphic to Spec of the stalk restricted to S.
    bool matches_spec_subset;
};

struct ComparisonMap {
    SpaceMorphism f1;
    SpaceMorphism f2;
    LrsLimit lrs;
    SpaceMorphism eta;
    std::vector<FiberRow> fibers;
    bool surjective = false;
    bool stalks_are_localizations = false;
    bool isomorphism = false;
};

ComparisonMap comparison(const SpaceMorphism& f1, const SpaceMorphism& f2);

/// k(f(x)) -> k(x) is an isomorphism; throws MonoidUnsupported.
bool is_rational(const SpaceMorphism& f, int x);

struct RationalReport {
    /// Points rational over the base whose eta-fiber is not a singleton.
    std::size_t part1_checked = 0;
    std::size_t part1_failures = 0;
    /// RS points with a residue embedding k(x2) -> k(x1) over k(y).
    std::size_t part2_checked = 0;
    std::size_t part2_failures = 0;
    /// RS points without such an embedding.
    std::vector<int> part2_skipped;
    bool holds() const { return part1_failures == 0 && part2_failures == 0; }
};

RationalReport rational_fiber_checks(const ComparisonMap& c);

}  // namespace locus
