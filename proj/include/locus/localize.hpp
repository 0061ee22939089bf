#pragma once

#include <utility>
#include <vector>

#include "locus/space.hpp"

namespace locus {

/// (X, M)^loc together with the projection to X.
struct LocalizedSpace {
    SpacePtr space;
    SpaceMorphism pi;
    SpacePtr base;
    PrimeSystem primes;
    /// (base point, prime index) of each point.
    std::vector<std::pair<int, int>> provenance;
    /// O_x -> (O_x)_z for each point (x, z).
    std::vector<Localization> localizations;

    /// Index of (x, z), or -1.
    int point_of(int x, int z) const;
};

LocalizedSpace localize(const SpacePtr& x, const PrimeSystem& m);

/// U(U_x, s) for s in O_x: points (x', z') with x' in U_x and s|x' not in z'.
PointSet basic_open(const LocalizedSpace& l, int x, const Elem& s);
/// U(U, s) for a compatible family s over the open U (one element per point).
PointSet basic_open(const LocalizedSpace& l, PointSet u, const std::vector<Elem>& s);

/// The induced morphism X^loc -> Y^loc of a PRS morphism (X, M) -> (Y, N);
/// throws NotPRS.
SpaceMorphism lift_morphism(const SpaceMorphism& f, const LocalizedSpace& lx, const LocalizedSpace& ly);

/// For g: Y -> X with Y local and g a PRS morphism (Y, M_Y) -> (X, M), the
/// morphism Y -> X^loc it corresponds to; throws NotPRS.
SpaceMorphism lift_to_localization(const SpaceMorphism& g, const LocalizedSpace& lx);

struct AdjunctionReport {
    std::size_t left = 0;
    std::size_t right = 0;
    bool round_trip_left = false;
    bool round_trip_right = false;
    bool holds() const { return left == right && round_trip_left && round_trip_right; }
};

/// Hom_LRS(Y, (X,M)^loc) against Hom_PRS((Y, M_Y), (X, M)), or against
/// Hom_RS(Y, X) when `chevalley` (then M should be the terminal system).
AdjunctionReport check_localization_adjunction(const SpacePtr& y, const LocalizedSpace& lx, bool chevalley = false);

}  // namespace locus
