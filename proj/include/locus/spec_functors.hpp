#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locus/limits.hpp"

namespace locus {

/// Spec A as the localization of the punctual space at the terminal system.
LocalizedSpace global_spec(const Algebra& a);
/// Subspace of Spec A on the given primes; throws UnknownPrime.
SpacePtr spec_subset(const Algebra& a, const std::vector<int>& primes);
/// Global sections.
Algebra gamma(const StructuredSpace& x);

/// Spec B -> Spec A for f: A -> B.
SpaceMorphism spec_morphism(const AlgebraMap& f, const LocalizedSpace& spec_b, const LocalizedSpace& spec_a);

struct SpecGammaReport {
    std::size_t left = 0;
    std::size_t right = 0;
    bool round_trip_left = false;
    bool round_trip_right = false;
    bool holds() const { return left == right && round_trip_left && round_trip_right; }
};

/// The A -> Gamma(X) corresponding to h: X -> Spec A.
AlgebraMap to_gamma(const SpaceMorphism& h, const LocalizedSpace& spec_a);
/// The X -> Spec A corresponding to phi: A -> Gamma(X).
SpaceMorphism from_gamma(const AlgebraMap& phi, const SpacePtr& x, const LocalizedSpace& spec_a);
/// Hom_LRS(X, Spec A) against Hom(A, Gamma(X)) for local X.
SpecGammaReport spec_gamma_adjunction(const SpacePtr& x, const Algebra& a);

/// An O_X-algebra: a sheaf on the same underlying space as X together with
/// the structure morphism (X, A) -> X, which is the identity on points.
struct AlgebraOverSheaf {
    SpacePtr base;
    SpacePtr sheaf;
    SpaceMorphism structure;

    /// Throws ValidationError.
    void validate() const;
};

/// O_X itself.
AlgebraOverSheaf structure_sheaf(const SpacePtr& x);
/// Builds the O_X-algebra from stalks, generization maps and structure maps.
AlgebraOverSheaf make_algebra_over(const SpacePtr& x, std::vector<Algebra> stalks,
                                   std::map<std::pair<int, int>, AlgebraMap> res, std::vector<AlgebraMap> structure);

struct RelativeSpec {
    LocalizedSpace loc;
    /// Spec_X A -> X
    SpaceMorphism to_base;
};

/// Localization of (X, A) at the inverse image of the local system of X.
RelativeSpec relative_spec(const AlgebraOverSheaf& a);

struct AlgebraColimit {
    AlgebraOverSheaf object;
    /// (X, colim) -> (X, A_i) for each input algebra
    std::vector<SpaceMorphism> insertions;
};

/// Pointwise colimit of the O_X-algebras under O_X (the pushout for two).
AlgebraColimit colimit_over(const std::vector<AlgebraOverSheaf>& algebras);
/// g*A for g: X -> Y and A over O_Y.
AlgebraOverSheaf base_change(const SpaceMorphism& g, const AlgebraOverSheaf& a);
/// f_* O_X over Y for f: X -> Y (ring stalks).
AlgebraOverSheaf pushforward(const SpaceMorphism& f);

struct IsoReport {
    bool holds = false;
    std::string detail;
};

/// Spec_X of the colimit against the fiber product over X of the Spec_X A_i.
IsoReport relspec_limits_check(const std::vector<AlgebraOverSheaf>& algebras);
/// Spec_X g*A against X x_Y Spec_Y A, over X.
IsoReport base_change_check(const SpaceMorphism& g, const AlgebraOverSheaf& a);
/// Spec_{Spec A} f_* O_{Spec B} against Spec B, over Spec A.
IsoReport affine_agreement_check(const AlgebraMap& f);

struct LemmaChainReport {
    bool local_system_pullback = false;
    bool retraction = false;
    bool constant_sheaf = false;
    bool holds() const { return local_system_pullback && retraction && constant_sheaf; }
};

/// Compares localize(Spec A, M), localize((Spec A, constant A), N) and Spec A,
/// and checks that M = a* N for a: (X, O_X) -> (X, A).
LemmaChainReport spec_lemma_chain(const Algebra& a);

}  // namespace locus
