#pragma once

#include <json.hpp>

#include "locus/space.hpp"

namespace locus {

using nlohmann::json;

/// The builder description when there is one, otherwise table (rings) or
/// presented (monoids) form.
json algebra_to_json(const Algebra& a);
/// Throws ParseError on malformed input and InvalidParameter on bad values.
Algebra algebra_from_json(const json& j);

json element_to_json(const Algebra& a, const Elem& e);
Elem element_from_json(const Algebra& a, const json& j);

/// {"table": [...]} for rings, {"images": [[...], ...]} for monoids.
json map_to_json(const AlgebraMap& f);
/// Throws ValidationError if the data is not a homomorphism.
AlgebraMap map_from_json(const json& j, const Algebra& src, const Algebra& dst);

/// {"kind", "points", "min_open", "stalks", "res"} plus "provenance" when set.
json space_to_json(const StructuredSpace& x);
SpacePtr space_from_json(const json& j);

/// {"point_map": {x: y}, "stalk_maps": {x: map}} keyed by point names.
json morphism_to_json(const SpaceMorphism& f);
SpaceMorphism morphism_from_json(const json& j, const SpacePtr& source, const SpacePtr& target);

/// {point: [prime indices]} keyed by point names.
json prime_system_to_json(const StructuredSpace& x, const PrimeSystem& m);
/// Accepts "terminal", "local" or the object form.
PrimeSystem prime_system_from_json(const json& j, const StructuredSpace& x);

}  // namespace locus
