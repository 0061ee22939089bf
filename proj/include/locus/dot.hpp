#pragma once

#include <string>

#include "locus/space.hpp"

namespace locus {

/// Graphviz text for the specialization preorder: one node per point
/// labelled with its stalk, one edge per covering relation from the more
/// generic point to the more special one.
std::string emit_dot(const StructuredSpace& x, const std::string& graph_name = "space");

}  // namespace locus
