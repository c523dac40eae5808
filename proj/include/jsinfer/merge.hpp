#pragma once

#include <span>

#include "jsinfer/infer.hpp"
#include "jsinfer/sis.hpp"

namespace jsinfer {

/// Joins two nodes into a union keyed by kind: alternatives sharing a kind
/// deep-merge, union arguments are flattened, and a singleton result
/// collapses to its sole member. Never nests unions or duplicates kinds.
SisNode make_union(SisNode a, SisNode b);

/// Merges two SIS nodes: same-kind primitives collapse, objects union their
/// field maps (shared names recurse), collections merge item schemas (an
/// absent item is the identity), and anything else goes through make_union.
/// Commutative, associative and idempotent up to canonical form.
SisNode merge_nodes(SisNode a, SisNode b);

/// Global aggregation phase: folds partition-local roots into one canonical
/// SIS. The empty collection yields the empty object node.
SisNode merge_sis(std::span<const LocalSis> locals);

}  // namespace jsinfer
