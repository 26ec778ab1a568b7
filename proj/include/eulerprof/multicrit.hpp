#pragma once

// Contributions of a cell entering a multifiltration at several incomparable
// points. The cell must count (-1)^dim exactly once on the union of the
// up-cones of its births, so overlaps are corrected at joins of births.

#include <cstddef>
#include <vector>

#include "eulerprof/core.hpp"

namespace eulerprof::multicrit {

struct MulticriticalCell {
  int dim = 0;
  std::vector<FiltrationVector> births;
};

/// Coordinatewise maximum.
FiltrationVector join(const FiltrationVector& u, const FiltrationVector& v);

/// Throws kPrecondition if two births are comparable (or equal), kDimensionMismatch
/// if they differ in length, kParameter if there are none.
void validate(const MulticriticalCell& cell);

/// Signed contributions whose cone sums equal (-1)^dim on the union of the
/// birth cones and 0 elsewhere. Zero corrections are omitted.
std::vector<Contribution> expand_multicritical(const MulticriticalCell& cell);

/// Same, appended to a raw list of matching dimension.
void expand_multicritical(const MulticriticalCell& cell, ContributionList& out);

}  // namespace eulerprof::multicrit
