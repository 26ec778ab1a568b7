#pragma once

// L1 distances between curves and profiles, truncation and merging.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eulerprof/core.hpp"

namespace eulerprof {

/// Canonical a - b: contributions of `b` enter with flipped sign.
EulerCharacteristicProfile merge_difference(const EulerCharacteristicProfile& a,
                                            const EulerCharacteristicProfile& b);
EulerCharacteristicCurve merge_difference(const EulerCharacteristicCurve& a,
                                          const EulerCharacteristicCurve& b);

/// L1 norm of a - b on (-inf, upper], or on all of R when `upper` is absent.
/// Throws kDivergent if the curves end at different values and no upper
/// limit is given.
double distance_ecc(const EulerCharacteristicCurve& a, const EulerCharacteristicCurve& b,
                    std::optional<double> upper = std::nullopt);

/// Euler characteristic of a profile on the cells of its irregular grid.
///
/// breakpoints[k] holds, ascending and unique, the lower integration limit
/// min(0, smallest coordinate on axis k), every contribution coordinate on
/// axis k, and the truncation bound. Cell i along axis k is
/// [breakpoints[k][i], breakpoints[k][i + 1]); `values` is row-major over cells
/// (axis 0 slowest) and holds the Euler characteristic at each lower corner.
struct EcGrid {
  std::vector<std::vector<double>> breakpoints;
  std::vector<std::int64_t> values;

  std::vector<std::size_t> cell_shape() const;
};

/// Throws kTruncation if a coordinate exceeds the bound on its axis.
EcGrid ec_grid(const EulerCharacteristicProfile& profile, const FiltrationVector& truncation);

/// Exact L1 norm of a - b over the box from the lower limits to `truncation`.
double distance_ecp(const EulerCharacteristicProfile& a, const EulerCharacteristicProfile& b,
                    const FiltrationVector& truncation);

/// Attaches a truncation bound, which must lie strictly above every
/// contribution coordinate on every axis (kTruncation otherwise).
EulerCharacteristicProfile truncate(EulerCharacteristicProfile profile,
                                    const FiltrationVector& bound);

}  // namespace eulerprof
