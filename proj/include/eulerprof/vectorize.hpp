#pragma once

// Fixed-grid sampling of curves and profiles into integer vectors/tensors.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eulerprof/core.hpp"

namespace eulerprof {

/// [EC(0), EC(d), ..., EC(f_max)] with d = f_max / (n_samples - 1).
std::vector<std::int64_t> vectorize_ecc(const EulerCharacteristicCurve& curve,
                                        std::size_t n_samples, double f_max);

/// Row-major tensor: the last axis varies fastest.
struct EcTensor {
  std::vector<std::size_t> shape;
  std::vector<std::int64_t> values;

  std::size_t flat_index(std::span<const std::size_t> index) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;
  std::int64_t at(std::span<const std::size_t> index) const { return values[flat_index(index)]; }
};

/// Entry (k_1, ..., k_n) is the profile's value at (k_1 d_1, ..., k_n d_n),
/// d_i = bounds_i / (samples_i - 1).
EcTensor vectorize_ecp(const EulerCharacteristicProfile& profile,
                       std::span<const std::size_t> samples, const FiltrationVector& bounds);

/// Step function holding samples[i] on [i d, (i + 1) d) for i < n - 1 and
/// samples[n - 1] from f_max on.
EulerCharacteristicCurve curve_from_samples(std::span<const std::int64_t> samples, double f_max);

struct VectorizationError {
  double measured = 0.0;
  double bound = 0.0;
};

/// Exact L1 error on (-inf, f_max] between a curve and its sampled step
/// function, next to the bound d * (|K| / 2 + F), where |K| is the curve's raw
/// contribution count and F the total variation of the samples. Throws
/// kParameter without |K| and kBoundViolation if the error exceeds the bound.
VectorizationError vectorization_error_bound(const EulerCharacteristicCurve& curve,
                                             std::size_t n_samples, double f_max);

}  // namespace eulerprof
