#include "eulerprof/vectorize.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "eulerprof/analysis.hpp"

namespace eulerprof {

namespace {

void check_samples(std::size_t n, double f_max, std::size_t axis) {
  if (n < 2) {
    throw Error(ErrorKind::kParameter,
                "axis " + std::to_string(axis) + " needs at least 2 samples, got " + std::to_string(n));
  }
  if (!(f_max > 0) || !std::isfinite(f_max)) {
    throw Error(ErrorKind::kParameter, "sampling bound on axis " + std::to_string(axis) +
                                           " must be positive and finite");
  }
}

// i-th sample position; the last one is exactly f_max.
double sample_at(std::size_t i, std::size_t n, double f_max) {
  if (i + 1 == n) return f_max;
  return static_cast<double>(i) * (f_max / static_cast<double>(n - 1));
}

}  // namespace

std::vector<std::int64_t> vectorize_ecc(const EulerCharacteristicCurve& curve,
                                        std::size_t n_samples, double f_max) {
  check_samples(n_samples, f_max, 0);
  std::vector<std::int64_t> out(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    out[i] = euler_characteristic_at(curve, sample_at(i, n_samples, f_max));
  }
  return out;
}

std::size_t EcTensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != shape.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "tensor index has the wrong rank");
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] >= shape[k]) throw Error(ErrorKind::kParameter, "tensor index out of range");
    flat = flat * shape[k] + index[k];
  }
  return flat;
}

std::vector<std::size_t> EcTensor::multi_index(std::size_t flat) const {
  if (flat >= values.size()) throw Error(ErrorKind::kParameter, "flat index out of range");
  std::vector<std::size_t> index(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    index[k] = flat % shape[k];
    flat /= shape[k];
  }
  return index;
}

EcTensor vectorize_ecp(const EulerCharacteristicProfile& profile,
                       std::span<const std::size_t> samples, const FiltrationVector& bounds) {
  const std::size_t n = profile.dim();
  if (samples.size() != n || bounds.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "profile has dimension " + std::to_string(n) + " but got " +
                    std::to_string(samples.size()) + " sample counts and " +
                    std::to_string(bounds.size()) + " bounds");
  }
  EcTensor tensor;
  tensor.shape.assign(samples.begin(), samples.end());
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    check_samples(samples[k], bounds[k], k);
    total *= samples[k];
  }
  tensor.values.assign(total, 0);

  std::vector<std::vector<double>> grid(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < samples[k]; ++i) grid[k].push_back(sample_at(i, samples[k], bounds[k]));
  }

#pragma omp parallel for schedule(static)
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> point(n);
    std::size_t rest = flat;
    for (std::size_t k = n; k-- > 0;) {
      point[k] = grid[k][rest % samples[k]];
      rest /= samples[k];
    }
    tensor.values[flat] = euler_characteristic_at(profile, point);
  }
  return tensor;
}

EulerCharacteristicCurve curve_from_samples(std::span<const std::int64_t> samples, double f_max) {
  check_samples(samples.size(), f_max, 0);
  ContributionList raw(1);
  std::int64_t previous = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    raw.push(sample_at(i, samples.size(), f_max), samples[i] - previous);
    previous = samples[i];
  }
  auto curve = canonicalize_curve(raw);
  curve.set_raw_count(std::nullopt);
  return curve;
}

VectorizationError vectorization_error_bound(const EulerCharacteristicCurve& curve,
                                             std::size_t n_samples, double f_max) {
  if (!curve.raw_count()) {
    throw Error(ErrorKind::kParameter,
                "the curve does not record its raw contribution count |K|");
  }
  const auto samples = vectorize_ecc(curve, n_samples, f_max);
  std::int64_t variation = 0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    variation += std::llabs(samples[i] - samples[i + 1]);
  }
  const double delta = f_max / static_cast<double>(n_samples - 1);
  VectorizationError result;
  result.measured = distance_ecc(curve, curve_from_samples(samples, f_max), f_max);
  result.bound = delta * (static_cast<double>(*curve.raw_count()) / 2.0 +
                          static_cast<double>(variation));
  if (result.measured > result.bound) {
    throw Error(ErrorKind::kBoundViolation,
                "vectorization error " + std::to_string(result.measured) + " exceeds bound " +
                    std::to_string(result.bound));
  }
  return result;
}

}  // namespace eulerprof
