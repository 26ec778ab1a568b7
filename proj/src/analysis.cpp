#include "eulerprof/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace eulerprof {

namespace {

constexpr std::size_t kMaxGridCells = std::size_t{1} << 28;

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

EulerCharacteristicProfile merge_difference(const EulerCharacteristicProfile& a,
                                            const EulerCharacteristicProfile& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "profiles have dimensions " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()));
  }
  ContributionList raw(a.dim());
  raw.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) raw.push(a.at(i), a.delta(i));
  for (std::size_t i = 0; i < b.size(); ++i) raw.push(b.at(i), -b.delta(i));
  return canonicalize_profile(raw);
}

EulerCharacteristicCurve merge_difference(const EulerCharacteristicCurve& a,
                                          const EulerCharacteristicCurve& b) {
  ContributionList raw(1);
  raw.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) raw.push(a.filtrations()[i], a.deltas()[i]);
  for (std::size_t i = 0; i < b.size(); ++i) raw.push(b.filtrations()[i], -b.deltas()[i]);
  auto out = canonicalize_curve(raw);
  out.set_raw_count(std::nullopt);
  return out;
}

double distance_ecc(const EulerCharacteristicCurve& a, const EulerCharacteristicCurve& b,
                    std::optional<double> upper) {
  if (upper && std::isnan(*upper)) throw Error(ErrorKind::kParameter, "upper limit is NaN");
  if (!upper && a.final_value() != b.final_value()) {
    throw Error(ErrorKind::kDivergent,
                "curves end at different values (" + std::to_string(a.final_value()) + " vs " +
                    std::to_string(b.final_value()) + "); pass an upper limit");
  }

  // One merge pass over both jump lists; points where the difference does
  // not change are skipped so the sum runs over the support of a - b.
  const auto fa = a.filtrations();
  const auto da = a.deltas();
  const auto fb = b.filtrations();
  const auto db = b.deltas();
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t diff = 0;
  double prev = 0.0;
  bool started = false;
  double total = 0.0;
  while (i < fa.size() || j < fb.size()) {
    double f;
    if (j >= fb.size() || (i < fa.size() && fa[i] < fb[j])) {
      f = fa[i];
    } else {
      f = fb[j];
    }
    std::int64_t change = 0;
    if (i < fa.size() && fa[i] == f) change += da[i++];
    if (j < fb.size() && fb[j] == f) change -= db[j++];
    if (change == 0) continue;
    if (upper && f > *upper) break;
    if (started) total += (f - prev) * static_cast<double>(std::llabs(diff));
    diff += change;
    prev = f;
    started = true;
  }
  if (upper && started && *upper > prev) {
    total += (*upper - prev) * static_cast<double>(std::llabs(diff));
  }
  return total;
}

std::vector<std::size_t> EcGrid::cell_shape() const {
  std::vector<std::size_t> shape;
  shape.reserve(breakpoints.size());
  for (const auto& b : breakpoints) shape.push_back(b.empty() ? 0 : b.size() - 1);
  return shape;
}

EcGrid ec_grid(const EulerCharacteristicProfile& profile, const FiltrationVector& truncation) {
  const std::size_t n = profile.dim();
  if (truncation.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "truncation has dimension " + std::to_string(truncation.size()) +
                    ", profile has dimension " + std::to_string(n));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(truncation[k])) {
      throw Error(ErrorKind::kTruncation, "truncation on axis " + std::to_string(k) + " is not finite");
    }
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto p = profile.at(i);
    for (std::size_t k = 0; k < n; ++k) {
      if (p[k] > truncation[k]) {
        throw Error(ErrorKind::kTruncation,
                    "contribution at " + format_value(p[k]) + " on axis " + std::to_string(k) +
                        " lies above the truncation " + format_value(truncation[k]));
      }
    }
  }

  EcGrid grid;
  grid.breakpoints.resize(n);
  std::size_t cells = 1;
  for (std::size_t k = 0; k < n; ++k) {
    auto& b = grid.breakpoints[k];
    b.reserve(profile.size() + 2);
    double lower = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      b.push_back(profile.at(i)[k]);
      lower = std::min(lower, profile.at(i)[k]);
    }
    b.push_back(lower);
    b.push_back(truncation[k]);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    cells *= b.size() - 1;
    if (cells > kMaxGridCells) {
      throw Error(ErrorKind::kSizeRefusal, "profile grid exceeds " +
                                               std::to_string(kMaxGridCells) + " cells");
    }
  }
  const auto shape = grid.cell_shape();
  grid.values.assign(cells, 0);
  if (cells == 0) return grid;

  // Deltas at their cells, then a running sum along every axis. A
  // contribution sitting on the truncation bound owns no cell.
  std::vector<std::size_t> strides(n, 1);
  for (std::size_t k = n; k-- > 1;) strides[k - 1] = strides[k] * shape[k];
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto p = profile.at(i);
    std::size_t flat = 0;
    bool inside = true;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& b = grid.breakpoints[k];
      const auto idx = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), p[k]) - b.begin());
      if (idx >= shape[k]) {
        inside = false;
        break;
      }
      flat += idx * strides[k];
    }
    if (inside) grid.values[flat] += profile.delta(i);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t stride = strides[k];
    const std::size_t extent = shape[k];
    for (std::size_t flat = 0; flat < cells; ++flat) {
      if ((flat / stride) % extent == 0) continue;
      grid.values[flat] += grid.values[flat - stride];
    }
  }
  return grid;
}

double distance_ecp(const EulerCharacteristicProfile& a, const EulerCharacteristicProfile& b,
                    const FiltrationVector& truncation) {
  const auto diff = merge_difference(a, b);
  const auto grid = ec_grid(diff, truncation);
  const auto shape = grid.cell_shape();
  const std::size_t n = shape.size();
  if (grid.values.empty()) return 0.0;

  std::vector<std::vector<double>> widths(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& bp = grid.breakpoints[k];
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) widths[k].push_back(bp[i + 1] - bp[i]);
  }

  // Slabs along axis 0 are summed independently, then reduced in order.
  const std::size_t slabs = shape[0];
  const std::size_t slab_cells = grid.values.size() / slabs;
  std::vector<double> partial(slabs, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < slabs; ++s) {
    std::vector<std::size_t> idx(n, 0);
    idx[0] = s;
    double sum = 0.0;
    for (std::size_t c = 0; c < slab_cells; ++c) {
      const std::int64_t ec = grid.values[s * slab_cells + c];
      if (ec != 0) {
        double volume = widths[0][s];
        for (std::size_t k = 1; k < n; ++k) volume *= widths[k][idx[k]];
        sum += volume * static_cast<double>(std::llabs(ec));
      }
      for (std::size_t k = n; k-- > 1;) {
        if (++idx[k] < shape[k]) break;
        idx[k] = 0;
      }
    }
    partial[s] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

EulerCharacteristicProfile truncate(EulerCharacteristicProfile profile,
                                    const FiltrationVector& bound) {
  if (bound.size() != profile.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "truncation has dimension " + std::to_string(bound.size()) +
                    ", profile has dimension " + std::to_string(profile.dim()));
  }
  const auto top = profile.axis_max();
  for (std::size_t k = 0; k < top.size(); ++k) {
    if (!(top[k] < bound[k])) {
      throw Error(ErrorKind::kTruncation,
                  "truncation " + format_value(bound[k]) + " on axis " + std::to_string(k) +
                      " is not above the largest coordinate " + format_value(top[k]));
    }
  }
  profile.truncation_ = bound;
  return profile;
}

}  // namespace eulerprof
