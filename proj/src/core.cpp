#include "eulerprof/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace eulerprof {

bool product_leq(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "point dimensions differ: " + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()));
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] <= v[i])) return false;
  }
  return true;
}

bool product_leq(const FiltrationVector& u, const FiltrationVector& v) {
  return product_leq(u.coords(), v.coords());
}

ContributionList::ContributionList(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorKind::kParameter, "contribution dimension must be >= 1");
}

ContributionList ContributionList::from(std::span<const Contribution> contributions) {
  if (contributions.empty()) return ContributionList(1);
  ContributionList out(contributions.front().at.size());
  out.reserve(contributions.size());
  for (const auto& c : contributions) out.push(c.at.coords(), c.delta);
  return out;
}

void ContributionList::push(double at, std::int64_t delta) {
  if (dim_ != 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "scalar contribution pushed into a " + std::to_string(dim_) + "-parameter list");
  }
  coords_.push_back(at);
  deltas_.push_back(delta);
}

void ContributionList::push(std::span<const double> at, std::int64_t delta) {
  if (at.size() != dim_) {
    throw Error(ErrorKind::kDimensionMismatch,
                "contribution of dimension " + std::to_string(at.size()) +
                    " in a list of dimension " + std::to_string(dim_));
  }
  coords_.insert(coords_.end(), at.begin(), at.end());
  deltas_.push_back(delta);
}

void ContributionList::append(const ContributionList& other) {
  if (other.empty()) return;
  if (other.dim_ != dim_) {
    throw Error(ErrorKind::kDimensionMismatch,
                "cannot append a " + std::to_string(other.dim_) + "-parameter list to a " +
                    std::to_string(dim_) + "-parameter list");
  }
  coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
  deltas_.insert(deltas_.end(), other.deltas_.begin(), other.deltas_.end());
}

void ContributionList::reserve(std::size_t n) {
  coords_.reserve(n * dim_);
  deltas_.reserve(n);
}

void ContributionList::clear() {
  coords_.clear();
  deltas_.clear();
}

std::int64_t ContributionList::total() const {
  return std::accumulate(deltas_.begin(), deltas_.end(), std::int64_t{0});
}

namespace {

void require_finite(const ContributionList& raw) {
  for (double x : raw.coords()) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kParameter, "non-finite filtration value in contribution list");
    }
  }
}

}  // namespace

EulerCharacteristicCurve canonicalize_curve(const ContributionList& raw) {
  if (raw.dim() != 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "a curve needs one-parameter contributions, got " + std::to_string(raw.dim()));
  }
  require_finite(raw);

  std::vector<std::pair<double, std::int64_t>> sorted(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) sorted[i] = {raw.at(i)[0], raw.delta(i)};
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  EulerCharacteristicCurve curve;
  std::int64_t running = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double f = sorted[i].first;
    std::int64_t sum = 0;
    for (; i < sorted.size() && sorted[i].first == f; ++i) sum += sorted[i].second;
    if (sum == 0) continue;
    running += sum;
    curve.filtrations_.push_back(f);
    curve.deltas_.push_back(sum);
    curve.prefix_.push_back(running);
  }
  curve.raw_count_ = raw.size();
  return curve;
}

EulerCharacteristicProfile canonicalize_profile(const ContributionList& raw) {
  require_finite(raw);
  const std::size_t dim = raw.dim();
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    auto pa = raw.at(a);
    auto pb = raw.at(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(order.begin(), order.end(), less);

  EulerCharacteristicProfile profile(dim);
  for (std::size_t i = 0; i < order.size();) {
    auto point = raw.at(order[i]);
    std::int64_t sum = 0;
    for (; i < order.size() && std::ranges::equal(raw.at(order[i]), point); ++i) {
      sum += raw.delta(order[i]);
    }
    if (sum == 0) continue;
    profile.coords_.insert(profile.coords_.end(), point.begin(), point.end());
    profile.deltas_.push_back(sum);
  }
  return profile;
}

Canonical canonicalize(const ContributionList& raw) {
  if (raw.dim() == 1) return canonicalize_curve(raw);
  return canonicalize_profile(raw);
}

Canonical canonicalize(std::span<const Contribution> raw) {
  return canonicalize(ContributionList::from(raw));
}

std::vector<double> EulerCharacteristicProfile::axis_min() const {
  if (empty()) return {};
  std::vector<double> out(at(0).begin(), at(0).end());
  for (std::size_t i = 1; i < size(); ++i) {
    auto p = at(i);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = std::min(out[k], p[k]);
  }
  return out;
}

std::vector<double> EulerCharacteristicProfile::axis_max() const {
  if (empty()) return {};
  std::vector<double> out(at(0).begin(), at(0).end());
  for (std::size_t i = 1; i < size(); ++i) {
    auto p = at(i);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = std::max(out[k], p[k]);
  }
  return out;
}

std::int64_t euler_characteristic_at(const EulerCharacteristicCurve& curve, double t) {
  const auto f = curve.filtrations();
  const auto ec = curve.prefix();
  const std::size_t n = f.size();
  if (n == 0 || !(t >= f[0])) return 0;
  if (t >= f[n - 1]) return ec[n - 1];

  // Invariant: f[lo] <= t < f[hi]. Interpolation probes first, bisection once
  // the probe budget is spent.
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  const int budget = 2 * static_cast<int>(std::bit_width(n));
  int probes = 0;
  while (hi - lo > 1) {
    std::size_t pos = lo + (hi - lo) / 2;
    if (probes < budget) {
      ++probes;
      const double ratio = (t - f[lo]) / (f[hi] - f[lo]);
      if (std::isfinite(ratio)) {
        const double guess = static_cast<double>(lo) + ratio * static_cast<double>(hi - lo);
        pos = std::clamp(static_cast<std::size_t>(guess), lo + 1, hi - 1);
      }
    }
    if (f[pos] <= t) {
      lo = pos;
    } else {
      hi = pos;
    }
  }
  return ec[lo];
}

std::int64_t euler_characteristic_at(const EulerCharacteristicProfile& profile,
                                     std::span<const double> p) {
  if (p.size() != profile.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "query point has dimension " + std::to_string(p.size()) +
                    ", profile has dimension " + std::to_string(profile.dim()));
  }
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (product_leq(profile.at(i), p)) sum += profile.delta(i);
  }
  return sum;
}

std::int64_t euler_characteristic_at(const EulerCharacteristicProfile& profile,
                                     const FiltrationVector& p) {
  return euler_characteristic_at(profile, p.coords());
}

EulerCharacteristicProfile to_profile(const EulerCharacteristicCurve& curve) {
  ContributionList raw(1);
  for (std::size_t i = 0; i < curve.size(); ++i) raw.push(curve.filtrations()[i], curve.deltas()[i]);
  return canonicalize_profile(raw);
}

EulerCharacteristicCurve to_curve(const EulerCharacteristicProfile& profile) {
  if (profile.dim() != 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "only one-parameter profiles convert to curves, got " +
                    std::to_string(profile.dim()));
  }
  ContributionList raw(1);
  for (std::size_t i = 0; i < profile.size(); ++i) raw.push(profile.at(i)[0], profile.delta(i));
  auto curve = canonicalize_curve(raw);
  curve.set_raw_count(std::nullopt);
  return curve;
}

}  // namespace eulerprof
