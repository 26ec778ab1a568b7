#pragma once

// Contributions, Euler characteristic curves and profiles.
//
// Every compute kernel in the library emits a flat list of contributions: a
// filtration point together with the signed change of the Euler
// characteristic at that point. Curves (one parameter) and profiles (n
// parameters) are canonical, aggregated views over such a list.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "eulerprof/error.hpp"

namespace eulerprof {

class FiltrationVector {
 public:
  FiltrationVector() = default;
  explicit FiltrationVector(std::vector<double> coords) : coords_(std::move(coords)) {}
  FiltrationVector(std::initializer_list<double> coords) : coords_(coords) {}
  explicit FiltrationVector(std::span<const double> coords)
      : coords_(coords.begin(), coords.end()) {}

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  friend bool operator==(const FiltrationVector&, const FiltrationVector&) = default;
  friend auto operator<=>(const FiltrationVector&, const FiltrationVector&) = default;

 private:
  std::vector<double> coords_;
};

/// Product order: u <= v iff u_i <= v_i on every axis.
bool product_leq(std::span<const double> u, std::span<const double> v);
bool product_leq(const FiltrationVector& u, const FiltrationVector& v);

struct Contribution {
  FiltrationVector at;
  std::int64_t delta = 0;

  friend bool operator==(const Contribution&, const Contribution&) = default;
};

/// Raw (unaggregated) contributions stored flat: `dim` coordinates per entry.
class ContributionList {
 public:
  explicit ContributionList(std::size_t dim = 1);

  /// Throws kDimensionMismatch if the contributions do not share one dimension.
  static ContributionList from(std::span<const Contribution> contributions);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return deltas_.size(); }
  bool empty() const noexcept { return deltas_.empty(); }

  void push(double at, std::int64_t delta);
  void push(std::span<const double> at, std::int64_t delta);
  void append(const ContributionList& other);
  void reserve(std::size_t n);
  void clear();

  std::span<const double> at(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::int64_t delta(std::size_t i) const { return deltas_[i]; }
  Contribution contribution(std::size_t i) const { return {FiltrationVector(at(i)), deltas_[i]}; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const std::int64_t> deltas() const noexcept { return deltas_; }

  std::int64_t total() const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<std::int64_t> deltas_;
};

/// One-parameter canonical form: strictly increasing jump points, nonzero
/// deltas, and the running Euler characteristic after each jump.
class EulerCharacteristicCurve {
 public:
  EulerCharacteristicCurve() = default;

  std::size_t size() const noexcept { return filtrations_.size(); }
  bool empty() const noexcept { return filtrations_.empty(); }
  std::span<const double> filtrations() const noexcept { return filtrations_; }
  std::span<const std::int64_t> deltas() const noexcept { return deltas_; }
  /// prefix()[i] is the Euler characteristic on [filtrations()[i], filtrations()[i+1]).
  std::span<const std::int64_t> prefix() const noexcept { return prefix_; }
  Contribution contribution(std::size_t i) const { return {{filtrations_[i]}, deltas_[i]}; }

  /// Euler characteristic past the last jump (0 for the empty curve).
  std::int64_t final_value() const { return prefix_.empty() ? 0 : prefix_.back(); }

  /// Number of raw contributions (cells) the curve was built from, when known.
  std::optional<std::size_t> raw_count() const noexcept { return raw_count_; }
  void set_raw_count(std::optional<std::size_t> n) noexcept { raw_count_ = n; }

  friend bool operator==(const EulerCharacteristicCurve& a, const EulerCharacteristicCurve& b) {
    return a.filtrations_ == b.filtrations_ && a.deltas_ == b.deltas_;
  }

 private:
  friend EulerCharacteristicCurve canonicalize_curve(const ContributionList& raw);

  std::vector<double> filtrations_;
  std::vector<std::int64_t> deltas_;
  std::vector<std::int64_t> prefix_;
  std::optional<std::size_t> raw_count_;
};

/// n-parameter canonical form. Points are unique and stored in lexicographic
/// order, which has no meaning beyond making output deterministic.
class EulerCharacteristicProfile {
 public:
  explicit EulerCharacteristicProfile(std::size_t dim = 1) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return deltas_.size(); }
  bool empty() const noexcept { return deltas_.empty(); }
  std::span<const double> at(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::int64_t delta(std::size_t i) const { return deltas_[i]; }
  Contribution contribution(std::size_t i) const { return {FiltrationVector(at(i)), deltas_[i]}; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const std::int64_t> deltas() const noexcept { return deltas_; }

  const std::optional<FiltrationVector>& truncation() const noexcept { return truncation_; }

  /// Smallest and largest coordinate per axis; empty vectors for an empty profile.
  std::vector<double> axis_min() const;
  std::vector<double> axis_max() const;

  friend bool operator==(const EulerCharacteristicProfile& a,
                         const EulerCharacteristicProfile& b) {
    return a.dim_ == b.dim_ && a.coords_ == b.coords_ && a.deltas_ == b.deltas_;
  }

 private:
  friend EulerCharacteristicProfile canonicalize_profile(const ContributionList& raw);
  friend EulerCharacteristicProfile truncate(EulerCharacteristicProfile profile,
                                             const FiltrationVector& bound);

  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<std::int64_t> deltas_;
  std::optional<FiltrationVector> truncation_;
};

using Canonical = std::variant<EulerCharacteristicCurve, EulerCharacteristicProfile>;

/// Sums equal-filtration contributions, drops zero sums and sorts. Requires dim 1.
EulerCharacteristicCurve canonicalize_curve(const ContributionList& raw);
/// Same aggregation for any dimension; points end up in lexicographic order.
EulerCharacteristicProfile canonicalize_profile(const ContributionList& raw);
/// Curve for one-parameter input, profile otherwise.
Canonical canonicalize(const ContributionList& raw);
Canonical canonicalize(std::span<const Contribution> raw);

/// Euler characteristic of the sublevel set at t; 0 before the first jump.
std::int64_t euler_characteristic_at(const EulerCharacteristicCurve& curve, double t);
/// Sum of deltas over contributions below p in the product order.
std::int64_t euler_characteristic_at(const EulerCharacteristicProfile& profile,
                                     std::span<const double> p);
std::int64_t euler_characteristic_at(const EulerCharacteristicProfile& profile,
                                     const FiltrationVector& p);

/// Views a curve as a one-parameter profile and back.
EulerCharacteristicProfile to_profile(const EulerCharacteristicCurve& curve);
EulerCharacteristicCurve to_curve(const EulerCharacteristicProfile& profile);

}  // namespace eulerprof
