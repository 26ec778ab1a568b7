#pragma once

// Vietoris-Rips contributions by per-vertex local clique enumeration.
//
// Each vertex owns the simplices whose lowest vertex (in the cloud's ordering)
// it is. Those simplices are exactly the cliques containing the vertex in its
// local graph of subsequent neighbours, listed dimension by dimension. Roots
// are independent, so the parallel kernel hands whole roots to workers.
//
// Threshold convention: an edge exists iff its Euclidean length is <= t_max;
// a simplex is filtered by its diameter (0 for vertices).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "eulerprof/core.hpp"

namespace eulerprof::vr {

class PointCloud {
 public:
  PointCloud() = default;
  /// `coords` holds `size * dim` values, one point per row. Identity ordering.
  PointCloud(std::size_t dim, std::vector<double> coords);
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> coords() const noexcept { return coords_; }

  /// ordering()[r] is the index of the point with rank r.
  std::span<const std::size_t> ordering() const noexcept { return ordering_; }
  /// Same points, different ordering. Throws kParameter unless `ordering` is a
  /// permutation of [0, size).
  PointCloud with_ordering(std::vector<std::size_t> ordering) const;

  double distance(std::size_t i, std::size_t j) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<std::size_t> ordering_;
};

/// One additional filtration axis. A simplex's value is the maximum over its
/// vertices of `vertex_values` and over its edges of `edge_value`; either
/// source may be absent (vertex values then default to 0).
struct FiltrationAxis {
  std::vector<double> vertex_values;
  std::function<double(std::size_t, std::size_t)> edge_value;
};

/// Extra axes after the diameter axis (which is always axis 0).
struct VertexFiltrationSpec {
  std::vector<FiltrationAxis> extra_axes;

  std::size_t axes() const noexcept { return 1 + extra_axes.size(); }
};

/// For every rank r, the ranks s > r within t_max together with edge lengths.
struct SubsequentNeighbours {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<std::uint32_t> ranks;
  std::vector<double> lengths;

  std::size_t size() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const std::uint32_t> ranks_of(std::size_t r) const {
    return {ranks.data() + offsets[r], offsets[r + 1] - offsets[r]};
  }
  std::span<const double> lengths_of(std::size_t r) const {
    return {lengths.data() + offsets[r], offsets[r + 1] - offsets[r]};
  }
};

SubsequentNeighbours build_subsequent_neighbours(const PointCloud& cloud, double t_max,
                                                 int workers = 1);

/// The root vertex and its subsequent neighbours, relabelled 0..m: local id 0
/// is the root, the others follow the cloud ordering. Edge values are stored
/// per axis as dense (m+1)^2 matrices; +inf marks a missing edge.
class LocalGraph {
 public:
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t axes() const noexcept { return axes_; }
  /// Cloud index of local vertex v.
  std::size_t point_index(std::uint32_t v) const { return points_[v]; }
  std::span<const std::size_t> point_indices() const noexcept { return points_; }
  bool has_edge(std::uint32_t u, std::uint32_t v) const;
  double edge_length(std::uint32_t u, std::uint32_t v) const { return edge_value(0, u, v); }
  double edge_value(std::size_t axis, std::uint32_t u, std::uint32_t v) const {
    return values_[(axis * size() + u) * size() + v];
  }
  /// Filtration of the root vertex on every axis.
  std::span<const double> root_values() const noexcept { return root_values_; }
  /// Local ids w > v adjacent to v, ascending.
  std::span<const std::uint32_t> subsequent_neighbours(std::uint32_t v) const {
    return subsequent_[v];
  }

 private:
  friend LocalGraph build_local_graph(const PointCloud&, const SubsequentNeighbours&,
                                      std::size_t, const VertexFiltrationSpec*);

  std::size_t axes_ = 1;
  std::vector<std::size_t> points_;
  std::vector<double> values_;
  std::vector<double> root_values_;
  std::vector<std::vector<std::uint32_t>> subsequent_;
};

/// Local graph of the point at cloud index `vertex`, scanning all points.
LocalGraph build_local_graph(const PointCloud& cloud, std::size_t vertex, double t_max,
                             const VertexFiltrationSpec* spec = nullptr);
/// Local graph of the point at rank `rank`, from precomputed neighbour lists.
LocalGraph build_local_graph(const PointCloud& cloud, const SubsequentNeighbours& neighbours,
                             std::size_t rank, const VertexFiltrationSpec* spec = nullptr);

/// Work counters of the enumeration. `filtration_comparisons` counts one
/// comparison per edge joining a simplex to its new vertex (diameter axis).
struct KernelCounters {
  std::uint64_t simplices = 0;
  std::uint64_t filtration_comparisons = 0;
  std::uint64_t peak_frontier = 0;

  KernelCounters& operator+=(const KernelCounters& o) {
    simplices += o.simplices;
    filtration_comparisons += o.filtration_comparisons;
    peak_frontier = peak_frontier > o.peak_frontier ? peak_frontier : o.peak_frontier;
    return *this;
  }
};

/// All simplices of one dimension generated so far from one root, stored flat.
class LocalCliqueFrontier {
 public:
  /// The frontier holding just the root of `graph`.
  static LocalCliqueFrontier root(const LocalGraph& graph);

  std::size_t size() const noexcept { return filtrations_.size() / axes_; }
  bool empty() const noexcept { return filtrations_.empty(); }
  std::size_t simplex_size() const noexcept { return simplex_size_; }
  std::size_t axes() const noexcept { return axes_; }

  /// Local vertex ids, strictly increasing.
  std::span<const std::uint32_t> simplex(std::size_t i) const {
    return {vertices_.data() + i * simplex_size_, simplex_size_};
  }
  std::span<const double> filtration(std::size_t i) const {
    return {filtrations_.data() + i * axes_, axes_};
  }
  /// Local ids adjacent to every vertex of simplex i and greater than all of them.
  std::span<const std::uint32_t> common_neighbours(std::size_t i) const {
    return {neighbours_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

 private:
  friend LocalCliqueFrontier increase_dimension(const LocalCliqueFrontier&, const LocalGraph&,
                                                KernelCounters*);

  std::size_t simplex_size_ = 1;
  std::size_t axes_ = 1;
  std::vector<std::uint32_t> vertices_;
  std::vector<double> filtrations_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> neighbours_;
};

/// Extends every simplex by each of its common subsequent neighbours.
LocalCliqueFrontier increase_dimension(const LocalCliqueFrontier& frontier,
                                       const LocalGraph& graph,
                                       KernelCounters* counters = nullptr);

/// Appends (filtration, (-1)^dim) for every simplex rooted at `graph`'s root.
void compute_local_contributions(const LocalGraph& graph, ContributionList& out,
                                 KernelCounters* counters = nullptr);

/// Parallel kernel. Output is a raw list; its multiset does not depend on
/// `workers` or on the cloud ordering.
ContributionList compute_contributions_vr(const PointCloud& cloud, double t_max,
                                          const VertexFiltrationSpec* spec = nullptr,
                                          int workers = 1);

/// Single-threaded reference of the same enumeration, root by root in rank order.
ContributionList compute_contributions_vr_serial(const PointCloud& cloud, double t_max,
                                                 const VertexFiltrationSpec* spec = nullptr,
                                                 KernelCounters* counters = nullptr);

/// Visits every simplex (as ascending cloud indices in rank order) with its
/// filtration. Serial; meant for inspection and tests.
void for_each_simplex(const PointCloud& cloud, double t_max,
                      const std::function<void(std::span<const std::size_t>,
                                               std::span<const double>)>& visit,
                      const VertexFiltrationSpec* spec = nullptr);

/// Neighbour count of every point within t_max (excluding itself).
std::vector<std::size_t> neighbour_counts(const PointCloud& cloud, double t_max);

/// Ascending neighbour count, ties by original index.
PointCloud reorder_by_degree(const PointCloud& cloud, double t_max);

/// Mean distance to the k nearest other points, per point.
std::vector<double> codensity(const PointCloud& cloud, std::size_t k, int workers = 1);

}  // namespace eulerprof::vr
