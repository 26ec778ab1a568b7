#include "eulerprof/vr.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

namespace eulerprof::vr {

namespace {

constexpr double kNoEdge = std::numeric_limits<double>::infinity();

std::vector<std::size_t> inverse(std::span<const std::size_t> ordering) {
  std::vector<std::size_t> rank(ordering.size());
  for (std::size_t r = 0; r < ordering.size(); ++r) rank[ordering[r]] = r;
  return rank;
}

void require_threshold(double t_max) {
  if (!(t_max > 0) || std::isnan(t_max)) {
    throw Error(ErrorKind::kParameter, "t_max must be > 0");
  }
}

void require_workers(int workers) {
  if (workers < 1) throw Error(ErrorKind::kParameter, "workers must be >= 1");
}

void validate_spec(const PointCloud& cloud, const VertexFiltrationSpec* spec) {
  if (spec == nullptr) return;
  for (std::size_t a = 0; a < spec->extra_axes.size(); ++a) {
    const auto& axis = spec->extra_axes[a];
    if (!axis.vertex_values.empty() && axis.vertex_values.size() != cloud.size()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "filtration axis " + std::to_string(a + 1) + " has " +
                      std::to_string(axis.vertex_values.size()) + " vertex values for " +
                      std::to_string(cloud.size()) + " points");
    }
    for (double v : axis.vertex_values) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kParameter,
                    "non-finite vertex value on axis " + std::to_string(a + 1));
      }
    }
  }
}

double vertex_value(const FiltrationAxis& axis, std::size_t point) {
  return axis.vertex_values.empty() ? 0.0 : axis.vertex_values[point];
}

}  // namespace

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) {
    if (!coords_.empty()) throw Error(ErrorKind::kParameter, "point dimension must be >= 1");
    return;
  }
  if (coords_.size() % dim_ != 0) {
    throw Error(ErrorKind::kDimensionMismatch,
                "coordinate count " + std::to_string(coords_.size()) +
                    " is not a multiple of the point dimension " + std::to_string(dim_));
  }
  for (double x : coords_) {
    if (!std::isfinite(x)) throw Error(ErrorKind::kParameter, "non-finite point coordinate");
  }
  ordering_.resize(size());
  std::iota(ordering_.begin(), ordering_.end(), std::size_t{0});
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "point " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                      " coordinates, expected " + std::to_string(dim));
    }
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return PointCloud(dim, std::move(coords));
}

PointCloud PointCloud::with_ordering(std::vector<std::size_t> ordering) const {
  if (ordering.size() != size()) {
    throw Error(ErrorKind::kParameter, "ordering length differs from the number of points");
  }
  std::vector<bool> seen(size(), false);
  for (std::size_t i : ordering) {
    if (i >= size() || seen[i]) throw Error(ErrorKind::kParameter, "ordering is not a permutation");
    seen[i] = true;
  }
  PointCloud out = *this;
  out.ordering_ = std::move(ordering);
  return out;
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
  const auto a = point(i);
  const auto b = point(j);
  double sum = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

SubsequentNeighbours build_subsequent_neighbours(const PointCloud& cloud, double t_max,
                                                 int workers) {
  require_threshold(t_max);
  require_workers(workers);
  const std::size_t n = cloud.size();
  const auto order = cloud.ordering();
  std::vector<std::vector<std::uint32_t>> ranks(n);
  std::vector<std::vector<double>> lengths(n);

#pragma omp parallel for schedule(dynamic, 16) num_threads(workers)
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = r + 1; s < n; ++s) {
      const double d = cloud.distance(order[r], order[s]);
      if (d <= t_max) {
        ranks[r].push_back(static_cast<std::uint32_t>(s));
        lengths[r].push_back(d);
      }
    }
  }

  SubsequentNeighbours out;
  out.offsets.assign(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) out.offsets[r + 1] = out.offsets[r] + ranks[r].size();
  out.ranks.reserve(out.offsets[n]);
  out.lengths.reserve(out.offsets[n]);
  for (std::size_t r = 0; r < n; ++r) {
    out.ranks.insert(out.ranks.end(), ranks[r].begin(), ranks[r].end());
    out.lengths.insert(out.lengths.end(), lengths[r].begin(), lengths[r].end());
  }
  return out;
}

bool LocalGraph::has_edge(std::uint32_t u, std::uint32_t v) const {
  return u != v && edge_length(u, v) != kNoEdge;
}

namespace {

// Fills the extra axes and subsequent-neighbour lists once the diameter
// matrix (axis 0) is filled.
void finish_local_graph(std::vector<double>& values, std::vector<double>& root_values,
                        std::vector<std::vector<std::uint32_t>>& subsequent,
                        std::span<const std::size_t> points, const VertexFiltrationSpec* spec) {
  const std::size_t m = points.size();
  const std::size_t axes = spec == nullptr ? 1 : spec->axes();
  root_values.assign(axes, 0.0);
  if (spec != nullptr) {
    for (std::size_t a = 1; a < axes; ++a) {
      const auto& axis = spec->extra_axes[a - 1];
      root_values[a] = vertex_value(axis, points[0]);
      double* block = values.data() + a * m * m;
      for (std::size_t u = 0; u < m; ++u) {
        for (std::size_t v = u + 1; v < m; ++v) {
          if (values[u * m + v] == kNoEdge) continue;
          double e = std::max(vertex_value(axis, points[u]), vertex_value(axis, points[v]));
          if (axis.edge_value) e = std::max(e, axis.edge_value(points[u], points[v]));
          block[u * m + v] = e;
          block[v * m + u] = e;
        }
      }
    }
  }
  subsequent.assign(m, {});
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = u + 1; v < m; ++v) {
      if (values[u * m + v] != kNoEdge) subsequent[u].push_back(static_cast<std::uint32_t>(v));
    }
  }
}

}  // namespace

LocalGraph build_local_graph(const PointCloud& cloud, const SubsequentNeighbours& neighbours,
                             std::size_t rank, const VertexFiltrationSpec* spec) {
  const auto order = cloud.ordering();
  const auto root_ranks = neighbours.ranks_of(rank);
  const auto root_lengths = neighbours.lengths_of(rank);
  const std::size_t m = root_ranks.size() + 1;
  const std::size_t axes = spec == nullptr ? 1 : spec->axes();

  LocalGraph g;
  g.axes_ = axes;
  g.points_.resize(m);
  g.points_[0] = order[rank];
  for (std::size_t k = 0; k + 1 < m; ++k) g.points_[k + 1] = order[root_ranks[k]];
  g.values_.assign(axes * m * m, kNoEdge);

  auto set = [&](std::size_t u, std::size_t v, double d) {
    g.values_[u * m + v] = d;
    g.values_[v * m + u] = d;
  };
  for (std::size_t k = 0; k + 1 < m; ++k) set(0, k + 1, root_lengths[k]);
  // Edges among neighbours: merge each neighbour's own subsequent list with
  // the root's list; both are sorted by rank.
  for (std::size_t u = 1; u < m; ++u) {
    const auto their = neighbours.ranks_of(root_ranks[u - 1]);
    const auto their_lengths = neighbours.lengths_of(root_ranks[u - 1]);
    std::size_t v = u + 1;
    std::size_t j = 0;
    while (v < m && j < their.size()) {
      if (root_ranks[v - 1] < their[j]) {
        ++v;
      } else if (their[j] < root_ranks[v - 1]) {
        ++j;
      } else {
        set(u, v, their_lengths[j]);
        ++v;
        ++j;
      }
    }
  }
  finish_local_graph(g.values_, g.root_values_, g.subsequent_, g.points_, spec);
  return g;
}

LocalGraph build_local_graph(const PointCloud& cloud, std::size_t vertex, double t_max,
                             const VertexFiltrationSpec* spec) {
  require_threshold(t_max);
  if (vertex >= cloud.size()) throw Error(ErrorKind::kParameter, "vertex index out of range");
  validate_spec(cloud, spec);
  const auto rank = inverse(cloud.ordering());
  const auto order = cloud.ordering();

  // Build the neighbour lists only for the root and the ranks it can reach.
  SubsequentNeighbours local;
  const std::size_t n = cloud.size();
  const std::size_t r0 = rank[vertex];
  std::vector<std::uint32_t> members;
  for (std::size_t s = r0 + 1; s < n; ++s) {
    if (cloud.distance(vertex, order[s]) <= t_max) members.push_back(static_cast<std::uint32_t>(s));
  }
  local.offsets.assign(n + 1, 0);
  std::vector<std::vector<std::uint32_t>> ranks(n);
  std::vector<std::vector<double>> lengths(n);
  ranks[r0] = members;
  for (auto s : members) lengths[r0].push_back(cloud.distance(vertex, order[s]));
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const double d = cloud.distance(order[members[a]], order[members[b]]);
      if (d <= t_max) {
        ranks[members[a]].push_back(members[b]);
        lengths[members[a]].push_back(d);
      }
    }
  }
  for (std::size_t r = 0; r < n; ++r) local.offsets[r + 1] = local.offsets[r] + ranks[r].size();
  for (std::size_t r = 0; r < n; ++r) {
    local.ranks.insert(local.ranks.end(), ranks[r].begin(), ranks[r].end());
    local.lengths.insert(local.lengths.end(), lengths[r].begin(), lengths[r].end());
  }
  return build_local_graph(cloud, local, r0, spec);
}

LocalCliqueFrontier LocalCliqueFrontier::root(const LocalGraph& graph) {
  LocalCliqueFrontier f;
  f.simplex_size_ = 1;
  f.axes_ = graph.axes();
  f.vertices_ = {0};
  f.filtrations_.assign(graph.root_values().begin(), graph.root_values().end());
  const auto nbrs = graph.subsequent_neighbours(0);
  f.neighbours_.assign(nbrs.begin(), nbrs.end());
  f.offsets_ = {0, f.neighbours_.size()};
  return f;
}

LocalCliqueFrontier increase_dimension(const LocalCliqueFrontier& frontier,
                                       const LocalGraph& graph, KernelCounters* counters) {
  LocalCliqueFrontier next;
  const std::size_t s = frontier.simplex_size_;
  const std::size_t axes = frontier.axes_;
  next.simplex_size_ = s + 1;
  next.axes_ = axes;
  next.offsets_.assign(1, 0);

  std::size_t produced = 0;
  for (std::size_t i = 0; i < frontier.size(); ++i) produced += frontier.common_neighbours(i).size();
  next.vertices_.reserve(produced * (s + 1));
  next.filtrations_.reserve(produced * axes);
  next.offsets_.reserve(produced + 1);

  std::uint64_t comparisons = 0;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const auto sigma = frontier.simplex(i);
    const auto f = frontier.filtration(i);
    const auto common = frontier.common_neighbours(i);
    for (std::size_t c = 0; c < common.size(); ++c) {
      const std::uint32_t v = common[c];
      next.vertices_.insert(next.vertices_.end(), sigma.begin(), sigma.end());
      next.vertices_.push_back(v);

      for (std::size_t a = 0; a < axes; ++a) {
        double value = f[a];
        for (std::uint32_t u : sigma) value = std::max(value, graph.edge_value(a, u, v));
        next.filtrations_.push_back(value);
      }
      comparisons += s;

      // Neighbours after v in `common` that are also adjacent to v.
      const auto later = common.subspan(c + 1);
      const auto adj = graph.subsequent_neighbours(v);
      std::set_intersection(later.begin(), later.end(), adj.begin(), adj.end(),
                            std::back_inserter(next.neighbours_));
      next.offsets_.push_back(next.neighbours_.size());
    }
  }
  if (counters != nullptr) counters->filtration_comparisons += comparisons;
  return next;
}

void compute_local_contributions(const LocalGraph& graph, ContributionList& out,
                                 KernelCounters* counters) {
  auto frontier = LocalCliqueFrontier::root(graph);
  std::int64_t sign = 1;
  while (!frontier.empty()) {
    for (std::size_t i = 0; i < frontier.size(); ++i) out.push(frontier.filtration(i), sign);
    if (counters != nullptr) {
      counters->simplices += frontier.size();
      counters->peak_frontier =
          std::max<std::uint64_t>(counters->peak_frontier, frontier.size());
    }
    frontier = increase_dimension(frontier, graph, counters);
    sign = -sign;
  }
}

ContributionList compute_contributions_vr(const PointCloud& cloud, double t_max,
                                          const VertexFiltrationSpec* spec, int workers) {
  require_threshold(t_max);
  require_workers(workers);
  validate_spec(cloud, spec);
  const std::size_t axes = spec == nullptr ? 1 : spec->axes();
  if (cloud.empty()) return ContributionList(axes);

  const auto neighbours = build_subsequent_neighbours(cloud, t_max, workers);
  const std::size_t n = cloud.size();
  std::vector<ContributionList> buffers(static_cast<std::size_t>(workers), ContributionList(axes));
  std::exception_ptr failure;

#pragma omp parallel num_threads(workers)
  {
    auto& buffer = buffers[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 1)
    for (std::size_t r = 0; r < n; ++r) {
      try {
        const auto graph = build_local_graph(cloud, neighbours, r, spec);
        compute_local_contributions(graph, buffer);
      } catch (...) {
#pragma omp critical(eulerprof_vr_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t total = 0;
  for (const auto& b : buffers) total += b.size();
  ContributionList out(axes);
  out.reserve(total);
  for (const auto& b : buffers) out.append(b);
  return out;
}

ContributionList compute_contributions_vr_serial(const PointCloud& cloud, double t_max,
                                                 const VertexFiltrationSpec* spec,
                                                 KernelCounters* counters) {
  require_threshold(t_max);
  validate_spec(cloud, spec);
  const std::size_t axes = spec == nullptr ? 1 : spec->axes();
  ContributionList out(axes);
  if (cloud.empty()) return out;
  const auto neighbours = build_subsequent_neighbours(cloud, t_max, 1);
  for (std::size_t r = 0; r < cloud.size(); ++r) {
    const auto graph = build_local_graph(cloud, neighbours, r, spec);
    compute_local_contributions(graph, out, counters);
  }
  return out;
}

void for_each_simplex(const PointCloud& cloud, double t_max,
                      const std::function<void(std::span<const std::size_t>,
                                               std::span<const double>)>& visit,
                      const VertexFiltrationSpec* spec) {
  require_threshold(t_max);
  validate_spec(cloud, spec);
  if (cloud.empty()) return;
  const auto neighbours = build_subsequent_neighbours(cloud, t_max, 1);
  std::vector<std::size_t> points;
  for (std::size_t r = 0; r < cloud.size(); ++r) {
    const auto graph = build_local_graph(cloud, neighbours, r, spec);
    auto frontier = LocalCliqueFrontier::root(graph);
    while (!frontier.empty()) {
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        points.clear();
        for (auto v : frontier.simplex(i)) points.push_back(graph.point_index(v));
        visit(points, frontier.filtration(i));
      }
      frontier = increase_dimension(frontier, graph);
    }
  }
}

std::vector<std::size_t> neighbour_counts(const PointCloud& cloud, double t_max) {
  const std::size_t n = cloud.size();
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (cloud.distance(i, j) <= t_max) {
        ++counts[i];
        ++counts[j];
      }
    }
  }
  return counts;
}

PointCloud reorder_by_degree(const PointCloud& cloud, double t_max) {
  const auto counts = neighbour_counts(cloud, t_max);
  std::vector<std::size_t> ordering(cloud.size());
  std::iota(ordering.begin(), ordering.end(), std::size_t{0});
  std::stable_sort(ordering.begin(), ordering.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });
  return cloud.with_ordering(std::move(ordering));
}

std::vector<double> codensity(const PointCloud& cloud, std::size_t k, int workers) {
  require_workers(workers);
  const std::size_t n = cloud.size();
  if (k == 0 || k >= n) {
    throw Error(ErrorKind::kParameter,
                "codensity needs 1 <= k < number of points (k=" + std::to_string(k) +
                    ", points=" + std::to_string(n) + ")");
  }
  std::vector<double> out(n);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    d.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.push_back(cloud.distance(i, j));
    }
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += d[j];
    out[i] = sum / static_cast<double>(k);
  }
  return out;
}

}  // namespace eulerprof::vr
