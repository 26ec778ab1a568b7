#include "eulerprof/multicrit.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

namespace eulerprof::multicrit {

FiltrationVector join(const FiltrationVector& u, const FiltrationVector& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "join of points with dimensions " + std::to_string(u.size()) + " and " +
                    std::to_string(v.size()));
  }
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::max(u[i], v[i]);
  return FiltrationVector(std::move(out));
}

void validate(const MulticriticalCell& cell) {
  if (cell.births.empty()) throw Error(ErrorKind::kParameter, "a cell needs at least one birth");
  const std::size_t n = cell.births.front().size();
  for (const auto& b : cell.births) {
    if (b.size() != n) {
      throw Error(ErrorKind::kDimensionMismatch, "births of one cell differ in dimension");
    }
  }
  for (std::size_t i = 0; i < cell.births.size(); ++i) {
    for (std::size_t j = i + 1; j < cell.births.size(); ++j) {
      if (product_leq(cell.births[i], cell.births[j]) ||
          product_leq(cell.births[j], cell.births[i])) {
        throw Error(ErrorKind::kPrecondition,
                    "births " + std::to_string(i) + " and " + std::to_string(j) +
                        " are comparable; pass minimal points only");
      }
    }
  }
}

std::vector<Contribution> expand_multicritical(const MulticriticalCell& cell) {
  validate(cell);
  const std::int64_t sign = cell.dim % 2 == 0 ? 1 : -1;
  const auto& births = cell.births;

  // Join-closure of the births: pairwise joins of births in (i, j) order,
  // then joins of each newly found point with every earlier one. With three
  // or more parameters a join of three births need not be a pairwise join.
  std::vector<FiltrationVector> points(births.begin(), births.end());
  std::set<FiltrationVector> known(births.begin(), births.end());
  std::deque<FiltrationVector> queue;
  auto add = [&](FiltrationVector p) {
    if (known.insert(p).second) {
      points.push_back(p);
      queue.push_back(std::move(p));
    }
  };
  const std::size_t k = births.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) add(join(births[i], births[j]));
  }
  for (std::size_t j = k; j < points.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) add(join(points[i], points[j]));
  }

  std::map<FiltrationVector, std::int64_t> value;
  for (const auto& b : births) value.emplace(b, sign);

  while (!queue.empty()) {
    auto p = std::move(queue.front());
    queue.pop_front();
    bool ready = true;
    std::int64_t below = 0;
    for (const auto& q : points) {
      if (q == p || !product_leq(q, p)) continue;
      const auto it = value.find(q);
      if (it == value.end()) {
        ready = false;
        break;
      }
      below += it->second;
    }
    if (ready) {
      value.emplace(p, sign - below);
    } else {
      queue.push_back(std::move(p));
    }
  }

  std::vector<Contribution> out;
  for (const auto& p : points) {
    const std::int64_t v = value.at(p);
    if (v != 0) out.push_back({p, v});
  }
  return out;
}

void expand_multicritical(const MulticriticalCell& cell, ContributionList& out) {
  for (const auto& c : expand_multicritical(cell)) out.push(c.at.coords(), c.delta);
}

}  // namespace eulerprof::multicrit
