#include "rbso/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rbso {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) throw std::invalid_argument("CostMatrix: entry count does not match shape");
}

CostMatrix build_cost_matrix(std::span<const Vec2> robots, std::span<const Vec2> goals) {
  if (robots.size() != goals.size()) throw std::invalid_argument("build_cost_matrix: robot and goal counts differ");
  CostMatrix costs(robots.size(), goals.size());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    for (std::size_t j = 0; j < goals.size(); ++j) costs(i, j) = distance(robots[i], goals[j]);
  }
  return costs;
}

double assignment_cost(const CostMatrix& costs, std::span<const std::size_t> mapping) {
  double total = 0.0;
  for (std::size_t i = 0; i < mapping.size(); ++i) total += costs(i, mapping[i]);
  return total;
}

namespace {

void check_square(const CostMatrix& costs) {
  if (costs.rows() != costs.cols()) throw std::invalid_argument("assignment: cost matrix must be square");
  for (std::size_t i = 0; i < costs.rows(); ++i) {
    for (std::size_t j = 0; j < costs.cols(); ++j) {
      const double c = costs(i, j);
      if (!std::isfinite(c) || c < 0.0) throw std::invalid_argument("assignment: costs must be finite and nonnegative");
    }
  }
}

struct Dual {
  std::vector<std::size_t> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Hungarian algorithm with potentials (e-maxx formulation). On return
// c(i, j) - u[i] - v[j] >= 0 everywhere, with equality on the matching.
Dual hungarian(const CostMatrix& costs) {
  const std::size_t n = costs.rows();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = costs(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Dual d;
  d.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) d.row_to_col[match[j] - 1] = j - 1;
  d.u.assign(u.begin() + 1, u.end());
  d.v.assign(v.begin() + 1, v.end());
  return d;
}

}  // namespace

Assignment solve_assignment(const CostMatrix& costs) {
  check_square(costs);
  const std::size_t n = costs.rows();
  Assignment result;
  if (n == 0) return result;

  const Dual dual = hungarian(costs);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, costs(i, j));
  }
  const double tol = 1e-9 * scale;
  // By complementary slackness every optimal matching uses only tight edges,
  // and every perfect matching of tight edges is optimal.
  const auto tight = [&](std::size_t i, std::size_t j) { return costs(i, j) - dual.u[i] - dual.v[j] <= tol; };

  std::vector<std::size_t> row_to_col = dual.row_to_col;
  std::vector<std::size_t> col_to_row(n);
  for (std::size_t i = 0; i < n; ++i) col_to_row[row_to_col[i]] = i;

  // Fix rows in order to their smallest tight column that still admits a
  // perfect tight matching of the remaining rows. Moving row i to column j
  // frees row col_to_row[j], which must reach i's old column through an
  // alternating path over the unfixed rows.
  std::vector<std::size_t> parent_col(n);
  std::vector<std::size_t> via_row(n);
  std::vector<char> seen(n);
  std::vector<std::size_t> queue;
  queue.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (row_to_col[i] == j) break;
      if (col_to_row[j] < i || !tight(i, j)) continue;
      const std::size_t start = col_to_row[j];
      const std::size_t target = row_to_col[i];
      std::fill(seen.begin(), seen.end(), 0);
      seen[j] = 1;
      queue.assign(1, start);
      std::size_t reached = n;
      for (std::size_t head = 0; head < queue.size() && reached == n; ++head) {
        const std::size_t r = queue[head];
        for (std::size_t k = 0; k < n; ++k) {
          if (seen[k] || col_to_row[k] < i || !tight(r, k)) continue;
          seen[k] = 1;
          via_row[k] = r;
          if (k == target) {
            reached = k;
            break;
          }
          parent_col[col_to_row[k]] = k;
          queue.push_back(col_to_row[k]);
        }
      }
      if (reached == n) continue;
      // Shift the path: each row on it takes the column it reached next.
      for (std::size_t k = reached;;) {
        const std::size_t r = via_row[k];
        row_to_col[r] = k;
        col_to_row[k] = r;
        if (r == start) break;
        k = parent_col[r];
      }
      row_to_col[i] = j;
      col_to_row[j] = i;
      break;
    }
  }
  result.mapping = std::move(row_to_col);
  result.total_cost = assignment_cost(costs, result.mapping);
  return result;
}

Assignment brute_force_assignment(const CostMatrix& costs) {
  check_square(costs);
  const std::size_t n = costs.rows();
  if (n > 9) throw std::invalid_argument("brute_force_assignment: n > 9 is too large to enumerate");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best{perm, assignment_cost(costs, perm)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double c = assignment_cost(costs, perm);
    if (c < best.total_cost) best = {perm, c};
  }
  return best;
}

std::vector<std::size_t> assign_available(std::span<const Vec2> robots, const std::vector<bool>& available,
                                          std::span<const Vec2> goals) {
  std::vector<std::size_t> idle;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    if (available[i]) idle.push_back(i);
  }
  std::vector<Vec2> idle_pos;
  idle_pos.reserve(idle.size());
  for (std::size_t i : idle) idle_pos.push_back(robots[i]);
  const std::span<const Vec2> kept = goals.first(std::min(idle.size(), goals.size()));
  if (kept.size() != idle.size()) throw std::invalid_argument("assign_available: fewer goals than available robots");

  const Assignment a = solve_assignment(build_cost_matrix(idle_pos, kept));
  std::vector<std::size_t> out(robots.size(), kUnassigned);
  for (std::size_t k = 0; k < idle.size(); ++k) out[idle[k]] = a.mapping[k];
  return out;
}

}  // namespace rbso
