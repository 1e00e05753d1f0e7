#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbso/geometry.hpp"

namespace rbso {

/// Row-major n x m matrix of travel costs; row = robot, column = goal.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

struct Assignment {
  std::vector<std::size_t> mapping;  // robot -> goal
  double total_cost = 0.0;
};

inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

CostMatrix build_cost_matrix(std::span<const Vec2> robots, std::span<const Vec2> goals);

/// Minimum-cost perfect matching (Kuhn-Munkres with potentials, O(n^3)).
/// Among optimal matchings the lexicographically smallest mapping is returned.
/// Throws std::invalid_argument for non-square, negative or non-finite input.
Assignment solve_assignment(const CostMatrix& costs);

/// Exhaustive search over all permutations; n <= 9. Test oracle.
Assignment brute_force_assignment(const CostMatrix& costs);

/// Sum of costs along the mapping, in robot order.
double assignment_cost(const CostMatrix& costs, std::span<const std::size_t> mapping);

/// Matches the available robots to goals. Unavailable robots get no goal and
/// the surplus goals with the highest indices are dropped. The returned vector
/// holds one goal index per robot, or kUnassigned for unavailable robots.
std::vector<std::size_t> assign_available(std::span<const Vec2> robots, const std::vector<bool>& available,
                                          std::span<const Vec2> goals);

}  // namespace rbso
