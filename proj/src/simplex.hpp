#pragma once

#include <cstddef>
#include <vector>

namespace svpc::detail {

// Dense two-phase primal simplex with Bland's anti-cycling rule for
//   minimize c.x  subject to  A x = b, x >= 0,
// sized for very small row counts (<= 8 here) and a few thousand columns.
struct SimplexResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationCap } status;
  double objective = 0.0;
  std::vector<double> solution;  // length n; basic values, zeros elsewhere
  std::size_t iterations = 0;
};

SimplexResult solve_equality_lp(std::size_t m, std::size_t n,
                                const std::vector<double>& a,  // m x n row-major
                                const std::vector<double>& b,  // m
                                const std::vector<double>& c,  // n
                                std::size_t iteration_cap = 100000);

}  // namespace svpc::detail
