#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace svpc::detail {

namespace {

constexpr double kPivotTol = 1e-10;

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n, const std::vector<double>& a,
          const std::vector<double>& b)
      : m_(m), n_(n), cols_(n + m + 1), t_((m + 1) * (n + m + 1), 0.0),
        basis_(m) {
    for (std::size_t i = 0; i < m; ++i) {
      double sign = b[i] < 0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n; ++j) at(i, j) = sign * a[i * n + j];
      at(i, n + i) = 1.0;  // artificial
      rhs(i) = sign * b[i];
      basis_[i] = n + i;
    }
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }
  double& rhs(std::size_t i) { return t_[i * cols_ + cols_ - 1]; }
  double rhs(std::size_t i) const { return t_[i * cols_ + cols_ - 1]; }
  double& obj(std::size_t j) { return t_[m_ * cols_ + j]; }
  double obj_value() const { return -t_[m_ * cols_ + cols_ - 1]; }
  std::size_t basis(std::size_t i) const { return basis_[i]; }

  // Rebuilds the reduced-cost row for cost vector `cost` (length n + m).
  void price(const std::vector<double>& cost) {
    for (std::size_t j = 0; j < cols_; ++j) t_[m_ * cols_ + j] = 0.0;
    for (std::size_t j = 0; j < n_ + m_; ++j) obj(j) = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) t_[m_ * cols_ + j] -= cb * at(i, j);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    double p = at(row, col);
    for (std::size_t j = 0; j < cols_; ++j) at(row, j) /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  // Bland iteration until optimal; entering candidates restricted to
  // j < entering_limit. Returns status and accumulates the iteration count.
  SimplexResult::Status iterate(std::size_t entering_limit, std::size_t cap,
                                std::size_t& iterations) {
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < entering_limit; ++j)
        if (t_[m_ * cols_ + j] < -kPivotTol) {
          enter = j;
          break;
        }
      if (enter == cols_) return SimplexResult::Status::Optimal;
      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        double aij = at(i, enter);
        if (aij <= kPivotTol) continue;
        double ratio = rhs(i) / aij;
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             (leave == m_ || basis_[i] < basis_[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == m_) return SimplexResult::Status::Unbounded;
      pivot(leave, enter);
      if (++iterations > cap) return SimplexResult::Status::IterationCap;
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t original_cols() const { return n_; }

 private:
  std::size_t m_, n_, cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

SimplexResult solve_equality_lp(std::size_t m, std::size_t n,
                                const std::vector<double>& a,
                                const std::vector<double>& b,
                                const std::vector<double>& c,
                                std::size_t iteration_cap) {
  Tableau t(m, n, a, b);
  SimplexResult result;

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1_cost(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1_cost[n + i] = 1.0;
  t.price(phase1_cost);
  auto status = t.iterate(n + m, iteration_cap, result.iterations);
  if (status == SimplexResult::Status::IterationCap) {
    result.status = status;
    return result;
  }
  double bscale = 1.0;
  for (std::size_t i = 0; i < m; ++i) bscale = std::max(bscale, std::abs(b[i]));
  if (t.obj_value() > 1e-7 * bscale) {
    result.status = SimplexResult::Status::Infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis where possible; rows that
  // cannot pivot are redundant constraints and stay at level zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t.at(i, j)) > kPivotTol) {
        t.pivot(i, j);
        break;
      }
  }

  // Phase 2: the real objective; artificials may not re-enter.
  std::vector<double> phase2_cost(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
  t.price(phase2_cost);
  status = t.iterate(n, iteration_cap, result.iterations);
  if (status != SimplexResult::Status::Optimal) {
    result.status = status;
    return result;
  }

  result.status = SimplexResult::Status::Optimal;
  result.solution.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis(i) < n) result.solution[t.basis(i)] = t.rhs(i);
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += c[j] * result.solution[j];
  result.objective = obj;
  return result;
}

}  // namespace svpc::detail
