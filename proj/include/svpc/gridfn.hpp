#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "svpc/common.hpp"

namespace svpc {

// Which space a grid discretizes. Nu grids cover R^d (d = 2, 3) and must be
// compatible with the signed-permutation group: all axes identical and
// symmetric about 0. Beta grids cover the lifted space R^{k} (k = 3, 7) with
// every axis symmetric. Box grids are generic rectangular grids (used for
// sampling functions of the elementary symmetric variables) with no symmetry
// requirement.
enum class SpaceKind { Nu, Beta, Box };

class GridSpec {
 public:
  GridSpec(SpaceKind kind, std::vector<std::vector<double>> axes);

  // Uniform axis with an odd node count, mirrored exactly about 0.
  static std::vector<double> symmetric_axis(double half_range,
                                            std::size_t count);

  SpaceKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(axes_.size()); }
  // Underlying d for Beta grids (3 -> 2, 7 -> 3); dim() otherwise.
  int base_dim() const;
  const std::vector<double>& axis(int i) const { return axes_[i]; }
  std::size_t axis_size(int i) const { return axes_[i].size(); }
  std::size_t size() const { return size_; }

  // Row-major layout, axis 0 slowest: flat 0 is the most-negative corner,
  // the last flat index the most-positive one.
  void unflatten(std::size_t flat, std::span<std::size_t> out) const;
  std::size_t flatten(std::span<const std::size_t> mi) const;
  void node_at(std::size_t flat, std::span<double> out) const;
  std::vector<double> node(std::size_t flat) const;
  bool on_boundary(std::size_t flat) const;

  double max_spacing() const;
  bool is_uniform(double tol = 1e-12) const;

  bool operator==(const GridSpec&) const = default;

 private:
  SpaceKind kind_;
  std::vector<std::vector<double>> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

// Extended-real samples on a grid. Values may be +inf (and -inf where an op
// explicitly allows it); NaN is rejected at every construction boundary.
class GridFunction {
 public:
  GridFunction(GridSpec spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  double value_at(std::size_t flat) const;
  std::size_t finite_count() const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

// Samples evaluator over every node (parallel; evaluator must be pure).
// Rejects NaN always and -inf unless allow_neg_inf.
GridFunction build(const GridSpec& spec,
                   const std::function<double(std::span<const double>)>& eval,
                   bool allow_neg_inf = false);

struct ConvexityReport {
  bool convex;
  double worst_violation;
  std::size_t witness_node;       // size() if no violation
  std::vector<int> witness_step;  // direction of the violating chord
};

// Discrete convexity surrogate: at every node p and every canonical direction
// u in {-1,0,1}^D, f(p) <= (f(p-u) + f(p+u)) / 2 + tol whenever both
// neighbors exist. Infinity-aware: an infinite chord never witnesses a
// violation. Requires uniformly spaced axes.
ConvexityReport midpoint_convexity_check(const GridFunction& f, double tol);

// Multilinear interpolation, for diagnostics only (never used in
// certification logic). x must lie inside the grid's bounding box.
double interpolate_multilinear(const GridFunction& f, std::span<const double> x);

// Serialization. The JSON document is
//   {"kind":"gridfn","dim_kind":"nu"|"beta"|"box","axes":[[...],...],
//    "values":[...]}
// with infinities encoded as the strings "+inf"/"-inf" and all reals written
// as shortest round-trip decimals; round-trips are bit-exact.
std::string to_json_string(const GridFunction& f);
GridFunction gridfn_from_json_string(const std::string& text);
void write_gridfn(const GridFunction& f, const std::string& path);
GridFunction read_gridfn(const std::string& path);

// CSV export: one row per node, coordinates then value, "+inf"/"-inf"
// literals for infinite values.
void write_csv(const GridFunction& f, const std::string& path);

}  // namespace svpc
