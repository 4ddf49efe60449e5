#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "svpc/gridfn.hpp"
#include "svpc/matkit.hpp"

namespace svpc {

// A signed permutation with positive sign product: output i takes
// sign[i] * input[perm[i]]. These are exactly the linear maps that preserve
// the component product and arise from two-sided rotation of a diagonal
// matrix.
struct GroupElement {
  int dim;
  std::array<std::uint8_t, 3> perm{};
  std::array<std::int8_t, 3> signs{};

  SquareMatrix matrix() const;  // entry signs[i] at (i, perm[i])
  int parity() const;           // sign of the permutation
  int sign_product() const;     // product of signs; +1 for every group member
};

struct GroupTable {
  int dim;
  std::vector<GroupElement> elements;  // identity first, lexicographic order
};

// The full group for d = 2 (4 elements) or d = 3 (24 elements); computed once
// and shared read-only.
const GroupTable& group_table(int dim);

std::vector<double> apply(const GroupElement& s, std::span<const double> nu);
void apply_into(const GroupElement& s, std::span<const double> nu,
                std::span<double> out);

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& s);
bool same_element(const GroupElement& a, const GroupElement& b);

// Index-space action on a nu-grid: the flat index of S applied to node
// `flat`. Exact (pure index arithmetic; relies on the nu-grid axis symmetry).
std::size_t apply_index(const GroupElement& s, const GridSpec& spec,
                        std::size_t flat);

struct InvarianceReport {
  bool invariant;
  double max_deviation;
  std::size_t witness_node;     // spec.size() when invariant
  std::size_t witness_element;  // index into the group table
};

// Checks |phi(node) - phi(S node)| <= tol for every node and group element.
InvarianceReport is_invariant(const GridFunction& phi, double tol = 0.0);

enum class SymmetrizeMode { Min, Max };

// Orbit min (default) or max; the result is invariant with deviation 0.
GridFunction symmetrize(const GridFunction& phi,
                        SymmetrizeMode mode = SymmetrizeMode::Min);

// The group support function: max over the group of <beta, lift(S nu)>.
double lambda_support(std::span<const double> beta, std::span<const double> nu);

// <beta, projected minors of R1 diag(nu) R2>, evaluated through the minors
// directly.
double lifted_rotation_value(std::span<const double> beta,
                             std::span<const double> nu, const Rotation& r1,
                             const Rotation& r2);

// Same value through the closed form (R1 (.) R2^T) : N + beta_last * prod(nu);
// must agree with lifted_rotation_value within 1e-10.
double schur_formula_value(std::span<const double> beta,
                           std::span<const double> nu, const Rotation& r1,
                           const Rotation& r2);

// Factorization S = R1 (.) R2^T with R1, R2 special orthogonal and
// R1 diag(nu) R2 = diag(S nu) exactly; realizes every group element as a
// rotation pair.
std::pair<Rotation, Rotation> rotation_pair(const GroupElement& s);

}  // namespace svpc
