#pragma once

#include <span>
#include <vector>

#include "svpc/matkit.hpp"

namespace svpc {

// The lifted space has dimension 3 for d = 2 and 7 for d = 3. Layout (fixed
// everywhere, including serialization):
//   d = 2: (nu1, nu2, nu1*nu2)
//   d = 3: (nu1, nu2, nu3, nu2*nu3, nu1*nu3, nu1*nu2, nu1*nu2*nu3)
int lifted_dim(int dim);

// Inverse of lifted_dim: 3 -> 2, 7 -> 3.
int base_dim_of_lifted(int k);

std::vector<double> lift(std::span<const double> nu);

// Writes lift(nu) into out (size lifted_dim). The final product is grouped as
// nu1*(nu2*nu3) to agree exactly with the cofactor expansion used by det().
void lift_into(std::span<const double> nu, std::span<double> out);

// Diagonal-block projection of a minors vector: diag of each matrix block,
// then the determinant entry.
std::vector<double> project(const MinorsVector& m);

struct MembershipResult {
  bool in_image;
  double residual;  // max violation over the redundancy relations
};

// Checks the product relations that characterize the image of the lifting
// (d=2: x3 = x1*x2; d=3: x4 = x2*x3, x5 = x1*x3, x6 = x1*x2, x7 = x1*x2*x3),
// each within abs_tol + rel_tol * |relation magnitude|.
MembershipResult membership(std::span<const double> x, double abs_tol = 1e-9,
                            double rel_tol = 1e-9);

// First base_dim components, provided the point is in the image; throws
// NotInImageError (carrying the residual) otherwise.
std::vector<double> recover(std::span<const double> x, double abs_tol = 1e-9,
                            double rel_tol = 1e-9);

// Elementary symmetric polynomials: d=2 (sum, product);
// d=3 (sum, sum of pairwise products, product).
std::vector<double> elementary_symmetric(std::span<const double> nu);

}  // namespace svpc
