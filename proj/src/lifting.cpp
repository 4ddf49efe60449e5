#include "svpc/lifting.hpp"

#include <cmath>
#include <string>

namespace svpc {

int lifted_dim(int dim) {
  if (dim == 2) return 3;
  if (dim == 3) return 7;
  throw DimensionError("lifted_dim: unsupported dimension " + std::to_string(dim));
}

int base_dim_of_lifted(int k) {
  if (k == 3) return 2;
  if (k == 7) return 3;
  throw DimensionError("base_dim_of_lifted: unsupported lifted dimension " +
                       std::to_string(k));
}

void lift_into(std::span<const double> nu, std::span<double> out) {
  int d = static_cast<int>(nu.size());
  if (out.size() != static_cast<std::size_t>(lifted_dim(d)))
    throw DimensionError("lift_into: output size mismatch");
  if (d == 2) {
    out[0] = nu[0];
    out[1] = nu[1];
    out[2] = nu[0] * nu[1];
    return;
  }
  out[0] = nu[0];
  out[1] = nu[1];
  out[2] = nu[2];
  out[3] = nu[1] * nu[2];
  out[4] = nu[0] * nu[2];
  out[5] = nu[0] * nu[1];
  out[6] = nu[0] * (nu[1] * nu[2]);
}

std::vector<double> lift(std::span<const double> nu) {
  std::vector<double> out(lifted_dim(static_cast<int>(nu.size())));
  lift_into(nu, out);
  return out;
}

std::vector<double> project(const MinorsVector& m) {
  std::vector<double> x(lifted_dim(m.dim));
  for (int i = 0; i < m.dim; ++i) x[i] = m.a(i, i);
  if (m.dim == 3) {
    for (int i = 0; i < 3; ++i) x[3 + i] = (*m.b)(i, i);
    x[6] = m.c;
  } else {
    x[2] = m.c;
  }
  return x;
}

MembershipResult membership(std::span<const double> x, double abs_tol,
                            double rel_tol) {
  if (abs_tol < 0 || rel_tol < 0)
    throw InputError("membership: tolerances must be nonnegative");
  int d = base_dim_of_lifted(static_cast<int>(x.size()));
  double residual = 0.0;
  bool ok = true;
  auto relation = [&](double actual, double expected) {
    double viol = std::abs(actual - expected);
    residual = std::max(residual, viol);
    if (viol > abs_tol + rel_tol * std::abs(expected)) ok = false;
  };
  if (d == 2) {
    relation(x[2], x[0] * x[1]);
  } else {
    relation(x[3], x[1] * x[2]);
    relation(x[4], x[0] * x[2]);
    relation(x[5], x[0] * x[1]);
    relation(x[6], x[0] * (x[1] * x[2]));
  }
  return {ok, residual};
}

std::vector<double> recover(std::span<const double> x, double abs_tol,
                            double rel_tol) {
  int d = base_dim_of_lifted(static_cast<int>(x.size()));
  MembershipResult m = membership(x, abs_tol, rel_tol);
  if (!m.in_image)
    throw NotInImageError("recover: point is not in the image of the lifting",
                          m.residual);
  return {x.begin(), x.begin() + d};
}

std::vector<double> elementary_symmetric(std::span<const double> nu) {
  int d = static_cast<int>(nu.size());
  if (d == 2) return {nu[0] + nu[1], nu[0] * nu[1]};
  if (d == 3)
    return {nu[0] + nu[1] + nu[2],
            nu[1] * nu[2] + nu[0] * nu[2] + nu[0] * nu[1],
            nu[0] * (nu[1] * nu[2])};
  throw DimensionError("elementary_symmetric: unsupported dimension");
}

}  // namespace svpc
