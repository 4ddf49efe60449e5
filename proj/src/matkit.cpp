#include "svpc/matkit.hpp"

#include <algorithm>
#include <cmath>

namespace svpc {

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3)
    throw DimensionError("only dimensions 2 and 3 are supported, got " +
                         std::to_string(dim));
}

}  // namespace

SquareMatrix::SquareMatrix(int dim) : dim_(dim) { check_dim(dim); }

SquareMatrix SquareMatrix::identity(int dim) {
  SquareMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> nu) {
  SquareMatrix m(static_cast<int>(nu.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = nu[i];
  return m;
}

SquareMatrix SquareMatrix::from_rows(int dim, std::span<const double> rowmajor) {
  check_dim(dim);
  if (rowmajor.size() != static_cast<std::size_t>(dim * dim))
    throw DimensionError("from_rows: need dim*dim entries");
  SquareMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rowmajor[i * dim + j];
  return m;
}

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix product: dim mismatch");
  SquareMatrix c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      double s = 0.0;
      for (int l = 0; l < a.dim(); ++l) s += a(i, l) * b(l, j);
      c(i, j) = s;
    }
  return c;
}

SquareMatrix transpose(const SquareMatrix& a) {
  SquareMatrix t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t(i, j) = a(j, i);
  return t;
}

double frobenius_norm(const SquareMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double det(const SquareMatrix& f) {
  if (f.dim() == 2) return f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
  return f(0, 0) * (f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1)) -
         f(0, 1) * (f(1, 0) * f(2, 2) - f(1, 2) * f(2, 0)) +
         f(0, 2) * (f(1, 0) * f(2, 1) - f(1, 1) * f(2, 0));
}

SquareMatrix adjugate_transpose(const SquareMatrix& f) {
  if (f.dim() != 3)
    throw DimensionError("adjugate_transpose is defined for d = 3 only");
  // adj(F)^T_{ij} = cofactor_{ij}(F); cofactors handle singular F.
  SquareMatrix c(3);
  c(0, 0) = f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1);
  c(0, 1) = -(f(1, 0) * f(2, 2) - f(1, 2) * f(2, 0));
  c(0, 2) = f(1, 0) * f(2, 1) - f(1, 1) * f(2, 0);
  c(1, 0) = -(f(0, 1) * f(2, 2) - f(0, 2) * f(2, 1));
  c(1, 1) = f(0, 0) * f(2, 2) - f(0, 2) * f(2, 0);
  c(1, 2) = -(f(0, 0) * f(2, 1) - f(0, 1) * f(2, 0));
  c(2, 0) = f(0, 1) * f(1, 2) - f(0, 2) * f(1, 1);
  c(2, 1) = -(f(0, 0) * f(1, 2) - f(0, 2) * f(1, 0));
  c(2, 2) = f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
  return c;
}

SquareMatrix schur_product(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("schur_product: dim mismatch");
  SquareMatrix c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) * b(i, j);
  return c;
}

MinorsVector minors(const SquareMatrix& f) {
  MinorsVector m{f.dim(), f, std::nullopt, det(f)};
  if (f.dim() == 3) m.b = adjugate_transpose(f);
  return m;
}

namespace {

SignedSpectrum canonicalize(int dim, std::array<double, 3> sv, double d) {
  // sv holds nonnegative magnitudes; sort descending, put sign(det) on the
  // last entry, normalize any -0.0 away.
  std::sort(sv.begin(), sv.begin() + dim, [](double a, double b) { return a > b; });
  if (d < 0.0)
    sv[dim - 1] = -sv[dim - 1];
  SignedSpectrum s{dim, {}};
  for (int i = 0; i < dim; ++i) s.nu[i] = sv[i] == 0.0 ? 0.0 : sv[i];
  return s;
}

SignedSpectrum signed_svd_2(const SquareMatrix& f) {
  // Closed form: split into the symmetric/antisymmetric rotation parts.
  double e = (f(0, 0) + f(1, 1)) / 2.0;
  double g = (f(0, 0) - f(1, 1)) / 2.0;
  double h = (f(1, 0) + f(0, 1)) / 2.0;
  double k = (f(1, 0) - f(0, 1)) / 2.0;
  double q = std::hypot(e, k);  // larger = q + r, smaller = |q - r|
  double r = std::hypot(g, h);
  double s1 = q + r;
  double s2 = std::abs(q - r);
  return canonicalize(2, {s1, s2, 0.0}, det(f));
}

SignedSpectrum signed_svd_3(const SquareMatrix& f) {
  // One-sided Jacobi on the columns: orthogonalize pairwise until all column
  // dot products vanish; singular values are the final column norms.
  constexpr int kMaxSweeps = 64;
  constexpr double kTol = 1e-14;
  std::array<std::array<double, 3>, 3> col{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) col[j][i] = f(i, j);
  auto dot = [&](int p, int q) {
    return col[p][0] * col[q][0] + col[p][1] * col[q][1] + col[p][2] * col[q][2];
  };
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        double app = dot(p, p), aqq = dot(q, q), apq = dot(p, q);
        if (std::abs(apq) <= kTol * std::sqrt(app * aqq) || apq == 0.0) continue;
        converged = false;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = (zeta >= 0 ? 1.0 : -1.0) /
                   (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (int i = 0; i < 3; ++i) {
          double vp = col[p][i], vq = col[q][i];
          col[p][i] = c * vp - s * vq;
          col[q][i] = s * vp + c * vq;
        }
      }
  }
  if (!converged)
    throw ConvergenceError("signed_svd: Jacobi did not converge in 64 sweeps");
  std::array<double, 3> sv{};
  for (int j = 0; j < 3; ++j) sv[j] = std::sqrt(dot(j, j));
  return canonicalize(3, sv, det(f));
}

}  // namespace

SignedSpectrum signed_svd(const SquareMatrix& f) {
  return f.dim() == 2 ? signed_svd_2(f) : signed_svd_3(f);
}

Rotation::Rotation(const SquareMatrix& m, double tol) : m_(m) {
  SquareMatrix g = transpose(m) * m;
  double worst = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  if (worst > tol || std::abs(det(m) - 1.0) > tol)
    throw InputError("Rotation: matrix is not special orthogonal");
}

Rotation Rotation::planar(double theta) {
  SquareMatrix m(2);
  m(0, 0) = std::cos(theta);
  m(0, 1) = -std::sin(theta);
  m(1, 0) = std::sin(theta);
  m(1, 1) = std::cos(theta);
  return Rotation(m);
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (n == 0.0) throw InputError("from_quaternion: zero quaternion");
  w /= n; x /= n; y /= n; z /= n;
  SquareMatrix m(3);
  m(0, 0) = 1 - 2 * (y * y + z * z);
  m(0, 1) = 2 * (x * y - z * w);
  m(0, 2) = 2 * (x * z + y * w);
  m(1, 0) = 2 * (x * y + z * w);
  m(1, 1) = 1 - 2 * (x * x + z * z);
  m(1, 2) = 2 * (y * z - x * w);
  m(2, 0) = 2 * (x * z - y * w);
  m(2, 1) = 2 * (y * z + x * w);
  m(2, 2) = 1 - 2 * (x * x + y * y);
  return Rotation(m);
}

Rotation sample_rotation(int dim, RandomState& rng) {
  check_dim(dim);
  if (dim == 2)
    return Rotation::planar(rng.uniform(0.0, 2.0 * 3.14159265358979323846));
  // A Gaussian 4-vector normalized to the unit sphere is Haar on SO(3).
  double w = rng.gaussian(), x = rng.gaussian(), y = rng.gaussian(),
         z = rng.gaussian();
  if (w == 0 && x == 0 && y == 0 && z == 0) w = 1.0;
  return Rotation::from_quaternion(w, x, y, z);
}

}  // namespace svpc
