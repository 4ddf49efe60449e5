#pragma once

#include <array>
#include <optional>
#include <span>

#include "svpc/common.hpp"

namespace svpc {

// Dense 2x2 or 3x3 matrix, row-major, value-semantic. Unused tail entries of
// the fixed storage stay zero so operator== is well-defined.
class SquareMatrix {
 public:
  explicit SquareMatrix(int dim);
  static SquareMatrix identity(int dim);
  static SquareMatrix diagonal(std::span<const double> nu);
  static SquareMatrix from_rows(int dim, std::span<const double> rowmajor);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return e_[i * dim_ + j]; }
  double& operator()(int i, int j) { return e_[i * dim_ + j]; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  int dim_;
  std::array<double, 9> e_{};
};

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix transpose(const SquareMatrix& a);
double frobenius_norm(const SquareMatrix& a);

// Determinant by cofactor expansion along the first row. The 3x3 grouping
// e00*(e11*e22 - e12*e21) - ... is relied on elsewhere for exact agreement
// with products of diagonal entries.
double det(const SquareMatrix& f);

// Transposed adjugate by cofactors (d = 3 only); defined for singular f.
SquareMatrix adjugate_transpose(const SquareMatrix& f);

// Entrywise product.
SquareMatrix schur_product(const SquareMatrix& a, const SquareMatrix& b);

// The minors vector: (F, det F) for d = 2 and (F, adj(F)^T, det F) for d = 3.
struct MinorsVector {
  int dim;
  SquareMatrix a;                 // F itself
  std::optional<SquareMatrix> b;  // adj(F)^T, present only for d = 3
  double c;                       // det F
};
MinorsVector minors(const SquareMatrix& f);

// Canonical signed singular values: |nu_1| >= ... >= |nu_d|, all entries
// nonnegative except possibly the last, which carries sign(det F); the sign
// of a zero is +. The product of the entries equals det F (up to roundoff).
struct SignedSpectrum {
  int dim;
  std::array<double, 3> nu{};
  std::span<const double> values() const {
    return {nu.data(), static_cast<std::size_t>(dim)};
  }
};
SignedSpectrum signed_svd(const SquareMatrix& f);

// A validated element of SO(d).
class Rotation {
 public:
  explicit Rotation(const SquareMatrix& m, double tol = 1e-9);
  static Rotation planar(double theta);  // d = 2
  static Rotation from_quaternion(double w, double x, double y, double z);

  const SquareMatrix& matrix() const { return m_; }
  int dim() const { return m_.dim(); }

 private:
  SquareMatrix m_;
};

// Haar-uniform rotation: wrapped angle for d = 2, normalized Gaussian
// quaternion for d = 3. Deterministic given the state.
Rotation sample_rotation(int dim, RandomState& rng);

}  // namespace svpc
