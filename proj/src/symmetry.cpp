#include "svpc/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "svpc/lifting.hpp"

namespace svpc {

namespace {

void check_group_dim(int dim) {
  if (dim != 2 && dim != 3)
    throw DimensionError("group is defined for dimensions 2 and 3 only");
}

GroupTable build_table(int dim) {
  GroupTable table{dim, {}};
  std::array<std::uint8_t, 3> perm{};
  for (int i = 0; i < dim; ++i) perm[i] = static_cast<std::uint8_t>(i);
  std::vector<std::uint8_t> p(perm.begin(), perm.begin() + dim);
  do {
    // Sign vectors in lexicographic order with + before -; keep product +1.
    int combos = 1 << dim;
    for (int mask = 0; mask < combos; ++mask) {
      GroupElement s{dim, {}, {}};
      int prod = 1;
      for (int i = 0; i < dim; ++i) {
        s.perm[i] = p[i];
        s.signs[i] = (mask >> (dim - 1 - i)) & 1 ? -1 : 1;
        prod *= s.signs[i];
      }
      if (prod == 1) table.elements.push_back(s);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return table;
}

}  // namespace

SquareMatrix GroupElement::matrix() const {
  SquareMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, perm[i]) = signs[i];
  return m;
}

int GroupElement::parity() const {
  int inversions = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

int GroupElement::sign_product() const {
  int prod = 1;
  for (int i = 0; i < dim; ++i) prod *= signs[i];
  return prod;
}

const GroupTable& group_table(int dim) {
  check_group_dim(dim);
  static const GroupTable t2 = build_table(2);
  static const GroupTable t3 = build_table(3);
  return dim == 2 ? t2 : t3;
}

void apply_into(const GroupElement& s, std::span<const double> nu,
                std::span<double> out) {
  if (static_cast<int>(nu.size()) != s.dim ||
      static_cast<int>(out.size()) != s.dim)
    throw DimensionError("apply: dimension mismatch");
  for (int i = 0; i < s.dim; ++i) out[i] = s.signs[i] * nu[s.perm[i]];
}

std::vector<double> apply(const GroupElement& s, std::span<const double> nu) {
  std::vector<double> out(s.dim);
  apply_into(s, nu, out);
  return out;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  if (a.dim != b.dim) throw DimensionError("compose: dimension mismatch");
  GroupElement c{a.dim, {}, {}};
  for (int i = 0; i < a.dim; ++i) {
    c.perm[i] = b.perm[a.perm[i]];
    c.signs[i] = static_cast<std::int8_t>(a.signs[i] * b.signs[a.perm[i]]);
  }
  return c;
}

GroupElement inverse(const GroupElement& s) {
  GroupElement inv{s.dim, {}, {}};
  for (int i = 0; i < s.dim; ++i) {
    inv.perm[s.perm[i]] = static_cast<std::uint8_t>(i);
    inv.signs[s.perm[i]] = s.signs[i];
  }
  return inv;
}

bool same_element(const GroupElement& a, const GroupElement& b) {
  if (a.dim != b.dim) return false;
  for (int i = 0; i < a.dim; ++i)
    if (a.perm[i] != b.perm[i] || a.signs[i] != b.signs[i]) return false;
  return true;
}

std::size_t apply_index(const GroupElement& s, const GridSpec& spec,
                        std::size_t flat) {
  if (spec.kind() != SpaceKind::Nu)
    throw GridError("group action on grids requires a nu-space grid");
  if (spec.dim() != s.dim)
    throw DimensionError("apply_index: dimension mismatch");
  std::array<std::size_t, 3> mi{}, out{};
  spec.unflatten(flat, std::span(mi.data(), s.dim));
  std::size_t n = spec.axis_size(0);
  for (int i = 0; i < s.dim; ++i) {
    std::size_t src = mi[s.perm[i]];
    // Negation maps axis node j to node n-1-j exactly (axes are symmetric).
    out[i] = s.signs[i] > 0 ? src : n - 1 - src;
  }
  return spec.flatten(std::span<const std::size_t>(out.data(), s.dim));
}

InvarianceReport is_invariant(const GridFunction& phi, double tol) {
  const GridSpec& spec = phi.spec();
  const GroupTable& table = group_table(spec.dim());
  InvarianceReport report{true, 0.0, spec.size(), 0};
  for (std::size_t e = 0; e < table.elements.size(); ++e) {
    const GroupElement& s = table.elements[e];
    for (std::size_t p = 0; p < spec.size(); ++p) {
      double a = phi.values()[p];
      double b = phi.values()[apply_index(s, spec, p)];
      double dev;
      if (a == b)
        dev = 0.0;  // covers equal infinities
      else if (std::isinf(a) || std::isinf(b))
        dev = kInf;
      else
        dev = std::abs(a - b);
      if (dev > report.max_deviation) {
        report.max_deviation = dev;
        report.witness_node = p;
        report.witness_element = e;
      }
    }
  }
  report.invariant = report.max_deviation <= tol;
  if (report.invariant) report.witness_node = spec.size();
  return report;
}

GridFunction symmetrize(const GridFunction& phi, SymmetrizeMode mode) {
  const GridSpec& spec = phi.spec();
  const GroupTable& table = group_table(spec.dim());
  std::vector<double> out(spec.size());
  for (std::size_t p = 0; p < spec.size(); ++p) {
    double best = phi.values()[p];
    for (const GroupElement& s : table.elements) {
      double v = phi.values()[apply_index(s, spec, p)];
      best = mode == SymmetrizeMode::Min ? std::min(best, v) : std::max(best, v);
    }
    out[p] = best;
  }
  return GridFunction(spec, std::move(out));
}

double lambda_support(std::span<const double> beta,
                      std::span<const double> nu) {
  int d = static_cast<int>(nu.size());
  if (static_cast<int>(beta.size()) != lifted_dim(d))
    throw DimensionError("lambda_support: beta must live in the lifted space");
  const GroupTable& table = group_table(d);
  std::array<double, 3> w{};
  std::array<double, 7> m{};
  double best = -kInf;
  for (const GroupElement& s : table.elements) {
    apply_into(s, nu, std::span(w.data(), d));
    lift_into(std::span<const double>(w.data(), d),
              std::span(m.data(), beta.size()));
    double v = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) v += beta[i] * m[i];
    best = std::max(best, v);
  }
  return best;
}

double lifted_rotation_value(std::span<const double> beta,
                             std::span<const double> nu, const Rotation& r1,
                             const Rotation& r2) {
  int d = static_cast<int>(nu.size());
  if (r1.dim() != d || r2.dim() != d)
    throw DimensionError("lifted_rotation_value: rotation dimension mismatch");
  if (static_cast<int>(beta.size()) != lifted_dim(d))
    throw DimensionError("lifted_rotation_value: beta dimension mismatch");
  SquareMatrix a = r1.matrix() * SquareMatrix::diagonal(nu) * r2.matrix();
  std::vector<double> x = project(minors(a));
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v += beta[i] * x[i];
  return v;
}

double schur_formula_value(std::span<const double> beta,
                           std::span<const double> nu, const Rotation& r1,
                           const Rotation& r2) {
  int d = static_cast<int>(nu.size());
  if (r1.dim() != d || r2.dim() != d)
    throw DimensionError("schur_formula_value: rotation dimension mismatch");
  if (static_cast<int>(beta.size()) != lifted_dim(d))
    throw DimensionError("schur_formula_value: beta dimension mismatch");
  SquareMatrix s = schur_product(r1.matrix(), transpose(r2.matrix()));
  double acc = 0.0;
  if (d == 2) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) acc += s(i, j) * beta[i] * nu[j];
    return acc + beta[2] * (nu[0] * nu[1]);
  }
  // nu~ = (nu2 nu3, nu1 nu3, nu1 nu2), the diagonal of the adjugate.
  std::array<double, 3> nt{nu[1] * nu[2], nu[0] * nu[2], nu[0] * nu[1]};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      acc += s(i, j) * (beta[i] * nu[j] + beta[3 + i] * nt[j]);
  return acc + beta[6] * (nu[0] * (nu[1] * nu[2]));
}

std::pair<Rotation, Rotation> rotation_pair(const GroupElement& s) {
  // Entry magnitudes 1 with one adjustable sign per factor: a_i at (i, p(i))
  // in R1 and b_i = signs_i * a_i at (i, p(i)) in R2^T. Choosing
  // a_d = parity makes det(R1) = det(R2) = +1, and the sign product of the
  // group element (= +1) keeps the two determinants consistent.
  int d = s.dim;
  std::array<double, 3> a{1.0, 1.0, 1.0};
  a[d - 1] = s.parity();
  SquareMatrix r1(d), r2(d);
  for (int i = 0; i < d; ++i) {
    double b = s.signs[i] * a[i];
    r1(i, s.perm[i]) = a[i];
    r2(s.perm[i], i) = b;  // R2^T has b at (i, perm[i])
  }
  return {Rotation(r1), Rotation(r2)};
}

}  // namespace svpc
