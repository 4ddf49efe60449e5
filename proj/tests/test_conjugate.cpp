#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "svpc/conjugate.hpp"
#include "svpc/lifting.hpp"
#include "svpc/models.hpp"
#include "svpc/symmetry.hpp"

using namespace svpc;

namespace {

GridSpec nu_grid(int dim, double r, std::size_t n) {
  std::vector<std::vector<double>> axes(dim, GridSpec::symmetric_axis(r, n));
  return GridSpec(SpaceKind::Nu, std::move(axes));
}

GridSpec beta_grid(int dim, double r, std::size_t n) {
  std::size_t k = dim == 2 ? 3 : 7;
  std::vector<std::vector<double>> axes(k, GridSpec::symmetric_axis(r, n));
  return GridSpec(SpaceKind::Beta, std::move(axes));
}

GridSpec box1(double lo, double hi, std::size_t n) {
  std::vector<double> ax(n);
  for (std::size_t i = 0; i < n; ++i)
    ax[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return GridSpec(SpaceKind::Box, {ax});
}

GridFunction model_fn(const std::string& name, int dim, const GridSpec& spec,
                      const std::map<std::string, double>& params = {}) {
  return build(spec, make_model(name, dim, params).phi);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("plain transform: quadratic is self-dual on aligned grids") {
  GridSpec primal = box1(-3.0, 3.0, 61);
  GridFunction f = build(primal, [](std::span<const double> x) {
    return 0.5 * x[0] * x[0];
  });

  GridSpec dual = box1(-2.0, 2.0, 41);
  SweepResult conj = lf_conjugate(f, dual);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    double y = dual.node(i)[0];
    CHECK(conj.values.values()[i] == doctest::Approx(0.5 * y * y).epsilon(1e-12));
  }
  CHECK_FALSE(conj.boundary_active);  // optimal x = y stays interior

  GridFunction back = lf_biconjugate(f, box1(-4.0, 4.0, 81));
  CHECK(max_abs_diff(back.values(), f.values()) <= 1e-11);
}

TEST_CASE("plain transform: indicator and affine pins") {
  GridSpec primal = box1(-2.0, 2.0, 21);
  GridFunction indicator = build(primal, [](std::span<const double> x) {
    return x[0] == 0.0 ? 0.0 : kInf;
  });
  SweepResult conj = lf_conjugate(indicator, box1(-1.0, 1.0, 11));
  for (double v : conj.values.values()) CHECK(v == 0.0);

  // Affine f(x) = <a, x> has conjugate 0 at a, exactly.
  std::vector<std::vector<double>> axes(
      2, GridSpec::symmetric_axis(2.0, 21));
  GridSpec primal2(SpaceKind::Box, axes);
  GridSpec dual2(SpaceKind::Box, axes);
  std::size_t a_flat = dual2.flatten(std::array<std::size_t, 2>{12, 4});
  std::vector<double> a = dual2.node(a_flat);
  GridFunction f = build(primal2, [&](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * x[i];
    return acc;
  });
  SweepResult conj2 = lf_conjugate(f, dual2);
  CHECK(conj2.values.values()[a_flat] == 0.0);

  ConvexityReport cr = midpoint_convexity_check(conj2.values, 1e-9);
  CHECK(cr.convex);
}

TEST_CASE("conjugation rejects -inf and all-infinite input") {
  GridSpec spec = nu_grid(2, 1.0, 3);
  std::vector<double> vals(spec.size(), 0.0);
  vals[0] = -kInf;
  CHECK_THROWS_AS(sv_conjugate(GridFunction(spec, vals), beta_grid(2, 1.0, 3)),
                  InputError);
  std::vector<double> all_inf(spec.size(), kInf);
  CHECK_THROWS_AS(
      sv_conjugate(GridFunction(spec, all_inf), beta_grid(2, 1.0, 3)),
      InputError);
}

TEST_CASE("zero energy: conjugate is nonnegative, envelope exactly zero") {
  GridSpec nu = nu_grid(2, 2.0, 21);
  GridFunction zero = build(nu, [](std::span<const double>) { return 0.0; });
  ConjugationConfig config{nu, beta_grid(2, 2.0, 9)};

  SweepResult theta = sv_conjugate(zero, config.beta_grid);
  for (double v : theta.values.values()) CHECK(v >= 0.0);

  EnvelopeResult env = sv_envelope(zero, config);
  for (double v : env.envelope.values()) CHECK(v == 0.0);
  CHECK(env.report.max_gap == 0.0);
  CHECK(env.report.infinite_nodes == 0);
  CHECK(env.report.certifying);
  CHECK(env.report.invariance_deviation == 0.0);
}

TEST_CASE("envelope is a minorant; conjugation is idempotent") {
  GridSpec nu = nu_grid(2, 2.0, 21);
  GridFunction phi = model_fn("double_well", 2, nu);
  ConjugationConfig config{nu, beta_grid(2, 8.0, 9)};

  EnvelopeResult env = sv_envelope(phi, config);
  for (std::size_t i = 0; i < nu.size(); ++i)
    CHECK(env.envelope.values()[i] <= phi.values()[i] + 1e-12);
  CHECK(env.report.max_gap > 0.1);  // the well interior drops strictly

  // Third conjugate equals the first.
  SweepResult conj_phi = sv_conjugate(phi, config.beta_grid);
  SweepResult conj_env = sv_conjugate(env.envelope, config.beta_grid);
  CHECK(max_abs_diff(conj_phi.values.values(), conj_env.values.values()) <=
        1e-9);

  // Conjugates are midpoint-convex on the beta grid.
  CHECK(midpoint_convexity_check(conj_phi.values, 1e-9).convex);
  CHECK(midpoint_convexity_check(conj_env.values, 1e-9).convex);

  // Envelope of the envelope changes nothing further.
  EnvelopeResult again = sv_envelope(env.envelope, config);
  CHECK(max_abs_diff(again.envelope.values(), env.envelope.values()) <= 1e-9);
  CHECK(again.report.max_gap <= 1e-9);
}

TEST_CASE("order reversal is exact, and envelopes are monotone") {
  GridSpec nu = nu_grid(2, 2.0, 21);
  GridFunction psi = build(nu, [](std::span<const double> v) {
    return v[0] * v[1];
  });
  GridFunction phi = build(nu, [](std::span<const double> v) {
    return std::min(v[0] * v[1], -(v[0] * v[0] + v[1] * v[1]));
  });
  for (std::size_t i = 0; i < nu.size(); ++i)
    REQUIRE(phi.values()[i] <= psi.values()[i]);

  GridSpec betas = beta_grid(2, 4.0, 9);  // unit det slope is a grid node
  SweepResult cphi = sv_conjugate(phi, betas);
  SweepResult cpsi = sv_conjugate(psi, betas);
  for (std::size_t i = 0; i < betas.size(); ++i)
    CHECK(cphi.values.values()[i] >= cpsi.values.values()[i]);

  ConjugationConfig config{nu, betas};
  EnvelopeResult ephi = sv_envelope(phi, config);
  EnvelopeResult epsi = sv_envelope(psi, config);
  for (std::size_t i = 0; i < nu.size(); ++i) {
    CHECK(ephi.envelope.values()[i] <= epsi.envelope.values()[i]);
    // psi is already supported by its lifting slope, so its envelope — and
    // hence the smaller one — never exceeds psi.
    CHECK(ephi.envelope.values()[i] <= psi.values()[i] + 1e-9);
  }
  CHECK(epsi.report.max_gap <= 1e-12);
}

TEST_CASE("envelope validates grids and symmetry") {
  GridSpec nu = nu_grid(2, 2.0, 9);
  GridFunction lopsided = build(nu, [](std::span<const double> v) {
    return v[0];
  });
  ConjugationConfig config{nu, beta_grid(2, 2.0, 5)};
  CHECK_THROWS_AS(sv_envelope(lopsided, config), InvarianceError);

  GridFunction fine = build(nu, [](std::span<const double> v) {
    return v[0] * v[0] + v[1] * v[1];
  });
  ConjugationConfig wrong{nu_grid(2, 2.0, 11), beta_grid(2, 2.0, 5)};
  CHECK_THROWS_AS(sv_envelope(fine, wrong), GridError);
}

TEST_CASE("mixture oracle: pinned values, feasibility, witnesses") {
  GridSpec nu = nu_grid(2, 2.0, 41);
  GridFunction phi = model_fn("double_well", 2, nu);

  // At the origin the optimal mixture of wells averages to 1, strictly below
  // the sampled value 2.
  double origin[] = {0.0, 0.0};
  LPResult at0 = lp_biconjugate_at(phi, origin);
  CHECK(at0.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(at0.value < 2.0);
  REQUIRE(at0.witness.has_value());
  const LPWitness& w = *at0.witness;
  CHECK(w.support.size() <= 4);  // k + 1 for d = 2
  CHECK(w.support.size() == w.weights.size());
  double wsum = 0.0;
  std::vector<double> combo(3, 0.0);
  for (std::size_t j = 0; j < w.support.size(); ++j) {
    CHECK(w.weights[j] > 0.0);
    wsum += w.weights[j];
    std::vector<double> x = lift(nu.node(w.support[j]));
    for (int c = 0; c < 3; ++c) combo[c] += w.weights[j] * x[c];
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
  for (int c = 0; c < 3; ++c)
    CHECK(combo[c] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(w.objective == at0.value);

  // The oracle never exceeds the sample it interpolates.
  RandomState rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t node = static_cast<std::size_t>(rng.uniform() * nu.size());
    LPResult lp = lp_biconjugate_at(phi, nu.node(node));
    CHECK(lp.value <= phi.values()[node] + 1e-9);
  }

  // Two isolated finite samples whose segment misses the target: infeasible.
  std::vector<double> sparse(nu.size(), kInf);
  auto flat_of = [&](double x, double y) {
    std::vector<double> pt{x, y};
    for (std::size_t p = 0; p < nu.size(); ++p)
      if (nu.node(p) == pt) return p;
    FAIL("node not found");
    return std::size_t{0};
  };
  sparse[flat_of(1.0, 1.0)] = 0.0;
  sparse[flat_of(2.0, 2.0)] = 0.0;
  double target[] = {1.5, 1.5};
  LPResult gap = lp_biconjugate_at(GridFunction(nu, sparse), target);
  CHECK(gap.value == kInf);
  CHECK_FALSE(gap.witness.has_value());
}

TEST_CASE("mixture oracle matches affine-in-lifting samples") {
  GridSpec nu = nu_grid(2, 2.0, 21);
  GridFunction phi = model_fn("lifted_affine", 2, nu);
  RandomState rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t node = static_cast<std::size_t>(rng.uniform() * nu.size());
    LPResult lp = lp_biconjugate_at(phi, nu.node(node));
    CHECK(lp.value == doctest::Approx(phi.values()[node]).epsilon(1e-8));
  }
}

TEST_CASE("cross check: dual sweep against the mixture oracle") {
  GridSpec nu = nu_grid(2, 2.0, 21);
  std::vector<std::size_t> samples;
  for (std::size_t p = 0; p < nu.size(); ++p)
    if (!nu.on_boundary(p) && p % 37 == 0) samples.push_back(p);
  REQUIRE(samples.size() >= 5);

  ConjugationConfig affine_cfg{nu, beta_grid(2, 4.0, 9), 1e-6};
  CrossCheckReport affine =
      cross_check(model_fn("lifted_affine", 2, nu), affine_cfg, samples);
  CHECK(affine.agree);
  CHECK(affine.max_abs_diff <= 1e-6);
  CHECK(affine.max_envelope_excess <= 1e-6);

  GridFunction constant = build(nu, [](std::span<const double>) {
    return 2.5;
  });
  ConjugationConfig const_cfg{nu, beta_grid(2, 2.0, 5), 1e-8};
  CrossCheckReport flat = cross_check(constant, const_cfg, samples);
  CHECK(flat.agree);
  CHECK(flat.max_abs_diff <= 1e-8);

  ConjugationConfig well_cfg{nu, beta_grid(2, 8.0, 9)};
  CrossCheckReport well =
      cross_check(model_fn("double_well", 2, nu), well_cfg, samples);
  CHECK(well.agree);
  CHECK(well.entries.size() == samples.size());
  for (const CrossCheckEntry& e : well.entries) {
    CHECK(e.lp_value < kInf);
    CHECK(e.envelope_value <= e.lp_value + well.agreement_bound);
  }
}

TEST_CASE("restricted d3 sweep reproduces a determinant-slope energy") {
  GridSpec nu = nu_grid(3, 2.0, 9);
  GridFunction phi = model_fn("lifted_affine", 3, nu);  // det coordinate
  std::vector<double> unit = GridSpec::symmetric_axis(1.0, 3);
  EnvelopeResult smoke = sv_envelope_isochoric_smoke(phi, unit, unit, unit);
  CHECK_FALSE(smoke.report.certifying);
  CHECK(smoke.report.max_gap <= 1e-9);
  for (std::size_t i = 0; i < nu.size(); ++i)
    CHECK(smoke.envelope.values()[i] <= phi.values()[i] + 1e-12);
}

TEST_CASE("suggested beta axes track sampled slopes") {
  GridSpec nu = nu_grid(2, 2.0, 21);
  GridFunction phi = model_fn("lifted_affine", 2, nu);
  std::vector<std::vector<double>> axes = suggest_beta_axes(phi, 17);
  REQUIRE(axes.size() == 3);
  for (const auto& ax : axes) {
    CHECK(ax.size() == 17);
    std::size_t n = ax.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(ax[i] == -ax[n - 1 - i]);
  }
  // The determinant coordinate carries slope 1; the range must reach it.
  CHECK(axes[2].back() >= 1.0);
  GridSpec usable(SpaceKind::Beta, axes);
  CHECK(usable.size() == 17uLL * 17uLL * 17uLL);
}
