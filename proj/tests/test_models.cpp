#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "json.hpp"
#include "svpc/gridfn.hpp"
#include "svpc/models.hpp"
#include "svpc/symmetry.hpp"

using namespace svpc;

namespace {

double phi_at(const EnergyModel& m, std::initializer_list<double> nu) {
  std::vector<double> v(nu);
  return m.phi(v);
}

GridSpec nu_grid(int dim, double r, std::size_t n) {
  std::vector<std::vector<double>> axes(dim, GridSpec::symmetric_axis(r, n));
  return GridSpec(SpaceKind::Nu, std::move(axes));
}

}  // namespace

TEST_CASE("catalog contents are sorted and dimension-aware") {
  std::vector<std::string> two = catalog(2);
  CHECK(two == std::vector<std::string>{
                   "concave_quadratic", "det_barrier", "double_well",
                   "invariant_model", "lifted_affine", "lifted_convex",
                   "ogden_like", "st_venant_kirchhoff"});
  std::vector<std::string> three = catalog(3);
  CHECK(three.size() == 7);
  CHECK(std::is_sorted(three.begin(), three.end()));
  CHECK(std::find(three.begin(), three.end(), "st_venant_kirchhoff") ==
        three.end());
  CHECK_THROWS_AS(catalog(4), DimensionError);
}

TEST_CASE("instantiation validates names, dimensions, and parameters") {
  CHECK_THROWS_AS(make_model("no_such_model", 2), InputError);
  CHECK_THROWS_AS(make_model("st_venant_kirchhoff", 3), InputError);
  CHECK_THROWS_AS(make_model("double_well", 2, {{"bogus", 1.0}}), InputError);
  CHECK_THROWS_AS(make_model("det_barrier", 2, {{"a", 1.0}}), InputError);
  CHECK_THROWS_AS(make_model("ogden_like", 2, {{"p", 0.5}}), InputError);
  CHECK_THROWS_AS(make_model("ogden_like", 2, {{"q", -0.1}}), InputError);
  // The d = 3 invariant family has no absolute-value term.
  CHECK_THROWS_AS(make_model("invariant_model", 3, {{"q", 0.1}}), InputError);

  EnergyModel m = make_model("double_well", 2, {{"a", 2.0}});
  CHECK(m.params.at("a") == 2.0);
  CHECK(m.dim == 2);
  CHECK(m.name == "double_well");
  CHECK_FALSE(m.summary.empty());
}

TEST_CASE("pinned sample values") {
  CHECK(phi_at(make_model("st_venant_kirchhoff", 2), {1.0, 1.0}) == 0.0);
  CHECK(phi_at(make_model("st_venant_kirchhoff", 2), {0.0, 0.0}) == 1.0);

  CHECK(phi_at(make_model("double_well", 2), {0.0, 0.0}) == 2.0);
  CHECK(phi_at(make_model("double_well", 2), {1.0, 1.0}) == 0.0);
  CHECK(phi_at(make_model("double_well", 2), {-1.0, -1.0}) == 0.0);
  // (-1, 1) carries the opposite determinant sign and misses every well.
  CHECK(phi_at(make_model("double_well", 2), {-1.0, 1.0}) == 4.0);

  CHECK(phi_at(make_model("concave_quadratic", 2), {3.0, 3.0}) == -18.0);

  CHECK(phi_at(make_model("det_barrier", 2), {1.0, 1.0}) == 2.0);
  CHECK(phi_at(make_model("det_barrier", 2), {1.0, -1.0}) == kInf);
  CHECK(phi_at(make_model("det_barrier", 3), {1.0, 1.0, -1.0}) == kInf);

  CHECK(phi_at(make_model("invariant_model", 2), {1.0, 2.0}) ==
        doctest::Approx(2.15).epsilon(1e-14));
  CHECK(phi_at(make_model("lifted_convex", 2), {1.0, 2.0}) ==
        doctest::Approx(2.15).epsilon(1e-14));

  EnergyModel affine = make_model("lifted_affine", 2);
  CHECK(phi_at(affine, {2.0, 3.0}) == 6.0);
  CHECK(phi_at(affine, {-2.0, 3.0}) == -6.0);

  EnergyModel ogden = make_model("ogden_like", 2);
  CHECK(phi_at(ogden, {1.0, 1.0}) == 3.0);
  CHECK(phi_at(ogden, {1.0, 0.0}) == kInf);
  EnergyModel compressible = make_model("ogden_like", 2, {{"q", 0.0}});
  CHECK(phi_at(compressible, {1.0, 0.0}) == 2.0);
}

TEST_CASE("flags reflect parameter values") {
  CHECK(make_model("lifted_affine", 3).flags.known_svpc == KnownSvpc::Yes);
  CHECK(make_model("lifted_convex", 2).flags.known_svpc == KnownSvpc::Yes);
  CHECK(make_model("lifted_convex", 2, {{"a", -0.1}}).flags.known_svpc ==
        KnownSvpc::Unknown);
  CHECK(make_model("concave_quadratic", 2).flags.known_svpc == KnownSvpc::No);
  CHECK(make_model("concave_quadratic", 2, {{"a", 0.0}}).flags.known_svpc ==
        KnownSvpc::Yes);
  CHECK(make_model("double_well", 2).flags.known_svpc == KnownSvpc::No);
  CHECK(make_model("st_venant_kirchhoff", 2).flags.known_svpc == KnownSvpc::No);
  CHECK(make_model("invariant_model", 2).flags.known_svpc == KnownSvpc::Yes);
  CHECK(make_model("invariant_model", 2, {{"a", -1.0}}).flags.known_svpc ==
        KnownSvpc::Unknown);

  EnergyModel barrier = make_model("det_barrier", 2);
  CHECK_FALSE(barrier.flags.finite_everywhere);
  CHECK(barrier.flags.det_barrier);
  CHECK(barrier.flags.known_svpc == KnownSvpc::Unknown);

  CHECK(make_model("ogden_like", 2).flags.finite_everywhere == false);
  EnergyModel compressible = make_model("ogden_like", 2, {{"q", 0.0}});
  CHECK(compressible.flags.finite_everywhere);
  CHECK(compressible.flags.known_svpc == KnownSvpc::Yes);

  CHECK(known_svpc_name(KnownSvpc::Yes) == "yes");
  CHECK(known_svpc_name(KnownSvpc::No) == "no");
  CHECK(known_svpc_name(KnownSvpc::Unknown) == "unknown");
}

TEST_CASE("matrix energies agree with their spectral form") {
  RandomState rng(59);
  for (int dim : {2, 3}) {
    for (const std::string& name : catalog(dim)) {
      EnergyModel m = make_model(name, dim);
      for (int trial = 0; trial < 40; ++trial) {
        SquareMatrix f(dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) f(i, j) = rng.gaussian();
        SignedSpectrum s = signed_svd(f);
        double via_phi = m.phi(s.values());
        double via_w = m.w(f);
        if (via_phi == kInf || via_w == kInf) {
          CHECK(via_phi == via_w);
        } else {
          CHECK(via_w == doctest::Approx(via_phi).epsilon(1e-8));
        }
      }
    }
  }

  // The barrier checks the determinant sign on the matrix directly.
  EnergyModel barrier = make_model("det_barrier", 2);
  SquareMatrix flip = SquareMatrix::diagonal(std::vector<double>{1.0, -1.0});
  CHECK(barrier.w(flip) == kInf);
  SquareMatrix ok = SquareMatrix::diagonal(std::vector<double>{1.0, 1.0});
  CHECK(barrier.w(ok) == 2.0);
}

TEST_CASE("every catalog energy is group-invariant on a grid") {
  for (int dim : {2, 3}) {
    GridSpec spec = nu_grid(dim, 2.0, dim == 2 ? 9 : 5);
    for (const std::string& name : catalog(dim)) {
      GridFunction phi = build(spec, make_model(name, dim).phi);
      InvarianceReport rep = is_invariant(phi, 1e-10);
      CHECK(rep.invariant);
    }
  }
}

TEST_CASE("schema listing is valid, deterministic, and complete") {
  std::string text = model_schemas();
  CHECK(text == model_schemas());
  nlohmann::json j = nlohmann::json::parse(text);
  REQUIRE(j.is_array());
  CHECK(j.size() == catalog(2).size() + catalog(3).size());
  for (const auto& entry : j) {
    CHECK(entry.contains("name"));
    CHECK(entry.contains("dim"));
    CHECK(entry.contains("params"));
    CHECK(entry.contains("flags"));
    CHECK(entry.contains("summary"));
    int dim = entry["dim"].get<int>();
    std::vector<std::string> names = catalog(dim);
    CHECK(std::find(names.begin(), names.end(),
                    entry["name"].get<std::string>()) != names.end());
    CHECK(entry["params"].is_object());
  }
}
