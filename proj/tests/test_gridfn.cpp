#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "svpc/gridfn.hpp"

using namespace svpc;

namespace {

GridSpec nu2(double r, std::size_t n) {
  std::vector<std::vector<double>> axes(2, GridSpec::symmetric_axis(r, n));
  return GridSpec(SpaceKind::Nu, std::move(axes));
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("symmetric axis mirrors exactly") {
  std::vector<double> five = GridSpec::symmetric_axis(2.0, 5);
  CHECK(five == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});

  std::vector<double> ax = GridSpec::symmetric_axis(0.3, 7);
  std::size_t n = ax.size();
  CHECK(ax[n / 2] == 0.0);
  for (std::size_t i = 0; i < n; ++i) CHECK(ax[i] == -ax[n - 1 - i]);

  CHECK_THROWS_AS(GridSpec::symmetric_axis(1.0, 4), GridError);
  CHECK_THROWS_AS(GridSpec::symmetric_axis(1.0, 1), GridError);
  CHECK_THROWS_AS(GridSpec::symmetric_axis(0.0, 5), GridError);
  CHECK_THROWS_AS(GridSpec::symmetric_axis(-1.0, 5), GridError);
}

TEST_CASE("grid construction validates per space kind") {
  std::vector<double> sym = GridSpec::symmetric_axis(1.0, 3);

  CHECK_THROWS_AS(GridSpec(SpaceKind::Nu, {sym}), GridError);
  CHECK_THROWS_AS(GridSpec(SpaceKind::Nu, {sym, sym, sym, sym}), GridError);
  CHECK_THROWS_AS(
      GridSpec(SpaceKind::Nu, {sym, GridSpec::symmetric_axis(2.0, 3)}),
      GridError);
  CHECK_THROWS_AS(GridSpec(SpaceKind::Nu, {{-1.0, 0.0, 2.0}, {-1.0, 0.0, 2.0}}),
                  GridError);

  // Beta axes must each be symmetric but may differ from one another.
  GridSpec beta(SpaceKind::Beta,
                {sym, GridSpec::symmetric_axis(2.0, 5), sym});
  CHECK(beta.base_dim() == 2);
  CHECK_THROWS_AS(GridSpec(SpaceKind::Beta, {sym, sym, sym, sym}), GridError);
  GridSpec beta7(SpaceKind::Beta, std::vector<std::vector<double>>(7, sym));
  CHECK(beta7.base_dim() == 3);

  // Box grids drop the symmetry requirement but not monotonicity/finiteness.
  GridSpec box(SpaceKind::Box, {{0.0, 0.5, 2.0}});
  CHECK(box.dim() == 1);
  CHECK(box.base_dim() == 1);
  CHECK_THROWS_AS(GridSpec(SpaceKind::Box, {{0.0, 0.0, 1.0}}), GridError);
  CHECK_THROWS_AS(GridSpec(SpaceKind::Box, {{0.0, std::nan(""), 1.0}}),
                  GridError);
  CHECK_THROWS_AS(GridSpec(SpaceKind::Box, {{}}), GridError);
  CHECK_THROWS_AS(
      GridSpec(SpaceKind::Box, std::vector<std::vector<double>>(9, sym)),
      GridError);
}

TEST_CASE("layout: axis 0 slowest, exact corner nodes") {
  GridSpec spec = nu2(1.0, 3);
  CHECK(spec.size() == 9);
  CHECK(spec.node(0) == std::vector<double>{-1.0, -1.0});
  CHECK(spec.node(8) == std::vector<double>{1.0, 1.0});
  CHECK(spec.node(5) == std::vector<double>{0.0, 1.0});

  GridFunction prod = build(spec, [](std::span<const double> nu) {
    return nu[0] * nu[1];
  });
  std::vector<double> expected{1, 0, -1, 0, 0, 0, -1, 0, 1};
  for (std::size_t i = 0; i < 9; ++i) CHECK(prod.values()[i] == expected[i]);

  std::vector<std::size_t> mi(2);
  for (std::size_t p = 0; p < spec.size(); ++p) {
    spec.unflatten(p, mi);
    CHECK(spec.flatten(mi) == p);
  }
  std::size_t bad[] = {3, 0};
  CHECK_THROWS_AS(spec.flatten(bad), GridError);
  CHECK_THROWS_AS(spec.node(9), GridError);

  std::size_t interior = 0;
  for (std::size_t p = 0; p < spec.size(); ++p)
    if (!spec.on_boundary(p)) ++interior;
  CHECK(interior == 1);
  CHECK_FALSE(spec.on_boundary(4));

  CHECK(spec.max_spacing() == 1.0);
  CHECK(spec.is_uniform());
  CHECK_FALSE(GridSpec(SpaceKind::Box, {{0.0, 1.0, 3.0}}).is_uniform());

  CHECK(spec == nu2(1.0, 3));
  CHECK(spec != nu2(2.0, 3));
}

TEST_CASE("build is deterministic and rejects NaN and -inf") {
  GridSpec spec = nu2(2.0, 9);
  auto f = [](std::span<const double> nu) {
    return std::sin(nu[0]) * std::exp(nu[1]);
  };
  GridFunction a = build(spec, f);
  GridFunction b = build(spec, f);
  CHECK(a.values() == b.values());

  auto poison = [](std::span<const double> nu) {
    return nu[0] == 0.0 && nu[1] == 0.0 ? std::nan("") : 0.0;
  };
  CHECK_THROWS_AS(build(spec, poison), InputError);

  auto bottomless = [](std::span<const double> nu) {
    return nu[0] > 1.0 ? -kInf : 0.0;
  };
  CHECK_THROWS_AS(build(spec, bottomless), InputError);
  GridFunction c = build(spec, bottomless, /*allow_neg_inf=*/true);
  CHECK(c.value_at(c.spec().size() - 1) == -kInf);

  GridFunction top = build(spec, [](std::span<const double> nu) {
    return nu[0] > 1.0 ? kInf : 1.0;
  });
  CHECK(top.finite_count() == 63);  // two of nine axis-0 slabs are infinite

  CHECK_THROWS_AS(GridFunction(spec, std::vector<double>(5, 0.0)), GridError);
  std::vector<double> with_nan(spec.size(), 0.0);
  with_nan[3] = std::nan("");
  CHECK_THROWS_AS(GridFunction(spec, std::move(with_nan)), GridError);
  CHECK_THROWS_AS(a.value_at(spec.size()), GridError);
}

TEST_CASE("midpoint convexity check") {
  GridSpec spec = nu2(2.0, 9);
  GridFunction bowl = build(spec, [](std::span<const double> nu) {
    return nu[0] * nu[0] + nu[1] * nu[1];
  });
  ConvexityReport ok = midpoint_convexity_check(bowl, 0.0);
  CHECK(ok.convex);
  CHECK(ok.worst_violation == 0.0);
  CHECK(ok.witness_node == spec.size());

  GridFunction dome = build(spec, [](std::span<const double> nu) {
    return -nu[0] * nu[0];
  });
  ConvexityReport bad = midpoint_convexity_check(dome, 1e-12);
  CHECK_FALSE(bad.convex);
  // Axis spacing 0.5: the chord gap of -x^2 is exactly h^2.
  CHECK(bad.worst_violation == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(bad.witness_node < spec.size());
  CHECK(bad.witness_step.size() == 2);

  // Indicator of the origin: infinite chords never witness violations.
  GridSpec tiny = nu2(1.0, 3);
  GridFunction indicator = build(tiny, [](std::span<const double> nu) {
    return nu[0] == 0.0 && nu[1] == 0.0 ? 0.0 : kInf;
  });
  CHECK(midpoint_convexity_check(indicator, 0.0).convex);

  // An infinite value over a finite chord is an infinite violation.
  std::vector<double> vals(tiny.size(), 0.0);
  vals[4] = kInf;
  ConvexityReport spike = midpoint_convexity_check(GridFunction(tiny, vals), 0.0);
  CHECK_FALSE(spike.convex);
  CHECK(spike.worst_violation == kInf);
  CHECK(spike.witness_node == 4);

  GridFunction uneven(GridSpec(SpaceKind::Box, {{0.0, 1.0, 3.0}}),
                      {0.0, 0.0, 0.0});
  CHECK_THROWS_AS(midpoint_convexity_check(uneven, 0.0), GridError);
}

TEST_CASE("multilinear interpolation") {
  GridSpec spec = nu2(2.0, 5);
  GridFunction f = build(spec, [](std::span<const double> nu) {
    return 2.0 * nu[0] + 3.0 * nu[1] + nu[0] * nu[1];
  });

  std::vector<double> pt(2);
  for (std::size_t p = 0; p < spec.size(); ++p) {
    spec.node_at(p, pt);
    CHECK(interpolate_multilinear(f, pt) == f.values()[p]);
  }

  // Bilinear functions are reproduced exactly inside cells.
  double mid[] = {0.3, -0.7};
  CHECK(interpolate_multilinear(f, mid) ==
        doctest::Approx(2.0 * 0.3 + 3.0 * -0.7 + 0.3 * -0.7).epsilon(1e-14));

  double outside[] = {2.5, 0.0};
  CHECK_THROWS_AS(interpolate_multilinear(f, outside), GridError);
  double wrong[] = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(interpolate_multilinear(f, wrong), DimensionError);

  // An infinite corner dominates whenever it has positive weight, but a
  // zero-weight infinite corner is ignored.
  GridSpec tiny = nu2(1.0, 3);
  std::vector<double> vals(tiny.size(), 0.0);
  vals[8] = kInf;  // node (1, 1)
  GridFunction g(tiny, vals);
  double inside[] = {0.5, 0.5};
  CHECK(interpolate_multilinear(g, inside) == kInf);
  double edge[] = {0.0, 1.0};
  CHECK(interpolate_multilinear(g, edge) == 0.0);
}

TEST_CASE("JSON round trip is bit-exact") {
  GridSpec spec(SpaceKind::Box, {{0.0, 1.0, 2.0, 3.0, 4.0, 5.0}});
  std::vector<double> vals{0.1,  1.0 / 3.0, -1e-17,
                           kInf, -kInf,     5e-324};
  GridFunction f(spec, vals);

  std::string text = to_json_string(f);
  GridFunction back = gridfn_from_json_string(text);
  CHECK(back.spec() == f.spec());
  REQUIRE(back.values().size() == vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    CHECK(same_bits(back.values()[i], vals[i]));
  CHECK(to_json_string(back) == text);

  GridFunction nu_kind = build(nu2(1.0, 3), [](std::span<const double> nu) {
    return nu[0] * nu[0] + nu[1];
  });
  GridFunction nu_back = gridfn_from_json_string(to_json_string(nu_kind));
  CHECK(nu_back.spec().kind() == SpaceKind::Nu);
  CHECK(nu_back.values() == nu_kind.values());

  CHECK_THROWS_AS(gridfn_from_json_string("not json"), InputError);
  CHECK_THROWS_AS(gridfn_from_json_string("{\"kind\":\"other\"}"), InputError);
  CHECK_THROWS_AS(
      gridfn_from_json_string(
          "{\"kind\":\"gridfn\",\"dim_kind\":\"box\",\"axes\":[[0,1]],"
          "\"values\":[\"oops\",1]}"),
      InputError);

  const char* path = "gridfn_roundtrip_test.json";
  write_gridfn(f, path);
  GridFunction from_disk = read_gridfn(path);
  CHECK(from_disk.values() == f.values());
  CHECK(from_disk.spec() == f.spec());
  std::remove(path);
  CHECK_THROWS_AS(read_gridfn("does_not_exist_anywhere.json"), InputError);
}

TEST_CASE("CSV export") {
  GridSpec spec(SpaceKind::Box, {{0.5, 1.5}});
  GridFunction f(spec, {0.5, kInf});
  const char* path = "gridfn_csv_test.csv";
  write_csv(f, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "0.5,0.5\n1.5,+inf\n");
  std::remove(path);
}
