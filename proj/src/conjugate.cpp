#include "svpc/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "json.hpp"
#include "simplex.hpp"
#include "svpc/lifting.hpp"
#include "svpc/symmetry.hpp"

namespace svpc {

namespace {

// How an output node maps to the coordinate vector used in the pairing.
enum class OutMap { Identity, Lift, LiftReduce3 };

void map_point(OutMap map, std::span<const double> node, std::span<double> out) {
  switch (map) {
    case OutMap::Identity:
      std::copy(node.begin(), node.end(), out.begin());
      return;
    case OutMap::Lift:
      lift_into(node, out);
      return;
    case OutMap::LiftReduce3: {
      // Block sums of the d = 3 lifting: pairs with restricted slopes
      // (u,u,u,v,v,v,w) via (sum nu_i, sum adj_i, product).
      std::array<double, 7> m{};
      lift_into(node, m);
      out[0] = m[0] + m[1] + m[2];
      out[1] = m[3] + m[4] + m[5];
      out[2] = m[6];
      return;
    }
  }
}

std::size_t mapped_dim(OutMap map, const GridSpec& spec) {
  switch (map) {
    case OutMap::Identity: return spec.dim();
    case OutMap::Lift: return lifted_dim(spec.dim());
    case OutMap::LiftReduce3: return 3;
  }
  throw InternalError("unreachable");
}

struct PointTable {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> coords;       // n * k
  std::vector<double> vals;         // n
  std::vector<std::uint32_t> src;   // original flat index, ascending
};

void check_indexable(std::size_t n) {
  if (n >= std::numeric_limits<std::uint32_t>::max())
    throw GridError("grid too large (must stay below 2^32 - 1 nodes)");
}

PointTable collect_finite(const GridFunction& g, OutMap map,
                          const char* role) {
  check_indexable(g.spec().size());
  PointTable table;
  table.k = mapped_dim(map, g.spec());
  std::vector<double> node(g.spec().dim());
  std::vector<double> x(table.k);
  for (std::size_t i = 0; i < g.spec().size(); ++i) {
    double v = g.values()[i];
    if (v == -kInf)
      throw InputError(std::string(role) + ": -inf samples are not allowed");
    if (v == kInf) continue;
    g.spec().node_at(i, node);
    map_point(map, node, x);
    table.coords.insert(table.coords.end(), x.begin(), x.end());
    table.vals.push_back(v);
    table.src.push_back(static_cast<std::uint32_t>(i));
  }
  table.n = table.vals.size();
  if (table.n == 0)
    throw InputError(std::string(role) +
                     ": every sample is +inf; nothing to conjugate against");
  return table;
}

// values[o] = max_j <map(node_o), coords_j> - vals_j, lowest j on ties.
void sup_sweep(const GridSpec& out_spec, OutMap map, const PointTable& in,
               std::vector<double>& values, std::vector<std::uint32_t>& argmax) {
  check_indexable(out_spec.size());
  const std::size_t n_out = out_spec.size();
  const std::size_t k = in.k;
  values.assign(n_out, -kInf);
  argmax.assign(n_out, 0);

  if (in.n <= 65536) {
    // Small inner table: fits in cache, loop outputs in parallel.
    parallel_for(n_out, [&](std::size_t b, std::size_t e) {
      std::vector<double> node(out_spec.dim()), x(k);
      for (std::size_t o = b; o < e; ++o) {
        out_spec.node_at(o, node);
        map_point(map, node, x);
        double best = -kInf;
        std::uint32_t best_j = 0;
        const double* c = in.coords.data();
        for (std::size_t j = 0; j < in.n; ++j, c += k) {
          double dot = 0.0;
          for (std::size_t t = 0; t < k; ++t) dot += x[t] * c[t];
          double v = dot - in.vals[j];
          if (v > best) {
            best = v;
            best_j = static_cast<std::uint32_t>(j);
          }
        }
        values[o] = best;
        argmax[o] = in.src[best_j];
      }
    });
    return;
  }

  // Large inner table: tile it so each pass over the outputs reuses a
  // cache-resident block; tiles ascend, so lowest-index ties still win.
  std::vector<double> out_coords(n_out * k);
  {
    std::vector<double> node(out_spec.dim());
    for (std::size_t o = 0; o < n_out; ++o) {
      out_spec.node_at(o, node);
      map_point(map, node, std::span(out_coords).subspan(o * k, k));
    }
  }
  std::vector<std::uint32_t> arg_j(n_out, 0);
  constexpr std::size_t kTile = 16384;
  for (std::size_t tb = 0; tb < in.n; tb += kTile) {
    std::size_t te = std::min(in.n, tb + kTile);
    parallel_for(n_out, [&](std::size_t b, std::size_t e) {
      for (std::size_t o = b; o < e; ++o) {
        const double* x = out_coords.data() + o * k;
        double best = values[o];
        std::uint32_t best_j = arg_j[o];
        const double* c = in.coords.data() + tb * k;
        for (std::size_t j = tb; j < te; ++j, c += k) {
          double dot = 0.0;
          for (std::size_t t = 0; t < k; ++t) dot += x[t] * c[t];
          double v = dot - in.vals[j];
          if (v > best) {
            best = v;
            best_j = static_cast<std::uint32_t>(j);
          }
        }
        values[o] = best;
        arg_j[o] = best_j;
      }
    });
  }
  for (std::size_t o = 0; o < n_out; ++o) argmax[o] = in.src[arg_j[o]];
}

bool any_on_boundary(const GridSpec& spec,
                     const std::vector<std::uint32_t>& indices) {
  for (std::uint32_t i : indices)
    if (spec.on_boundary(i)) return true;
  return false;
}

void require_kind(const GridSpec& spec, SpaceKind kind, const char* what) {
  if (spec.kind() != kind) throw GridError(std::string(what));
}

}  // namespace

SweepResult sv_conjugate(const GridFunction& phi, const GridSpec& beta_grid) {
  require_kind(phi.spec(), SpaceKind::Nu, "sv_conjugate: phi must live on a nu-space grid");
  require_kind(beta_grid, SpaceKind::Beta, "sv_conjugate: output grid must be beta-space");
  if (beta_grid.dim() != lifted_dim(phi.spec().dim()))
    throw GridError("sv_conjugate: beta grid dimension does not match the lifting");
  PointTable in = collect_finite(phi, OutMap::Lift, "sv_conjugate");
  std::vector<double> values;
  std::vector<std::uint32_t> argmax;
  sup_sweep(beta_grid, OutMap::Identity, in, values, argmax);
  bool boundary = any_on_boundary(phi.spec(), argmax);
  return {GridFunction(beta_grid, std::move(values)), std::move(argmax), boundary};
}

SweepResult sv_dual_conjugate(const GridFunction& theta,
                              const GridSpec& nu_grid) {
  require_kind(theta.spec(), SpaceKind::Beta, "sv_dual_conjugate: theta must live on a beta-space grid");
  require_kind(nu_grid, SpaceKind::Nu, "sv_dual_conjugate: output grid must be nu-space");
  if (theta.spec().dim() != lifted_dim(nu_grid.dim()))
    throw GridError("sv_dual_conjugate: grid dimensions do not match the lifting");
  PointTable in = collect_finite(theta, OutMap::Identity, "sv_dual_conjugate");
  std::vector<double> values;
  std::vector<std::uint32_t> argmax;
  sup_sweep(nu_grid, OutMap::Lift, in, values, argmax);
  bool boundary = any_on_boundary(theta.spec(), argmax);
  return {GridFunction(nu_grid, std::move(values)), std::move(argmax), boundary};
}

EnvelopeResult sv_envelope(const GridFunction& phi,
                           const ConjugationConfig& config) {
  if (!(phi.spec() == config.nu_grid))
    throw GridError("sv_envelope: config.nu_grid must match phi's grid");
  InvarianceReport inv = is_invariant(phi, config.invariance_tol);
  if (!inv.invariant)
    throw InvarianceError(
        "sv_envelope: input is not group-invariant (deviation " +
        format_double(inv.max_deviation) + " at node " +
        std::to_string(inv.witness_node) + ")");

  SweepResult conj = sv_conjugate(phi, config.beta_grid);
  SweepResult env = sv_dual_conjugate(conj.values, phi.spec());

  EnvelopeReport report;
  report.certifying = true;
  report.conj_boundary_active = conj.boundary_active;
  report.boundary_active = env.boundary_active;

  double max_gap = -kInf;
  std::size_t witness = 0;
  std::size_t infinite = 0;
  for (std::size_t i = 0; i < phi.values().size(); ++i) {
    double p = phi.values()[i];
    double e = env.values.values()[i];
    if (p == kInf) {
      ++infinite;
      continue;
    }
    if (e > p + config.tol)
      throw InternalError("sv_envelope: envelope exceeded the input at node " +
                          std::to_string(i));
    double gap = p - e;
    if (gap > max_gap) {
      max_gap = gap;
      witness = i;
    }
  }
  report.max_gap = max_gap;
  report.witness_index = witness;
  report.witness = phi.spec().node(witness);
  report.boundary_at_witness =
      config.beta_grid.on_boundary(env.argmax[witness]);
  report.infinite_nodes = infinite;
  report.invariance_deviation = is_invariant(env.values, kInf).max_deviation;
  return {std::move(env.values), std::move(conj.values), std::move(env.argmax),
          std::move(report)};
}

EnvelopeResult sv_envelope_isochoric_smoke(
    const GridFunction& phi, const std::vector<double>& nu_slope_axis,
    const std::vector<double>& adj_slope_axis,
    const std::vector<double>& det_slope_axis, double tol) {
  require_kind(phi.spec(), SpaceKind::Nu, "sv_envelope_isochoric_smoke: phi must live on a nu-space grid");
  if (phi.spec().dim() != 3)
    throw GridError("sv_envelope_isochoric_smoke is a d = 3 facility");
  GridSpec slope_grid(SpaceKind::Box,
                      {nu_slope_axis, adj_slope_axis, det_slope_axis});

  PointTable in = collect_finite(phi, OutMap::LiftReduce3, "sv_envelope_isochoric_smoke");
  std::vector<double> theta_vals;
  std::vector<std::uint32_t> theta_arg;
  sup_sweep(slope_grid, OutMap::Identity, in, theta_vals, theta_arg);
  GridFunction theta(slope_grid, std::move(theta_vals));

  PointTable dual = collect_finite(theta, OutMap::Identity, "sv_envelope_isochoric_smoke");
  std::vector<double> env_vals;
  std::vector<std::uint32_t> env_arg;
  sup_sweep(phi.spec(), OutMap::LiftReduce3, dual, env_vals, env_arg);
  GridFunction envelope(phi.spec(), std::move(env_vals));

  EnvelopeReport report;
  report.certifying = false;
  report.conj_boundary_active = any_on_boundary(phi.spec(), theta_arg);
  report.boundary_active = any_on_boundary(slope_grid, env_arg);

  double max_gap = -kInf;
  std::size_t witness = 0;
  std::size_t infinite = 0;
  for (std::size_t i = 0; i < phi.values().size(); ++i) {
    double p = phi.values()[i];
    double e = envelope.values()[i];
    if (p == kInf) {
      ++infinite;
      continue;
    }
    if (e > p + tol)
      throw InternalError(
          "sv_envelope_isochoric_smoke: envelope exceeded the input");
    double gap = p - e;
    if (gap > max_gap) {
      max_gap = gap;
      witness = i;
    }
  }
  report.max_gap = max_gap;
  report.witness_index = witness;
  report.witness = phi.spec().node(witness);
  report.boundary_at_witness = slope_grid.on_boundary(env_arg[witness]);
  report.infinite_nodes = infinite;
  report.invariance_deviation = is_invariant(envelope, kInf).max_deviation;
  return {std::move(envelope), std::move(theta), std::move(env_arg),
          std::move(report)};
}

SweepResult lf_conjugate(const GridFunction& f, const GridSpec& dual_grid) {
  if (f.spec().dim() != dual_grid.dim())
    throw GridError("lf_conjugate: grids must have the same dimension");
  PointTable in = collect_finite(f, OutMap::Identity, "lf_conjugate");
  std::vector<double> values;
  std::vector<std::uint32_t> argmax;
  sup_sweep(dual_grid, OutMap::Identity, in, values, argmax);
  bool boundary = any_on_boundary(f.spec(), argmax);
  return {GridFunction(dual_grid, std::move(values)), std::move(argmax), boundary};
}

GridFunction lf_biconjugate(const GridFunction& f, const GridSpec& dual_grid) {
  SweepResult star = lf_conjugate(f, dual_grid);
  return lf_conjugate(star.values, f.spec()).values;
}

LPResult lp_biconjugate_at(const GridFunction& phi, std::span<const double> nu) {
  require_kind(phi.spec(), SpaceKind::Nu, "lp_biconjugate_at: phi must live on a nu-space grid");
  int d = phi.spec().dim();
  if (static_cast<int>(nu.size()) != d)
    throw DimensionError("lp_biconjugate_at: point dimension mismatch");
  int k = lifted_dim(d);
  PointTable table = collect_finite(phi, OutMap::Lift, "lp_biconjugate_at");

  std::size_t m = static_cast<std::size_t>(k) + 1;
  std::size_t n = table.n;
  std::vector<double> a(m * n), b(m), c = table.vals;
  for (std::size_t j = 0; j < n; ++j) {
    for (int r = 0; r < k; ++r) a[r * n + j] = table.coords[j * k + r];
    a[k * n + j] = 1.0;
  }
  std::vector<double> target = lift(nu);
  for (int r = 0; r < k; ++r) b[r] = target[r];
  b[k] = 1.0;

  detail::SimplexResult lp = detail::solve_equality_lp(m, n, a, b, c);
  if (lp.status == detail::SimplexResult::Status::Infeasible)
    return {kInf, std::nullopt};
  if (lp.status != detail::SimplexResult::Status::Optimal)
    throw InternalError("lp_biconjugate_at: simplex failed (status " +
                        std::to_string(static_cast<int>(lp.status)) +
                        " after " + std::to_string(lp.iterations) +
                        " iterations)");

  LPWitness witness;
  witness.objective = lp.objective;
  double weight_sum = 0.0;
  std::vector<double> combo(k, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double w = lp.solution[j];
    if (w == 0.0) continue;
    if (w < -1e-12)
      throw InternalError("lp_biconjugate_at: negative barycentric weight");
    if (w <= 1e-12) continue;
    witness.support.push_back(table.src[j]);
    witness.weights.push_back(w);
    weight_sum += w;
    for (int r = 0; r < k; ++r) combo[r] += w * table.coords[j * k + r];
  }
  double scale = 1.0;
  for (int r = 0; r < k; ++r) scale = std::max(scale, std::abs(target[r]));
  if (witness.support.size() > static_cast<std::size_t>(k) + 1 ||
      std::abs(weight_sum - 1.0) > 1e-10)
    throw InternalError("lp_biconjugate_at: witness invariants violated");
  for (int r = 0; r < k; ++r)
    if (std::abs(combo[r] - target[r]) > 1e-8 * scale)
      throw InternalError("lp_biconjugate_at: witness does not reproduce the target");
  return {lp.objective, std::move(witness)};
}

CrossCheckReport cross_check(const GridFunction& phi,
                             const ConjugationConfig& config,
                             std::span<const std::size_t> sample_nodes) {
  EnvelopeResult env = sv_envelope(phi, config);
  double h = config.nu_grid.max_spacing();
  CrossCheckReport report;
  report.boundary_active = env.report.boundary_active;
  report.agreement_bound = std::max(10.0 * 5.0 * h * h, config.tol);
  double excess_allow = 5.0 * h * h;
  std::vector<double> node(phi.spec().dim());
  for (std::size_t idx : sample_nodes) {
    if (idx >= phi.spec().size())
      throw GridError("cross_check: sample node out of range");
    phi.spec().node_at(idx, node);
    LPResult lp = lp_biconjugate_at(phi, node);
    CrossCheckEntry entry;
    entry.node = idx;
    entry.envelope_value = env.envelope.values()[idx];
    entry.lp_value = lp.value;
    if (lp.value != kInf) {
      entry.abs_diff = std::abs(entry.envelope_value - lp.value);
      report.max_abs_diff = std::max(report.max_abs_diff, entry.abs_diff);
      report.max_envelope_excess = std::max(
          report.max_envelope_excess, entry.envelope_value - lp.value);
    }
    report.entries.push_back(entry);
  }
  report.agree = report.max_abs_diff <= report.agreement_bound &&
                 report.max_envelope_excess <= std::max(excess_allow, config.tol);
  return report;
}

std::vector<std::vector<double>> suggest_beta_axes(const GridFunction& phi,
                                                   std::size_t nodes_per_axis) {
  require_kind(phi.spec(), SpaceKind::Nu, "suggest_beta_axes: phi must live on a nu-space grid");
  const GridSpec& spec = phi.spec();
  int d = spec.dim();
  int k = lifted_dim(d);
  double h = spec.max_spacing();
  std::vector<double> slope(k, 0.0);

  std::vector<std::size_t> mi(d);
  std::vector<double> node(d), nbr(d);
  std::vector<double> lx(k), ly(k);
  std::vector<std::size_t> strides(d, 1);
  for (int i = d - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * spec.axis_size(i + 1);

  for (std::size_t p = 0; p < spec.size(); ++p) {
    double fp = phi.values()[p];
    if (!std::isfinite(fp)) continue;
    spec.unflatten(p, mi);
    for (int axis = 0; axis < d; ++axis) {
      if (mi[axis] + 1 >= spec.axis_size(axis)) continue;
      std::size_t q = p + strides[axis];
      double fq = phi.values()[q];
      if (!std::isfinite(fq)) continue;
      spec.node_at(p, node);
      spec.node_at(q, nbr);
      lift_into(node, lx);
      lift_into(nbr, ly);
      for (int r = 0; r < k; ++r) {
        double dl = std::abs(ly[r] - lx[r]);
        if (dl < 0.25 * h) continue;
        slope[r] = std::max(slope[r], std::abs(fq - fp) / dl);
      }
    }
  }

  std::vector<std::vector<double>> axes;
  axes.reserve(k);
  for (int r = 0; r < k; ++r) {
    double range = std::max(2.0 * slope[r], h);
    axes.push_back(GridSpec::symmetric_axis(range, nodes_per_axis));
  }
  return axes;
}

std::string report_to_json_string(const EnvelopeReport& report) {
  nlohmann::json j;
  j["boundary_active"] = report.boundary_active;
  j["boundary_at_witness"] = report.boundary_at_witness;
  j["certifying"] = report.certifying;
  j["conj_boundary_active"] = report.conj_boundary_active;
  j["infinite_nodes"] = report.infinite_nodes;
  j["invariance_deviation"] = report.invariance_deviation;
  j["max_gap"] = report.max_gap;
  nlohmann::json witness = nlohmann::json::array();
  for (double v : report.witness) witness.push_back(v);
  j["witness"] = std::move(witness);
  j["witness_index"] = report.witness_index;
  return j.dump();
}

}  // namespace svpc
