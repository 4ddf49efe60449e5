#include "svpc/certify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "svpc/lifting.hpp"
#include "svpc/symmetry.hpp"

namespace svpc {

namespace {

nlohmann::json value_to_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "+inf" : "-inf";
}

}  // namespace

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Svpc: return "svpc";
    case Verdict::NotSvpc: return "not_svpc";
    case Verdict::Inconclusive: return "inconclusive";
  }
  throw InternalError("unreachable");
}

std::string certificate_to_json_string(const Certificate& c) {
  nlohmann::json j;
  j["verdict"] = verdict_name(c.verdict);
  j["dim"] = c.dim;
  j["max_gap"] = value_to_json(c.max_gap);
  nlohmann::json witness = nlohmann::json::array();
  for (double v : c.witness) witness.push_back(v);
  j["witness"] = std::move(witness);
  j["witness_index"] = c.witness_index;
  j["certify_tol"] = c.certify_tol;
  j["refute_margin"] = c.refute_margin;
  j["boundary_active"] = c.boundary_active;
  j["boundary_at_witness"] = c.boundary_at_witness;
  j["conj_boundary_active"] = c.conj_boundary_active;
  j["infinite_nodes"] = c.infinite_nodes;
  j["infinite_refuted"] = c.infinite_refuted;
  if (c.lp_value)
    j["lp_value"] = value_to_json(*c.lp_value);
  else
    j["lp_value"] = nullptr;
  j["nu_nodes"] = c.nu_nodes;
  j["beta_nodes"] = c.beta_nodes;
  j["reason"] = c.reason;
  return j.dump();
}

Certificate is_svpc(const GridFunction& phi, const CertifyConfig& config) {
  if (phi.spec().kind() != SpaceKind::Nu)
    throw GridError("is_svpc: phi must live on a nu-space grid");
  double h = phi.spec().max_spacing();
  double ctol = config.certify_tol.value_or(5.0 * h * h);
  double margin = config.refute_margin.value_or(10.0 * ctol);
  if (!(ctol > 0.0)) throw InputError("is_svpc: certify_tol must be positive");
  if (!(margin > ctol))
    throw InputError("is_svpc: refute_margin must exceed certify_tol");

  ConjugationConfig cc{phi.spec(), config.beta_grid};
  cc.invariance_tol = config.invariance_tol;
  EnvelopeResult env = sv_envelope(phi, cc);

  Certificate cert;
  cert.dim = phi.spec().dim();
  cert.max_gap = env.report.max_gap;
  cert.witness = env.report.witness;
  cert.witness_index = env.report.witness_index;
  cert.certify_tol = ctol;
  cert.refute_margin = margin;
  cert.boundary_active = env.report.boundary_active;
  cert.boundary_at_witness = env.report.boundary_at_witness;
  cert.conj_boundary_active = env.report.conj_boundary_active;
  cert.infinite_nodes = env.report.infinite_nodes;
  cert.nu_nodes = phi.spec().size();
  cert.beta_nodes = config.beta_grid.size();

  if (cert.max_gap <= ctol) {
    cert.verdict = Verdict::Svpc;
    cert.reason = "largest gap " + format_double(cert.max_gap) +
                  " is within certify_tol " + format_double(ctol);
  } else if (cert.max_gap > margin) {
    bool witness_interior = !phi.spec().on_boundary(cert.witness_index);
    bool slope_interior = !cert.boundary_at_witness;
    if (!witness_interior || !slope_interior) {
      cert.verdict = Verdict::Inconclusive;
      cert.reason =
          "gap exceeds refute_margin but the witness touches a grid boundary "
          "(enlarge the grids)";
    } else if (config.lp_confirm) {
      LPResult lp = lp_biconjugate_at(phi, cert.witness);
      cert.lp_value = lp.value;
      double phi_w = phi.values()[cert.witness_index];
      if (lp.value != kInf && phi_w - lp.value > ctol) {
        cert.verdict = Verdict::NotSvpc;
        cert.reason = "gap " + format_double(cert.max_gap) +
                      " exceeds refute_margin " + format_double(margin) +
                      " at an interior witness; exact mixture reaches " +
                      format_double(lp.value) + " below the input value " +
                      format_double(phi_w);
      } else {
        cert.verdict = Verdict::Inconclusive;
        cert.reason =
            "gap exceeds refute_margin but the exact mixture does not confirm "
            "a violation at the witness";
      }
    } else {
      cert.verdict = Verdict::NotSvpc;
      cert.reason = "gap " + format_double(cert.max_gap) +
                    " exceeds refute_margin " + format_double(margin) +
                    " at an interior witness";
    }
  } else {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = "largest gap " + format_double(cert.max_gap) +
                  " lies between certify_tol and refute_margin";
  }

  if (cert.verdict != Verdict::NotSvpc && config.scan_infinite_nodes &&
      cert.infinite_nodes > 0) {
    std::vector<double> node(phi.spec().dim());
    for (std::size_t i = 0; i < phi.spec().size(); ++i) {
      if (phi.values()[i] != kInf) continue;
      if (phi.spec().on_boundary(i)) continue;
      phi.spec().node_at(i, node);
      LPResult lp = lp_biconjugate_at(phi, node);
      if (lp.value == kInf) continue;
      cert.verdict = Verdict::NotSvpc;
      cert.infinite_refuted = true;
      cert.max_gap = kInf;
      cert.witness = phi.spec().node(i);
      cert.witness_index = i;
      cert.boundary_at_witness = false;
      cert.lp_value = lp.value;
      cert.reason = "input is +inf at an interior node reached by a finite "
                    "mixture of value " + format_double(lp.value);
      break;
    }
  }
  return cert;
}

double Hyperplane::value(std::span<const double> nu) const {
  std::vector<double> x = lift(nu);
  double dot = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) dot += beta[t] * x[t];
  return dot - offset;
}

Hyperplane supporting_hyperplane(const GridFunction& phi,
                                 std::span<const double> nu0, double epsilon,
                                 const GridSpec& beta_grid) {
  if (phi.spec().kind() != SpaceKind::Nu)
    throw GridError("supporting_hyperplane: phi must live on a nu-space grid");
  if (!(epsilon > 0.0))
    throw InputError("supporting_hyperplane: epsilon must be positive");
  std::size_t d = phi.spec().dim();
  if (nu0.size() != d)
    throw DimensionError("supporting_hyperplane: point dimension mismatch");

  std::vector<std::size_t> mi(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& ax = phi.spec().axis(i);
    std::size_t best = 0;
    double best_gap = kInf;
    for (std::size_t j = 0; j < ax.size(); ++j) {
      double gap = std::abs(ax[j] - nu0[i]);
      if (gap < best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    if (best_gap > 1e-12 * std::max(1.0, std::abs(nu0[i])))
      throw InputError("supporting_hyperplane: nu0 must be a grid node");
    mi[i] = best;
  }
  std::size_t node_index = phi.spec().flatten(mi);
  double phi0 = phi.values()[node_index];

  SweepResult conj = sv_conjugate(phi, beta_grid);
  std::vector<double> target = lift(nu0);
  std::size_t k = target.size();

  double best = -kInf;
  std::size_t best_beta = 0;
  std::vector<double> beta(k);
  for (std::size_t b = 0; b < beta_grid.size(); ++b) {
    beta_grid.node_at(b, beta);
    double dot = 0.0;
    for (std::size_t t = 0; t < k; ++t) dot += beta[t] * target[t];
    double level = dot - conj.values.values()[b];
    if (level > best) {
      best = level;
      best_beta = b;
    }
  }

  Hyperplane plane;
  plane.beta = beta_grid.node(best_beta);
  plane.offset = conj.values.values()[best_beta];
  plane.beta_index = best_beta;
  if (phi0 == kInf) {
    double achieved = best > 0.0 ? 1.0 / best : kInf;
    if (best < 1.0 / epsilon)
      throw SupportError(
          "supporting_hyperplane: no grid slope reaches level 1/epsilon at a "
          "+inf node (best achievable epsilon " + format_double(achieved) + ")",
          achieved);
    plane.epsilon = achieved;
  } else {
    double achieved = std::max(0.0, phi0 - best);
    if (achieved > epsilon)
      throw SupportError(
          "supporting_hyperplane: no grid slope supports within epsilon "
          "(best achievable epsilon " + format_double(achieved) + ")",
          achieved);
    plane.epsilon = achieved;
  }

  std::vector<double> node(d), x(k);
  for (std::size_t i = 0; i < phi.spec().size(); ++i) {
    double p = phi.values()[i];
    if (p == kInf) continue;
    phi.spec().node_at(i, node);
    lift_into(node, x);
    double dot = 0.0;
    for (std::size_t t = 0; t < k; ++t) dot += plane.beta[t] * x[t];
    if (dot - plane.offset > p + 1e-10 * std::max(1.0, std::abs(p)))
      throw InternalError(
          "supporting_hyperplane: minorant exceeded the input at node " +
          std::to_string(i));
  }
  return plane;
}

namespace {

std::vector<GroupElement> even_sign_flips(int dim) {
  std::vector<GroupElement> out;
  for (const GroupElement& s : group_table(dim).elements) {
    bool identity_perm = true;
    bool flips = false;
    for (int i = 0; i < dim; ++i) {
      if (s.perm[i] != i) identity_perm = false;
      if (s.signs[i] < 0) flips = true;
    }
    if (identity_perm && flips) out.push_back(s);
  }
  return out;
}

double deviation(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return kInf;
  return std::abs(a - b);
}

bool in_box(const GridSpec& spec, std::span<const double> x) {
  for (int i = 0; i < spec.dim(); ++i) {
    const auto& ax = spec.axis(i);
    if (x[i] < ax.front() || x[i] > ax.back()) return false;
  }
  return true;
}

SteigmannReport steigmann_common(
    const GridFunction& g,
    const std::function<double(std::span<const double>)>& eval,
    const GridSpec& e_domain, const GridSpec& nu_grid, double tol,
    bool used_interpolation) {
  if (nu_grid.kind() != SpaceKind::Nu)
    throw GridError("steigmann_check: nu_grid must be nu-space");
  if (e_domain.dim() != nu_grid.dim())
    throw GridError(
        "steigmann_check: the symmetric-coordinate grid must have one axis "
        "per elementary symmetric function");

  SteigmannReport report;
  report.used_interpolation = used_interpolation;

  ConvexityReport conv = midpoint_convexity_check(g, tol);
  report.convexity_ok = conv.convex;
  report.worst_convexity_violation = conv.worst_violation;
  report.convexity_witness = conv.witness_node;

  std::vector<GroupElement> flips = even_sign_flips(nu_grid.dim());
  std::vector<double> node(nu_grid.dim()), flipped(nu_grid.dim());
  for (std::size_t i = 0; i < nu_grid.size(); ++i) {
    nu_grid.node_at(i, node);
    std::vector<double> e0 = elementary_symmetric(node);
    if (used_interpolation && !in_box(e_domain, e0)) {
      ++report.skipped_nodes;
      continue;
    }
    double base = eval(e0);
    for (const GroupElement& s : flips) {
      apply_into(s, node, flipped);
      std::vector<double> e1 = elementary_symmetric(flipped);
      if (used_interpolation && !in_box(e_domain, e1)) {
        ++report.skipped_nodes;
        continue;
      }
      double dev = deviation(base, eval(e1));
      if (dev > report.worst_symmetry_deviation) {
        report.worst_symmetry_deviation = dev;
        report.symmetry_witness = i;
      }
    }
  }
  report.symmetry_ok = report.worst_symmetry_deviation <= tol;
  report.criterion_satisfied = report.convexity_ok && report.symmetry_ok;
  return report;
}

}  // namespace

SteigmannReport steigmann_check(
    const std::function<double(std::span<const double>)>& psi,
    const GridSpec& e_grid, const GridSpec& nu_grid, double tol) {
  if (e_grid.kind() != SpaceKind::Box)
    throw GridError("steigmann_check: e_grid must be a box grid");
  GridFunction g = build(e_grid, psi);
  return steigmann_common(g, psi, e_grid, nu_grid, tol, false);
}

SteigmannReport steigmann_check(const GridFunction& psi_samples,
                                const GridSpec& nu_grid, double tol) {
  if (psi_samples.spec().kind() != SpaceKind::Box)
    throw GridError("steigmann_check: samples must live on a box grid");
  auto eval = [&psi_samples](std::span<const double> x) {
    return interpolate_multilinear(psi_samples, x);
  };
  return steigmann_common(psi_samples, eval, psi_samples.spec(), nu_grid, tol,
                          true);
}

LineMonotonicityReport line_monotonicity_check(const GridFunction& g) {
  const GridSpec& spec = g.spec();
  if (spec.kind() != SpaceKind::Beta || spec.dim() != 3)
    throw GridError(
        "line_monotonicity_check: expected a d = 2 slope-space grid");
  for (int axis : {0, 1}) {
    const auto& ax = spec.axis(axis);
    double s = ax[1] - ax[0];
    for (std::size_t j = 1; j + 1 < ax.size(); ++j)
      if (std::abs((ax[j + 1] - ax[j]) - s) > 1e-12)
        throw GridError(
            "line_monotonicity_check: the first two axes must be uniform");
  }
  double s0 = spec.axis(0)[1] - spec.axis(0)[0];
  double s1 = spec.axis(1)[1] - spec.axis(1)[0];
  if (std::abs(s0 - s1) > 1e-12)
    throw GridError(
        "line_monotonicity_check: the first two axes must share one spacing");

  std::size_t n0 = spec.axis_size(0), n1 = spec.axis_size(1);
  std::size_t c0 = (n0 - 1) / 2, c1 = (n1 - 1) / 2;
  LineMonotonicityReport report;

  auto val = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
    std::array<std::size_t, 3> mi{i0, i1, i2};
    return g.values()[spec.flatten(mi)];
  };

  auto probe = [&](int family, std::size_t i0, std::size_t i1, std::size_t i2,
                   double prev, double cur) {
    ++report.checked;
    double slack = 1e-12 * std::max(1.0, std::abs(prev));
    double drop = prev - cur;
    if (drop > slack) {
      ++report.violations;
      if (drop > report.worst_drop) {
        report.worst_drop = drop;
        report.witness_family = family;
        report.witness_point = {spec.axis(0)[i0], spec.axis(1)[i1],
                                spec.axis(2)[i2]};
      }
    }
  };

  for (std::size_t dk = 0; dk < spec.axis_size(2); ++dk) {
    if (!(spec.axis(2)[dk] > 0.0)) continue;
    for (std::size_t a = 1; c0 + a < n0; ++a) {
      // Family 1: (alpha + t, t, delta), t = 0, s, 2s, ...
      double prev = val(c0 + a, c1, dk);
      for (std::size_t j = 1; c0 + a + j < n0 && c1 + j < n1; ++j) {
        double cur = val(c0 + a + j, c1 + j, dk);
        probe(1, c0 + a + j - 1, c1 + j - 1, dk, prev, cur);
        prev = cur;
      }
      // Family 2: (alpha + t, alpha - t, delta), t = 0, s, ..., alpha.
      if (c1 + a < n1) {
        prev = val(c0 + a, c1 + a, dk);
        for (std::size_t j = 1; j <= a && c0 + a + j < n0; ++j) {
          double cur = val(c0 + a + j, c1 + a - j, dk);
          probe(2, c0 + a + j - 1, c1 + a - j + 1, dk, prev, cur);
          prev = cur;
        }
      }
    }
  }
  report.monotone = report.violations == 0;
  return report;
}

}  // namespace svpc
