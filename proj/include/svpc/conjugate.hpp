#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svpc/gridfn.hpp"

namespace svpc {

// Truncation of the conjugation suprema to finite grids. tol is the floating
// point slack used by the structural postcondition checks; invariance_tol
// bounds the allowed symmetry deviation of envelope inputs.
struct ConjugationConfig {
  GridSpec nu_grid;
  GridSpec beta_grid;
  double tol = 1e-9;
  double invariance_tol = 1e-10;
};

// One conjugation sweep. argmax[i] is the flat index (into the opposite
// grid) attaining the sup at output node i, ties broken by lowest index;
// boundary_active reports whether any argmax lies on its grid's boundary
// (the truncated sup may then differ from the true one).
struct SweepResult {
  GridFunction values;
  std::vector<std::uint32_t> argmax;
  bool boundary_active;
};

// Discrete conjugation: per beta node, max over finite-phi nu nodes of
// <beta, lift(nu)> - phi(nu). phi must have at least one finite value and no
// -inf samples; the output is finite everywhere.
SweepResult sv_conjugate(const GridFunction& phi, const GridSpec& beta_grid);

// The dual direction: per nu node, max over finite-theta beta nodes of
// <beta, lift(nu)> - theta(beta).
SweepResult sv_dual_conjugate(const GridFunction& theta, const GridSpec& nu_grid);

struct EnvelopeReport {
  double max_gap = 0.0;  // max over finite-phi nodes of phi - envelope
  std::size_t witness_index = 0;
  std::vector<double> witness;
  bool boundary_active = false;      // any envelope argmax beta on the beta boundary
  bool boundary_at_witness = false;  // that flag at the witness node
  bool conj_boundary_active = false; // any conjugate argmax nu on the nu boundary
  double invariance_deviation = 0.0; // symmetry deviation of the envelope
  std::size_t infinite_nodes = 0;    // count of phi = +inf samples
  bool certifying = true;            // false for the restricted smoke sweep
};

struct EnvelopeResult {
  GridFunction envelope;
  GridFunction conjugate;
  std::vector<std::uint32_t> envelope_argmax;  // beta flat index per nu node
  EnvelopeReport report;
};

std::string report_to_json_string(const EnvelopeReport& report);

// The double conjugation: largest grid-representable minorant of phi that is
// affine-in-lifting supported. phi must be group-invariant within
// config.invariance_tol and config.nu_grid must equal phi's grid.
EnvelopeResult sv_envelope(const GridFunction& phi,
                           const ConjugationConfig& config);

// Smoke-only d = 3 variant restricting the dual sweep to the subspace
// {beta1 = beta2 = beta3, beta4 = beta5 = beta6}; far cheaper but NOT
// certifying (report.certifying = false), since the restricted slope set
// yields a smaller envelope.
EnvelopeResult sv_envelope_isochoric_smoke(const GridFunction& phi,
                                           const std::vector<double>& nu_slope_axis,
                                           const std::vector<double>& adj_slope_axis,
                                           const std::vector<double>& det_slope_axis,
                                           double tol = 1e-9);

// Plain discrete Legendre-Fenchel transform between same-dimension grids
// (no lifting). f must have a finite value and no -inf samples.
SweepResult lf_conjugate(const GridFunction& f, const GridSpec& dual_grid);

// f** back on f's own grid.
GridFunction lf_biconjugate(const GridFunction& f, const GridSpec& dual_grid);

struct LPWitness {
  std::vector<std::size_t> support;  // flat nu-grid indices, <= k+1 of them
  std::vector<double> weights;
  double objective = 0.0;
};

struct LPResult {
  double value = 0.0;  // +inf when lift(nu) is outside the sampled hull
  std::optional<LPWitness> witness;
};

// Independent primal oracle: min sum(w_i phi(nu_i)) over convex weights with
// sum(w_i lift(nu_i)) = lift(nu), solved by dense simplex over the finite-phi
// nodes. Infeasible (outside the lifted hull) returns +inf and no witness.
LPResult lp_biconjugate_at(const GridFunction& phi, std::span<const double> nu);

struct CrossCheckEntry {
  std::size_t node = 0;
  double envelope_value = 0.0;
  double lp_value = 0.0;  // +inf if infeasible
  double abs_diff = 0.0;  // excluded from the max when lp is infeasible
};

struct CrossCheckReport {
  std::vector<CrossCheckEntry> entries;
  double max_abs_diff = 0.0;
  // max of envelope - lp; the dual-grid value under-approximates, so this
  // should not exceed the fp slack.
  double max_envelope_excess = 0.0;
  double agreement_bound = 0.0;  // resolution-dependent bound the entries met
  bool boundary_active = false;
  bool agree = false;
};

// Dual-grid envelope vs. primal LP at the sampled nodes (which must carry
// finite phi values).
CrossCheckReport cross_check(const GridFunction& phi,
                             const ConjugationConfig& config,
                             std::span<const std::size_t> sample_nodes);

// Heuristic beta-axis ranges: twice the sampled slope range of phi against
// each lifted coordinate, floored at the nu-grid spacing.
std::vector<std::vector<double>> suggest_beta_axes(const GridFunction& phi,
                                                   std::size_t nodes_per_axis);

}  // namespace svpc
