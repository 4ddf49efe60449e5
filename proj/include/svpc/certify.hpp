#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svpc/common.hpp"
#include "svpc/conjugate.hpp"
#include "svpc/gridfn.hpp"

namespace svpc {

// Raised by supporting_hyperplane when no grid slope supports the function
// at the requested quality; carries the best achievable epsilon.
class SupportError : public Error {
 public:
  SupportError(const std::string& what, double best_epsilon)
      : Error(what), best_epsilon_(best_epsilon) {}
  double best_epsilon() const { return best_epsilon_; }

 private:
  double best_epsilon_;
};

enum class Verdict { Svpc, NotSvpc, Inconclusive };

std::string verdict_name(Verdict verdict);

struct CertifyConfig {
  GridSpec beta_grid;
  // Defaults: certify_tol = 5 h^2 with h the largest nu-grid spacing,
  // refute_margin = 10 * certify_tol.
  std::optional<double> certify_tol = std::nullopt;
  std::optional<double> refute_margin = std::nullopt;
  double invariance_tol = 1e-10;
  // Confirm refutations with an exact mixture LP before reporting NotSvpc.
  bool lp_confirm = true;
  // Probe interior +inf nodes for reachable mixtures (exact refutations).
  bool scan_infinite_nodes = true;
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  std::size_t dim = 0;
  // Largest phi - envelope over nodes where phi is finite; +inf when an
  // interior +inf node was refuted by a feasible mixture.
  double max_gap = 0.0;
  std::vector<double> witness;
  std::size_t witness_index = 0;
  double certify_tol = 0.0;
  double refute_margin = 0.0;
  bool boundary_active = false;
  bool boundary_at_witness = false;
  bool conj_boundary_active = false;
  std::size_t infinite_nodes = 0;
  bool infinite_refuted = false;
  std::optional<double> lp_value;
  std::size_t nu_nodes = 0;
  std::size_t beta_nodes = 0;
  std::string reason;
};

std::string certificate_to_json_string(const Certificate& certificate);

// Three-way grid certificate. Throws InvarianceError when phi is not
// group-invariant within config.invariance_tol.
Certificate is_svpc(const GridFunction& phi, const CertifyConfig& config);

struct Hyperplane {
  std::vector<double> beta;  // slope in lifted coordinates
  double offset = 0.0;       // conjugate value at the slope
  double epsilon = 0.0;      // achieved support quality
  std::size_t beta_index = 0;

  // Minorant value <beta, lift(nu)> - offset.
  double value(std::span<const double> nu) const;
};

// Best grid minorant at the grid node nu0. Finite phi(nu0): the achieved
// epsilon is phi(nu0) minus the minorant there and must not exceed the
// request. Infinite phi(nu0): the minorant must reach level 1/epsilon at
// nu0. Throws SupportError (with the best achievable epsilon) otherwise.
Hyperplane supporting_hyperplane(const GridFunction& phi,
                                 std::span<const double> nu0, double epsilon,
                                 const GridSpec& beta_grid);

struct SteigmannReport {
  bool convexity_ok = false;
  double worst_convexity_violation = 0.0;
  std::size_t convexity_witness = 0;
  bool symmetry_ok = false;
  double worst_symmetry_deviation = 0.0;
  std::size_t symmetry_witness = 0;
  bool used_interpolation = false;
  std::size_t skipped_nodes = 0;
  bool criterion_satisfied = false;
};

// Sufficiency check for energies composed with the elementary symmetric
// functions: psi must be grid-midpoint convex on e_grid and psi(e(S nu))
// must match psi(e(nu)) for every even sign flip S. Exact variant: psi is
// a callable evaluated directly.
SteigmannReport steigmann_check(
    const std::function<double(std::span<const double>)>& psi,
    const GridSpec& e_grid, const GridSpec& nu_grid, double tol);

// Sampled variant: psi is known only on e_grid; symmetry comparisons use
// multilinear interpolation and nodes mapping outside the box are skipped.
SteigmannReport steigmann_check(const GridFunction& psi_samples,
                                const GridSpec& nu_grid, double tol);

struct LineMonotonicityReport {
  bool monotone = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_drop = 0.0;
  int witness_family = 0;               // 1 or 2 when a drop was found
  std::vector<double> witness_point;    // grid point where the drop starts
};

// Conjugates of invariant d = 2 energies are non-decreasing along
// t -> (alpha + t, t, delta) for t >= 0 and t -> (alpha + t, alpha - t,
// delta) for t in [0, alpha], for alpha, delta > 0. Verifies this on every
// grid-representable line; the first two axes must share a uniform spacing.
LineMonotonicityReport line_monotonicity_check(const GridFunction& g);

}  // namespace svpc
