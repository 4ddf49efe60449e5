#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "svpc/common.hpp"
#include "svpc/matkit.hpp"

namespace svpc {

enum class KnownSvpc { Yes, No, Unknown };

std::string known_svpc_name(KnownSvpc k);

struct ModelFlags {
  bool finite_everywhere = true;
  // The matrix energy checks det(F) <= 0 directly instead of relying on the
  // spectral sign convention.
  bool det_barrier = false;
  KnownSvpc known_svpc = KnownSvpc::Unknown;
};

// A named isotropic energy: phi acts on signed-spectrum vectors, w on
// matrices (defaulting to phi after spectral decomposition). Flags reflect
// the actual parameter values, not just the family.
struct EnergyModel {
  std::string name;
  int dim = 0;
  std::map<std::string, double> params;
  std::function<double(std::span<const double>)> phi;
  std::function<double(const SquareMatrix&)> w;
  ModelFlags flags;
  std::string summary;
};

// Model names available at this dimension, sorted.
std::vector<std::string> catalog(int dim);

// Instantiates a catalog model, merging params over the family defaults.
// Unknown names or parameter keys raise InputError.
EnergyModel make_model(const std::string& name, int dim,
                       const std::map<std::string, double>& params = {});

// JSON catalog (both dimensions): name, dim, default params, flags, summary.
std::string model_schemas();

}  // namespace svpc
