#include "svpc/models.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "svpc/lifting.hpp"
#include "svpc/symmetry.hpp"

namespace svpc {

namespace {

using Params = std::map<std::string, double>;

void check_dim(int dim) {
  if (dim != 2 && dim != 3)
    throw DimensionError("models are defined for dimensions 2 and 3 only");
}

Params merge(const std::string& name, Params defaults, const Params& user) {
  for (const auto& [key, value] : user) {
    auto it = defaults.find(key);
    if (it == defaults.end())
      throw InputError("model " + name + ": unknown parameter '" + key + "'");
    it->second = value;
  }
  return defaults;
}

void attach_default_w(EnergyModel& model) {
  model.w = [phi = model.phi](const SquareMatrix& f) {
    SignedSpectrum s = signed_svd(f);
    return phi(s.values());
  };
}

EnergyModel make_concave_quadratic(int dim, const Params& user) {
  EnergyModel m;
  m.name = "concave_quadratic";
  m.dim = dim;
  m.params = merge(m.name, {{"a", 1.0}}, user);
  double a = m.params.at("a");
  m.phi = [a, dim](std::span<const double> nu) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += nu[i] * nu[i];
    return -a * s;
  };
  m.flags.known_svpc = a > 0.0 ? KnownSvpc::No : KnownSvpc::Yes;
  m.summary = "-a * |nu|^2; concave, the envelope drops to the grid corners";
  attach_default_w(m);
  return m;
}

EnergyModel make_det_barrier(int dim, const Params& user) {
  EnergyModel m;
  m.name = "det_barrier";
  m.dim = dim;
  m.params = merge(m.name, {}, user);
  m.phi = [dim](std::span<const double> nu) {
    double prod = nu[0];
    for (int i = 1; i < dim; ++i) prod *= nu[i];
    if (prod <= 0.0) return kInf;
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += nu[i] * nu[i];
    return -std::log(prod) + s;
  };
  m.flags.finite_everywhere = false;
  m.flags.det_barrier = true;
  m.flags.known_svpc = KnownSvpc::Unknown;
  m.summary =
      "-log(prod nu) + |nu|^2, +inf for nonpositive products; grid "
      "certificates stay inconclusive near the singular set";
  m.w = [phi = m.phi](const SquareMatrix& f) {
    if (det(f) <= 0.0) return kInf;
    SignedSpectrum s = signed_svd(f);
    return phi(s.values());
  };
  return m;
}

EnergyModel make_double_well(int dim, const Params& user) {
  EnergyModel m;
  m.name = "double_well";
  m.dim = dim;
  m.params = merge(m.name, {{"a", 1.0}}, user);
  double a = m.params.at("a");
  m.phi = [a, dim](std::span<const double> nu) {
    const GroupTable& table = group_table(dim);
    std::array<double, 3> s{};
    double best = kInf;
    for (const GroupElement& g : table.elements) {
      apply_into(g, nu, std::span(s.data(), dim));
      double v = 0.0;
      for (int i = 0; i < dim; ++i) v += (s[i] - a) * (s[i] - a);
      best = std::min(best, v);
    }
    return best;
  };
  m.flags.known_svpc = a != 0.0 ? KnownSvpc::No : KnownSvpc::Yes;
  m.summary =
      "orbit-min of |nu - (a,...,a)|^2; two symmetric wells, not convex "
      "along the connecting segment";
  attach_default_w(m);
  return m;
}

EnergyModel make_invariant_model(int dim, const Params& user) {
  EnergyModel m;
  m.name = "invariant_model";
  m.dim = dim;
  Params defaults{{"a", 0.15}, {"b", 0.1}, {"c", 0.2}};
  if (dim == 2) defaults["q"] = 0.0;
  m.params = merge(m.name, defaults, user);
  double a = m.params.at("a");
  double b = m.params.at("b");
  double c = m.params.at("c");
  if (dim == 2) {
    double q = m.params.at("q");
    m.phi = [a, b, c, q](std::span<const double> nu) {
      std::vector<double> e = elementary_symmetric(nu);
      return a * e[0] * e[0] + b * e[1] * e[1] + c * e[1] +
             q * std::abs(e[0]);
    };
    m.flags.known_svpc = (a >= 0.0 && b >= 0.0 && q >= 0.0)
                             ? KnownSvpc::Yes
                             : KnownSvpc::Unknown;
    m.summary =
        "a*e1^2 + b*e2^2 + c*e2 + q*|e1| in the elementary symmetric "
        "variables of the signed spectrum";
  } else {
    m.phi = [a, b, c](std::span<const double> nu) {
      std::vector<double> e = elementary_symmetric(nu);
      return a * (e[0] * e[0] - 2.0 * e[1]) + b * e[2] * e[2] + c * e[2];
    };
    m.flags.known_svpc =
        (a >= 0.0 && b >= 0.0) ? KnownSvpc::Yes : KnownSvpc::Unknown;
    m.summary =
        "a*(e1^2 - 2 e2) + b*e3^2 + c*e3 in the elementary symmetric "
        "variables of the signed spectrum";
  }
  attach_default_w(m);
  return m;
}

EnergyModel make_lifted_affine(int dim, const Params& user) {
  EnergyModel m;
  m.name = "lifted_affine";
  m.dim = dim;
  int k = lifted_dim(dim);
  Params defaults;
  for (int i = 1; i <= k; ++i) defaults["b" + std::to_string(i)] = 0.0;
  defaults["b" + std::to_string(k)] = 1.0;
  m.params = merge(m.name, defaults, user);
  std::vector<double> beta(k);
  for (int i = 0; i < k; ++i) beta[i] = m.params.at("b" + std::to_string(i + 1));
  m.phi = [beta](std::span<const double> nu) {
    return lambda_support(beta, nu);
  };
  m.flags.known_svpc = KnownSvpc::Yes;
  m.summary =
      "orbit max of a linear function of the lifted coordinates; its own "
      "envelope for every slope vector";
  attach_default_w(m);
  return m;
}

EnergyModel make_lifted_convex(int dim, const Params& user) {
  EnergyModel m;
  m.name = "lifted_convex";
  m.dim = dim;
  Params defaults = dim == 2
                        ? Params{{"a", 0.25}, {"c", 0.1}, {"e", 0.25}}
                        : Params{{"a", 0.5}, {"b", 0.25}, {"c", 0.1}, {"e", 0.25}};
  m.params = merge(m.name, defaults, user);
  double a = m.params.at("a");
  double b = dim == 3 ? m.params.at("b") : 0.0;
  double c = m.params.at("c");
  double e = m.params.at("e");
  int k = lifted_dim(dim);
  m.phi = [a, b, c, e, dim, k](std::span<const double> nu) {
    std::array<double, 7> x{};
    lift_into(nu, std::span(x.data(), k));
    double head = 0.0;
    for (int i = 0; i < dim; ++i) head += x[i] * x[i];
    double mid = 0.0;
    if (dim == 3)
      for (int i = 3; i < 6; ++i) mid += x[i] * x[i];
    double last = x[k - 1];
    return a * head + b * mid + c * last * last + e * last;
  };
  m.flags.known_svpc = (a >= 0.0 && b >= 0.0 && c >= 0.0) ? KnownSvpc::Yes
                                                          : KnownSvpc::Unknown;
  m.summary =
      "convex quadratic in the lifted coordinates (block norms plus a "
      "linear determinant term)";
  attach_default_w(m);
  return m;
}

EnergyModel make_ogden_like(int dim, const Params& user) {
  EnergyModel m;
  m.name = "ogden_like";
  m.dim = dim;
  m.params = merge(m.name, {{"p", 4.0}, {"q", 0.5}}, user);
  double p = m.params.at("p");
  double q = m.params.at("q");
  if (p < 1.0)
    throw InputError("model ogden_like: p must be at least 1");
  if (q < 0.0)
    throw InputError("model ogden_like: q must be nonnegative");
  m.phi = [p, q, dim](std::span<const double> nu) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += std::pow(std::abs(nu[i]), p);
    double prod = nu[0];
    for (int i = 1; i < dim; ++i) prod *= nu[i];
    return s + std::pow(std::abs(prod), -q);  // pow(0, -q) = +inf for q > 0
  };
  m.flags.finite_everywhere = q == 0.0;
  m.flags.known_svpc = q == 0.0 ? KnownSvpc::Yes : KnownSvpc::Unknown;
  m.summary =
      "sum |nu_i|^p plus the volumetric term |prod nu|^-q (+inf on the "
      "singular set when q > 0)";
  attach_default_w(m);
  return m;
}

EnergyModel make_svk(int dim, const Params& user) {
  if (dim != 2)
    throw InputError("model st_venant_kirchhoff is available for dim 2 only");
  EnergyModel m;
  m.name = "st_venant_kirchhoff";
  m.dim = dim;
  m.params = merge(m.name, {{"lambda", 1.0}, {"mu", 1.0}}, user);
  double lambda = m.params.at("lambda");
  double mu = m.params.at("mu");
  m.phi = [lambda, mu](std::span<const double> nu) {
    double t = nu[0] * nu[0] + nu[1] * nu[1] - 2.0;
    double u = nu[0] * nu[0] - 1.0;
    double v = nu[1] * nu[1] - 1.0;
    return lambda / 8.0 * t * t + mu / 4.0 * (u * u + v * v);
  };
  m.flags.known_svpc =
      (lambda == 0.0 && mu == 0.0) ? KnownSvpc::Yes : KnownSvpc::No;
  m.summary =
      "quadratic in the Green strain; the classical example losing "
      "semicontinuity under compression";
  attach_default_w(m);
  return m;
}

}  // namespace

std::string known_svpc_name(KnownSvpc k) {
  switch (k) {
    case KnownSvpc::Yes: return "yes";
    case KnownSvpc::No: return "no";
    case KnownSvpc::Unknown: return "unknown";
  }
  throw InternalError("unreachable");
}

std::vector<std::string> catalog(int dim) {
  check_dim(dim);
  std::vector<std::string> names{
      "concave_quadratic", "det_barrier",  "double_well", "invariant_model",
      "lifted_affine",     "lifted_convex", "ogden_like"};
  if (dim == 2) names.push_back("st_venant_kirchhoff");
  std::sort(names.begin(), names.end());
  return names;
}

EnergyModel make_model(const std::string& name, int dim, const Params& params) {
  check_dim(dim);
  if (name == "concave_quadratic") return make_concave_quadratic(dim, params);
  if (name == "det_barrier") return make_det_barrier(dim, params);
  if (name == "double_well") return make_double_well(dim, params);
  if (name == "invariant_model") return make_invariant_model(dim, params);
  if (name == "lifted_affine") return make_lifted_affine(dim, params);
  if (name == "lifted_convex") return make_lifted_convex(dim, params);
  if (name == "ogden_like") return make_ogden_like(dim, params);
  if (name == "st_venant_kirchhoff") return make_svk(dim, params);
  std::string known;
  for (const std::string& n : catalog(dim)) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw InputError("unknown model '" + name + "' (available: " + known + ")");
}

std::string model_schemas() {
  nlohmann::json out = nlohmann::json::array();
  for (int dim : {2, 3}) {
    for (const std::string& name : catalog(dim)) {
      EnergyModel m = make_model(name, dim);
      nlohmann::json j;
      j["name"] = m.name;
      j["dim"] = m.dim;
      nlohmann::json p = nlohmann::json::object();
      for (const auto& [key, value] : m.params) p[key] = value;
      j["params"] = std::move(p);
      j["flags"] = {{"det_barrier", m.flags.det_barrier},
                    {"finite_everywhere", m.flags.finite_everywhere},
                    {"known_svpc", known_svpc_name(m.flags.known_svpc)}};
      j["summary"] = m.summary;
      out.push_back(std::move(j));
    }
  }
  return out.dump();
}

}  // namespace svpc
