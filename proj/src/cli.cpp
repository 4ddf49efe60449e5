#include "svpc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "svpc/certify.hpp"
#include "svpc/conjugate.hpp"
#include "svpc/gridfn.hpp"
#include "svpc/lifting.hpp"
#include "svpc/models.hpp"

namespace svpc {

namespace {

// Shared state filled by CLI11 for the grid-consuming subcommands.
struct CommonArgs {
  std::string model;
  std::string params_json;
  std::string input;
  int dim = 2;
  std::string nu_grid;
  std::string beta_grid;
  std::string out_path;
  std::string report_path;
  std::string csv_path;
  std::uint64_t seed = 0;
};

double parse_real(const std::string& text, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("could not parse ") + what + " '" + text + "'");
  }
}

std::size_t parse_count(const std::string& text, const char* what) {
  try {
    std::size_t pos = 0;
    unsigned long v = std::stoul(text, &pos);
    if (pos != text.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("could not parse ") + what + " '" + text + "'");
  }
}

// Grid descriptors: either "min:max:count" (symmetric, min = -max, odd
// count), replicated over every axis, or "@file" with {"axes":[[...],...]}.
GridSpec parse_grid(const std::string& descriptor, SpaceKind kind, int axes) {
  if (descriptor.empty()) throw InputError("empty grid descriptor");
  if (descriptor[0] == '@') {
    std::ifstream in(descriptor.substr(1));
    if (!in)
      throw InputError("could not open grid file '" + descriptor.substr(1) + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("grid file '" + descriptor.substr(1) +
                       "' is not valid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("axes") || !j["axes"].is_array())
      throw InputError("grid file must be an object with an 'axes' array");
    std::vector<std::vector<double>> ax;
    for (const auto& a : j["axes"]) {
      if (!a.is_array()) throw InputError("each grid axis must be an array");
      std::vector<double> axis;
      for (const auto& v : a) {
        if (!v.is_number()) throw InputError("grid axes must hold numbers");
        axis.push_back(v.get<double>());
      }
      ax.push_back(std::move(axis));
    }
    if (static_cast<int>(ax.size()) != axes)
      throw GridError("grid file has " + std::to_string(ax.size()) +
                      " axes, expected " + std::to_string(axes));
    return GridSpec(kind, std::move(ax));
  }

  std::vector<std::string> parts;
  std::string token;
  std::istringstream stream(descriptor);
  while (std::getline(stream, token, ':')) parts.push_back(token);
  if (parts.size() != 3)
    throw InputError("grid descriptor '" + descriptor +
                     "' must look like min:max:count");
  double lo = parse_real(parts[0], "grid minimum");
  double hi = parse_real(parts[1], "grid maximum");
  std::size_t count = parse_count(parts[2], "grid node count");
  if (lo != -hi)
    throw GridError("grid descriptor '" + descriptor +
                    "' must be symmetric (min = -max)");
  std::vector<double> axis = GridSpec::symmetric_axis(hi, count);
  std::vector<std::vector<double>> ax(axes, axis);
  return GridSpec(kind, std::move(ax));
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> params;
  if (text.empty()) return params;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("--params is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("--params must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number())
      throw InputError("--params entry '" + key + "' must be a number");
    params[key] = value.get<double>();
  }
  return params;
}

// Resolves the energy samples: either a model evaluated on --nu-grid or a
// stored grid function from --input.
GridFunction load_phi(const CommonArgs& a) {
  bool have_model = !a.model.empty();
  bool have_input = !a.input.empty();
  if (have_model == have_input)
    throw InputError("provide exactly one of --model or --input");
  if (have_input) {
    GridFunction f = read_gridfn(a.input);
    if (f.spec().kind() != SpaceKind::Nu)
      throw GridError("--input must hold samples on a nu-space grid");
    return f;
  }
  if (a.nu_grid.empty())
    throw InputError("--nu-grid is required with --model");
  EnergyModel model = make_model(a.model, a.dim, parse_params(a.params_json));
  GridSpec spec = parse_grid(a.nu_grid, SpaceKind::Nu, a.dim);
  return build(spec, model.phi);
}

GridSpec resolve_beta_grid(const CommonArgs& a, const GridFunction& phi) {
  int k = lifted_dim(phi.spec().dim());
  if (!a.beta_grid.empty()) return parse_grid(a.beta_grid, SpaceKind::Beta, k);
  std::size_t nodes = phi.spec().dim() == 2 ? 17 : 9;
  return GridSpec(SpaceKind::Beta, suggest_beta_axes(phi, nodes));
}

void maybe_write_outputs(const CommonArgs& a, const GridFunction& result) {
  if (!a.out_path.empty()) write_gridfn(result, a.out_path);
  if (!a.csv_path.empty()) write_csv(result, a.csv_path);
}

void maybe_write_report(const std::string& path, const std::string& json) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("could not open report file '" + path + "'");
  out << json << '\n';
}

int cmd_certify(const CommonArgs& a, std::optional<double> certify_tol,
                std::optional<double> refute_margin, std::ostream& out) {
  GridFunction phi = load_phi(a);
  CertifyConfig config{resolve_beta_grid(a, phi)};
  config.certify_tol = certify_tol;
  config.refute_margin = refute_margin;
  Certificate cert = is_svpc(phi, config);
  std::string json = certificate_to_json_string(cert);
  out << json << '\n';
  maybe_write_report(a.report_path, json);
  switch (cert.verdict) {
    case Verdict::Svpc: return 0;
    case Verdict::NotSvpc: return 1;
    case Verdict::Inconclusive: return 2;
  }
  throw InternalError("unreachable");
}

int cmd_envelope(const CommonArgs& a, double tol, std::ostream& out) {
  GridFunction phi = load_phi(a);
  ConjugationConfig config{phi.spec(), resolve_beta_grid(a, phi)};
  config.tol = tol;
  EnvelopeResult result = sv_envelope(phi, config);
  std::string json = report_to_json_string(result.report);
  out << json << '\n';
  maybe_write_report(a.report_path, json);
  maybe_write_outputs(a, result.envelope);
  return 0;
}

int cmd_conjugate(const CommonArgs& a, std::ostream& out) {
  GridFunction phi = load_phi(a);
  GridSpec beta = resolve_beta_grid(a, phi);
  SweepResult sweep = sv_conjugate(phi, beta);
  double lo = kInf, hi = -kInf;
  for (double v : sweep.values.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  nlohmann::json j;
  j["beta_nodes"] = beta.size();
  j["boundary_active"] = sweep.boundary_active;
  j["max"] = hi;
  j["min"] = lo;
  std::string json = j.dump();
  out << json << '\n';
  maybe_write_report(a.report_path, json);
  maybe_write_outputs(a, sweep.values);
  return 0;
}

int cmd_models(bool as_json, std::ostream& out) {
  if (as_json) {
    out << model_schemas() << '\n';
    return 0;
  }
  for (int dim : {2, 3}) {
    for (const std::string& name : catalog(dim)) {
      EnergyModel m = make_model(name, dim);
      out << name << " (dim " << dim << ")";
      if (!m.params.empty()) {
        out << " [";
        bool first = true;
        for (const auto& [key, value] : m.params) {
          if (!first) out << ", ";
          first = false;
          out << key << "=" << format_double(value);
        }
        out << "]";
      }
      out << "\n    " << m.summary << "\n";
    }
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonArgs& a, bool grids) {
  cmd->add_option("--model", a.model, "catalog model name");
  cmd->add_option("--params", a.params_json,
                  "model parameters as a JSON object");
  cmd->add_option("--input", a.input, "stored grid-function JSON file");
  cmd->add_option("--dim", a.dim, "spatial dimension (2 or 3)")
      ->check(CLI::IsMember({2, 3}));
  if (grids) {
    cmd->add_option("--nu-grid", a.nu_grid,
                    "spectrum grid, min:max:count or @file");
    cmd->add_option("--beta-grid", a.beta_grid,
                    "slope grid, min:max:count or @file (default: suggested "
                    "from the sampled slopes)");
  }
  cmd->add_option("--out", a.out_path, "write the resulting grid function");
  cmd->add_option("--report", a.report_path, "write the JSON report");
  cmd->add_option("--csv", a.csv_path, "write the result as CSV");
  cmd->add_option("--seed", a.seed, "random seed (reserved, unused)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Certify lower-semicontinuous polyconvexity of isotropic energies in "
      "signed singular values and compute the associated envelopes"};
  app.name("svpc");
  app.require_subcommand(1);

  CommonArgs cert_args, env_args, conj_args;
  std::optional<double> certify_tol, refute_margin;
  double env_tol = 1e-9;
  bool models_json = false;

  CLI::App* cmd_cert = app.add_subcommand(
      "certify", "three-way verdict: certified, refuted, or inconclusive");
  add_common(cmd_cert, cert_args, true);
  cmd_cert->add_option("--certify-tol", certify_tol,
                       "acceptance tolerance (default 5 h^2)");
  cmd_cert->add_option("--refute-margin", refute_margin,
                       "refutation margin (default 10x the tolerance)");

  CLI::App* cmd_env = app.add_subcommand(
      "envelope", "double conjugation: the certified lower envelope");
  add_common(cmd_env, env_args, true);
  cmd_env->add_option("--tol", env_tol, "floating-point slack");

  CLI::App* cmd_conj = app.add_subcommand(
      "conjugate", "one conjugation sweep onto the slope grid");
  add_common(cmd_conj, conj_args, true);

  CLI::App* cmd_mod = app.add_subcommand("models", "list the model catalog");
  cmd_mod->add_flag("--json", models_json, "machine-readable catalog");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 10;
  }

  try {
    if (cmd_cert->parsed())
      return cmd_certify(cert_args, certify_tol, refute_margin, out);
    if (cmd_env->parsed()) return cmd_envelope(env_args, env_tol, out);
    if (cmd_conj->parsed()) return cmd_conjugate(conj_args, out);
    return cmd_models(models_json, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 10;
  } catch (const NotInImageError& e) {
    err << "error: " << e.what() << '\n';
    return 10;
  } catch (const GridError& e) {
    err << "error: " << e.what() << '\n';
    return 11;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return 11;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 12;
  }
}

}  // namespace svpc
