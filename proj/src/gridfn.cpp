#include "svpc/gridfn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace svpc {

namespace {

void validate_axis(const std::vector<double>& ax, bool need_symmetric) {
  if (ax.empty()) throw GridError("grid axis is empty");
  for (double v : ax)
    if (!std::isfinite(v)) throw GridError("grid axis nodes must be finite");
  for (std::size_t i = 1; i < ax.size(); ++i)
    if (!(ax[i - 1] < ax[i]))
      throw GridError("grid axis must be strictly increasing");
  if (need_symmetric) {
    std::size_t n = ax.size();
    for (std::size_t i = 0; i < n; ++i)
      if (ax[i] != -ax[n - 1 - i])
        throw GridError("grid axis must be symmetric about 0");
  }
}

}  // namespace

GridSpec::GridSpec(SpaceKind kind, std::vector<std::vector<double>> axes)
    : kind_(kind), axes_(std::move(axes)) {
  int d = static_cast<int>(axes_.size());
  switch (kind_) {
    case SpaceKind::Nu:
      if (d != 2 && d != 3)
        throw GridError("nu-space grid needs 2 or 3 axes, got " +
                        std::to_string(d));
      for (const auto& ax : axes_) validate_axis(ax, true);
      for (int i = 1; i < d; ++i)
        if (axes_[i] != axes_[0])
          throw GridError("nu-space grid axes must all be identical");
      break;
    case SpaceKind::Beta:
      if (d != 3 && d != 7)
        throw GridError("beta-space grid needs 3 or 7 axes, got " +
                        std::to_string(d));
      for (const auto& ax : axes_) validate_axis(ax, true);
      break;
    case SpaceKind::Box:
      if (d < 1 || d > 8)
        throw GridError("box grid supports 1..8 axes, got " + std::to_string(d));
      for (const auto& ax : axes_) validate_axis(ax, false);
      break;
  }
  strides_.assign(d, 1);
  for (int i = d - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * axes_[i + 1].size();
  size_ = strides_[0] * axes_[0].size();
}

std::vector<double> GridSpec::symmetric_axis(double half_range,
                                             std::size_t count) {
  if (!(half_range > 0) || !std::isfinite(half_range))
    throw GridError("symmetric_axis: half_range must be positive and finite");
  if (count < 3 || count % 2 == 0)
    throw GridError("symmetric_axis: node count must be odd and >= 3");
  std::vector<double> ax(count);
  std::size_t half = count / 2;
  ax[half] = 0.0;
  for (std::size_t i = 1; i <= half; ++i) {
    double v = half_range * static_cast<double>(i) / static_cast<double>(half);
    ax[half + i] = v;
    ax[half - i] = -v;  // exact mirror by construction
  }
  return ax;
}

int GridSpec::base_dim() const {
  if (kind_ == SpaceKind::Beta) return dim() == 3 ? 2 : 3;
  return dim();
}

void GridSpec::unflatten(std::size_t flat, std::span<std::size_t> out) const {
  for (int i = 0; i < dim(); ++i) {
    out[i] = flat / strides_[i];
    flat %= strides_[i];
  }
}

std::size_t GridSpec::flatten(std::span<const std::size_t> mi) const {
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i) {
    if (mi[i] >= axes_[i].size()) throw GridError("flatten: index out of range");
    flat += mi[i] * strides_[i];
  }
  return flat;
}

void GridSpec::node_at(std::size_t flat, std::span<double> out) const {
  if (flat >= size_) throw GridError("node_at: index out of range");
  for (int i = 0; i < dim(); ++i) {
    out[i] = axes_[i][flat / strides_[i]];
    flat %= strides_[i];
  }
}

std::vector<double> GridSpec::node(std::size_t flat) const {
  std::vector<double> out(dim());
  node_at(flat, out);
  return out;
}

bool GridSpec::on_boundary(std::size_t flat) const {
  if (flat >= size_) throw GridError("on_boundary: index out of range");
  for (int i = 0; i < dim(); ++i) {
    std::size_t idx = flat / strides_[i];
    flat %= strides_[i];
    if (idx == 0 || idx + 1 == axes_[i].size()) return true;
  }
  return false;
}

double GridSpec::max_spacing() const {
  double h = 0.0;
  for (const auto& ax : axes_)
    for (std::size_t i = 1; i < ax.size(); ++i)
      h = std::max(h, ax[i] - ax[i - 1]);
  return h;
}

bool GridSpec::is_uniform(double tol) const {
  for (const auto& ax : axes_) {
    if (ax.size() < 2) continue;
    double h0 = ax[1] - ax[0];
    for (std::size_t i = 1; i < ax.size(); ++i)
      if (std::abs((ax[i] - ax[i - 1]) - h0) > tol) return false;
  }
  return true;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  if (values_.size() != spec_.size())
    throw GridError("GridFunction: value count does not match grid size");
  for (double v : values_)
    if (std::isnan(v)) throw GridError("GridFunction: NaN value");
}

double GridFunction::value_at(std::size_t flat) const {
  if (flat >= values_.size()) throw GridError("value_at: index out of range");
  return values_[flat];
}

std::size_t GridFunction::finite_count() const {
  std::size_t n = 0;
  for (double v : values_)
    if (std::isfinite(v)) ++n;
  return n;
}

GridFunction build(const GridSpec& spec,
                   const std::function<double(std::span<const double>)>& eval,
                   bool allow_neg_inf) {
  std::vector<double> values(spec.size());
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::string message;
  parallel_for(spec.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> pt(spec.dim());
    for (std::size_t i = b; i < e && !failed.load(std::memory_order_relaxed);
         ++i) {
      spec.node_at(i, pt);
      double v = eval(pt);
      if (std::isnan(v) || (v == -kInf && !allow_neg_inf)) {
        std::scoped_lock lock(mu);
        failed = true;
        message = std::isnan(v) ? "build: evaluator returned NaN"
                                : "build: evaluator returned -inf for a "
                                  "function required to be > -inf";
        return;
      }
      values[i] = v;
    }
  });
  if (failed) throw InputError(message);
  return GridFunction(spec, std::move(values));
}

ConvexityReport midpoint_convexity_check(const GridFunction& f, double tol) {
  const GridSpec& spec = f.spec();
  if (!spec.is_uniform())
    throw GridError("midpoint_convexity_check requires uniform axes");
  int d = spec.dim();

  // Canonical directions: u in {-1,0,1}^d, u != 0, first nonzero entry +1.
  std::vector<std::vector<int>> dirs;
  std::vector<int> u(d, -1);
  while (true) {
    bool nonzero = false, canonical = false;
    for (int i = 0; i < d; ++i)
      if (u[i] != 0) {
        nonzero = true;
        canonical = u[i] > 0;
        break;
      }
    if (nonzero && canonical) dirs.push_back(u);
    int i = d - 1;
    while (i >= 0 && u[i] == 1) u[i--] = -1;
    if (i < 0) break;
    ++u[i];
  }

  std::vector<std::size_t> strides(d, 1);
  for (int i = d - 2; i >= 0; --i) strides[i] = strides[i + 1] * spec.axis_size(i + 1);

  ConvexityReport report{true, 0.0, spec.size(), {}};
  std::vector<std::size_t> mi(d);
  for (std::size_t p = 0; p < spec.size(); ++p) {
    spec.unflatten(p, mi);
    double fp = f.values()[p];
    if (fp == -kInf) continue;
    for (const auto& dir : dirs) {
      bool in_range = true;
      std::ptrdiff_t offset = 0;
      for (int i = 0; i < d; ++i) {
        if (dir[i] == 0) continue;
        std::size_t idx = mi[i], n = spec.axis_size(i);
        if (idx == 0 || idx + 1 >= n) {
          in_range = false;
          break;
        }
        offset += dir[i] * static_cast<std::ptrdiff_t>(strides[i]);
      }
      if (!in_range) continue;
      std::size_t hi = p + offset, lo = p - offset;
      double a = f.values()[lo], b = f.values()[hi];
      double chord;
      if (a == kInf || b == kInf) {
        if (a == -kInf || b == -kInf) continue;  // indeterminate chord
        chord = kInf;
      } else if (a == -kInf || b == -kInf) {
        chord = -kInf;
      } else {
        chord = 0.5 * (a + b);
      }
      double viol;
      if (fp == kInf)
        viol = chord == kInf ? 0.0 : kInf;
      else if (chord == kInf)
        viol = 0.0;
      else if (chord == -kInf)
        viol = kInf;
      else
        viol = fp - chord;
      if (viol > tol && viol > report.worst_violation) {
        report.convex = false;
        report.worst_violation = viol;
        report.witness_node = p;
        report.witness_step = dir;
      }
    }
  }
  return report;
}

double interpolate_multilinear(const GridFunction& f,
                               std::span<const double> x) {
  const GridSpec& spec = f.spec();
  int d = spec.dim();
  if (static_cast<int>(x.size()) != d)
    throw DimensionError("interpolate_multilinear: point dimension mismatch");
  std::vector<std::size_t> cell(d);
  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) {
    const auto& ax = spec.axis(i);
    if (x[i] < ax.front() || x[i] > ax.back())
      throw GridError("interpolate_multilinear: point outside grid");
    auto it = std::upper_bound(ax.begin(), ax.end(), x[i]);
    std::size_t hi = std::min<std::size_t>(it - ax.begin(), ax.size() - 1);
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    cell[i] = lo;
    w[i] = ax[hi] == ax[lo] ? 0.0 : (x[i] - ax[lo]) / (ax[hi] - ax[lo]);
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    double weight = 1.0;
    std::vector<std::size_t> mi(d);
    for (int i = 0; i < d; ++i) {
      bool high = corner & (std::size_t{1} << i);
      weight *= high ? w[i] : 1.0 - w[i];
      mi[i] = cell[i] + (high ? 1 : 0);
      if (mi[i] >= spec.axis_size(i)) mi[i] = spec.axis_size(i) - 1;
    }
    if (weight == 0.0) continue;
    double v = f.values()[spec.flatten(mi)];
    if (std::isinf(v)) return v;  // an infinite corner with positive weight dominates
    acc += weight * v;
  }
  return acc;
}

namespace {

nlohmann::json value_to_json(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return v;
}

double value_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw InputError("gridfn: unrecognized value literal '" + s + "'");
  }
  if (!j.is_number()) throw InputError("gridfn: value is neither number nor literal");
  return j.get<double>();
}

std::string kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Nu: return "nu";
    case SpaceKind::Beta: return "beta";
    case SpaceKind::Box: return "box";
  }
  throw InternalError("unreachable kind");
}

SpaceKind kind_from_name(const std::string& s) {
  if (s == "nu") return SpaceKind::Nu;
  if (s == "beta") return SpaceKind::Beta;
  if (s == "box") return SpaceKind::Box;
  throw InputError("gridfn: unknown dim_kind '" + s + "'");
}

}  // namespace

std::string to_json_string(const GridFunction& f) {
  nlohmann::json j;
  j["kind"] = "gridfn";
  j["dim_kind"] = kind_name(f.spec().kind());
  nlohmann::json axes = nlohmann::json::array();
  for (int i = 0; i < f.spec().dim(); ++i) axes.push_back(f.spec().axis(i));
  j["axes"] = std::move(axes);
  nlohmann::json values = nlohmann::json::array();
  for (double v : f.values()) values.push_back(value_to_json(v));
  j["values"] = std::move(values);
  return j.dump();
}

GridFunction gridfn_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("gridfn: JSON parse error: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("kind", "") != "gridfn")
      throw InputError("gridfn: document kind is not 'gridfn'");
    SpaceKind kind = kind_from_name(j.at("dim_kind").get<std::string>());
    std::vector<std::vector<double>> axes;
    for (const auto& ax : j.at("axes")) axes.push_back(ax.get<std::vector<double>>());
    std::vector<double> values;
    values.reserve(j.at("values").size());
    for (const auto& v : j.at("values")) values.push_back(value_from_json(v));
    return GridFunction(GridSpec(kind, std::move(axes)), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("gridfn: malformed document: ") + e.what());
  }
}

void write_gridfn(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << to_json_string(f) << '\n';
  if (!out) throw InputError("write failed: " + path);
}

GridFunction read_gridfn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return gridfn_from_json_string(ss.str());
}

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  std::vector<double> pt(f.spec().dim());
  for (std::size_t i = 0; i < f.spec().size(); ++i) {
    f.spec().node_at(i, pt);
    for (double c : pt) out << format_double(c) << ',';
    out << format_double(f.values()[i]) << '\n';
  }
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace svpc
