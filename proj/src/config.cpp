#include "sllg/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sllg/initial.hpp"
#include "sllg/snapshot.hpp"

namespace sllg {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw std::invalid_argument(key + ": " + what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

// A real number, optionally followed by "pi" as a factor ("4pi", "0.5 pi").
double to_real(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (s.empty()) return factor;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + raw + "'");
  }
  if (used != s.size() || !std::isfinite(v)) fail(key, "expected a number, got '" + raw + "'");
  return v * factor;
}

long long to_integer(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    fail(key, "expected an integer, got '" + raw + "'");
  }
  if (used != s.size()) fail(key, "expected an integer, got '" + raw + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty() || s[0] == '-') fail(key, "expected a non-negative integer, got '" + raw + "'");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    fail(key, "expected a non-negative integer, got '" + raw + "'");
  }
  if (used != s.size()) fail(key, "expected a non-negative integer, got '" + raw + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(key, "expected true or false, got '" + raw + "'");
}

std::vector<std::string> split(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(trim(item));
  return out;
}

int to_int(const std::string& key, const std::string& raw) {
  const long long v = to_integer(key, raw);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(key, "out of range");
  return static_cast<int>(v);
}

std::vector<int> to_int_list(const std::string& key, const std::string& raw) {
  std::vector<int> out;
  for (const auto& item : split(raw)) out.push_back(to_int(key, item));
  if (out.empty()) fail(key, "expected a comma-separated list");
  return out;
}

using Setter = void (*)(RunConfig&, const std::string& key, const std::string& value);

// section -> key -> setter
const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"grid",
       {
           {"dim", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.dim = to_int(k, v); }},
           {"points", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.points = to_int(k, v); }},
           {"extent", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.extent = to_real(k, v); }},
       }},
      {"model",
       {
           {"alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.alpha = to_real(k, v); }},
           {"beta", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.beta = to_real(k, v); }},
           {"h", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.h = to_real(k, v); }},
           {"lambda", [](RunConfig& c, const std::string& k, const std::string& v) { c.model.lambda = to_int(k, v); }},
           {"current", [](RunConfig& c, const std::string&, const std::string& v) { c.model.current = trim(v); }},
           {"current_amplitude",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.model.current_amplitude = to_real(k, v); }},
           {"stable_background",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.model.stable_background = to_bool(k, v); }},
       }},
      {"noise",
       {
           {"modes", [](RunConfig& c, const std::string& k, const std::string& v) { c.noise.modes = to_int(k, v); }},
           {"decay", [](RunConfig& c, const std::string& k, const std::string& v) { c.noise.decay = to_real(k, v); }},
           {"trace", [](RunConfig& c, const std::string& k, const std::string& v) { c.noise.trace = to_real(k, v); }},
           {"divergence_free",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.noise.divergence_free = to_bool(k, v); }},
       }},
      {"scheme",
       {
           {"scheme", [](RunConfig& c, const std::string&, const std::string& v) { c.scheme.scheme = parse_scheme(trim(v)); }},
           {"dt", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.dt = to_real(k, v); }},
           {"t_end", [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.t_end = to_real(k, v); }},
           {"renormalize_every",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.renormalize_every = to_int(k, v); }},
           {"record_every",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.record_every = to_int(k, v); }},
           {"snapshot_every",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.scheme.snapshot_every = to_int(k, v); }},
           {"cutoff_R",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              c.scheme.cutoff = CutoffSpec{to_real(k, v)};
            }},
       }},
      {"initial",
       {
           {"type", [](RunConfig& c, const std::string&, const std::string& v) { c.initial.type = trim(v); }},
           {"direction",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              const auto items = split(v);
              if (items.size() != 3) fail(k, "expected three comma-separated numbers");
              for (int i = 0; i < 3; ++i) c.initial.direction[i] = to_real(k, items[i]);
            }},
           {"k_squared", [](RunConfig& c, const std::string& k, const std::string& v) { c.initial.k_squared = to_real(k, v); }},
           {"amplitude", [](RunConfig& c, const std::string& k, const std::string& v) { c.initial.amplitude = to_real(k, v); }},
           {"radius", [](RunConfig& c, const std::string& k, const std::string& v) { c.initial.radius = to_real(k, v); }},
           {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.initial.seed = to_unsigned(k, v); }},
           {"max_frequency",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.initial.max_frequency = to_int(k, v); }},
           {"path", [](RunConfig& c, const std::string&, const std::string& v) { c.initial.path = trim(v); }},
       }},
      {"converge",
       {
           {"n_list", [](RunConfig& c, const std::string& k, const std::string& v) { c.converge.n_list = to_int_list(k, v); }},
           {"R", [](RunConfig& c, const std::string& k, const std::string& v) { c.converge.R = to_real(k, v); }},
       }},
      {"run",
       {
           {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out = trim(v); }},
           {"trajectories", [](RunConfig& c, const std::string& k, const std::string& v) { c.trajectories = to_int(k, v); }},
           {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_unsigned(k, v); }},
           {"threads", [](RunConfig& c, const std::string& k, const std::string& v) { c.threads = to_int(k, v); }},
           {"moments", [](RunConfig& c, const std::string& k, const std::string& v) { c.moments = to_int_list(k, v); }},
       }},
  };
  return s;
}

RunConfig from_tree(const pt::ptree& tree) {
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    const auto sec = schema().find(section);
    if (body.empty() && !body.data().empty()) fail(section, "keys must belong to a [section]");
    if (sec == schema().end()) fail(section, "unknown section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = sec->second.find(key);
      if (it == sec->second.end()) fail(full, "unknown key");
      it->second(cfg, full, value.data());
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

void RunConfig::validate() const {
  {
    const SpectralGrid probe(grid.dim, grid.points, grid.extent);  // throws on bad shape
    (void)probe;
  }
  ModelParams::make(model.alpha, model.beta, model.h, model.lambda).validate(model.stable_background);
  if (model.current != "none" && model.current != "constant" && model.current != "shear")
    fail("model.current", "expected none, constant or shear, got '" + model.current + "'");
  if (model.current == "shear" && grid.dim < 2) fail("model.current", "shear flow requires grid.dim >= 2");
  if (noise.modes < 0) fail("noise.modes", "must be >= 0");
  if (noise.trace && !(*noise.trace >= 0.0)) fail("noise.trace", "must be >= 0");
  scheme.validate();
  const std::set<std::string> types{"uniform", "single_mode", "skyrmion", "random", "snapshot"};
  if (!types.count(initial.type))
    fail("initial.type", "expected uniform, single_mode, skyrmion, random or snapshot, got '" + initial.type + "'");
  if (initial.type == "single_mode" && !(std::abs(initial.amplitude) < 1.0))
    fail("initial.amplitude", "must satisfy |amplitude| < 1");
  if (initial.type == "single_mode" && !(initial.k_squared > 0.0)) fail("initial.k_squared", "must be > 0");
  if (initial.type == "skyrmion" && !(initial.radius > 0.0)) fail("initial.radius", "must satisfy radius > 0");
  if (initial.type == "skyrmion" && grid.dim != 2) fail("initial.type", "skyrmion requires grid.dim = 2");
  if (initial.type == "random" && initial.max_frequency < 1) fail("initial.max_frequency", "must be >= 1");
  if (initial.type == "snapshot" && initial.path.empty()) fail("initial.path", "required for a snapshot");
  if (initial.type == "uniform") {
    const auto& d = initial.direction;
    if (!(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] > 0.0)) fail("initial.direction", "must be nonzero");
  }
  for (int n : converge.n_list)
    if (n < 1) fail("converge.n_list", "entries must be >= 1");
  if (!(converge.R > 1.0)) fail("converge.R", "must satisfy R > 1");
  if (trajectories < 1) fail("run.trajectories", "must be >= 1");
  if (threads < 1) fail("run.threads", "must be >= 1");
  for (int p : moments)
    if (p < 1) fail("run.moments", "entries must be >= 1");
  if (out.empty()) fail("run.out", "must not be empty");
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  return from_tree(tree);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

GridPtr build_grid(const RunConfig& cfg) { return make_grid(cfg.grid.dim, cfg.grid.points, cfg.grid.extent); }

ModelParams build_model(const RunConfig& cfg, const GridPtr& grid) {
  std::optional<VectorField> v;
  const double a = cfg.model.current_amplitude;
  if (cfg.model.current == "constant") {
    v = VectorField(grid);
    for (auto& x : v->component(0)) x = a;
  } else if (cfg.model.current == "shear") {
    v = VectorField(grid);
    const double k0 = grid->base_wavenumber();
    for (std::size_t i = 0; i < grid->size(); ++i) v->component(0)[i] = a * std::sin(k0 * grid->coordinate(i, 1));
  }
  auto p = ModelParams::make(cfg.model.alpha, cfg.model.beta, cfg.model.h, cfg.model.lambda, std::move(v));
  p.validate(cfg.model.stable_background);
  return p;
}

std::optional<NoiseModel> build_noise(const RunConfig& cfg, const GridPtr& grid) {
  if (cfg.noise.modes == 0) return std::nullopt;
  return NoiseModel::build_basis(grid, cfg.noise.modes, cfg.noise.decay, cfg.noise.divergence_free, cfg.noise.trace);
}

MagnetizationField build_initial(const RunConfig& cfg, const GridPtr& grid) {
  const auto& in = cfg.initial;
  if (in.type == "uniform") return uniform_field(grid, in.direction);
  if (in.type == "single_mode")
    return single_mode_perturbation(grid, nearest_lattice_mode(*grid, in.k_squared), in.amplitude);
  if (in.type == "skyrmion") return skyrmion_field(grid, in.radius);
  if (in.type == "random") return random_sphere_field(grid, in.seed, in.amplitude, in.max_frequency);
  try {
    return field_from_snapshot(in.path, grid);
  } catch (const std::exception& e) {
    fail("initial.path", e.what());
  }
}

void ensure_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (ec || !f) fail("run.out", "directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace sllg
