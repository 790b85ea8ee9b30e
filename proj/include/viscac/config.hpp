#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "geometry.hpp"
#include "nearfield.hpp"
#include "params.hpp"
#include "sources.hpp"
#include "sweep.hpp"

namespace viscac {

inline constexpr const char* version = "0.3.1";

// Raised for anything wrong with the user's input; the CLI maps it to exit
// code 1.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OmegaSweep {
  double min = 2, max = 17;
  int count = 61;
  double min_resonance_distance = 0.02;
};

struct NearFieldOptions {
  double slice = 0.0;        // tangential coordinate of the side view
  Wall wall = Wall::Lower;
  bool force = false;        // allow slices through the source
  int points = 400;
  double extent = -1;        // s range; -1: the cutoff support
  ProfileForm form = ProfileForm::TraceMatched;
};

struct SolveOptions {
  std::string route = "pressure";  // or "velocity"
  int nx = 65, ny = 65;
};

// Everything a command needs. Defaults reproduce the reference strip case.
struct RunConfig {
  SeparableGeometry geometry{StripTorus{}};
  MaterialParams material;
  SourceSpec source = GaussianGradient{};
  std::string source_desc = "gaussian";
  Discretization disc;
  std::vector<int> orders{0, 1, 2};
  AnalysisRegion region;
  std::vector<double> eta_sweep{1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
  OmegaSweep omega_sweep;
  NearFieldOptions nearfield;
  SolveOptions solve;
  std::string out_dir = "out";
  int jobs = 1;
  std::string hash;  // of the canonical config text

  void validate() const {
    material.validate();
    disc.validate();
    region.interval(geometry);
    if (orders.empty()) throw ConfigError("orders: at least one model order is required");
    for (int n : orders) ModelOrder{n};
    for (double e : eta_sweep)
      if (!(e > 0)) throw ConfigError("sweep.eta: values must be > 0");
    if (!(omega_sweep.max > omega_sweep.min) || omega_sweep.min <= 0 || omega_sweep.count < 1)
      throw ConfigError("sweep.omega: need 0 < min < max and count >= 1");
    if (solve.route != "pressure" && solve.route != "velocity")
      throw ConfigError("solve.route: must be 'pressure' or 'velocity'");
    if (solve.nx < 1 || solve.ny < 2) throw ConfigError("solve.grid: need nx >= 1 and ny >= 2");
    if (nearfield.points < 2) throw ConfigError("nearfield.points: must be >= 2");
    if (jobs < 1) throw ConfigError("jobs: must be >= 1");
  }
};

// FNV-1a, stable across platforms so hashes can be compared between runs.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing config field '" + path + key + "'");
  return j.at(key);
}

template <class T>
void read(const json& j, const std::string& key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + path + key + "' has the wrong type");
  }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path) {
  T v{};
  require(j, key, path);
  read(j, key, path, v);
  return v;
}

inline SeparableGeometry parse_geometry(const json& j) {
  const auto kind = get<std::string>(j, "kind", "geometry.");
  try {
    if (kind == "strip") {
      StripTorus s;
      read(j, "period", "geometry.", s.period);
      read(j, "height", "geometry.", s.height);
      return SeparableGeometry(s);
    }
    if (kind == "annulus") {
      return SeparableGeometry(Annulus{get<double>(j, "r_inner", "geometry."),
                                       get<double>(j, "r_outer", "geometry.")});
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  throw ConfigError("geometry.kind: unknown geometry '" + kind + "'");
}

inline void parse_source(const json& j, RunConfig& c) {
  const auto kind = get<std::string>(j, "kind", "source.");
  if (kind == "gaussian") {
    GaussianGradient s;
    read(j, "x0", "source.", s.x0);
    read(j, "y0", "source.", s.y0);
    read(j, "width", "source.", s.width);
    if (!(s.width > 0)) throw ConfigError("source.width: must be > 0");
    c.source = s;
    c.source_desc = "gaussian";
  } else if (kind == "modal_csv") {
    const auto path = get<std::string>(j, "path", "source.");
    const int k = get<int>(j, "k", "source.");
    try {
      c.source = load_modal_csv(path, k);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("source: ") + e.what());
    }
    c.source_desc = "modal_csv";
  } else {
    throw ConfigError("source.kind: unknown source '" + kind + "'");
  }
}

}  // namespace detail

// Required: geometry.kind, material.omega, material.eta, source.kind.
// Every other field has the default shown in RunConfig.
inline RunConfig parse_config(const std::string& text) {
  using detail::json;
  using detail::read;
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.hash = fnv1a_hex(j.dump());

  c.geometry = detail::parse_geometry(detail::require(j, "geometry", ""));

  const auto& m = detail::require(j, "material", "");
  c.material.omega = detail::get<double>(m, "omega", "material.");
  c.material.eta = detail::get<double>(m, "eta", "material.");
  read(m, "c", "material.", c.material.c);
  read(m, "rho0", "material.", c.material.rho0);
  read(m, "eta_prime", "material.", c.material.eta_prime);

  detail::parse_source(detail::require(j, "source", ""), c);

  if (j.contains("discretization")) {
    const auto& d = j["discretization"];
    read(d, "degree", "discretization.", c.disc.degree);
    read(d, "modes", "discretization.", c.disc.modes);
    read(d, "n_interior", "discretization.", c.disc.n_interior);
    read(d, "ratio", "discretization.", c.disc.ratio);
    read(d, "layers", "discretization.", c.disc.layers);
    read(d, "layer_fraction", "discretization.", c.disc.layer_fraction);
    read(d, "mode_energy_floor", "discretization.", c.disc.mode_energy_floor);
  }
  read(j, "orders", "", c.orders);
  if (j.contains("analysis")) read(j["analysis"], "delta", "analysis.", c.region.delta);
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    read(s, "eta", "sweep.", c.eta_sweep);
    if (s.contains("omega")) {
      const auto& o = s["omega"];
      read(o, "min", "sweep.omega.", c.omega_sweep.min);
      read(o, "max", "sweep.omega.", c.omega_sweep.max);
      read(o, "count", "sweep.omega.", c.omega_sweep.count);
      read(o, "min_resonance_distance", "sweep.omega.", c.omega_sweep.min_resonance_distance);
    }
  }
  if (j.contains("nearfield")) {
    const auto& n = j["nearfield"];
    read(n, "slice", "nearfield.", c.nearfield.slice);
    read(n, "force", "nearfield.", c.nearfield.force);
    read(n, "points", "nearfield.", c.nearfield.points);
    read(n, "extent", "nearfield.", c.nearfield.extent);
    if (n.contains("wall")) {
      try {
        std::string w;
        read(n, "wall", "nearfield.", w);
        c.nearfield.wall = c.geometry.wall_by_name(w);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("nearfield.wall: ") + e.what());
      }
    }
    if (n.contains("form")) {
      std::string f;
      read(n, "form", "nearfield.", f);
      if (f == "printed") c.nearfield.form = ProfileForm::Printed;
      else if (f == "trace_matched") c.nearfield.form = ProfileForm::TraceMatched;
      else throw ConfigError("nearfield.form: must be 'printed' or 'trace_matched'");
    }
  }
  if (j.contains("solve")) {
    const auto& s = j["solve"];
    read(s, "route", "solve.", c.solve.route);
    read(s, "nx", "solve.", c.solve.nx);
    read(s, "ny", "solve.", c.solve.ny);
  }
  if (j.contains("output")) read(j["output"], "dir", "output.", c.out_dir);
  read(j, "jobs", "", c.jobs);

  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// VISCAC_OUT and VISCAC_JOBS override the file; command-line flags override both.
inline void apply_env(RunConfig& c) {
  if (const char* o = std::getenv("VISCAC_OUT"); o && *o) c.out_dir = o;
  if (const char* j = std::getenv("VISCAC_JOBS"); j && *j) {
    char* end = nullptr;
    const long n = std::strtol(j, &end, 10);
    if (*end || n < 1) throw ConfigError("VISCAC_JOBS must be a positive integer");
    c.jobs = int(n);
  }
}

}  // namespace viscac
