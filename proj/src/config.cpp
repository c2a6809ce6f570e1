#include "kvlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kvlab/experiments.hpp"
#include "kvlab/transform.hpp"

namespace kvlab {

using nlohmann::json;

std::string boundary_name(Boundary b) {
  return b == Boundary::DirichletHalfline ? "halfline" : "line";
}

Boundary parse_boundary(const std::string& name) {
  if (name == "line") return Boundary::PeriodicLine;
  if (name == "halfline") return Boundary::DirichletHalfline;
  throw ConfigError("boundary must be 'line' or 'halfline', got '" + name + "'");
}

json to_json(const RunConfig& c) {
  return {
      {"command", c.command},
      {"m", c.m},
      {"grid", {{"L", c.grid.length}, {"n", c.grid.n}, {"boundary", boundary_name(c.grid.boundary)}}},
      {"seed", c.seed},
      {"output", c.output},
      {"serial", c.serial},
      {"resolvent",
       {{"s_min", c.resolvent.s_min},
        {"s_max", c.resolvent.s_max},
        {"samples", c.resolvent.samples},
        {"exclusion", c.resolvent.exclusion}}},
      {"decay",
       {{"data_class", c.decay.data_class},
        {"t_min", c.decay.t_min},
        {"t_max", c.decay.t_max},
        {"samples", c.decay.samples},
        {"window", {c.decay.fit_min, c.decay.fit_max}}}},
      {"greens", {{"s", c.greens.s}, {"cases", c.greens.cases}}},
      {"weyl", {{"k", c.weyl_k}}},
      {"spectrum", {{"xi_max", c.spectrum.xi_max}, {"samples", c.spectrum.samples}}},
      {"range", {{"data", c.range.data}}},
  };
}

namespace {

template <class T>
void read(const json& j, const char* key, T& into) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  const json& j = doc.contains("config") && doc.contains("version") ? doc.at("config") : doc;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  read(j, "command", c.command);
  read(j, "m", c.m);
  read(j, "seed", c.seed);
  read(j, "output", c.output);
  read(j, "serial", c.serial);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    read(g, "L", c.grid.length);
    read(g, "n", c.grid.n);
    std::string b = boundary_name(c.grid.boundary);
    read(g, "boundary", b);
    c.grid.boundary = parse_boundary(b);
  }
  if (j.contains("resolvent")) {
    const json& r = j.at("resolvent");
    read(r, "s_min", c.resolvent.s_min);
    read(r, "s_max", c.resolvent.s_max);
    read(r, "samples", c.resolvent.samples);
    read(r, "exclusion", c.resolvent.exclusion);
  }
  if (j.contains("decay")) {
    const json& d = j.at("decay");
    read(d, "data_class", c.decay.data_class);
    read(d, "t_min", c.decay.t_min);
    read(d, "t_max", c.decay.t_max);
    read(d, "samples", c.decay.samples);
    if (d.contains("window")) {
      std::vector<double> w;
      read(d, "window", w);
      if (w.size() != 2) throw ConfigError("decay.window must be [t_min, t_max]");
      c.decay.fit_min = w[0];
      c.decay.fit_max = w[1];
    }
  }
  if (j.contains("greens")) {
    read(j.at("greens"), "s", c.greens.s);
    read(j.at("greens"), "cases", c.greens.cases);
  }
  if (j.contains("weyl")) read(j.at("weyl"), "k", c.weyl_k);
  if (j.contains("spectrum")) {
    read(j.at("spectrum"), "xi_max", c.spectrum.xi_max);
    read(j.at("spectrum"), "samples", c.spectrum.samples);
  }
  if (j.contains("range")) read(j.at("range"), "data", c.range.data);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::vector<double> sweep_points(const RunConfig& c, std::vector<std::string>* skipped) {
  const ResolventSweep& r = c.resolvent;
  const double root = std::sqrt(c.m);
  std::vector<double> out;
  for (int i = 0; i < r.samples; ++i) {
    const double s = r.samples == 1 ? r.s_min
                                    : r.s_min + (r.s_max - r.s_min) * i / (r.samples - 1.0);
    if (std::abs(s - root) < r.exclusion || std::abs(s + root) < r.exclusion) {
      if (skipped) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "s = %.17g within %g of a spectral point; row skipped", s,
                      r.exclusion);
        skipped->push_back(buf);
      }
      continue;
    }
    out.push_back(s);
  }
  return out;
}

void validate(const RunConfig& c) {
  if (!(c.m > 0.0) || !std::isfinite(c.m)) throw ConfigError("m must be a positive finite number");
  if (!(c.grid.length > 0.0) || !std::isfinite(c.grid.length)) throw ConfigError("grid.L must be positive");
  if (c.grid.n < 4 || !is_power_of_two(c.grid.n)) throw ConfigError("grid.n must be a power of two >= 4");

  const ResolventSweep& r = c.resolvent;
  if (!(r.exclusion >= 1e-10)) throw ConfigError("resolvent.exclusion must be at least 1e-10");
  if (r.samples < 1 || !(r.s_max >= r.s_min)) throw ConfigError("resolvent s-range is empty");
  if (c.command == "profile-resolvent" && sweep_points(c).empty()) {
    throw ConfigError("resolvent s-range is empty after removing the spectral points");
  }

  const DecayRun& d = c.decay;
  parse_data_class(d.data_class);
  if (!(d.t_min > 0.0) || !(d.t_max > d.t_min)) throw ConfigError("decay needs 0 < t_min < t_max");
  if (d.samples < 2) throw ConfigError("decay.samples must be >= 2");
  if (!(d.fit_min >= 1.0) || !(d.fit_max > d.fit_min)) throw ConfigError("decay.window needs 1 <= t_min < t_max");
  if (c.command == "decay") {
    std::size_t in_window = 0;
    for (double t : log_spaced(d.t_min, d.t_max, static_cast<std::size_t>(d.samples))) {
      if (t >= d.fit_min && t <= d.fit_max) ++in_window;
    }
    if (in_window < 10) throw ConfigError("decay.window holds fewer than 10 sample times");
  }

  const double root = std::sqrt(c.m);
  if (c.greens.cases < 1) throw ConfigError("greens.cases must be >= 1");
  for (double s : c.greens.s) {
    if (std::abs(s - root) < 1e-10 || std::abs(s + root) < 1e-10) {
      throw ConfigError("greens.s contains a spectral point +-sqrt(m)");
    }
  }
  for (int k : c.weyl_k) {
    if (k < 1) throw ConfigError("weyl.k entries must be >= 1");
  }
  if (!(c.spectrum.xi_max > 0.0) || c.spectrum.samples < 2) {
    throw ConfigError("spectrum needs xi_max > 0 and at least two samples");
  }
  if (c.range.data != "generic" && c.range.data != "prepared") {
    throw ConfigError("range.data must be 'generic' or 'prepared'");
  }
}

}  // namespace kvlab
