#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kvlab/grid.hpp"

namespace kvlab {

inline constexpr const char* kVersion = "kvlab 0.1.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridConfig {
  double length = 160.0;
  std::size_t n = 4096;
  Boundary boundary = Boundary::PeriodicLine;
};

struct ResolventSweep {
  double s_min = -5.0;
  double s_max = 5.0;
  int samples = 2001;
  double exclusion = 1e-6;  // radius removed around +-sqrt(m)
};

struct DecayRun {
  std::string data_class = "generic";
  double t_min = 1.0;
  double t_max = 1e4;
  int samples = 81;
  double fit_min = 1e2;
  double fit_max = 1e4;
};

struct GreensRun {
  std::vector<double> s = {0.3, 1.7, 10.0};
  int cases = 5;
};

struct SpectrumRun {
  double xi_max = 10.0;
  int samples = 1001;
};

struct RangeRun {
  std::string data = "prepared";  // generic or prepared
};

struct RunConfig {
  std::string command;
  double m = 1.0;
  GridConfig grid;
  std::uint64_t seed = 1;
  std::string output;
  bool serial = false;
  ResolventSweep resolvent;
  DecayRun decay;
  GreensRun greens;
  std::vector<int> weyl_k = {1, 2, 4, 8, 16};
  SpectrumRun spectrum;
  RangeRun range;
};

nlohmann::json to_json(const RunConfig& c);
/// Accepts a config document or a manifest (its "config" member).
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Throws ConfigError on the first violated constraint.
void validate(const RunConfig& c);

/// s values of the resolvent sweep with the +-sqrt(m) neighbourhoods removed.
std::vector<double> sweep_points(const RunConfig& c, std::vector<std::string>* skipped = nullptr);

std::string boundary_name(Boundary b);
Boundary parse_boundary(const std::string& name);

}  // namespace kvlab
