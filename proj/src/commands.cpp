#include "kvlab/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kvlab/experiments.hpp"
#include "kvlab/greens.hpp"
#include "kvlab/symbol.hpp"

namespace kvlab {

using nlohmann::json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

Grid make_grid(const RunConfig& c) { return Grid(c.grid.length, c.grid.n, c.grid.boundary); }

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------

void profile_resolvent_cmd(const RunConfig& c, CommandResult& res, std::vector<std::string>& warnings) {
  const Params p(c.m);
  const std::vector<double> s = sweep_points(c, &warnings);
  const ResolventProfile profile = profile_resolvent(s, p);
  CsvWriter csv(c.output, {"s", "norm", "bound_ratio"});
  for (const auto& sample : profile.samples) {
    const double ratio = sample.norm * std::abs(sample.s - p.sqrt_m()) *
                         std::abs(sample.s + p.sqrt_m()) / (1.0 + sample.s * sample.s);
    csv.row({format_real(sample.s), format_real(sample.norm), format_real(ratio)});
  }
  res.summary = {{"xi_grid", profile.xi_grid}, {"rows", profile.samples.size()}};
}

void decay_cmd(const RunConfig& c, CommandResult& res) {
  const Params p(c.m);
  const Grid grid = make_grid(c);
  const DataClass cls = parse_data_class(c.decay.data_class);
  const DecayCase dc = make_decay_case(cls, c.seed, grid, p);
  const std::vector<double> times =
      log_spaced(c.decay.t_min, c.decay.t_max, static_cast<std::size_t>(c.decay.samples));
  const EnergyTrace trace = decay_trace(dc.state, p, times);

  CsvWriter csv(c.output, {"t", "E", "D"});
  for (const auto& s : trace.samples()) {
    csv.row({format_real(s.t), format_real(s.energy), format_real(s.dissipation)});
  }

  json summary = {{"data_class", to_string(cls)},
                  {"window", {c.decay.fit_min, c.decay.fit_max}},
                  {"expected_band", {dc.band.lo, dc.band.hi}}};
  try {
    const DecayFit fit = fit_decay_exponent(trace, c.decay.fit_min, c.decay.fit_max);
    summary["slope"] = fit.slope;
    summary["intercept"] = fit.intercept;
    summary["r_squared"] = fit.r_squared;
    summary["samples_in_window"] = fit.samples;
    summary["in_band"] = dc.band.contains(fit.slope);
    summary["status"] = fit.conclusive() ? "conclusive" : "inconclusive";
  } catch (const std::domain_error& e) {
    summary["status"] = "inconclusive";
    summary["reason"] = e.what();
  }
  res.summary = summary;
}

void check_greens_cmd(const RunConfig& c, CommandResult& res) {
  const Params p(c.m);
  const Grid grid = make_grid(c);
  CsvWriter csv(c.output,
                {"s", "case", "path", "residual", "cross_difference", "boundary_trace", "status"});
  double worst = 0.0;
  for (double s : c.greens.s) {
    for (int i = 0; i < c.greens.cases; ++i) {
      const State zhat = random_smooth_state(c.seed + static_cast<std::uint64_t>(i), grid,
                                             Profile::GaussianPacket);
      const SpectralState zspec = to_spectral(zhat);
      const double znorm = std::sqrt(x_norm_sq(zspec, p));
      for (ConvolutionPath path : {ConvolutionPath::AnalyticSymbol, ConvolutionPath::SampledKernel}) {
        const char* name = path == ConvolutionPath::AnalyticSymbol ? "analytic" : "sampled";
        double residual = kNaN, cross = kNaN, trace = kNaN;
        std::string status = "ok";
        try {
          const State r = grid.is_halfline() ? resolvent_apply_halfline(s, zhat, p, path)
                                             : resolvent_apply_line(s, zhat, p, path).z;
          const SpectralState rs = to_spectral(r);
          const SpectralState back = apply_shifted_generator(cdouble(0.0, s), rs, p);
          residual = std::sqrt(x_distance_sq(back, zspec, p)) / znorm;
          const SpectralState sym = apply_symbol_resolvent(s, zspec, p);
          cross = std::sqrt(x_distance_sq(rs, sym, p) / x_norm_sq(sym, p));
          if (grid.is_halfline()) trace = std::max(std::abs(r.u()[0]), std::abs(r.v()[0]));
          worst = std::max(worst, residual);
        } catch (const KernelTailError& e) {
          status = "kernel-tail";
        } catch (const SpectralPointError& e) {
          status = "spectral-point";
        }
        csv.row({format_real(s), std::to_string(i), name, format_real(residual), format_real(cross),
                 format_real(trace), status});
      }
    }
  }
  res.summary = {{"max_residual", worst}};
}

void weyl_cmd(const RunConfig& c) {
  const Params p(c.m);
  const Grid grid = make_grid(c);
  CsvWriter csv(c.output, {"k", "residual_sq", "norm_sq", "ratio", "identity_value", "bound",
                           "within_bound", "status"});
  for (int k : c.weyl_k) {
    try {
      const WeylResidual w = weyl_residual(k, p, grid);
      csv.row({std::to_string(k), format_real(w.residual_sq), format_real(w.norm_sq),
               format_real(w.ratio), format_real(w.identity_value), format_real(w.bound),
               w.ratio <= w.bound ? "true" : "false", "ok"});
    } catch (const std::invalid_argument& e) {
      csv.row({std::to_string(k), format_real(kNaN), format_real(kNaN), format_real(kNaN),
               format_real(kNaN), format_real(kNaN), "false", "grid-too-small"});
    }
  }
}

void spectrum_cmd(const RunConfig& c) {
  const Params p(c.m);
  CsvWriter csv(c.output, {"xi", "re_plus", "im_plus", "re_minus", "im_minus", "regime"});
  for (const auto& pt : spectral_curves(p, c.spectrum.xi_max, c.spectrum.samples)) {
    const char* regime = pt.pair.regime == Regime::Underdamped ? "underdamped"
                         : pt.pair.regime == Regime::Critical  ? "critical"
                                                               : "overdamped";
    csv.row({format_real(pt.xi), format_real(pt.pair.plus.real()), format_real(pt.pair.plus.imag()),
             format_real(pt.pair.minus.real()), format_real(pt.pair.minus.imag()), regime});
  }
}

void check_range_cmd(const RunConfig& c, CommandResult& res, std::vector<std::string>& warnings) {
  const Params p(c.m);
  const Grid grid = make_grid(c);
  if (grid.is_halfline()) throw ConfigError("check-range runs on the line only");
  State z0 = random_smooth_state(c.seed, grid, Profile::GaussianPacket);
  if (c.range.data == "prepared") z0 = prepare_range_data(z0, p);
  const RangeCheckReport report = check_range_conditions(z0, p);
  for (const auto& w : report.warnings) warnings.push_back(w);

  CsvWriter csv(c.output, {"x", "a", "b", "c", "d"});
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<std::string> row{format_real(grid.x(j))};
    for (const auto& cond : report.conditions) row.push_back(format_real(cond.curve[j]));
    csv.row(row);
  }
  json conds = json::array();
  const char* labels[] = {"a", "b", "c", "d"};
  for (std::size_t i = 0; i < 4; ++i) {
    conds.push_back({{"condition", labels[i]},
                     {"passed", report.conditions[i].passed},
                     {"tail_fraction", report.conditions[i].tail_fraction}});
  }
  res.summary = {{"data", c.range.data},
                 {"conditions", conds},
                 {"all_passed", report.all_passed()},
                 {"edge_warning", report.edge_warning}};
}

}  // namespace

CommandResult run_command(const RunConfig& config, std::ostream& log) {
  RunConfig c = config;
  validate(c);
  if (c.output.empty()) c.output = c.command + ".csv";
#ifdef _OPENMP
  if (c.serial) omp_set_num_threads(1);
#endif

  CommandResult res;
  std::vector<std::string> warnings;
  if (c.command == "profile-resolvent") {
    profile_resolvent_cmd(c, res, warnings);
  } else if (c.command == "decay") {
    decay_cmd(c, res);
  } else if (c.command == "check-greens") {
    check_greens_cmd(c, res);
  } else if (c.command == "weyl") {
    weyl_cmd(c);
  } else if (c.command == "spectrum") {
    spectrum_cmd(c);
  } else if (c.command == "check-range") {
    check_range_cmd(c, res, warnings);
  } else {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  for (const auto& w : warnings) log << "warning: " << w << '\n';

  res.files.push_back(c.output);
  const bool has_summary = c.command == "decay" || c.command == "check-range";
  if (has_summary) {
    write_json(c.output + ".summary.json", res.summary);
    res.files.push_back(c.output + ".summary.json");
  }
  int threads = 1;
#ifdef _OPENMP
  threads = c.serial ? 1 : omp_get_max_threads();
#endif
  const json manifest = {{"version", kVersion}, {"command", c.command}, {"seed", c.seed},
                         {"config", to_json(c)}, {"threads", threads},  {"warnings", warnings},
                         {"outputs", res.files}};
  write_json(c.output + ".manifest.json", manifest);
  res.files.push_back(c.output + ".manifest.json");
  return res;
}

}  // namespace kvlab
