#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kvlab/commands.hpp"
#include "kvlab/config.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> m;
  std::optional<std::size_t> grid_n;
  std::optional<double> grid_L;
  std::optional<std::string> boundary;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool serial = false;
};

kvlab::RunConfig resolve(const std::string& command, const Overrides& o) {
  kvlab::RunConfig c = o.config_path.empty() ? kvlab::RunConfig{} : kvlab::load_config(o.config_path);
  c.command = command;
  if (o.m) c.m = *o.m;
  if (o.grid_n) c.grid.n = *o.grid_n;
  if (o.grid_L) c.grid.length = *o.grid_L;
  if (o.boundary) c.grid.boundary = kvlab::parse_boundary(*o.boundary);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output = *o.out;
  if (o.serial) c.serial = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kelvin-Voigt damped Klein-Gordon laboratory"};
  app.set_version_flag("--version", std::string(kvlab::kVersion));
  app.require_subcommand(1);

  Overrides o;
  const char* help[] = {
      "Resolvent norm along the imaginary axis",
      "Energy decay trace and fitted slope",
      "Green's-function resolvent round trips",
      "Weyl sequence residuals",
      "Eigenvalue branches of the symbol",
      "Range conditions via antiderivative tails",
  };
  std::size_t i = 0;
  for (const auto& name : kvlab::command_names()) {
    CLI::App* sub = app.add_subcommand(name, help[i++]);
    sub->add_option("--config", o.config_path, "JSON config or manifest")->check(CLI::ExistingFile);
    sub->add_option("--m", o.m, "mass coefficient");
    sub->add_option("--grid-n", o.grid_n, "grid points (power of two)");
    sub->add_option("--grid-L", o.grid_L, "domain length");
    sub->add_option("--boundary", o.boundary, "line or halfline")
        ->check(CLI::IsMember({"line", "halfline"}));
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output CSV path");
    sub->add_flag("--serial", o.serial, "single thread, bit-reproducible");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const kvlab::CommandResult res = kvlab::run_command(resolve(command, o), std::cerr);
    for (const auto& f : res.files) std::cout << f << '\n';
    return res.exit_code;
  } catch (const kvlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
