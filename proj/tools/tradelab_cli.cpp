// Command-line front end. Talks to the library only through tradelab.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tradelab/tradelab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitInternal = 3;

void print_line(const char* line, void* user) {
  auto* out = static_cast<std::ostream*>(user);
  *out << line << '\n';
}

int report(tl_status status) {
  if (status == TL_OK) return kExitOk;
  std::cerr << "error: " << tl_last_error() << '\n';
  switch (status) {
    case TL_ERR_CONFIG:
    case TL_ERR_IO:
    case TL_ERR_INVALID_ARGUMENT:
      return kExitConfigError;
    case TL_ERR_CONTRACT:
      return kExitPropertyFailure;
    default:
      return kExitInternal;
  }
}

// Runs `body` against stdout or the named file.
template <class F>
int with_output(const std::string& path, F&& body) {
  if (path.empty() || path == "-") return body(static_cast<std::ostream&>(std::cout));
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    std::cerr << "error: cannot write " << path << '\n';
    return kExitConfigError;
  }
  return body(static_cast<std::ostream&>(file));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret experiments for sequential bilateral trade"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tl_version()));

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run every experiment of a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("-o,--output-dir", output_dir, "Overrides the config's output_dir");

  std::string filter;
  bool list_only = false;
  auto* verify = app.add_subcommand("verify", "Run the oracle and property suite");
  verify->add_option("--filter", filter, "Only properties whose name contains this text");
  verify->add_flag("--list", list_only, "List property names and exit");

  std::string summary_path;
  std::string curve_spec;
  int points = 1001;
  std::string plot_out;
  auto* plotdata = app.add_subcommand("plotdata", "Emit plot-ready CSV");
  plotdata->add_option("summary", summary_path, "Summary CSV written by run");
  plotdata->add_option("--curve", curve_spec,
                       "Environment spec, e.g. '{\"family\":\"sqrt_lower\",\"eps\":0.7}'");
  plotdata->add_option("--points", points, "Grid size for --curve")->check(CLI::Range(2, 1000000));
  plotdata->add_option("-o,--output", plot_out, "Output file (default stdout)");

  std::vector<std::uint64_t> horizons{1000, 10000, 100000, 1000000};
  double density = 1.0;
  auto* bounds = app.add_subcommand("bounds", "Print upper and lower bound tables");
  bounds->add_option("-T,--horizons", horizons, "Horizons")->expected(1, -1);
  bounds->add_option("-M,--density-bound", density, "Density bound M")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (run->parsed()) {
    return report(tl_run_config_file(config_path.c_str(),
                                     output_dir.empty() ? nullptr : output_dir.c_str(), print_line,
                                     &std::cout));
  }
  if (verify->parsed()) {
    if (list_only) return report(tl_verify_list(print_line, &std::cout));
    int failures = 0;
    const int code = report(tl_verify(filter.c_str(), print_line, &std::cout, &failures));
    if (code != kExitOk) return code;
    if (failures > 0) {
      std::cout << failures << " propert" << (failures == 1 ? "y" : "ies") << " failed\n";
      return kExitPropertyFailure;
    }
    std::cout << "all properties passed\n";
    return kExitOk;
  }
  if (plotdata->parsed()) {
    if (summary_path.empty() == curve_spec.empty()) {
      std::cerr << "error: give either a summary CSV or --curve\n";
      return kExitConfigError;
    }
    return with_output(plot_out, [&](std::ostream& out) {
      if (!curve_spec.empty()) {
        return report(tl_plotdata_curve(curve_spec.c_str(), points, print_line, &out));
      }
      return report(tl_plotdata_summary(summary_path.c_str(), print_line, &out));
    });
  }
  if (bounds->parsed()) {
    return report(
        tl_bounds_table(horizons.data(), horizons.size(), density, print_line, &std::cout));
  }
  return kExitConfigError;
}
