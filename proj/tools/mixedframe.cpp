// mixedframe: reproduce the figures and worked examples, run the verification suites.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixedframe/app.hpp"
#include "mixedframe/errors.hpp"

namespace app = mixedframe::app;

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
  std::optional<std::string> value;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Mixed reference-frame transformations: figures, demos and verification"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", app::version());

  std::vector<Flag> flags{
      {"--alpha", "alpha", "Gaussian packet width alpha", {}},
      {"--a2", "a2", "second translation a2", {}},
      {"--sigma", "sigma", "frame density standard deviation", {}},
      {"--a0", "a0", "frame density centre", {}},
      {"--beta", "beta", "inverse temperature (time units)", {}},
      {"--temperature", "temperature", "temperature T", {}},
      {"--mass", "mass", "particle mass", {}},
      {"--v0", "v0", "mean boost velocity", {}},
      {"--p", "p", "initial momentum", {}},
      {"--grid-n", "grid_n", "grid points (power of two, 256..8192)", {}},
      {"--extent", "extent", "position window length", {}},
      {"--quad-order", "quad_order", "Gauss-Hermite nodes per Gaussian component", {}},
  };
  for (auto& f : flags) cli.add_option(f.name, f.value, f.help);
  std::optional<std::string> out;
  std::optional<std::string> config_file;
  cli.add_option("--out", out, "output directory (default $MIXEDFRAME_OUT or .)");
  cli.add_option("--config", config_file, "config file with key = value lines");

  std::string figure_name;
  auto* figure = cli.add_subcommand("figure", "write <id>.csv, <id>.gp and <id>.json");
  figure->add_option("id", figure_name, "a1a2 | a1a2diff | gaussian-smear")->required();
  figure->fallthrough();

  std::string demo_name;
  auto* demo = cli.add_subcommand("demo", "run a worked example");
  demo->add_option("id", demo_name, "thermal | galilei-boost | semigroup")->required();
  demo->fallthrough();

  double tolerance_scale = 1.0;
  auto* verify = cli.add_subcommand("verify", "run every invariant suite, write verify_report.csv");
  verify->add_option("--tolerance-scale", tolerance_scale, "multiply all tolerances (0 = harness self-test)");
  verify->fallthrough();

  CLI11_PARSE(cli, argc, argv);

  try {
    app::RunConfig base;
    app::Overrides overrides;
    for (const auto& f : flags) {
      if (f.value) overrides[f.key] = *f.value;
    }
    std::optional<std::filesystem::path> out_path;
    if (out) out_path = *out;
    std::optional<std::filesystem::path> config_path;
    if (config_file) config_path = *config_file;

    if (*figure) {
      base.command = app::Command::Figure;
      base.figure = app::parse_figure_id(figure_name);
    } else if (*demo) {
      base.command = app::Command::Demo;
      base.demo = app::parse_demo_id(demo_name);
    } else {
      base.command = app::Command::Verify;
      base.tolerance_scale = tolerance_scale;
    }
    const auto config = app::resolve_config(base, config_path, overrides, out_path);

    switch (config.command) {
      case app::Command::Figure: {
        const auto art = app::run_figure(config);
        std::cout << "wrote " << (config.output_dir / (art.id + ".csv")).string() << "\n";
        for (const auto& [curve, err] : art.metadata["closed_form_sup_error"].items()) {
          std::cout << "  closed-form sup error " << curve << ": " << err.get<double>() << "\n";
        }
        return 0;
      }
      case app::Command::Demo: {
        const auto summary = app::run_demo(config);
        std::cout << summary.dump(2) << "\n";
        return 0;
      }
      case app::Command::Verify: {
        const auto report = app::run_verify(config);
        std::size_t passed = 0;
        for (const auto& c : report.checks) passed += c.passed ? 1 : 0;
        std::cout << passed << "/" << report.checks.size() << " checks passed; report in "
                  << (config.output_dir / "verify_report.csv").string() << "\n";
        if (const auto* fail = report.first_failure()) {
          std::cerr << "verify: FAILED " << fail->name << " (" << fail->parameters << "): residual " << fail->residual
                    << " > tolerance " << fail->tolerance << "\n";
          return 1;
        }
        return 0;
      }
    }
  } catch (const mixedframe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mixedframe::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const mixedframe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
