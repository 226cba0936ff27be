#pragma once

// Reproduction commands behind the `mixedframe` CLI: figures, demos and the
// verification harness. Outputs are CSV tables, gnuplot scripts and JSON
// metadata written atomically into an output directory.

#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mixedframe/group_algebra.hpp"

namespace mixedframe::app {

enum class Command { Figure, Demo, Verify };
enum class FigureId { A1A2, A1A2Diff, GaussianSmear };
enum class DemoId { Thermal, GalileiBoost, Semigroup };

FigureId parse_figure_id(std::string_view name);
DemoId parse_demo_id(std::string_view name);
std::string to_string(FigureId id);
std::string to_string(DemoId id);

/// Physics and discretization parameters. Defaults reproduce the first figure
/// (alpha = 0.75, a2 = 2.5) on N = 4096, L = 40, in natural units.
struct Parameters {
  double alpha = 0.75;
  double a2 = 2.5;
  double sigma = 1.0;
  double a0 = 0.0;
  std::optional<double> beta;
  std::optional<double> temperature;
  double mass = 1.0;
  double v0 = 0.0;
  double p = 0.0;
  int grid_n = 4096;
  double extent = 40.0;
  int quad_order = 64;

  /// beta from an explicit value, else hbar / (k_B T) with T defaulting to 1.
  double effective_beta() const;
  double effective_temperature() const;
};

/// Key-value overrides as read from a config file or the command line.
using Overrides = std::map<std::string, std::string>;

/// Applies overrides in order; keys accept '-' or '_' (grid-n, grid_n).
/// Throws ConfigError for unknown keys or malformed numbers.
void apply_overrides(Parameters& params, const Overrides& overrides);

/// `key = value` lines, '#' comments, blank lines ignored. Recognizes `out`.
Overrides parse_config_text(std::string_view text);
Overrides read_config_file(const std::filesystem::path& path);

/// Range checks: grid_n a power of two in [256, 8192], positive extent and
/// physics parameters, quad_order >= 16, consistent beta/temperature.
void validate(const Parameters& params);

struct RunConfig {
  Command command = Command::Figure;
  FigureId figure = FigureId::A1A2;
  DemoId demo = DemoId::Thermal;
  Parameters params;
  std::filesystem::path output_dir = ".";
  /// Multiplies every verification tolerance; 0 turns verify into a self-test
  /// that must fail.
  double tolerance_scale = 1.0;
};

/// Precedence: built-in defaults < config file < command-line flags; the
/// output directory falls back to $MIXEDFRAME_OUT, then ".".
RunConfig resolve_config(RunConfig base, const std::optional<std::filesystem::path>& config_file,
                         const Overrides& flag_overrides, const std::optional<std::filesystem::path>& out_flag);

struct Curve {
  std::string label;
  std::vector<double> values;
};

struct FigureArtifact {
  std::string id;
  std::vector<double> x;
  std::vector<Curve> curves;
  nlohmann::ordered_json metadata;
};

/// Builds the curves and metadata without touching the filesystem.
FigureArtifact build_figure(FigureId id, const Parameters& params);

/// Writes <id>.csv, <id>.gp and <id>.json into config.output_dir.
FigureArtifact run_figure(const RunConfig& config);

/// Writes the demo tables and a <demo>.json summary; returns the summary.
nlohmann::ordered_json run_demo(const RunConfig& config);

struct CheckResult {
  std::string name;
  std::string parameters;
  double residual;
  double tolerance;
  bool passed;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  const CheckResult* first_failure() const;
};

/// Runs every module invariant suite; grid sizes follow params.grid_n (the
/// dense Galilei checks use min(grid_n, 1024)).
VerifyReport collect_checks(const Parameters& params, double tolerance_scale = 1.0);

/// collect_checks + verify_report.csv in config.output_dir.
VerifyReport run_verify(const RunConfig& config);

/// Dual band used by the invertibility suites: 10 / (smallest gap between
/// distinct Dirac locations), or 10 when there is no such gap.
double invertibility_band(const GroupDensity& rho);

struct RandomDensitySpec {
  int max_components = 5;
  double location_range = 3.0;  // Dirac locations and Gaussian means in [-r, r]
  double min_variance = 0.05;
  double max_variance = 1.0;
  double gaussian_probability = 0.5;
};

/// Random mixture of 1..max_components Dirac/Gaussian components with
/// weights drawn in [0.1, 1] and normalized.
GroupDensity random_density(std::mt19937_64& rng, const RandomDensitySpec& spec = {});

/// One-line rendering, e.g. "0.5 d(0) + 0.5 g(1; 0.25)".
std::string describe(const GroupDensity& rho);

std::string version();

}  // namespace mixedframe::app
