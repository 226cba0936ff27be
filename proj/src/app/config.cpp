#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mixedframe/app.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/thermal.hpp"

namespace mixedframe::app {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string normalize_key(std::string key) {
  for (auto& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
  return value;
}

}  // namespace

FigureId parse_figure_id(std::string_view name) {
  if (name == "a1a2") return FigureId::A1A2;
  if (name == "a1a2diff") return FigureId::A1A2Diff;
  if (name == "gaussian-smear") return FigureId::GaussianSmear;
  throw ConfigError("unknown figure id '" + std::string(name) + "'");
}

DemoId parse_demo_id(std::string_view name) {
  if (name == "thermal") return DemoId::Thermal;
  if (name == "galilei-boost") return DemoId::GalileiBoost;
  if (name == "semigroup") return DemoId::Semigroup;
  throw ConfigError("unknown demo id '" + std::string(name) + "'");
}

std::string to_string(FigureId id) {
  switch (id) {
    case FigureId::A1A2: return "a1a2";
    case FigureId::A1A2Diff: return "a1a2diff";
    case FigureId::GaussianSmear: return "gaussian-smear";
  }
  return "?";
}

std::string to_string(DemoId id) {
  switch (id) {
    case DemoId::Thermal: return "thermal";
    case DemoId::GalileiBoost: return "galilei-boost";
    case DemoId::Semigroup: return "semigroup";
  }
  return "?";
}

double Parameters::effective_beta() const {
  if (beta) return *beta;
  return beta_of_temperature(temperature.value_or(1.0), PhysicalConstants{});
}

double Parameters::effective_temperature() const {
  if (temperature) return *temperature;
  return temperature_of_beta(beta.value_or(1.0), PhysicalConstants{});
}

void apply_overrides(Parameters& params, const Overrides& overrides) {
  for (const auto& [raw_key, value] : overrides) {
    const auto key = normalize_key(raw_key);
    if (key == "alpha") params.alpha = parse_real(key, value);
    else if (key == "a2") params.a2 = parse_real(key, value);
    else if (key == "sigma") params.sigma = parse_real(key, value);
    else if (key == "a0") params.a0 = parse_real(key, value);
    else if (key == "beta") params.beta = parse_real(key, value);
    else if (key == "temperature") params.temperature = parse_real(key, value);
    else if (key == "mass") params.mass = parse_real(key, value);
    else if (key == "v0") params.v0 = parse_real(key, value);
    else if (key == "p") params.p = parse_real(key, value);
    else if (key == "grid_n") params.grid_n = parse_int(key, value);
    else if (key == "extent") params.extent = parse_real(key, value);
    else if (key == "quad_order") params.quad_order = parse_int(key, value);
    else if (key == "out") continue;
    else throw ConfigError("unknown parameter '" + raw_key + "'");
  }
}

Overrides parse_config_text(std::string_view text) {
  Overrides out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = normalize_key(trim(std::string_view(body).substr(0, eq)));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    out[key] = value;
  }
  return out;
}

Overrides read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate(const Parameters& p) {
  const auto n = p.grid_n;
  if (n < 256 || n > 8192 || (n & (n - 1)) != 0) {
    throw ConfigError("grid_n must be a power of two in [256, 8192], got " + std::to_string(n));
  }
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive("extent", p.extent);
  positive("alpha", p.alpha);
  positive("sigma", p.sigma);
  positive("mass", p.mass);
  if (p.beta) positive("beta", *p.beta);
  if (p.temperature) positive("temperature", *p.temperature);
  if (p.beta && p.temperature &&
      std::abs(*p.beta - beta_of_temperature(*p.temperature, PhysicalConstants{})) > 1e-12 * *p.beta) {
    throw ConfigError("beta and temperature are both set and disagree");
  }
  if (p.quad_order < 16) throw ConfigError("quad_order must be at least 16");
  const double shift = std::max(std::abs(p.a0), std::abs(p.a2));
  const double needed = 16.0 * std::max(p.alpha, p.sigma) + 4.0 * shift;
  if (p.extent < needed) {
    throw ConfigError("extent " + std::to_string(p.extent) + " too small for the packet and shifts (needs >= " +
                      std::to_string(needed) + ")");
  }
}

RunConfig resolve_config(RunConfig base, const std::optional<std::filesystem::path>& config_file,
                         const Overrides& flag_overrides, const std::optional<std::filesystem::path>& out_flag) {
  std::optional<std::filesystem::path> out = out_flag;
  if (config_file) {
    const auto file = read_config_file(*config_file);
    apply_overrides(base.params, file);
    if (!out) {
      if (const auto it = file.find("out"); it != file.end()) out = it->second;
    }
  }
  apply_overrides(base.params, flag_overrides);
  if (out) {
    base.output_dir = *out;
  } else if (const char* env = std::getenv("MIXEDFRAME_OUT"); env != nullptr && *env != '\0') {
    base.output_dir = env;
  }
  validate(base.params);
  return base;
}

bool VerifyReport::all_passed() const { return first_failure() == nullptr; }

const CheckResult* VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

std::string version() { return MIXEDFRAME_VERSION; }

}  // namespace mixedframe::app
