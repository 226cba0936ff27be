#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "mixedframe/app.hpp"
#include "mixedframe/csv.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/galilei.hpp"
#include "mixedframe/group_algebra.hpp"
#include "mixedframe/thermal.hpp"

namespace mixedframe::app {

namespace {

using nlohmann::ordered_json;

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

double max_abs_gap(std::span<const double> a, std::span<const double> b) {
  double gap = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) gap = std::max(gap, std::abs(a[j] - b[j]));
  return gap;
}

std::size_t momentum_points(const Parameters& p) { return static_cast<std::size_t>(p.grid_n) + 1; }

ordered_json thermal_demo(const RunConfig& config) {
  const auto& p = config.params;
  const double beta = p.effective_beta();
  const double temperature = temperature_of_beta(beta, PhysicalConstants{});
  const ThermalParameters tp{beta, p.mass};
  tp.validate();
  const double sigma_p = std::sqrt(p.mass / beta);

  const std::size_t n_e = static_cast<std::size_t>(p.grid_n);
  const double e_max = 30.0 / beta;
  std::vector<double> energies(n_e);
  for (std::size_t j = 0; j < n_e; ++j) energies[j] = (static_cast<double>(j) + 0.5) * e_max / static_cast<double>(n_e);
  const auto energy_density = energy_smearing_density(tp, energies);

  const MomentumGrid grid(momentum_points(p), 10.0 * sigma_p);
  const auto ps = grid.points();
  const auto smearing = momentum_smearing_density(tp, ps);
  const auto mb = maxwell_boltzmann(temperature, p.mass, PhysicalConstants{}, ps);
  const auto state = thermal_state(tp, grid);
  const auto evolved = time_translate_diagonal(state, 1.0, tp);

  const auto& dir = config.output_dir;
  ensure_dir(dir);
  csv::write_atomic(dir / "thermal_energy.csv", csv::render(std::vector<std::string>{"E", "density"},
                                                            std::vector<std::vector<double>>{energies, energy_density}));
  csv::write_atomic(dir / "thermal_momentum.csv",
                    csv::render(std::vector<std::string>{"p", "weight", "smearing_density", "maxwell_boltzmann"},
                                std::vector<std::vector<double>>{ps, state.weights(), smearing, mb}));

  ordered_json j;
  j["demo"] = "thermal";
  j["tool"] = "mixedframe";
  j["version"] = version();
  j["parameters"] = {{"beta", beta}, {"temperature", temperature}, {"mass", p.mass}, {"hbar", 1.0},
                     {"k_boltzmann", 1.0}, {"energy_points", n_e}, {"energy_max", e_max},
                     {"momentum_points", grid.size()}, {"p_max", grid.p_max()}};
  j["energy_density_integral"] = energy_density_integral(tp);
  j["maxwell_boltzmann_gap"] = max_abs_gap(smearing, mb);
  j["measure_identity_relative_error"] = energy_momentum_consistency(tp, 201);
  j["momentum_variance_expected"] = p.mass / beta;
  j["purity_proxy"] = purity_proxy(state);
  j["diagonal_invariance_gap"] = max_abs_gap(state.weights(), evolved.weights());
  csv::write_atomic(dir / "thermal.json", j.dump(2) + "\n");
  return j;
}

ordered_json galilei_boost_demo(const RunConfig& config) {
  const auto& p = config.params;
  const double temperature = p.effective_temperature();
  const double beta = beta_of_temperature(temperature, PhysicalConstants{});
  const GalileiParams gp{p.mass, 0.0, 1.0};
  const double centre = p.p + p.mass * p.v0;
  const double sigma_p = std::sqrt(p.mass * temperature);
  const MomentumGrid grid(momentum_points(p), std::abs(centre) + 10.0 * sigma_p);

  const auto rho = thermal_boost_density(temperature, p.v0, p.mass, PhysicalConstants{});
  const auto boosted = boost_mixed(rho, p.p, gp, grid);

  std::vector<double> reference;
  if (centre == 0.0) {
    reference = thermal_state({beta, p.mass}, grid).weights();
  } else {
    auto shifted = grid.points();
    for (auto& x : shifted) x -= centre;
    auto w = maxwell_boltzmann(temperature, p.mass, PhysicalConstants{}, shifted);
    double mass = 0.0;
    for (double x : w) mass += x;
    mass *= grid.spacing();
    for (auto& x : w) x /= mass;
    reference = std::move(w);
  }
  const double gap = max_abs_gap(boosted.weights(), reference);

  const auto& dir = config.output_dir;
  ensure_dir(dir);
  csv::write_atomic(dir / "galilei_boost.csv",
                    csv::render(std::vector<std::string>{"p", "boosted", "reference"},
                                std::vector<std::vector<double>>{grid.points(), boosted.weights(), reference}));

  ordered_json j;
  j["demo"] = "galilei-boost";
  j["tool"] = "mixedframe";
  j["version"] = version();
  j["parameters"] = {{"temperature", temperature}, {"beta", beta}, {"mass", p.mass}, {"v0", p.v0}, {"p", p.p},
                     {"hbar", 1.0}, {"k_boltzmann", 1.0}, {"momentum_points", grid.size()},
                     {"p_max", grid.p_max()}};
  j["boosted_centre"] = centre;
  j["reference"] = centre == 0.0 ? "thermal_state(beta(T))" : "Maxwell-Boltzmann shifted to p + m v0";
  j["gap"] = gap;
  csv::write_atomic(dir / "galilei_boost.json", j.dump(2) + "\n");
  return j;
}

struct SemigroupRow {
  std::string operation;
  std::string lhs;
  std::string rhs;
  GroupDensity result;
};

ordered_json semigroup_demo(const RunConfig& config) {
  const auto& p = config.params;
  const double a1 = 0.0;
  const double a2 = p.a2;
  const auto d1 = make_delta(a1);
  const auto d2 = make_delta(a2);
  const auto two_point = mix({{0.5, d1}, {0.5, d2}});
  const auto g1 = make_gaussian(1.0, 0.25);
  const auto g2 = make_gaussian(-1.0, 0.75);
  const auto gs = make_gaussian(0.0, p.sigma * p.sigma);

  std::vector<SemigroupRow> rows;
  auto binary = [&](const GroupDensity& l, const GroupDensity& r) {
    rows.push_back({"convolve", describe(l), describe(r), convolve(l, r)});
  };
  auto unary = [&](const std::string& op, const GroupDensity& x, const GroupDensity& result) {
    rows.push_back({op, describe(x), "-", result});
  };
  binary(d1, d2);
  binary(make_delta(0.0), two_point);
  binary(two_point, antipode(two_point));
  binary(d2, antipode(d2));
  binary(g1, g2);
  binary(two_point, gs);
  unary("antipode", two_point, antipode(two_point));
  unary("antipode(antipode)", g1, antipode(antipode(g1)));
  unary("classify", d2, d2);
  unary("classify", two_point, two_point);
  unary("classify", gs, gs);

  constexpr double floor = 1e-3;
  std::string table = "operation,lhs,rhs,result,pure,invertible,witness,min_modulus\n";
  ordered_json entries = ordered_json::array();
  for (const auto& row : rows) {
    const double band = invertibility_band(row.result);
    const auto verdict = is_invertible(row.result, band, floor);
    const std::string witness = verdict.witness ? csv::format(*verdict.witness) : "";
    table += row.operation + "," + row.lhs + "," + row.rhs + "," + describe(row.result) + "," +
             (is_pure(row.result) ? "true" : "false") + "," + (verdict.invertible ? "true" : "false") + "," +
             witness + "," + csv::format(verdict.min_modulus) + "\n";
    ordered_json e;
    e["operation"] = row.operation;
    e["lhs"] = row.lhs;
    e["rhs"] = row.rhs;
    e["result"] = describe(row.result);
    e["invertible"] = verdict.invertible;
    e["band"] = band;
    if (verdict.witness) e["witness"] = *verdict.witness;
    entries.push_back(std::move(e));
  }

  const auto& dir = config.output_dir;
  ensure_dir(dir);
  csv::write_atomic(dir / "semigroup.csv", table);

  ordered_json j;
  j["demo"] = "semigroup";
  j["tool"] = "mixedframe";
  j["version"] = version();
  j["parameters"] = {{"a1", a1}, {"a2", a2}, {"sigma", p.sigma}, {"floor", floor}};
  j["two_point_witness_expected"] = a2 != 0.0 ? std::numbers::pi / std::abs(a2) : 0.0;
  j["rows"] = std::move(entries);
  csv::write_atomic(dir / "semigroup.json", j.dump(2) + "\n");
  return j;
}

}  // namespace

double invertibility_band(const GroupDensity& rho) {
  std::vector<double> locations;
  for (const auto& c : rho.components()) {
    if (const auto* d = std::get_if<DiracComponent>(&c.component)) locations.push_back(d->location);
  }
  std::sort(locations.begin(), locations.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < locations.size(); ++i) gap = std::min(gap, locations[i] - locations[i - 1]);
  return std::isfinite(gap) && gap > 0.0 ? 10.0 / gap : 10.0;
}

std::string describe(const GroupDensity& rho) {
  std::string out;
  for (const auto& c : rho.components()) {
    if (!out.empty()) out += " + ";
    out += csv::format(c.weight);
    if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
      out += " d(" + csv::format(d->location) + ")";
    } else {
      const auto& g = std::get<GaussianComponent>(c.component);
      out += " g(" + csv::format(g.mean) + "; " + csv::format(g.variance) + ")";
    }
  }
  return out;
}

ordered_json run_demo(const RunConfig& config) {
  validate(config.params);
  switch (config.demo) {
    case DemoId::Thermal: return thermal_demo(config);
    case DemoId::GalileiBoost: return galilei_boost_demo(config);
    case DemoId::Semigroup: return semigroup_demo(config);
  }
  throw ConfigError("unknown demo");
}

}  // namespace mixedframe::app
