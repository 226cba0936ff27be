#include "mixedframe/thermal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mixedframe/csv.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/numerics.hpp"

namespace mixedframe {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double momentum_variance(const ThermalParameters& tp) {
  return tp.mass * tp.constants.hbar / tp.beta;
}

}  // namespace

void ThermalParameters::validate() const {
  if (!positive_finite(beta) || !positive_finite(mass) || !positive_finite(constants.hbar) ||
      !positive_finite(constants.k_boltzmann)) {
    throw DomainError("thermal parameters: beta, mass, hbar and k_B must be finite and positive");
  }
}

MomentumGrid::MomentumGrid(std::size_t n_points, double p_max) : n_(n_points), p_max_(p_max), dp_(0.0) {
  if (n_points < 3 || n_points % 2 == 0) throw InvalidArgument("MomentumGrid: n_points must be odd and >= 3");
  if (!positive_finite(p_max)) throw InvalidArgument("MomentumGrid: p_max must be positive");
  dp_ = 2.0 * p_max / static_cast<double>(n_points - 1);
}

double MomentumGrid::point(std::size_t j) const {
  // Mirror the lower half so the grid is exactly symmetric.
  const std::size_t mid = n_ / 2;
  if (j == mid) return 0.0;
  if (j < mid) return -static_cast<double>(mid - j) * dp_;
  return static_cast<double>(j - mid) * dp_;
}

std::vector<double> MomentumGrid::points() const {
  std::vector<double> ps(n_);
  for (std::size_t j = 0; j < n_; ++j) ps[j] = point(j);
  return ps;
}

MomentumMixture::MomentumMixture(MomentumGrid grid, std::vector<double> weights, std::vector<MomentumAtom> atoms)
    : grid_(grid), weights_(std::move(weights)), atoms_(std::move(atoms)) {
  if (weights_.size() != grid_.size()) throw InvalidArgument("MomentumMixture: weight count != grid size");
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw NormalizationError("MomentumMixture: weights must be nonnegative");
  }
  double total = grid_mass();
  for (const auto& a : atoms_) {
    if (!(a.weight > 0.0) || !std::isfinite(a.momentum)) throw NormalizationError("MomentumMixture: bad atom");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw NormalizationError("MomentumMixture: total probability " + std::to_string(total) + " != 1");
  }
}

double MomentumMixture::grid_mass() const { return riemann_integral(weights_, grid_.spacing()); }

std::vector<double> energy_smearing_density(const ThermalParameters& tp, std::span<const double> energies) {
  tp.validate();
  const double hbar = tp.constants.hbar;
  std::vector<double> out;
  out.reserve(energies.size());
  for (double e : energies) {
    if (!positive_finite(e)) throw DomainError("energy_smearing_density: energies must be positive");
    out.push_back(std::sqrt(tp.beta / (std::numbers::pi * e * hbar)) * std::exp(-e * tp.beta / hbar));
  }
  return out;
}

double energy_density_integral(const ThermalParameters& tp) {
  tp.validate();
  // E = u^2: rho(E) dE = 2 u rho(u^2) du = 2 sqrt(beta / (pi hbar)) e^{-beta u^2 / hbar} du.
  const double c = tp.beta / tp.constants.hbar;
  const double prefactor = 2.0 * std::sqrt(c / std::numbers::pi);
  const double u_max = std::sqrt(60.0 / c);  // e^{-60} tail
  return integrate([&](double u) { return prefactor * std::exp(-c * u * u); }, 0.0, u_max, 1e-12);
}

std::vector<double> momentum_smearing_density(const ThermalParameters& tp, std::span<const double> momenta) {
  tp.validate();
  const double var = momentum_variance(tp);
  const double norm = std::sqrt(tp.beta / (2.0 * tp.mass * tp.constants.hbar * std::numbers::pi));
  std::vector<double> out;
  out.reserve(momenta.size());
  for (double p : momenta) out.push_back(norm * std::exp(-0.5 * p * p / var));
  return out;
}

std::vector<double> maxwell_boltzmann(double temperature, double mass, const PhysicalConstants& constants,
                                      std::span<const double> momenta) {
  if (!positive_finite(temperature) || !positive_finite(mass)) {
    throw DomainError("maxwell_boltzmann: temperature and mass must be positive");
  }
  const double mkt = mass * constants.k_boltzmann * temperature;
  const double norm = std::sqrt(1.0 / (2.0 * std::numbers::pi * mkt));
  std::vector<double> out;
  out.reserve(momenta.size());
  for (double p : momenta) out.push_back(norm * std::exp(-p * p / (2.0 * mkt)));
  return out;
}

double energy_momentum_consistency(const ThermalParameters& tp, int n_check) {
  tp.validate();
  if (n_check < 10) throw InvalidArgument("energy_momentum_consistency: n_check must be >= 10");
  const double width = 8.0 * std::sqrt(momentum_variance(tp));
  std::vector<double> ps;
  for (int j = 0; j < n_check; ++j) {
    const double p = -width + (j + 0.5) * 2.0 * width / n_check;
    if (p != 0.0) ps.push_back(p);
  }
  std::vector<double> energies;
  std::vector<double> mirrored;
  for (double p : ps) {
    energies.push_back(p * p / (2.0 * tp.mass));
    mirrored.push_back(-p);
  }
  const auto rho_e = energy_smearing_density(tp, energies);
  const auto rho_p = momentum_smearing_density(tp, ps);
  const auto rho_m = momentum_smearing_density(tp, mirrored);
  double worst = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double lhs = rho_e[i] * std::abs(ps[i]) / tp.mass;
    const double rhs = rho_p[i] + rho_m[i];
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return worst;
}

double beta_of_temperature(double temperature, const PhysicalConstants& constants) {
  if (!positive_finite(temperature)) throw DomainError("beta_of_temperature: temperature must be positive");
  return constants.hbar / (constants.k_boltzmann * temperature);
}

double temperature_of_beta(double beta, const PhysicalConstants& constants) {
  if (!positive_finite(beta)) throw DomainError("temperature_of_beta: beta must be positive");
  return constants.hbar / (constants.k_boltzmann * beta);
}

MomentumMixture thermal_state(const ThermalParameters& tp, const MomentumGrid& grid) {
  tp.validate();
  const double required = 8.0 * std::sqrt(momentum_variance(tp));
  if (grid.p_max() < required * (1.0 - 1e-12)) {
    throw DomainError("thermal_state: p_max must be at least 8 sqrt(m hbar / beta) = " + std::to_string(required));
  }
  auto weights = momentum_smearing_density(tp, grid.points());
  const double mass = riemann_integral(weights, grid.spacing());
  for (double& w : weights) w /= mass;
  return MomentumMixture(grid, std::move(weights));
}

MomentumMixture time_translate_diagonal(const MomentumMixture& state, double t0, const ThermalParameters& tp) {
  tp.validate();
  const double hbar = tp.constants.hbar;
  auto phase = [&](double p) { return std::polar(1.0, (p * p / (2.0 * tp.mass)) * t0 / hbar); };
  const auto ps = state.grid().points();
  std::vector<double> weights(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const auto u = phase(ps[j]);
    weights[j] = (u * std::complex<double>(state.weights()[j]) * std::conj(u)).real();
  }
  std::vector<MomentumAtom> atoms;
  for (const auto& a : state.atoms()) {
    const auto u = phase(a.momentum);
    atoms.push_back({a.momentum, (u * std::complex<double>(a.weight) * std::conj(u)).real()});
  }
  return MomentumMixture(state.grid(), std::move(weights), std::move(atoms));
}

double purity_proxy(const MomentumMixture& state) {
  std::vector<double> sq;
  sq.reserve(state.weights().size());
  for (double w : state.weights()) sq.push_back(w * w);
  return riemann_integral(sq, state.grid().spacing());
}

void write_csv(const MomentumMixture& state, const std::filesystem::path& path) {
  const std::vector<std::string> header{"p", "weight"};
  const std::vector<std::vector<double>> cols{state.grid().points(), state.weights()};
  csv::write_atomic(path, csv::render(header, cols));
  if (!state.atoms().empty()) {
    std::vector<double> ps, ws;
    for (const auto& a : state.atoms()) {
      ps.push_back(a.momentum);
      ws.push_back(a.weight);
    }
    auto atoms_path = path;
    atoms_path.replace_extension(".atoms.csv");
    const std::vector<std::string> atom_header{"p", "probability"};
    const std::vector<std::vector<double>> atom_cols{ps, ws};
    csv::write_atomic(atoms_path, csv::render(atom_header, atom_cols));
  }
}

}  // namespace mixedframe
