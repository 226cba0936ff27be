#pragma once

// Smeared time translations in the momentum representation. Sharp time
// translations multiply |p> by a phase and leave every momentum-diagonal
// state invariant; smearing the energy with the density below turns a sharp
// momentum ensemble into the Boltzmann (thermal) state with beta = hbar/(k_B T).

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace mixedframe {

struct PhysicalConstants {
  double hbar = 1.0;
  double k_boltzmann = 1.0;
};

struct ThermalParameters {
  double beta;  // units of time
  double mass;
  PhysicalConstants constants{};

  /// Throws DomainError unless beta, mass and both constants are finite and positive.
  void validate() const;
};

/// Symmetric grid p_j = -p_max + j dp, dp = 2 p_max / (n - 1), n odd so p = 0 is a node.
class MomentumGrid {
 public:
  MomentumGrid(std::size_t n_points, double p_max);

  std::size_t size() const { return n_; }
  double p_max() const { return p_max_; }
  double spacing() const { return dp_; }
  double point(std::size_t j) const;
  std::vector<double> points() const;

  friend bool operator==(const MomentumGrid&, const MomentumGrid&) = default;

 private:
  std::size_t n_;
  double p_max_;
  double dp_;
};

/// A sharp momentum |p><p| carried as a label with its probability.
struct MomentumAtom {
  double momentum;
  double weight;
};

/// Momentum-diagonal state: a density on the grid plus optional sharp atoms.
/// sum_j weights_j dp + sum atoms = 1 within 1e-9, all weights >= 0.
class MomentumMixture {
 public:
  MomentumMixture(MomentumGrid grid, std::vector<double> weights, std::vector<MomentumAtom> atoms = {});

  const MomentumGrid& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<MomentumAtom>& atoms() const { return atoms_; }
  /// Probability carried by the grid part.
  double grid_mass() const;

 private:
  MomentumGrid grid_;
  std::vector<double> weights_;
  std::vector<MomentumAtom> atoms_;
};

/// Normalized energy density sqrt(beta / (pi E hbar)) e^{-E beta / hbar} on E > 0.
std::vector<double> energy_smearing_density(const ThermalParameters& tp, std::span<const double> energies);

/// integral_0^inf of the energy density, computed with u = sqrt(E).
double energy_density_integral(const ThermalParameters& tp);

/// sqrt(beta / (2 m hbar pi)) e^{-p^2 beta / (2 m hbar)}.
std::vector<double> momentum_smearing_density(const ThermalParameters& tp, std::span<const double> momenta);

/// sqrt(1 / (2 pi m k_B T)) e^{-p^2 / (2 m k_B T)}.
std::vector<double> maxwell_boltzmann(double temperature, double mass, const PhysicalConstants& constants,
                                      std::span<const double> momenta);

/// Max relative error of rho_E(p^2/2m) |p|/m against rho_p(p) + rho_p(-p)
/// over n_check nonzero momenta spanning +-8 momentum standard deviations.
double energy_momentum_consistency(const ThermalParameters& tp, int n_check);

double beta_of_temperature(double temperature, const PhysicalConstants& constants);
double temperature_of_beta(double beta, const PhysicalConstants& constants);

/// Thermal momentum state; requires p_max >= 8 sqrt(m hbar / beta).
MomentumMixture thermal_state(const ThermalParameters& tp, const MomentumGrid& grid);

/// Applies U(E, t0) = e^{i E t0 / hbar} on both sides of each diagonal entry.
MomentumMixture time_translate_diagonal(const MomentumMixture& state, double t0, const ThermalParameters& tp);

/// sum_j w_j^2 dp for the grid part.
double purity_proxy(const MomentumMixture& state);

void write_csv(const MomentumMixture& state, const std::filesystem::path& path);

}  // namespace mixedframe
