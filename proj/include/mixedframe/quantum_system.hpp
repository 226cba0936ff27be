#pragma once

// Carrier-space states on a periodic position grid and the action of group
// densities on them. A sharp translation acts as psi(x) -> psi(x + a), so a
// packet centered at 0 ends up centered at -a. A mixed translation acts as
// the mixture-of-unitaries channel integral rho(a) U(a) rho_S U(a)^dagger da,
// realized on an ensemble of wavefunctions.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "mixedframe/group_algebra.hpp"

namespace mixedframe {

using Complex = std::complex<double>;

/// Periodic grid x_j = -L/2 + j dx, j = 0..n-1, with n a power of two >= 64.
class PositionGrid {
 public:
  PositionGrid(std::size_t n_points, double extent);

  std::size_t size() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return dx_; }
  double point(std::size_t j) const { return -0.5 * extent_ + static_cast<double>(j) * dx_; }
  std::vector<double> points() const;
  /// Angular wavenumbers in FFT order.
  std::vector<double> wavenumbers() const;

  friend bool operator==(const PositionGrid&, const PositionGrid&) = default;

 private:
  std::size_t n_;
  double extent_;
  double dx_;
};

class WaveFunction {
 public:
  /// Takes amplitudes as given; throws NormalizationError unless
  /// sum |psi_j|^2 dx = 1 within 1e-9.
  WaveFunction(PositionGrid grid, std::vector<Complex> amplitudes);

  /// Rescales arbitrary nonzero amplitudes to unit norm.
  static WaveFunction normalized(PositionGrid grid, std::vector<Complex> amplitudes);

  const PositionGrid& grid() const { return grid_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  double norm() const;

 private:
  PositionGrid grid_;
  std::vector<Complex> amplitudes_;
};

/// <lhs|rhs> with the grid measure dx.
Complex inner_product(const WaveFunction& lhs, const WaveFunction& rhs);

struct MixtureTerm {
  double weight;
  WaveFunction state;
};

/// Ensemble sum_i w_i |psi_i><psi_i| over a shared grid.
class PureMixture {
 public:
  explicit PureMixture(std::vector<MixtureTerm> terms);
  static PureMixture pure(WaveFunction psi);

  const PositionGrid& grid() const { return terms_.front().state.grid(); }
  const std::vector<MixtureTerm>& terms() const { return terms_; }

 private:
  std::vector<MixtureTerm> terms_;
};

struct PositionDensity {
  PositionGrid grid;
  std::vector<double> values;
};

struct DensityMoments {
  double mass;
  double mean;
  double variance;
};

DensityMoments moments(const PositionDensity& density);

/// psi(x) = exp(-(x - center)^2 / 4 alpha^2) / sqrt(alpha sqrt(2 pi)), renormalized on
/// the grid. |psi|^2 is a Gaussian of variance alpha^2.
WaveFunction gaussian_wavepacket(const PositionGrid& grid, double alpha, double center = 0.0);

/// psi(x) -> psi(x + a), exact for band-limited periodic data.
WaveFunction translate(const WaveFunction& psi, double a);

PureMixture act_pure(double a, const PureMixture& state);

struct ChannelOptions {
  int quad_order = 64;
  std::size_t max_terms = 4096;
  /// Gauss-Hermite nodes with normalized weight below this are dropped before
  /// renormalization; they sit far out in the tails where the translation
  /// would exceed the periodic window.
  double min_node_weight = 1e-16;
};

/// Mixed translation channel. Dirac components contribute one translated
/// copy per input term; each Gaussian component contributes one copy per
/// Gauss-Hermite node.
PureMixture act_mixed(const GroupDensity& rho, const PureMixture& state,
                      const ChannelOptions& options = {});

PositionDensity position_density(const PureMixture& state);
PositionDensity position_density(const WaveFunction& psi);

/// Tr rho^2 = sum_ij w_i w_j |<psi_i|psi_j>|^2.
double purity(const PureMixture& state);

enum class Superposition { Sum, Difference };

/// N (exp(-x^2/4a^2) +- exp(-(x - a2)^2/4a^2)), normalized on the grid.
WaveFunction two_gaussian_superposition(const PositionGrid& grid, double alpha, double a2,
                                        Superposition sign);

/// N integral rho(a) psi(x + a) da: a coherent (pure) smearing of the amplitude.
/// Computed as a spectral multiplier by chi(-k), which is the exact quadrature
/// of the smearing integral for band-limited periodic psi.
WaveFunction coherently_translated(const GaussianComponent& rho, const WaveFunction& psi);
WaveFunction coherently_translated(const GroupDensity& rho, const WaveFunction& psi);

struct DensityGap {
  double sup;
  double l1;
};

DensityGap density_distance(const PositionDensity& d1, const PositionDensity& d2);

void write_csv(const PositionDensity& density, const std::filesystem::path& path);
void write_csv(const WaveFunction& psi, const std::filesystem::path& path);

}  // namespace mixedframe
