#pragma once

// (1+1)-D Galilei sector: generators on a discretized line, the boost
// e^{i v K / hbar} with K = m x - t p, its BCH factorization
//   e^{i v K / hbar} = e^{i m v x / hbar} e^{-i t v p / hbar} e^{-i t m v^2 / 2 hbar},
// and mixed boosts that push a velocity density forward onto momentum.
//
// Conventions: [x, p] = i hbar, p = -i hbar d/dx, <x|p> proportional to e^{+i p x / hbar}.
// With these, e^{i v K / hbar}|p> = |p + m v> e^{-i t (v p + m v^2 / 2) / hbar}.

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mixedframe/group_algebra.hpp"
#include "mixedframe/quantum_system.hpp"
#include "mixedframe/thermal.hpp"

namespace mixedframe {

struct GalileiParams {
  double mass = 1.0;
  double time = 0.0;
  double hbar = 1.0;

  void validate() const;
};

/// Dense generator matrices on a position grid. x is diagonal, p is the
/// spectral derivative (Hermitian by construction), H = p^2 / 2m (spectral),
/// K = m x - t p. Dense matrices are verification oracles; n <= 2048.
class OperatorGrid {
 public:
  static constexpr std::size_t kMaxPoints = 2048;

  OperatorGrid(const PositionGrid& grid, const GalileiParams& params);

  const PositionGrid& grid() const { return grid_; }
  const GalileiParams& params() const { return params_; }
  const Eigen::MatrixXcd& position() const { return position_; }
  const Eigen::MatrixXcd& momentum() const { return momentum_; }
  const Eigen::MatrixXcd& hamiltonian() const { return hamiltonian_; }
  const Eigen::MatrixXcd& boost() const { return boost_; }

  /// Structured application: x by pointwise multiplication, p and H as
  /// Fourier multipliers. Agrees with the dense matrices to roundoff.
  std::vector<Complex> apply_position(std::span<const Complex> psi) const;
  std::vector<Complex> apply_momentum(std::span<const Complex> psi) const;
  std::vector<Complex> apply_hamiltonian(std::span<const Complex> psi) const;
  std::vector<Complex> apply_boost(std::span<const Complex> psi) const;

  /// Largest Frobenius norm of (A - A^dagger)/2 over the four generators;
  /// an upper bound on the spectral norm of the anti-Hermitian parts.
  double hermiticity_residual() const;

 private:
  PositionGrid grid_;
  GalileiParams params_;
  Eigen::MatrixXcd position_;
  Eigen::MatrixXcd momentum_;
  Eigen::MatrixXcd hamiltonian_;
  Eigen::MatrixXcd boost_;
  std::vector<Complex> momentum_symbol_;
  std::vector<Complex> hamiltonian_symbol_;
};

OperatorGrid build_operators(const PositionGrid& grid, const GalileiParams& params);

struct ResidualEntry {
  std::string check;
  double residual;
};

/// max over states of ||(AB - BA) psi - rhs psi|| / ||psi|| for
/// [x,p] = i hbar, [p,H] = 0, [K,p] = i hbar m, [K,H] = i hbar p, [m,K] = 0,
/// using the structured operator application.
std::vector<ResidualEntry> commutator_residuals(const OperatorGrid& ops, std::span<const WaveFunction> test_states);

struct MomentumEigenLabel {
  double momentum;
  double phase;  // in [0, 2 pi)
};

double canonical_phase(double phase);

/// Sharp boost of |p>: label p + m v and phase -t (v p + m v^2 / 2) / hbar.
MomentumEigenLabel boost_pure_label(double v, double p, const GalileiParams& params);

/// Dense e^{i v K / hbar} (Pade scaling-and-squaring).
Eigen::MatrixXcd boost_matrix(double v, const OperatorGrid& ops);

/// Right-hand side of the BCH factorization applied factor by factor.
std::vector<Complex> apply_boost_factorized(double v, std::span<const Complex> psi, const PositionGrid& grid,
                                            const GalileiParams& params);

/// || e^{i v K / hbar} psi - (factorized) psi || with the grid norm.
double bch_residual(double v, const WaveFunction& psi, const OperatorGrid& ops);

/// Gaussian packet of width alpha carrying mean momentum p: a momentum bump
/// of width hbar / (2 alpha) standing in for |p>.
WaveFunction momentum_bump(const PositionGrid& grid, double p, double alpha, double hbar);

enum class BoostRoute { Factorized, DenseExponential };

/// Phase of the interference term between the boosted arm e^{ivK/hbar}|bump_p>
/// and an unboosted reference bump at p + m v. For symmetric bumps it equals
/// the label phase exactly, global phase included.
double fringe_phase(double v, double p, double alpha, const PositionGrid& grid, const GalileiParams& params,
                    BoostRoute route = BoostRoute::Factorized, const OperatorGrid* ops = nullptr);

/// Relative phase between two boosted momentum bumps p1, p2 in one superposition.
double relative_fringe_shift(double v, double p1, double p2, double alpha, const PositionGrid& grid,
                             const GalileiParams& params);

/// A group density over the boost velocity v.
struct BoostDensity {
  GroupDensity velocity;
};

/// sqrt(m / 2 pi k_B T) e^{-m (v - v0)^2 / 2 k_B T}.
BoostDensity thermal_boost_density(double temperature, double v0, double mass, const PhysicalConstants& constants);

/// rho'_S = integral dv rho(v) |p + m v><p + m v|. Gaussian components are
/// sampled on the grid, Dirac components become sharp atoms. Throws
/// DomainError when more than 1e-12 of the mass falls outside the grid.
MomentumMixture boost_mixed(const BoostDensity& rho, double p, const GalileiParams& params, const MomentumGrid& grid);

/// Mixed boost of an arbitrary momentum-diagonal state (grid part handled by
/// a spectral multiplier chi_rho(m k)).
MomentumMixture boost_mixture(const BoostDensity& rho, const MomentumMixture& state, const GalileiParams& params);

struct ResidualRow {
  std::string check;
  std::string parameter_set;
  double residual;
};

/// CSV `check,parameter_set,residual`.
void write_residual_csv(const std::filesystem::path& path, std::span<const ResidualRow> rows);

}  // namespace mixedframe
