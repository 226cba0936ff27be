#include "mixedframe/galilei.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "mixedframe/csv.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/numerics.hpp"
#include "mixedframe/spectral.hpp"

namespace mixedframe {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr Complex kI{0.0, 1.0};

MatrixXcd spectral_matrix(const PositionGrid& grid, const std::vector<double>& symbol) {
  const std::size_t n = grid.size();
  MatrixXcd out(n, n);
  std::vector<Complex> unit(n, Complex{});
  std::vector<Complex> multiplier(symbol.begin(), symbol.end());
  for (std::size_t l = 0; l < n; ++l) {
    unit[l] = 1.0;
    const auto col = spectral::apply_multiplier(unit, multiplier);
    unit[l] = 0.0;
    for (std::size_t j = 0; j < n; ++j) out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = col[j];
  }
  // Hermitian by construction; remove FFT roundoff asymmetry.
  return (0.5 * (out + out.adjoint())).eval();
}

VectorXcd to_vector(std::span<const Complex> v) {
  VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) out(static_cast<Eigen::Index>(j)) = v[j];
  return out;
}

std::vector<Complex> to_std(const VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

double anti_hermitian_norm(const MatrixXcd& a) { return (0.5 * (a - a.adjoint())).norm(); }

double normal_tail_outside(double mean, double sd, double lo, double hi) {
  return 0.5 * std::erfc((hi - mean) / (std::sqrt(2.0) * sd)) + 0.5 * std::erfc((mean - lo) / (std::sqrt(2.0) * sd));
}

}  // namespace

void GalileiParams::validate() const {
  if (!(std::isfinite(mass) && mass > 0.0) || !(std::isfinite(hbar) && hbar > 0.0) || !std::isfinite(time)) {
    throw DomainError("GalileiParams: mass and hbar must be positive, time finite");
  }
}

OperatorGrid::OperatorGrid(const PositionGrid& grid, const GalileiParams& params) : grid_(grid), params_(params) {
  params.validate();
  if (grid.size() > kMaxPoints) {
    throw ResourceError("build_operators: dense generators are capped at " + std::to_string(kMaxPoints) + " points");
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto xs = grid.points();
  position_ = MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) position_(j, j) = xs[static_cast<std::size_t>(j)];

  const auto k = grid.wavenumbers();
  std::vector<double> p_symbol(k.size());
  std::vector<double> h_symbol(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    p_symbol[j] = params.hbar * k[j];
    h_symbol[j] = p_symbol[j] * p_symbol[j] / (2.0 * params.mass);
  }
  momentum_symbol_.assign(p_symbol.begin(), p_symbol.end());
  hamiltonian_symbol_.assign(h_symbol.begin(), h_symbol.end());
  momentum_ = spectral_matrix(grid, p_symbol);
  hamiltonian_ = spectral_matrix(grid, h_symbol);
  boost_ = params.mass * position_ - params.time * momentum_;
}

std::vector<Complex> OperatorGrid::apply_position(std::span<const Complex> psi) const {
  std::vector<Complex> out(psi.begin(), psi.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= grid_.point(j);
  return out;
}

std::vector<Complex> OperatorGrid::apply_momentum(std::span<const Complex> psi) const {
  return spectral::apply_multiplier(psi, momentum_symbol_);
}

std::vector<Complex> OperatorGrid::apply_hamiltonian(std::span<const Complex> psi) const {
  return spectral::apply_multiplier(psi, hamiltonian_symbol_);
}

std::vector<Complex> OperatorGrid::apply_boost(std::span<const Complex> psi) const {
  auto out = apply_position(psi);
  const auto p = apply_momentum(psi);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = params_.mass * out[j] - params_.time * p[j];
  return out;
}

double OperatorGrid::hermiticity_residual() const {
  return std::max({anti_hermitian_norm(position_), anti_hermitian_norm(momentum_), anti_hermitian_norm(hamiltonian_),
                   anti_hermitian_norm(boost_)});
}

OperatorGrid build_operators(const PositionGrid& grid, const GalileiParams& params) {
  return OperatorGrid(grid, params);
}

std::vector<ResidualEntry> commutator_residuals(const OperatorGrid& ops, std::span<const WaveFunction> test_states) {
  using Apply = std::vector<Complex> (OperatorGrid::*)(std::span<const Complex>) const;
  const double hbar = ops.params().hbar;
  const double m = ops.params().mass;
  auto bracket = [&](Apply a, Apply b, std::span<const Complex> v) {
    const auto bv = (ops.*b)(v);
    const auto av = (ops.*a)(v);
    auto lhs = (ops.*a)(bv);
    const auto rhs = (ops.*b)(av);
    for (std::size_t j = 0; j < lhs.size(); ++j) lhs[j] -= rhs[j];
    return lhs;
  };
  auto norm_of = [](std::span<const Complex> v) {
    std::vector<double> sq(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) sq[j] = std::norm(v[j]);
    return std::sqrt(pairwise_sum(sq));
  };
  auto gap = [&](std::vector<Complex> lhs, std::span<const Complex> expected) {
    for (std::size_t j = 0; j < lhs.size(); ++j) lhs[j] -= expected[j];
    return norm_of(lhs);
  };
  std::vector<ResidualEntry> out{{"[x,p]=i*hbar", 0.0}, {"[p,H]=0", 0.0}, {"[K,p]=i*hbar*m", 0.0},
                                 {"[K,H]=i*hbar*p", 0.0}, {"[m,K]=0", 0.0}};
  for (const auto& state : test_states) {
    if (!(state.grid() == ops.grid())) throw InvalidArgument("commutator_residuals: state grid mismatch");
    const auto psi = state.amplitudes();
    const double norm = norm_of(psi);
    std::vector<Complex> zero(psi.size());
    std::vector<Complex> ih_psi(psi.size()), ihm_psi(psi.size()), ih_p_psi = ops.apply_momentum(psi);
    for (std::size_t j = 0; j < psi.size(); ++j) {
      ih_psi[j] = kI * hbar * psi[j];
      ihm_psi[j] = kI * hbar * m * psi[j];
      ih_p_psi[j] *= kI * hbar;
    }
    // Central element: m times the identity.
    std::vector<Complex> m_psi(psi.begin(), psi.end());
    for (auto& c : m_psi) c *= m;
    auto m_k_psi = ops.apply_boost(psi);
    for (auto& c : m_k_psi) c *= m;
    const double r[] = {
        gap(bracket(&OperatorGrid::apply_position, &OperatorGrid::apply_momentum, psi), ih_psi) / norm,
        gap(bracket(&OperatorGrid::apply_momentum, &OperatorGrid::apply_hamiltonian, psi), zero) / norm,
        gap(bracket(&OperatorGrid::apply_boost, &OperatorGrid::apply_momentum, psi), ihm_psi) / norm,
        gap(bracket(&OperatorGrid::apply_boost, &OperatorGrid::apply_hamiltonian, psi), ih_p_psi) / norm,
        gap(m_k_psi, ops.apply_boost(m_psi)) / norm,
    };
    for (std::size_t i = 0; i < out.size(); ++i) out[i].residual = std::max(out[i].residual, r[i]);
  }
  return out;
}

double canonical_phase(double phase) {
  double r = std::fmod(phase, 2.0 * std::numbers::pi);
  if (r < 0.0) r += 2.0 * std::numbers::pi;
  if (r >= 2.0 * std::numbers::pi) r = 0.0;
  return r;
}

MomentumEigenLabel boost_pure_label(double v, double p, const GalileiParams& params) {
  params.validate();
  const double m = params.mass;
  return {p + m * v, canonical_phase(-params.time * (v * p + 0.5 * m * v * v) / params.hbar)};
}

Eigen::MatrixXcd boost_matrix(double v, const OperatorGrid& ops) {
  const MatrixXcd generator = (kI * (v / ops.params().hbar)) * ops.boost();
  MatrixXcd u = generator.exp();
  if (!u.allFinite()) throw NumericError("boost_matrix: matrix exponential did not converge");
  return u;
}

std::vector<Complex> apply_boost_factorized(double v, std::span<const Complex> psi, const PositionGrid& grid,
                                            const GalileiParams& params) {
  params.validate();
  const double hbar = params.hbar;
  const double m = params.mass;
  const double t = params.time;
  const Complex global = std::polar(1.0, -t * m * v * v / (2.0 * hbar));
  const auto k = grid.wavenumbers();
  std::vector<Complex> multiplier(k.size());
  // e^{-i t v p / hbar} with p = hbar k.
  for (std::size_t j = 0; j < k.size(); ++j) multiplier[j] = global * std::polar(1.0, -t * v * k[j]);
  auto out = spectral::apply_multiplier(psi, multiplier);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::polar(1.0, m * v * grid.point(j) / hbar);
  return out;
}

double bch_residual(double v, const WaveFunction& psi, const OperatorGrid& ops) {
  if (!(psi.grid() == ops.grid())) throw InvalidArgument("bch_residual: state grid mismatch");
  const VectorXcd lhs = boost_matrix(v, ops) * to_vector(psi.amplitudes());
  const VectorXcd rhs = to_vector(apply_boost_factorized(v, psi.amplitudes(), ops.grid(), ops.params()));
  return (lhs - rhs).norm() * std::sqrt(ops.grid().spacing());
}

WaveFunction momentum_bump(const PositionGrid& grid, double p, double alpha, double hbar) {
  const auto base = gaussian_wavepacket(grid, alpha);
  std::vector<Complex> amps(base.amplitudes().begin(), base.amplitudes().end());
  for (std::size_t j = 0; j < amps.size(); ++j) amps[j] *= std::polar(1.0, p * grid.point(j) / hbar);
  return WaveFunction::normalized(grid, std::move(amps));
}

double fringe_phase(double v, double p, double alpha, const PositionGrid& grid, const GalileiParams& params,
                    BoostRoute route, const OperatorGrid* ops) {
  params.validate();
  const auto arm = momentum_bump(grid, p, alpha, params.hbar);
  const auto reference = momentum_bump(grid, p + params.mass * v, alpha, params.hbar);
  std::vector<Complex> boosted;
  if (route == BoostRoute::Factorized) {
    boosted = apply_boost_factorized(v, arm.amplitudes(), grid, params);
  } else {
    if (ops == nullptr || !(ops->grid() == grid)) {
      throw InvalidArgument("fringe_phase: dense route needs operators built on the same grid");
    }
    boosted = to_std(boost_matrix(v, *ops) * to_vector(arm.amplitudes()));
  }
  const WaveFunction boosted_arm = WaveFunction::normalized(grid, std::move(boosted));
  return canonical_phase(std::arg(inner_product(reference, boosted_arm)));
}

double relative_fringe_shift(double v, double p1, double p2, double alpha, const PositionGrid& grid,
                             const GalileiParams& params) {
  const auto b1 = momentum_bump(grid, p1, alpha, params.hbar);
  const auto b2 = momentum_bump(grid, p2, alpha, params.hbar);
  std::vector<Complex> sum(b1.amplitudes().size());
  for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = b1.amplitudes()[j] + b2.amplitudes()[j];
  const auto superposed = WaveFunction::normalized(grid, std::move(sum));
  const auto boosted = WaveFunction::normalized(grid, apply_boost_factorized(v, superposed.amplitudes(), grid, params));
  const auto r1 = momentum_bump(grid, p1 + params.mass * v, alpha, params.hbar);
  const auto r2 = momentum_bump(grid, p2 + params.mass * v, alpha, params.hbar);
  return canonical_phase(std::arg(inner_product(r2, boosted)) - std::arg(inner_product(r1, boosted)));
}

BoostDensity thermal_boost_density(double temperature, double v0, double mass, const PhysicalConstants& constants) {
  if (!(temperature > 0.0) || !(mass > 0.0)) throw DomainError("thermal_boost_density: temperature and mass must be positive");
  return {make_gaussian(v0, constants.k_boltzmann * temperature / mass)};
}

MomentumMixture boost_mixed(const BoostDensity& rho, double p, const GalileiParams& params, const MomentumGrid& grid) {
  params.validate();
  const double m = params.mass;
  const auto ps = grid.points();
  std::vector<double> weights(ps.size(), 0.0);
  std::vector<MomentumAtom> atoms;
  double gaussian_weight = 0.0;
  double outside = 0.0;
  for (const auto& c : rho.velocity.components()) {
    if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
      atoms.push_back({p + m * d->location, c.weight});
      continue;
    }
    const auto& g = std::get<GaussianComponent>(c.component);
    const double mean = p + m * g.mean;
    const double var = m * m * g.variance;
    outside += c.weight * normal_tail_outside(mean, std::sqrt(var), -grid.p_max(), grid.p_max());
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const double d = ps[j] - mean;
      weights[j] += c.weight * norm * std::exp(-0.5 * d * d / var);
    }
    gaussian_weight += c.weight;
  }
  if (outside > 1e-12) {
    throw DomainError("boost_mixed: momentum grid truncates " + csv::format(outside) + " of the boosted mass");
  }
  if (gaussian_weight > 0.0) {
    const double mass = riemann_integral(weights, grid.spacing());
    for (double& w : weights) w *= gaussian_weight / mass;
  }
  return MomentumMixture(grid, std::move(weights), std::move(atoms));
}

MomentumMixture boost_mixture(const BoostDensity& rho, const MomentumMixture& state, const GalileiParams& params) {
  params.validate();
  const auto& grid = state.grid();
  std::vector<double> weights(grid.size(), 0.0);
  std::vector<MomentumAtom> atoms;

  const double grid_mass = state.grid_mass();
  if (grid_mass > 0.0) {
    const auto k = spectral::wavenumbers(grid.size(), grid.spacing());
    std::vector<Complex> multiplier(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) multiplier[j] = characteristic_value(rho.velocity, params.mass * k[j]);
    std::vector<Complex> samples(state.weights().begin(), state.weights().end());
    const auto shifted = spectral::apply_multiplier(samples, multiplier);
    for (std::size_t j = 0; j < weights.size(); ++j) weights[j] = std::max(0.0, shifted[j].real());
    const double mass = riemann_integral(weights, grid.spacing());
    for (double& w : weights) w *= grid_mass / mass;
  }
  for (const auto& atom : state.atoms()) {
    // The atom is a sharp momentum: reuse the pure-label pushforward scaled by its probability.
    const auto part = boost_mixed(rho, atom.momentum, params, grid);
    for (std::size_t j = 0; j < weights.size(); ++j) weights[j] += atom.weight * part.weights()[j];
    for (const auto& a : part.atoms()) atoms.push_back({a.momentum, atom.weight * a.weight});
  }
  return MomentumMixture(grid, std::move(weights), std::move(atoms));
}

void write_residual_csv(const std::filesystem::path& path, std::span<const ResidualRow> rows) {
  std::string out = "check,parameter_set,residual\n";
  for (const auto& r : rows) out += r.check + "," + r.parameter_set + "," + csv::format(r.residual) + "\n";
  csv::write_atomic(path, out);
}

}  // namespace mixedframe
