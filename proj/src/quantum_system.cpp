#include "mixedframe/quantum_system.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "mixedframe/csv.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/numerics.hpp"
#include "mixedframe/spectral.hpp"

namespace mixedframe {

namespace {

constexpr double kNormTol = 1e-9;

double squared_norm(std::span<const Complex> amps, double dx) {
  std::vector<double> mod2(amps.size());
  std::transform(amps.begin(), amps.end(), mod2.begin(), [](Complex c) { return std::norm(c); });
  return pairwise_sum(mod2) * dx;
}

// Translate by each shift reusing one forward transform of psi.
std::vector<WaveFunction> translated_copies(const WaveFunction& psi, std::span<const double> shifts) {
  const auto& grid = psi.grid();
  for (double a : shifts) {
    if (!std::isfinite(a) || std::abs(a) >= 0.5 * grid.extent()) {
      throw DomainError("translate: shift " + std::to_string(a) + " exceeds half the periodic window");
    }
  }
  const auto modes = spectral::forward(psi.amplitudes());
  const auto k = grid.wavenumbers();
  std::vector<WaveFunction> out;
  out.reserve(shifts.size());
  std::vector<Complex> shifted(modes.size());
  for (double a : shifts) {
    for (std::size_t j = 0; j < modes.size(); ++j) shifted[j] = modes[j] * std::polar(1.0, k[j] * a);
    out.emplace_back(grid, spectral::inverse(shifted));
  }
  return out;
}

double gaussian_amplitude(double x, double alpha) {
  return std::exp(-x * x / (4.0 * alpha * alpha)) / std::sqrt(alpha * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

PositionGrid::PositionGrid(std::size_t n_points, double extent)
    : n_(n_points), extent_(extent), dx_(extent / static_cast<double>(n_points)) {
  if (n_points < 64 || !std::has_single_bit(n_points)) {
    throw InvalidArgument("PositionGrid: n_points must be a power of two >= 64");
  }
  if (!std::isfinite(extent) || !(extent > 0.0)) throw InvalidArgument("PositionGrid: extent must be positive");
}

std::vector<double> PositionGrid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = point(j);
  return xs;
}

std::vector<double> PositionGrid::wavenumbers() const { return spectral::wavenumbers(n_, dx_); }

WaveFunction::WaveFunction(PositionGrid grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size()) throw InvalidArgument("WaveFunction: amplitude count != grid size");
  const double n2 = squared_norm(amplitudes_, grid_.spacing());
  if (!(std::abs(n2 - 1.0) <= kNormTol)) {
    throw NormalizationError("WaveFunction: squared norm " + std::to_string(n2) + " != 1");
  }
}

WaveFunction WaveFunction::normalized(PositionGrid grid, std::vector<Complex> amplitudes) {
  if (amplitudes.size() != grid.size()) throw InvalidArgument("WaveFunction: amplitude count != grid size");
  const double n2 = squared_norm(amplitudes, grid.spacing());
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DomainError("WaveFunction: cannot normalize the zero function");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& c : amplitudes) c *= scale;
  return WaveFunction(grid, std::move(amplitudes));
}

double WaveFunction::norm() const { return std::sqrt(squared_norm(amplitudes_, grid_.spacing())); }

Complex inner_product(const WaveFunction& lhs, const WaveFunction& rhs) {
  if (!(lhs.grid() == rhs.grid())) throw InvalidArgument("inner_product: grid mismatch");
  const auto a = lhs.amplitudes();
  const auto b = rhs.amplitudes();
  std::vector<Complex> prod(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) prod[j] = std::conj(a[j]) * b[j];
  return pairwise_sum(std::span<const Complex>(prod)) * lhs.grid().spacing();
}

PureMixture::PureMixture(std::vector<MixtureTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw NormalizationError("PureMixture: no terms");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!(t.weight > 0.0) || !std::isfinite(t.weight)) throw NormalizationError("PureMixture: weights must be positive");
    if (!(t.state.grid() == terms_.front().state.grid())) throw InvalidArgument("PureMixture: terms must share one grid");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > kNormTol) throw NormalizationError("PureMixture: weights must sum to 1");
}

PureMixture PureMixture::pure(WaveFunction psi) { return PureMixture({{1.0, std::move(psi)}}); }

DensityMoments moments(const PositionDensity& density) {
  const auto xs = density.grid.points();
  const double dx = density.grid.spacing();
  const std::size_t n = xs.size();
  std::vector<double> buf(n);
  const double mass = pairwise_sum(density.values) * dx;
  for (std::size_t j = 0; j < n; ++j) buf[j] = xs[j] * density.values[j];
  const double mean = pairwise_sum(buf) * dx / mass;
  for (std::size_t j = 0; j < n; ++j) buf[j] = (xs[j] - mean) * (xs[j] - mean) * density.values[j];
  const double variance = pairwise_sum(buf) * dx / mass;
  return {mass, mean, variance};
}

WaveFunction gaussian_wavepacket(const PositionGrid& grid, double alpha, double center) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw DomainError("gaussian_wavepacket: alpha must be positive");
  if (!(8.0 * alpha < grid.extent())) throw DomainError("gaussian_wavepacket: 8 alpha must be below the grid extent");
  std::vector<Complex> amps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) amps[j] = gaussian_amplitude(grid.point(j) - center, alpha);
  return WaveFunction::normalized(grid, std::move(amps));
}

WaveFunction translate(const WaveFunction& psi, double a) {
  const double shifts[] = {a};
  return std::move(translated_copies(psi, shifts).front());
}

PureMixture act_pure(double a, const PureMixture& state) {
  std::vector<MixtureTerm> out;
  out.reserve(state.terms().size());
  for (const auto& t : state.terms()) out.push_back({t.weight, translate(t.state, a)});
  return PureMixture(std::move(out));
}

PureMixture act_mixed(const GroupDensity& rho, const PureMixture& state, const ChannelOptions& options) {
  std::vector<double> shift_weights;
  std::vector<double> shifts;
  std::optional<QuadratureRule> rule;
  for (const auto& c : rho.components()) {
    if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
      shift_weights.push_back(c.weight);
      shifts.push_back(d->location);
      continue;
    }
    if (options.quad_order < 16) throw InvalidArgument("act_mixed: quad_order must be at least 16");
    if (!rule) rule = gauss_hermite(options.quad_order);
    const auto& g = std::get<GaussianComponent>(c.component);
    const double scale = std::sqrt(2.0 * g.variance);
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      const double w = rule->weights[i] / std::sqrt(std::numbers::pi);
      if (w < options.min_node_weight) continue;
      shift_weights.push_back(c.weight * w);
      shifts.push_back(g.mean + scale * rule->nodes[i]);
    }
  }
  const std::size_t count = shifts.size() * state.terms().size();
  if (count > options.max_terms) {
    throw ResourceError("act_mixed: " + std::to_string(count) + " output terms exceed the cap of " +
                        std::to_string(options.max_terms));
  }
  std::vector<double> weights;
  std::vector<WaveFunction> states;
  weights.reserve(count);
  states.reserve(count);
  for (const auto& t : state.terms()) {
    auto copies = translated_copies(t.state, shifts);
    for (std::size_t s = 0; s < shifts.size(); ++s) {
      weights.push_back(t.weight * shift_weights[s]);
      states.push_back(std::move(copies[s]));
    }
  }
  const double total = pairwise_sum(weights);
  std::vector<MixtureTerm> terms;
  terms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) terms.push_back({weights[i] / total, std::move(states[i])});
  return PureMixture(std::move(terms));
}

PositionDensity position_density(const PureMixture& state) {
  const auto& grid = state.grid();
  const auto& terms = state.terms();
  PositionDensity out{grid, std::vector<double>(grid.size())};
  std::vector<double> contrib(terms.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      contrib[i] = terms[i].weight * std::norm(terms[i].state.amplitudes()[j]);
    }
    out.values[j] = pairwise_sum(contrib);
  }
  return out;
}

PositionDensity position_density(const WaveFunction& psi) {
  PositionDensity out{psi.grid(), std::vector<double>(psi.grid().size())};
  const auto amps = psi.amplitudes();
  for (std::size_t j = 0; j < amps.size(); ++j) out.values[j] = std::norm(amps[j]);
  return out;
}

double purity(const PureMixture& state) {
  const auto& terms = state.terms();
  const std::size_t n = terms.size();
  std::vector<double> parts;
  parts.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    parts.push_back(terms[i].weight * terms[i].weight * std::norm(inner_product(terms[i].state, terms[i].state)));
    for (std::size_t j = i + 1; j < n; ++j) {
      parts.push_back(2.0 * terms[i].weight * terms[j].weight *
                      std::norm(inner_product(terms[i].state, terms[j].state)));
    }
  }
  return pairwise_sum(parts);
}

WaveFunction two_gaussian_superposition(const PositionGrid& grid, double alpha, double a2, Superposition sign) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw DomainError("two_gaussian_superposition: alpha must be positive");
  if (sign == Superposition::Difference && a2 == 0.0) {
    throw DomainError("two_gaussian_superposition: difference of coincident Gaussians is the zero function");
  }
  const double s = sign == Superposition::Sum ? 1.0 : -1.0;
  std::vector<Complex> amps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    amps[j] = std::exp(-x * x / (4.0 * alpha * alpha)) + s * std::exp(-(x - a2) * (x - a2) / (4.0 * alpha * alpha));
  }
  return WaveFunction::normalized(grid, std::move(amps));
}

WaveFunction coherently_translated(const GroupDensity& rho, const WaveFunction& psi) {
  const auto k = psi.grid().wavenumbers();
  std::vector<Complex> multiplier(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) multiplier[j] = characteristic_value(rho, -k[j]);
  return WaveFunction::normalized(psi.grid(), spectral::apply_multiplier(psi.amplitudes(), multiplier));
}

WaveFunction coherently_translated(const GaussianComponent& rho, const WaveFunction& psi) {
  return coherently_translated(make_gaussian(rho.mean, rho.variance), psi);
}

DensityGap density_distance(const PositionDensity& d1, const PositionDensity& d2) {
  if (!(d1.grid == d2.grid) || d1.values.size() != d2.values.size()) {
    throw InvalidArgument("density_distance: densities live on different grids");
  }
  std::vector<double> gap(d1.values.size());
  double sup = 0.0;
  for (std::size_t j = 0; j < gap.size(); ++j) {
    gap[j] = std::abs(d1.values[j] - d2.values[j]);
    sup = std::max(sup, gap[j]);
  }
  return {sup, pairwise_sum(gap) * d1.grid.spacing()};
}

void write_csv(const PositionDensity& density, const std::filesystem::path& path) {
  const std::vector<std::string> header{"x", "density"};
  const std::vector<std::vector<double>> cols{density.grid.points(), density.values};
  csv::write_atomic(path, csv::render(header, cols));
}

void write_csv(const WaveFunction& psi, const std::filesystem::path& path) {
  std::vector<double> re, im;
  for (const auto& c : psi.amplitudes()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  const std::vector<std::string> header{"x", "re", "im"};
  const std::vector<std::vector<double>> cols{psi.grid().points(), re, im};
  csv::write_atomic(path, csv::render(header, cols));
}

}  // namespace mixedframe
