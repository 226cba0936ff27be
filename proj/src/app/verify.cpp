#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "mixedframe/app.hpp"
#include "mixedframe/csv.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/galilei.hpp"
#include "mixedframe/group_algebra.hpp"
#include "mixedframe/numerics.hpp"
#include "mixedframe/quantum_system.hpp"
#include "mixedframe/thermal.hpp"

namespace mixedframe::app {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 0x5eed2024;

class Collector {
 public:
  explicit Collector(double scale) : scale_(scale) {}

  // Passes when residual <= tolerance (or < for strict orderings).
  void add(std::string name, std::string parameters, double residual, double tolerance, bool strict = false) {
    const double tol = tolerance * scale_;
    const bool ok = std::isfinite(residual) && (strict ? residual < tol : residual <= tol);
    checks_.push_back({std::move(name), std::move(parameters), residual, tol, ok});
  }

  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  double scale_;
  std::vector<CheckResult> checks_;
};

class Params {
 public:
  Params& operator()(const std::string& key, double value) {
    append(key, csv::format(value));
    return *this;
  }
  Params& operator()(const std::string& key, const std::string& value) {
    append(key, value);
    return *this;
  }
  operator std::string() const { return text_; }

 private:
  void append(const std::string& key, const std::string& value) {
    if (!text_.empty()) text_ += ';';
    text_ += key + '=' + value;
  }
  std::string text_;
};

double weight_defect(const GroupDensity& rho) {
  double sum = 0.0;
  for (const auto& c : rho.components()) sum += c.weight;
  return std::abs(sum - 1.0);
}

double sup_gap(std::span<const double> a, std::span<const double> b) {
  double gap = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) gap = std::max(gap, std::abs(a[j] - b[j]));
  return gap;
}

double gaussian_pdf(double x, double mean, double variance) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / variance) / std::sqrt(2.0 * kPi * variance);
}

double wrapped_phase_gap(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * kPi));
}

// ---------------------------------------------------------------- group algebra

void group_algebra_checks(Collector& out) {
  std::mt19937_64 rng(kSeed);
  const int n = 50;
  const auto identity = make_delta(0.0);
  double closure = 0.0, assoc = 0.0, comm = 0.0, ident = 0.0, invol = 0.0, morph = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto a = random_density(rng);
    const auto b = random_density(rng);
    const auto c = random_density(rng);
    const auto ab = convolve(a, b);
    closure = std::max({closure, weight_defect(ab), weight_defect(antipode(a)),
                        weight_defect(mix({{0.25, a}, {0.75, b}}))});
    assoc = std::max(assoc, canonical_distance(convolve(ab, c), convolve(a, convolve(b, c))));
    comm = std::max(comm, canonical_distance(ab, convolve(b, a)));
    ident = std::max({ident, canonical_distance(convolve(identity, a), a), canonical_distance(convolve(a, identity), a)});
    invol = std::max(invol, canonical_distance(antipode(antipode(a)), a));
    for (int k = -20; k <= 20; ++k) {
      const double p = 0.25 * k;
      morph = std::max(morph, std::abs(characteristic_value(ab, p) -
                                       characteristic_value(a, p) * characteristic_value(b, p)));
    }
  }
  const std::string sample = Params()("random_mixtures", n)("max_components", 5);
  out.add("group_algebra.normalization_closure", sample, closure, 1e-12);
  out.add("group_algebra.associativity", sample, assoc, 1e-10);
  out.add("group_algebra.commutativity", sample, comm, 1e-10);
  out.add("group_algebra.identity", sample, ident, 1e-10);
  out.add("group_algebra.antipode_involution", sample, invol, 1e-10);
  out.add("group_algebra.characteristic_morphism", Params()("random_mixtures", n)("p_range", "[-5;5]"), morph, 1e-10);

  // evaluate on the product against the nested double integral
  double bialgebra = 0.0;
  const auto f = [](double x) { return std::cos(0.7 * x) + std::exp(-x * x / 8.0); };
  const RandomDensitySpec small{3, 2.0, 0.1, 1.0, 0.5};
  for (int i = 0; i < 6; ++i) {
    const auto a = random_density(rng, small);
    const auto b = random_density(rng, small);
    const double lhs = evaluate(convolve(a, b), f);
    const double rhs = evaluate(a, [&](double x) { return evaluate(b, [&](double y) { return f(x + y); }); });
    bialgebra = std::max(bialgebra, std::abs(lhs - rhs));
  }
  out.add("group_algebra.bialgebra_double_integral", Params()("pairs", 6)("f", "cos(0.7a)+exp(-a^2/8)"),
          bialgebra, 1e-8);

  double pure_inverse = 0.0;
  for (double a0 : {-3.0, 0.0, 0.4, 2.5}) {
    const auto d = make_delta(a0);
    pure_inverse = std::max(pure_inverse, canonical_distance(convolve(d, antipode(d)), identity));
  }
  out.add("group_algebra.antipode_inverts_pure", Params()("a0", "{-3;0;0.4;2.5}"), pure_inverse, 1e-12);

  const double a1 = 0.0, a2 = 2.5;
  const auto two_point = mix({{0.5, make_delta(a1)}, {0.5, make_delta(a2)}});
  const auto three_term = GroupDensity({{0.5, DiracComponent{0.0}},
                                        {0.25, DiracComponent{a1 - a2}},
                                        {0.25, DiracComponent{a2 - a1}}});
  out.add("group_algebra.two_point_antipode_product", Params()("a1", a1)("a2", a2),
          canonical_distance(convolve(two_point, antipode(two_point)), three_term), 1e-12);
  double non_pure_inverted = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto rho = random_density(rng);
    const bool inverted = approx_equal(convolve(rho, antipode(rho)), identity);
    if (inverted != is_pure(rho)) non_pure_inverted += 1.0;
  }
  out.add("group_algebra.antipode_inverts_only_pure", Params()("random_mixtures", 20), non_pure_inverted, 0.0);

  // banded invertibility verdicts
  double wrong = 0.0;
  int cases = 0;
  auto judge = [&](const GroupDensity& rho, bool expected) {
    const auto v = is_invertible(rho, invertibility_band(rho), 1.0 - 1e-6);
    if (v.invertible != expected) wrong += 1.0;
    ++cases;
  };
  std::uniform_real_distribution<double> loc(-4.0, 4.0);
  for (int i = 0; i < 10; ++i) judge(make_delta(loc(rng)), true);
  for (int i = 0; i < 20; ++i) {
    RandomDensitySpec spec;
    spec.gaussian_probability = i < 10 ? 0.0 : 0.5;
    auto rho = random_density(rng, spec);
    while (is_pure(rho)) rho = random_density(rng, spec);
    judge(rho, false);
  }
  for (int i = 0; i < 10; ++i) judge(make_gaussian(loc(rng), 0.05 + 0.1 * i), false);
  out.add("group_algebra.invertibility_verdicts", Params()("cases", cases)("floor", 1.0 - 1e-6), wrong, 0.0);

  const auto verdict = is_invertible(two_point, invertibility_band(two_point), 1e-3);
  const double witness_gap = verdict.witness ? std::abs(*verdict.witness - kPi / (a2 - a1)) : 1.0;
  out.add("group_algebra.two_point_witness", Params()("a1", a1)("a2", a2)("band", 10.0 / (a2 - a1))("floor", 1e-3),
          verdict.invertible ? 1.0 : witness_gap, 1e-6);
}

// ---------------------------------------------------------------- quantum system

std::vector<double> packet_density(const std::vector<double>& xs, double centre, double variance) {
  std::vector<double> out(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) out[j] = gaussian_pdf(xs[j], centre, variance);
  return out;
}

// Closed-form density of act_mixed(rho, packet(alpha)): each component is
// reflected by the psi(x + a) convention and widened by alpha^2.
std::vector<double> channel_oracle(const GroupDensity& rho, const std::vector<double>& xs, double alpha) {
  std::vector<double> out(xs.size(), 0.0);
  for (const auto& c : rho.components()) {
    double mean = 0.0, variance = alpha * alpha;
    if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
      mean = -d->location;
    } else {
      const auto& g = std::get<GaussianComponent>(c.component);
      mean = -g.mean;
      variance += g.variance;
    }
    for (std::size_t j = 0; j < xs.size(); ++j) out[j] += c.weight * gaussian_pdf(xs[j], mean, variance);
  }
  return out;
}

double dense_purity(const PureMixture& state) {
  const auto n = static_cast<Eigen::Index>(state.grid().size());
  const double dx = state.grid().spacing();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& t : state.terms()) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = t.state.amplitudes()[static_cast<std::size_t>(j)];
    rho += t.weight * dx * v * v.adjoint();
  }
  return (rho * rho).trace().real();
}

PureMixture random_state(std::mt19937_64& rng, const PositionGrid& grid) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> centre(-2.0, 2.0), width(0.5, 1.0), weight(0.1, 1.0);
  const int k = count(rng);
  std::vector<double> ws(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& w : ws) total += (w = weight(rng));
  std::vector<MixtureTerm> terms;
  for (int i = 0; i < k; ++i) {
    terms.push_back({ws[static_cast<std::size_t>(i)] / total, gaussian_wavepacket(grid, width(rng), centre(rng))});
  }
  return PureMixture(std::move(terms));
}

void quantum_checks(Collector& out, const Parameters& p) {
  const PositionGrid grid(static_cast<std::size_t>(p.grid_n), p.extent);
  const auto xs = grid.points();
  const std::string g = Params()("N", p.grid_n)("L", p.extent);
  ChannelOptions options;
  options.quad_order = p.quad_order;
  const double alpha = p.alpha;
  const auto psi = gaussian_wavepacket(grid, alpha);
  const auto pure_psi = PureMixture::pure(psi);
  double norm_defect = 0.0;
  auto track = [&](const PositionDensity& d) {
    norm_defect = std::max(norm_defect, std::abs(riemann_integral(d.values, d.grid.spacing()) - 1.0));
    return d;
  };

  double smear_mixed = 0.0, smear_coherent = 0.0;
  for (double a0 : {p.a0, p.a0 + 1.5}) {
    const GaussianComponent frame{-a0, p.sigma * p.sigma};
    const auto mixed = track(position_density(act_mixed(GroupDensity({{1.0, frame}}), pure_psi, options)));
    smear_mixed = std::max(smear_mixed, sup_gap(mixed.values, packet_density(xs, a0, frame.variance + alpha * alpha)));
    const auto coherent = track(position_density(coherently_translated(frame, psi)));
    smear_coherent = std::max(smear_coherent,
                              sup_gap(coherent.values, packet_density(xs, a0, 0.5 * (frame.variance + 2 * alpha * alpha))));
  }
  const std::string smear = Params()("N", p.grid_n)("L", p.extent)("alpha", alpha)("sigma", p.sigma)("a0", p.a0)(
      "quad_order", p.quad_order);
  out.add("quantum_system.gaussian_smear_mixed", smear, smear_mixed, 1e-6);
  out.add("quantum_system.gaussian_smear_coherent", smear, smear_coherent, 1e-6);

  std::mt19937_64 rng(kSeed + 1);
  double compat = 0.0;
  const RandomDensitySpec frames{4, 3.0, 0.05, 1.0, 0.5};
  for (int i = 0; i < 10; ++i) {
    const auto rho = random_density(rng, frames);
    const auto d = track(position_density(act_mixed(rho, pure_psi, options)));
    compat = std::max(compat, sup_gap(d.values, channel_oracle(rho, xs, alpha)));
  }
  out.add("quantum_system.channel_compatibility", Params()("N", p.grid_n)("L", p.extent)("alpha", alpha)(
                                                       "random_frames", 10),
          compat, 1e-6);

  double increase = -1.0, delta_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto rho = random_density(rng, frames);
    const auto s = random_state(rng, grid);
    const double before = purity(s);
    increase = std::max(increase, purity(act_mixed(rho, s, options)) - before);
    std::uniform_real_distribution<double> loc(-3.0, 3.0);
    delta_gap = std::max(delta_gap, std::abs(purity(act_mixed(make_delta(loc(rng)), s, options)) - before));
  }
  out.add("quantum_system.purity_non_increase", Params()("N", p.grid_n)("pairs", 20), increase, 1e-9);
  out.add("quantum_system.purity_sharp_equality", Params()("N", p.grid_n)("pairs", 20), delta_gap, 1e-10);

  {
    const PositionGrid small(256, p.extent);
    std::mt19937_64 local(kSeed + 2);
    double gram = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto s = act_mixed(random_density(local, {2, 2.0, 0.1, 0.5, 0.0}), random_state(local, small), options);
      gram = std::max(gram, std::abs(purity(s) - dense_purity(s)));
    }
    out.add("quantum_system.purity_dense_oracle", Params()("N", 256)("L", p.extent)("cases", 3), gram, 1e-8);
  }

  {
    const auto rho1 = mix({{0.5, make_delta(0.0)}, {0.5, make_delta(-1.0)}});
    const auto rho2 = make_gaussian(0.5, 0.3);
    const auto seq = track(position_density(act_mixed(rho1, act_mixed(rho2, pure_psi, options), options)));
    const auto joint = track(position_density(act_mixed(convolve(rho1, rho2), pure_psi, options)));
    out.add("quantum_system.composition_convolution", g, density_distance(seq, joint).sup, 1e-6);
  }

  double roundtrip = 0.0;
  for (double a : {0.3, -2.5, 7.0}) {
    const auto back = translate(translate(psi, a), -a);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      roundtrip = std::max(roundtrip, std::abs(back.amplitudes()[j] - psi.amplitudes()[j]));
    }
  }
  out.add("quantum_system.translate_roundtrip", g, roundtrip, 1e-12);

  // variance sweep and the localization inequality
  double var_mixed = 0.0, var_coherent = 0.0, ordering = -1.0;
  const PositionGrid sweep_grid(static_cast<std::size_t>(p.grid_n), std::max(p.extent, 40.0));
  for (double s : {0.5, 0.75, 1.0, 2.0}) {
    for (double a : {0.5, 0.75, 1.0, 2.0}) {
      const auto packet = gaussian_wavepacket(sweep_grid, a);
      const GaussianComponent frame{0.0, s * s};
      const auto vm = moments(track(position_density(act_mixed(GroupDensity({{1.0, frame}}),
                                                               PureMixture::pure(packet), options))))
                          .variance;
      const auto vc = moments(track(position_density(coherently_translated(frame, packet)))).variance;
      var_mixed = std::max(var_mixed, std::abs(vm - (s * s + a * a)));
      var_coherent = std::max(var_coherent, std::abs(vc - 0.5 * (s * s + 2 * a * a)));
      ordering = std::max(ordering, vc - vm);
    }
  }
  const std::string sweep = Params()("sigma", "{0.5;0.75;1;2}")("alpha", "{0.5;0.75;1;2}")("N", p.grid_n);
  out.add("quantum_system.variance_mixed", sweep, var_mixed, 1e-6);
  out.add("quantum_system.variance_coherent", sweep, var_coherent, 1e-6);
  out.add("quantum_system.localization_inequality", sweep, ordering, 0.0, true);

  // figure midpoint ordering
  {
    const auto frame = mix({{0.5, make_delta(0.0)}, {0.5, make_delta(-p.a2)}});
    const auto mixed = track(position_density(act_mixed(frame, pure_psi, options)));
    const auto sum = track(position_density(two_gaussian_superposition(grid, alpha, p.a2, Superposition::Sum)));
    const auto diff =
        track(position_density(two_gaussian_superposition(grid, alpha, p.a2, Superposition::Difference)));
    const auto mid = static_cast<std::size_t>(std::lround((0.5 * p.a2 + 0.5 * grid.extent()) / grid.spacing()));
    const std::string fig = Params()("alpha", alpha)("a2", p.a2)("x", grid.point(mid));
    out.add("quantum_system.midpoint_ordering", fig,
            std::max(mixed.values[mid] - sum.values[mid], diff.values[mid] - mixed.values[mid]), 0.0, true);
    out.add("quantum_system.difference_midpoint_zero", fig, diff.values[mid], 1e-10);
  }

  out.add("quantum_system.density_normalization", g, norm_defect, 1e-8);
}

// ---------------------------------------------------------------- thermal

void thermal_checks(Collector& out) {
  const PhysicalConstants unit{};
  const PhysicalConstants odd{0.5, 2.0};
  double energy = 0.0, momentum = 0.0, dictionary = 0.0, measure = 0.0, invariance = 0.0, state_norm = 0.0,
         variance = 0.0;
  for (const auto& k : {unit, odd}) {
    for (double T : {0.1, 1.0, 10.0}) {
      for (double m : {0.5, 1.0, 3.0}) {
        const ThermalParameters tp{beta_of_temperature(T, k), m, k};
        energy = std::max(energy, std::abs(energy_density_integral(tp) - 1.0));
        const double sd = std::sqrt(m * k.hbar / tp.beta);
        const double mass = integrate(
            [&](double x) { return momentum_smearing_density(tp, std::span<const double>(&x, 1))[0]; }, -12 * sd,
            12 * sd, 1e-12);
        momentum = std::max(momentum, std::abs(mass - 1.0));
        const MomentumGrid grid(1001, 10.0 * sd);
        const auto ps = grid.points();
        const auto rho = momentum_smearing_density(tp, ps);
        const auto mb = maxwell_boltzmann(T, m, k, ps);
        for (std::size_t j = 0; j < ps.size(); ++j) {
          if (mb[j] > 0.0) dictionary = std::max(dictionary, std::abs(rho[j] - mb[j]) / mb[j]);
        }
        measure = std::max(measure, energy_momentum_consistency(tp, 101));
        const auto state = thermal_state(tp, grid);
        state_norm = std::max(state_norm, std::abs(riemann_integral(state.weights(), grid.spacing()) - 1.0));
        double second = 0.0;
        for (std::size_t j = 0; j < ps.size(); ++j) second += state.weights()[j] * ps[j] * ps[j];
        second *= grid.spacing();
        variance = std::max(variance, std::abs(second / (m * k.hbar / tp.beta) - 1.0));
        for (double t0 : {0.0, 0.3, -2.0, 17.5}) {
          const auto moved = time_translate_diagonal(time_translate_diagonal(state, t0, tp), -t0, tp);
          const auto once = time_translate_diagonal(state, t0, tp);
          for (std::size_t j = 0; j < ps.size(); ++j) {
            invariance = std::max({invariance, std::abs(once.weights()[j] - state.weights()[j]),
                                   std::abs(moved.weights()[j] - state.weights()[j])});
          }
        }
      }
    }
  }
  const std::string sweep = Params()("T", "{0.1;1;10}")("m", "{0.5;1;3}")("constants", "{(1;1);(0.5;2)}");
  out.add("thermal.energy_normalization", sweep, energy, 1e-8);
  out.add("thermal.momentum_normalization", sweep, momentum, 1e-10);
  out.add("thermal.dictionary_maxwell_boltzmann", sweep, dictionary, 1e-12);
  out.add("thermal.measure_identity", sweep, measure, 1e-10);
  out.add("thermal.diagonal_invariance", sweep, invariance, 1e-15);
  out.add("thermal.state_normalization", sweep, state_norm, 1e-9);
  out.add("thermal.momentum_variance", sweep, variance, 1e-9);

  double monotone = -1.0;
  double previous = 0.0;
  bool first = true;
  for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const ThermalParameters tp{beta, 1.0};
    const MomentumGrid grid(2001, 10.0 * std::sqrt(1.0 / 0.25));
    const double proxy = purity_proxy(thermal_state(tp, grid));
    if (!first) monotone = std::max(monotone, previous - proxy);
    previous = proxy;
    first = false;
  }
  out.add("thermal.purity_monotone_in_beta", Params()("beta", "{0.25;0.5;1;2;4}"), monotone, 0.0, true);
}

// ---------------------------------------------------------------- galilei

void galilei_checks(Collector& out, const Parameters& p, std::vector<ResidualRow>& rows) {
  const auto n = static_cast<std::size_t>(std::min(p.grid_n, 1024));
  const PositionGrid grid(n, 40.0);
  const std::string g = Params()("N", static_cast<double>(n))("L", 40.0);

  std::vector<WaveFunction> states{gaussian_wavepacket(grid, 1.0), gaussian_wavepacket(grid, 1.5, 0.5)};
  double herm = 0.0;
  std::map<std::string, double> worst;
  for (const auto& [m, t] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {2.0, 1.0}}) {
    const auto ops = build_operators(grid, {m, t, 1.0});
    herm = std::max(herm, ops.hermiticity_residual());
    for (const auto& e : commutator_residuals(ops, states)) {
      worst[e.check] = std::max(worst[e.check], e.residual);
      rows.push_back({e.check, Params()("N", static_cast<double>(n))("m", m)("t", t), e.residual});
    }
  }
  out.add("galilei.hermiticity", g, herm, 1e-10);
  for (const auto& [check, residual] : worst) {
    double tol = 1e-6;
    if (check == "[p,H]=0") tol = 1e-12;
    if (check == "[m,K]=0") tol = 0.0;
    out.add("galilei.commutator " + check, g, residual, tol);
  }

  const auto psi = gaussian_wavepacket(grid, 1.0);
  double bch = 0.0, bch_identity = 0.0;
  for (double t : {0.0, 0.5, 1.0}) {
    for (double m : {0.5, 1.0, 2.0}) {
      const auto ops = build_operators(grid, {m, t, 1.0});
      bch_identity = std::max(bch_identity, bch_residual(0.0, psi, ops));
      for (double v : {-2.0, -1.0, 0.3, 1.2}) {
        const double r = bch_residual(v, psi, ops);
        bch = std::max(bch, r);
        rows.push_back({"bch", Params()("N", static_cast<double>(n))("v", v)("t", t)("m", m), r});
      }
    }
  }
  out.add("galilei.bch_sweep", Params()("N", static_cast<double>(n))("v", "{-2;-1;0.3;1.2}")("t", "{0;0.5;1}")(
                                   "m", "{0.5;1;2}"),
          bch, 1e-6);
  out.add("galilei.bch_identity_boost", g, bch_identity, 1e-12);

  double fringe = 0.0, fringe_dense = 0.0;
  struct Case {
    double m, t, p, v;
  };
  for (const auto& c : {Case{1.0, 1.0, 2.0, 3.0}, Case{0.5, 0.5, -1.0, 1.2}, Case{2.0, 1.0, 0.5, -1.0}}) {
    const GalileiParams gp{c.m, c.t, 1.0};
    const double label = boost_pure_label(c.v, c.p, gp).phase;
    const double r = wrapped_phase_gap(fringe_phase(c.v, c.p, 2.0, grid, gp), label);
    fringe = std::max(fringe, r);
    const auto ops = build_operators(grid, gp);
    fringe_dense = std::max(
        fringe_dense, wrapped_phase_gap(fringe_phase(c.v, c.p, 2.0, grid, gp, BoostRoute::DenseExponential, &ops), label));
    rows.push_back({"fringe_phase", Params()("m", c.m)("t", c.t)("p", c.p)("v", c.v), r});
  }
  out.add("galilei.fringe_phase_factorized", g, fringe, 1e-4);
  out.add("galilei.fringe_phase_dense", g, fringe_dense, 1e-4);

  {
    const GalileiParams gp{1.0, 1.0, 1.0};
    const double v = 3.0, p1 = 2.0, p2 = -3.0;
    const double expected = canonical_phase(-gp.time * v * (p2 - p1) / gp.hbar);
    out.add("galilei.relative_fringe_shift", Params()("v", v)("p1", p1)("p2", p2)("t", 1.0),
            wrapped_phase_gap(relative_fringe_shift(v, p1, p2, 2.0, grid, gp), expected), 1e-4);
  }

  double composition_label = 0.0;
  for (double v : {-1.0, 0.5, 2.0}) {
    const GalileiParams gp{1.5, 0.7, 1.0};
    const auto once = boost_pure_label(v, 0.3, gp);
    const auto twice = boost_pure_label(0.8, once.momentum, gp);
    composition_label =
        std::max(composition_label, std::abs(twice.momentum - boost_pure_label(v + 0.8, 0.3, gp).momentum));
  }
  out.add("galilei.label_composition", Params()("m", 1.5), composition_label, 1e-12);

  double thermal_gap = 0.0;
  for (double T : {0.5, 1.0, 2.0}) {
    for (double m : {0.5, 1.0, 2.0}) {
      const double p0 = 1.25;
      const double v0 = -p0 / m;
      const double sd = std::sqrt(m * T);
      const MomentumGrid mg(2049, 10.0 * sd);
      const auto boosted = boost_mixed(thermal_boost_density(T, v0, m, {}), p0, {m, 0.0, 1.0}, mg);
      const auto reference = thermal_state({beta_of_temperature(T, {}), m}, mg);
      thermal_gap = std::max(thermal_gap, sup_gap(boosted.weights(), reference.weights()));
    }
  }
  out.add("galilei.thermal_boost_matches_thermal_state", Params()("T", "{0.5;1;2}")("m", "{0.5;1;2}")("p+mv0", 0.0),
          thermal_gap, 1e-9);

  {
    const GalileiParams gp{1.0, 0.0, 1.0};
    const MomentumGrid mg(4097, 30.0);
    const BoostDensity r1{make_gaussian(0.5, 0.4)};
    const BoostDensity r2{make_gaussian(-1.0, 0.6)};
    const auto joint = boost_mixed({convolve(r1.velocity, r2.velocity)}, 0.2, gp, mg);
    const auto sequential = boost_mixture(r1, boost_mixed(r2, 0.2, gp, mg), gp);
    out.add("galilei.boost_composition", Params()("grid", 4097.0)("p_max", 30.0), sup_gap(joint.weights(), sequential.weights()),
            1e-8);
  }
}

}  // namespace

GroupDensity random_density(std::mt19937_64& rng, const RandomDensitySpec& spec) {
  std::uniform_int_distribution<int> count(1, spec.max_components);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::uniform_real_distribution<double> location(-spec.location_range, spec.location_range);
  std::uniform_real_distribution<double> variance(spec.min_variance, spec.max_variance);
  std::bernoulli_distribution gaussian(spec.gaussian_probability);
  const int k = count(rng);
  std::vector<WeightedComponent> parts;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = weight(rng);
    total += w;
    if (gaussian(rng)) {
      const double mean = location(rng);
      parts.push_back({w, GaussianComponent{mean, variance(rng)}});
    } else {
      parts.push_back({w, DiracComponent{location(rng)}});
    }
  }
  for (auto& c : parts) c.weight /= total;
  return GroupDensity(std::move(parts));
}

namespace {

VerifyReport collect(const Parameters& params, double tolerance_scale, std::vector<ResidualRow>& rows) {
  validate(params);
  Collector out(tolerance_scale);
  group_algebra_checks(out);
  quantum_checks(out, params);
  thermal_checks(out);
  galilei_checks(out, params, rows);
  return {out.take()};
}

}  // namespace

VerifyReport collect_checks(const Parameters& params, double tolerance_scale) {
  std::vector<ResidualRow> rows;
  return collect(params, tolerance_scale, rows);
}

VerifyReport run_verify(const RunConfig& config) {
  std::vector<ResidualRow> rows;
  const auto report = collect(config.params, config.tolerance_scale, rows);

  const auto& dir = config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::string text = "check,parameters,residual,tolerance,pass\n";
  for (const auto& c : report.checks) {
    text += c.name + "," + c.parameters + "," + csv::format(c.residual) + "," + csv::format(c.tolerance) + "," +
            (c.passed ? "true" : "false") + "\n";
  }
  csv::write_atomic(dir / "verify_report.csv", text);
  write_residual_csv(dir / "galilei_residuals.csv", rows);
  return report;
}

}  // namespace mixedframe::app
