#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "mixedframe/errors.hpp"
#include "mixedframe/numerics.hpp"
#include "mixedframe/thermal.hpp"

using namespace mixedframe;
constexpr double kPi = std::numbers::pi;

TEST_CASE("parameters and grids validate") {
  CHECK_THROWS_AS((ThermalParameters{0.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ThermalParameters{1.0, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS((ThermalParameters{1.0, 1.0, {0.0, 1.0}}.validate()), DomainError);
  CHECK_NOTHROW((ThermalParameters{2.0, 0.5, {0.3, 4.0}}.validate()));
  const MomentumGrid g(11, 5.0);
  CHECK(g.spacing() == doctest::Approx(1.0));
  CHECK(g.point(5) == 0.0);
  for (std::size_t j = 0; j < 11; ++j) CHECK(g.point(j) == -g.point(10 - j));
  CHECK_THROWS(MomentumGrid(10, 5.0));
  CHECK_THROWS(MomentumGrid(11, 0.0));
}

TEST_CASE("energy smearing density") {
  const ThermalParameters tp{1.0, 1.0};
  CHECK(energy_density_integral(tp) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(energy_density_integral({0.2, 3.0, {0.5, 2.0}}) == doctest::Approx(1.0).epsilon(1e-10));
  // rho_{lambda beta}(E) = lambda rho_beta(lambda E)
  const std::vector<double> es{0.1, 0.7, 2.0, 5.5};
  std::vector<double> scaled(es);
  for (auto& e : scaled) e *= 2.0;
  const auto at2beta = energy_smearing_density({2.0, 1.0}, es);
  const auto atbeta = energy_smearing_density({1.0, 1.0}, scaled);
  for (std::size_t j = 0; j < es.size(); ++j) CHECK(at2beta[j] == doctest::Approx(2.0 * atbeta[j]).epsilon(1e-14));
  // e^{E beta / hbar} sqrt(E) rho(E) is constant
  const auto v = energy_smearing_density({1.5, 1.0}, es);
  for (std::size_t j = 0; j < es.size(); ++j) {
    CHECK(v[j] * std::exp(1.5 * es[j]) * std::sqrt(es[j]) == doctest::Approx(std::sqrt(1.5 / kPi)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(energy_smearing_density(tp, std::vector<double>{1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(energy_smearing_density(tp, std::vector<double>{-1.0}), DomainError);
}

TEST_CASE("the printed energy prefactor integrates to one half") {
  // sqrt(beta / 4 pi E hbar) e^{-E beta / hbar}: scipy quad gives 0.5
  const double printed = integrate([](double u) { return 2.0 * u * std::sqrt(1.0 / (4 * kPi * u * u)) * std::exp(-u * u); },
                                   0.0, 8.0, 1e-12);
  CHECK(printed == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("momentum smearing density") {
  for (const auto& tp : {ThermalParameters{1.0, 1.0}, ThermalParameters{0.3, 2.0, {0.5, 2.0}}}) {
    const double var = tp.mass * tp.constants.hbar / tp.beta;
    const double sd = std::sqrt(var);
    auto rho = [&](double p) { return momentum_smearing_density(tp, std::span<const double>(&p, 1))[0]; };
    CHECK(integrate(rho, -14 * sd, 14 * sd, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(integrate([&](double p) { return p * rho(p); }, -14 * sd, 14 * sd, 1e-12)) < 1e-12);
    CHECK(integrate([&](double p) { return p * p * rho(p); }, -14 * sd, 14 * sd, 1e-12) ==
          doctest::Approx(var).epsilon(1e-10));
    CHECK(rho(0.37) == rho(-0.37));
  }
  // doubling m widens by sqrt 2
  const MomentumGrid g(4001, 20.0);
  auto second_moment = [&](double m) {
    const auto w = thermal_state({1.0, m}, g).weights();
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * g.point(j) * g.point(j);
    return std::sqrt(s * g.spacing());
  };
  CHECK(second_moment(2.0) / second_moment(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("energy-momentum measure identity") {
  for (double beta : {0.1, 1.0, 7.0}) {
    for (double m : {0.5, 2.0}) CHECK(energy_momentum_consistency({beta, m}, 50) <= 1e-10);
  }
  CHECK(energy_momentum_consistency({1.0, 1.0, {0.2, 3.0}}, 10) <= 1e-10);
  CHECK_THROWS(energy_momentum_consistency({1.0, 1.0}, 9));
}

TEST_CASE("beta and temperature") {
  CHECK(beta_of_temperature(1.0, {}) == 1.0);
  CHECK(temperature_of_beta(4.0, {}) == 0.25);
  const PhysicalConstants k{1.0545718e-34, 1.380649e-23};
  for (double beta : {1e-14, 3.7e-12, 2.0}) {
    CHECK(beta_of_temperature(temperature_of_beta(beta, k), k) == doctest::Approx(beta).epsilon(1e-14));
  }
  CHECK_THROWS_AS(beta_of_temperature(0.0, {}), DomainError);
  CHECK_THROWS_AS(temperature_of_beta(-1.0, {}), DomainError);
  for (double T : {0.1, 1.0, 10.0}) {
    for (const auto& c : {PhysicalConstants{}, PhysicalConstants{0.5, 2.0}}) {
      const ThermalParameters tp{beta_of_temperature(T, c), 1.3, c};
      const MomentumGrid g(801, 10 * std::sqrt(1.3 * c.k_boltzmann * T));
      const auto ps = g.points();
      const auto a = momentum_smearing_density(tp, ps);
      const auto b = maxwell_boltzmann(T, 1.3, c, ps);
      for (std::size_t j = 0; j < ps.size(); ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12 * b[j]);
    }
  }
}

TEST_CASE("thermal state") {
  const ThermalParameters tp{1.0, 1.0};
  const MomentumGrid g(2001, 12.0);
  const auto s = thermal_state(tp, g);
  CHECK(riemann_integral(s.weights(), g.spacing()) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(s.weights()[j] == s.weights()[g.size() - 1 - j]);
  // sum w^2 dp -> 1 / (2 sqrt(pi) sigma_p) with sigma_p = 1
  CHECK(purity_proxy(s) == doctest::Approx(0.28209479177387814).epsilon(1e-10));
  CHECK(purity_proxy(thermal_state({2.0, 1.0}, g)) > purity_proxy(s));
  CHECK(purity_proxy(thermal_state({0.5, 1.0}, g)) < purity_proxy(s));
  // cold limit: all weight within a narrow window around 0
  const auto cold = thermal_state({400.0, 1.0}, g);
  double near = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (std::abs(g.point(j)) <= 0.3) near += cold.weights()[j] * g.spacing();
  }
  CHECK(near > 1.0 - 1e-9);
  CHECK_THROWS_AS(thermal_state({0.01, 1.0}, g), DomainError);
}

TEST_CASE("momentum mixtures validate") {
  const MomentumGrid g(5, 2.0);
  CHECK_THROWS_AS(MomentumMixture(g, {0.2, 0.2, 0.2, 0.2, 0.3}), NormalizationError);
  CHECK_THROWS(MomentumMixture(g, {0.5, -0.1, 0.1, 0.0, 0.5}));
  CHECK_THROWS(MomentumMixture(g, {0.5, 0.5}));
  const MomentumMixture with_atom(g, {0.0, 0.0, 0.5, 0.0, 0.0}, {{3.0, 0.5}});
  CHECK(with_atom.grid_mass() == doctest::Approx(0.5));
}

TEST_CASE("sharp time translations leave diagonal states invariant") {
  const ThermalParameters tp{0.8, 1.7};
  const MomentumGrid g(1001, 15.0);
  const auto s = thermal_state(tp, g);
  for (double t0 : {0.0, 0.4, -3.0, 1e3}) {
    const auto once = time_translate_diagonal(s, t0, tp);
    const auto there_and_back = time_translate_diagonal(once, -t0, tp);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(std::abs(once.weights()[j] - s.weights()[j]) <= 1e-15);
      CHECK(std::abs(there_and_back.weights()[j] - s.weights()[j]) <= 1e-15);
    }
  }
}

TEST_CASE("csv export") {
  const auto dir = std::filesystem::temp_directory_path() / "mixedframe_thermal_csv";
  std::filesystem::create_directories(dir);
  const MomentumGrid g(5, 2.0);
  write_csv(MomentumMixture(g, {0.0, 0.0, 0.5, 0.0, 0.0}, {{3.0, 0.5}}), dir / "m.csv");
  std::ifstream in(dir / "m.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "p,weight");
  CHECK(std::filesystem::exists(dir / "m.atoms.csv"));
  std::filesystem::remove_all(dir);
}
