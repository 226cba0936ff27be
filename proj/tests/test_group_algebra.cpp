#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mixedframe/app.hpp"
#include "mixedframe/errors.hpp"
#include "mixedframe/group_algebra.hpp"
#include "mixedframe/numerics.hpp"

using namespace mixedframe;
constexpr double kPi = std::numbers::pi;

namespace {

GroupDensity two_point(double a1, double a2) { return mix({{0.5, make_delta(a1)}, {0.5, make_delta(a2)}}); }

double weight_sum(const GroupDensity& rho) {
  double s = 0.0;
  for (const auto& c : rho.components()) s += c.weight;
  return s;
}

// Reference density by direct quadrature of a sampled density: chi(p) = int rho(a) e^{-iap} da.
std::complex<double> chi_by_quadrature(const std::function<double(double)>& density, double lo, double hi, double p) {
  const double re = integrate([&](double a) { return density(a) * std::cos(a * p); }, lo, hi, 1e-12);
  const double im = integrate([&](double a) { return -density(a) * std::sin(a * p); }, lo, hi, 1e-12);
  return {re, im};
}

}  // namespace

TEST_CASE("make_delta") {
  const auto id = make_delta(0.0);
  REQUIRE(id.components().size() == 1);
  CHECK(std::get<DiracComponent>(id.components()[0].component).location == 0.0);
  CHECK(is_pure(make_delta(2.5)));
  CHECK(approx_equal(antipode(make_delta(1.0)), make_delta(-1.0)));
  CHECK_THROWS_AS(make_delta(std::numeric_limits<double>::infinity()), InvalidArgument);
  CHECK_THROWS_AS(make_delta(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
}

TEST_CASE("construction validates and canonicalizes") {
  CHECK_THROWS_AS(make_gaussian(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_gaussian(0.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(GroupDensity({{0.5, DiracComponent{0.0}}}), NormalizationError);
  CHECK_THROWS_AS(GroupDensity({{1.5, DiracComponent{0.0}}, {-0.5, DiracComponent{1.0}}}), Error);
  CHECK_THROWS_AS(GroupDensity(std::vector<WeightedComponent>{}), NormalizationError);
  // merging within 1e-12, Diracs first
  const GroupDensity merged({{0.25, GaussianComponent{0.0, 1.0}},
                             {0.25, DiracComponent{1.0}},
                             {0.5, DiracComponent{1.0 + 1e-14}}});
  REQUIRE(merged.components().size() == 2);
  CHECK(std::holds_alternative<DiracComponent>(merged.components()[0].component));
  CHECK(merged.components()[0].weight == doctest::Approx(0.75));
  const GroupDensity apart({{0.5, DiracComponent{1.0}}, {0.5, DiracComponent{1.0 + 1e-9}}});
  CHECK(apart.components().size() == 2);
}

TEST_CASE("mix") {
  const auto tp = two_point(0.0, 2.5);
  CHECK(tp.components().size() == 2);
  CHECK(evaluate(tp, [](double a) { return a; }) == doctest::Approx(1.25));
  const auto g = make_gaussian(0.3, 0.7);
  CHECK(approx_equal(mix({{1.0, g}}), g));
  CHECK_THROWS_AS(mix({{0.5, g}, {0.4, tp}}), NormalizationError);
  CHECK_THROWS_AS(mix({{1.2, g}, {-0.2, tp}}), NormalizationError);

  // 0.3 delta_0 + 0.7 N(0,1): trapezoid integral of the sampled density is 1
  const auto m = mix({{0.3, make_delta(0.0)}, {0.7, make_gaussian(0.0, 1.0)}});
  std::vector<double> grid(4001);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = -12.0 + 24.0 * static_cast<double>(j) / 4000.0;
  const auto sampled = m.with_grid_samples(grid);
  REQUIRE(sampled.grid_samples());
  CHECK(trapezoid(sampled.grid_samples()->values, grid[1] - grid[0]) == doctest::Approx(1.0).epsilon(1e-9));
  // a window too narrow for the Gaussian cannot hold unit mass
  std::vector<double> narrow(101);
  for (std::size_t j = 0; j < narrow.size(); ++j) narrow[j] = -1.0 + 0.02 * static_cast<double>(j);
  CHECK_THROWS_AS(m.with_grid_samples(narrow), NormalizationError);
}

TEST_CASE("evaluate and counit") {
  const auto f = [](double a) { return std::cos(a) + a * a; };
  CHECK(evaluate(two_point(0.4, -1.1), f) == doctest::Approx(0.5 * f(0.4) + 0.5 * f(-1.1)));
  CHECK(evaluate(make_delta(0.0), f) == doctest::Approx(counit(f)));
  CHECK(evaluate(make_gaussian(0.0, 1.0), [](double a) { return a * a; }) == doctest::Approx(1.0).epsilon(1e-10));
  // E[cos a] for N(mu, s2) is cos(mu) e^{-s2/2}
  CHECK(evaluate(make_gaussian(0.5, 2.0), [](double a) { return std::cos(a); }) ==
        doctest::Approx(std::cos(0.5) * std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("convolve follows the symbolic rules") {
  CHECK(approx_equal(convolve(make_delta(1.5), make_delta(-0.25)), make_delta(1.25)));
  CHECK(approx_equal(convolve(make_delta(2.0), make_gaussian(1.0, 0.5)), make_gaussian(3.0, 0.5)));
  const auto gg = convolve(make_gaussian(1.0, 0.25), make_gaussian(-1.0, 0.75));
  CHECK(approx_equal(gg, make_gaussian(0.0, 1.0)));

  // grid oracle: numerically convolve the two sampled densities and compare with N(0,1)
  const double h = 0.01;
  const int half = 1200;
  auto pdf = [](double x, double m, double v) { return std::exp(-0.5 * (x - m) * (x - m) / v) / std::sqrt(2 * kPi * v); };
  double worst = 0.0;
  for (int i = -400; i <= 400; i += 8) {
    const double x = i * h;
    double acc = 0.0;
    for (int j = -half; j <= half; ++j) {
      const double a = j * h;
      acc += pdf(a, 1.0, 0.25) * pdf(x - a, -1.0, 0.75);
    }
    worst = std::max(worst, std::abs(acc * h - gg.continuous_density(x)));
  }
  CHECK(worst < 1e-10);

  const auto tp = two_point(0.0, 2.5);
  CHECK(approx_equal(convolve(make_delta(0.0), tp), tp));
  CHECK(approx_equal(convolve(tp, make_delta(0.0)), tp));
}

TEST_CASE("antipode") {
  CHECK(approx_equal(antipode(make_delta(0.7)), make_delta(-0.7)));
  CHECK(approx_equal(antipode(make_gaussian(2.0, 1.0)), make_gaussian(-2.0, 1.0)));
  const auto tp = two_point(0.3, 2.5);
  CHECK(approx_equal(antipode(antipode(tp)), tp));
  // reflecting the identity does not produce a signed zero
  CHECK(!std::signbit(std::get<DiracComponent>(antipode(make_delta(0.0)).components()[0].component).location));
}

TEST_CASE("antipode is an inverse only for pure states") {
  const double a1 = 0.0, a2 = 2.5;
  const auto tp = two_point(a1, a2);
  const auto product = convolve(tp, antipode(tp));
  const GroupDensity expected({{0.5, DiracComponent{0.0}}, {0.25, DiracComponent{a1 - a2}}, {0.25, DiracComponent{a2 - a1}}});
  CHECK(canonical_distance(product, expected) == 0.0);
  CHECK_FALSE(approx_equal(product, make_delta(0.0)));
  CHECK(approx_equal(convolve(make_delta(1.7), antipode(make_delta(1.7))), make_delta(0.0)));
  const auto g = make_gaussian(0.0, 1.0);
  CHECK(approx_equal(convolve(g, antipode(g)), make_gaussian(0.0, 2.0)));
}

TEST_CASE("is_pure") {
  CHECK(is_pure(make_delta(3.0)));
  CHECK_FALSE(is_pure(two_point(0.0, 2.5)));
  CHECK_FALSE(is_pure(make_gaussian(0.0, 1.0)));
  CHECK(is_pure(two_point(1.0, 1.0)));  // coincident points merge
}

TEST_CASE("characteristic function") {
  const auto tp = two_point(0.0, kPi);
  CHECK(std::abs(characteristic_value(tp, 1.0)) < 1e-15);
  for (double p : {-3.0, 0.1, 7.0}) CHECK(std::abs(characteristic_value(make_delta(1.3), p)) == doctest::Approx(1.0));
  for (double p : {0.0, 0.5, 1.7, 3.0}) {
    const double oracle = chi_by_quadrature(
                              [](double a) { return std::exp(-0.5 * a * a) / std::sqrt(2 * kPi); }, -12.0, 12.0, p)
                              .real();
    CHECK(characteristic_value(make_gaussian(0.0, 1.0), p).real() == doctest::Approx(oracle).epsilon(1e-10));
  }
  // shifted Gaussian including the imaginary part
  const auto g = make_gaussian(0.8, 0.3);
  const auto q = chi_by_quadrature([&](double a) { return g.continuous_density(a); }, -8.0, 9.0, 1.3);
  CHECK(std::abs(characteristic_value(g, 1.3) - q) < 1e-10);

  std::vector<double> grid(201);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = -10.0 + 0.1 * static_cast<double>(j);
  const auto cf = characteristic_function(mix({{0.3, make_delta(-1.0)}, {0.7, g}}), grid);
  for (const auto& v : cf.values) CHECK(std::abs(v) <= 1.0 + 1e-12);
  CHECK(std::abs(cf.values[100] - 1.0) < 1e-12);
  CHECK_THROWS(characteristic_function(g, std::vector<double>{0.0, 1.0, 3.0}));
}

TEST_CASE("banded invertibility") {
  const auto pure = is_invertible(make_delta(0.4), 10.0, 1e-3);
  CHECK(pure.invertible);
  CHECK_FALSE(pure.witness);

  const auto tp = is_invertible(two_point(0.0, 2.5), 10.0, 1e-3);
  CHECK_FALSE(tp.invertible);
  REQUIRE(tp.witness);
  CHECK(std::abs(*tp.witness - kPi / 2.5) < 1e-6);

  const auto g = is_invertible(make_gaussian(0.0, 1.0), 10.0, 1e-3);
  CHECK_FALSE(g.invertible);
  REQUIRE(g.witness);
  CHECK(std::abs(*g.witness) == doctest::Approx(10.0));
  // the decay crossing for floor 1e-3 is sqrt(2 ln 1000) = 3.7169221888498384
  CHECK(is_invertible(make_gaussian(0.0, 1.0), 3.71, 1e-3).invertible);
  CHECK_FALSE(is_invertible(make_gaussian(0.0, 1.0), 3.72, 1e-3).invertible);

  CHECK_THROWS_AS(is_invertible(make_delta(0.0), 0.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(is_invertible(make_delta(0.0), 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(is_invertible(make_delta(0.0), 1.0, 0.0), InvalidArgument);
}

TEST_CASE("semigroup laws on random mixtures") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 100; ++i) {
    const auto a = app::random_density(rng);
    const auto b = app::random_density(rng);
    const auto c = app::random_density(rng);
    const auto ab = convolve(a, b);
    CHECK(std::abs(weight_sum(ab) - 1.0) <= 1e-12);
    CHECK(std::abs(weight_sum(antipode(a)) - 1.0) <= 1e-12);
    CHECK(canonical_distance(convolve(ab, c), convolve(a, convolve(b, c))) <= 1e-10);
    CHECK(canonical_distance(ab, convolve(b, a)) <= 1e-10);
    CHECK(canonical_distance(convolve(make_delta(0.0), a), a) <= 1e-12);
    for (double p : {-2.0, 0.3, 4.5}) {
      CHECK(std::abs(characteristic_value(ab, p) - characteristic_value(a, p) * characteristic_value(b, p)) <= 1e-10);
    }
  }
}

TEST_CASE("bialgebra: evaluate on a product equals the coproduct double integral") {
  std::mt19937_64 rng(777);
  const auto f = [](double x) { return 1.0 / (1.0 + x * x); };
  for (int i = 0; i < 4; ++i) {
    const auto a = app::random_density(rng, {3, 2.0, 0.1, 1.0, 0.7});
    const auto b = app::random_density(rng, {3, 2.0, 0.1, 1.0, 0.7});
    // nested quadrature of the Gaussian parts on a fixed window, Diracs pointwise
    auto inner = [&](double x) {
      double s = 0.0;
      for (const auto& c : b.components()) {
        if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
          s += c.weight * f(x + d->location);
        } else {
          const auto& gc = std::get<GaussianComponent>(c.component);
          const double sd = std::sqrt(gc.variance);
          s += c.weight * integrate(
                              [&](double y) {
                                return std::exp(-0.5 * (y - gc.mean) * (y - gc.mean) / gc.variance) /
                                       std::sqrt(2 * kPi * gc.variance) * f(x + y);
                              },
                              gc.mean - 12 * sd, gc.mean + 12 * sd, 1e-12);
        }
      }
      return s;
    };
    double rhs = 0.0;
    for (const auto& c : a.components()) {
      if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
        rhs += c.weight * inner(d->location);
      } else {
        const auto& gc = std::get<GaussianComponent>(c.component);
        const double sd = std::sqrt(gc.variance);
        rhs += c.weight * integrate(
                              [&](double x) {
                                return std::exp(-0.5 * (x - gc.mean) * (x - gc.mean) / gc.variance) /
                                       std::sqrt(2 * kPi * gc.variance) * inner(x);
                              },
                              gc.mean - 12 * sd, gc.mean + 12 * sd, 1e-11);
      }
    }
    CHECK(evaluate(convolve(a, b), f) == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("text format round-trips") {
  const auto rho = mix({{0.25, make_delta(-1.5)}, {0.75, make_gaussian(0.5, 0.3)}});
  const auto text = to_text(rho);
  CHECK(text.find("dirac weight=0.25 a=-1.5") != std::string::npos);
  CHECK(text.find("gauss weight=0.75 mean=0.5 var=0.3") != std::string::npos);
  CHECK(canonical_distance(parse_group_density(text), rho) == 0.0);
  CHECK(canonical_distance(parse_group_density("# frame\n\ndirac weight=1 a=2\n"), make_delta(2.0)) == 0.0);
  CHECK_THROWS(parse_group_density("dirac weight=1 b=2\n"));
  CHECK_THROWS(parse_group_density("lorentz weight=1 a=0\n"));
  CHECK_THROWS(parse_group_density("dirac weight=0.5 a=0\n"));
}

TEST_CASE("canonical distance") {
  CHECK(canonical_distance(make_delta(0.0), make_gaussian(0.0, 1.0)) == std::numeric_limits<double>::infinity());
  CHECK(canonical_distance(make_delta(0.0), make_delta(1e-9)) == doctest::Approx(1e-9));
  CHECK_FALSE(approx_equal(make_delta(0.0), make_delta(1e-9)));
}
