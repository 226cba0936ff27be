#include "mixedframe/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "mixedframe/errors.hpp"

namespace mixedframe {

namespace {

constexpr std::size_t kPairwiseLeaf = 8;

template <typename T>
T tree_sum(std::span<const T> values) {
  if (values.size() <= kPairwiseLeaf) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return tree_sum(values); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) {
  return tree_sum(values);
}

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw InvalidArgument("gauss_hermite: order must be positive");
  const auto n = static_cast<std::size_t>(order);
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t m = (n + 1) / 2;
  std::vector<double> roots(m);  // positive roots, largest first
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    // Initial guesses for the largest roots first.
    if (i == 0) {
      const double nn = static_cast<double>(2 * n + 1);
      z = std::sqrt(nn) - 1.85575 * std::pow(nn, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * roots[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * roots[1];
    } else {
      z = 2.0 * z - roots[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / jd) * p2 - std::sqrt((jd - 1.0) / jd) * p3;
      }
      pp = std::sqrt(2.0 * static_cast<double>(n)) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericError("gauss_hermite: Newton iteration did not converge");
    roots[i] = z;
    // Stored ascending.
    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / (pp * pp);
  }
  if (n % 2 == 1) rule.nodes[m - 1] = 0.0;
  return rule;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  double l1 = 0.0;
  const double value = gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > rel_tol * std::max(l1, 1e-300) + 1e-300) {
    throw NumericError("integrate: adaptive quadrature did not reach the requested tolerance");
  }
  return value;
}

bool is_uniform(std::span<const double> grid, double rel_tol) {
  if (grid.size() < 2) return grid.size() == 1 && std::isfinite(grid[0]);
  const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  if (!(step > 0.0) || !std::isfinite(step)) return false;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - grid[i - 1] - step) > rel_tol * step) return false;
  }
  return true;
}

double riemann_integral(std::span<const double> values, double spacing) {
  return pairwise_sum(values) * spacing;
}

double trapezoid(std::span<const double> values, double spacing) {
  if (values.size() < 2) return 0.0;
  return (pairwise_sum(values) - 0.5 * (values.front() + values.back())) * spacing;
}

}  // namespace mixedframe
