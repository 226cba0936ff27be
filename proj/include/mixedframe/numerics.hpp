#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mixedframe {

/// Pairwise (tree) summation. The split points depend only on the length,
/// so results are reproducible for a given input order.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

/// Nodes and weights of an n-point Gauss-Hermite rule for the weight e^{-t^2}.
/// Weights sum to sqrt(pi).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_hermite(int order);

/// Adaptive Gauss-Kronrod integration of f over [lo, hi].
/// Throws NumericError when the error estimate exceeds rel_tol times the L1 norm.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-10);

/// Uniform-spacing check shared by grid-taking operations.
bool is_uniform(std::span<const double> grid, double rel_tol = 1e-9);

/// sum_i |values_i| * spacing with pairwise summation; periodic/rectangle rule.
double riemann_integral(std::span<const double> values, double spacing);

/// Composite trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> values, double spacing);

}  // namespace mixedframe
