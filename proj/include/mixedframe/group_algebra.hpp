#pragma once

// States on the group of one-dimensional translations.
//
// A GroupDensity is a probability density on the group parameter a, stored
// symbolically as a finite convex combination of Dirac and Gaussian
// components. Dirac components are the pure states (sharp translations);
// everything else is mixed. Convolution is the product induced by the
// coproduct Delta f(a, a') = f(a + a'), delta(a) is the identity, and the
// antipode reflects a -> -a. Only single-Dirac densities have an inverse,
// so the set of densities is a commutative semigroup (a bialgebra without
// antipode on the dual side).

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mixedframe {

struct DiracComponent {
  double location = 0.0;
};

struct GaussianComponent {
  double mean = 0.0;
  double variance = 1.0;
};

using Component = std::variant<DiracComponent, GaussianComponent>;

struct WeightedComponent {
  double weight = 1.0;
  Component component;
};

/// Density values on a uniform a-grid; Dirac components appear as a single
/// spike whose trapezoid mass equals the component weight.
struct GridSamples {
  std::vector<double> grid;
  std::vector<double> values;
};

class GroupDensity {
 public:
  /// Validates (positive weights summing to 1 within 1e-12, finite
  /// parameters, positive variances) and canonicalizes: coincident
  /// components are merged and the list is sorted, Diracs first.
  explicit GroupDensity(std::vector<WeightedComponent> components);

  const std::vector<WeightedComponent>& components() const { return components_; }
  const std::optional<GridSamples>& grid_samples() const { return samples_; }

  /// Copy carrying samples on the given uniform grid. Throws
  /// NormalizationError when the sampled density does not integrate to 1
  /// within 1e-9 (grid too coarse or too narrow).
  GroupDensity with_grid_samples(std::span<const double> grid) const;

  /// Pointwise density of the Gaussian part (Diracs contribute nothing).
  double continuous_density(double a) const;

 private:
  std::vector<WeightedComponent> components_;
  std::optional<GridSamples> samples_;
};

/// Sharp translation by a0: the density delta(a - a0).
GroupDensity make_delta(double a0);
GroupDensity make_gaussian(double mean, double variance);

/// Convex combination; weights must be positive and sum to 1 within 1e-12.
GroupDensity mix(std::span<const std::pair<double, GroupDensity>> parts);
GroupDensity mix(std::initializer_list<std::pair<double, GroupDensity>> parts);

/// rho(f) = integral f(a) rho(a) da. Gaussian components are integrated
/// adaptively over mean +- 10 sigma to relative tolerance 1e-10.
double evaluate(const GroupDensity& rho, const std::function<double(double)>& f);

/// Counit: evaluation at the identity.
double counit(const std::function<double(double)>& f);

/// Product of states: the density of a + a' for independent a ~ rho1, a' ~ rho2.
GroupDensity convolve(const GroupDensity& rho1, const GroupDensity& rho2);

/// Reflection a -> -a.
GroupDensity antipode(const GroupDensity& rho);

/// True iff the canonical form is exactly one Dirac component.
bool is_pure(const GroupDensity& rho);

/// Largest weight/parameter gap between matched components of the canonical
/// forms; +infinity when the component structure differs.
double canonical_distance(const GroupDensity& lhs, const GroupDensity& rhs, double match_tol = 1e-8);

/// Component-wise match of canonical forms within tol.
bool approx_equal(const GroupDensity& lhs, const GroupDensity& rhs, double tol = 1e-10);

struct CharacteristicFunction {
  std::vector<double> dual_grid;
  std::vector<std::complex<double>> values;
};

/// chi(p) = integral rho(a) e^{-iap} da.
std::complex<double> characteristic_value(const GroupDensity& rho, double p);
CharacteristicFunction characteristic_function(const GroupDensity& rho,
                                               std::span<const double> dual_grid);

struct InvertibilityVerdict {
  bool invertible = false;
  /// argmin of |chi| over [-band, band]; absent for a single Dirac.
  std::optional<double> witness;
  double min_modulus = 1.0;
};

/// Banded invertibility test: invertible iff min_{|p| <= band} |chi(p)| >= floor.
/// Among near-tied minima the witness with the smallest |p| is reported,
/// positive before negative.
InvertibilityVerdict is_invertible(const GroupDensity& rho, double band, double floor);

/// Line format, one component per line:
///   dirac weight=<w> a=<a>
///   gauss weight=<w> mean=<m> var=<v>
/// Blank lines and '#' comments are ignored.
std::string to_text(const GroupDensity& rho);
GroupDensity parse_group_density(std::string_view text);

}  // namespace mixedframe
