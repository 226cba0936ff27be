#include "mixedframe/group_algebra.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <charconv>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mixedframe/errors.hpp"
#include "mixedframe/numerics.hpp"

namespace mixedframe {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kMergeTol = 1e-12;

bool is_dirac(const WeightedComponent& c) {
  return std::holds_alternative<DiracComponent>(c.component);
}

void validate(const WeightedComponent& c) {
  if (!std::isfinite(c.weight) || !(c.weight > 0.0)) {
    throw NormalizationError("group density: component weights must be positive and finite");
  }
  if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
    if (!std::isfinite(d->location)) throw InvalidArgument("dirac component: non-finite location");
  } else {
    const auto& g = std::get<GaussianComponent>(c.component);
    if (!std::isfinite(g.mean) || !std::isfinite(g.variance) || !(g.variance > 0.0)) {
      throw InvalidArgument("gaussian component: mean must be finite and variance positive");
    }
  }
}

bool same_component(const Component& a, const Component& b) {
  if (a.index() != b.index()) return false;
  if (const auto* da = std::get_if<DiracComponent>(&a)) {
    return std::abs(da->location - std::get<DiracComponent>(b).location) < kMergeTol;
  }
  const auto& ga = std::get<GaussianComponent>(a);
  const auto& gb = std::get<GaussianComponent>(b);
  return std::abs(ga.mean - gb.mean) < kMergeTol && std::abs(ga.variance - gb.variance) < kMergeTol;
}

bool canonical_less(const WeightedComponent& lhs, const WeightedComponent& rhs) {
  if (lhs.component.index() != rhs.component.index()) {
    return lhs.component.index() < rhs.component.index();
  }
  if (const auto* dl = std::get_if<DiracComponent>(&lhs.component)) {
    return dl->location < std::get<DiracComponent>(rhs.component).location;
  }
  const auto& gl = std::get<GaussianComponent>(lhs.component);
  const auto& gr = std::get<GaussianComponent>(rhs.component);
  return gl.mean != gr.mean ? gl.mean < gr.mean : gl.variance < gr.variance;
}

double gaussian_pdf(double a, const GaussianComponent& g) {
  const double d = a - g.mean;
  return std::exp(-0.5 * d * d / g.variance) / std::sqrt(2.0 * std::numbers::pi * g.variance);
}

std::complex<double> component_chi(const Component& c, double p) {
  if (const auto* d = std::get_if<DiracComponent>(&c)) {
    return std::polar(1.0, -d->location * p);
  }
  const auto& g = std::get<GaussianComponent>(c);
  return std::polar(std::exp(-0.5 * g.variance * p * p), -g.mean * p);
}

Component reflect(const Component& c) {
  if (const auto* d = std::get_if<DiracComponent>(&c)) return DiracComponent{0.0 - d->location};
  const auto& g = std::get<GaussianComponent>(c);
  return GaussianComponent{0.0 - g.mean, g.variance};
}

Component add(const Component& a, const Component& b) {
  const auto* da = std::get_if<DiracComponent>(&a);
  const auto* db = std::get_if<DiracComponent>(&b);
  if (da && db) return DiracComponent{da->location + db->location};
  if (da) {
    const auto& g = std::get<GaussianComponent>(b);
    return GaussianComponent{g.mean + da->location, g.variance};
  }
  const auto& ga = std::get<GaussianComponent>(a);
  if (db) return GaussianComponent{ga.mean + db->location, ga.variance};
  const auto& gb = std::get<GaussianComponent>(b);
  return GaussianComponent{ga.mean + gb.mean, ga.variance + gb.variance};
}

double location_of(const Component& c) {
  if (const auto* d = std::get_if<DiracComponent>(&c)) return d->location;
  return std::get<GaussianComponent>(c).mean;
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view token, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw InvalidArgument("group density text: bad number for " + std::string(what) + ": '" +
                          std::string(token) + "'");
  }
  return v;
}

}  // namespace

GroupDensity::GroupDensity(std::vector<WeightedComponent> components) {
  if (components.empty()) throw NormalizationError("group density: no components");
  double total = 0.0;
  for (const auto& c : components) {
    validate(c);
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw NormalizationError("group density: weights sum to " + std::to_string(total) +
                             ", expected 1");
  }
  for (auto& c : components) {
    auto it = std::find_if(components_.begin(), components_.end(),
                           [&](const WeightedComponent& m) { return same_component(m.component, c.component); });
    if (it != components_.end()) {
      it->weight += c.weight;
    } else {
      components_.push_back(std::move(c));
    }
  }
  std::stable_sort(components_.begin(), components_.end(), canonical_less);
  std::vector<double> weights;
  weights.reserve(components_.size());
  for (const auto& c : components_) weights.push_back(c.weight);
  const double sum = pairwise_sum(weights);
  for (auto& c : components_) c.weight /= sum;
}

double GroupDensity::continuous_density(double a) const {
  double v = 0.0;
  for (const auto& c : components_) {
    if (const auto* g = std::get_if<GaussianComponent>(&c.component)) v += c.weight * gaussian_pdf(a, *g);
  }
  return v;
}

GroupDensity GroupDensity::with_grid_samples(std::span<const double> grid) const {
  if (grid.size() < 2 || !is_uniform(grid)) {
    throw InvalidArgument("with_grid_samples: grid must be uniform with at least two points");
  }
  const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  GridSamples samples{std::vector<double>(grid.begin(), grid.end()), std::vector<double>(grid.size())};
  for (std::size_t j = 0; j < grid.size(); ++j) samples.values[j] = continuous_density(grid[j]);
  for (const auto& c : components_) {
    const auto* d = std::get_if<DiracComponent>(&c.component);
    if (!d) continue;
    const double pos = (d->location - grid.front()) / step;
    const double nearest = std::round(pos);
    if (nearest < 0.0 || nearest > static_cast<double>(grid.size() - 1)) {
      throw NormalizationError("with_grid_samples: dirac component outside the grid");
    }
    const auto j = static_cast<std::size_t>(nearest);
    const bool edge = j == 0 || j + 1 == grid.size();
    samples.values[j] += c.weight / (edge ? 0.5 * step : step);
  }
  const double mass = trapezoid(samples.values, step);
  if (std::abs(mass - 1.0) > 1e-9) {
    throw NormalizationError("with_grid_samples: sampled density integrates to " +
                             std::to_string(mass));
  }
  GroupDensity out = *this;
  out.samples_ = std::move(samples);
  return out;
}

GroupDensity make_delta(double a0) {
  if (!std::isfinite(a0)) throw InvalidArgument("make_delta: location must be finite");
  return GroupDensity({{1.0, DiracComponent{a0}}});
}

GroupDensity make_gaussian(double mean, double variance) {
  return GroupDensity({{1.0, GaussianComponent{mean, variance}}});
}

GroupDensity mix(std::span<const std::pair<double, GroupDensity>> parts) {
  double total = 0.0;
  for (const auto& [w, rho] : parts) {
    if (!std::isfinite(w) || !(w > 0.0)) throw NormalizationError("mix: weights must be positive");
    total += w;
  }
  if (parts.empty() || std::abs(total - 1.0) > kWeightSumTol) {
    throw NormalizationError("mix: weights must sum to 1");
  }
  std::vector<WeightedComponent> flat;
  for (const auto& [w, rho] : parts) {
    for (const auto& c : rho.components()) flat.push_back({w * c.weight, c.component});
  }
  return GroupDensity(std::move(flat));
}

GroupDensity mix(std::initializer_list<std::pair<double, GroupDensity>> parts) {
  return mix(std::span<const std::pair<double, GroupDensity>>(parts.begin(), parts.size()));
}

double evaluate(const GroupDensity& rho, const std::function<double(double)>& f) {
  double total = 0.0;
  for (const auto& c : rho.components()) {
    if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
      total += c.weight * f(d->location);
    } else {
      const auto& g = std::get<GaussianComponent>(c.component);
      const double sigma = std::sqrt(g.variance);
      const double value = integrate([&](double a) { return gaussian_pdf(a, g) * f(a); },
                                     g.mean - 10.0 * sigma, g.mean + 10.0 * sigma, 1e-10);
      total += c.weight * value;
    }
  }
  return total;
}

double counit(const std::function<double(double)>& f) { return f(0.0); }

GroupDensity convolve(const GroupDensity& rho1, const GroupDensity& rho2) {
  std::vector<WeightedComponent> out;
  out.reserve(rho1.components().size() * rho2.components().size());
  for (const auto& c1 : rho1.components()) {
    for (const auto& c2 : rho2.components()) {
      out.push_back({c1.weight * c2.weight, add(c1.component, c2.component)});
    }
  }
  return GroupDensity(std::move(out));
}

GroupDensity antipode(const GroupDensity& rho) {
  std::vector<WeightedComponent> out;
  out.reserve(rho.components().size());
  for (const auto& c : rho.components()) out.push_back({c.weight, reflect(c.component)});
  return GroupDensity(std::move(out));
}

bool is_pure(const GroupDensity& rho) {
  return rho.components().size() == 1 && is_dirac(rho.components().front());
}

namespace {

double component_gap(const WeightedComponent& a, const WeightedComponent& b) {
  double gap = std::abs(a.weight - b.weight);
  if (const auto* da = std::get_if<DiracComponent>(&a.component)) {
    return std::max(gap, std::abs(da->location - std::get<DiracComponent>(b.component).location));
  }
  const auto& ga = std::get<GaussianComponent>(a.component);
  const auto& gb = std::get<GaussianComponent>(b.component);
  return std::max({gap, std::abs(ga.mean - gb.mean), std::abs(ga.variance - gb.variance)});
}

}  // namespace

double canonical_distance(const GroupDensity& lhs, const GroupDensity& rhs, double match_tol) {
  const auto& a = lhs.components();
  const auto& b = rhs.components();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (a.size() != b.size()) return kInf;
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& ca : a) {
    std::size_t best_j = b.size();
    double best = kInf;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || ca.component.index() != b[j].component.index()) continue;
      const double g = component_gap(ca, b[j]);
      if (g < best) {
        best = g;
        best_j = j;
      }
    }
    if (best_j == b.size() || best > match_tol) return kInf;
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

bool approx_equal(const GroupDensity& lhs, const GroupDensity& rhs, double tol) {
  return canonical_distance(lhs, rhs, tol) <= tol;
}

std::complex<double> characteristic_value(const GroupDensity& rho, double p) {
  std::complex<double> chi{0.0, 0.0};
  for (const auto& c : rho.components()) chi += c.weight * component_chi(c.component, p);
  return chi;
}

CharacteristicFunction characteristic_function(const GroupDensity& rho,
                                               std::span<const double> dual_grid) {
  for (double p : dual_grid) {
    if (!std::isfinite(p)) throw InvalidArgument("characteristic_function: non-finite dual grid");
  }
  if (!is_uniform(dual_grid)) throw InvalidArgument("characteristic_function: dual grid must be uniform");
  CharacteristicFunction out{std::vector<double>(dual_grid.begin(), dual_grid.end()), {}};
  out.values.reserve(dual_grid.size());
  for (double p : dual_grid) out.values.push_back(characteristic_value(rho, p));
  return out;
}

InvertibilityVerdict is_invertible(const GroupDensity& rho, double band, double floor) {
  if (!std::isfinite(band) || !(band > 0.0)) throw InvalidArgument("is_invertible: band must be positive");
  if (!(floor > 0.0 && floor < 1.0)) throw InvalidArgument("is_invertible: floor must lie in (0, 1)");
  if (is_pure(rho)) return {true, std::nullopt, 1.0};

  // |chi| oscillates on the scale of the largest separation between components.
  double lo = location_of(rho.components().front().component);
  double hi = lo;
  for (const auto& c : rho.components()) {
    lo = std::min(lo, location_of(c.component));
    hi = std::max(hi, location_of(c.component));
  }
  const double spread = hi - lo;
  double step = band / 2048.0;
  if (spread > 0.0) step = std::min(step, std::numbers::pi / (32.0 * spread));
  const auto half = static_cast<std::size_t>(std::min(std::ceil(band / step), 1.0e6));
  step = band / static_cast<double>(half);
  const std::size_t n = 2 * half + 1;

  auto modulus2 = [&](double p) { return std::norm(characteristic_value(rho, p)); };
  std::vector<double> ps(n);
  std::vector<double> m2(n);
  for (std::size_t i = 0; i < n; ++i) {
    ps[i] = i == 0 ? -band : (i + 1 == n ? band : -band + static_cast<double>(i) * step);
    m2[i] = modulus2(ps[i]);
  }

  // Local minima of the sampled |chi|^2, then Brent refinement of the best ones.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || m2[i] <= m2[i - 1];
    const bool right_ok = i + 1 == n || m2[i] <= m2[i + 1];
    if (left_ok && right_ok) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) { return m2[a] != m2[b] ? m2[a] < m2[b] : a < b; });
  const double coarse_min = std::sqrt(m2[candidates.front()]);
  std::vector<std::pair<double, double>> refined;  // (p, |chi|)
  for (std::size_t idx : candidates) {
    if (refined.size() >= 256 || std::sqrt(m2[idx]) > coarse_min + 0.05) break;
    const double a = ps[idx == 0 ? 0 : idx - 1];
    const double b = ps[idx + 1 == n ? n - 1 : idx + 1];
    std::uintmax_t iters = 200;
    auto [p_best, f_best] = boost::math::tools::brent_find_minima(
        modulus2, a, b, std::numeric_limits<double>::digits, iters);
    if (m2[idx] < f_best) {
      p_best = ps[idx];
      f_best = m2[idx];
    }
    refined.emplace_back(p_best, std::sqrt(std::max(f_best, 0.0)));
  }
  double best = refined.front().second;
  for (const auto& r : refined) best = std::min(best, r.second);
  const double tie = best + 1e-9;
  // Mirror-image minima count as equally near 0 up to the scan resolution.
  const double same_radius = 0.25 * step;
  std::optional<double> witness;
  for (const auto& [p, m] : refined) {
    if (m > tie) continue;
    if (!witness || std::abs(p) < std::abs(*witness) - same_radius ||
        (std::abs(std::abs(p) - std::abs(*witness)) <= same_radius && p > *witness)) {
      witness = p;
    }
  }
  return {best >= floor, witness, best};
}

std::string to_text(const GroupDensity& rho) {
  std::string out;
  for (const auto& c : rho.components()) {
    if (const auto* d = std::get_if<DiracComponent>(&c.component)) {
      out += "dirac weight=";
      append_double(out, c.weight);
      out += " a=";
      append_double(out, d->location);
    } else {
      const auto& g = std::get<GaussianComponent>(c.component);
      out += "gauss weight=";
      append_double(out, c.weight);
      out += " mean=";
      append_double(out, g.mean);
      out += " var=";
      append_double(out, g.variance);
    }
    out += '\n';
  }
  return out;
}

GroupDensity parse_group_density(std::string_view text) {
  std::vector<WeightedComponent> comps;
  std::istringstream lines{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string kind;
    if (!(tokens >> kind)) continue;
    std::optional<double> weight, a, mean, var;
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        throw InvalidArgument("group density text line " + std::to_string(lineno) + ": expected key=value");
      }
      const std::string key = tok.substr(0, eq);
      const double value = parse_double(std::string_view(tok).substr(eq + 1), key);
      if (key == "weight") weight = value;
      else if (key == "a") a = value;
      else if (key == "mean") mean = value;
      else if (key == "var") var = value;
      else throw InvalidArgument("group density text line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!weight) throw InvalidArgument("group density text line " + std::to_string(lineno) + ": missing weight");
    if (kind == "dirac" && a && !mean && !var) {
      comps.push_back({*weight, DiracComponent{*a}});
    } else if (kind == "gauss" && mean && var && !a) {
      comps.push_back({*weight, GaussianComponent{*mean, *var}});
    } else {
      throw InvalidArgument("group density text line " + std::to_string(lineno) + ": malformed component");
    }
  }
  return GroupDensity(std::move(comps));
}

}  // namespace mixedframe
