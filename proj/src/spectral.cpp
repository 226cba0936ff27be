#include "mixedframe/spectral.hpp"

#include <numbers>
#include <unsupported/Eigen/FFT>

#include "mixedframe/errors.hpp"

namespace mixedframe::spectral {

std::vector<double> wavenumbers(std::size_t n, double spacing) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * spacing);
  const std::size_t positive = (n - 1) / 2 + 1;  // includes zero
  for (std::size_t j = 0; j < n; ++j) {
    const auto idx = static_cast<double>(j);
    k[j] = j < positive ? base * idx : base * (idx - static_cast<double>(n));
  }
  return k;
}

std::vector<Complex> forward(std::span<const Complex> samples) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

std::vector<Complex> inverse(std::span<const Complex> modes) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(modes.begin(), modes.end());
  std::vector<Complex> out;
  fft.inv(out, in);
  return out;
}

std::vector<Complex> apply_multiplier(std::span<const Complex> samples,
                                      std::span<const Complex> multiplier) {
  if (samples.size() != multiplier.size()) {
    throw InvalidArgument("apply_multiplier: size mismatch");
  }
  auto modes = forward(samples);
  for (std::size_t k = 0; k < modes.size(); ++k) modes[k] *= multiplier[k];
  return inverse(modes);
}

}  // namespace mixedframe::spectral
