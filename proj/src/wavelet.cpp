#include "mrecon/wavelet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mrecon {

namespace {

const std::array<double, 2> kHaar = {M_SQRT1_2, M_SQRT1_2};

// Six-tap Daubechies filter (three vanishing moments) in closed form.
const std::array<double, 6> kDaub6 = [] {
  const double r10 = std::sqrt(10.0);
  const double q = std::sqrt(5.0 + 2.0 * r10);
  const double c = 16.0 * std::sqrt(2.0);
  return std::array<double, 6>{
      (1.0 + r10 + q) / c,         (5.0 + r10 + 3.0 * q) / c,  (10.0 - 2.0 * r10 + 2.0 * q) / c,
      (10.0 - 2.0 * r10 - 2.0 * q) / c, (5.0 + r10 - 3.0 * q) / c, (1.0 + r10 - q) / c,
  };
}();

// One analysis step on `len` samples spaced by `stride`: lowpass outputs
// land in the first half, highpass in the second.
void analyze(double* data, std::size_t stride, std::size_t len, std::span<const double> h,
             double* scratch) {
  const std::size_t taps = h.size();
  const std::size_t half = len / 2;
  for (std::size_t k = 0; k < half; ++k) {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t j = 0; j < taps; ++j) {
      const double v = data[((2 * k + j) % len) * stride];
      lo += h[j] * v;
      // g[j] = (-1)^j h[taps-1-j]
      const double g = (j % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - j];
      hi += g * v;
    }
    scratch[k] = lo;
    scratch[half + k] = hi;
  }
  for (std::size_t i = 0; i < len; ++i) data[i * stride] = scratch[i];
}

// Exact transpose of analyze().
void synthesize(double* data, std::size_t stride, std::size_t len, std::span<const double> h,
                double* scratch) {
  const std::size_t taps = h.size();
  const std::size_t half = len / 2;
  for (std::size_t i = 0; i < len; ++i) scratch[i] = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const double lo = data[k * stride];
    const double hi = data[(half + k) * stride];
    for (std::size_t j = 0; j < taps; ++j) {
      const double g = (j % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - j];
      scratch[(2 * k + j) % len] += h[j] * lo + g * hi;
    }
  }
  for (std::size_t i = 0; i < len; ++i) data[i * stride] = scratch[i];
}

void check_grid(std::size_t len, const WaveletSpec& spec) {
  if (len != spec.coefficient_count()) {
    throw DimensionError("wavelet: length " + std::to_string(len) + " does not match grid side " +
                         std::to_string(spec.size));
  }
}

}  // namespace

WaveletFamily parse_wavelet_family(std::string_view name) {
  if (name == "haar" || name == "daubechies2" || name == "db1") return WaveletFamily::haar;
  if (name == "daubechies6" || name == "db3") return WaveletFamily::daubechies6;
  throw std::invalid_argument("unknown wavelet family '" + std::string(name) + "'");
}

std::string_view to_string(WaveletFamily family) {
  return family == WaveletFamily::haar ? "haar" : "daubechies6";
}

WaveletSpec WaveletSpec::make(WaveletFamily family, int size, int levels) {
  if (!is_power_of_two(size) || size < 2) {
    throw DimensionError("wavelet: grid side " + std::to_string(size) + " is not a power of two ≥ 2");
  }
  const int max_levels = log2_exact(size);
  if (levels <= 0) levels = std::max(1, max_levels - 2);
  if (levels > max_levels) {
    throw DimensionError("wavelet: " + std::to_string(levels) + " levels exceed log2(" +
                         std::to_string(size) + ")");
  }
  return WaveletSpec{family, levels, size};
}

std::span<const double> lowpass_taps(WaveletFamily family) {
  if (family == WaveletFamily::haar) return kHaar;
  return kDaub6;
}

void forward_dwt2(std::span<const double> image, std::span<double> coeffs, const WaveletSpec& spec,
                  std::span<double> scratch) {
  check_grid(image.size(), spec);
  check_grid(coeffs.size(), spec);
  const auto h = lowpass_taps(spec.family);
  const std::size_t n = spec.size;
  if (coeffs.data() != image.data()) std::copy(image.begin(), image.end(), coeffs.begin());
  double* c = coeffs.data();
  std::size_t len = n;
  for (int level = 0; level < spec.levels; ++level, len /= 2) {
    for (std::size_t r = 0; r < len; ++r) analyze(c + r * n, 1, len, h, scratch.data());
    for (std::size_t col = 0; col < len; ++col) analyze(c + col, n, len, h, scratch.data());
  }
}

void inverse_dwt2(std::span<const double> coeffs, std::span<double> image, const WaveletSpec& spec,
                  std::span<double> scratch) {
  check_grid(image.size(), spec);
  check_grid(coeffs.size(), spec);
  const auto h = lowpass_taps(spec.family);
  const std::size_t n = spec.size;
  if (coeffs.data() != image.data()) std::copy(coeffs.begin(), coeffs.end(), image.begin());
  double* x = image.data();
  for (int level = spec.levels - 1; level >= 0; --level) {
    const std::size_t len = n >> level;
    for (std::size_t col = 0; col < len; ++col) synthesize(x + col, n, len, h, scratch.data());
    for (std::size_t r = 0; r < len; ++r) synthesize(x + r * n, 1, len, h, scratch.data());
  }
}

Vector forward_dwt2(const Image& image, const WaveletSpec& spec) {
  if (image.side() != spec.size) throw DimensionError("forward_dwt2: image side mismatch");
  Vector coeffs(spec.coefficient_count());
  Vector scratch(spec.size);
  forward_dwt2(image.pixels(), coeffs, spec, scratch);
  return coeffs;
}

Image inverse_dwt2(std::span<const double> coeffs, const WaveletSpec& spec) {
  check_grid(coeffs.size(), spec);
  Image out(spec.size);
  Vector scratch(spec.size);
  inverse_dwt2(coeffs, out.pixels(), spec, scratch);
  return out;
}

void inverse_dwt1(std::span<double> signal, WaveletFamily family, int levels,
                  std::span<double> scratch) {
  const auto h = lowpass_taps(family);
  const std::size_t n = signal.size();
  for (int level = levels - 1; level >= 0; --level) {
    synthesize(signal.data(), 1, n >> level, h, scratch.data());
  }
}

}  // namespace mrecon
