#pragma once

// Orthonormal separable 2-D discrete wavelet transforms with periodic
// boundary extension.
//
// Coefficients are stored in the standard Mallat layout of an n×n array,
// flattened row-major: after L levels the top-left (n/2^L)² block holds
// the scaling coefficients and each level k contributes three detail
// bands of side n/2^k. Ψ denotes the synthesis matrix (x = Ψ s), so
// forward_dwt2 applies Ψᵀ.

#include <span>
#include <string_view>
#include <vector>

#include "mrecon/image.hpp"

namespace mrecon {

enum class WaveletFamily { haar, daubechies6 };

WaveletFamily parse_wavelet_family(std::string_view name);
std::string_view to_string(WaveletFamily family);

struct WaveletSpec {
  WaveletFamily family = WaveletFamily::haar;
  int levels = 1;
  int size = 2;

  /// Validates the grid side (power of two) and depth (1 ≤ levels ≤ log2 n).
  /// levels ≤ 0 selects the default depth log2(n) − 2, clamped to ≥ 1.
  static WaveletSpec make(WaveletFamily family, int size, int levels = 0);

  std::size_t coefficient_count() const { return static_cast<std::size_t>(size) * size; }
  bool operator==(const WaveletSpec&) const = default;
};

/// Low-pass synthesis/analysis taps (unit ℓ₂ norm, sum √2).
std::span<const double> lowpass_taps(WaveletFamily family);

/// s = Ψᵀ x
Vector forward_dwt2(const Image& image, const WaveletSpec& spec);
/// x = Ψ s
Image inverse_dwt2(std::span<const double> coeffs, const WaveletSpec& spec);

/// Span-based variants writing into caller storage (length n²). `scratch`
/// needs at least n entries.
void forward_dwt2(std::span<const double> image, std::span<double> coeffs, const WaveletSpec& spec,
                  std::span<double> scratch);
void inverse_dwt2(std::span<const double> coeffs, std::span<double> image, const WaveletSpec& spec,
                  std::span<double> scratch);

/// 1-D periodic multi-level synthesis on a length-n signal (in place).
void inverse_dwt1(std::span<double> signal, WaveletFamily family, int levels,
                  std::span<double> scratch);

}  // namespace mrecon
