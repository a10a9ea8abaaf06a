#pragma once

// File formats.
//
// MRIMG1 (image container), text header then raw data:
//   MRIMG1\n
//   <n> <n>\n
//   n·n little-endian IEEE-754 doubles, row-major
//
// MRSINO1 (sinogram container):
//   MRSINO1\n
//   <K> <d> <pitch> <origin>\n
//   <θ_0> ... <θ_{K−1}>\n          (radians)
//   K·d little-endian doubles, row-major (one projection per row)
//
// Header reals are printed with 17 significant digits so they round-trip.
// Masks and preview images use PGM; P2 and P5 are both read, P5 written.

#include <filesystem>
#include <stdexcept>

#include "mrecon/ct.hpp"
#include "mrecon/image.hpp"
#include "mrecon/mask.hpp"

namespace mrecon::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_image(const std::filesystem::path& path, const Image& image);
Image read_image(const std::filesystem::path& path);

void write_sinogram(const std::filesystem::path& path, const ct::Sinogram& sinogram);
ct::Sinogram read_sinogram(const std::filesystem::path& path);

/// Mask as binary PGM: 255 inside, 0 outside.
void write_mask_pgm(const std::filesystem::path& path, const Mask& mask);
/// Any nonzero gray level is inside. The grid must be square.
Mask read_mask_pgm(const std::filesystem::path& path);

/// 8-bit preview, linearly mapping [lo, hi] to [0, 255] (clamped).
void write_image_pgm(const std::filesystem::path& path, const Image& image, double lo, double hi);

/// Reads either container by sniffing the magic (MRIMG1 or PGM).
Image read_any_image(const std::filesystem::path& path);

}  // namespace mrecon::io
