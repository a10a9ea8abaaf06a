#pragma once

#include <iosfwd>
#include <stdexcept>

#include "mrecon/image.hpp"
#include "mrecon/mask.hpp"

namespace mrecon::metrics {

class DegeneratePeakError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PsnrReport {
  double psnr_db = 0.0;          // +inf when the reconstruction is exact
  double peak_range = 0.0;       // max − min of the truth inside the mask
  double mse_inside_mask = 0.0;
  std::size_t pixels = 0;        // p_M
};

/// 10 log₁₀(range² / mse), with range and mse taken over mask pixels
/// and range from the true image.
PsnrReport psnr(const Image& recon, const Image& truth, const Mask& mask);

/// Flat `key = value` block.
void write_report(std::ostream& os, const PsnrReport& report);

}  // namespace mrecon::metrics
