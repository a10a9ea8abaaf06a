#pragma once

// Convex-hull masks from parallel-beam sinograms. Each projection's
// support [a_θ, b_θ] defines a strip {x cos θ + y sin θ ∈ [a_θ, b_θ]};
// the hull is the intersection of all strips, rasterized by pixel center.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrecon/ct.hpp"
#include "mrecon/mask.hpp"

namespace mrecon::hull {

class EmptySupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdPolicy {
  /// Threshold as a fraction of the projection's max |p|.
  double fraction = 1e-3;
  /// Absolute threshold; overrides `fraction` when set.
  std::optional<double> absolute;
  /// The strip is widened by this many detector pitches on each side. The
  /// true support edge lies somewhere between the last sub-threshold
  /// sample and the first supra-threshold one, so one pitch keeps the
  /// strip a superset of the object.
  double margin_bins = 1.0;

  double threshold_for(double peak) const { return absolute ? *absolute : fraction * peak; }
};

struct SupportInterval {
  double theta = 0.0;
  double a = 0.0;  // physical t bounds (after margin)
  double b = 0.0;
  int first = 0;  // first/last detector with |p| > threshold
  int last = 0;
};

/// Smallest index range outside which |p| ≤ threshold, converted to t.
/// Throws EmptySupportError when no sample exceeds the threshold.
SupportInterval projection_support(std::span<const double> projection,
                                   const ThresholdPolicy& policy,
                                   const ct::DetectorGeometry& detectors, double theta = 0.0);

class StripSet {
 public:
  StripSet() = default;
  explicit StripSet(std::vector<SupportInterval> strips) : strips_(std::move(strips)) {}

  std::span<const SupportInterval> strips() const { return strips_; }
  bool contains(double x, double y) const;
  Mask rasterize(int side) const;

 private:
  std::vector<SupportInterval> strips_;
};

StripSet support_strips(const ct::Sinogram& sinogram, const ThresholdPolicy& policy);

/// Pixel (x, y) is in the mask iff its center lies in every strip.
Mask extract_hull_mask(const ct::Sinogram& sinogram, const ThresholdPolicy& policy, int side);

}  // namespace mrecon::hull
