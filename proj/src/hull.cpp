#include "mrecon/hull.hpp"

#include <cmath>
#include <string>

namespace mrecon::hull {

SupportInterval projection_support(std::span<const double> projection,
                                   const ThresholdPolicy& policy,
                                   const ct::DetectorGeometry& detectors, double theta) {
  if (projection.size() < 2) throw std::invalid_argument("projection_support: need ≥ 2 samples");
  double peak = 0.0;
  for (double v : projection) peak = std::max(peak, std::fabs(v));
  const double threshold = policy.threshold_for(peak);
  int first = -1;
  int last = -1;
  for (int i = 0; i < static_cast<int>(projection.size()); ++i) {
    if (std::fabs(projection[i]) > threshold) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) {
    throw EmptySupportError("empty support: no sample exceeds threshold at angle " +
                            std::to_string(theta));
  }
  const double margin = policy.margin_bins * detectors.pitch;
  return {theta, detectors.position(first) - margin, detectors.position(last) + margin, first,
          last};
}

bool StripSet::contains(double x, double y) const {
  for (const auto& s : strips_) {
    const double t = x * std::cos(s.theta) + y * std::sin(s.theta);
    if (t < s.a || t > s.b) return false;
  }
  return true;
}

Mask StripSet::rasterize(int side) const {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(side) * side, 1);
  for (const auto& s : strips_) {
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    for (int r = 0; r < side; ++r) {
      const double y = pixel_y(r, side);
      for (int col = 0; col < side; ++col) {
        auto& cell = m[static_cast<std::size_t>(r) * side + col];
        if (!cell) continue;
        const double t = pixel_x(col, side) * c + y * sn;
        if (t < s.a || t > s.b) cell = 0;
      }
    }
  }
  bool any = false;
  for (auto v : m) any = any || v != 0;
  if (!any) throw EmptySupportError("hull: strip intersection contains no pixel centers");
  return Mask(side, std::move(m));
}

StripSet support_strips(const ct::Sinogram& sinogram, const ThresholdPolicy& policy) {
  sinogram.validate();
  std::vector<SupportInterval> strips;
  strips.reserve(sinogram.angles.size());
  for (int k = 0; k < sinogram.projections(); ++k) {
    strips.push_back(projection_support(sinogram.projection(k), policy, sinogram.detectors,
                                        sinogram.angles[k]));
  }
  return StripSet(std::move(strips));
}

Mask extract_hull_mask(const ct::Sinogram& sinogram, const ThresholdPolicy& policy, int side) {
  return support_strips(sinogram, policy).rasterize(side);
}

}  // namespace mrecon::hull
