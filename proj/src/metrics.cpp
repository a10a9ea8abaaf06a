#include "mrecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace mrecon::metrics {

PsnrReport psnr(const Image& recon, const Image& truth, const Mask& mask) {
  if (recon.side() != truth.side() || truth.side() != mask.side()) {
    throw DimensionError("psnr: image/mask side mismatch");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sse = 0.0;
  const auto x = truth.pixels();
  const auto xh = recon.pixels();
  for (std::size_t i : mask.indices()) {
    lo = std::min(lo, x[i]);
    hi = std::max(hi, x[i]);
    const double d = xh[i] - x[i];
    sse += d * d;
  }
  PsnrReport rep;
  rep.pixels = mask.count();
  rep.peak_range = hi - lo;
  rep.mse_inside_mask = sse / static_cast<double>(mask.count());
  if (rep.peak_range == 0.0) throw DegeneratePeakError("psnr: degenerate peak (constant truth in mask)");
  rep.psnr_db = rep.mse_inside_mask == 0.0
                    ? std::numeric_limits<double>::infinity()
                    : 10.0 * std::log10(rep.peak_range * rep.peak_range / rep.mse_inside_mask);
  return rep;
}

void write_report(std::ostream& os, const PsnrReport& report) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "psnr_db = %.17g\n", report.psnr_db);
  os << buf;
  std::snprintf(buf, sizeof buf, "peak_range = %.17g\n", report.peak_range);
  os << buf;
  std::snprintf(buf, sizeof buf, "mse_inside_mask = %.17g\n", report.mse_inside_mask);
  os << buf;
  os << "mask_pixels = " << report.pixels << "\n";
}

}  // namespace mrecon::metrics
