#pragma once

// Parallel-beam CT measurement model.
//
// Geometry: the object lives on the normalized square [-1,1]² (pixel
// pitch 2/n). A projection at angle θ integrates along the lines
// x cos θ + y sin θ = t; detector k sits at t_k = origin + k·pitch.

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "mrecon/image.hpp"
#include "mrecon/linear_operator.hpp"

namespace mrecon::detail {
class RealFft;
}

namespace mrecon::ct {

struct Ellipse {
  double cx = 0.0;
  double cy = 0.0;
  double a = 1.0;      // semi-axis along the rotated x axis
  double b = 1.0;      // semi-axis along the rotated y axis
  double angle = 0.0;  // rotation, radians counter-clockwise from +x
  double density = 1.0;

  bool contains(double x, double y) const;
  /// Line integral of this ellipse's density along x cos θ + y sin θ = t.
  double line_integral(double theta, double t) const;
};

class EllipseSet {
 public:
  EllipseSet() = default;
  explicit EllipseSet(std::vector<Ellipse> ellipses);

  std::span<const Ellipse> ellipses() const { return ellipses_; }
  std::size_t size() const { return ellipses_.size(); }
  /// Sum of densities of ellipses containing (x, y).
  double value(double x, double y) const;

 private:
  std::vector<Ellipse> ellipses_;
};

enum class PhantomVariant { shepp_logan, modified_shepp_logan };
PhantomVariant parse_phantom_variant(std::string_view name);
std::string_view to_string(PhantomVariant v);

/// The 10-ellipse head phantom. `shepp_logan` uses the original
/// densities (2, −0.98, −0.02, ...); `modified_shepp_logan` the
/// higher-contrast ones (1, −0.8, −0.2, ...).
EllipseSet shepp_logan_ellipses(PhantomVariant variant = PhantomVariant::shepp_logan);

/// Pixel-center sampling of an ellipse set.
Image rasterize(const EllipseSet& ellipses, int side);

struct Phantom {
  Image image;
  EllipseSet ellipses;
};
Phantom shepp_logan(int side, PhantomVariant variant = PhantomVariant::shepp_logan);

struct DetectorGeometry {
  int count = 2;
  double pitch = 1.0;
  double origin = 0.0;  // t of detector 0

  double position(int k) const { return origin + k * pitch; }
  /// Fractional detector index of coordinate t.
  double index_of(double t) const { return (t - origin) / pitch; }

  /// Detectors symmetric about t = 0.
  static DetectorGeometry centered(int count, double pitch);
  /// 2n − 1 detectors at pixel pitch, centered.
  static DetectorGeometry for_grid(int side);
  bool operator==(const DetectorGeometry&) const = default;
};

/// Angles θ_k = k·spacing over [0°, 180°) minus a missing span at the top
/// of the range: kept angles satisfy θ < 180° − missing_span. Radians.
std::vector<double> limited_angle_set(double spacing_deg, double missing_span_deg);

struct Sinogram {
  std::vector<double> angles;  // radians, strictly increasing in [0, π)
  DetectorGeometry detectors;
  Vector data;  // K × d, row-major (one projection per row)

  int projections() const { return static_cast<int>(angles.size()); }
  std::span<const double> projection(int k) const {
    return std::span(data).subspan(static_cast<std::size_t>(k) * detectors.count,
                                   detectors.count);
  }
  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  /// True when the first and last sample of every projection have
  /// magnitude ≤ tol.
  bool has_zero_ends(double tol = 0.0) const;
};

/// Exact analytic line integrals, superposed over the set.
Sinogram ellipse_sinogram(const EllipseSet& ellipses, std::span<const double> angles,
                          const DetectorGeometry& detectors);

/// Discrete Radon transform on an n×n grid: pixel-driven, each pixel's
/// mass split linearly between the two nearest detectors. Adjoint is the
/// matching linear-interpolation backprojection.
class RadonOperator final : public LinearOperator {
 public:
  RadonOperator(int side, std::vector<double> angles, DetectorGeometry detectors);

  std::size_t rows() const override {
    return angles_.size() * static_cast<std::size_t>(detectors_.count);
  }
  std::size_t cols() const override { return static_cast<std::size_t>(side_) * side_; }
  void apply(std::span<const double> in, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> in, std::span<double> out) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  int side() const { return side_; }
  std::span<const double> angles() const { return angles_; }
  const DetectorGeometry& detectors() const { return detectors_; }

 private:
  int side_;
  std::vector<double> angles_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  DetectorGeometry detectors_;
  double weight_;  // pixel area / detector pitch
};

Sinogram radon(const Image& image, std::span<const double> angles,
               const DetectorGeometry& detectors);

/// Where one measurement entry comes from.
struct MeasurementEntry {
  int projection;
  int bin;
  bool imaginary;
};

/// Φ. In detector mode it is the Radon transform itself. In frequency mode
/// each projection is zero-padded to the next power of two N_f and
/// replaced by its unitary DFT, emitted as the real orthonormal stack
///   [Re X_0, √2 Re X_1, √2 Im X_1, ..., √2 Re X_{N_f/2−1}, √2 Im X_{N_f/2−1}, Re X_{N_f/2}]
/// so each projection contributes N_f real entries and ‖Φx‖ = ‖radon(x)‖.
class SamplingOperator final : public LinearOperator {
 public:
  SamplingOperator(int side, std::vector<double> angles, DetectorGeometry detectors,
                   bool freq_mode);
  ~SamplingOperator() override;

  std::size_t rows() const override;
  std::size_t cols() const override { return radon_.cols(); }
  void apply(std::span<const double> in, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> in, std::span<double> out) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  bool freq_mode() const { return freq_mode_; }
  /// Entries per projection (d, or N_f in frequency mode).
  std::size_t per_projection() const;
  const RadonOperator& radon() const { return radon_; }

  /// Maps sinogram data (K × d) onto measurement space, i.e. y = F p.
  Vector measurements(const Sinogram& sinogram) const;
  /// Inverse of measurements(): projections recovered from y (Fᵀ y).
  Vector to_sinogram(std::span<const double> y) const;
  std::vector<MeasurementEntry> layout() const;

 private:
  void encode(std::span<const double> sino, std::span<double> out) const;
  void decode(std::span<const double> y, std::span<double> sino) const;

  RadonOperator radon_;
  bool freq_mode_;
  std::size_t padded_ = 0;
  std::unique_ptr<detail::RealFft> fft_;
};

/// Builds Φ for an n×n grid.
std::shared_ptr<const SamplingOperator> build_sampling_operator(std::span<const double> angles,
                                                                const DetectorGeometry& detectors,
                                                                int side, bool freq_mode);

/// Filtered backprojection: Ram-Lak filter per projection (spatial-domain
/// band-limited kernel, zero-padded linear convolution), linear
/// interpolation backprojection, scaled by π/K.
Image fbp(const Sinogram& sinogram, int side);

}  // namespace mrecon::ct
