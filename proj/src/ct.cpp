#include "mrecon/ct.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace mrecon::ct {

bool Ellipse::contains(double x, double y) const {
  const double dx = x - cx;
  const double dy = y - cy;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double u = (dx * c + dy * s) / a;
  const double v = (-dx * s + dy * c) / b;
  return u * u + v * v <= 1.0;
}

double Ellipse::line_integral(double theta, double t) const {
  const double offset = t - (cx * std::cos(theta) + cy * std::sin(theta));
  const double g = theta - angle;
  const double cg = std::cos(g);
  const double sg = std::sin(g);
  const double half_width_sq = a * a * cg * cg + b * b * sg * sg;
  const double rem = half_width_sq - offset * offset;
  if (rem <= 0.0) return 0.0;
  return 2.0 * density * a * b * std::sqrt(rem) / half_width_sq;
}

EllipseSet::EllipseSet(std::vector<Ellipse> ellipses) : ellipses_(std::move(ellipses)) {
  for (const auto& e : ellipses_) {
    if (!(e.a > 0.0) || !(e.b > 0.0)) throw std::invalid_argument("EllipseSet: semi-axes must be > 0");
    if (!std::isfinite(e.density) || !std::isfinite(e.cx) || !std::isfinite(e.cy) ||
        !std::isfinite(e.angle)) {
      throw std::invalid_argument("EllipseSet: non-finite parameter");
    }
  }
}

double EllipseSet::value(double x, double y) const {
  double v = 0.0;
  for (const auto& e : ellipses_) {
    if (e.contains(x, y)) v += e.density;
  }
  return v;
}

PhantomVariant parse_phantom_variant(std::string_view name) {
  if (name == "shepp_logan") return PhantomVariant::shepp_logan;
  if (name == "modified_shepp_logan") return PhantomVariant::modified_shepp_logan;
  throw std::invalid_argument("unknown phantom '" + std::string(name) + "'");
}

std::string_view to_string(PhantomVariant v) {
  return v == PhantomVariant::shepp_logan ? "shepp_logan" : "modified_shepp_logan";
}

EllipseSet shepp_logan_ellipses(PhantomVariant variant) {
  constexpr double deg = M_PI / 180.0;
  struct Row {
    double cx, cy, a, b, angle_deg, original, modified;
  };
  // a is the semi-axis along x before rotation.
  constexpr Row table[] = {
      {0.0, 0.0, 0.69, 0.92, 0.0, 2.0, 1.0},
      {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98, -0.8},
      {0.22, 0.0, 0.11, 0.31, -18.0, -0.02, -0.2},
      {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02, -0.2},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.01, 0.1},
      {0.0, 0.1, 0.046, 0.046, 0.0, 0.01, 0.1},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.01, 0.1},
      {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01, 0.1},
      {0.0, -0.605, 0.023, 0.023, 0.0, 0.01, 0.1},
      {0.06, -0.605, 0.023, 0.046, 0.0, 0.01, 0.1},
  };
  std::vector<Ellipse> out;
  for (const auto& r : table) {
    out.push_back({r.cx, r.cy, r.a, r.b, r.angle_deg * deg,
                   variant == PhantomVariant::shepp_logan ? r.original : r.modified});
  }
  return EllipseSet(std::move(out));
}

Image rasterize(const EllipseSet& ellipses, int side) {
  Image img(side);
  for (int r = 0; r < side; ++r) {
    const double y = pixel_y(r, side);
    for (int c = 0; c < side; ++c) img(r, c) = ellipses.value(pixel_x(c, side), y);
  }
  return img;
}

Phantom shepp_logan(int side, PhantomVariant variant) {
  if (!is_power_of_two(side)) throw DimensionError("shepp_logan: side must be a power of two");
  EllipseSet e = shepp_logan_ellipses(variant);
  Image img = rasterize(e, side);
  return {std::move(img), std::move(e)};
}

DetectorGeometry DetectorGeometry::centered(int count, double pitch) {
  if (count < 2) throw std::invalid_argument("DetectorGeometry: need at least 2 detectors");
  if (!(pitch > 0.0)) throw std::invalid_argument("DetectorGeometry: pitch must be > 0");
  return {count, pitch, -0.5 * (count - 1) * pitch};
}

DetectorGeometry DetectorGeometry::for_grid(int side) {
  return centered(2 * side - 1, 2.0 / side);
}

std::vector<double> limited_angle_set(double spacing_deg, double missing_span_deg) {
  if (!(spacing_deg > 0.0) || spacing_deg > 180.0) {
    throw std::invalid_argument("limited_angle_set: spacing must be in (0, 180]");
  }
  if (missing_span_deg < 0.0 || missing_span_deg >= 180.0) {
    throw std::invalid_argument("limited_angle_set: missing span must be in [0, 180)");
  }
  const long total = std::lround(180.0 / spacing_deg);
  std::vector<double> angles;
  for (long k = 0; k < total; ++k) {
    const double d = k * spacing_deg;
    if (d < 180.0 - missing_span_deg - 1e-9) angles.push_back(d * M_PI / 180.0);
  }
  return angles;
}

void Sinogram::validate() const {
  if (angles.empty()) throw std::invalid_argument("Sinogram: need at least one projection");
  if (detectors.count < 2) throw std::invalid_argument("Sinogram: need at least 2 detectors");
  if (data.size() != angles.size() * static_cast<std::size_t>(detectors.count)) {
    throw DimensionError("Sinogram: data size does not match K × d");
  }
  for (std::size_t k = 0; k < angles.size(); ++k) {
    if (angles[k] < 0.0 || angles[k] >= M_PI) {
      throw std::invalid_argument("Sinogram: angle outside [0, π)");
    }
    if (k > 0 && angles[k] <= angles[k - 1]) {
      throw std::invalid_argument("Sinogram: angles must be strictly increasing");
    }
  }
}

bool Sinogram::has_zero_ends(double tol) const {
  for (int k = 0; k < projections(); ++k) {
    const auto p = projection(k);
    if (std::fabs(p.front()) > tol || std::fabs(p.back()) > tol) return false;
  }
  return true;
}

Sinogram ellipse_sinogram(const EllipseSet& ellipses, std::span<const double> angles,
                          const DetectorGeometry& detectors) {
  Sinogram s{{angles.begin(), angles.end()}, detectors, {}};
  s.data.assign(angles.size() * static_cast<std::size_t>(detectors.count), 0.0);
  for (std::size_t k = 0; k < angles.size(); ++k) {
    for (int j = 0; j < detectors.count; ++j) {
      const double t = detectors.position(j);
      double v = 0.0;
      for (const auto& e : ellipses.ellipses()) v += e.line_integral(angles[k], t);
      s.data[k * detectors.count + j] = v;
    }
  }
  s.validate();
  return s;
}

RadonOperator::RadonOperator(int side, std::vector<double> angles, DetectorGeometry detectors)
    : side_(side), angles_(std::move(angles)), detectors_(detectors) {
  if (side < 1) throw DimensionError("RadonOperator: side must be positive");
  if (angles_.empty()) throw std::invalid_argument("RadonOperator: no angles");
  if (detectors_.count < 2) throw std::invalid_argument("RadonOperator: need ≥ 2 detectors");
  for (double a : angles_) {
    cos_.push_back(std::cos(a));
    sin_.push_back(std::sin(a));
  }
  const double pixel = 2.0 / side_;
  weight_ = pixel * pixel / detectors_.pitch;
}

namespace {

// True when every sample u0 + c·du of a row lands in [0, d − 1), so both
// interpolation taps are in range and truncation equals floor.
bool interior(double u0, double du, int side, int d) {
  const double u1 = u0 + (side - 1) * du;
  return std::min(u0, u1) >= 0.0 && std::max(u0, u1) < d - 1;
}

}  // namespace

void RadonOperator::apply(std::span<const double> in, std::span<double> out) const {
  check_forward(in, out);
  std::fill(out.begin(), out.end(), 0.0);
  const int d = detectors_.count;
  const double pixel = 2.0 / side_;
  for (std::size_t k = 0; k < angles_.size(); ++k) {
    double* proj = out.data() + k * d;
    const double du = pixel * cos_[k] / detectors_.pitch;
    for (int r = 0; r < side_; ++r) {
      const double y = pixel_y(r, side_);
      const double u0 = detectors_.index_of(pixel_x(0, side_) * cos_[k] + y * sin_[k]);
      const double* row = in.data() + static_cast<std::size_t>(r) * side_;
      if (interior(u0, du, side_, d)) {
        for (int c = 0; c < side_; ++c) {
          const double v = row[c];
          if (v == 0.0) continue;
          const double u = u0 + c * du;
          const int k0 = static_cast<int>(u);
          const double w = u - k0;
          const double mass = v * weight_;
          proj[k0] += (1.0 - w) * mass;
          proj[k0 + 1] += w * mass;
        }
        continue;
      }
      for (int c = 0; c < side_; ++c) {
        const double v = row[c];
        if (v == 0.0) continue;
        const double u = u0 + c * du;
        const double fl = std::floor(u);
        const int k0 = static_cast<int>(fl);
        const double w = u - fl;
        const double mass = v * weight_;
        if (k0 >= 0 && k0 < d) proj[k0] += (1.0 - w) * mass;
        if (k0 + 1 >= 0 && k0 + 1 < d) proj[k0 + 1] += w * mass;
      }
    }
  }
}

void RadonOperator::apply_adjoint(std::span<const double> in, std::span<double> out) const {
  check_adjoint(in, out);
  std::fill(out.begin(), out.end(), 0.0);
  const int d = detectors_.count;
  const double pixel = 2.0 / side_;
  for (std::size_t k = 0; k < angles_.size(); ++k) {
    const double* proj = in.data() + k * d;
    const double du = pixel * cos_[k] / detectors_.pitch;
    for (int r = 0; r < side_; ++r) {
      const double y = pixel_y(r, side_);
      const double u0 = detectors_.index_of(pixel_x(0, side_) * cos_[k] + y * sin_[k]);
      double* row = out.data() + static_cast<std::size_t>(r) * side_;
      if (interior(u0, du, side_, d)) {
        for (int c = 0; c < side_; ++c) {
          const double u = u0 + c * du;
          const int k0 = static_cast<int>(u);
          const double w = u - k0;
          row[c] += ((1.0 - w) * proj[k0] + w * proj[k0 + 1]) * weight_;
        }
        continue;
      }
      for (int c = 0; c < side_; ++c) {
        const double u = u0 + c * du;
        const double fl = std::floor(u);
        const int k0 = static_cast<int>(fl);
        const double w = u - fl;
        double acc = 0.0;
        if (k0 >= 0 && k0 < d) acc += (1.0 - w) * proj[k0];
        if (k0 + 1 >= 0 && k0 + 1 < d) acc += w * proj[k0 + 1];
        row[c] += acc * weight_;
      }
    }
  }
}

Sinogram radon(const Image& image, std::span<const double> angles,
               const DetectorGeometry& detectors) {
  RadonOperator op(image.side(), {angles.begin(), angles.end()}, detectors);
  Sinogram s{{angles.begin(), angles.end()}, detectors, op.apply(image.pixels())};
  s.validate();
  return s;
}

SamplingOperator::SamplingOperator(int side, std::vector<double> angles,
                                   DetectorGeometry detectors, bool freq_mode)
    : radon_(side, std::move(angles), detectors), freq_mode_(freq_mode) {
  if (freq_mode_) {
    padded_ = detail::next_power_of_two(static_cast<std::size_t>(detectors.count));
    fft_ = std::make_unique<detail::RealFft>(padded_);
  }
}

SamplingOperator::~SamplingOperator() = default;

std::size_t SamplingOperator::per_projection() const {
  return freq_mode_ ? padded_ : static_cast<std::size_t>(radon_.detectors().count);
}

std::size_t SamplingOperator::rows() const { return radon_.angles().size() * per_projection(); }

void SamplingOperator::encode(std::span<const double> sino, std::span<double> out) const {
  const std::size_t d = radon_.detectors().count;
  const std::size_t n = padded_;
  const double unit = 1.0 / std::sqrt(static_cast<double>(n));
  const double root2 = std::sqrt(2.0) * unit;
  Vector buf(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  for (std::size_t k = 0; k < radon_.angles().size(); ++k) {
    std::copy_n(sino.data() + k * d, d, buf.begin());
    std::fill(buf.begin() + d, buf.end(), 0.0);
    fft_->forward(buf.data(), spec.data());
    double* y = out.data() + k * n;
    y[0] = spec[0].real() * unit;
    for (std::size_t b = 1; b < n / 2; ++b) {
      y[2 * b - 1] = spec[b].real() * root2;
      y[2 * b] = spec[b].imag() * root2;
    }
    y[n - 1] = spec[n / 2].real() * unit;
  }
}

void SamplingOperator::decode(std::span<const double> y, std::span<double> sino) const {
  const std::size_t d = radon_.detectors().count;
  const std::size_t n = padded_;
  const double unit = 1.0 / std::sqrt(static_cast<double>(n));
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  Vector buf(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  for (std::size_t k = 0; k < radon_.angles().size(); ++k) {
    const double* yk = y.data() + k * n;
    spec[0] = {yk[0], 0.0};
    for (std::size_t b = 1; b < n / 2; ++b) {
      spec[b] = {yk[2 * b - 1] * inv_root2, yk[2 * b] * inv_root2};
    }
    spec[n / 2] = {yk[n - 1], 0.0};
    fft_->inverse(spec.data(), buf.data());
    for (std::size_t j = 0; j < d; ++j) sino[k * d + j] = buf[j] * unit;
  }
}

void SamplingOperator::apply(std::span<const double> in, std::span<double> out) const {
  check_forward(in, out);
  if (!freq_mode_) {
    radon_.apply(in, out);
    return;
  }
  Vector sino(radon_.rows());
  radon_.apply(in, sino);
  encode(sino, out);
}

void SamplingOperator::apply_adjoint(std::span<const double> in, std::span<double> out) const {
  check_adjoint(in, out);
  if (!freq_mode_) {
    radon_.apply_adjoint(in, out);
    return;
  }
  Vector sino(radon_.rows());
  decode(in, sino);
  radon_.apply_adjoint(sino, out);
}

Vector SamplingOperator::measurements(const Sinogram& sinogram) const {
  sinogram.validate();
  if (sinogram.angles.size() != radon_.angles().size() ||
      sinogram.detectors.count != radon_.detectors().count) {
    throw DimensionError("measurements: sinogram shape does not match the sampling operator");
  }
  if (!freq_mode_) return sinogram.data;
  Vector y(rows());
  encode(sinogram.data, y);
  return y;
}

Vector SamplingOperator::to_sinogram(std::span<const double> y) const {
  if (y.size() != rows()) throw DimensionError("to_sinogram: length mismatch");
  if (!freq_mode_) return {y.begin(), y.end()};
  Vector sino(radon_.rows());
  decode(y, sino);
  return sino;
}

std::vector<MeasurementEntry> SamplingOperator::layout() const {
  std::vector<MeasurementEntry> out;
  const int k_total = static_cast<int>(radon_.angles().size());
  for (int k = 0; k < k_total; ++k) {
    if (!freq_mode_) {
      for (int j = 0; j < radon_.detectors().count; ++j) out.push_back({k, j, false});
      continue;
    }
    const int n = static_cast<int>(padded_);
    out.push_back({k, 0, false});
    for (int b = 1; b < n / 2; ++b) {
      out.push_back({k, b, false});
      out.push_back({k, b, true});
    }
    out.push_back({k, n / 2, false});
  }
  return out;
}

std::shared_ptr<const SamplingOperator> build_sampling_operator(std::span<const double> angles,
                                                                const DetectorGeometry& detectors,
                                                                int side, bool freq_mode) {
  return std::make_shared<const SamplingOperator>(side, std::vector<double>(angles.begin(), angles.end()),
                                                  detectors, freq_mode);
}

Image fbp(const Sinogram& sinogram, int side) {
  sinogram.validate();
  const std::size_t d = sinogram.detectors.count;
  const double tau = sinogram.detectors.pitch;
  const std::size_t n = detail::next_power_of_two(2 * d);
  detail::RealFft fft(n);

  // Band-limited ramp kernel sampled at the detector pitch.
  Vector kernel(n, 0.0);
  kernel[0] = 1.0 / (4.0 * tau * tau);
  for (std::size_t k = 1; k < d; k += 2) {
    const double v = -1.0 / (static_cast<double>(k * k) * M_PI * M_PI * tau * tau);
    kernel[k] = v;
    kernel[n - k] = v;
  }
  std::vector<std::complex<double>> kspec(n / 2 + 1);
  fft.forward(kernel.data(), kspec.data());

  Vector filtered(sinogram.data.size());
  Vector buf(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  for (int k = 0; k < sinogram.projections(); ++k) {
    const auto p = sinogram.projection(k);
    std::copy(p.begin(), p.end(), buf.begin());
    std::fill(buf.begin() + d, buf.end(), 0.0);
    fft.forward(buf.data(), spec.data());
    for (std::size_t b = 0; b < spec.size(); ++b) spec[b] *= kspec[b];
    fft.inverse(spec.data(), buf.data());
    const double scale = tau / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) filtered[k * d + j] = buf[j] * scale;
  }

  const RadonOperator back(side, sinogram.angles, sinogram.detectors);
  Image out(side);
  back.apply_adjoint(filtered, out.pixels());
  // apply_adjoint carries the pixel-area/pitch weight; FBP wants plain
  // interpolated samples.
  const double pixel = 2.0 / side;
  const double scale = (M_PI / sinogram.projections()) * tau / (pixel * pixel);
  for (double& v : out.pixels()) v *= scale;
  return out;
}

}  // namespace mrecon::ct
