#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mrecon {

/// Error raised when operands disagree on a size or grid side.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Vector = std::vector<double>;

/// Square n×n pixel grid, row-major. Row 0 is the top of the image (y = +1).
class Image {
 public:
  Image() = default;
  explicit Image(int side) : side_(side), pixels_(static_cast<std::size_t>(side) * side, 0.0) {
    if (side < 1) throw DimensionError("Image: side must be positive");
  }
  Image(int side, Vector pixels) : side_(side), pixels_(std::move(pixels)) {
    if (side < 1 || pixels_.size() != static_cast<std::size_t>(side) * side) {
      throw DimensionError("Image: pixel count does not match side²");
    }
  }

  int side() const { return side_; }
  std::size_t size() const { return pixels_.size(); }

  double& operator()(int row, int col) { return pixels_[static_cast<std::size_t>(row) * side_ + col]; }
  double operator()(int row, int col) const {
    return pixels_[static_cast<std::size_t>(row) * side_ + col];
  }

  std::span<double> pixels() { return pixels_; }
  std::span<const double> pixels() const { return pixels_; }
  const Vector& vector() const { return pixels_; }

  bool operator==(const Image&) const = default;

 private:
  int side_ = 0;
  Vector pixels_;
};

constexpr bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

constexpr int log2_exact(long long v) {
  int l = 0;
  while ((1LL << l) < v) ++l;
  return l;
}

/// Normalized coordinates of a pixel center on the [-1,1]² field.
/// Pixel pitch is 2/n; x grows with the column, y shrinks with the row.
inline double pixel_x(int col, int side) { return -1.0 + (col + 0.5) * (2.0 / side); }
inline double pixel_y(int row, int side) { return 1.0 - (row + 0.5) * (2.0 / side); }

}  // namespace mrecon
