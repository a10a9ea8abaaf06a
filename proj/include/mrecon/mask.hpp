#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mrecon/image.hpp"
#include "mrecon/wavelet.hpp"

namespace mrecon {

/// Binary pixel set M on an n×n grid. Pixels are indexed row-major.
class Mask {
 public:
  Mask() = default;
  /// `membership` entries are treated as booleans (nonzero = inside).
  Mask(int side, std::vector<std::uint8_t> membership);

  static Mask full(int side);
  /// Pixels whose centers satisfy `inside(x, y)` in normalized coordinates.
  static Mask from_predicate(int side, const std::function<bool(double, double)>& inside);
  /// Inscribed circular field of view (pixel centers with x² + y² ≤ 1).
  static Mask field_of_view(int side);

  int side() const { return side_; }
  std::size_t pixel_count() const { return membership_.size(); }
  /// p_M
  std::size_t count() const { return indices_.size(); }
  bool contains(std::size_t flat) const { return membership_[flat] != 0; }
  bool contains(int row, int col) const {
    return membership_[static_cast<std::size_t>(row) * side_ + col] != 0;
  }
  /// Row-major list of the flat indices inside the mask.
  std::span<const std::size_t> indices() const { return indices_; }
  std::span<const std::uint8_t> membership() const { return membership_; }

  bool subset_of(const Mask& other) const;
  bool operator==(const Mask& other) const {
    return side_ == other.side_ && membership_ == other.membership_;
  }

 private:
  int side_ = 0;
  std::vector<std::uint8_t> membership_;
  std::vector<std::size_t> indices_;
};

/// Coefficient indices I whose basis images touch the mask.
class IdentifiableSet {
 public:
  IdentifiableSet() = default;
  /// `indices` must be strictly increasing and below `full_size`.
  IdentifiableSet(std::vector<std::size_t> indices, std::size_t full_size);

  static IdentifiableSet all(std::size_t full_size);

  std::size_t count() const { return indices_.size(); }
  std::size_t full_size() const { return full_size_; }
  std::span<const std::size_t> indices() const { return indices_; }
  bool operator==(const IdentifiableSet&) const = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t full_size_ = 0;
};

/// Default relative tolerance for the support test.
inline constexpr double kSupportTolerance = 1e-12;

/// I = columns j of Ψ_{M,:} with max_{i∈M} |Ψ_ij| > tol · max_i |Ψ_ij|.
IdentifiableSet identifiable_set(const WaveletSpec& spec, const Mask& mask,
                                 double tol = kSupportTolerance);

/// x_M, in row-major mask order.
Vector restrict(const Image& image, const Mask& mask);
void restrict(std::span<const double> image, const Mask& mask, std::span<double> out);
/// Image equal to x_M inside the mask and exactly zero outside.
Image embed(std::span<const double> values, const Mask& mask);
void embed(std::span<const double> values, const Mask& mask, std::span<double> image);

/// Places s_I into a zero vector of length p.
void lift(std::span<const double> s_i, const IdentifiableSet& iset, std::span<double> full);
Vector lift(std::span<const double> s_i, const IdentifiableSet& iset);
void restrict(std::span<const double> full, const IdentifiableSet& iset, std::span<double> s_i);
Vector restrict(std::span<const double> full, const IdentifiableSet& iset);

}  // namespace mrecon
