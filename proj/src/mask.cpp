#include "mrecon/mask.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mrecon {

Mask::Mask(int side, std::vector<std::uint8_t> membership)
    : side_(side), membership_(std::move(membership)) {
  if (side < 1 || membership_.size() != static_cast<std::size_t>(side) * side) {
    throw DimensionError("Mask: membership size does not match side²");
  }
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    membership_[i] = membership_[i] != 0 ? 1 : 0;
    if (membership_[i]) indices_.push_back(i);
  }
  if (indices_.empty()) throw std::invalid_argument("Mask: empty mask (p_M must be ≥ 1)");
}

Mask Mask::full(int side) {
  return Mask(side, std::vector<std::uint8_t>(static_cast<std::size_t>(side) * side, 1));
}

Mask Mask::from_predicate(int side, const std::function<bool(double, double)>& inside) {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(side) * side, 0);
  for (int r = 0; r < side; ++r) {
    const double y = pixel_y(r, side);
    for (int c = 0; c < side; ++c) {
      m[static_cast<std::size_t>(r) * side + c] = inside(pixel_x(c, side), y) ? 1 : 0;
    }
  }
  return Mask(side, std::move(m));
}

Mask Mask::field_of_view(int side) {
  return from_predicate(side, [](double x, double y) { return x * x + y * y <= 1.0; });
}

bool Mask::subset_of(const Mask& other) const {
  if (side_ != other.side_) throw DimensionError("Mask::subset_of: side mismatch");
  for (std::size_t i : indices_) {
    if (!other.membership_[i]) return false;
  }
  return true;
}

IdentifiableSet::IdentifiableSet(std::vector<std::size_t> indices, std::size_t full_size)
    : indices_(std::move(indices)), full_size_(full_size) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= full_size_ || (k > 0 && indices_[k] <= indices_[k - 1])) {
      throw std::invalid_argument("IdentifiableSet: indices must be strictly increasing and < p");
    }
  }
}

IdentifiableSet IdentifiableSet::all(std::size_t full_size) {
  std::vector<std::size_t> idx(full_size);
  for (std::size_t i = 0; i < full_size; ++i) idx[i] = i;
  return IdentifiableSet(std::move(idx), full_size);
}

namespace {

// Significant entries of one 1-D basis vector: (position, |value| / max|value|).
struct Support {
  std::vector<std::pair<int, double>> entries;
};

// Decomposition depth owning a 1-D coefficient index in a `levels`-deep
// Mallat layout; scaling coefficients belong to the deepest level.
int owning_level(int index, int side, int levels) {
  if (index < (side >> levels)) return levels;
  int k = 1;
  while (index < (side >> k)) ++k;
  return k;
}

}  // namespace

IdentifiableSet identifiable_set(const WaveletSpec& spec, const Mask& mask, double tol) {
  if (mask.side() != spec.size) throw DimensionError("identifiable_set: mask/grid side mismatch");
  const int n = spec.size;
  const int levels = spec.levels;

  // A 2-D basis image at level k is the outer product of two k-level 1-D
  // basis vectors, so probing reduces to 1-D syntheses of canonical vectors.
  std::vector<std::vector<Support>> table(levels + 1, std::vector<Support>(n));
  Vector basis(n);
  Vector scratch(n);
  for (int k = 1; k <= levels; ++k) {
    for (int i = 0; i < n; ++i) {
      std::fill(basis.begin(), basis.end(), 0.0);
      basis[i] = 1.0;
      inverse_dwt1(basis, spec.family, k, scratch);
      double peak = 0.0;
      for (double v : basis) peak = std::max(peak, std::fabs(v));
      auto& sup = table[k][i].entries;
      for (int t = 0; t < n; ++t) {
        const double a = std::fabs(basis[t]) / peak;
        if (a > tol) sup.emplace_back(t, a);
      }
    }
  }

  const auto membership = mask.membership();
  std::vector<std::size_t> idx;
  for (int row = 0; row < n; ++row) {
    const int lr = owning_level(row, n, levels);
    for (int col = 0; col < n; ++col) {
      const int k = std::min(lr, owning_level(col, n, levels));
      const auto& u = table[k][row].entries;
      const auto& v = table[k][col].entries;
      bool hit = false;
      for (const auto& [r, a] : u) {
        const std::uint8_t* mrow = membership.data() + static_cast<std::size_t>(r) * n;
        for (const auto& [c, b] : v) {
          if (mrow[c] && a * b > tol) {
            hit = true;
            break;
          }
        }
        if (hit) break;
      }
      if (hit) idx.push_back(static_cast<std::size_t>(row) * n + col);
    }
  }
  return IdentifiableSet(std::move(idx), spec.coefficient_count());
}

void restrict(std::span<const double> image, const Mask& mask, std::span<double> out) {
  if (image.size() != mask.pixel_count() || out.size() != mask.count()) {
    throw DimensionError("restrict: dimension mismatch");
  }
  const auto idx = mask.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = image[idx[k]];
}

Vector restrict(const Image& image, const Mask& mask) {
  if (image.side() != mask.side()) throw DimensionError("restrict: image/mask side mismatch");
  Vector out(mask.count());
  restrict(image.pixels(), mask, out);
  return out;
}

void embed(std::span<const double> values, const Mask& mask, std::span<double> image) {
  if (values.size() != mask.count() || image.size() != mask.pixel_count()) {
    throw DimensionError("embed: expected " + std::to_string(mask.count()) + " values, got " +
                         std::to_string(values.size()));
  }
  std::fill(image.begin(), image.end(), 0.0);
  const auto idx = mask.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) image[idx[k]] = values[k];
}

Image embed(std::span<const double> values, const Mask& mask) {
  Image out(mask.side());
  embed(values, mask, out.pixels());
  return out;
}

void lift(std::span<const double> s_i, const IdentifiableSet& iset, std::span<double> full) {
  if (s_i.size() != iset.count() || full.size() != iset.full_size()) {
    throw DimensionError("lift: dimension mismatch");
  }
  std::fill(full.begin(), full.end(), 0.0);
  const auto idx = iset.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = s_i[k];
}

Vector lift(std::span<const double> s_i, const IdentifiableSet& iset) {
  Vector full(iset.full_size());
  lift(s_i, iset, full);
  return full;
}

void restrict(std::span<const double> full, const IdentifiableSet& iset, std::span<double> s_i) {
  if (s_i.size() != iset.count() || full.size() != iset.full_size()) {
    throw DimensionError("restrict: dimension mismatch");
  }
  const auto idx = iset.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) s_i[k] = full[idx[k]];
}

Vector restrict(std::span<const double> full, const IdentifiableSet& iset) {
  Vector s_i(iset.count());
  restrict(full, iset, s_i);
  return s_i;
}

}  // namespace mrecon
