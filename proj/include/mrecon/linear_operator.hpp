#pragma once

// Matrix-free linear operators.
//
// An operator maps R^cols → R^rows (forward) and R^rows → R^cols
// (adjoint). Implementations must be reentrant: apply() and
// apply_adjoint() are const and may be called concurrently.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mrecon/image.hpp"
#include "mrecon/mask.hpp"
#include "mrecon/wavelet.hpp"

namespace mrecon {

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;

  /// out = A·in. `in` has cols() entries, `out` rows().
  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;
  /// out = Aᵀ·in.
  virtual void apply_adjoint(std::span<const double> in, std::span<double> out) const = 0;

  Vector apply(std::span<const double> in) const;
  Vector apply_adjoint(std::span<const double> in) const;

 protected:
  void check_forward(std::span<const double> in, std::span<double> out) const;
  void check_adjoint(std::span<const double> in, std::span<double> out) const;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

/// Row-major dense matrix.
class DenseOperator final : public LinearOperator {
 public:
  DenseOperator(std::size_t rows, std::size_t cols, Vector entries);

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return cols_; }
  void apply(std::span<const double> in, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> in, std::span<double> out) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  double at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  Vector entries_;
};

/// Operator assembled from a forward/adjoint callable pair.
class FunctionOperator final : public LinearOperator {
 public:
  using Map = std::function<void(std::span<const double>, std::span<double>)>;
  FunctionOperator(std::size_t rows, std::size_t cols, Map forward, Map adjoint);

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return cols_; }
  void apply(std::span<const double> in, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> in, std::span<double> out) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Map forward_;
  Map adjoint_;
};

/// Ψ as an operator on length-n² vectors (forward = synthesis).
class WaveletSynthesisOperator final : public LinearOperator {
 public:
  explicit WaveletSynthesisOperator(WaveletSpec spec) : spec_(spec) {}

  std::size_t rows() const override { return spec_.coefficient_count(); }
  std::size_t cols() const override { return spec_.coefficient_count(); }
  void apply(std::span<const double> in, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> in, std::span<double> out) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

 private:
  WaveletSpec spec_;
};

/// H = Φ_{:,M} Ψ_{M,I}: maps identifiable coefficients s_I to measurements.
class MaskedSynthesisOperator final : public LinearOperator {
 public:
  MaskedSynthesisOperator(OperatorPtr phi, WaveletSpec spec, Mask mask, IdentifiableSet iset);

  std::size_t rows() const override { return phi_->rows(); }
  std::size_t cols() const override { return iset_.count(); }
  void apply(std::span<const double> in, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> in, std::span<double> out) const override;
  using LinearOperator::apply;
  using LinearOperator::apply_adjoint;

  const WaveletSpec& spec() const { return spec_; }
  const Mask& mask() const { return mask_; }
  const IdentifiableSet& identifiable() const { return iset_; }
  const LinearOperator& sampling() const { return *phi_; }

  /// Image Ψ_{M,I} s_I, zero outside the mask.
  Image synthesize(std::span<const double> s_i) const;

 private:
  OperatorPtr phi_;
  WaveletSpec spec_;
  Mask mask_;
  IdentifiableSet iset_;
};

/// Builds H; validates that Φ acts on n² pixels and that `iset` belongs
/// to the (spec, mask) pair's coefficient space.
std::shared_ptr<const MaskedSynthesisOperator> compose_h(OperatorPtr phi, const WaveletSpec& spec,
                                                         const Mask& mask,
                                                         const IdentifiableSet& iset);

struct SpectralEstimate {
  double rho = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

/// Safety factor applied to spectral estimates before deriving step sizes.
inline constexpr double kSpectralSafety = 1.01;

/// Largest singular value by power iteration on AᵀA from a seeded random
/// start. Stops once successive Rayleigh quotients differ relatively by
/// less than `tol`. The returned rho is the raw estimate; callers bounding
/// step sizes should multiply by kSpectralSafety.
SpectralEstimate spectral_norm(const LinearOperator& op, double tol = 1e-8, int max_iters = 1000,
                               std::uint64_t seed = 1);

/// Materializes an operator column by column (test and diagnostic helper).
DenseOperator materialize(const LinearOperator& op);

}  // namespace mrecon
