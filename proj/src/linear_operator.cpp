#include "mrecon/linear_operator.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mrecon/kernels.hpp"

namespace mrecon {

void LinearOperator::check_forward(std::span<const double> in, std::span<double> out) const {
  if (in.size() != cols() || out.size() != rows()) {
    throw DimensionError("operator apply: expected " + std::to_string(cols()) + " -> " +
                         std::to_string(rows()) + ", got " + std::to_string(in.size()) + " -> " +
                         std::to_string(out.size()));
  }
}

void LinearOperator::check_adjoint(std::span<const double> in, std::span<double> out) const {
  if (in.size() != rows() || out.size() != cols()) {
    throw DimensionError("operator adjoint: expected " + std::to_string(rows()) + " -> " +
                         std::to_string(cols()) + ", got " + std::to_string(in.size()) + " -> " +
                         std::to_string(out.size()));
  }
}

Vector LinearOperator::apply(std::span<const double> in) const {
  Vector out(rows());
  apply(in, out);
  return out;
}

Vector LinearOperator::apply_adjoint(std::span<const double> in) const {
  Vector out(cols());
  apply_adjoint(in, out);
  return out;
}

DenseOperator::DenseOperator(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0 || entries_.size() != rows * cols) {
    throw DimensionError("DenseOperator: entry count does not match rows×cols");
  }
}

void DenseOperator::apply(std::span<const double> in, std::span<double> out) const {
  check_forward(in, out);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r] = kernels::dot(std::span(entries_).subspan(r * cols_, cols_), in);
  }
}

void DenseOperator::apply_adjoint(std::span<const double> in, std::span<double> out) const {
  check_adjoint(in, out);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    kernels::axpy(in[r], std::span(entries_).subspan(r * cols_, cols_), out);
  }
}

FunctionOperator::FunctionOperator(std::size_t rows, std::size_t cols, Map forward, Map adjoint)
    : rows_(rows), cols_(cols), forward_(std::move(forward)), adjoint_(std::move(adjoint)) {
  if (rows == 0 || cols == 0) throw DimensionError("FunctionOperator: dims must be ≥ 1");
}

void FunctionOperator::apply(std::span<const double> in, std::span<double> out) const {
  check_forward(in, out);
  forward_(in, out);
}

void FunctionOperator::apply_adjoint(std::span<const double> in, std::span<double> out) const {
  check_adjoint(in, out);
  adjoint_(in, out);
}

void WaveletSynthesisOperator::apply(std::span<const double> in, std::span<double> out) const {
  check_forward(in, out);
  Vector scratch(spec_.size);
  inverse_dwt2(in, out, spec_, scratch);
}

void WaveletSynthesisOperator::apply_adjoint(std::span<const double> in,
                                             std::span<double> out) const {
  check_adjoint(in, out);
  Vector scratch(spec_.size);
  forward_dwt2(in, out, spec_, scratch);
}

MaskedSynthesisOperator::MaskedSynthesisOperator(OperatorPtr phi, WaveletSpec spec, Mask mask,
                                                 IdentifiableSet iset)
    : phi_(std::move(phi)), spec_(spec), mask_(std::move(mask)), iset_(std::move(iset)) {
  if (!phi_) throw std::invalid_argument("compose_h: null sampling operator");
  const std::size_t p = spec_.coefficient_count();
  if (phi_->cols() != p) {
    throw DimensionError("compose_h: sampling operator acts on " + std::to_string(phi_->cols()) +
                         " pixels, grid has " + std::to_string(p));
  }
  if (mask_.side() != spec_.size) throw DimensionError("compose_h: mask side mismatch");
  if (iset_.full_size() != p) throw DimensionError("compose_h: identifiable set size mismatch");
  if (iset_.count() == 0) throw DimensionError("compose_h: empty identifiable set");
}

void MaskedSynthesisOperator::apply(std::span<const double> in, std::span<double> out) const {
  check_forward(in, out);
  const std::size_t p = spec_.coefficient_count();
  Vector full(p);
  Vector scratch(spec_.size);
  lift(in, iset_, full);
  inverse_dwt2(full, full, spec_, scratch);
  const auto member = mask_.membership();
  for (std::size_t i = 0; i < p; ++i) {
    if (!member[i]) full[i] = 0.0;
  }
  phi_->apply(full, out);
}

void MaskedSynthesisOperator::apply_adjoint(std::span<const double> in,
                                            std::span<double> out) const {
  check_adjoint(in, out);
  const std::size_t p = spec_.coefficient_count();
  Vector full(p);
  Vector scratch(spec_.size);
  phi_->apply_adjoint(in, full);
  const auto member = mask_.membership();
  for (std::size_t i = 0; i < p; ++i) {
    if (!member[i]) full[i] = 0.0;
  }
  forward_dwt2(full, full, spec_, scratch);
  restrict(full, iset_, out);
}

Image MaskedSynthesisOperator::synthesize(std::span<const double> s_i) const {
  Vector full = lift(s_i, iset_);
  Image x = inverse_dwt2(full, spec_);
  auto px = x.pixels();
  const auto member = mask_.membership();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!member[i]) px[i] = 0.0;
  }
  return x;
}

std::shared_ptr<const MaskedSynthesisOperator> compose_h(OperatorPtr phi, const WaveletSpec& spec,
                                                         const Mask& mask,
                                                         const IdentifiableSet& iset) {
  return std::make_shared<const MaskedSynthesisOperator>(std::move(phi), spec, mask, iset);
}

SpectralEstimate spectral_norm(const LinearOperator& op, double tol, int max_iters,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(op.cols());
  for (double& e : v) e = gauss(rng);
  Vector av(op.rows());
  Vector w(op.cols());

  SpectralEstimate est;
  double nv = std::sqrt(kernels::norm2_sq(v));
  for (double& e : v) e /= nv;
  double previous = -1.0;
  for (int it = 1; it <= max_iters; ++it) {
    op.apply(v, av);
    // Rayleigh quotient of AᵀA at unit v.
    const double lambda = kernels::norm2_sq(av);
    est.iterations_used = it;
    if (lambda == 0.0) {
      // Either A = 0 or v landed in the null space; with a Gaussian start
      // the latter has probability zero.
      est.rho = 0.0;
      est.converged = true;
      return est;
    }
    est.rho = std::sqrt(lambda);
    if (previous > 0.0 && std::fabs(lambda - previous) <= tol * lambda) {
      est.converged = true;
      return est;
    }
    previous = lambda;
    op.apply_adjoint(av, w);
    nv = std::sqrt(kernels::norm2_sq(w));
    if (nv == 0.0) {
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nv;
  }
  return est;
}

DenseOperator materialize(const LinearOperator& op) {
  const std::size_t rows = op.rows();
  const std::size_t cols = op.cols();
  Vector entries(rows * cols);
  Vector e(cols, 0.0);
  Vector col(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) entries[r * cols + j] = col[r];
  }
  return DenseOperator(rows, cols, std::move(entries));
}

}  // namespace mrecon
