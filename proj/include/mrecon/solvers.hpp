#pragma once

// Sparse least-squares solvers over identifiable coefficients s_I:
//
//   min ‖y − H s‖₂²  s.t. ‖s‖₀ ≤ r        (mask IHT, mask DORE)
//   min ½‖y − H s‖₂² + τ‖s‖₁             (mask ISTA)
//
// H is any LinearOperator; the mask structure lives inside H (see
// MaskedSynthesisOperator), so the same code runs the full-mask variants.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrecon/image.hpp"
#include "mrecon/linear_operator.hpp"
#include "mrecon/mask.hpp"
#include "mrecon/wavelet.hpp"

namespace mrecon::solvers {

/// Raised when the step-size shrink loop exceeds its cap. With a correct
/// operator/adjoint pair the loop terminates once μ ≤ 1/ρ_H², so hitting
/// the cap means H and Hᵀ disagree.
class StepSizeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr double kShrinkFactor = 0.9;
inline constexpr int kMaxShrinks = 10000;
inline constexpr int kMaxDoublings = 60;

enum class StepPolicy {
  adaptive,  // doubling in iteration 1, then 0.9-shrinking
  constant,  // μ fixed at the initial value (classic IHT)
};

struct SolverConfig {
  std::size_t r = 1;
  double epsilon = 1e-14;
  int max_iters = 100000;
  double tau = 0.0;
  StepPolicy step_policy = StepPolicy::adaptive;
  /// Initial step μ⁽⁰⁾. Unset selects 1/ρ̂², ρ̂ = rho_safety · spectral_norm(H).
  std::optional<double> mu0;
  double rho_safety = kSpectralSafety;
  /// Precomputed raw spectral norm of H, skipping the power iteration.
  std::optional<double> rho;
  double spectral_tol = 1e-10;
  int spectral_max_iters = 5000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct IterationRecord {
  int q = 0;                  // iteration index (1-based)
  double residual_sq = 0.0;   // ‖y − H s⁽q⁾‖² after the iteration
  double mu = 0.0;            // accepted step
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  int decision = 0;           // 1 when DORE kept the overrelaxed point
  int shrinks = 0;
  int doublings = 0;
  // Diagnostics for the descent bound:
  double previous_residual_sq = 0.0;  // ‖y − H s⁽q−1⁾‖²
  double hat_residual_sq = 0.0;       // ‖y − H ŝ‖²
  double step_sq = 0.0;               // ‖ŝ − s⁽q−1⁾‖²
  double line_residual_sq = 0.0;      // DORE: ‖y − H z̄‖²
  double objective = 0.0;             // ISTA: ½‖y − Hs‖² + τ‖s‖₁
};

struct IterationTrace {
  double initial_residual_sq = 0.0;
  std::vector<IterationRecord> records;
};

struct SolverResult {
  Vector s;
  IterationTrace trace;
  bool converged = false;
  int iterations = 0;
  double rho_hat = 0.0;  // safety-factored spectral norm used for μ⁽⁰⁾
};

/// T_r: keeps the r largest-magnitude entries (ties → lower index).
Vector hard_threshold(std::span<const double> s, std::size_t r);
Vector soft_threshold(std::span<const double> s, double t);
std::size_t count_nonzeros(std::span<const double> s);

double residual_sq(const LinearOperator& h, std::span<const double> y, std::span<const double> s);

/// ŝ = T_r(s + μ Hᵀ(y − H s)).
Vector iht_step(std::span<const double> s_q, double mu, const LinearOperator& h,
                std::span<const double> y, std::size_t r);

struct StepSearchResult {
  double mu = 0.0;
  Vector s_hat;
  Vector h_s_hat;          // H ŝ
  double residual_sq = 0.0;
  int shrinks = 0;
  int doublings = 0;
};

/// Step-size selection for one iteration. On the first iteration μ is
/// doubled while the non-increase condition holds and the last passing μ
/// is kept; if the initial guess already fails, or on later iterations,
/// μ_k = mu_in · 0.9^k for the smallest k that passes.
StepSearchResult step_size_search(std::span<const double> s_q, const LinearOperator& h,
                                  std::span<const double> y, std::size_t r, double mu_in,
                                  bool first_iteration);

struct LinePoint {
  double alpha = 0.0;
  Vector point;  // current + α (current − anchor)
};

/// Exact minimizer of ‖y − H s‖² on the line through `current` and
/// `anchor`. α = 0 when H(current − anchor) = 0.
LinePoint overrelax_line(std::span<const double> current, std::span<const double> anchor,
                         const LinearOperator& h, std::span<const double> y);

SolverResult mask_iht(std::span<const double> y, const LinearOperator& h,
                      const SolverConfig& config, std::span<const double> s0);
SolverResult mask_dore(std::span<const double> y, const LinearOperator& h,
                       const SolverConfig& config, std::span<const double> s0);
SolverResult mask_ista(std::span<const double> y, const LinearOperator& h,
                       const SolverConfig& config, std::span<const double> s0);

/// τ = factor · ‖Hᵀ y‖∞
double tau_from_rule(const LinearOperator& h, std::span<const double> y, double factor);

/// s₀ = T_r(restrict_I(Ψᵀ(x_fbp zeroed outside M))).
Vector initialize_from_fbp(const Image& fbp_image, const WaveletSpec& spec, const Mask& mask,
                           const IdentifiableSet& iset, std::size_t r);

/// CSV with columns q,residual_sq,mu,alpha1,alpha2,decision,shrinks.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

}  // namespace mrecon::solvers
