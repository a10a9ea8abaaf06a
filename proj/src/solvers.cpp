#include "mrecon/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "mrecon/kernels.hpp"

namespace mrecon::solvers {

void SolverConfig::validate() const {
  if (r < 1) throw std::invalid_argument("SolverConfig: r must be ≥ 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be ≥ 1");
  if (!(tau >= 0.0)) throw std::invalid_argument("SolverConfig: tau must be ≥ 0");
  if (mu0 && !(*mu0 > 0.0)) throw std::invalid_argument("SolverConfig: mu0 must be > 0");
  if (!(rho_safety >= 1.0)) throw std::invalid_argument("SolverConfig: rho_safety must be ≥ 1");
}

Vector hard_threshold(std::span<const double> s, std::size_t r) {
  const std::size_t n = s.size();
  if (r >= n) return {s.begin(), s.end()};
  Vector out(n, 0.0);
  if (r == 0) return out;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(r - 1), idx.end(),
                   [&](std::size_t i, std::size_t j) {
                     const double a = std::fabs(s[i]);
                     const double b = std::fabs(s[j]);
                     return a > b || (a == b && i < j);
                   });
  for (std::size_t k = 0; k < r; ++k) out[idx[k]] = s[idx[k]];
  return out;
}

Vector soft_threshold(std::span<const double> s, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("soft_threshold: t must be ≥ 0");
  Vector out(s.size());
  kernels::soft_threshold(s, t, out);
  return out;
}

std::size_t count_nonzeros(std::span<const double> s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](double v) { return v != 0.0; }));
}

double residual_sq(const LinearOperator& h, std::span<const double> y, std::span<const double> s) {
  const Vector hs = h.apply(s);
  return kernels::diff_norm2_sq(y, hs);
}

namespace {

void check_dims(const LinearOperator& h, std::span<const double> y, std::span<const double> s) {
  if (y.size() != h.rows() || s.size() != h.cols()) {
    throw DimensionError("solver: y has " + std::to_string(y.size()) + " entries and s has " +
                         std::to_string(s.size()) + ", operator is " + std::to_string(h.rows()) +
                         "×" + std::to_string(h.cols()));
  }
}

// Current iterate with its cached image H s and residual.
struct State {
  Vector s;
  Vector hs;
  double res = 0.0;
};

State make_state(const LinearOperator& h, std::span<const double> y, Vector s) {
  State st;
  st.hs = h.apply(s);
  st.res = kernels::diff_norm2_sq(y, st.hs);
  st.s = std::move(s);
  return st;
}

// Hᵀ(y − H s) from the cached image.
Vector gradient(const LinearOperator& h, std::span<const double> y, const State& st) {
  Vector resid(y.size());
  kernels::subtract(y, st.hs, resid);
  return h.apply_adjoint(resid);
}

struct Candidate {
  Vector s_hat;
  Vector hs_hat;
  double res = 0.0;
};

Candidate evaluate(const LinearOperator& h, std::span<const double> y, const State& st,
                   std::span<const double> grad, double mu, std::size_t r) {
  Vector z(st.s.begin(), st.s.end());
  kernels::axpy(mu, grad, z);
  Candidate c;
  c.s_hat = hard_threshold(z, r);
  c.hs_hat = h.apply(c.s_hat);
  c.res = kernels::diff_norm2_sq(y, c.hs_hat);
  return c;
}

StepSearchResult search(const LinearOperator& h, std::span<const double> y, const State& st,
                        std::span<const double> grad, std::size_t r, double mu_in, bool first) {
  StepSearchResult out;
  Candidate c = evaluate(h, y, st, grad, mu_in, r);
  double mu = mu_in;
  if (first && c.res <= st.res) {
    for (int k = 1; k <= kMaxDoublings; ++k) {
      const double trial_mu = mu * 2.0;
      Candidate trial = evaluate(h, y, st, grad, trial_mu, r);
      if (!(trial.res <= st.res)) break;
      mu = trial_mu;
      c = std::move(trial);
      out.doublings = k;
    }
  } else {
    int k = 0;
    while (!(c.res <= st.res)) {
      if (++k > kMaxShrinks) {
        throw StepSizeError("step_size_search: no admissible step after " +
                            std::to_string(kMaxShrinks) +
                            " shrinks; the operator and its adjoint are likely inconsistent");
      }
      mu = mu_in * std::pow(kShrinkFactor, k);
      c = evaluate(h, y, st, grad, mu, r);
    }
    out.shrinks = k;
  }
  out.mu = mu;
  out.s_hat = std::move(c.s_hat);
  out.h_s_hat = std::move(c.hs_hat);
  out.residual_sq = c.res;
  return out;
}

// α minimizing ‖y − (Hc + α(Hc − Ha))‖²; 0 if the direction is degenerate.
double line_alpha(std::span<const double> hc, std::span<const double> ha, std::span<const double> y,
                  Vector& dir, Vector& resid) {
  kernels::subtract(hc, ha, dir);
  const double denom = kernels::norm2_sq(dir);
  if (denom == 0.0) return 0.0;
  kernels::subtract(y, hc, resid);
  return kernels::dot(dir, resid) / denom;
}

struct Setup {
  double rho_hat = 0.0;
  double mu0 = 0.0;
};

Setup prepare(const LinearOperator& h, const SolverConfig& config) {
  config.validate();
  Setup s;
  if (config.rho) {
    s.rho_hat = *config.rho * config.rho_safety;
  } else if (!config.mu0 || config.step_policy == StepPolicy::adaptive) {
    s.rho_hat = spectral_norm(h, config.spectral_tol, config.spectral_max_iters, config.seed).rho *
                config.rho_safety;
  }
  if (config.mu0) {
    s.mu0 = *config.mu0;
  } else {
    if (s.rho_hat == 0.0) {
      // H = 0: any step is a no-op.
      s.mu0 = 1.0;
    } else {
      s.mu0 = 1.0 / (s.rho_hat * s.rho_hat);
    }
  }
  return s;
}

double normalized_change(std::span<const double> a, std::span<const double> b) {
  return kernels::diff_norm2_sq(a, b) / static_cast<double>(a.size());
}

}  // namespace

Vector iht_step(std::span<const double> s_q, double mu, const LinearOperator& h,
                std::span<const double> y, std::size_t r) {
  check_dims(h, y, s_q);
  if (!(mu > 0.0)) throw std::invalid_argument("iht_step: mu must be > 0");
  const State st = make_state(h, y, Vector(s_q.begin(), s_q.end()));
  const Vector g = gradient(h, y, st);
  Vector z(s_q.begin(), s_q.end());
  kernels::axpy(mu, g, z);
  return hard_threshold(z, r);
}

StepSearchResult step_size_search(std::span<const double> s_q, const LinearOperator& h,
                                  std::span<const double> y, std::size_t r, double mu_in,
                                  bool first_iteration) {
  check_dims(h, y, s_q);
  if (!(mu_in > 0.0)) throw std::invalid_argument("step_size_search: mu must be > 0");
  const State st = make_state(h, y, Vector(s_q.begin(), s_q.end()));
  const Vector g = gradient(h, y, st);
  return search(h, y, st, g, r, mu_in, first_iteration);
}

LinePoint overrelax_line(std::span<const double> current, std::span<const double> anchor,
                         const LinearOperator& h, std::span<const double> y) {
  check_dims(h, y, current);
  check_dims(h, y, anchor);
  const Vector hc = h.apply(current);
  const Vector ha = h.apply(anchor);
  Vector dir(y.size());
  Vector resid(y.size());
  LinePoint lp;
  lp.alpha = line_alpha(hc, ha, y, dir, resid);
  lp.point.resize(current.size());
  kernels::extrapolate(current, anchor, lp.alpha, lp.point);
  return lp;
}

SolverResult mask_iht(std::span<const double> y, const LinearOperator& h,
                      const SolverConfig& config, std::span<const double> s0) {
  check_dims(h, y, s0);
  const Setup setup = prepare(h, config);
  SolverResult result;
  result.rho_hat = setup.rho_hat;
  State st = make_state(h, y, hard_threshold(s0, config.r));
  result.trace.initial_residual_sq = st.res;

  double mu = setup.mu0;
  for (int q = 1; q <= config.max_iters; ++q) {
    const Vector g = gradient(h, y, st);
    IterationRecord rec;
    rec.q = q;
    rec.previous_residual_sq = st.res;
    StepSearchResult step;
    if (config.step_policy == StepPolicy::adaptive) {
      step = search(h, y, st, g, config.r, mu, q == 1);
    } else {
      Candidate c = evaluate(h, y, st, g, mu, config.r);
      step.mu = mu;
      step.s_hat = std::move(c.s_hat);
      step.h_s_hat = std::move(c.hs_hat);
      step.residual_sq = c.res;
    }
    mu = step.mu;
    rec.mu = step.mu;
    rec.shrinks = step.shrinks;
    rec.doublings = step.doublings;
    rec.hat_residual_sq = step.residual_sq;
    rec.step_sq = kernels::diff_norm2_sq(step.s_hat, st.s);

    const double change = rec.step_sq / static_cast<double>(st.s.size());
    st.s = std::move(step.s_hat);
    st.hs = std::move(step.h_s_hat);
    st.res = step.residual_sq;
    rec.residual_sq = st.res;
    result.trace.records.push_back(rec);
    result.iterations = q;
    if (change < config.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.s = std::move(st.s);
  return result;
}

SolverResult mask_dore(std::span<const double> y, const LinearOperator& h,
                       const SolverConfig& config, std::span<const double> s0) {
  check_dims(h, y, s0);
  const Setup setup = prepare(h, config);
  SolverResult result;
  result.rho_hat = setup.rho_hat;
  State st = make_state(h, y, hard_threshold(s0, config.r));
  State prev = st;  // s⁽⁻¹⁾ := s⁽⁰⁾
  result.trace.initial_residual_sq = st.res;

  const std::size_t m = y.size();
  const std::size_t p = st.s.size();
  Vector dir(m), resid(m), hz_bar(m), z_bar(p), z_tilde(p);

  double mu = setup.mu0;
  for (int q = 1; q <= config.max_iters; ++q) {
    const Vector g = gradient(h, y, st);
    IterationRecord rec;
    rec.q = q;
    rec.previous_residual_sq = st.res;

    // 1. mask IHT step with step-size selection
    StepSearchResult step;
    if (config.step_policy == StepPolicy::adaptive) {
      step = search(h, y, st, g, config.r, mu, q == 1);
    } else {
      Candidate c = evaluate(h, y, st, g, mu, config.r);
      step.mu = mu;
      step.s_hat = std::move(c.s_hat);
      step.h_s_hat = std::move(c.hs_hat);
      step.residual_sq = c.res;
    }
    mu = step.mu;
    rec.mu = step.mu;
    rec.shrinks = step.shrinks;
    rec.doublings = step.doublings;
    rec.hat_residual_sq = step.residual_sq;
    rec.step_sq = kernels::diff_norm2_sq(step.s_hat, st.s);

    // 2. first overrelaxation along ŝ − s⁽q⁾
    const double a1 = line_alpha(step.h_s_hat, st.hs, y, dir, resid);
    kernels::extrapolate(step.s_hat, st.s, a1, z_bar);
    kernels::extrapolate(step.h_s_hat, st.hs, a1, hz_bar);
    rec.line_residual_sq = kernels::diff_norm2_sq(y, hz_bar);

    // 3. second overrelaxation along z̄ − s⁽q−1⁾
    const double a2 = line_alpha(hz_bar, prev.hs, y, dir, resid);
    kernels::extrapolate(z_bar, prev.s, a2, z_tilde);
    rec.alpha1 = a1;
    rec.alpha2 = a2;

    // 4. threshold
    Vector s_tilde = hard_threshold(z_tilde, config.r);
    Vector hs_tilde = h.apply(s_tilde);
    const double res_tilde = kernels::diff_norm2_sq(y, hs_tilde);

    // 5. decision (strict)
    State next;
    if (res_tilde < step.residual_sq) {
      rec.decision = 1;
      next.s = std::move(s_tilde);
      next.hs = std::move(hs_tilde);
      next.res = res_tilde;
    } else {
      next.s = std::move(step.s_hat);
      next.hs = std::move(step.h_s_hat);
      next.res = step.residual_sq;
    }
    const double change = normalized_change(next.s, st.s);
    prev = std::move(st);
    st = std::move(next);
    rec.residual_sq = st.res;
    result.trace.records.push_back(rec);
    result.iterations = q;
    if (change < config.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.s = std::move(st.s);
  return result;
}

SolverResult mask_ista(std::span<const double> y, const LinearOperator& h,
                       const SolverConfig& config, std::span<const double> s0) {
  check_dims(h, y, s0);
  SolverConfig fixed = config;
  fixed.step_policy = StepPolicy::constant;
  fixed.mu0.reset();
  const Setup setup = prepare(h, fixed);
  SolverResult result;
  result.rho_hat = setup.rho_hat;
  const double mu = setup.mu0;
  const double t = mu * config.tau;

  State st = make_state(h, y, Vector(s0.begin(), s0.end()));
  result.trace.initial_residual_sq = st.res;
  Vector z(st.s.size());
  for (int q = 1; q <= config.max_iters; ++q) {
    const Vector g = gradient(h, y, st);
    IterationRecord rec;
    rec.q = q;
    rec.mu = mu;
    rec.previous_residual_sq = st.res;
    std::copy(st.s.begin(), st.s.end(), z.begin());
    kernels::axpy(mu, g, z);
    Vector next(z.size());
    kernels::soft_threshold(z, t, next);
    rec.step_sq = kernels::diff_norm2_sq(next, st.s);
    const double change = rec.step_sq / static_cast<double>(next.size());
    st = make_state(h, y, std::move(next));
    rec.residual_sq = st.res;
    rec.hat_residual_sq = st.res;
    double l1 = 0.0;
    for (double v : st.s) l1 += std::fabs(v);
    rec.objective = 0.5 * st.res + config.tau * l1;
    result.trace.records.push_back(rec);
    result.iterations = q;
    if (change < config.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.s = std::move(st.s);
  return result;
}

double tau_from_rule(const LinearOperator& h, std::span<const double> y, double factor) {
  const Vector hty = h.apply_adjoint(y);
  return factor * kernels::max_abs(hty);
}

Vector initialize_from_fbp(const Image& fbp_image, const WaveletSpec& spec, const Mask& mask,
                           const IdentifiableSet& iset, std::size_t r) {
  if (fbp_image.side() != spec.size || mask.side() != spec.size ||
      iset.full_size() != spec.coefficient_count()) {
    throw DimensionError("initialize_from_fbp: dimension mismatch");
  }
  const Image masked = embed(restrict(fbp_image, mask), mask);
  const Vector coeffs = forward_dwt2(masked, spec);
  return hard_threshold(restrict(coeffs, iset), r);
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "q,residual_sq,mu,alpha1,alpha2,decision,shrinks\n";
  char line[256];
  for (const auto& r : trace.records) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.q, r.residual_sq, r.mu,
                  r.alpha1, r.alpha2, r.decision, r.shrinks);
    os << line;
  }
}

}  // namespace mrecon::solvers
