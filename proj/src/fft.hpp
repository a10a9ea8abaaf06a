#pragma once

// Thin RAII wrapper over FFTW real-to-complex plans. Plans are created
// with FFTW_UNALIGNED so they can run on std::vector storage, and
// executed through the new-array interface, which is thread-safe.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace mrecon::detail {

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("RealFft: length must be ≥ 2");
    std::vector<double> real(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (forward_ == nullptr || inverse_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  /// Unnormalized X_k = Σ x_j e^{-2πi jk/n}, k = 0..n/2.
  void forward(double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(forward_, in, reinterpret_cast<fftw_complex*>(out));
  }
  /// Unnormalized inverse from the half spectrum. Clobbers `in`.
  void inverse(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

inline std::size_t next_power_of_two(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace mrecon::detail
