#pragma once

#include <cstddef>

namespace mrecon::kernels::scalar {
double dot(const double* x, const double* y, std::size_t n);
double norm2_sq(const double* x, std::size_t n);
double diff_norm2_sq(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void extrapolate(const double* x, const double* y, double a, double* out, std::size_t n);
void subtract(const double* x, const double* y, double* out, std::size_t n);
void soft_threshold(const double* x, double t, double* out, std::size_t n);
}  // namespace mrecon::kernels::scalar

#if defined(MRECON_HAVE_AVX2)
namespace mrecon::kernels::avx2 {
double dot(const double* x, const double* y, std::size_t n);
double norm2_sq(const double* x, std::size_t n);
double diff_norm2_sq(const double* x, const double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void extrapolate(const double* x, const double* y, double a, double* out, std::size_t n);
void subtract(const double* x, const double* y, double* out, std::size_t n);
void soft_threshold(const double* x, double t, double* out, std::size_t n);
}  // namespace mrecon::kernels::avx2
#endif
