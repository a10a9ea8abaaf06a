#pragma once

// Dense vector kernels used by the solvers and operators.
//
// Every kernel has a portable scalar reference in namespace
// `kernels::scalar` and, on x86-64, an AVX2 variant in `kernels::avx2`.
// The unqualified entry points in `kernels` dispatch once at startup on
// the detected CPU features. Elementwise kernels are bit-identical across
// variants; reductions agree to rounding (different summation order).

#include <cstddef>
#include <span>
#include <string_view>

namespace mrecon::kernels {

enum class Isa { scalar, avx2 };

/// ISA selected for this process. Honors MRECON_SIMD=scalar to force the
/// reference path.
Isa active_isa();
std::string_view isa_name(Isa isa);
/// True when the running CPU can execute the AVX2 variants.
bool avx2_available();

double dot(std::span<const double> x, std::span<const double> y);
double norm2_sq(std::span<const double> x);
/// ‖x − y‖₂²
double diff_norm2_sq(std::span<const double> x, std::span<const double> y);
/// max |xᵢ| (0 for empty input)
double max_abs(std::span<const double> x);
/// y ← y + a·x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// out ← x + a·(x − y)
void extrapolate(std::span<const double> x, std::span<const double> y, double a,
                 std::span<double> out);
/// out ← x − y
void subtract(std::span<const double> x, std::span<const double> y, std::span<double> out);
/// out ← sign(x)·max(|x| − t, 0)
void soft_threshold(std::span<const double> x, double t, std::span<double> out);

// Signature table shared by both variants.
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*norm2_sq)(const double*, std::size_t);
  double (*diff_norm2_sq)(const double*, const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*extrapolate)(const double*, const double*, double, double*, std::size_t);
  void (*subtract)(const double*, const double*, double*, std::size_t);
  void (*soft_threshold)(const double*, double, double*, std::size_t);
};

/// Table for a specific ISA. Requesting avx2 on a machine without it
/// returns the scalar table.
const KernelTable& table(Isa isa);

}  // namespace mrecon::kernels
