#include "mrecon/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace mrecon::kernels {

namespace {

constexpr KernelTable kScalarTable{
    scalar::dot,         scalar::norm2_sq, scalar::diff_norm2_sq, scalar::max_abs,
    scalar::axpy,        scalar::extrapolate, scalar::subtract,   scalar::soft_threshold,
};

#if defined(MRECON_HAVE_AVX2)
constexpr KernelTable kAvx2Table{
    avx2::dot,         avx2::norm2_sq,    avx2::diff_norm2_sq, avx2::max_abs,
    avx2::axpy,        avx2::extrapolate, avx2::subtract,      avx2::soft_threshold,
};
#endif

Isa detect() {
  if (const char* env = std::getenv("MRECON_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: length mismatch");
}

}  // namespace

bool avx2_available() {
#if defined(MRECON_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable& table(Isa isa) {
#if defined(MRECON_HAVE_AVX2)
  if (isa == Isa::avx2 && avx2_available()) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size());
  return active().dot(x.data(), y.data(), x.size());
}

double norm2_sq(std::span<const double> x) { return active().norm2_sq(x.data(), x.size()); }

double diff_norm2_sq(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size());
  return active().diff_norm2_sq(x.data(), y.data(), x.size());
}

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size());
  active().axpy(a, x.data(), y.data(), x.size());
}

void extrapolate(std::span<const double> x, std::span<const double> y, double a,
                 std::span<double> out) {
  check_same(x.size(), y.size());
  check_same(x.size(), out.size());
  active().extrapolate(x.data(), y.data(), a, out.data(), x.size());
}

void subtract(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  check_same(x.size(), y.size());
  check_same(x.size(), out.size());
  active().subtract(x.data(), y.data(), out.data(), x.size());
}

void soft_threshold(std::span<const double> x, double t, std::span<double> out) {
  check_same(x.size(), out.size());
  active().soft_threshold(x.data(), t, out.data(), x.size());
}

}  // namespace mrecon::kernels
