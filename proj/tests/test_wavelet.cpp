#include <doctest.h>

#include <cmath>
#include <random>

#include "mrecon/wavelet.hpp"
#include "support.hpp"

using namespace mrecon;
using testing::Vector;

namespace {

Vector flat(const Image& im) { return im.vector(); }

Eigen::VectorXd as_eigen(const Vector& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

}  // namespace

TEST_CASE("filter taps are orthonormal") {
  for (auto fam : {WaveletFamily::haar, WaveletFamily::daubechies6}) {
    const auto h = lowpass_taps(fam);
    double sum = 0.0, sq = 0.0;
    for (double v : h) {
      sum += v;
      sq += v * v;
    }
    CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-14));
    // Even shifts are orthogonal.
    for (std::size_t s = 2; s < h.size(); s += 2) {
      double c = 0.0;
      for (std::size_t j = 0; j + s < h.size(); ++j) c += h[j] * h[j + s];
      CHECK(std::abs(c) < 1e-15);
    }
  }
}

TEST_CASE("spec construction") {
  CHECK(WaveletSpec::make(WaveletFamily::haar, 128).levels == 5);
  CHECK(WaveletSpec::make(WaveletFamily::haar, 4).levels == 1);
  CHECK(WaveletSpec::make(WaveletFamily::haar, 2).levels == 1);
  CHECK_THROWS_AS(WaveletSpec::make(WaveletFamily::haar, 12), DimensionError);
  CHECK_THROWS_AS(WaveletSpec::make(WaveletFamily::haar, 8, 4), DimensionError);
  CHECK(parse_wavelet_family("daubechies2") == WaveletFamily::haar);
  CHECK(parse_wavelet_family("db3") == WaveletFamily::daubechies6);
  CHECK_THROWS(parse_wavelet_family("sym4"));
}

TEST_CASE("Haar one level on 2x2") {
  const double a = 1.5, b = -2.0, c = 0.25, d = 4.0;
  const Image im(2, {a, b, c, d});
  const Vector s = forward_dwt2(im, WaveletSpec::make(WaveletFamily::haar, 2, 1));
  CHECK(s[0] == doctest::Approx((a + b + c + d) / 2));
  CHECK(s[1] == doctest::Approx((a - b + c - d) / 2));
  CHECK(s[2] == doctest::Approx((a + b - c - d) / 2));
  CHECK(s[3] == doctest::Approx((a - b - c + d) / 2));
}

TEST_CASE("zero in, zero out; size errors") {
  const auto spec = WaveletSpec::make(WaveletFamily::daubechies6, 16, 3);
  const Vector s = forward_dwt2(Image(16), spec);
  for (double v : s) CHECK(v == 0.0);
  const Image x = inverse_dwt2(Vector(256, 0.0), spec);
  for (double v : x.pixels()) CHECK(v == 0.0);
  CHECK_THROWS_AS(forward_dwt2(Image(8), spec), DimensionError);
  CHECK_THROWS_AS(inverse_dwt2(Vector(100, 0.0), spec), DimensionError);
}

TEST_CASE("round trip, energy and adjoint across sizes") {
  std::mt19937_64 rng(11);
  for (auto fam : {WaveletFamily::haar, WaveletFamily::daubechies6}) {
    for (int n : {4, 8, 16, 32, 64}) {
      for (int levels = 1; levels <= log2_exact(n); ++levels) {
        CAPTURE(n);
        CAPTURE(levels);
        const auto spec = WaveletSpec::make(fam, n, levels);
        const Image x(n, testing::gaussian(static_cast<std::size_t>(n) * n, rng));
        const Vector s = forward_dwt2(x, spec);
        const Image back = inverse_dwt2(s, spec);
        CHECK(testing::max_abs_diff(back.pixels(), x.pixels()) < 1e-10);
        CHECK(std::abs(testing::norm(s) - testing::norm(flat(x))) < 1e-10 * testing::norm(flat(x)));
      }
    }
  }
}

TEST_CASE("orthonormality probes and adjoint identity") {
  std::mt19937_64 rng(12);
  for (auto fam : {WaveletFamily::haar, WaveletFamily::daubechies6}) {
    const auto spec = WaveletSpec::make(fam, 32);
    for (int t = 0; t < 100; ++t) {
      Vector u = testing::gaussian(1024, rng);
      const double nu = testing::norm(u);
      for (auto& v : u) v /= nu;
      const Image psi_u = inverse_dwt2(u, spec);
      CHECK(std::abs(testing::norm(forward_dwt2(psi_u, spec)) - 1.0) < 1e-10);

      const Vector s = testing::gaussian(1024, rng);
      const Image x(32, testing::gaussian(1024, rng));
      const double lhs = testing::dot(flat(inverse_dwt2(s, spec)), flat(x));
      const double rhs = testing::dot(s, forward_dwt2(x, spec));
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("basis images have unit norm") {
  for (auto fam : {WaveletFamily::haar, WaveletFamily::daubechies6}) {
    const auto spec = WaveletSpec::make(fam, 16, 3);
    Vector e(256, 0.0);
    for (std::size_t j = 0; j < 256; ++j) {
      e[j] = 1.0;
      CHECK(std::abs(testing::norm(flat(inverse_dwt2(e, spec))) - 1.0) < 1e-10);
      e[j] = 0.0;
    }
  }
}

TEST_CASE("Haar matches the closed-form dense oracle on 4x4 and 8x8") {
  for (int n : {4, 8}) {
    for (int levels = 1; levels <= log2_exact(n); ++levels) {
      CAPTURE(n);
      CAPTURE(levels);
      const Eigen::MatrixXd oracle = testing::dense_analysis_2d(n, levels, testing::haar_matrix);
      const auto spec = WaveletSpec::make(WaveletFamily::haar, n, levels);
      const WaveletSynthesisOperator psi(spec);
      const Eigen::MatrixXd psi_dense = testing::dense_of(psi);
      // Ψ = (Ψᵀ)ᵀ
      CHECK((psi_dense - oracle.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((psi_dense.transpose() * psi_dense - Eigen::MatrixXd::Identity(n * n, n * n))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("Daubechies-6 matches the periodic filter-bank oracle") {
  const auto h = lowpass_taps(WaveletFamily::daubechies6);
  for (int n : {4, 8, 16}) {
    const int levels = log2_exact(n) - 1;
    const auto spec = WaveletSpec::make(WaveletFamily::daubechies6, n, levels);
    const Eigen::MatrixXd oracle =
        testing::dense_analysis_2d(n, levels, [&](int m) { return testing::analysis_matrix(m, h); });
    const Eigen::MatrixXd psi = testing::dense_of(WaveletSynthesisOperator(spec));
    CHECK((psi - oracle.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((psi * psi.transpose() - Eigen::MatrixXd::Identity(n * n, n * n)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("one-dimensional synthesis matches the filter-bank oracle") {
  const auto h = lowpass_taps(WaveletFamily::daubechies6);
  const int n = 16, levels = 3;
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
  for (int level = 0, m = n; level < levels; ++level, m /= 2) {
    Eigen::MatrixXd step = Eigen::MatrixXd::Identity(n, n);
    step.topLeftCorner(m, m) = testing::analysis_matrix(m, h);
    w = step * w;
  }
  std::mt19937_64 rng(3);
  Vector s = testing::gaussian(n, rng);
  const Eigen::VectorXd expect = w.transpose() * as_eigen(s);
  Vector scratch(n);
  inverse_dwt1(s, WaveletFamily::daubechies6, levels, scratch);
  for (int i = 0; i < n; ++i) CHECK(std::abs(s[i] - expect(i)) < 1e-12);
}
