#include <doctest.h>

#include <random>

#include "mrecon/ct.hpp"
#include "mrecon/linear_operator.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mrecon;
using testing::Vector;

namespace {

std::vector<double> degrees(std::initializer_list<double> d) {
  std::vector<double> out;
  for (double v : d) out.push_back(v * M_PI / 180.0);
  return out;
}

}  // namespace

TEST_CASE("dense and function operators") {
  const DenseOperator a(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(a.apply(Vector{1, 0, -1}) == Vector{-2, -2});
  CHECK(a.apply_adjoint(Vector{1, 1}) == Vector{5, 7, 9});
  CHECK_THROWS_AS(a.apply(Vector{1, 2}), DimensionError);
  CHECK_THROWS_AS(DenseOperator(2, 2, {1, 2, 3}), DimensionError);
  const FunctionOperator scale(
      3, 3, [](auto in, auto out) { for (std::size_t i = 0; i < 3; ++i) out[i] = 2 * in[i]; },
      [](auto in, auto out) { for (std::size_t i = 0; i < 3; ++i) out[i] = 2 * in[i]; });
  CHECK(scale.apply(Vector{1, 2, 3}) == Vector{2, 4, 6});
  const DenseOperator m = materialize(a);
  CHECK(std::equal(m.entries().begin(), m.entries().end(), a.entries().begin()));
}

TEST_CASE("every shipped operator passes the dot-product test") {
  std::mt19937_64 rng(31);
  const auto spec = WaveletSpec::make(WaveletFamily::daubechies6, 16);
  const Mask disk = Mask::from_predicate(16, [](double x, double y) { return x * x + y * y < 0.5; });
  const auto iset = identifiable_set(spec, disk);
  const auto angles = ct::limited_angle_set(7.0, 25.0);
  const auto det = ct::DetectorGeometry::for_grid(16);
  const auto phi_det = ct::build_sampling_operator(angles, det, 16, false);
  const auto phi_freq = ct::build_sampling_operator(angles, det, 16, true);
  const WaveletSynthesisOperator psi(spec);
  const auto h = compose_h(phi_freq, spec, disk, iset);
  const LinearOperator* ops[] = {&psi, phi_det.get(), phi_freq.get(), &phi_freq->radon(), h.get()};
  for (const LinearOperator* op : ops) {
    for (int t = 0; t < 50; ++t) CHECK(testing::adjoint_gap(*op, rng) < 1e-8);
  }
}

TEST_CASE("operators are linear") {
  std::mt19937_64 rng(32);
  const auto phi = ct::build_sampling_operator(ct::limited_angle_set(10.0, 0.0),
                                               ct::DetectorGeometry::for_grid(16), 16, true);
  const Vector u = testing::gaussian(256, rng), w = testing::gaussian(256, rng);
  Vector comb(256);
  for (int i = 0; i < 256; ++i) comb[i] = 0.7 * u[i] - 1.3 * w[i];
  const Vector lhs = phi->apply(comb);
  const Vector pu = phi->apply(u), pw = phi->apply(w);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    err = std::max(err, std::abs(lhs[i] - (0.7 * pu[i] - 1.3 * pw[i])));
    scale = std::max(scale, std::abs(lhs[i]));
  }
  CHECK(err < 1e-10 * scale);
}

TEST_CASE("compose_h with identity sampling reproduces the basis images") {
  const auto spec = WaveletSpec::make(WaveletFamily::haar, 8);
  const auto id = std::make_shared<FunctionOperator>(
      64, 64, [](auto in, auto out) { std::copy(in.begin(), in.end(), out.begin()); },
      [](auto in, auto out) { std::copy(in.begin(), in.end(), out.begin()); });
  const auto h = compose_h(id, spec, Mask::full(8), IdentifiableSet::all(64));
  Vector e(64, 0.0);
  for (int j = 0; j < 64; ++j) {
    e[j] = 1.0;
    CHECK(h->apply(e) == inverse_dwt2(e, spec).vector());
    e[j] = 0.0;
  }
}

TEST_CASE("compose_h matches the dense composition on 8x8") {
  const int n = 8;
  const auto spec = WaveletSpec::make(WaveletFamily::haar, n, 2);
  const Mask half = Mask::from_predicate(n, [](double x, double y) { return x + 0.3 * y < 0.1; });
  const auto iset = identifiable_set(spec, half);
  const auto phi = ct::build_sampling_operator(degrees({0, 30, 75, 120}),
                                               ct::DetectorGeometry::for_grid(n), n, false);
  const auto h = compose_h(phi, spec, half, iset);

  // Oracle: Φ_{:,M} Ψ_{M,I} from independent dense pieces.
  const Eigen::MatrixXd phi_d = testing::dense_of(*phi);
  const Eigen::MatrixXd psi_d = testing::dense_analysis_2d(n, 2, testing::haar_matrix).transpose();
  const Eigen::MatrixXd expect = testing::masked_composition(phi_d, psi_d, half, iset);
  const Eigen::MatrixXd got = testing::dense_of(*h);
  CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-10);

  // Same for the adjoint, column by column of Hᵀ.
  const Eigen::MatrixXd got_t = testing::dense_of(FunctionOperator(
      h->cols(), h->rows(), [&](auto in, auto out) { h->apply_adjoint(in, out); },
      [&](auto in, auto out) { h->apply(in, out); }));
  CHECK((got_t - expect.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("compose_h validates inputs") {
  const auto spec = WaveletSpec::make(WaveletFamily::haar, 8);
  const auto phi = ct::build_sampling_operator(degrees({0}), ct::DetectorGeometry::for_grid(4), 4, false);
  CHECK_THROWS_AS(compose_h(phi, spec, Mask::full(8), IdentifiableSet::all(64)), DimensionError);
  const auto phi8 = ct::build_sampling_operator(degrees({0}), ct::DetectorGeometry::for_grid(8), 8, false);
  CHECK_THROWS_AS(compose_h(phi8, spec, Mask::full(8), IdentifiableSet::all(16)), DimensionError);
}

TEST_CASE("spectral norm") {
  const FunctionOperator id(5, 5, [](auto in, auto out) { std::copy(in.begin(), in.end(), out.begin()); },
                            [](auto in, auto out) { std::copy(in.begin(), in.end(), out.begin()); });
  CHECK(spectral_norm(id).rho == doctest::Approx(1.0).epsilon(1e-8));

  const DenseOperator diag(3, 3, {1, 0, 0, 0, 2, 0, 0, 0, 3});
  CHECK(spectral_norm(diag, 1e-12, 5000).rho == doctest::Approx(3.0).epsilon(1e-6));

  const DenseOperator zero(3, 4, Vector(12, 0.0));
  const auto z = spectral_norm(zero);
  CHECK(z.rho == 0.0);
  CHECK(z.converged);

  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd m = testing::random_matrix(12, 7, rng);
    const double oracle = testing::largest_singular_value(m);
    const auto est = spectral_norm(testing::to_operator(m), 1e-10, 5000, t + 1);
    CHECK(std::abs(est.rho - oracle) < 0.01 * oracle);
  }
}

TEST_CASE("spectral norm is monotone under row augmentation") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd base = testing::random_matrix(8, 10, rng);
    Eigen::MatrixXd aug(11, 10);
    aug << base, testing::random_matrix(3, 10, rng);
    const double a = spectral_norm(testing::to_operator(base), 1e-13, 20000).rho;
    const double b = spectral_norm(testing::to_operator(aug), 1e-13, 20000).rho;
    CHECK(b >= a * (1.0 - 1e-9));
  }
}

TEST_CASE("spectral norm of the sampling operator matches the dense SVD") {
  const auto phi = ct::build_sampling_operator(ct::limited_angle_set(15.0, 25.0),
                                               ct::DetectorGeometry::for_grid(8), 8, true);
  const double oracle = testing::largest_singular_value(testing::dense_of(*phi));
  CHECK(std::abs(spectral_norm(*phi, 1e-10, 5000).rho - oracle) < 0.01 * oracle);
}
