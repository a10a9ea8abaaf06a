#include <doctest.h>

#include <random>

#include "mrecon/mask.hpp"
#include "support.hpp"

using namespace mrecon;
using testing::Vector;

namespace {

// Column-support oracle on the dense Ψ.
std::vector<std::size_t> dense_support(const WaveletSpec& spec, const Mask& mask, double tol) {
  const Eigen::MatrixXd psi = testing::dense_of(WaveletSynthesisOperator(spec));
  std::vector<std::size_t> out;
  for (int j = 0; j < psi.cols(); ++j) {
    const double colmax = psi.col(j).cwiseAbs().maxCoeff();
    double inside = 0.0;
    for (std::size_t i : mask.indices()) inside = std::max(inside, std::abs(psi(i, j)));
    if (inside > tol * colmax) out.push_back(j);
  }
  return out;
}

Mask random_mask(int side, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<std::uint8_t> m(static_cast<std::size_t>(side) * side);
  for (auto& v : m) v = coin(rng);
  m[rng() % m.size()] = 1;
  return Mask(side, std::move(m));
}

}  // namespace

TEST_CASE("mask construction and queries") {
  const Mask full = Mask::full(4);
  CHECK(full.count() == 16);
  CHECK(full.pixel_count() == 16);
  CHECK_THROWS_AS(Mask(2, {0, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS(Mask(2, {1, 0, 0}));
  const Mask m(2, {0, 3, 1, 0});
  CHECK(m.count() == 2);
  CHECK(m.indices()[0] == 1);
  CHECK(m.indices()[1] == 2);
  CHECK(m.contains(1, 0));
  CHECK(m.subset_of(Mask::full(2)));
  CHECK_FALSE(Mask::full(2).subset_of(m));
  CHECK_THROWS_AS(m.subset_of(full), DimensionError);
  const Mask fov = Mask::field_of_view(64);
  CHECK(std::abs(static_cast<double>(fov.count()) / 4096.0 - M_PI / 4.0) < 0.01);
}

TEST_CASE("restrict and embed") {
  std::mt19937_64 rng(5);
  const Image x(4, testing::gaussian(16, rng));
  const Vector all = restrict(x, Mask::full(4));
  CHECK(all == x.vector());

  std::vector<std::uint8_t> single(16, 0);
  single[6] = 1;
  const Vector one = restrict(x, Mask(4, single));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == x(1, 2));

  std::vector<std::uint8_t> checker(16);
  for (int i = 0; i < 16; ++i) checker[i] = ((i / 4 + i % 4) % 2) == 0;
  const Mask cb(4, checker);
  const Image ones = embed(Vector(cb.count(), 1.0), cb);
  for (int i = 0; i < 16; ++i) CHECK(ones.pixels()[i] == (checker[i] ? 1.0 : 0.0));

  const Vector v = testing::gaussian(cb.count(), rng);
  CHECK(restrict(embed(v, cb), cb) == v);
  const Image zeroed = embed(restrict(ones, cb), cb);
  CHECK(zeroed == ones);
  CHECK_THROWS_AS(embed(Vector(3, 0.0), cb), DimensionError);
  CHECK_THROWS_AS(restrict(Image(8), cb), DimensionError);
}

TEST_CASE("identifiable set construction rules") {
  CHECK_THROWS(IdentifiableSet({2, 1}, 4));
  CHECK_THROWS(IdentifiableSet({1, 4}, 4));
  CHECK(IdentifiableSet::all(5).count() == 5);
  std::mt19937_64 rng(8);
  const IdentifiableSet iset({0, 3, 5}, 6);
  const Vector s = {1.0, 2.0, 3.0};
  const Vector full = lift(s, iset);
  CHECK(full == Vector{1.0, 0.0, 0.0, 2.0, 0.0, 3.0});
  CHECK(restrict(full, iset) == s);
}

TEST_CASE("full mask identifies every coefficient") {
  for (auto fam : {WaveletFamily::haar, WaveletFamily::daubechies6}) {
    const auto spec = WaveletSpec::make(fam, 16);
    CHECK(identifiable_set(spec, Mask::full(16)).count() == 256);
  }
}

TEST_CASE("Haar, one level, 4x4, left half") {
  const auto spec = WaveletSpec::make(WaveletFamily::haar, 4, 1);
  const Mask left = Mask::from_predicate(4, [](double x, double) { return x < 0.0; });
  CHECK(left.count() == 8);
  const auto iset = identifiable_set(spec, left);
  const auto oracle = dense_support(spec, left, kSupportTolerance);
  CHECK(std::vector<std::size_t>(iset.indices().begin(), iset.indices().end()) == oracle);
  // Coefficient columns 0 (LL) and 2 (HL) of each 2×2 band row sit over the left half.
  CHECK(iset.count() == 8);
}

TEST_CASE("identifiable set equals the dense column-support oracle") {
  std::mt19937_64 rng(21);
  for (auto fam : {WaveletFamily::haar, WaveletFamily::daubechies6}) {
    for (int n : {4, 8, 16}) {
      for (int levels = 1; levels <= log2_exact(n); ++levels) {
        const auto spec = WaveletSpec::make(fam, n, levels);
        for (double density : {0.02, 0.2, 0.6}) {
          CAPTURE(n);
          CAPTURE(levels);
          CAPTURE(density);
          const Mask m = random_mask(n, density, rng);
          const auto iset = identifiable_set(spec, m);
          const auto oracle = dense_support(spec, m, kSupportTolerance);
          CHECK(std::vector<std::size_t>(iset.indices().begin(), iset.indices().end()) == oracle);
        }
        const Mask disk = Mask::from_predicate(
            n, [](double x, double y) { return (x - 0.2) * (x - 0.2) + y * y < 0.3; });
        const auto oracle = dense_support(spec, disk, kSupportTolerance);
        const auto iset = identifiable_set(spec, disk);
        CHECK(std::vector<std::size_t>(iset.indices().begin(), iset.indices().end()) == oracle);
      }
    }
  }
}

TEST_CASE("identifiable set is monotone in the mask") {
  std::mt19937_64 rng(22);
  for (auto fam : {WaveletFamily::haar, WaveletFamily::daubechies6}) {
    const auto spec = WaveletSpec::make(fam, 32);
    for (int t = 0; t < 10; ++t) {
      const Mask small = random_mask(32, 0.05, rng);
      std::vector<std::uint8_t> grow(small.membership().begin(), small.membership().end());
      std::bernoulli_distribution coin(0.1);
      for (auto& v : grow) v = v || coin(rng);
      const Mask big(32, grow);
      const auto a = identifiable_set(spec, small);
      const auto b = identifiable_set(spec, big);
      CHECK(std::includes(b.indices().begin(), b.indices().end(), a.indices().begin(),
                          a.indices().end()));
    }
  }
}

TEST_CASE("identifiable set checks the grid") {
  CHECK_THROWS_AS(identifiable_set(WaveletSpec::make(WaveletFamily::haar, 8), Mask::full(4)),
                  DimensionError);
}
