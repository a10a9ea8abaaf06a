#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mrecon/io.hpp"
#include "support.hpp"

using namespace mrecon;
namespace fs = std::filesystem;
using testing::Vector;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("mrecon_io_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_CASE("image container round trip and layout") {
  const auto dir = scratch_dir();
  std::mt19937_64 rng(101);
  const Image x(4, testing::gaussian(16, rng));
  io::write_image(dir / "x.mrimg", x);
  CHECK(io::read_image(dir / "x.mrimg") == x);
  CHECK(io::read_any_image(dir / "x.mrimg") == x);
  const std::string bytes = slurp(dir / "x.mrimg");
  CHECK(bytes.rfind("MRIMG1\n4 4\n", 0) == 0);
  CHECK(bytes.size() == 11 + 16 * 8);
  // Little-endian: 1.0 is 00 .. F0 3F.
  io::write_image(dir / "one.mrimg", Image(1, {1.0}));
  const std::string one = slurp(dir / "one.mrimg");
  CHECK(static_cast<unsigned char>(one[one.size() - 1]) == 0x3F);
  CHECK(static_cast<unsigned char>(one[one.size() - 2]) == 0xF0);
}

TEST_CASE("sinogram container round trip") {
  const auto dir = scratch_dir();
  std::mt19937_64 rng(102);
  ct::Sinogram s{{0.0, 0.1, 1.0 / 3.0}, ct::DetectorGeometry::centered(5, 2.0 / 3.0), testing::gaussian(15, rng)};
  io::write_sinogram(dir / "s.mrsino", s);
  const auto back = io::read_sinogram(dir / "s.mrsino");
  CHECK(back.angles == s.angles);
  CHECK(back.detectors == s.detectors);
  CHECK(back.data == s.data);
}

TEST_CASE("masks and previews as PGM") {
  const auto dir = scratch_dir();
  const Mask m(3, {1, 0, 1, 0, 1, 0, 1, 1, 0});
  io::write_mask_pgm(dir / "m.pgm", m);
  CHECK(io::read_mask_pgm(dir / "m.pgm") == m);
  {
    std::ofstream os(dir / "ascii.pgm");
    os << "P2\n# comment\n3 3\n15\n0 15 0\n1 0 0\n0 0 9\n";
  }
  const Mask a = io::read_mask_pgm(dir / "ascii.pgm");
  CHECK(a.count() == 3);
  CHECK(a.contains(0, 1));
  CHECK(a.contains(2, 2));
  const Image g = io::read_any_image(dir / "ascii.pgm");
  CHECK(g(0, 1) == 15.0);
  io::write_image_pgm(dir / "p.pgm", Image(2, {0.0, 0.5, 1.0, 2.0}), 0.0, 1.0);
  const Image p = io::read_any_image(dir / "p.pgm");
  CHECK(p(0, 0) == 0.0);
  CHECK(p(0, 1) == 128.0);
  CHECK(p(1, 1) == 255.0);
}

TEST_CASE("malformed inputs raise I/O errors") {
  const auto dir = scratch_dir();
  CHECK_THROWS_AS(io::read_image(dir / "missing.mrimg"), io::IoError);
  {
    std::ofstream os(dir / "bad.mrimg", std::ios::binary);
    os << "MRIMG1\n4 4\nshort";
  }
  CHECK_THROWS_AS(io::read_image(dir / "bad.mrimg"), io::IoError);
  {
    std::ofstream os(dir / "rect.mrimg", std::ios::binary);
    os << "MRIMG1\n4 2\n";
  }
  CHECK_THROWS_AS(io::read_image(dir / "rect.mrimg"), io::IoError);
  {
    std::ofstream os(dir / "bad.mrsino", std::ios::binary);
    os << "MRSINO1\n2 3 0.5 -0.5\n0.5 0.1\n" << std::string(48, '\0');
  }
  CHECK_THROWS_AS(io::read_sinogram(dir / "bad.mrsino"), io::IoError);  // angles not increasing
  {
    std::ofstream os(dir / "empty.pgm");
    os << "P2\n2 2\n1\n0 0 0 0\n";
  }
  CHECK_THROWS_AS(io::read_mask_pgm(dir / "empty.pgm"), io::IoError);
  {
    std::ofstream os(dir / "notpgm.pgm");
    os << "P6\n2 2\n255\n";
  }
  CHECK_THROWS_AS(io::read_mask_pgm(dir / "notpgm.pgm"), io::IoError);
  fs::remove_all(dir);
}
