#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "tentlab/field_io.hpp"
#include "tentlab/fixtures.hpp"

using namespace tentlab;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) {
    path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
           "/" + name;
  }
  ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("tent field round trip is bit exact") {
  Grid g(1, 32);
  auto tg = TimeGrid::log_uniform(g, 16);
  const TentField F = random_tent_field(g, tg, 11, 0.4);
  TempPath tp("tentlab_io_tent.bin");

  save_tent_field(tp.path, F);
  const TentField R = load_tent_field(tp.path, g, tg);
  for (int j = 0; j < tg.size(); ++j)
    for (int i = 0; i < g.size(); ++i) CHECK(R.at(j, i) == F.at(j, i));

  // writing the same field twice gives identical bytes
  TempPath tp2("tentlab_io_tent2.bin");
  save_tent_field(tp2.path, F);
  CHECK(slurp(tp.path) == slurp(tp2.path));
}

TEST_CASE("vector round trip, both dimensions") {
  for (int dim : {1, 2}) {
    Grid g(dim, 16);
    Vec f(g.size());
    for (int i = 0; i < g.size(); ++i) f(i) = Cplx(0.25 * i, -1.0 / (i + 1));
    TempPath tp("tentlab_io_vec.bin");
    save_vector(tp.path, g, f);
    const Vec r = load_vector(tp.path, g);
    CHECK((r - f).norm() == 0.0);
  }
}

TEST_CASE("complex64 narrows but preserves structure") {
  Grid g(1, 16);
  Vec f(g.size());
  for (int i = 0; i < g.size(); ++i) f(i) = Cplx(std::sin(0.7 * i), 0.5 * i);
  TempPath tp("tentlab_io_c64.bin");
  save_vector(tp.path, g, f, "complex64");
  const FieldFile file = read_field_file(tp.path);
  CHECK(file.dtype == "complex64");
  const Vec r = load_vector(tp.path, g);
  CHECK((r - f).norm() <= 1e-6 * f.norm());
  CHECK((r - f).norm() > 0.0);  // genuinely narrowed
}

TEST_CASE("corruption is detected") {
  Grid g(1, 16);
  Vec f = Vec::Constant(g.size(), Cplx(1.0, 2.0));
  TempPath tp("tentlab_io_corrupt.bin");
  save_vector(tp.path, g, f);
  const std::string good = slurp(tp.path);

  // flipped payload byte: checksum mismatch
  std::string bad = good;
  bad[bad.size() / 2] ^= 0x40;
  spit(tp.path, bad);
  CHECK_THROWS_WITH_AS(read_field_file(tp.path), "checksum mismatch",
                       std::runtime_error);

  // wrong magic
  bad = good;
  bad[0] = 'X';
  spit(tp.path, bad);
  CHECK_THROWS_WITH_AS(read_field_file(tp.path), "bad magic: not a field file",
                       std::runtime_error);

  // truncated payload
  spit(tp.path, good.substr(0, good.size() - 24));
  CHECK_THROWS_AS(read_field_file(tp.path), std::runtime_error);

  CHECK_THROWS_AS(read_field_file("/nonexistent/tentlab.bin"),
                  std::runtime_error);
}

TEST_CASE("shape validation") {
  Grid g(1, 16);
  auto tg = TimeGrid::log_uniform(g, 16);
  TempPath tp("tentlab_io_shape.bin");
  save_vector(tp.path, g, Vec::Zero(g.size()));
  CHECK_THROWS_AS(load_tent_field(tp.path, g, tg), std::runtime_error);
  CHECK_THROWS_AS(load_vector(tp.path, Grid(1, 32)), std::runtime_error);

  FieldFile file;
  file.dims = {4, 4};
  file.payload = Eigen::MatrixXcd::Zero(3, 4);  // wrong row count
  CHECK_THROWS_AS(write_field_file(tp.path, file), std::runtime_error);
}
