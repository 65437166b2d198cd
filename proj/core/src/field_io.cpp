#include "tentlab/field_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <fmt/core.h>

namespace tentlab {

namespace {

constexpr char kMagic[5] = {'T', 'L', 'A', 'B', '1'};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <typename T>
void append(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));  // host is little-endian
}

template <typename T>
T take(const std::string& bytes, size_t& pos) {
  if (pos + sizeof(T) > bytes.size())
    throw std::runtime_error("field file truncated");
  T v;
  std::memcpy(&v, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

int dtype_code(const std::string& dtype) {
  if (dtype == "complex64") return 0;
  if (dtype == "complex128") return 1;
  throw std::runtime_error(fmt::format("unknown dtype '{}'", dtype));
}

}  // namespace

void write_field_file(const std::string& path, const FieldFile& file) {
  if (file.dims.empty()) throw std::runtime_error("field file needs dims");
  long expect = 1;
  for (size_t d = 1; d < file.dims.size(); ++d) expect *= file.dims[d];
  const long rows = file.dims.size() > 1 ? file.dims[0] : 1;
  const long cols = file.dims.size() > 1 ? expect : file.dims[0];
  if (file.payload.rows() != rows || file.payload.cols() != cols)
    throw std::runtime_error(
        fmt::format("payload shape {}x{} does not match dims ({} x {})",
                    file.payload.rows(), file.payload.cols(), rows, cols));

  const int code = dtype_code(file.dtype);
  std::string bytes(kMagic, sizeof(kMagic));
  append<std::uint8_t>(bytes, static_cast<std::uint8_t>(code));
  append<std::uint8_t>(bytes, static_cast<std::uint8_t>(file.dims.size()));
  for (int d : file.dims) append<std::uint32_t>(bytes, d);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      const Cplx z = file.payload(r, c);
      if (code == 0) {
        append<float>(bytes, static_cast<float>(z.real()));
        append<float>(bytes, static_cast<float>(z.imag()));
      } else {
        append<double>(bytes, z.real());
        append<double>(bytes, z.imag());
      }
    }
  append<std::uint64_t>(bytes, fnv1a(bytes));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path));
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());

  if (bytes.size() < sizeof(kMagic) + 2 + sizeof(std::uint64_t) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("bad magic: not a field file");
  const std::string body = bytes.substr(0, bytes.size() - sizeof(std::uint64_t));
  size_t pos = body.size();
  const auto stored = take<std::uint64_t>(bytes, pos);
  if (fnv1a(body) != stored) throw std::runtime_error("checksum mismatch");

  pos = sizeof(kMagic);
  const int code = take<std::uint8_t>(body, pos);
  if (code != 0 && code != 1)
    throw std::runtime_error("unknown dtype code in header");
  const int ndims = take<std::uint8_t>(body, pos);
  if (ndims < 1 || ndims > 3) throw std::runtime_error("bad dim count");

  FieldFile file;
  file.dtype = code == 0 ? "complex64" : "complex128";
  long total = 1;
  for (int d = 0; d < ndims; ++d) {
    file.dims.push_back(static_cast<int>(take<std::uint32_t>(body, pos)));
    total *= file.dims.back();
  }
  const size_t scalar = code == 0 ? 2 * sizeof(float) : 2 * sizeof(double);
  if (body.size() - pos != static_cast<size_t>(total) * scalar)
    throw std::runtime_error(
        fmt::format("payload length {} does not match header ({} samples)",
                    body.size() - pos, total));

  const long rows = ndims > 1 ? file.dims[0] : 1;
  const long cols = total / rows;
  file.payload.resize(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) {
      const double re =
          code == 0 ? take<float>(body, pos) : take<double>(body, pos);
      const double im =
          code == 0 ? take<float>(body, pos) : take<double>(body, pos);
      file.payload(r, c) = Cplx(re, im);
    }
  return file;
}

void save_tent_field(const std::string& path, const TentField& F,
                     const std::string& dtype) {
  const Grid& g = F.grid();
  FieldFile file;
  file.dtype = dtype;
  file.dims = {F.levels(), g.n_per_axis};
  if (g.dim == 2) file.dims.push_back(g.n_per_axis);
  file.payload.resize(F.levels(), g.size());
  for (int j = 0; j < F.levels(); ++j)
    for (int i = 0; i < g.size(); ++i) file.payload(j, i) = F.at(j, i);
  write_field_file(path, file);
}

TentField load_tent_field(const std::string& path, const Grid& g,
                          const TimeGrid& tg) {
  const FieldFile file = read_field_file(path);
  std::vector<int> want{tg.size(), g.n_per_axis};
  if (g.dim == 2) want.push_back(g.n_per_axis);
  if (file.dims != want)
    throw std::runtime_error("field dims do not match the grid and ladder");
  TentField F(g, tg);
  for (int j = 0; j < tg.size(); ++j)
    for (int i = 0; i < g.size(); ++i) F.at(j, i) = file.payload(j, i);
  return F;
}

void save_vector(const std::string& path, const Grid& g, const Vec& f,
                 const std::string& dtype) {
  FieldFile file;
  file.dtype = dtype;
  file.dims = {g.n_per_axis};
  if (g.dim == 1) {
    file.payload = f.transpose();
  } else {
    file.dims.push_back(g.n_per_axis);
    file.payload.resize(g.n_per_axis, g.n_per_axis);
    for (int i = 0; i < g.size(); ++i)
      file.payload(i / g.n_per_axis, i % g.n_per_axis) = f(i);
  }
  write_field_file(path, file);
}

Vec load_vector(const std::string& path, const Grid& g) {
  const FieldFile file = read_field_file(path);
  std::vector<int> want{g.n_per_axis};
  if (g.dim == 2) want.push_back(g.n_per_axis);
  if (file.dims != want)
    throw std::runtime_error("field dims do not match the grid");
  Vec f(g.size());
  if (g.dim == 1) {
    for (int i = 0; i < g.size(); ++i) f(i) = file.payload(0, i);
  } else {
    for (int i = 0; i < g.size(); ++i)
      f(i) = file.payload(i / g.n_per_axis, i % g.n_per_axis);
  }
  return f;
}

}  // namespace tentlab
