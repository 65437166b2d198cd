#ifndef TENTLAB_FIELD_IO_HPP
#define TENTLAB_FIELD_IO_HPP

#include <string>

#include "tentlab/elliptic.hpp"
#include "tentlab/tent.hpp"

namespace tentlab {

/// On-disk half-space field container. Layout, all little-endian:
///   magic "TLAB1" | u8 dtype (0 = complex64, 1 = complex128) | u8 ndims |
///   u32 dims[ndims] | payload row-major | u64 fnv1a checksum of everything
///   before the trailer.
/// A flat field uses dims [N] (or [N, N] in 2D); a time-indexed field
/// prepends the level count.
struct FieldFile {
  std::string dtype = "complex128";
  std::vector<int> dims;
  // rows = dims[0] when ndims > 1, otherwise a single row
  Eigen::MatrixXcd payload;
};

void write_field_file(const std::string& path, const FieldFile& file);
FieldFile read_field_file(const std::string& path);

void save_tent_field(const std::string& path, const TentField& F,
                     const std::string& dtype = "complex128");
TentField load_tent_field(const std::string& path, const Grid& g,
                          const TimeGrid& tg);

void save_vector(const std::string& path, const Grid& g, const Vec& f,
                 const std::string& dtype = "complex128");
Vec load_vector(const std::string& path, const Grid& g);

}  // namespace tentlab

#endif  // TENTLAB_FIELD_IO_HPP
