#ifndef TENTLAB_GRID_HPP
#define TENTLAB_GRID_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace tentlab {

/// Periodic grid on the torus [0, length)^dim, dim in {1,2}.
/// Cells are indexed row-major; cell centers at (i + 1/2) h.
struct Grid {
  int dim = 1;
  int n_per_axis = 8;
  double length = 1.0;

  Grid() = default;
  Grid(int dim_, int n_, double length_ = 1.0);

  int size() const { return dim == 1 ? n_per_axis : n_per_axis * n_per_axis; }
  double h() const { return length / n_per_axis; }
  double cell_measure() const;

  std::array<int, 2> coords(int idx) const;
  int index(int ix, int iy = 0) const;  // wraps modulo n_per_axis
  std::array<double, 2> center(int idx) const;

  double wrap_delta(double d) const;  // signed torus difference, |.| <= L/2
  double torus_dist(const std::array<double, 2>& a,
                    const std::array<double, 2>& b) const;
  double torus_dist_cells(int i, int j) const;

  bool operator==(const Grid& o) const {
    return dim == o.dim && n_per_axis == o.n_per_axis && length == o.length;
  }
};

using CellMask = std::vector<std::uint8_t>;

struct Ball {
  std::array<double, 2> center{0.0, 0.0};
  double radius = 0.0;
};

/// Cells whose center lies strictly inside the ball (torus metric).
std::vector<int> cells_in_ball(const Grid& g, const Ball& b);
CellMask ball_mask(const Grid& g, const Ball& b);

/// Discrete measure: (#cells inside) * h^dim.
double ball_measure(const Grid& g, const Ball& b);

/// Minimum torus distance from cell `idx` center to any cell of `mask`.
/// Returns +inf for an empty mask.
double dist_to_set(const Grid& g, int idx, const CellMask& mask);

double min_set_distance(const Grid& g, const std::vector<int>& a,
                        const std::vector<int>& b);

int mask_count(const CellMask& m);

}  // namespace tentlab

#endif  // TENTLAB_GRID_HPP
