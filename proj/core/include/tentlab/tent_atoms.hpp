#ifndef TENTLAB_TENT_ATOMS_HPP
#define TENTLAB_TENT_ATOMS_HPP

#include <utility>
#include <vector>

#include "tentlab/tent.hpp"

namespace tentlab {

/// Axis-aligned dyadic cube of side 2^level cells, anchored at a corner cell
/// whose coordinates are multiples of the side.
struct DyadicCube {
  int level = 0;
  std::array<int, 2> anchor{0, 0};

  int side_cells() const { return 1 << level; }
  double side_length(const Grid& g) const { return side_cells() * g.h(); }
  std::vector<int> cells(const Grid& g) const;
  CellMask mask(const Grid& g) const;
  std::array<double, 2> center(const Grid& g) const;
};

struct WhitneyCover {
  std::vector<DyadicCube> cubes;
  std::vector<char> flagged;  // distance band unattainable for that cube
  bool full_grid = false;     // O was the whole grid: single coarsest cube
};

/// Disjoint dyadic cover of O. Each cube satisfies the two-sided distance
/// band sqrt(n) l(Q) <= dist(Q, O^c) <= 4 sqrt(n) l(Q) where the dyadic
/// alignment permits; cubes that cannot meet the band are flagged.
WhitneyCover whitney_decompose(const Grid& g, const CellMask& O);

struct TentAtom {
  TentField values;  // the normalized atom a
  Ball ball;
  double ball_measure = 0.0;
  int generation = 0;  // the level-set exponent k
  DyadicCube cube;
  double lambda = 0.0;  // coefficient 2^k |B| rho(|B|)
};

struct LevelSets {
  int k_min = 0;
  int k_max = -1;                // empty range when k_max < k_min
  std::vector<CellMask> masks;   // O_k for k = k_min .. k_max
};

/// O_k = {A(F) > 2^k}; the bottom generation absorbs all of supp A.
LevelSets level_sets(const TentField& F);

struct AtomicDecomposition {
  std::vector<TentAtom> atoms;  // ordered by (generation, cube anchor)
  double lambda_value = 0.0;    // the coefficient-space size functional
  int k_min = 0;
  int k_max = -1;
  bool full_grid_generation = false;  // some O_k* was the whole grid
  std::vector<std::pair<int, int>> uncovered;  // (level, cell) of missed supp F
  double uncovered_mass = 0.0;                 // l2 mass of the missed samples
};

AtomicDecomposition atomic_decompose(const TentField& F,
                                     const OrliczFunction& w,
                                     double gamma = 0.75);

struct AtomCertificate {
  bool tent_support = false;
  struct PBound {
    double p = 0.0;
    double norm = 0.0;    // measured T_2^p norm
    double bound = 0.0;   // |B|^{1/p-1} rho(|B|)^{-1}
    double margin = 0.0;  // (bound*(1+slack) - norm)/bound
  };
  std::vector<PBound> p_bounds;
  double t_omega = 0.0;  // measured Orlicz tent norm
  double slack = 0.1;
  bool pass() const;
};

AtomCertificate verify_atom(const TentAtom& atom, const OrliczFunction& w,
                            const std::vector<double>& p_list,
                            double slack = 0.1);

/// Size functional on coefficient/ball pairs:
/// inf{ s > 0 : sum |B_j| omega(|lambda_j| / (s |B_j| rho(|B_j|))) <= 1 }.
double lambda_functional(const std::vector<std::pair<double, double>>& pairs,
                         const OrliczFunction& w, double tol = 1e-12);

struct ReconstructionResidual {
  double sup = 0.0;
  double t22 = 0.0;  // T_2^2 norm of the difference
};

ReconstructionResidual reconstruction_residual(const TentField& F,
                                               const AtomicDecomposition& D);

struct TruncationRow {
  int kept = 0;
  double tail_t2p = 0.0;
  double tail_omega = 0.0;
};

std::vector<TruncationRow> truncation_convergence(const TentField& F,
                                                  const AtomicDecomposition& D,
                                                  double p,
                                                  const OrliczFunction& w);

}  // namespace tentlab

#endif  // TENTLAB_TENT_ATOMS_HPP
