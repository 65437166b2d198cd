#include "tentlab/tent.hpp"

#include <cmath>
#include <stdexcept>

#include "tentlab/elliptic.hpp"  // lp_norm

namespace tentlab {

TimeGrid TimeGrid::log_uniform(const Grid& g, int J, double t_min, double t_max) {
  if (J < 16) throw std::invalid_argument("time grid needs J >= 16");
  if (t_min < 0.0) t_min = g.h() / 4.0;
  if (t_max < 0.0) t_max = g.length;
  if (t_min < g.h() / 4.0 - 1e-15)
    throw std::invalid_argument("t_min below resolvable scale h/4");
  if (t_max > g.length + 1e-15)
    throw std::invalid_argument("t_max beyond domain length");
  if (!(t_min < t_max)) throw std::invalid_argument("need t_min < t_max");
  TimeGrid tg;
  tg.t_min = t_min;
  tg.t_max = t_max;
  tg.dlog = std::log(t_max / t_min) / J;
  tg.levels.resize(J);
  for (int j = 0; j < J; ++j)
    tg.levels[j] = t_min * std::exp((j + 0.5) * tg.dlog);
  return tg;
}

TentField::TentField(Grid grid, TimeGrid tg)
    : grid_(grid), tg_(std::move(tg)),
      vals_(Eigen::MatrixXcd::Zero(tg_.size(), grid_.size())) {}

double TentField::max_abs() const {
  return vals_.size() ? vals_.cwiseAbs().maxCoeff() : 0.0;
}

int TentField::support_size() const {
  int c = 0;
  for (int j = 0; j < vals_.rows(); ++j)
    for (int i = 0; i < vals_.cols(); ++i)
      if (vals_(j, i) != Cplx(0.0)) ++c;
  return c;
}

TentField& TentField::operator+=(const TentField& o) {
  vals_ += o.vals_;
  return *this;
}
TentField& TentField::operator-=(const TentField& o) {
  vals_ -= o.vals_;
  return *this;
}
TentField& TentField::operator*=(Cplx c) {
  vals_ *= c;
  return *this;
}

ConeGeometry make_cone(const Grid& g, const TimeGrid& tg, double aperture) {
  if (!(aperture > 0.0)) throw std::invalid_argument("aperture must be positive");
  ConeGeometry cone;
  cone.aperture = aperture;
  cone.offsets.resize(tg.size());
  cone.level_weight.resize(tg.size());
  const int half = g.n_per_axis / 2;
  for (int j = 0; j < tg.size(); ++j) {
    const double r = aperture * tg.levels[j];
    auto& off = cone.offsets[j];
    if (g.dim == 1) {
      for (int dx = -half + 1; dx <= half; ++dx)
        if (std::abs(dx) * g.h() < r) off.push_back({dx, 0});
    } else {
      for (int dx = -half + 1; dx <= half; ++dx)
        for (int dy = -half + 1; dy <= half; ++dy)
          if (std::hypot(dx * g.h(), dy * g.h()) < r) off.push_back({dx, dy});
    }
    cone.level_weight[j] =
        g.cell_measure() * tg.dlog / std::pow(tg.levels[j], g.dim);
  }
  return cone;
}

Eigen::VectorXd area_function(const TentField& F, const ConeGeometry& cone) {
  const Grid& g = F.grid();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.size());
  for (int j = 0; j < F.levels(); ++j) {
    const double wj = cone.level_weight[j];
    for (int x = 0; x < g.size(); ++x) {
      const auto cx = g.coords(x);
      double s = 0.0;
      for (const auto& d : cone.offsets[j]) {
        const Cplx v = F.at(j, g.index(cx[0] + d[0], cx[1] + d[1]));
        s += std::norm(v);
      }
      acc(x) += wj * s;
    }
  }
  return acc.cwiseSqrt();
}

Eigen::VectorXd area_function(const TentField& F, double aperture) {
  return area_function(F, make_cone(F.grid(), F.timegrid(), aperture));
}

double t2p_norm(const TentField& F, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("t2p_norm: p must be positive");
  const Eigen::VectorXd A = area_function(F, 1.0);
  double s = 0.0;
  for (int i = 0; i < A.size(); ++i) s += std::pow(A(i), p);
  return std::pow(s * F.grid().cell_measure(), 1.0 / p);
}

double t_omega_norm(const TentField& F, const OrliczFunction& w) {
  const Eigen::VectorXd A = area_function(F, 1.0);
  std::vector<double> vals(A.data(), A.data() + A.size());
  std::vector<double> wts(A.size(), F.grid().cell_measure());
  return luxemburg_norm(vals, wts, w);
}

namespace {

// Fraction of `mask` inside each torus ball on the ladder r = k*h.
double min_density(const Grid& g, const CellMask& mask, int x,
                   const std::vector<std::vector<std::array<int, 2>>>& balls) {
  const auto cx = g.coords(x);
  double worst = 1.0;
  for (const auto& off : balls) {
    int inside = 0;
    for (const auto& d : off)
      inside += mask[g.index(cx[0] + d[0], cx[1] + d[1])] != 0;
    worst = std::min(worst, static_cast<double>(inside) / off.size());
  }
  return worst;
}

// Radius ladder r = k*h capped at a quarter of the domain; torus-global
// balls would force the density set empty for any mask near half measure.
std::vector<std::vector<std::array<int, 2>>> ball_ladder(const Grid& g) {
  std::vector<std::vector<std::array<int, 2>>> ladder;
  const int half = g.n_per_axis / 2;
  const int cap = std::max(1, g.n_per_axis / 4);
  for (int k = 1; k <= cap; ++k) {
    const double r = k * g.h();
    std::vector<std::array<int, 2>> off;
    if (g.dim == 1) {
      for (int dx = -half + 1; dx <= half; ++dx)
        if (std::abs(dx) * g.h() < r) off.push_back({dx, 0});
    } else {
      for (int dx = -half + 1; dx <= half; ++dx)
        for (int dy = -half + 1; dy <= half; ++dy)
          if (std::hypot(dx * g.h(), dy * g.h()) < r) off.push_back({dx, dy});
    }
    if (ladder.empty() || off.size() != ladder.back().size())
      ladder.push_back(std::move(off));
  }
  return ladder;
}

}  // namespace

CellMask gamma_density_set(const Grid& g, const CellMask& mask, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0,1)");
  const auto ladder = ball_ladder(g);
  CellMask out(g.size(), 0);
  for (int x = 0; x < g.size(); ++x)
    if (mask[x] && min_density(g, mask, x, ladder) >= gamma) out[x] = 1;
  return out;
}

CellMask expanded_set(const Grid& g, const CellMask& open_mask, double gamma) {
  CellMask comp(g.size(), 0);
  for (int i = 0; i < g.size(); ++i) comp[i] = open_mask[i] ? 0 : 1;
  const CellMask dens = gamma_density_set(g, comp, gamma);
  CellMask out(g.size(), 0);
  for (int i = 0; i < g.size(); ++i) out[i] = dens[i] ? 0 : 1;
  return out;
}

ApertureRatioReport aperture_ratio_probe(const TentField& F, double eta,
                                         double nu, const OrliczFunction& w) {
  ApertureRatioReport rep;
  const Eigen::VectorXd Ae = area_function(F, eta);
  const Eigen::VectorXd An = area_function(F, nu);
  const double m = F.grid().cell_measure();
  for (int i = 0; i < Ae.size(); ++i) {
    if (Ae(i) > 0.0) rep.integral_eta += m * w.eval(Ae(i));
    if (An(i) > 0.0) rep.integral_nu += m * w.eval(An(i));
  }
  rep.ratio = rep.integral_nu > 0.0 ? rep.integral_eta / rep.integral_nu : 1.0;
  return rep;
}

std::vector<CellMask> tent_masks(const Grid& g, const TimeGrid& tg,
                                 const CellMask& open_mask) {
  CellMask comp(g.size(), 0);
  bool comp_empty = true;
  for (int i = 0; i < g.size(); ++i) {
    comp[i] = open_mask[i] ? 0 : 1;
    if (comp[i]) comp_empty = false;
  }
  std::vector<CellMask> out(tg.size(), CellMask(g.size(), 0));
  for (int y = 0; y < g.size(); ++y) {
    const double d = comp_empty ? std::numeric_limits<double>::infinity()
                                : dist_to_set(g, y, comp);
    for (int j = 0; j < tg.size(); ++j)
      if (d >= tg.levels[j]) out[j][y] = 1;
  }
  return out;
}

std::vector<CellMask> tent_masks(const Grid& g, const TimeGrid& tg,
                                 const Ball& b) {
  return tent_masks(g, tg, ball_mask(g, b));
}

bool supported_in(const TentField& F, const std::vector<CellMask>& masks) {
  for (int j = 0; j < F.levels(); ++j)
    for (int i = 0; i < F.grid().size(); ++i)
      if (F.at(j, i) != Cplx(0.0) && !masks[j][i]) return false;
  return true;
}

TentField restrict_to(const TentField& F, const std::vector<CellMask>& masks) {
  TentField out = F;
  for (int j = 0; j < out.levels(); ++j)
    for (int i = 0; i < out.grid().size(); ++i)
      if (!masks[j][i]) out.at(j, i) = Cplx(0.0);
  return out;
}

}  // namespace tentlab
