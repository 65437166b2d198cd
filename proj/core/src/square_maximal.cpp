#include "tentlab/square_maximal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tentlab {

bool is_square_kind(FunctionalType t) {
  switch (t) {
    case FunctionalType::heat_square:
    case FunctionalType::poisson_grad:
    case FunctionalType::poisson_time:
    case FunctionalType::heat_grad:
    case FunctionalType::vertical:
      return true;
    default:
      return false;
  }
}

bool is_maximal_kind(FunctionalType t) { return !is_square_kind(t); }

FunctionalKind FunctionalKind::heat_square(int k, double aperture) {
  if (k < 1) throw std::invalid_argument("heat_square: order must be >= 1");
  return {FunctionalType::heat_square, aperture, k};
}
FunctionalKind FunctionalKind::poisson_grad(double aperture) {
  return {FunctionalType::poisson_grad, aperture, 1};
}
FunctionalKind FunctionalKind::poisson_time(double aperture) {
  return {FunctionalType::poisson_time, aperture, 1};
}
FunctionalKind FunctionalKind::heat_grad(double aperture) {
  return {FunctionalType::heat_grad, aperture, 1};
}
FunctionalKind FunctionalKind::vertical(int k) {
  if (k < 1) throw std::invalid_argument("vertical: order must be >= 1");
  return {FunctionalType::vertical, 1.0, k};
}
FunctionalKind FunctionalKind::maximal_heat(double aperture) {
  if (aperture <= 0.0) throw std::invalid_argument("aperture must be > 0");
  return {FunctionalType::maximal_heat, aperture, 0};
}
FunctionalKind FunctionalKind::maximal_poisson(double aperture) {
  if (aperture <= 0.0) throw std::invalid_argument("aperture must be > 0");
  return {FunctionalType::maximal_poisson, aperture, 0};
}
FunctionalKind FunctionalKind::radial_heat(int M) {
  if (M < 0) throw std::invalid_argument("radial order must be >= 0");
  return {FunctionalType::radial_heat, 1.0, M};
}
FunctionalKind FunctionalKind::radial_poisson() {
  return {FunctionalType::radial_poisson, 1.0, 0};
}

namespace {

// unit-ball volume: 2 in 1D, pi in 2D
double unit_ball_volume(int dim) { return dim == 1 ? 2.0 : std::numbers::pi; }

Vec gradient_modulus(const EllipticOperator& op, const Vec& u) {
  const auto grads = op.gradient(u);
  Vec out = Vec::Zero(u.size());
  for (int i = 0; i < u.size(); ++i) {
    double s = 0.0;
    for (const auto& gcomp : grads) s += std::norm(gcomp(i));
    out(i) = Cplx(std::sqrt(s), 0.0);
  }
  return out;
}

// the semigroup samples a maximal functional averages
Vec maximal_kernel(const EllipticOperator& op, const FunctionalKind& kind,
                   double t, const Vec& f) {
  switch (kind.type) {
    case FunctionalType::maximal_heat:
      return op.heat_apply(t * t, f);
    case FunctionalType::maximal_poisson:
    case FunctionalType::radial_poisson:
      return op.poisson_apply(t, f);
    case FunctionalType::radial_heat:
      return kind.order == 0 ? op.heat_apply(t * t, f)
                             : op.heat_power_apply(t, kind.order, f);
    default:
      throw std::invalid_argument("not a maximal kind");
  }
}

}  // namespace

TentField functional_field(const EllipticOperator& op, const TimeGrid& tg,
                           const Vec& f, const FunctionalKind& kind) {
  if (!is_square_kind(kind.type))
    throw std::invalid_argument("functional_field: square kinds only");
  const Grid& g = op.grid();
  TentField F(g, tg);
  for (int j = 0; j < tg.size(); ++j) {
    const double t = tg.levels[j];
    Vec u;
    switch (kind.type) {
      case FunctionalType::heat_square:
      case FunctionalType::vertical:
        u = op.heat_power_apply(t, kind.order, f);
        break;
      case FunctionalType::poisson_time:
        u = op.apply_function(
            [t](Cplx mu) { return t * t * mu * std::exp(-t * std::sqrt(mu)); },
            f);
        break;
      case FunctionalType::poisson_grad:
        u = t * gradient_modulus(op, op.poisson_apply(t, f));
        break;
      case FunctionalType::heat_grad:
        u = t * gradient_modulus(op, op.heat_apply(t * t, f));
        break;
      default:
        break;
    }
    for (int i = 0; i < g.size(); ++i) F.at(j, i) = u(i);
  }
  return F;
}

Eigen::VectorXd apply_functional(const EllipticOperator& op, const TimeGrid& tg,
                                 const Vec& f, const FunctionalKind& kind) {
  const Grid& g = op.grid();

  if (is_square_kind(kind.type)) {
    const TentField F = functional_field(op, tg, f, kind);
    if (kind.type == FunctionalType::vertical) {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
      for (int i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (int j = 0; j < tg.size(); ++j) s += std::norm(F.at(j, i));
        out(i) = std::sqrt(s * tg.dlog);
      }
      return out;
    }
    return area_function(F, kind.beta);
  }

  // maximal kinds: sup of ball averages, radius beta*t (radial: beta = 1,
  // balls centered at x only)
  const bool radial = kind.type == FunctionalType::radial_heat ||
                      kind.type == FunctionalType::radial_poisson;
  const double beta = radial ? 1.0 : kind.beta;
  const ConeGeometry cone = make_cone(g, tg, beta);
  const double cn = unit_ball_volume(g.dim);

  Eigen::VectorXd best = Eigen::VectorXd::Zero(g.size());
  for (int j = 0; j < tg.size(); ++j) {
    const double t = tg.levels[j];
    const Vec u = maximal_kernel(op, kind, t, f);
    const double vol = cn * std::pow(beta * t, g.dim);
    // the same offset list serves as ball stencil and cone membership
    const auto& offs = cone.offsets[j];

    Eigen::VectorXd avg(g.size());
    for (int y = 0; y < g.size(); ++y) {
      const auto c = g.coords(y);
      double s = 0.0;
      for (const auto& d : offs)
        s += std::norm(u(g.index(c[0] + d[0], c[1] + d[1])));
      avg(y) = s * g.cell_measure() / vol;
    }

    if (radial) {
      for (int x = 0; x < g.size(); ++x) best(x) = std::max(best(x), avg(x));
    } else {
      for (int x = 0; x < g.size(); ++x) {
        const auto c = g.coords(x);
        for (const auto& d : offs) {
          const double v = avg(g.index(c[0] + d[0], c[1] + d[1]));
          if (v > best(x)) best(x) = v;
        }
      }
    }
  }
  return best.array().sqrt();
}

double functional_norm(const EllipticOperator& op, const TimeGrid& tg,
                       const Vec& f, const FunctionalKind& kind,
                       const OrliczFunction& w) {
  const Eigen::VectorXd v = apply_functional(op, tg, f, kind);
  std::vector<double> vals, wts;
  for (int i = 0; i < v.size(); ++i)
    if (v(i) > 0.0) {
      vals.push_back(v(i));
      wts.push_back(op.grid().cell_measure());
    }
  return luxemburg_norm(vals, wts, w);
}

}  // namespace tentlab
