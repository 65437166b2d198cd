#include "tentlab/fixtures.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include <fmt/core.h>

namespace tentlab {

namespace {

std::uint64_t fnv1a_doubles(const double* data, size_t count) {
  std::uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < count; ++i) {
    unsigned char buf[sizeof(double)];
    std::memcpy(buf, data + i, sizeof(double));
    for (unsigned char c : buf) {
      h ^= c;
      h *= 1099511628211ull;
    }
  }
  return h;
}

Vec mode_field(const Grid& g, int kx, int ky) {
  Vec f(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const auto c = g.coords(i);
    const double ph = 2.0 * std::numbers::pi *
                      (kx * (c[0] + 0.5) + ky * (c[1] + 0.5)) / g.n_per_axis;
    f(i) = Cplx(std::cos(ph), std::sin(ph));
  }
  return f;
}

}  // namespace

std::uint64_t field_hash(const Vec& f) {
  // the complex vector is a contiguous (re, im) double array
  return fnv1a_doubles(reinterpret_cast<const double*>(f.data()),
                       2 * static_cast<size_t>(f.size()));
}

std::uint64_t field_hash(const TentField& F) {
  std::uint64_t h = 1469598103934665603ull;
  for (int j = 0; j < F.levels(); ++j)
    for (int i = 0; i < F.grid().size(); ++i) {
      const Cplx z = F.at(j, i);
      const double parts[2] = {z.real(), z.imag()};
      h ^= fnv1a_doubles(parts, 2);
      h *= 1099511628211ull;
    }
  return h;
}

Vec bandlimited_field(const Grid& g, int band_limit, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec f = Vec::Zero(g.size());
  // mode zero excluded: the field has exactly zero mean
  for (int kx = g.dim == 2 ? -band_limit : 1; kx <= band_limit; ++kx)
    for (int ky = g.dim == 2 ? -band_limit : 0;
         ky <= (g.dim == 2 ? band_limit : 0); ++ky) {
      if (g.dim == 1 && kx == 0) continue;
      if (g.dim == 2 && kx == 0 && ky == 0) continue;
      f += Cplx(gauss(rng), gauss(rng)) * mode_field(g, kx, ky);
    }
  return f;
}

TentField random_tent_field(const Grid& g, const TimeGrid& tg,
                            std::uint64_t seed, double sparsity) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TentField F(g, tg);
  for (int j = 0; j < F.levels(); ++j)
    for (int i = 0; i < g.size(); ++i)
      if (u(rng) < sparsity) F.at(j, i) = Cplx(gauss(rng), gauss(rng));
  return F;
}

std::vector<Fixture> fixture_corpus(const EllipticOperator& op,
                                    const TimeGrid& tg, std::uint64_t seed,
                                    const FixtureSpec& spec) {
  const Grid& g = op.grid();
  std::vector<Fixture> out;
  auto push = [&](std::string name, Vec f) {
    const std::uint64_t h = field_hash(f);
    out.push_back({std::move(name), std::move(f), h});
  };

  for (int r = 0; r < spec.n_random; ++r)
    push(fmt::format("band{}", r),
         bandlimited_field(g, spec.band_limit, seed + 1000 * r));

  for (int k : spec.modes) push(fmt::format("mode{}", k), mode_field(g, k, 0));

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<int> cell(0, g.size() - 1);
  for (int b = 0; b < spec.n_bumps; ++b) {
    const auto cc = g.center(cell(rng));
    const double sig = 4.0 * g.h();
    Vec f(g.size());
    for (int i = 0; i < g.size(); ++i) {
      const auto xc = g.center(i);
      double d2 = 0.0;
      for (int d = 0; d < g.dim; ++d) {
        double dd = std::abs(xc[d] - cc[d]);
        dd = std::min(dd, g.length - dd);
        d2 += dd * dd;
      }
      f(i) = Cplx(std::exp(-d2 / (2.0 * sig * sig)), 0.0);
    }
    push(fmt::format("bump{}", b), op.project_out_kernel(f));
  }

  std::uniform_int_distribution<int> level(tg.size() / 4, tg.size() / 2);
  for (int m = 0; m < spec.n_molecules; ++m) {
    TentField one(g, tg);
    one.at(level(rng), cell(rng)) = Cplx(1.0, 0.0);
    Vec f = synthesis_apply(op, one, spec.molecule_order);
    const double n2 = f.norm();
    if (n2 > 0.0) f /= n2;
    push(fmt::format("molecule{}", m), std::move(f));
  }
  return out;
}

}  // namespace tentlab
