#ifndef TENTLAB_FIXTURES_HPP
#define TENTLAB_FIXTURES_HPP

#include "tentlab/hardy.hpp"

namespace tentlab {

/// Bit-exact hash of a complex field (fnv1a over the raw doubles); used to
/// pin corpus reproducibility.
std::uint64_t field_hash(const Vec& f);
std::uint64_t field_hash(const TentField& F);

struct Fixture {
  std::string name;
  Vec values;
  std::uint64_t hash = 0;
};

struct FixtureSpec {
  int n_random = 4;       // band-limited random fields
  int band_limit = 5;     // highest mode in the random fields
  std::vector<int> modes = {1, 2, 4};  // single-eigenmode fixtures
  int n_bumps = 2;        // mean-corrected gaussian bumps
  int n_molecules = 1;    // synthesized from one-cell half-space data
  int molecule_order = 2;
};

/// Deterministic fixture set: same (seed, spec) gives bit-identical fields.
std::vector<Fixture> fixture_corpus(const EllipticOperator& op,
                                    const TimeGrid& tg, std::uint64_t seed,
                                    const FixtureSpec& spec = {});

/// Mean-zero random field with Fourier support in modes 1..band_limit.
Vec bandlimited_field(const Grid& g, int band_limit, std::uint64_t seed);

/// Dense or sparse random half-space field (each sample kept with the given
/// probability).
TentField random_tent_field(const Grid& g, const TimeGrid& tg,
                            std::uint64_t seed, double sparsity = 1.0);

}  // namespace tentlab

#endif  // TENTLAB_FIXTURES_HPP
