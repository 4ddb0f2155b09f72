#ifndef RPURSUIT_SAMPLING_HPP
#define RPURSUIT_SAMPLING_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "rpursuit/types.hpp"

namespace rpursuit {

/// Seeded generator. The engine is std::mt19937_64 (whose output sequence is
/// fixed by the standard); uniforms and normals are derived here rather than
/// through the implementation-defined std distributions, so a given seed
/// yields the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// SplitMix64 finaliser; used to decorrelate neighbouring seeds.
std::uint64_t mix_seed(std::uint64_t seed);

enum class SamplerKind { unit_sphere, signed_unit, gaussian };

std::optional<SamplerKind> parse_sampler(std::string_view name);
std::string_view to_string(SamplerKind kind);

/// Random search directions. One instance per run; never shared.
class DirectionSampler {
 public:
  DirectionSampler(SamplerKind kind, Index dim, std::uint64_t seed);

  Vector sample();
  void sample(Vector& out);

  SamplerKind kind() const { return kind_; }
  Index dim() const { return dim_; }
  Rng& rng() { return rng_; }

 private:
  SamplerKind kind_;
  Index dim_;
  Rng rng_;
};

}  // namespace rpursuit

#endif  // RPURSUIT_SAMPLING_HPP
