#include "rpursuit/sampling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rpursuit {

std::uint64_t mix_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % bound;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double a, b, s;
  do {
    a = 2.0 * uniform() - 1.0;
    b = 2.0 * uniform() - 1.0;
    s = a * a + b * b;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = b * scale;
  return a * scale;
}

std::optional<SamplerKind> parse_sampler(std::string_view name) {
  if (name == "sphere" || name == "unit_sphere" || name == "unit-sphere") {
    return SamplerKind::unit_sphere;
  }
  if (name == "discrete" || name == "signed_unit" || name == "signed-unit") {
    return SamplerKind::signed_unit;
  }
  if (name == "gaussian" || name == "normal") return SamplerKind::gaussian;
  return std::nullopt;
}

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::unit_sphere: return "sphere";
    case SamplerKind::signed_unit: return "discrete";
    case SamplerKind::gaussian: return "gaussian";
  }
  return "unknown";
}

DirectionSampler::DirectionSampler(SamplerKind kind, Index dim, std::uint64_t seed)
    : kind_(kind), dim_(dim), rng_(seed) {
  if (dim < 1) throw std::invalid_argument("DirectionSampler: dimension must be >= 1");
}

Vector DirectionSampler::sample() {
  Vector u(dim_);
  sample(u);
  return u;
}

void DirectionSampler::sample(Vector& out) {
  out.resize(dim_);
  switch (kind_) {
    case SamplerKind::gaussian:
      for (Index i = 0; i < dim_; ++i) out(i) = rng_.normal();
      return;
    case SamplerKind::unit_sphere: {
      double norm = 0.0;
      // A zero normal vector has probability zero; resample if it happens.
      do {
        for (Index i = 0; i < dim_; ++i) out(i) = rng_.normal();
        norm = out.norm();
      } while (norm == 0.0);
      out /= norm;
      return;
    }
    case SamplerKind::signed_unit: {
      const std::uint64_t atom = rng_.below(2 * static_cast<std::uint64_t>(dim_));
      out.setZero();
      out(static_cast<Index>(atom / 2)) = (atom % 2 == 0) ? 1.0 : -1.0;
      return;
    }
  }
}

}  // namespace rpursuit
