#ifndef RPURSUIT_TYPES_HPP
#define RPURSUIT_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>

namespace rpursuit {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Per-run count of objective evaluations (FES). Never shared between runs.
class FesCounter {
 public:
  void add(std::uint64_t k = 1) { count_ += k; }
  std::uint64_t count() const { return count_; }
  void reset() { count_ = 0; }

 private:
  std::uint64_t count_ = 0;
};

}  // namespace rpursuit

#endif  // RPURSUIT_TYPES_HPP
