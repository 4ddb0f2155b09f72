#ifndef RPURSUIT_LINESEARCH_HPP
#define RPURSUIT_LINESEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rpursuit/objectives.hpp"

namespace rpursuit {

enum class LineSearchMode { absolute, relative };

std::optional<LineSearchMode> parse_ls_mode(std::string_view name);
std::string_view to_string(LineSearchMode mode);

struct LineSearchConfig {
  LineSearchMode mode = LineSearchMode::absolute;
  /// Step-length units in absolute mode, a fraction in [0, 1) in relative mode.
  double mu = 1e-5;
  double initial_step = 1.0;
  int max_expansions = 64;

  /// Throws std::invalid_argument when the fields are inconsistent.
  void validate() const;
};

struct LineSearchResult {
  double h = 0.0;
  std::uint64_t fes_used = 0;
  /// Final bracket; it always contains an exact minimizer of the line
  /// restriction. In absolute mode `h` is its midpoint.
  double lo = 0.0;
  double hi = 0.0;
};

class LineSearchError : public std::runtime_error {
 public:
  enum class Kind { unbounded, invalid_value };
  LineSearchError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Comparison-only minimisation of a unimodal phi: R -> R.
///
/// Brackets by doubling from +-initial_step, then shrinks the bracket with
/// golden-section steps. Absolute mode stops at width <= 2 mu and returns
/// the midpoint, so |h - h*| <= mu. Relative mode keeps shrinking until the
/// half-width is at most mu/4 of |midpoint| and returns (1 - mu/2) times the
/// midpoint, which lands in [(1-mu) h*, h*] on the side of h*; a midpoint
/// below 1e-12 in magnitude returns 0.
///
/// Only order comparisons of phi values are used, so any strictly increasing
/// transform of phi yields the same result. Ties are resolved toward the
/// smaller |h|.
LineSearchResult minimize_unimodal(const std::function<double(double)>& phi,
                                   const LineSearchConfig& cfg);

/// Line search along x + h u for unit u. Every evaluation is charged to
/// `counter` and reported in fes_used.
LineSearchResult line_search(const ObjectiveSpec& spec, const Vector& x, const Vector& u,
                             const LineSearchConfig& cfg, FesCounter& counter);

}  // namespace rpursuit

#endif  // RPURSUIT_LINESEARCH_HPP
