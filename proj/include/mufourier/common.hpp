#ifndef MUFOURIER_COMMON_HPP
#define MUFOURIER_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mufourier {

using Point = std::span<const double>;

/// Raised when expression or scenario text cannot be parsed.
/// `position` is a byte offset into the source (0-based).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// Raised when evaluation leaves the domain of a function: log or sqrt of
/// a negative argument, division by zero, non-integer power of a negative
/// base, or a non-finite result. Domain problems surface as errors rather
/// than NaN so that downstream integrals fail loudly.
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a refining integration cannot reach the requested tolerance
/// within its subdivision budget and the caller asked for strict behavior.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fixed-shape pairwise tree reduction. The summation tree depends only on
/// the length of the input, so results are independent of how the terms
/// were produced and reproducible across runs.
double pairwise_sum(std::span<const double> xs);

/// SplitMix64 step; used to derive independent per-cell random streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace mufourier

#endif
