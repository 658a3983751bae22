#pragma once

#include <cstdint>
#include <vector>

namespace ubq {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares of y against x. Needs at least two distinct x values.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// SplitMix64 step; used to derive independent per-task seeds from one root seed.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

}  // namespace ubq
