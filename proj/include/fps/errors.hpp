#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fps {

struct band_not_found_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every scanned energy lies inside an allowed band: the medium has no gaps
// (trivial unit cell), so band edges are degenerate.
struct free_medium_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct out_of_band_error : std::domain_error {
  using std::domain_error::domain_error;
};

// A band was truncated by the scan window; carries the resonance indices that
// could not be located.
struct partial_band_error : std::runtime_error {
  partial_band_error(const std::string& msg, std::vector<int> missing)
      : std::runtime_error(msg), missing_j(std::move(missing)) {}
  std::vector<int> missing_j;
};

struct off_resonance_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 1 - |alpha|^2 below threshold: Bloch coefficients diverge at band edges.
struct degenerate_decomposition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singular_point_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fps
