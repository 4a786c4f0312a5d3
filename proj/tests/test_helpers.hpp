#pragma once

#include <cmath>
#include <vector>

#include "ineqbias/mixture.hpp"

namespace ineqbias::test {

/// Parameter sets shared by the property tests.
inline std::vector<MixtureParams> standard_models() {
  return {
      canonicalize({1.0}, {1.0}, 1.0),
      canonicalize({0.5, 0.5}, {1.0, 3.0}, 1.0),
      canonicalize({0.3, 0.7}, {0.5, 2.0}, 2.0),
      canonicalize({0.2, 0.3, 0.5}, {0.7, 2.5, 6.0}, 0.5),
      canonicalize({0.6, 0.4}, {4.0, 9.0}, 3.0),
      canonicalize({0.1, 0.1, 0.8}, {0.3, 1.2, 1.7}, 1.0),
  };
}

struct RunningStats {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  double variance() const { return m2 / (count - 1.0); }
  double standard_error() const { return std::sqrt(variance() / count); }
};

}  // namespace ineqbias::test
