#pragma once

#include "csvto/types.hpp"

#include <cstdint>
#include <random>

namespace csvto {

/// Deterministic random stream. Distributions are implemented here rather
/// than with std:: distribution objects, whose output is
/// implementation-defined; a seeded Rng must produce the same stream on any
/// platform for the reproducibility contract to hold.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; pairs are generated eagerly so the
  /// consumption pattern is fixed.
  double normal();

  Vec normal_vec(int n, double sigma = 1.0);
  Mat normal_mat(int rows, int cols, double sigma = 1.0);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace csvto
