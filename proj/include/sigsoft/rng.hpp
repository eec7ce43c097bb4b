// Deterministic PRNG shared by every module. The algorithm is fixed so that
// seeded runs reproduce bit-for-bit across platforms: xoshiro256++ state
// seeded from a splitmix64 stream, uniforms from the top 53 bits, normals via
// Box-Muller with the sine mate cached.
#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

namespace sigsoft {

class Prng {
 public:
  explicit Prng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1): (next_u64() >> 11) * 2^-53.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal. Each Box-Muller pair yields the cosine draw first; the
  // sine draw is returned by the following call.
  double gaussian();

  // Decorrelated seed for substream `index` of a run seeded with `base`:
  // one splitmix64 output taken from state base + (index + 1) * golden ratio.
  static std::uint64_t child_seed(std::uint64_t base, std::uint64_t index);

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// rows x cols matrix of scale * N(0,1) draws, filled row by row.
Eigen::MatrixXd gaussian_matrix(Prng& rng, Eigen::Index rows,
                                Eigen::Index cols, double scale);

// rows x cols matrix of uniform draws on [lo, hi), filled row by row.
Eigen::MatrixXd uniform_matrix(Prng& rng, Eigen::Index rows, Eigen::Index cols,
                               double lo, double hi);

}  // namespace sigsoft
